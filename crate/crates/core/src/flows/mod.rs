//! Velocity fields, their critical-point structure, and the localized
//! `kappa`-dependent initial data with exact norm bookkeeping.

pub mod critical;
pub mod datum;
pub mod profile;

pub use critical::{critical_points, CriticalPoint};
pub use datum::{datum_norms, make_initial_datum, DatumFamily, DatumNorms, InitialDatum, TentProfile};
pub use profile::{sin_power_series, weierstrass_series, Profile, SampledProfile, TrigSeries};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Computational domain. Torus sides are exactly `2 pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `T x T`, both periods `2 pi`.
    Torus2,
    /// `T x [-half_width, half_width]` truncation of `T x R`.
    TorusStrip { half_width: f64 },
    /// `r in (0, r_max]`, `theta in T`.
    PolarPlane { r_max: f64 },
}

impl Domain {
    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Torus2 => Ok(()),
            Domain::TorusStrip { half_width } if *half_width > 0.0 => Ok(()),
            Domain::PolarPlane { r_max } if *r_max > 0.0 => Ok(()),
            _ => Err(Error::Parameter("domain lengths must be positive".into())),
        }
    }

    /// The range of the cross-streamline coordinate for shear domains.
    pub fn y_range(&self) -> Result<(f64, f64)> {
        match self {
            Domain::Torus2 => Ok((0.0, TAU)),
            Domain::TorusStrip { half_width } => Ok((-half_width, *half_width)),
            Domain::PolarPlane { .. } => {
                Err(Error::Domain("polar domain has no shear coordinate".into()))
            }
        }
    }

    pub fn is_periodic_y(&self) -> bool {
        matches!(self, Domain::Torus2)
    }

    pub fn contains(&self, point: &Coord) -> bool {
        match (self, point) {
            (Domain::Torus2, Coord::Cartesian { .. }) => true,
            (Domain::TorusStrip { half_width }, Coord::Cartesian { y, .. }) => {
                y.abs() <= *half_width
            }
            (Domain::PolarPlane { r_max }, Coord::Polar { r, .. }) => *r > 0.0 && *r <= *r_max,
            _ => false,
        }
    }
}

/// A point, in the coordinates natural to the flow family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Cartesian { x: f64, y: f64 },
    Polar { r: f64, theta: f64 },
}

/// One of the flow families: shear with critical points, Hoelder (lacunary)
/// shear, Lipschitz shear, or circular flow with angular speed `r^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VelocityField {
    CriticalShear {
        profile: Profile,
        /// Declared order of the flattest critical point: the smallest `n`
        /// with `u^(n)(y_crit) != 0` there. Sets the datum width exponent.
        order: u32,
    },
    WeierstrassShear {
        alpha: f64,
        /// Truncation level of the lacunary series.
        levels: u32,
    },
    LipschitzShear {
        profile: Profile,
        lipschitz_const: f64,
    },
    Circular {
        /// Angular speed exponent `q >= 1`.
        q: f64,
    },
}

impl VelocityField {
    /// Weierstrass shear truncated so the neglected tail `3^{-alpha L}` sits
    /// far below the dissipative scale `kappa^{1/(alpha+2)}`.
    pub fn weierstrass_for(alpha: f64, kappa: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha = {alpha} outside (0, 1)")));
        }
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::Parameter(format!("kappa = {kappa} outside (0, 1)")));
        }
        let beta = 1.0 / (alpha + 2.0);
        let levels = (kappa.powf(-beta).ln() / 3f64.ln()).ceil() as u32 + 2;
        Ok(VelocityField::WeierstrassShear { alpha, levels })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VelocityField::CriticalShear { order, .. } if *order == 0 => {
                Err(Error::Parameter("critical shear order must be >= 1".into()))
            }
            VelocityField::WeierstrassShear { alpha, levels } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    Err(Error::Parameter(format!("alpha = {alpha} outside (0, 1)")))
                } else if *levels == 0 {
                    Err(Error::Parameter("weierstrass truncation needs >= 1 level".into()))
                } else {
                    Ok(())
                }
            }
            VelocityField::LipschitzShear { lipschitz_const, .. } if *lipschitz_const <= 0.0 => {
                Err(Error::Parameter("lipschitz constant must be positive".into()))
            }
            VelocityField::Circular { q } if !(*q >= 1.0) => {
                Err(Error::Parameter(format!("circular exponent q = {q} must be >= 1")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_shear(&self) -> bool {
        !matches!(self, VelocityField::Circular { .. })
    }

    /// Compile a shear field into a self-contained evaluator for hot loops.
    pub fn shear_eval(&self) -> Result<ShearEval> {
        match self {
            VelocityField::CriticalShear { profile, .. }
            | VelocityField::LipschitzShear { profile, .. } => Ok(ShearEval::from_profile(profile)),
            VelocityField::WeierstrassShear { alpha, levels } => {
                Ok(ShearEval::Trig(weierstrass_series(*alpha, *levels)))
            }
            VelocityField::Circular { .. } => {
                Err(Error::Parameter("circular flow has no shear profile".into()))
            }
        }
    }

    /// Angular speed `r^q` of the circular flow.
    pub fn angular_speed(&self, r: f64) -> Result<f64> {
        match self {
            VelocityField::Circular { q } => Ok(r.powf(*q)),
            _ => Err(Error::Parameter("not a circular flow".into())),
        }
    }
}

/// Flattened shear evaluator; cheap to call from trajectory and solver loops.
#[derive(Clone, Debug)]
pub enum ShearEval {
    Zero,
    Const(f64),
    Sin,
    SinPow(i32),
    Monomial(i32),
    Trig(TrigSeries),
    Sampled(SampledProfile),
}

impl ShearEval {
    fn from_profile(p: &Profile) -> Self {
        match p {
            Profile::Zero => ShearEval::Zero,
            Profile::Const(c) => ShearEval::Const(*c),
            Profile::Sin => ShearEval::Sin,
            Profile::SinPow(k) => ShearEval::SinPow(*k as i32),
            Profile::Monomial(n) => ShearEval::Monomial(*n as i32),
            Profile::Sampled(s) => ShearEval::Sampled(s.clone()),
        }
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            ShearEval::Zero => 0.0,
            ShearEval::Const(c) => *c,
            ShearEval::Sin => y.sin(),
            ShearEval::SinPow(k) => y.sin().powi(*k),
            ShearEval::Monomial(n) => y.powi(*n),
            ShearEval::Trig(s) => s.eval(y),
            ShearEval::Sampled(s) => s.eval(y),
        }
    }

    /// Sup of `|u|` over a scan of the given range (exact bound for series).
    pub fn sup_abs(&self, y_lo: f64, y_hi: f64) -> f64 {
        match self {
            ShearEval::Zero => 0.0,
            ShearEval::Const(c) => c.abs(),
            ShearEval::Sin | ShearEval::SinPow(_) => 1.0,
            ShearEval::Trig(s) => s.sup_bound(),
            _ => {
                let n = 4096;
                (0..=n)
                    .map(|i| self.eval(y_lo + (y_hi - y_lo) * i as f64 / n as f64).abs())
                    .fold(0.0, f64::max)
            }
        }
    }
}

/// Speed of the flow at a point: `u(y)` for shears, angular speed `r^q` for
/// circular flows. Fails if the point lies outside `domain`.
pub fn eval_velocity(field: &VelocityField, domain: &Domain, point: &Coord) -> Result<f64> {
    if !domain.contains(point) {
        return Err(Error::Domain(format!("{point:?} outside {domain:?}")));
    }
    match (field, point) {
        (VelocityField::Circular { q }, Coord::Polar { r, .. }) => Ok(r.powf(*q)),
        (f, Coord::Cartesian { y, .. }) if f.is_shear() => Ok(f.shear_eval()?.eval(*y)),
        _ => Err(Error::Domain("coordinate kind does not match flow family".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_velocity_examples() {
        let torus = Domain::Torus2;
        // Weierstrass at y = 0: every sin(3^l * 0) = 0
        let w = VelocityField::WeierstrassShear { alpha: 0.5, levels: 20 };
        let v = eval_velocity(&w, &torus, &Coord::Cartesian { x: 0.0, y: 0.0 }).unwrap();
        assert_eq!(v, 0.0);

        let s = VelocityField::CriticalShear { profile: Profile::Sin, order: 1 };
        let v = eval_velocity(&s, &torus, &Coord::Cartesian { x: 0.0, y: std::f64::consts::FRAC_PI_2 })
            .unwrap();
        assert!((v - 1.0).abs() < 1e-15);

        let c = VelocityField::Circular { q: 2.0 };
        let plane = Domain::PolarPlane { r_max: 2.0 };
        let v = eval_velocity(&c, &plane, &Coord::Polar { r: 0.5, theta: 0.0 }).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn eval_velocity_rejects_out_of_domain() {
        let strip = Domain::TorusStrip { half_width: 2.0 };
        let s = VelocityField::LipschitzShear { profile: Profile::Monomial(1), lipschitz_const: 1.0 };
        let err = eval_velocity(&s, &strip, &Coord::Cartesian { x: 0.0, y: 3.0 });
        assert!(matches!(err, Err(Error::Domain(_))));
        let plane = Domain::PolarPlane { r_max: 1.0 };
        let c = VelocityField::Circular { q: 1.0 };
        assert!(eval_velocity(&c, &plane, &Coord::Polar { r: 0.0, theta: 0.0 }).is_err());
    }

    #[test]
    fn weierstrass_auto_truncation_scales_with_kappa() {
        let a = VelocityField::weierstrass_for(0.5, 1e-3).unwrap();
        let b = VelocityField::weierstrass_for(0.5, 1e-5).unwrap();
        let (VelocityField::WeierstrassShear { levels: la, .. },
             VelocityField::WeierstrassShear { levels: lb, .. }) = (a, b)
        else {
            unreachable!()
        };
        assert!(lb > la);
        assert!(la >= 3);
    }

    #[test]
    fn validation_catches_bad_parameters() {
        assert!(VelocityField::Circular { q: 0.5 }.validate().is_err());
        assert!(VelocityField::WeierstrassShear { alpha: 1.5, levels: 3 }.validate().is_err());
        assert!(Domain::TorusStrip { half_width: -1.0 }.validate().is_err());
    }
}
