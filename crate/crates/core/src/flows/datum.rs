//! The localized tent-profile initial data and their closed-form norms.
//!
//! Shear data are `phi(y - y0) sin x` with `phi` a tent of half-width
//! `kappa^beta`; circular data are `phi(r - 3 kappa^beta) sin theta`,
//! supported in the annulus `r in [2 kappa^beta, 4 kappa^beta]`. Both have
//! zero average along every streamline.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::Error;
use crate::flows::{critical_points, Coord, Domain, VelocityField, TAU};
use crate::Result;

/// Piecewise-linear bump `phi(z) = (w - |z|)/w` on `[-w, w]`, zero elsewhere.
/// Peak 1, Lipschitz constant `1/w`, and `int |phi|^p dz = 2w/(p+1)` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TentProfile {
    pub half_width: f64,
}

impl TentProfile {
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        (1.0 - z.abs() / self.half_width).max(0.0)
    }

    /// `int |phi|^p dz`, exact for every `p >= 1`.
    pub fn lp_integral(&self, p: f64) -> f64 {
        2.0 * self.half_width / (p + 1.0)
    }

    pub fn lipschitz_const(&self) -> f64 {
        1.0 / self.half_width
    }
}

/// Which streamline geometry the datum lives on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum DatumFamily {
    /// `phi(y - center) sin x`; `periodic` wraps `y - center` on the torus.
    Shear { center: f64, periodic: bool },
    /// `phi(r - center_radius) sin theta`.
    Circular { center_radius: f64 },
}

/// A `kappa`-dependent localized initial datum with unit amplitude by default.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialDatum {
    pub family: DatumFamily,
    pub kappa: f64,
    /// Width exponent: half-width is `kappa^beta`.
    pub beta: f64,
    pub tent: TentProfile,
    pub amplitude: f64,
}

impl InitialDatum {
    pub fn half_width(&self) -> f64 {
        self.tent.half_width
    }

    /// Support interval in the cross-streamline coordinate (`y` or `r`).
    pub fn support(&self) -> (f64, f64) {
        let w = self.tent.half_width;
        match self.family {
            DatumFamily::Shear { center, .. } => (center - w, center + w),
            DatumFamily::Circular { center_radius } => (center_radius - w, center_radius + w),
        }
    }

    /// Tent amplitude at cross-coordinate `c` (`y` for shear, `r` circular).
    #[inline]
    pub fn profile_at(&self, c: f64) -> f64 {
        match self.family {
            DatumFamily::Shear { center, periodic } => {
                let mut z = c - center;
                if periodic {
                    z = wrap_centered(z);
                }
                self.amplitude * self.tent.eval(z)
            }
            DatumFamily::Circular { center_radius } => {
                self.amplitude * self.tent.eval(c - center_radius)
            }
        }
    }

    /// Evaluate the datum at a point of the matching coordinate kind.
    pub fn eval(&self, point: &Coord) -> f64 {
        match (self.family, point) {
            (DatumFamily::Shear { .. }, Coord::Cartesian { x, y }) => {
                self.profile_at(*y) * x.sin()
            }
            (DatumFamily::Circular { .. }, Coord::Polar { r, theta }) => {
                self.profile_at(*r) * theta.sin()
            }
            _ => 0.0,
        }
    }

    /// `||rho_0||^2_{L^2}` from the closed-form identities.
    pub fn l2_norm_sq(&self) -> f64 {
        datum_norms(self, 2.0).lp_norm_sq
    }
}

fn wrap_centered(z: f64) -> f64 {
    let w = z.rem_euclid(TAU);
    if w >= std::f64::consts::PI {
        w - TAU
    } else {
        w
    }
}

/// Closed-form norms of a datum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumNorms {
    /// `||rho_0||^2_{L^p}`.
    pub lp_norm_sq: f64,
    /// Sup-norm squared of the along-streamline derivative (`x` or `theta`).
    pub grad_x_inf_sq: f64,
    /// Sup-norm squared of the cross-streamline derivative (`y` or `r`).
    pub grad_y_inf_sq: f64,
}

/// `int_0^{2pi} |sin|^p dx = 2 sqrt(pi) Gamma((p+1)/2) / Gamma(p/2 + 1)`.
fn sin_lp_integral(p: f64) -> f64 {
    2.0 * std::f64::consts::PI.sqrt()
        * (ln_gamma((p + 1.0) / 2.0) - ln_gamma(p / 2.0 + 1.0)).exp()
}

/// Exact `L^p` and gradient-sup norms. The circular weight is `r dr`; the
/// odd moment of the tent around its center cancels, leaving
/// `int |phi(r - 3w)|^p r dr = 6 w^2 / (p+1)` exactly.
pub fn datum_norms(datum: &InitialDatum, p: f64) -> DatumNorms {
    let w = datum.tent.half_width;
    let a = datum.amplitude;
    let cross = match datum.family {
        DatumFamily::Shear { .. } => datum.tent.lp_integral(p),
        DatumFamily::Circular { center_radius } => datum.tent.lp_integral(p) * center_radius,
    };
    let lp_norm_sq = a * a * (cross * sin_lp_integral(p)).powf(2.0 / p);
    DatumNorms {
        lp_norm_sq,
        grad_x_inf_sq: a * a,
        grad_y_inf_sq: a * a / (w * w),
    }
}

/// Construct the localized datum for a field's family:
///
/// * critical shear: centered at the flattest critical point (smallest `y`
///   among ties), `beta = 1/(n+2)` with the field's declared order `n`;
/// * Lipschitz shear: `beta = 1/3`, centered at `y = 0` (the center is
///   immaterial for the dissipation bound, so pick a fixed one);
/// * Weierstrass shear: `beta = 1/(alpha+2)`, centered at `y = 0`;
/// * circular: `beta = 1/(q+2)`, tent at radius `3 kappa^beta`.
pub fn make_initial_datum(
    field: &VelocityField,
    domain: &Domain,
    kappa: f64,
) -> Result<InitialDatum> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Parameter(format!("kappa = {kappa} outside (0, 1)")));
    }
    field.validate()?;
    let periodic = domain.is_periodic_y();
    let (beta, family) = match field {
        VelocityField::CriticalShear { profile, order } => {
            let pts = critical_points(profile, domain, 4096)?;
            let max_order = pts.iter().map(|p| p.order).max().ok_or_else(|| {
                Error::Parameter("critical shear profile has no critical points".into())
            })?;
            let center = pts
                .iter()
                .filter(|p| p.order == max_order)
                .map(|p| p.y)
                .fold(f64::INFINITY, f64::min);
            let beta = 1.0 / (*order as f64 + 2.0);
            (beta, DatumFamily::Shear { center, periodic })
        }
        VelocityField::LipschitzShear { .. } => {
            (1.0 / 3.0, DatumFamily::Shear { center: 0.0, periodic })
        }
        VelocityField::WeierstrassShear { alpha, .. } => {
            (1.0 / (alpha + 2.0), DatumFamily::Shear { center: 0.0, periodic })
        }
        VelocityField::Circular { q } => {
            let beta = 1.0 / (q + 2.0);
            (beta, DatumFamily::Circular { center_radius: 3.0 * kappa.powf(beta) })
        }
    };
    let w = kappa.powf(beta);
    if let Domain::TorusStrip { half_width } = domain {
        if let DatumFamily::Shear { center, .. } = family {
            if center.abs() + w > *half_width {
                return Err(Error::Domain(
                    "datum support exceeds the strip truncation".into(),
                ));
            }
        }
    }
    Ok(InitialDatum {
        family,
        kappa,
        beta,
        tent: TentProfile { half_width: w },
        amplitude: 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::Profile;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sin_field() -> VelocityField {
        VelocityField::CriticalShear { profile: Profile::Sin, order: 1 }
    }

    #[test]
    fn sin_datum_sits_at_first_critical_point() {
        let d = make_initial_datum(&sin_field(), &Domain::Torus2, 1e-3).unwrap();
        let DatumFamily::Shear { center, .. } = d.family else { panic!() };
        assert!((center - FRAC_PI_2).abs() < 1e-8);
        assert!((d.beta - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.half_width() - 0.1).abs() < 1e-12);
        // datum at its center with x = pi/2 evaluates to the peak
        let v = d.eval(&Coord::Cartesian { x: FRAC_PI_2, y: center });
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sin_cubed_datum_targets_the_flat_point() {
        let f = VelocityField::CriticalShear { profile: Profile::SinPow(3), order: 3 };
        let d = make_initial_datum(&f, &Domain::Torus2, 1e-3).unwrap();
        let DatumFamily::Shear { center, .. } = d.family else { panic!() };
        // flattest points are y = 0 and y = pi; smallest wins
        assert!(center.abs() < 1e-8);
        assert!((d.beta - 0.2).abs() < 1e-15);
    }

    #[test]
    fn circular_datum_annulus() {
        let f = VelocityField::Circular { q: 2.0 };
        let d = make_initial_datum(&f, &Domain::PolarPlane { r_max: 2.0 }, 1e-4).unwrap();
        assert!((d.beta - 0.25).abs() < 1e-15);
        let (lo, hi) = d.support();
        assert!((lo - 0.2).abs() < 1e-12 && (hi - 0.4).abs() < 1e-12);
    }

    #[test]
    fn kappa_range_enforced() {
        assert!(make_initial_datum(&sin_field(), &Domain::Torus2, 0.0).is_err());
        assert!(make_initial_datum(&sin_field(), &Domain::Torus2, 1.0).is_err());
    }

    #[test]
    fn norm_identities() {
        let d = make_initial_datum(&sin_field(), &Domain::Torus2, 1e-3).unwrap();
        // ||rho0||^2_{L2} = pi * 2 w / 3 with w = 0.1
        let n = datum_norms(&d, 2.0);
        assert!((n.lp_norm_sq - PI * 2.0 * 0.1 / 3.0).abs() < 1e-12);
        assert!((n.grad_x_inf_sq - 1.0).abs() < 1e-15);
        // ||d_y rho0||^2_inf = kappa^{-2/3} = 100
        assert!((n.grad_y_inf_sq - 100.0).abs() < 1e-9);
    }

    #[test]
    fn tent_lp_identity_against_quadrature() {
        let tent = TentProfile { half_width: 0.37 };
        for p in [1.0, 2.0, 4.0] {
            let n = 200_000;
            let h = 2.0 * tent.half_width / n as f64;
            let mut q = 0.0;
            for i in 0..n {
                let z = -tent.half_width + (i as f64 + 0.5) * h;
                q += tent.eval(z).abs().powf(p) * h;
            }
            assert!(
                (q - tent.lp_integral(p)).abs() < 1e-9,
                "p = {p}: {q} vs {}",
                tent.lp_integral(p)
            );
        }
    }

    #[test]
    fn zero_streamline_average() {
        // x-average vanishes for every y by the sin factor; check by midpoint
        // quadrature at a few cross sections
        let d = make_initial_datum(&sin_field(), &Domain::Torus2, 1e-2).unwrap();
        let (lo, hi) = d.support();
        for j in 0..5 {
            let y = lo + (hi - lo) * j as f64 / 4.0;
            let n = 256;
            let mut s = 0.0;
            for i in 0..n {
                let x = TAU * (i as f64 + 0.5) / n as f64;
                s += d.eval(&Coord::Cartesian { x, y }) * TAU / n as f64;
            }
            assert!(s.abs() <= 1e-12 * d.amplitude);
        }
    }

    #[test]
    fn sin_lp_integral_known_values() {
        assert!((sin_lp_integral(2.0) - PI).abs() < 1e-12);
        assert!((sin_lp_integral(1.0) - 4.0).abs() < 1e-12);
        assert!((sin_lp_integral(4.0) - 3.0 * PI / 4.0).abs() < 1e-12);
    }
}
