//! From decay curves to measured enhanced-diffusion exponents.

pub mod bounds;
pub mod sharpness;

pub use bounds::{bound_sweep, verify_upper_bound, BoundCheck, BoundForm, BoundSweep};
pub use sharpness::{
    sharpness_constraint, BoundShape, SharpnessCheck, SharpnessReport, SharpnessVerdict,
};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::flows::VelocityField;
use crate::stats;
use crate::Result;

/// Provenance tags for a decay curve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub flow: String,
    pub datum: String,
}

/// Squared-norm history of one solve at one diffusivity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub kappa: f64,
    pub times: Vec<f64>,
    pub norm_sq: Vec<f64>,
    pub meta: CurveMeta,
}

impl DecayCurve {
    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.norm_sq.len() || self.times.is_empty() {
            return Err(Error::Parameter("decay curve shape mismatch".into()));
        }
        if self.norm_sq.iter().any(|&n| !(n > 0.0)) {
            return Err(Error::Parameter("decay curve norms must be positive".into()));
        }
        if self.norm_sq.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12)) {
            return Err(Error::Instability("decay curve increases".into()));
        }
        Ok(())
    }
}

/// First time the squared norm falls to `lambda` times its initial value, by
/// linear interpolation in the log of the norm (exact for exponential decay).
pub fn mixing_time(curve: &DecayCurve, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Parameter(format!("lambda = {lambda} outside (0, 1]")));
    }
    curve.validate()?;
    let target = lambda * curve.norm_sq[0];
    if lambda == 1.0 {
        return Ok(0.0);
    }
    let hit = curve.norm_sq.iter().position(|&n| n <= target);
    let Some(i) = hit else {
        // extrapolate a required horizon from the last recorded decade
        let horizon = *curve.times.last().unwrap();
        let n = curve.norm_sq.len();
        let j = n.saturating_sub(n / 4).max(1).min(n - 1) - 1;
        let slope = (curve.norm_sq[n - 1].ln() - curve.norm_sq[j].ln())
            / (curve.times[n - 1] - curve.times[j]);
        let required = if slope < 0.0 {
            horizon + (target.ln() - curve.norm_sq[n - 1].ln()) / slope
        } else {
            f64::INFINITY
        };
        return Err(Error::HorizonTooShort { horizon, required });
    };
    if i == 0 {
        return Ok(0.0);
    }
    let (t0, t1) = (curve.times[i - 1], curve.times[i]);
    let (l0, l1) = (curve.norm_sq[i - 1].ln(), curve.norm_sq[i].ln());
    Ok(t0 + (t1 - t0) * (target.ln() - l0) / (l1 - l0))
}

/// Theoretical enhanced-diffusion exponent of a flow family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalRate {
    /// `t_mix ~ kappa^{-exponent}`.
    pub exponent: f64,
    /// Whether the known rate carries a logarithmic correction.
    pub log_corrected: bool,
    pub family: String,
}

pub fn theoretical_exponent(field: &VelocityField) -> TheoreticalRate {
    match field {
        VelocityField::CriticalShear { order, .. } => TheoreticalRate {
            exponent: *order as f64 / (*order as f64 + 2.0),
            log_corrected: *order >= 2,
            family: format!("critical_shear(n={order})"),
        },
        VelocityField::WeierstrassShear { alpha, .. } => TheoreticalRate {
            exponent: alpha / (alpha + 2.0),
            log_corrected: false,
            family: format!("weierstrass(alpha={alpha})"),
        },
        VelocityField::LipschitzShear { .. } => TheoreticalRate {
            exponent: 1.0 / 3.0,
            log_corrected: false,
            family: "lipschitz_shear".into(),
        },
        VelocityField::Circular { q } => TheoreticalRate {
            exponent: q / (q + 2.0),
            log_corrected: *q > 1.0,
            family: format!("circular(q={q})"),
        },
    }
}

/// Power-law fit `t_mix = prefactor * kappa^{-exponent}` over a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub kappas: Vec<f64>,
    pub mixing_times: Vec<f64>,
    pub exponent: f64,
    pub prefactor: f64,
    /// Max absolute deviation of the fit in log space.
    pub residual: f64,
    pub theory: Option<TheoreticalRate>,
}

impl RateFit {
    pub fn with_theory(mut self, theory: TheoreticalRate) -> Self {
        self.theory = Some(theory);
        self
    }
}

/// Least-squares slope of `log t_mix` against `log(1/kappa)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::InsufficientSweep(format!(
            "{} kappa values; need at least 4",
            points.len()
        )));
    }
    let kmin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let kmax = points.iter().map(|p| p.0).fold(0.0f64, f64::max);
    if kmax / kmin < 100.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientSweep(format!(
            "kappa span {:.3} decades; need at least 2",
            (kmax / kmin).log10()
        )));
    }
    if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(Error::Parameter("fit needs positive kappas and mixing times".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| (1.0 / p.0).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = stats::linear_fit(&xs, &ys);
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (slope * x + intercept - y).abs())
        .fold(0.0, f64::max);
    Ok(RateFit {
        kappas: points.iter().map(|p| p.0).collect(),
        mixing_times: points.iter().map(|p| p.1).collect(),
        exponent: slope,
        prefactor: intercept.exp(),
        residual,
        theory: None,
    })
}
