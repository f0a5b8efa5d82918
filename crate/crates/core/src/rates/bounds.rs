//! Fitting dissipation curves against the theoretical bound forms.
//!
//! A curve `D(t)` is tested against `C ||rho_0||^2 g(kappa^p t)`: the fitted
//! constant is the max of `D / (||rho_0||^2 g)` over recorded times inside
//! the form's validity window. A bounded spread of fitted constants across a
//! `kappa` sweep is the numerical evidence that the exponent `p` is right.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fdr::DissipationCurve;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum BoundForm {
    /// `g(x) = x` (Hoelder/Lipschitz bound).
    Linear,
    /// `g(x) = x + x^2 + x^{n+2}` (critical-point bound).
    Critical { n: u32 },
    /// `g(x) = sqrt(x) + x |ln((25 - 4x)/(1 - 4x))| + |ln(1 - 4x/25)|`,
    /// valid for `x < 1/4` (circular bound).
    Circular,
}

impl BoundForm {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BoundForm::Linear => x,
            BoundForm::Critical { n } => x + x * x + x.powi(*n as i32 + 2),
            BoundForm::Circular => {
                x.sqrt()
                    + x * ((25.0 - 4.0 * x) / (1.0 - 4.0 * x)).ln().abs()
                    + (1.0 - 4.0 * x / 25.0).ln().abs()
            }
        }
    }

    /// Upper end of the validity window in the scaled time `x = kappa^p t`.
    pub fn validity_max(&self) -> f64 {
        match self {
            BoundForm::Linear | BoundForm::Critical { .. } => 1.0,
            BoundForm::Circular => 0.25,
        }
    }
}

/// Result of fitting one curve against a bound form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub kappa: f64,
    pub c_fit: f64,
    /// Recorded times that fell inside the validity window.
    pub times_used: usize,
}

/// `C_fit = max_t D(t) / (||rho_0||^2 g(kappa^p t))` over the validity
/// window `0 < kappa^p t <= x_max`.
pub fn verify_upper_bound(
    curve: &DissipationCurve,
    kappa: f64,
    datum_norm_sq: f64,
    form: &BoundForm,
    p: f64,
) -> Result<BoundCheck> {
    if !(datum_norm_sq > 0.0) {
        return Err(Error::Parameter("datum norm must be positive".into()));
    }
    let x_max = form.validity_max();
    let scale = kappa.powf(p);
    let mut c_fit: f64 = 0.0;
    let mut used = 0usize;
    for (&t, &d) in curve.times.iter().zip(&curve.values) {
        let x = scale * t;
        if x <= 0.0 || x > x_max {
            continue;
        }
        let g = form.eval(x);
        if g <= 0.0 {
            continue;
        }
        used += 1;
        c_fit = c_fit.max(d / (datum_norm_sq * g));
    }
    if used == 0 {
        return Err(Error::EmptyValidityWindow(format!(
            "no recorded times with 0 < kappa^{p} * t <= {x_max}"
        )));
    }
    Ok(BoundCheck { kappa, c_fit, times_used: used })
}

/// Spread of fitted constants across a sweep (`max / min`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSweep {
    pub checks: Vec<BoundCheck>,
    pub spread: f64,
}

pub fn bound_sweep(checks: Vec<BoundCheck>) -> Result<BoundSweep> {
    if checks.is_empty() {
        return Err(Error::Parameter("bound sweep needs at least one check".into()));
    }
    let max = checks.iter().map(|c| c.c_fit).fold(0.0f64, f64::max);
    let min = checks.iter().map(|c| c.c_fit).fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 {
        max / min
    } else if max == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Ok(BoundSweep { checks, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdr::CurveSource;

    fn curve(times: Vec<f64>, values: Vec<f64>) -> DissipationCurve {
        let n = times.len();
        DissipationCurve { times, values, stderr: vec![0.0; n], source: CurveSource::FdrMc }
    }

    #[test]
    fn zero_dissipation_fits_zero() {
        let c = curve(vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 0.0]);
        let chk = verify_upper_bound(&c, 1e-3, 1.0, &BoundForm::Linear, 1.0 / 3.0).unwrap();
        assert_eq!(chk.c_fit, 0.0);
    }

    #[test]
    fn exact_linear_law_gives_unit_constant() {
        // D = ||rho0||^2 kappa^{1/3} t: C_fit = 1 for every kappa
        for kappa in [1e-2f64, 1e-4, 1e-6] {
            let norm = 0.123;
            let times: Vec<f64> =
                (1..=10).map(|i| 0.1 * i as f64 * kappa.powf(-1.0 / 3.0)).collect();
            let values: Vec<f64> =
                times.iter().map(|t| norm * kappa.powf(1.0 / 3.0) * t).collect();
            let c = curve(times, values);
            let chk = verify_upper_bound(&c, kappa, norm, &BoundForm::Linear, 1.0 / 3.0).unwrap();
            assert!((chk.c_fit - 1.0).abs() < 1e-12, "kappa {kappa}: {}", chk.c_fit);
        }
    }

    #[test]
    fn circular_window_excludes_late_times() {
        let kappa: f64 = 1e-4;
        let p = 0.5;
        let t_limit = 0.25 / kappa.powf(p);
        let times = vec![0.5 * t_limit, 0.9 * t_limit, 2.0 * t_limit];
        let values = vec![0.1, 0.2, 99.0];
        let c = curve(times, values);
        let chk = verify_upper_bound(&c, kappa, 1.0, &BoundForm::Circular, p).unwrap();
        assert_eq!(chk.times_used, 2);
        assert!(chk.c_fit < 10.0, "late-time point must be excluded");
    }

    #[test]
    fn empty_window_is_an_error() {
        let c = curve(vec![1e9], vec![1.0]);
        assert!(matches!(
            verify_upper_bound(&c, 1e-2, 1.0, &BoundForm::Linear, 1.0 / 3.0),
            Err(Error::EmptyValidityWindow(_))
        ));
    }

    #[test]
    fn sweep_spread() {
        let checks = vec![
            BoundCheck { kappa: 1e-3, c_fit: 1.0, times_used: 3 },
            BoundCheck { kappa: 1e-4, c_fit: 2.5, times_used: 3 },
        ];
        let s = bound_sweep(checks).unwrap();
        assert!((s.spread - 2.5).abs() < 1e-15);
    }
}
