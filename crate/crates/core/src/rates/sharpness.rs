//! Mechanized form of the constraint that a dissipation upper bound places
//! on any claimed enhanced-diffusion rate.
//!
//! If `D(t) <= f(xi(kappa) t) ||rho_0||^2` for `t <= 1/(C xi)` and the norm
//! decays like `C e^{-r(kappa) t}`, the energy equality forces
//! `1 - 2 f(xi t) <= C e^{-r t}`. Evaluated at `t_k = (xi r)^{-1/2}`, a
//! claimed rate `r` much faster than `xi` drives the left side to one and
//! the right side to zero — a contradiction, so `xi` caps the rate.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Numerical slack when comparing the two sides of the inequality.
const TOLERANCE: f64 = 1e-12;

/// The bound shape `f`: continuous, increasing, `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum BoundShape {
    /// `f(x) = x`
    Linear,
    /// `f(x) = x^2`
    Quadratic,
    /// Piecewise-linear table of `(x, f(x))`, increasing, starting at 0.
    Tabulated { points: Vec<(f64, f64)> },
}

impl BoundShape {
    pub fn validate(&self) -> Result<()> {
        if let BoundShape::Tabulated { points } = self {
            if points.is_empty() || points[0] != (0.0, 0.0) {
                return Err(Error::Parameter("tabulated shape must start at (0, 0)".into()));
            }
            if points.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 < w[0].1) {
                return Err(Error::Parameter("tabulated shape must be increasing".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BoundShape::Linear => x,
            BoundShape::Quadratic => x * x,
            BoundShape::Tabulated { points } => {
                if x <= 0.0 {
                    return 0.0;
                }
                match points.windows(2).find(|w| x <= w[1].0) {
                    Some(w) => {
                        let f = (x - w[0].0) / (w[1].0 - w[0].0);
                        w[0].1 * (1.0 - f) + w[1].1 * f
                    }
                    // extrapolate the last slope
                    None => {
                        let n = points.len();
                        if n == 1 {
                            return points[0].1;
                        }
                        let (x0, f0) = points[n - 2];
                        let (x1, f1) = points[n - 1];
                        f1 + (x - x1) * (f1 - f0) / (x1 - x0)
                    }
                }
            }
        }
    }
}

/// A dissipation bound (shape, rate `xi`, constant `C`) against a claimed
/// enhanced rate `r`, tabulated on a `kappa` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessCheck {
    pub shape: BoundShape,
    pub constant: f64,
    pub kappas: Vec<f64>,
    /// Bound rate `xi(kappa)` per grid point.
    pub xi: Vec<f64>,
    /// Claimed enhanced rate `r(kappa)` per grid point.
    pub r: Vec<f64>,
}

impl SharpnessCheck {
    /// Power-law rates `xi = kappa^a`, `r = kappa^b` on a grid.
    pub fn power_laws(
        shape: BoundShape,
        constant: f64,
        kappas: &[f64],
        xi_exponent: f64,
        r_exponent: f64,
    ) -> Self {
        SharpnessCheck {
            shape,
            constant,
            kappas: kappas.to_vec(),
            xi: kappas.iter().map(|k| k.powf(xi_exponent)).collect(),
            r: kappas.iter().map(|k| k.powf(r_exponent)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SharpnessVerdict {
    Consistent,
    /// First grid point at which the inequality fails, with its test time.
    Contradiction { kappa: f64, t: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub verdict: SharpnessVerdict,
    /// Grid points whose test time fell outside the bound's validity window
    /// `t <= 1/(C xi)` (the inequality is not applicable there).
    pub skipped: Vec<f64>,
    pub evaluated: usize,
}

/// Evaluate `1 - 2 f(xi t_k) <= C e^{-r t_k}` at `t_k = (xi r)^{-1/2}` on
/// each admissible grid point; the first failure is the contradiction
/// witness.
pub fn sharpness_constraint(check: &SharpnessCheck) -> Result<SharpnessReport> {
    check.shape.validate()?;
    if check.constant < 1.0 {
        return Err(Error::Parameter("sharpness constant must be >= 1".into()));
    }
    let n = check.kappas.len();
    if check.xi.len() != n || check.r.len() != n || n == 0 {
        return Err(Error::Parameter("sharpness grid shape mismatch".into()));
    }
    let mut skipped = Vec::new();
    let mut evaluated = 0usize;
    for i in 0..n {
        let (kappa, xi, r) = (check.kappas[i], check.xi[i], check.r[i]);
        if !(xi > 0.0 && r > 0.0) {
            return Err(Error::Parameter("rates must be positive".into()));
        }
        let t_k = 1.0 / (xi * r).sqrt();
        if t_k > 1.0 / (check.constant * xi) {
            skipped.push(kappa);
            continue;
        }
        evaluated += 1;
        let lhs = 1.0 - 2.0 * check.shape.eval(xi * t_k);
        let rhs = check.constant * (-r * t_k).exp();
        if lhs > rhs + TOLERANCE {
            return Ok(SharpnessReport {
                verdict: SharpnessVerdict::Contradiction { kappa, t: t_k },
                skipped,
                evaluated,
            });
        }
    }
    Ok(SharpnessReport { verdict: SharpnessVerdict::Consistent, skipped, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decade_grid(lo_exp: i32, hi_exp: i32) -> Vec<f64> {
        (hi_exp..=lo_exp).rev().map(|e| 10f64.powi(e)).collect()
    }

    #[test]
    fn equal_rates_are_consistent() {
        // xi = r = kappa^{1/3}, C = 2: t_k = 1/xi sits outside the validity
        // window, and even evaluated the inequality holds; Consistent.
        let grid = decade_grid(-2, -8);
        let check = SharpnessCheck::power_laws(BoundShape::Linear, 2.0, &grid, 1.0 / 3.0, 1.0 / 3.0);
        let rep = sharpness_constraint(&check).unwrap();
        assert_eq!(rep.verdict, SharpnessVerdict::Consistent);
    }

    #[test]
    fn faster_claimed_rate_contradicts() {
        // xi = kappa^{1/3} against r = kappa^{1/4}: at t_k the left side
        // tends to one, the right to zero.
        let grid = decade_grid(-4, -10);
        let check = SharpnessCheck::power_laws(BoundShape::Linear, 2.0, &grid, 1.0 / 3.0, 0.25);
        let rep = sharpness_constraint(&check).unwrap();
        match rep.verdict {
            SharpnessVerdict::Contradiction { kappa, t } => {
                assert!(kappa <= 1e-8);
                assert!(t > 0.0);
            }
            v => panic!("expected contradiction, got {v:?}"),
        }
    }

    #[test]
    fn quadratic_shape_consistent_for_equal_rates() {
        for c in [1.0, 2.0, 10.0] {
            let grid = decade_grid(-2, -8);
            let check =
                SharpnessCheck::power_laws(BoundShape::Quadratic, c, &grid, 0.5, 0.5);
            let rep = sharpness_constraint(&check).unwrap();
            assert_eq!(rep.verdict, SharpnessVerdict::Consistent, "C = {c}");
        }
    }

    #[test]
    fn test_time_sits_between_rate_scales() {
        // whenever xi/r < 1, 1/r < t_k < 1/xi
        let grid = decade_grid(-3, -9);
        let check = SharpnessCheck::power_laws(BoundShape::Linear, 1.0, &grid, 0.5, 0.25);
        for i in 0..grid.len() {
            let (xi, r) = (check.xi[i], check.r[i]);
            assert!(xi / r < 1.0);
            let t_k = 1.0 / (xi * r).sqrt();
            assert!(1.0 / r < t_k && t_k < 1.0 / xi);
        }
    }

    #[test]
    fn monotone_in_claimed_rate() {
        // if kappa^a is contradicted, every faster claim kappa^{a'} (a' < a)
        // is as well
        let grid = decade_grid(-4, -12);
        let mut first_contradicted: Option<f64> = None;
        for i in 0..=8 {
            let a = 0.32 - 0.03 * i as f64; // 0.32 down to 0.08
            let check = SharpnessCheck::power_laws(BoundShape::Linear, 2.0, &grid, 1.0 / 3.0, a);
            let rep = sharpness_constraint(&check).unwrap();
            let contradicted =
                matches!(rep.verdict, SharpnessVerdict::Contradiction { .. });
            if contradicted && first_contradicted.is_none() {
                first_contradicted = Some(a);
            }
            if let Some(a0) = first_contradicted {
                if a <= a0 {
                    assert!(contradicted, "a = {a} should be contradicted (a0 = {a0})");
                }
            }
        }
        assert!(first_contradicted.is_some());
    }

    #[test]
    fn tabulated_shape_round_trip() {
        let shape = BoundShape::Tabulated {
            points: vec![(0.0, 0.0), (1.0, 0.5), (2.0, 2.0)],
        };
        shape.validate().unwrap();
        assert_eq!(shape.eval(0.5), 0.25);
        assert_eq!(shape.eval(1.5), 1.25);
        assert_eq!(shape.eval(3.0), 3.5); // extrapolated
    }
}
