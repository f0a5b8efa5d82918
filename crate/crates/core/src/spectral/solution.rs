//! Recorded history of a mode solve.

use num_complex::Complex64;

use crate::rates::{CurveMeta, DecayCurve};
use crate::fdr::{CurveSource, DissipationCurve};

/// Norm and dissipation history of one mode solve. Norms are those of the
/// two-dimensional scalar carried by the mode (the along-streamline factor
/// `sin` contributes `pi`), with the `r dr` weight in the radial case.
#[derive(Clone, Debug)]
pub struct ModeSolution {
    pub times: Vec<f64>,
    /// `||rho(t)||^2`.
    pub norm_sq: Vec<f64>,
    /// Cumulative dissipation `D(t)`.
    pub dissipation: Vec<f64>,
    /// Mode amplitude at the final time, on the solver grid.
    pub final_field: Vec<Complex64>,
}

impl ModeSolution {
    /// Max over recorded times of the relative energy-equality defect
    /// `|norm/2 + D - norm0/2| / (norm0/2)`.
    pub fn energy_residual(&self) -> f64 {
        let half0 = 0.5 * self.norm_sq[0];
        self.times
            .iter()
            .zip(self.norm_sq.iter().zip(&self.dissipation))
            .map(|(_, (n, d))| (0.5 * n + d - half0).abs() / half0)
            .fold(0.0, f64::max)
    }

    /// Norm history never increases beyond roundoff.
    pub fn norm_nonincreasing(&self) -> bool {
        self.norm_sq
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-12))
    }

    pub fn decay_curve(&self, kappa: f64, meta: CurveMeta) -> DecayCurve {
        DecayCurve {
            kappa,
            times: self.times.clone(),
            norm_sq: self.norm_sq.clone(),
            meta,
        }
    }

    pub fn dissipation_curve(&self) -> DissipationCurve {
        DissipationCurve {
            times: self.times.clone(),
            values: self.dissipation.clone(),
            stderr: vec![0.0; self.times.len()],
            source: CurveSource::Pde,
        }
    }
}

/// Convenience alias for the operation named in the module contract.
pub fn energy_residual(solution: &ModeSolution) -> f64 {
    solution.energy_residual()
}
