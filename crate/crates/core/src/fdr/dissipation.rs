//! Spatially integrated variance: dissipation curves by the Monte Carlo
//! route.
//!
//! For the data used here the along-streamline dependence of the paired
//! integrand is a trigonometric polynomial of degree two, so the equispaced
//! midpoint sum over the full circle equals its analytic value
//! `pi (p1^2 + p2^2) - 2 pi p1 p2 cos(D1 - D2)`; each row therefore costs one
//! paired trajectory ensemble regardless of the along-streamline node count.
//! Trajectories are integrated once per pair to the largest requested time
//! and snapshotted at each earlier one (unbiased at every time, dependent
//! across times).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::flows::{InitialDatum, VelocityField};
use crate::stats;
use crate::trajectories::{CircularWalker, ShearWalker, SimParams};
use crate::Result;

use super::quadrature::{RowGeometry, SpatialQuadrature};

const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    FdrMc,
    Pde,
}

/// Cumulative dissipation `D(t)` with per-time standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub source: CurveSource,
}

impl DissipationCurve {
    /// Nonnegative and nondecreasing within twice the standard errors.
    pub fn validate(&self) -> Result<()> {
        for (i, (&v, &s)) in self.values.iter().zip(&self.stderr).enumerate() {
            if v < -2.0 * s {
                return Err(Error::Instability(format!(
                    "dissipation negative beyond noise at index {i}: {v} +- {s}"
                )));
            }
        }
        for i in 1..self.values.len() {
            let slack = 2.0 * (self.stderr[i] + self.stderr[i - 1]);
            if self.values[i] < self.values[i - 1] - slack {
                return Err(Error::Instability(format!(
                    "cumulative dissipation decreases beyond noise at index {i}"
                )));
            }
        }
        Ok(())
    }
}

/// One cross-streamline row's contribution to `D` at each requested time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowContribution {
    pub node: f64,
    pub weight: f64,
    /// Contribution to `D(t_k)` (already weighted).
    pub d_mean: Vec<f64>,
    /// Its variance (already weighted), i.e. `weight^2 Var(g)/M`.
    pub d_var: Vec<f64>,
}

/// A Monte Carlo dissipation estimate with its row breakdown (the breakdown
/// lets callers reproduce region splits exactly, by summing row subsets).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FdrEstimate {
    pub curve: DissipationCurve,
    pub rows: Vec<RowContribution>,
}

/// Estimate `D(t) = 1/2 int Var(rho_0(X_{t,0})) dx` at each requested time
/// by the paired-copy estimator over the given quadrature.
pub fn dissipation_curve(
    datum: &InitialDatum,
    field: &VelocityField,
    params: &SimParams,
    times: &[f64],
    quad: &SpatialQuadrature,
) -> Result<FdrEstimate> {
    params.validate()?;
    field.validate()?;
    if times.is_empty() {
        return Err(Error::Parameter("dissipation curve needs at least one time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) || times[0] < 0.0 {
        return Err(Error::Parameter("times must be nonnegative and increasing".into()));
    }
    let t_max = *times.last().unwrap();
    if t_max > params.t * (1.0 + 1e-9) {
        return Err(Error::Parameter(format!(
            "requested time {t_max} exceeds the ensemble horizon {}",
            params.t
        )));
    }
    if !quad.covers(datum.support()) {
        return Err(Error::Coverage(format!(
            "quadrature range {:?} does not contain the datum support {:?}",
            quad.cross_range,
            datum.support()
        )));
    }

    let m = params.m;
    let rows: Vec<RowContribution> = match (&quad.geometry, field.is_shear()) {
        (RowGeometry::ShearX { .. }, true) => {
            let ev = field.shear_eval()?;
            quad.rows
                .par_iter()
                .enumerate()
                .map(|(row_idx, cell)| {
                    let base = row_idx as u64 * 4 * m as u64;
                    let mut sum = vec![0.0; times.len()];
                    let mut sum_sq = vec![0.0; times.len()];
                    let mut actual = vec![0.0; times.len()];
                    for i in 0..m as u64 {
                        let s1 = ShearWalker::new(0.0, cell.node, &ev, params, base + 4 * i)
                            .snapshots(times);
                        let s2 = ShearWalker::new(0.0, cell.node, &ev, params, base + 4 * i + 2)
                            .snapshots(times);
                        for k in 0..times.len() {
                            let p1 = datum.profile_at(s1[k].y);
                            let p2 = datum.profile_at(s2[k].y);
                            let g = paired_row_integrand(p1, p2, s1[k].x_shift - s2[k].x_shift);
                            sum[k] += g;
                            sum_sq[k] += g * g;
                            actual[k] = s1[k].t;
                        }
                    }
                    row_contribution(quad.row_weight(cell), cell.node, m, sum, sum_sq, actual)
                })
                .collect()
        }
        (RowGeometry::PolarTheta { .. }, false) => {
            let q = match field {
                VelocityField::Circular { q } => *q,
                _ => unreachable!(),
            };
            quad.rows
                .par_iter()
                .enumerate()
                .map(|(row_idx, cell)| {
                    let base = row_idx as u64 * 4 * m as u64;
                    let mut sum = vec![0.0; times.len()];
                    let mut sum_sq = vec![0.0; times.len()];
                    let mut actual = vec![0.0; times.len()];
                    for i in 0..m as u64 {
                        let s1 = CircularWalker::new(cell.node, 0.0, q, params, base + 4 * i)
                            .snapshots(times)?;
                        let s2 = CircularWalker::new(cell.node, 0.0, q, params, base + 4 * i + 2)
                            .snapshots(times)?;
                        for k in 0..times.len() {
                            let p1 = datum.profile_at(s1[k].r);
                            let p2 = datum.profile_at(s2[k].r);
                            let g = paired_row_integrand(p1, p2, s1[k].theta - s2[k].theta);
                            sum[k] += g;
                            sum_sq[k] += g * g;
                            actual[k] = s1[k].t;
                        }
                    }
                    Ok(row_contribution(quad.row_weight(cell), cell.node, m, sum, sum_sq, actual))
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            return Err(Error::Parameter(
                "quadrature geometry does not match the flow family".into(),
            ))
        }
    };

    // deterministic reduction: rows arrive in quadrature order
    let mut values = vec![0.0; times.len()];
    let mut variances = vec![0.0; times.len()];
    for k in 0..times.len() {
        let per_row: Vec<f64> = rows.iter().map(|r| r.d_mean[k]).collect();
        values[k] = stats::pairwise_sum(&per_row);
        let per_row_var: Vec<f64> = rows.iter().map(|r| r.d_var[k]).collect();
        variances[k] = stats::pairwise_sum(&per_row_var);
    }
    let curve = DissipationCurve {
        times: times.to_vec(),
        values,
        stderr: variances.iter().map(|v| v.sqrt()).collect(),
        source: CurveSource::FdrMc,
    };
    Ok(FdrEstimate { curve, rows })
}

/// Contribution of one trajectory pair to `1/2 int_row Var dx`: the full
/// along-streamline integral of `1/4 |rho_0(E1) - rho_0(E2)|^2`, evaluated in
/// closed form (see the module docs), per unit cross-streamline width.
/// Written as `(p1-p2)^2 + 4 p1 p2 sin^2(d/2)` so coincident endpoints give
/// exactly zero.
#[inline]
fn paired_row_integrand(p1: f64, p2: f64, phase_diff: f64) -> f64 {
    let s = (0.5 * phase_diff).sin();
    0.25 * PI * ((p1 - p2) * (p1 - p2) + 4.0 * p1 * p2 * s * s)
}

fn row_contribution(
    weight: f64,
    node: f64,
    m: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    _actual_times: Vec<f64>,
) -> RowContribution {
    let mf = m as f64;
    let d_mean: Vec<f64> = sum.iter().map(|s| weight * s / mf).collect();
    let d_var: Vec<f64> = sum
        .iter()
        .zip(&sum_sq)
        .map(|(&s, &ss)| {
            let var_g = ((ss - s * s / mf) / (mf - 1.0)).max(0.0);
            weight * weight * var_g / mf
        })
        .collect();
    RowContribution { node, weight, d_mean, d_var }
}

/// Single-time spatial integral `1/2 sum_i w_i Var(node_i)`; returns the
/// value and its propagated standard error.
pub fn integrate_variance(
    datum: &InitialDatum,
    field: &VelocityField,
    params: &SimParams,
    quad: &SpatialQuadrature,
) -> Result<(f64, f64)> {
    let est = dissipation_curve(datum, field, params, &[params.t], quad)?;
    Ok((est.curve.values[0], est.curve.stderr[0]))
}
