//! Endpoint sampling of the (in-law) backward stochastic flow.
//!
//! The backward trajectories are simulated forward with the advection drift
//! reversed and the diffusion unchanged, which has the same endpoint law at
//! every horizon; only the law enters the fluctuation-dissipation relation.
//! In polar coordinates this puts the Bessel correction `+kappa/R` on the
//! radial drift, whose exact second moment `E R^2 = r^2 + 4 kappa t` is the
//! regression test for the sign convention.

pub mod brownian;
pub mod circular;
pub mod rng;
pub mod shear;

pub use brownian::{sample_reversed_brownian, BrownianPath};
pub use circular::{circular_endpoint, CircularWalker};
pub use shear::{shear_endpoint, ShearWalker};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::flows::{Coord, VelocityField};
use crate::Result;

/// Parameters of one ensemble simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Diffusivity `kappa`.
    pub kappa: f64,
    /// Whether the along-streamline coordinate diffuses (`delta` switch).
    pub x_diffusion: bool,
    /// Horizon.
    pub t: f64,
    /// Step size.
    pub h: f64,
    /// Ensemble size.
    pub m: usize,
    pub master_seed: u64,
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) {
            return Err(Error::Parameter("step h must be positive".into()));
        }
        if self.h > self.t {
            return Err(Error::Parameter("step h must not exceed the horizon t".into()));
        }
        if self.m < 2 {
            return Err(Error::Parameter("ensemble size must be >= 2".into()));
        }
        if self.kappa < 0.0 {
            return Err(Error::Parameter("kappa must be nonnegative".into()));
        }
        Ok(())
    }

    /// Default shear step: `t / 2000` (trapezoidal drift quadrature).
    pub fn default_shear_step(t: f64) -> f64 {
        t / 2000.0
    }

    /// Default circular step: `min(t/200, r_min^2 / (10 kappa))`, keeping
    /// `kappa h` well below the squared distance to the origin.
    pub fn default_circular_step(t: f64, kappa: f64, r_min: f64) -> f64 {
        let cap = if kappa > 0.0 { r_min * r_min / (10.0 * kappa) } else { f64::INFINITY };
        (t / 200.0).min(cap)
    }
}

/// Endpoint samples of the in-law backward flow started from one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub start: Coord,
    pub params: SimParams,
    pub samples: Vec<Coord>,
    /// Per-sample RNG stream indices (deterministic reproducibility).
    pub streams: Vec<u64>,
}

/// Sample `params.m` endpoints in parallel. Per-sample streams derive from
/// `(master_seed, sample index)`, so results are independent of scheduling.
pub fn build_ensemble(
    start: &Coord,
    field: &VelocityField,
    params: &SimParams,
) -> Result<TrajectoryEnsemble> {
    params.validate()?;
    field.validate()?;
    let samples: Vec<Coord> = match (field.is_shear(), start) {
        (true, Coord::Cartesian { x, y }) => {
            let ev = field.shear_eval()?;
            (0..params.m)
                .into_par_iter()
                .map(|i| {
                    let walker = ShearWalker::new(*x, *y, &ev, params, 2 * i as u64);
                    walker.endpoint(params.t)
                })
                .collect()
        }
        (false, Coord::Polar { r, theta }) => {
            let q = match field {
                VelocityField::Circular { q } => *q,
                _ => unreachable!(),
            };
            if !(*r > 0.0) {
                return Err(Error::Parameter("circular start needs r > 0".into()));
            }
            (0..params.m)
                .into_par_iter()
                .map(|i| {
                    CircularWalker::new(*r, *theta, q, params, 2 * i as u64).endpoint(params.t)
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            return Err(Error::Parameter(
                "start coordinate kind does not match the flow family".into(),
            ))
        }
    };
    Ok(TrajectoryEnsemble {
        start: *start,
        params: *params,
        samples,
        streams: (0..params.m).map(|i| 2 * i as u64).collect(),
    })
}
