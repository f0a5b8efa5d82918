//! Two independent routes to the dissipation of a passive scalar advected by
//! shear or circular flows at small diffusivity `kappa`:
//!
//! * a Monte Carlo route, sampling the scalar's initial data along the
//!   endpoints of noisy (time-reversed, in law) flow trajectories and
//!   integrating the pointwise variance in space;
//! * a deterministic route, evolving one Fourier mode of the scalar with a
//!   split-step spectral (shear) or Crank-Nicolson (radial) solver.
//!
//! Both estimate the cumulative dissipation `D(t) = kappa * int_0^t ||grad
//! rho||^2 ds`, which for localized data obeys power-law bounds in
//! `kappa^{n/(n+2)} t`, `kappa^{alpha/(alpha+2)} t` or `kappa^{q/(q+2)} t`
//! depending on the flow family. The [`rates`] module turns decay curves from
//! a `kappa`-sweep into measured exponents and runs the consistency test that
//! a dissipation bound places on any claimed enhanced-diffusion rate.

pub mod error;
pub mod fdr;
pub mod flows;
pub mod rates;
pub mod spectral;
pub mod stats;
pub mod trajectories;

pub use error::Error;
pub use fdr::{DissipationCurve, SpatialQuadrature, VarianceEstimate};
pub use flows::{Coord, Domain, InitialDatum, Profile, TentProfile, VelocityField};
pub use rates::{DecayCurve, RateFit, SharpnessCheck, TheoreticalRate};
pub use spectral::{ModeSolution, RadialModeProblem, ShearModeProblem};
pub use trajectories::{SimParams, TrajectoryEnsemble};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
