//! Euler-Maruyama sampling of the in-law backward trajectories of circular
//! flows, in polar coordinates:
//!
//! `dR = (kappa / R) ds + sqrt(2 kappa) dW`
//! `dTheta = -R^q ds + (sqrt(2 kappa) / R) dB`
//!
//! The radial part is a two-dimensional Bessel-type process; `E R^2 = r^2 +
//! 4 kappa s` holds exactly and pins the drift sign. Steps that would leave
//! the positive half-line are retried on halved substeps (fresh noise), and
//! after maximal refinement the excursion is reflected; the data of interest
//! live at `r >> sqrt(kappa h)`, where this path region is vanishingly rare.
//!
//! The returned angle is the raw accumulated one, not reduced mod `2 pi`,
//! so angular dispersion statistics remain meaningful.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::flows::Coord;
use crate::trajectories::rng::stream;
use crate::trajectories::SimParams;
use crate::Result;

const MAX_REFINE: u32 = 20;

/// Snapshot of the polar state at one horizon.
#[derive(Clone, Copy, Debug)]
pub struct PolarSnapshot {
    pub t: f64,
    pub r: f64,
    /// Raw angle (not wrapped).
    pub theta: f64,
}

pub struct CircularWalker {
    q: f64,
    q_int: Option<i32>,
    params: SimParams,
    rng_w: ChaCha8Rng,
    rng_b: ChaCha8Rng,
    pub r: f64,
    pub theta: f64,
    tau: f64,
}

impl CircularWalker {
    pub fn new(r: f64, theta: f64, q: f64, params: &SimParams, stream_offset: u64) -> Self {
        let q_int = if q.fract() == 0.0 && q.abs() < 64.0 { Some(q as i32) } else { None };
        CircularWalker {
            q,
            q_int,
            params: *params,
            rng_w: stream(params.master_seed, stream_offset),
            rng_b: stream(params.master_seed, stream_offset + 1),
            r,
            theta,
            tau: 0.0,
        }
    }

    #[inline]
    fn angular_speed(&self, r: f64) -> f64 {
        match self.q_int {
            Some(n) => r.powi(n),
            None => r.powf(self.q),
        }
    }

    fn substep(&mut self, h: f64, depth: u32) -> Result<()> {
        let kappa = self.params.kappa;
        let zw: f64 = self.rng_w.sample(StandardNormal);
        let mut r_new = self.r + (kappa / self.r) * h + (2.0 * kappa * h).sqrt() * zw;
        if r_new <= 0.0 {
            if depth < MAX_REFINE {
                self.substep(0.5 * h, depth + 1)?;
                self.substep(0.5 * h, depth + 1)?;
                return Ok(());
            }
            r_new = r_new.abs();
            if r_new == 0.0 || !r_new.is_finite() {
                return Err(Error::Integration { tau: self.tau });
            }
        }
        let zb: f64 = self.rng_b.sample(StandardNormal);
        self.theta +=
            -self.angular_speed(self.r) * h + ((2.0 * kappa).sqrt() / self.r) * h.sqrt() * zb;
        self.r = r_new;
        self.tau += h;
        Ok(())
    }

    pub fn endpoint(mut self, t: f64) -> Result<Coord> {
        let n = (t / self.params.h).round().max(1.0) as usize;
        let h = t / n as f64;
        for _ in 0..n {
            self.substep(h, 0)?;
        }
        Ok(Coord::Polar { r: self.r, theta: self.theta })
    }

    /// One path, snapshotted at each requested horizon (sorted ascending).
    pub fn snapshots(mut self, times: &[f64]) -> Result<Vec<PolarSnapshot>> {
        let h = self.params.h;
        let mut out = Vec::with_capacity(times.len());
        let mut step_now = 0usize;
        for &t in times {
            let target = (t / h).round() as usize;
            while step_now < target {
                self.substep(h, 0)?;
                step_now += 1;
            }
            out.push(PolarSnapshot { t: step_now as f64 * h, r: self.r, theta: self.theta });
        }
        Ok(out)
    }
}

/// Endpoint of one in-law backward trajectory of the circular flow.
pub fn circular_endpoint(
    r: f64,
    theta: f64,
    q: f64,
    params: &SimParams,
    stream_offset: u64,
) -> Result<Coord> {
    if !(r > 0.0) {
        return Err(Error::Parameter("circular trajectory needs r > 0".into()));
    }
    CircularWalker::new(r, theta, q, params, stream_offset).endpoint(params.t)
}
