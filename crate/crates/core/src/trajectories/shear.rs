//! Endpoints of the backward stochastic flow for shear fields.
//!
//! Two routes with the same law:
//!
//! * [`shear_endpoint`] evaluates the explicit backward formula
//!   `X = x + delta sqrt(2k) B_0 - int_0^t u(y + sqrt(2k) W_tau) dtau`,
//!   `Y = y + sqrt(2k) W_0` on reversed Brownian paths (trapezoidal rule on
//!   the path grid);
//! * [`ShearWalker`] integrates the equivalent forward system and can
//!   snapshot the running state at several horizons along one path, which is
//!   what the dissipation-curve machinery reuses across times.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::flows::{Coord, ShearEval};
use crate::trajectories::brownian::sample_reversed_brownian;
use crate::trajectories::rng::stream;
use crate::trajectories::SimParams;

/// Literal backward-formula endpoint on reversed paths `W` (stream) and `B`
/// (stream + 1).
pub fn shear_endpoint(
    x: f64,
    y: f64,
    u: &ShearEval,
    params: &SimParams,
    stream_index: u64,
) -> Coord {
    let w = sample_reversed_brownian(params.t, params.h, params.master_seed, stream_index);
    let sq = (2.0 * params.kappa).sqrt();
    // trapezoid of u(y + sqrt(2k) W_tau) over the stored grid
    let mut integral = 0.0;
    let mut prev = u.eval(y + sq * w.values[0]);
    for i in 1..w.times.len() {
        let cur = u.eval(y + sq * w.values[i]);
        integral += 0.5 * (prev + cur) * (w.times[i] - w.times[i - 1]);
        prev = cur;
    }
    let mut x_end = x - integral;
    if params.x_diffusion {
        let b = sample_reversed_brownian(params.t, params.h, params.master_seed, stream_index + 1);
        x_end += sq * b.w0();
    }
    Coord::Cartesian { x: x_end, y: y + sq * w.w0() }
}

/// Snapshot of the forward in-law state at one horizon.
#[derive(Clone, Copy, Debug)]
pub struct ShearSnapshot {
    /// Actual snapshot time (an integer number of steps).
    pub t: f64,
    pub y: f64,
    /// Along-streamline displacement `X - x`, drift and noise combined.
    pub x_shift: f64,
}

/// Forward walker: `dY = sqrt(2k) dW`, drift accumulator
/// `S(t) = int_0^t u(Y) ds` by the trapezoidal rule, optional `B` for the
/// along-streamline noise. At horizon `t` the state has the law of the
/// backward endpoint at that horizon, jointly for all snapshot times on one
/// path (unbiased at each time, dependent across times).
pub struct ShearWalker<'a> {
    u: &'a ShearEval,
    params: SimParams,
    rng_w: ChaCha8Rng,
    rng_b: ChaCha8Rng,
    pub x: f64,
    pub y: f64,
    drift: f64,
    b: f64,
    u_prev: f64,
    tau: f64,
}

impl<'a> ShearWalker<'a> {
    pub fn new(x: f64, y: f64, u: &'a ShearEval, params: &SimParams, stream_offset: u64) -> Self {
        ShearWalker {
            u,
            params: *params,
            rng_w: stream(params.master_seed, stream_offset),
            rng_b: stream(params.master_seed, stream_offset + 1),
            x,
            y,
            drift: 0.0,
            b: 0.0,
            u_prev: u.eval(y),
            tau: 0.0,
        }
    }

    #[inline]
    fn step(&mut self, h: f64) {
        let sq = (2.0 * self.params.kappa * h).sqrt();
        let z: f64 = self.rng_w.sample(StandardNormal);
        self.y += sq * z;
        let u_cur = self.u.eval(self.y);
        self.drift += 0.5 * h * (self.u_prev + u_cur);
        self.u_prev = u_cur;
        if self.params.x_diffusion {
            let zb: f64 = self.rng_b.sample(StandardNormal);
            self.b += h.sqrt() * zb;
        }
        self.tau += h;
    }

    fn x_shift(&self) -> f64 {
        let mut s = -self.drift;
        if self.params.x_diffusion {
            s += (2.0 * self.params.kappa).sqrt() * self.b;
        }
        s
    }

    /// Run to horizon `t` and return the endpoint.
    pub fn endpoint(mut self, t: f64) -> Coord {
        let n = (t / self.params.h).round().max(1.0) as usize;
        let h = t / n as f64;
        for _ in 0..n {
            self.step(h);
        }
        Coord::Cartesian { x: self.x + self.x_shift(), y: self.y }
    }

    /// Integrate once to the largest requested time, snapshotting the state
    /// at each (times must be sorted ascending).
    pub fn snapshots(mut self, times: &[f64]) -> Vec<ShearSnapshot> {
        let mut out = Vec::with_capacity(times.len());
        let h = self.params.h;
        let mut step_now = 0usize;
        for &t in times {
            let target = (t / h).round() as usize;
            while step_now < target {
                self.step(h);
                step_now += 1;
            }
            out.push(ShearSnapshot { t: step_now as f64 * h, y: self.y, x_shift: self.x_shift() });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::ShearEval;
    use crate::stats;

    fn params(kappa: f64, t: f64, m: usize) -> SimParams {
        SimParams {
            kappa,
            x_diffusion: false,
            t,
            h: SimParams::default_shear_step(t),
            m,
            master_seed: 11,
        }
    }

    #[test]
    fn zero_shear_keeps_x_exactly() {
        let p = params(0.01, 1.0, 2);
        for i in 0..16 {
            let e = shear_endpoint(0.7, 0.1, &ShearEval::Zero, &p, i);
            let Coord::Cartesian { x, .. } = e else { panic!() };
            assert_eq!(x, 0.7);
        }
    }

    #[test]
    fn constant_shear_translates_deterministically() {
        let p = params(0.01, 2.0, 2);
        for i in 0..16 {
            let e = shear_endpoint(0.0, 0.1, &ShearEval::Const(1.5), &p, i);
            let Coord::Cartesian { x, .. } = e else { panic!() };
            // trapezoid of a constant is exact
            assert!((x + 1.5 * 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn walker_and_backward_formula_agree_in_law() {
        // same estimand E X^2 via both routes for u = y, start at the origin
        let p = params(0.01, 1.0, 4000);
        let u = ShearEval::Monomial(1);
        let exact = 2.0 * p.kappa * p.t.powi(3) / 3.0;
        let via_backward: Vec<f64> = (0..p.m as u64)
            .map(|i| {
                let Coord::Cartesian { x, .. } = shear_endpoint(0.0, 0.0, &u, &p, 2 * i) else {
                    panic!()
                };
                x * x
            })
            .collect();
        let via_walker: Vec<f64> = (0..p.m as u64)
            .map(|i| {
                let Coord::Cartesian { x, .. } =
                    ShearWalker::new(0.0, 0.0, &u, &p, 2 * i + 100_000).endpoint(p.t)
                else {
                    panic!()
                };
                x * x
            })
            .collect();
        let (m1, s1) = (stats::mean(&via_backward), stats::stderr_of_mean(&via_backward));
        let (m2, s2) = (stats::mean(&via_walker), stats::stderr_of_mean(&via_walker));
        assert!((m1 - exact).abs() < 4.0 * s1, "backward: {m1} vs {exact}");
        assert!((m2 - exact).abs() < 4.0 * s2, "walker: {m2} vs {exact}");
    }

    #[test]
    fn snapshots_are_marginally_consistent() {
        // Var Y(t) = 2 kappa t at every snapshot
        let p = params(0.05, 2.0, 6000);
        let u = ShearEval::Zero;
        let times = [0.5, 1.0, 2.0];
        let mut ys = vec![Vec::new(); times.len()];
        for i in 0..p.m as u64 {
            let snaps = ShearWalker::new(0.0, 0.0, &u, &p, 2 * i).snapshots(&times);
            for (j, s) in snaps.iter().enumerate() {
                ys[j].push(s.y);
            }
        }
        for (j, &t) in times.iter().enumerate() {
            let v = stats::sample_variance(&ys[j]);
            let expect = 2.0 * p.kappa * t;
            let se = stats::stderr_of_variance(&ys[j]);
            assert!((v - expect).abs() < 4.0 * se, "t={t}: {v} vs {expect}");
        }
    }
}
