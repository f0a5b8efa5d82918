//! Time-reversed Brownian paths pinned to zero at the horizon.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::trajectories::rng::stream;

/// A Brownian path on `[0, t]` with `W_t = 0` exactly, stored on a grid.
///
/// Built by generating a forward path `V` from independent Gaussian
/// increments and setting `W_s = V_{t-s}`: the time reversal of a Brownian
/// motion pinned at its start is again a Brownian motion pinned at time `t`,
/// so the law is the backward-filtration one. The grid carries a short first
/// step when `h` does not divide `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub master_seed: u64,
    pub stream_index: u64,
}

impl BrownianPath {
    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Value at the grid index `i`.
    #[inline]
    pub fn w(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `W_0` (the fully dispersed end of the reversed path).
    pub fn w0(&self) -> f64 {
        self.values[0]
    }

    /// Linear interpolation between grid values (the grid is fine enough for
    /// every consumer here; tests use grid points directly).
    pub fn at(&self, s: f64) -> f64 {
        let t = self.horizon();
        if s <= self.times[0] {
            return self.values[0];
        }
        if s >= t {
            return 0.0;
        }
        let mut lo = 0usize;
        let mut hi = self.times.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.times[mid] <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f = (s - self.times[lo]) / (self.times[hi] - self.times[lo]);
        self.values[lo] * (1.0 - f) + self.values[hi] * f
    }
}

/// Sample a reversed Brownian path on `[0, t]` with nominal step `h`.
pub fn sample_reversed_brownian(t: f64, h: f64, master_seed: u64, stream_index: u64) -> BrownianPath {
    let mut rng = stream(master_seed, stream_index);
    let n = (t / h).ceil().max(1.0) as usize;
    // forward grid 0, h, 2h, ..., t with a short last step
    let mut fwd_times = Vec::with_capacity(n + 1);
    for i in 0..n {
        fwd_times.push(i as f64 * h);
    }
    fwd_times.push(t);
    let mut v = Vec::with_capacity(n + 1);
    v.push(0.0);
    for i in 1..=n {
        let dt = fwd_times[i] - fwd_times[i - 1];
        let z: f64 = rng.sample(StandardNormal);
        v.push(v[i - 1] + dt.sqrt() * z);
    }
    // W_s = V_{t-s}: reversed grid times t - s_j, ascending
    let times: Vec<f64> = fwd_times.iter().rev().map(|&s| t - s).collect();
    let values: Vec<f64> = v.into_iter().rev().collect();
    BrownianPath { times, values, master_seed, stream_index }
}
