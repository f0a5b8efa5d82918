//! Split-step spectral solver for one x-Fourier mode of the shear problem:
//! `d_t a = -i k u(y) a + kappa (d_yy - delta k^2) a` on the periodic y-grid.
//!
//! Strang splitting with both halves exact: pointwise phase multiplication
//! `exp(-i k u dt/2)`, then the heat factor `exp(-kappa (m^2 + delta k^2) dt)`
//! in Fourier space, then the phase again. Unconditionally stable; `dt` is
//! limited only by the splitting error.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Error;
use crate::flows::{ShearEval, TAU};
use crate::spectral::ModeSolution;
use crate::Result;

#[derive(Clone, Debug)]
pub struct ShearModeProblem {
    /// Along-streamline wavenumber `k >= 1`.
    pub wavenumber: u32,
    /// Whether the `delta k^2` along-streamline diffusion acts.
    pub x_diffusion: bool,
    pub kappa: f64,
    /// Shear profile sampled on the periodic grid.
    pub u: Vec<f64>,
}

impl ShearModeProblem {
    pub fn new(
        u_eval: &ShearEval,
        kappa: f64,
        wavenumber: u32,
        x_diffusion: bool,
        grid: usize,
    ) -> Result<Self> {
        if grid < 256 || !grid.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "shear mode grid {grid} must be a power of two >= 256"
            )));
        }
        if wavenumber == 0 {
            return Err(Error::Parameter("wavenumber k must be >= 1".into()));
        }
        let u = (0..grid).map(|j| u_eval.eval(TAU * j as f64 / grid as f64)).collect();
        Ok(ShearModeProblem { wavenumber, x_diffusion, kappa, u })
    }

    pub fn grid(&self) -> usize {
        self.u.len()
    }

    pub fn grid_nodes(&self) -> Vec<f64> {
        let n = self.grid();
        (0..n).map(|j| TAU * j as f64 / n as f64).collect()
    }

    /// Power-of-two grid resolving a datum of the given half-width with 16
    /// points per half-width.
    pub fn suggested_grid(half_width: f64) -> usize {
        let want = (TAU * 16.0 / half_width).ceil() as usize;
        want.next_power_of_two().clamp(256, 1 << 15)
    }

    /// Step keeping the per-step advection phase below 0.05 radians.
    pub fn suggested_dt(&self) -> f64 {
        let sup = self.u.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        0.05 / (self.wavenumber as f64 * sup).max(1e-12)
    }

    /// Sample a cross-streamline amplitude profile on the grid.
    pub fn sample_amplitude(&self, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        self.grid_nodes().iter().map(|&y| Complex64::new(f(y), 0.0)).collect()
    }
}

/// Evolve `a0` to `t_end`, recording `(t, norm, dissipation)` every
/// `record_stride` steps (plus the first and last).
pub fn solve_shear_mode(
    problem: &ShearModeProblem,
    a0: &[Complex64],
    t_end: f64,
    dt: f64,
    record_stride: usize,
) -> Result<ModeSolution> {
    let n = problem.grid();
    if a0.len() != n {
        return Err(Error::Parameter(format!(
            "initial profile has {} points, grid has {n}",
            a0.len()
        )));
    }
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Parameter("need dt > 0 and t_end >= 0".into()));
    }
    let stride = record_stride.max(1);
    let steps = (t_end / dt).round().max(0.0) as usize;
    let dt = if steps > 0 { t_end / steps as f64 } else { dt };
    let dy = TAU / n as f64;
    let k = problem.wavenumber as f64;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    // half-step phase and the per-mode heat factor
    let phase: Vec<Complex64> = problem
        .u
        .iter()
        .map(|&u| Complex64::from_polar(1.0, -k * u * dt / 2.0))
        .collect();
    let delta_k2 = if problem.x_diffusion { k * k } else { 0.0 };
    let decay: Vec<f64> = (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            (-problem.kappa * (m * m + delta_k2) * dt).exp()
        })
        .collect();
    let inv_n = 1.0 / n as f64;

    let mut a: Vec<Complex64> = a0.to_vec();
    let norm0: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>() * dy * std::f64::consts::PI;
    let mut cum_diss = 0.0;

    let mut times = Vec::with_capacity(steps / stride + 2);
    let mut norms = Vec::with_capacity(steps / stride + 2);
    let mut diss = Vec::with_capacity(steps / stride + 2);
    times.push(0.0);
    norms.push(norm0);
    diss.push(0.0);

    for step in 1..=steps {
        for (z, p) in a.iter_mut().zip(&phase) {
            *z *= *p;
        }
        fft.process(&mut a);
        // the heat substep is exact, so its energy drop is its dissipation
        let mut before = 0.0;
        let mut after = 0.0;
        for (z, d) in a.iter_mut().zip(&decay) {
            let e = z.norm_sqr();
            before += e;
            *z *= *d;
            after += e * d * d;
        }
        let scale = dy * inv_n * std::f64::consts::PI;
        cum_diss += 0.5 * (before - after) * scale;
        let norm_now = after * scale;
        ifft.process(&mut a);
        for (z, p) in a.iter_mut().zip(&phase) {
            *z *= *p * inv_n;
        }
        if step % stride == 0 || step == steps {
            if !norm_now.is_finite() {
                return Err(Error::Instability(format!(
                    "shear mode norm not finite at t = {}",
                    step as f64 * dt
                )));
            }
            times.push(step as f64 * dt);
            norms.push(norm_now);
            diss.push(cum_diss);
        }
    }
    Ok(ModeSolution { times, norm_sq: norms, dissipation: diss, final_field: a })
}
