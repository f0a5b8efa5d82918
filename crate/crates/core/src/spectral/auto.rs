//! Drivers wiring a field and its datum to a configured mode solve.

use crate::error::Error;
use crate::flows::{DatumFamily, InitialDatum, VelocityField};
use crate::rates::{mixing_time, CurveMeta, DecayCurve};
use crate::spectral::{solve_circular_mode, solve_shear_mode};
use crate::spectral::{ModeSolution, RadialMesh, RadialModeProblem, ShearModeProblem};
use crate::Result;

/// Records per returned curve; keeps output sizes bounded on long horizons.
const TARGET_RECORDS: usize = 2000;

fn record_stride(steps: usize) -> usize {
    (steps / TARGET_RECORDS).max(1)
}

/// Solve the `k = 1` shear mode excited by the datum up to `t_end`.
pub fn shear_datum_solution(
    field: &VelocityField,
    datum: &InitialDatum,
    x_diffusion: bool,
    t_end: f64,
) -> Result<ModeSolution> {
    let DatumFamily::Shear { .. } = datum.family else {
        return Err(Error::Parameter("shear solve needs a shear datum".into()));
    };
    let ev = field.shear_eval()?;
    let grid = ShearModeProblem::suggested_grid(datum.half_width());
    let problem = ShearModeProblem::new(&ev, datum.kappa, 1, x_diffusion, grid)?;
    let a0 = problem.sample_amplitude(|y| datum.profile_at(y));
    let dt = problem.suggested_dt();
    let steps = (t_end / dt).ceil() as usize;
    solve_shear_mode(&problem, &a0, t_end, dt, record_stride(steps))
}

/// Solve the `m = 1` radial mode excited by the circular datum up to `t_end`.
pub fn circular_datum_solution(
    field: &VelocityField,
    datum: &InitialDatum,
    t_end: f64,
) -> Result<ModeSolution> {
    let VelocityField::Circular { q } = field else {
        return Err(Error::Parameter("circular solve needs a circular flow".into()));
    };
    let DatumFamily::Circular { .. } = datum.family else {
        return Err(Error::Parameter("circular solve needs a circular datum".into()));
    };
    let w = datum.half_width();
    let r_max = RadialModeProblem::suggested_r_max(w, datum.kappa, t_end);
    let mesh = RadialMesh::graded(w, r_max)?;
    let problem = RadialModeProblem { azimuthal: 1, q: *q, kappa: datum.kappa, mesh };
    problem.check_support_resolution(datum.support())?;
    let a0 = problem.sample_amplitude(|r| datum.profile_at(r));
    let dt = problem.suggested_dt();
    let steps = (t_end / dt).ceil() as usize;
    solve_circular_mode(&problem, &a0, t_end, dt, record_stride(steps))
}

/// Decay curve of the single excited mode for any field family.
pub fn datum_decay_curve(
    field: &VelocityField,
    datum: &InitialDatum,
    x_diffusion: bool,
    t_end: f64,
) -> Result<DecayCurve> {
    let sol = if field.is_shear() {
        shear_datum_solution(field, datum, x_diffusion, t_end)?
    } else {
        circular_datum_solution(field, datum, t_end)?
    };
    let meta = CurveMeta {
        flow: crate::rates::theoretical_exponent(field).family,
        datum: format!("tent(beta={:.6})", datum.beta),
    };
    Ok(sol.decay_curve(datum.kappa, meta))
}

/// Mixing time with horizon auto-extension: solve at `t0`, and if the curve
/// has not reached the threshold, double the horizon (up to `max_doublings`).
pub fn mixing_time_with_extension(
    mut solve: impl FnMut(f64) -> Result<DecayCurve>,
    t0: f64,
    lambda: f64,
    max_doublings: u32,
) -> Result<(f64, DecayCurve)> {
    let mut t_end = t0;
    let mut last_err = None;
    for _ in 0..=max_doublings {
        let curve = solve(t_end)?;
        match mixing_time(&curve, lambda) {
            Ok(tm) => return Ok((tm, curve)),
            Err(Error::HorizonTooShort { required, .. }) => {
                t_end = (2.0 * t_end).max(required * 1.2);
                last_err = Some(Error::HorizonTooShort { horizon: t_end, required });
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Parameter("mixing time search failed".into())))
}
