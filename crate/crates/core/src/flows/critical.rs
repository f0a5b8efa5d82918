//! Numerical detection and classification of critical points of a shear
//! profile: zeros of `u'`, each tagged with the smallest `n` such that
//! `u^(n)(y_crit) != 0`.

use crate::error::Error;
use crate::flows::{Domain, Profile};
use crate::Result;

/// Bisection tolerance for locating zeros of `u'` (and tangential zeros via
/// `u''`).
const LOCATE_TOL: f64 = 1e-10;
/// A derivative counts as nonvanishing when it exceeds this fraction of
/// `||u||_inf`; robust against finite-difference noise on sampled profiles.
const ORDER_THRESHOLD: f64 = 1e-5;
/// Highest derivative probed before declaring the order indeterminate.
const MAX_PROBED_ORDER: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub y: f64,
    /// Smallest `n >= 1` with `u^(n)(y) != 0`; `u'` vanishes to order `n - 1`.
    pub order: u32,
}

/// Locate the critical points of `u` on the shear domain.
///
/// Zeros of `u'` are found two ways and merged: sign changes of `u'`
/// (bisection), and sign changes of `u''` at which `|u'|` is negligible
/// (tangential zeros, where `u'` touches zero without crossing — these carry
/// the even-order vanishing). Strictly monotone profiles yield an empty list.
pub fn critical_points(
    profile: &Profile,
    domain: &Domain,
    grid_resolution: usize,
) -> Result<Vec<CriticalPoint>> {
    if grid_resolution < 256 {
        return Err(Error::Parameter(format!(
            "grid_resolution = {grid_resolution} < 256"
        )));
    }
    let (y_lo, y_hi) = domain.y_range()?;
    let periodic = domain.is_periodic_y();
    let n = grid_resolution;
    let span = y_hi - y_lo;
    let nodes: Vec<f64> = if periodic {
        (0..n).map(|i| y_lo + span * i as f64 / n as f64).collect()
    } else {
        (0..=n).map(|i| y_lo + span * i as f64 / n as f64).collect()
    };

    let u_sup = nodes
        .iter()
        .map(|&y| profile.eval(y).abs())
        .fold(0.0f64, f64::max);
    let deriv_scale = u_sup.max(1e-30);
    let zero_tol = 1e-8 * deriv_scale.max(1.0);

    let d1 = |y: f64| profile.derivative(y, 1);
    let d2 = |y: f64| profile.derivative(y, 2);

    let mut roots = sign_change_roots(&nodes, periodic, span, &d1);
    for y in sign_change_roots(&nodes, periodic, span, &d2) {
        if d1(y).abs() < zero_tol {
            roots.push(y);
        }
    }
    if periodic {
        for r in roots.iter_mut() {
            *r = y_lo + (*r - y_lo).rem_euclid(span);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    if periodic && roots.len() > 1 {
        // the two ends of the scan can find the same wrapped root
        if (roots[roots.len() - 1] - span - roots[0]).abs() < 1e-8 {
            roots.pop();
        }
    }

    let mut out = Vec::with_capacity(roots.len());
    for y in roots {
        if d1(y).abs() > ORDER_THRESHOLD * deriv_scale {
            continue; // spurious: u' not actually small here
        }
        let mut order = None;
        for j in 2..=MAX_PROBED_ORDER {
            if profile.derivative(y, j).abs() > ORDER_THRESHOLD * deriv_scale {
                order = Some(j);
                break;
            }
        }
        match order {
            Some(o) => out.push(CriticalPoint { y, order: o }),
            None => return Err(Error::IndeterminateOrder { y, probed: MAX_PROBED_ORDER }),
        }
    }
    Ok(out)
}

/// Roots of `f` located from strict sign changes between consecutive grid
/// nodes (refined by bisection), plus isolated node-exact zeros. Identically
/// vanishing `f` contributes no roots.
fn sign_change_roots(
    nodes: &[f64],
    periodic: bool,
    span: f64,
    f: &impl Fn(f64) -> f64,
) -> Vec<f64> {
    let vals: Vec<f64> = nodes.iter().map(|&y| f(y)).collect();
    let n = nodes.len();
    let mut roots = Vec::new();
    let pairs = if periodic { n } else { n - 1 };
    for i in 0..pairs {
        let (ya, fa) = (nodes[i], vals[i]);
        let (yb, fb) = if i + 1 < n {
            (nodes[i + 1], vals[i + 1])
        } else {
            (nodes[0] + span, vals[0])
        };
        if fa * fb < 0.0 {
            roots.push(bisect(ya, yb, fa, f));
        }
    }
    for i in 0..n {
        if vals[i] == 0.0 {
            let prev = if i > 0 { vals[i - 1] } else if periodic { vals[n - 1] } else { vals[0] };
            let next = if i + 1 < n { vals[i + 1] } else if periodic { vals[0] } else { vals[i] };
            if prev != 0.0 || next != 0.0 {
                roots.push(nodes[i]);
            }
        }
    }
    roots
}

fn bisect(mut a: f64, mut b: f64, mut fa: f64, f: &impl Fn(f64) -> f64) -> f64 {
    while b - a > LOCATE_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn sin_has_two_simple_critical_points() {
        let pts = critical_points(&Profile::Sin, &Domain::Torus2, 1024).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].y - FRAC_PI_2).abs() < 1e-8);
        assert!((pts[1].y - 3.0 * FRAC_PI_2).abs() < 1e-8);
        // u'' = -sin != 0 there
        assert_eq!(pts[0].order, 2);
        assert_eq!(pts[1].order, 2);
    }

    #[test]
    fn sin_cubed_has_flat_points_at_0_and_pi() {
        // u' = 3 sin^2 y cos y vanishes to order 2 at y = 0 (tangentially),
        // so the smallest nonvanishing derivative there is u''' : order 3.
        let pts = critical_points(&Profile::SinPow(3), &Domain::Torus2, 1024).unwrap();
        let at_zero = pts.iter().find(|p| p.y.abs() < 1e-8 || (p.y - 2.0 * PI).abs() < 1e-8);
        assert_eq!(at_zero.expect("critical point at 0").order, 3);
        let at_pi = pts.iter().find(|p| (p.y - PI).abs() < 1e-8).unwrap();
        assert_eq!(at_pi.order, 3);
        // the crossings at pi/2 and 3pi/2 stay simple
        let simple = pts.iter().find(|p| (p.y - FRAC_PI_2).abs() < 1e-8).unwrap();
        assert_eq!(simple.order, 2);
    }

    #[test]
    fn monotone_profile_has_none() {
        let strip = Domain::TorusStrip { half_width: 3.0 };
        let pts = critical_points(&Profile::Monomial(1), &strip, 512).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn sampled_sin_matches_analytic_detection() {
        let tau = 2.0 * PI;
        let table =
            crate::flows::SampledProfile::from_fn(|y| y.sin(), 0.0, tau, true).unwrap();
        let pts = critical_points(&Profile::Sampled(table), &Domain::Torus2, 1024).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].y - FRAC_PI_2).abs() < 1e-4);
        assert_eq!(pts[0].order, 2);
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(critical_points(&Profile::Sin, &Domain::Torus2, 128).is_err());
    }

    #[test]
    fn degenerate_profiles_yield_no_points() {
        // u' vanishes identically: nothing to classify, nothing to report
        let pts = critical_points(&Profile::Zero, &Domain::Torus2, 512).unwrap();
        assert!(pts.is_empty());
        let pts = critical_points(&Profile::Const(2.5), &Domain::Torus2, 512).unwrap();
        assert!(pts.is_empty());
    }
}
