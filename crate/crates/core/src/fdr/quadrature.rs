//! Midpoint quadratures over the region where the endpoint variance is
//! non-negligible: the datum support widened by the diffusive envelope.
//!
//! Cross-streamline cells are uniform (width `w/8`) across the support and
//! its margin `[c - 2w, c + 2w]` — matching the region split used when
//! estimating the two contributions separately — then coarsen geometrically
//! out to `support (+) envelope_factor * sqrt(2 kappa t)`. Along the
//! streamline the integrand of every datum here is a trigonometric
//! polynomial of degree two, which the equispaced midpoint rule integrates
//! exactly for any node count >= 3.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::flows::{DatumFamily, Domain, InitialDatum, TAU};
use crate::Result;

/// Default diffusive envelope multiplier (Gaussian tails at six standard
/// deviations are negligible against every tolerance used here).
pub const ENVELOPE_FACTOR: f64 = 6.0;
/// Geometric coarsening ratio outside the support margin.
const GROWTH: f64 = 1.4;
/// Cells per datum half-width inside the support margin.
const FINE_PER_HALF_WIDTH: usize = 8;

/// One cross-streamline midpoint cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowCell {
    pub node: f64,
    pub width: f64,
}

/// Along-streamline geometry of the tensor rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowGeometry {
    /// Cells in `y`, full torus in `x` with `x_nodes` midpoint nodes.
    ShearX { x_nodes: usize },
    /// Cells in `r` (weights carry `r dr`), full circle in `theta`.
    PolarTheta { theta_nodes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialQuadrature {
    pub geometry: RowGeometry,
    pub rows: Vec<RowCell>,
    /// Cross-streamline extent actually covered.
    pub cross_range: (f64, f64),
}

impl SpatialQuadrature {
    /// Tensor rule for a shear datum on its domain at horizon `t_max`.
    pub fn shear(
        datum: &InitialDatum,
        domain: &Domain,
        t_max: f64,
        envelope_factor: f64,
    ) -> Result<Self> {
        let DatumFamily::Shear { center, .. } = datum.family else {
            return Err(Error::Parameter("shear quadrature needs a shear datum".into()));
        };
        let w = datum.half_width();
        let env = envelope_factor * (2.0 * datum.kappa * t_max).sqrt();
        let (lo_clip, hi_clip) = match domain {
            Domain::Torus2 => (center - std::f64::consts::PI, center + std::f64::consts::PI),
            Domain::TorusStrip { half_width } => (-*half_width, *half_width),
            Domain::PolarPlane { .. } => {
                return Err(Error::Parameter("shear quadrature on a polar domain".into()))
            }
        };
        let lo = (center - (w + env).max(2.0 * w)).max(lo_clip);
        let hi = (center + (w + env).max(2.0 * w)).min(hi_clip);
        let rows = graded_cells(center, w, lo, hi);
        let x_nodes = ((TAU / (w / FINE_PER_HALF_WIDTH as f64)).ceil() as usize).max(8);
        Ok(SpatialQuadrature {
            geometry: RowGeometry::ShearX { x_nodes },
            rows,
            cross_range: (lo, hi),
        })
    }

    /// Tensor rule for a circular datum at horizon `t_max`.
    pub fn circular(datum: &InitialDatum, t_max: f64, envelope_factor: f64) -> Result<Self> {
        let DatumFamily::Circular { center_radius } = datum.family else {
            return Err(Error::Parameter("circular quadrature needs a circular datum".into()));
        };
        let w = datum.half_width();
        let env = envelope_factor * (2.0 * datum.kappa * t_max).sqrt();
        // keep a positive floor: the r dr weight kills the contribution there
        let lo = (center_radius - (w + env).max(2.0 * w)).max(0.05 * w);
        let hi = center_radius + (w + env).max(2.0 * w);
        let rows = graded_cells(center_radius, w, lo, hi);
        let theta_nodes = ((TAU / (w / FINE_PER_HALF_WIDTH as f64)).ceil() as usize).max(8);
        Ok(SpatialQuadrature {
            geometry: RowGeometry::PolarTheta { theta_nodes },
            rows,
            cross_range: (lo, hi),
        })
    }

    /// Sum of all tensor weights (with the `r dr` weight in the polar case).
    pub fn measure(&self) -> f64 {
        match self.geometry {
            RowGeometry::ShearX { .. } => {
                TAU * self.rows.iter().map(|c| c.width).sum::<f64>()
            }
            RowGeometry::PolarTheta { .. } => {
                TAU * self.rows.iter().map(|c| c.node * c.width).sum::<f64>()
            }
        }
    }

    /// Analytic measure of the covered region.
    pub fn region_measure(&self) -> f64 {
        let (lo, hi) = self.cross_range;
        match self.geometry {
            RowGeometry::ShearX { .. } => TAU * (hi - lo),
            RowGeometry::PolarTheta { .. } => TAU * 0.5 * (hi * hi - lo * lo),
        }
    }

    pub fn covers(&self, support: (f64, f64)) -> bool {
        self.cross_range.0 <= support.0 + 1e-12 && self.cross_range.1 >= support.1 - 1e-12
    }

    /// Per-row weight of the cross-streamline integral (excluding the
    /// along-streamline factor).
    pub fn row_weight(&self, cell: &RowCell) -> f64 {
        match self.geometry {
            RowGeometry::ShearX { .. } => cell.width,
            RowGeometry::PolarTheta { .. } => cell.node * cell.width,
        }
    }
}

/// Midpoint cells: uniform `w/8` across `[center - 2w, center + 2w]`
/// (clipped), geometric growth beyond, exactly tiling `[lo, hi]`.
fn graded_cells(center: f64, w: f64, lo: f64, hi: f64) -> Vec<RowCell> {
    let fine = w / FINE_PER_HALF_WIDTH as f64;
    let mut edges = vec![];
    // right half: from center to hi
    let mut right = vec![center];
    let mut x = center;
    let fine_edge = (center + 2.0 * w).min(hi);
    while x < fine_edge - 1e-15 {
        x = (x + fine).min(fine_edge);
        right.push(x);
    }
    let mut step = fine;
    while x < hi - 1e-15 {
        step *= GROWTH;
        x = (x + step).min(hi);
        right.push(x);
    }
    // left half mirrored down to lo
    let mut left = vec![center];
    x = center;
    let fine_edge = (center - 2.0 * w).max(lo);
    while x > fine_edge + 1e-15 {
        x = (x - fine).max(fine_edge);
        left.push(x);
    }
    step = fine;
    while x > lo + 1e-15 {
        step *= GROWTH;
        x = (x - step).max(lo);
        left.push(x);
    }
    left.reverse();
    edges.extend_from_slice(&left);
    edges.extend_from_slice(&right[1..]);
    edges
        .windows(2)
        .map(|e| RowCell { node: 0.5 * (e[0] + e[1]), width: e[1] - e[0] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::{make_initial_datum, Profile, VelocityField};

    #[test]
    fn weights_sum_to_region_measure() {
        let f = VelocityField::CriticalShear { profile: Profile::Sin, order: 1 };
        let d = make_initial_datum(&f, &Domain::Torus2, 1e-3).unwrap();
        let q = SpatialQuadrature::shear(&d, &Domain::Torus2, 40.0, ENVELOPE_FACTOR).unwrap();
        let rel = (q.measure() - q.region_measure()).abs() / q.region_measure();
        assert!(rel < 1e-10, "relative defect {rel}");

        let fc = VelocityField::Circular { q: 2.0 };
        let dc = make_initial_datum(&fc, &Domain::PolarPlane { r_max: 5.0 }, 1e-3).unwrap();
        let qc = SpatialQuadrature::circular(&dc, 10.0, ENVELOPE_FACTOR).unwrap();
        let rel = (qc.measure() - qc.region_measure()).abs() / qc.region_measure();
        assert!(rel < 1e-10, "polar relative defect {rel}");
    }

    #[test]
    fn quadrature_covers_support() {
        let f = VelocityField::CriticalShear { profile: Profile::Sin, order: 1 };
        let d = make_initial_datum(&f, &Domain::Torus2, 1e-3).unwrap();
        let q = SpatialQuadrature::shear(&d, &Domain::Torus2, 5.0, ENVELOPE_FACTOR).unwrap();
        assert!(q.covers(d.support()));
    }

    #[test]
    fn fine_cells_meet_spacing_contract() {
        let f = VelocityField::CriticalShear { profile: Profile::Sin, order: 1 };
        let d = make_initial_datum(&f, &Domain::Torus2, 1e-3).unwrap();
        let q = SpatialQuadrature::shear(&d, &Domain::Torus2, 5.0, ENVELOPE_FACTOR).unwrap();
        let (lo, hi) = d.support();
        let w = d.half_width();
        for cell in q.rows.iter().filter(|c| c.node >= lo && c.node <= hi) {
            assert!(cell.width <= w / 8.0 + 1e-12);
        }
    }

    #[test]
    fn torus_wrap_is_clipped() {
        // large envelope: the cells must tile at most one period
        let f = VelocityField::CriticalShear { profile: Profile::Sin, order: 1 };
        let d = make_initial_datum(&f, &Domain::Torus2, 1e-2).unwrap();
        let q = SpatialQuadrature::shear(&d, &Domain::Torus2, 1e5, ENVELOPE_FACTOR).unwrap();
        let total: f64 = q.rows.iter().map(|c| c.width).sum();
        assert!(total <= TAU + 1e-9);
    }
}
