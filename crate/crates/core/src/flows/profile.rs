//! One-dimensional shear profiles `u(y)` and their derivatives.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Number of samples used when tabulating a profile.
pub const SAMPLED_POINTS: usize = 1 << 14;

/// A shear profile, either analytic (exact derivatives of any order) or
/// tabulated (linear interpolation, finite-difference derivatives).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Zero,
    Const(f64),
    /// `u(y) = sin y`
    Sin,
    /// `u(y) = sin^k y`
    SinPow(u32),
    /// `u(y) = y^n`
    Monomial(u32),
    Sampled(SampledProfile),
}

impl Profile {
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Const(c) => *c,
            Profile::Sin => y.sin(),
            Profile::SinPow(k) => y.sin().powi(*k as i32),
            Profile::Monomial(n) => y.powi(*n as i32),
            Profile::Sampled(s) => s.eval(y),
        }
    }

    /// `u^(order)(y)`; order 0 is the value itself. Exact for analytic
    /// variants, central differences on the table for sampled ones.
    pub fn derivative(&self, y: f64, order: u32) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Const(c) => {
                if order == 0 {
                    *c
                } else {
                    0.0
                }
            }
            // d^j sin(y) = sin(y + j pi/2)
            Profile::Sin => (y + order as f64 * std::f64::consts::FRAC_PI_2).sin(),
            Profile::SinPow(k) => sin_power_series(*k).derivative(y, order),
            Profile::Monomial(n) => {
                let n = *n;
                if order > n {
                    return 0.0;
                }
                let mut c = 1.0;
                for j in 0..order {
                    c *= (n - j) as f64;
                }
                c * y.powi((n - order) as i32)
            }
            Profile::Sampled(s) => s.derivative(y, order),
        }
    }
}

/// Finite trigonometric series `c0 + sum a_i sin(w_i y) + sum b_i cos(w_i y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub constant: f64,
    /// (frequency, coefficient) pairs of sine terms.
    pub sin_terms: Vec<(f64, f64)>,
    /// (frequency, coefficient) pairs of cosine terms.
    pub cos_terms: Vec<(f64, f64)>,
}

impl TrigSeries {
    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        let mut v = self.constant;
        for &(w, c) in &self.sin_terms {
            v += c * (w * y).sin();
        }
        for &(w, c) in &self.cos_terms {
            v += c * (w * y).cos();
        }
        v
    }

    /// Exact derivative via the phase shift `d^j sin(wy) = w^j sin(wy + j pi/2)`.
    pub fn derivative(&self, y: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(y);
        }
        let shift = order as f64 * std::f64::consts::FRAC_PI_2;
        let mut v = 0.0;
        for &(w, c) in &self.sin_terms {
            v += c * w.powi(order as i32) * (w * y + shift).sin();
        }
        for &(w, c) in &self.cos_terms {
            v += c * w.powi(order as i32) * (w * y + shift).cos();
        }
        v
    }

    /// Coefficient-wise uniform bound `|u| <= c0 + sum |a_i| + sum |b_i|`.
    pub fn sup_bound(&self) -> f64 {
        self.constant.abs()
            + self.sin_terms.iter().map(|(_, c)| c.abs()).sum::<f64>()
            + self.cos_terms.iter().map(|(_, c)| c.abs()).sum::<f64>()
    }
}

/// Expand `sin^k y` into a finite trig series by binomial expansion of
/// `((e^{iy} - e^{-iy}) / 2i)^k`.
pub fn sin_power_series(k: u32) -> TrigSeries {
    use num_complex::Complex64;
    let two_i = Complex64::new(0.0, 2.0);
    let scale = two_i.powi(k as i32).inv();
    // complex coefficient of e^{i f y} indexed by f = 2j - k
    let mut binom = 1.0f64;
    let mut terms: Vec<(i64, Complex64)> = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
        }
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        terms.push((2 * j as i64 - k as i64, scale * binom * sign));
    }
    let mut series = TrigSeries { constant: 0.0, sin_terms: vec![], cos_terms: vec![] };
    for &(f, c) in &terms {
        if f < 0 {
            continue; // folded into the +f partner below
        }
        if f == 0 {
            series.constant += c.re;
            continue;
        }
        let partner = terms
            .iter()
            .find(|&&(g, _)| g == -f)
            .map(|&(_, c)| c)
            .unwrap_or(Complex64::new(0.0, 0.0));
        // c e^{ify} + p e^{-ify} = (c + p) cos fy + i (c - p) sin fy
        let cos_c = (c + partner).re;
        let sin_c = -(c - partner).im;
        if cos_c.abs() > 1e-15 {
            series.cos_terms.push((f as f64, cos_c));
        }
        if sin_c.abs() > 1e-15 {
            series.sin_terms.push((f as f64, sin_c));
        }
    }
    series
}

/// Truncated lacunary series `sum_{l=1..L} 3^{-alpha l} sin(3^l y)`.
pub fn weierstrass_series(alpha: f64, levels: u32) -> TrigSeries {
    let sin_terms = (1..=levels)
        .map(|l| (3f64.powi(l as i32), 3f64.powf(-alpha * l as f64)))
        .collect();
    TrigSeries { constant: 0.0, sin_terms, cos_terms: vec![] }
}

/// A profile tabulated on an equispaced grid with linear interpolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    pub y_min: f64,
    pub step: f64,
    pub values: Vec<f64>,
    /// Periodic tables wrap; aperiodic ones clamp to the edge values.
    pub periodic: bool,
}

impl SampledProfile {
    /// Tabulate `f` on `[y_min, y_max)` (periodic) or `[y_min, y_max]`.
    pub fn from_fn(f: impl Fn(f64) -> f64, y_min: f64, y_max: f64, periodic: bool) -> Result<Self> {
        if !(y_max > y_min) {
            return Err(Error::Parameter("sampled profile needs y_max > y_min".into()));
        }
        let n = SAMPLED_POINTS;
        let span = y_max - y_min;
        let step = if periodic { span / n as f64 } else { span / (n - 1) as f64 };
        let values = (0..n).map(|i| f(y_min + i as f64 * step)).collect();
        Ok(SampledProfile { y_min, step, values, periodic })
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        let n = self.values.len();
        let mut s = (y - self.y_min) / self.step;
        if self.periodic {
            let period = n as f64;
            s = s.rem_euclid(period);
            let i = s as usize % n;
            let frac = s - s.floor();
            let j = (i + 1) % n;
            self.values[i] * (1.0 - frac) + self.values[j] * frac
        } else {
            if s <= 0.0 {
                return self.values[0];
            }
            if s >= (n - 1) as f64 {
                return self.values[n - 1];
            }
            let i = s as usize;
            let frac = s - i as f64;
            self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
        }
    }

    /// Iterated central differences at the table resolution. Adequate for
    /// locating and classifying critical points of smooth tabulated data;
    /// noise grows with the order, which the detection threshold absorbs.
    pub fn derivative(&self, y: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(y);
        }
        let h = self.step;
        (self.derivative(y + h, order - 1) - self.derivative(y - h, order - 1)) / (2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_power_expansion_matches_direct_eval() {
        for k in 1..=6u32 {
            let series = sin_power_series(k);
            for i in 0..64 {
                let y = i as f64 * 0.1 - 3.0;
                let direct = y.sin().powi(k as i32);
                assert!((series.eval(y) - direct).abs() < 1e-12, "k={k} y={y}");
            }
        }
    }

    #[test]
    fn sin_cubed_is_classic_identity() {
        // sin^3 y = (3 sin y - sin 3y) / 4
        let series = sin_power_series(3);
        assert_eq!(series.cos_terms.len(), 0);
        let mut terms = series.sin_terms.clone();
        terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!((terms[0].0 - 1.0).abs() < 1e-14 && (terms[0].1 - 0.75).abs() < 1e-14);
        assert!((terms[1].0 - 3.0).abs() < 1e-14 && (terms[1].1 + 0.25).abs() < 1e-14);
    }

    #[test]
    fn monomial_derivatives() {
        let p = Profile::Monomial(3);
        assert_eq!(p.derivative(2.0, 0), 8.0);
        assert_eq!(p.derivative(2.0, 1), 12.0);
        assert_eq!(p.derivative(2.0, 2), 12.0);
        assert_eq!(p.derivative(2.0, 3), 6.0);
        assert_eq!(p.derivative(2.0, 4), 0.0);
    }

    #[test]
    fn weierstrass_vanishes_at_origin() {
        let s = weierstrass_series(0.5, 20);
        assert_eq!(s.eval(0.0), 0.0);
    }

    #[test]
    fn weierstrass_partial_sums_cauchy() {
        // |u_L - u_{L+1}| <= 3^{-alpha (L+1)} uniformly
        let alpha = 0.5;
        for levels in [3u32, 6, 9] {
            let a = weierstrass_series(alpha, levels);
            let b = weierstrass_series(alpha, levels + 1);
            let bound = 3f64.powf(-alpha * (levels + 1) as f64);
            for i in 0..512 {
                let y = i as f64 * (2.0 * std::f64::consts::PI) / 512.0;
                assert!((a.eval(y) - b.eval(y)).abs() <= bound + 1e-15);
            }
        }
    }

    #[test]
    fn sampled_profile_interpolates_and_wraps() {
        let tau = 2.0 * std::f64::consts::PI;
        let s = SampledProfile::from_fn(|y| y.sin(), 0.0, tau, true).unwrap();
        for i in 0..100 {
            let y = -5.0 + i as f64 * 0.37;
            assert!((s.eval(y) - y.sin()).abs() < 1e-7);
        }
    }

    #[test]
    fn sampled_derivative_tracks_analytic() {
        let tau = 2.0 * std::f64::consts::PI;
        let s = SampledProfile::from_fn(|y| y.sin(), 0.0, tau, true).unwrap();
        assert!((s.derivative(1.0, 1) - 1f64.cos()).abs() < 1e-6);
        assert!((s.derivative(1.0, 2) + 1f64.sin()).abs() < 1e-3);
    }
}
