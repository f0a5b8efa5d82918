//! Small statistical helpers shared by the estimators and their tests.

/// Pairwise (binary-tree) summation: deterministic for a fixed element order
/// and independent of how work was distributed across threads upstream.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    assert!(n >= 2, "variance needs at least two samples");
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|&x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (n - 1) as f64
}

/// Standard error of the sample mean.
pub fn stderr_of_mean(xs: &[f64]) -> f64 {
    (sample_variance(xs) / xs.len() as f64).sqrt()
}

/// Standard error of the unbiased sample variance, from the fourth central
/// moment: `Var(s^2) = (m4 - (n-3)/(n-1) s^4) / n`.
pub fn stderr_of_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = mean(xs);
    let dev4: Vec<f64> = xs.iter().map(|&x| (x - m).powi(4)).collect();
    let m4 = pairwise_sum(&dev4) / n;
    let s2 = sample_variance(xs);
    let var_s2 = (m4 - (n - 3.0) / (n - 1.0) * s2 * s2) / n;
    var_s2.max(0.0).sqrt()
}

/// Least-squares line `y = a x + b`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let a = sxy / sxx;
    (a, my - a * mx)
}
