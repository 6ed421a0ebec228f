//! Small least-squares helpers for decay-slope fits.

/// Ordinary least squares fit y = intercept + slope * x.
/// Returns (intercept, slope, max absolute residual).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2);
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let max_resid = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    (intercept, slope, max_resid)
}
