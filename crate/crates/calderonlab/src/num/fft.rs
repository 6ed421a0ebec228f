//! Periodic spectral helpers on equispaced samples over t in [0,1).
//!
//! Used for boundary-curve interpolation, spectral differentiation, density
//! upsampling near boundaries, and the log-kernel quadrature weights.

use crate::C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Forward DFT, normalized so that `coeffs[k]` is the coefficient of
/// `exp(2*pi*i*k*t)` for k = 0..M-1 (frequencies above M/2 alias to negative).
pub fn dft(samples: &[C64]) -> Vec<C64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

pub fn idft(coeffs: &[C64]) -> Vec<C64> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(coeffs.len()).process(&mut buf);
    buf
}

/// Signed frequency of bin k for length m.
pub fn signed_freq(k: usize, m: usize) -> i64 {
    if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// Spectral derivative of order `order` of periodic samples.
pub fn diff_periodic(samples: &[C64], order: u32) -> Vec<C64> {
    let m = samples.len();
    let mut coeffs = dft(samples);
    for (k, c) in coeffs.iter_mut().enumerate() {
        let f = signed_freq(k, m);
        // the Nyquist mode of odd derivatives is dropped (its derivative is
        // not representable on the grid)
        if order % 2 == 1 && 2 * k == m {
            *c = C64::new(0.0, 0.0);
            continue;
        }
        let factor = C64::new(0.0, 2.0 * PI * f as f64).powu(order);
        *c *= factor;
    }
    idft(&coeffs)
}

pub fn diff_periodic_real(samples: &[f64], order: u32) -> Vec<f64> {
    let cx: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    diff_periodic(&cx, order).iter().map(|c| c.re).collect()
}

/// Trigonometric interpolation: evaluates the band-limited interpolant of the
/// sample set at an arbitrary parameter t.
pub fn eval_trig(coeffs: &[C64], t: f64) -> C64 {
    let m = coeffs.len();
    let mut acc = C64::new(0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        let f = signed_freq(k, m);
        if 2 * k == m {
            // split the Nyquist mode symmetrically (real cosine)
            let ang = PI * m as f64 * t;
            acc += c * ang.cos();
        } else {
            let ang = 2.0 * PI * f as f64 * t;
            acc += c * C64::new(ang.cos(), ang.sin());
        }
    }
    acc
}

/// Derivative of the trigonometric interpolant at t.
pub fn eval_trig_deriv(coeffs: &[C64], t: f64, order: u32) -> C64 {
    let m = coeffs.len();
    let mut acc = C64::new(0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        let f = signed_freq(k, m);
        if 2 * k == m {
            continue;
        }
        let omega = 2.0 * PI * f as f64;
        let factor = C64::new(0.0, omega).powu(order);
        let ang = omega * t;
        acc += c * factor * C64::new(ang.cos(), ang.sin());
    }
    acc
}

/// Zero-padded upsampling of periodic samples by an integer factor.
pub fn upsample(samples: &[C64], factor: usize) -> Vec<C64> {
    let m = samples.len();
    let mm = m * factor;
    let coeffs = dft(samples);
    let mut padded = vec![C64::new(0.0, 0.0); mm];
    for (k, &c) in coeffs.iter().enumerate() {
        let f = signed_freq(k, m);
        if 2 * k == m {
            // split Nyquist energy between +-M/2 to keep the interpolant real
            let idx_pos = k;
            let idx_neg = mm - k;
            padded[idx_pos] = c * 0.5;
            padded[idx_neg] = c * 0.5;
        } else if f >= 0 {
            padded[k] = c;
        } else {
            padded[(mm as i64 + f) as usize] = c;
        }
    }
    idft(&padded)
}

pub fn upsample_real(samples: &[f64], factor: usize) -> Vec<f64> {
    let cx: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    upsample(&cx, factor).iter().map(|c| c.re).collect()
}

/// Low-pass filter and resample: keeps modes |k| <= keep (smooth exponential
/// roll-off from `rolloff_start`) and evaluates the filtered series on an
/// m_out-point grid.
pub fn resample_lowpass(
    samples: &[C64],
    keep: usize,
    rolloff_start: usize,
    m_out: usize,
) -> Vec<C64> {
    assert!(2 * keep < m_out);
    let filtered = lowpass(samples, keep, rolloff_start);
    let coeffs = dft(&filtered);
    let m = samples.len();
    let mut out_coeffs = vec![C64::new(0.0, 0.0); m_out];
    for (k, &c) in coeffs.iter().enumerate() {
        let f = signed_freq(k, m);
        if f.unsigned_abs() as usize > keep {
            continue;
        }
        let idx = if f >= 0 {
            f as usize
        } else {
            (m_out as i64 + f) as usize
        };
        out_coeffs[idx] = c;
    }
    idft(&out_coeffs)
}

/// Low-pass filtering: keeps modes |k| <= keep and applies a smooth
/// exponential roll-off `exp(-alpha ((|k|-k0)/(keep-k0))^p)` beyond k0.
pub fn lowpass(samples: &[C64], keep: usize, rolloff_start: usize) -> Vec<C64> {
    let m = samples.len();
    let mut coeffs = dft(samples);
    let alpha = 36.0; // ~ machine epsilon attenuation at the edge
    let p = 4;
    for (k, c) in coeffs.iter_mut().enumerate() {
        let f = signed_freq(k, m).unsigned_abs() as usize;
        if f > keep {
            *c = C64::new(0.0, 0.0);
        } else if f > rolloff_start && keep > rolloff_start {
            let x = (f - rolloff_start) as f64 / (keep - rolloff_start) as f64;
            *c *= (-alpha * x.powi(p)).exp();
        }
    }
    idft(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivative_of_trig_polynomial() {
        let m = 64;
        let samples: Vec<C64> = (0..m)
            .map(|j| {
                let t = j as f64 / m as f64;
                C64::new((2.0 * PI * 3.0 * t).sin(), 0.0)
            })
            .collect();
        let d = diff_periodic(&samples, 1);
        for j in 0..m {
            let t = j as f64 / m as f64;
            let expect = 2.0 * PI * 3.0 * (2.0 * PI * 3.0 * t).cos();
            assert_relative_eq!(d[j].re, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn interpolation_hits_offgrid_values() {
        let m = 32;
        let f = |t: f64| (2.0 * PI * t).cos() + 0.5 * (2.0 * PI * 5.0 * t).sin();
        let samples: Vec<C64> = (0..m)
            .map(|j| C64::new(f(j as f64 / m as f64), 0.0))
            .collect();
        let coeffs = dft(&samples);
        for &t in &[0.013, 0.377, 0.912] {
            assert_relative_eq!(eval_trig(&coeffs, t).re, f(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn upsample_preserves_band_limited_signal() {
        let m = 16;
        let f = |t: f64| (2.0 * PI * 2.0 * t).cos();
        let samples: Vec<C64> = (0..m)
            .map(|j| C64::new(f(j as f64 / m as f64), 0.0))
            .collect();
        let up = upsample(&samples, 4);
        for (j, u) in up.iter().enumerate() {
            let t = j as f64 / (4 * m) as f64;
            assert_relative_eq!(u.re, f(t), epsilon = 1e-12);
        }
    }
}
