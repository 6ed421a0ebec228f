//! Special functions: complex error function (Faddeeva), polynomial
//! smoothsteps, and the standard compactly supported mollifier bump.

use crate::C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const WEIDEMAN_N: usize = 48;

/// Rational-expansion coefficients for the Faddeeva function (Weideman's
/// method). Computed once; accurate to ~1e-14 uniformly on the closed upper
/// half plane at N = 48.
fn weideman_coeffs() -> &'static (f64, Vec<f64>) {
    static COEFFS: OnceLock<(f64, Vec<f64>)> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // Fourier coefficients of theta -> exp(-t^2)(L^2 + t^2), t = L tan(theta/2)
        let mut a = vec![0.0; n + 1];
        for (order, slot) in a.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in (1 - (m as i64))..(m as i64) {
                let theta = k as f64 * PI / m as f64;
                let t = l * (theta / 2.0).tan();
                let f = (-t * t).exp() * (l * l + t * t);
                acc += f * (order as f64 * theta).cos();
            }
            *slot = acc / m2 as f64;
        }
        (l, a)
    })
}

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.
fn faddeeva_upper(z: C64) -> C64 {
    let (l, a) = weideman_coeffs();
    let iz = C64::new(-z.im, z.re);
    let denom = C64::new(*l, 0.0) - iz;
    let big_z = (C64::new(*l, 0.0) + iz) / denom;
    // Horner on a_1..a_N (a_0 is absorbed by the 1/sqrt(pi) tail term)
    let mut p = C64::new(0.0, 0.0);
    for k in (1..=WEIDEMAN_N).rev() {
        p = p * big_z + a[k];
    }
    p * C64::new(2.0, 0.0) / (denom * denom) + C64::new(1.0 / PI.sqrt(), 0.0) / denom
}

/// Complementary error function of a complex argument.
pub fn erfc(z: C64) -> C64 {
    if z.re < 0.0 {
        return C64::new(2.0, 0.0) - erfc(-z);
    }
    // erfc(z) = exp(-z^2) w(iz), and Im(iz) = Re z >= 0 keeps w well scaled
    let iz = C64::new(-z.im, z.re);
    (-z * z).exp() * faddeeva_upper(iz)
}

pub fn erf(z: C64) -> C64 {
    C64::new(1.0, 0.0) - erfc(z)
}

/// Quintic smoothstep: 0 for x <= 0, 1 for x >= 1, C^2 across the seams.
pub fn smoothstep_c2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

/// Degree-9 smoothstep, C^4 across the seams.
pub fn smoothstep_c4(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let x2 = x * x;
        x2 * x2 * x * (126.0 + x * (-420.0 + x * (540.0 + x * (-315.0 + 70.0 * x))))
    }
}

/// Standard mollifier profile: exp(1 - 1/(1 - r^2)) for r < 1, zero beyond.
/// Smooth, compactly supported, equal to 1 at r = 0.
pub fn mollifier(r: f64) -> f64 {
    let r2 = r * r;
    if r2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn real_erfc_reference_values() {
        assert_relative_eq!(erfc(C64::new(0.5, 0.0)).re, 0.47950012218695346, epsilon = 1e-13);
        assert_relative_eq!(erfc(C64::new(1.0, 0.0)).re, 0.15729920705028513, epsilon = 1e-13);
        assert_relative_eq!(erfc(C64::new(2.0, 0.0)).re, 0.004677734981063127, epsilon = 1e-12);
        assert_relative_eq!(erfc(C64::new(-1.0, 0.0)).re, 2.0 - 0.15729920705028513, epsilon = 1e-13);
        assert_relative_eq!(erfc(C64::new(0.0, 0.0)).re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_erf_reference_value() {
        // erf(1+i), standard tabulated value
        let v = erf(C64::new(1.0, 1.0));
        assert_relative_eq!(v.re, 1.3161512816979476, epsilon = 1e-12);
        assert_relative_eq!(v.im, 0.19045346923783468, epsilon = 1e-12);
    }

    #[test]
    fn conjugation_symmetry() {
        let z = C64::new(0.7, -1.3);
        let a = erfc(z);
        let b = erfc(z.conj()).conj();
        assert_relative_eq!(a.re, b.re, epsilon = 1e-13);
        assert_relative_eq!(a.im, b.im, epsilon = 1e-13);
    }

    #[test]
    fn smoothstep_seams() {
        assert_eq!(smoothstep_c2(0.0), 0.0);
        assert_eq!(smoothstep_c2(1.0), 1.0);
        assert_relative_eq!(smoothstep_c2(0.5), 0.5, epsilon = 1e-15);
        assert_eq!(smoothstep_c4(0.0), 0.0);
        assert_eq!(smoothstep_c4(1.0), 1.0);
        assert_relative_eq!(smoothstep_c4(0.5), 0.5, epsilon = 1e-15);
        // C^2: second difference stays bounded across the seam
        let h = 1e-4;
        let dd = (smoothstep_c2(h) - 2.0 * smoothstep_c2(0.0) + smoothstep_c2(-h)) / (h * h);
        assert!(dd.abs() < 1.0);
    }
}
