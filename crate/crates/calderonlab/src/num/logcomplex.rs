//! Complex values stored as (log-modulus, phase).
//!
//! Semiclassical experiments produce values of size `exp(O(1/h))` in both
//! directions; carrying the log-modulus keeps every intermediate finite. The
//! exact zero is `log_mod = -inf`.

use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    /// Natural log of the modulus; `-inf` encodes the exact zero.
    pub log_mod: f64,
    /// Phase in (-pi, pi]; zero by convention for the exact zero.
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mod: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_mod: f64, phase: f64) -> Self {
        if log_mod == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_mod,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: C64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self {
            log_mod: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            Self::new(x.ln(), 0.0)
        } else {
            Self::new((-x).ln(), PI)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mod == f64::NEG_INFINITY
    }

    /// Converts to a `Complex64`; overflows to +-inf components if the
    /// log-modulus exceeds the representable range.
    pub fn to_complex(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        let m = self.log_mod.exp();
        C64::new(m * self.phase.cos(), m * self.phase.sin())
    }

    pub fn mul(&self, other: &LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mod + other.log_mod, self.phase + other.phase)
    }

    pub fn scale_log(&self, dlog: f64) -> LogComplex {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mod + dlog, self.phase)
    }

    /// Log-sum-exp addition with max extraction.
    pub fn add(&self, other: &LogComplex) -> LogComplex {
        sum(&[*self, *other])
    }
}

fn wrap_phase(p: f64) -> f64 {
    let mut w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    if w == -PI {
        w = PI;
    }
    w
}

/// Sum of log-scale complex terms: the largest log-modulus is extracted and the
/// rescaled terms (all of modulus <= 1) are accumulated pairwise in a fixed
/// order, so results are independent of thread count.
pub fn sum(terms: &[LogComplex]) -> LogComplex {
    let mut max_log = f64::NEG_INFINITY;
    for t in terms {
        if t.log_mod > max_log {
            max_log = t.log_mod;
        }
    }
    if max_log == f64::NEG_INFINITY {
        return LogComplex::ZERO;
    }
    let z = pairwise_complex(terms, max_log);
    if z.re == 0.0 && z.im == 0.0 {
        return LogComplex::ZERO;
    }
    LogComplex::new(max_log + z.norm().ln(), z.arg())
}

fn pairwise_complex(terms: &[LogComplex], max_log: f64) -> C64 {
    if terms.len() <= 32 {
        let mut acc = C64::new(0.0, 0.0);
        for t in terms {
            if !t.is_zero() {
                let m = (t.log_mod - max_log).exp();
                acc += C64::new(m * t.phase.cos(), m * t.phase.sin());
            }
        }
        acc
    } else {
        let mid = terms.len() / 2;
        pairwise_complex(&terms[..mid], max_log) + pairwise_complex(&terms[mid..], max_log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_round_trip() {
        let z = LogComplex::from_complex(C64::new(0.0, 0.0));
        assert!(z.is_zero());
        assert_eq!(z.to_complex(), C64::new(0.0, 0.0));
        assert!(z.mul(&LogComplex::from_real(3.0)).is_zero());
    }

    #[test]
    fn sum_matches_direct() {
        let vals = [
            C64::new(1.5, -0.25),
            C64::new(-2.0, 0.125),
            C64::new(0.75, 3.0),
        ];
        let direct: C64 = vals.iter().sum();
        let terms: Vec<_> = vals.iter().map(|&v| LogComplex::from_complex(v)).collect();
        let s = sum(&terms).to_complex();
        assert_relative_eq!(s.re, direct.re, max_relative = 1e-13);
        assert_relative_eq!(s.im, direct.im, max_relative = 1e-13);
    }

    #[test]
    fn huge_dynamic_range_stays_finite() {
        let a = LogComplex::new(5000.0, 0.3);
        let b = LogComplex::new(-5000.0, 1.0);
        let s = sum(&[a, b]);
        assert!(s.log_mod.is_finite());
        assert_relative_eq!(s.log_mod, 5000.0, epsilon = 1e-12);
    }

    proptest! {
        // Associativity of log-scale addition up to 1e-12 relative on the
        // log-modulus, with non-finite results only for the exact zero.
        #[test]
        fn addition_associative(
            l1 in -50.0f64..50.0, p1 in -3.0f64..3.0,
            l2 in -50.0f64..50.0, p2 in -3.0f64..3.0,
            l3 in -50.0f64..50.0, p3 in -3.0f64..3.0,
        ) {
            let a = LogComplex::new(l1, p1);
            let b = LogComplex::new(l2, p2);
            let c = LogComplex::new(l3, p3);
            let ab_c = a.add(&b).add(&c);
            let a_bc = a.add(&b.add(&c));
            // cancellation can make the sum small; compare in linear scale
            let x = ab_c.to_complex();
            let y = a_bc.to_complex();
            let scale = l1.max(l2).max(l3).exp();
            prop_assert!((x - y).norm() <= 1e-12 * scale);
            prop_assert!(ab_c.is_zero() || ab_c.log_mod.is_finite());
        }
    }
}
