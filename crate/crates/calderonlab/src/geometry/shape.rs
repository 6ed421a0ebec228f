//! Named analytic boundary shapes, deserializable from experiment files.

use super::curve::BoundaryCurve;
use crate::num::{fft, special};
use crate::{C64, Pt2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
    },
    /// r(t) = radius * (1 + amplitude * cos(2 pi mode t)) around `center`.
    FourierCircle {
        center: [f64; 2],
        radius: f64,
        amplitude: f64,
        mode: u32,
    },
    /// A stadium (two half discs joined by straight segments) smoothed by a
    /// spectral low-pass to an analytic trigonometric curve.
    SmoothedStadium {
        center: [f64; 2],
        half_length: f64,
        radius: f64,
        modes: usize,
    },
    /// Disc of radius `radius` with a radial dent: r(t) is multiplied by
    /// (1 - depth * window(t)) on the window [t0, t1], with a C^4 profile.
    /// The boundary coincides with the undeformed circle outside the window.
    DentedCircle {
        center: [f64; 2],
        radius: f64,
        depth: f64,
        window: [f64; 2],
    },
}

impl ShapeSpec {
    pub fn center(&self) -> Pt2 {
        let c = match self {
            ShapeSpec::Circle { center, .. }
            | ShapeSpec::Ellipse { center, .. }
            | ShapeSpec::FourierCircle { center, .. }
            | ShapeSpec::SmoothedStadium { center, .. }
            | ShapeSpec::DentedCircle { center, .. } => center,
        };
        Pt2::new(c[0], c[1])
    }

    pub fn build_curve(&self, m: usize) -> BoundaryCurve {
        match *self {
            ShapeSpec::Circle { center, radius } => {
                BoundaryCurve::from_analytic(m, move |t| {
                    let w = 2.0 * PI;
                    let (c, s) = ((w * t).cos(), (w * t).sin());
                    (
                        Pt2::new(center[0] + radius * c, center[1] + radius * s),
                        Pt2::new(-radius * w * s, radius * w * c),
                        Pt2::new(-radius * w * w * c, -radius * w * w * s),
                    )
                })
            }
            ShapeSpec::Ellipse { center, a, b } => BoundaryCurve::from_analytic(m, move |t| {
                let w = 2.0 * PI;
                let (c, s) = ((w * t).cos(), (w * t).sin());
                (
                    Pt2::new(center[0] + a * c, center[1] + b * s),
                    Pt2::new(-a * w * s, b * w * c),
                    Pt2::new(-a * w * w * c, -b * w * w * s),
                )
            }),
            ShapeSpec::FourierCircle {
                center,
                radius,
                amplitude,
                mode,
            } => {
                let k = mode as f64;
                BoundaryCurve::from_analytic(m, move |t| {
                    let w = 2.0 * PI;
                    let r = radius * (1.0 + amplitude * (w * k * t).cos());
                    let r1 = -radius * amplitude * w * k * (w * k * t).sin();
                    let r2 = -radius * amplitude * (w * k) * (w * k) * (w * k * t).cos();
                    let (c, s) = ((w * t).cos(), (w * t).sin());
                    let e = Pt2::new(c, s);
                    let e1 = Pt2::new(-w * s, w * c);
                    let e2 = Pt2::new(-w * w * c, -w * w * s);
                    (
                        Pt2::new(center[0], center[1]) + e * r,
                        e * r1 + e1 * r,
                        e * r2 + e1 * (2.0 * r1) + e2 * r,
                    )
                })
            }
            ShapeSpec::SmoothedStadium {
                center,
                half_length,
                radius,
                modes,
            } => {
                let dense = 4096.max(8 * m);
                let pts = stadium_samples(center, half_length, radius, dense);
                let keep = modes.min(m / 2 - 1);
                let rolloff = (keep * 2) / 3;
                let filtered = fft::lowpass(&pts, keep, rolloff);
                // resample to m nodes
                let coeffs = fft::dft(&filtered);
                let pos: Vec<Pt2> = (0..m)
                    .map(|j| {
                        let z = fft::eval_trig(&coeffs, j as f64 / m as f64);
                        Pt2::new(z.re, z.im)
                    })
                    .collect();
                BoundaryCurve::from_samples_spectral(pos)
            }
            ShapeSpec::DentedCircle {
                center,
                radius,
                depth,
                window,
            } => {
                let [t0, t1] = window;
                BoundaryCurve::from_analytic(m, move |t| {
                    let (b, b1, b2) = dent_profile(t, t0, t1);
                    let w = 2.0 * PI;
                    let r = radius * (1.0 - depth * b);
                    let r1 = -radius * depth * b1;
                    let r2 = -radius * depth * b2;
                    let (c, s) = ((w * t).cos(), (w * t).sin());
                    let e = Pt2::new(c, s);
                    let e1 = Pt2::new(-w * s, w * c);
                    let e2 = Pt2::new(-w * w * c, -w * w * s);
                    (
                        Pt2::new(center[0], center[1]) + e * r,
                        e * r1 + e1 * r,
                        e * r2 + e1 * (2.0 * r1) + e2 * r,
                    )
                })
            }
        }
    }
}

/// Degree-9 smoothstep with derivatives: S' = 630 x^4 (1-x)^4.
fn smoothstep_c4_jet(x: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if x >= 1.0 {
        (1.0, 0.0, 0.0)
    } else {
        let y = 1.0 - x;
        let s = special::smoothstep_c4(x);
        let d1 = 630.0 * x.powi(4) * y.powi(4);
        let d2 = 2520.0 * x.powi(3) * y.powi(3) * (1.0 - 2.0 * x);
        (s, d1, d2)
    }
}

/// C^4 bump on [t0, t1]: rises 0 -> 1 on the first half, falls back on the
/// second; exactly zero outside. Returns value and two derivatives in t.
fn dent_profile(t: f64, t0: f64, t1: f64) -> (f64, f64, f64) {
    let width = t1 - t0;
    let u = ((t - t0).rem_euclid(1.0)) / width;
    if !(0.0..1.0).contains(&u) {
        return (0.0, 0.0, 0.0);
    }
    // b(u) = S(2u) * S(2-2u) with S the degree-9 smoothstep
    let (su, su1, su2) = smoothstep_c4_jet(2.0 * u);
    let (sd, sd1, sd2) = smoothstep_c4_jet(2.0 - 2.0 * u);
    let b = su * sd;
    let bp = 2.0 * su1 * sd - 2.0 * su * sd1;
    let bpp = 4.0 * su2 * sd - 8.0 * su1 * sd1 + 4.0 * su * sd2;
    (b, bp / width, bpp / (width * width))
}

fn stadium_samples(center: [f64; 2], half_length: f64, radius: f64, n: usize) -> Vec<C64> {
    // exact C^1 stadium traversed ccw by arc length
    let l = half_length;
    let per = 4.0 * l + 2.0 * PI * radius;
    (0..n)
        .map(|j| {
            let s = per * j as f64 / n as f64;
            let (x, y) = if s < 2.0 * l {
                // bottom edge, left to right
                (-l + s, -radius)
            } else if s < 2.0 * l + PI * radius {
                let a = (s - 2.0 * l) / radius - PI / 2.0;
                (l + radius * a.cos(), radius * a.sin())
            } else if s < 4.0 * l + PI * radius {
                (l - (s - 2.0 * l - PI * radius), radius)
            } else {
                let a = (s - 4.0 * l - PI * radius) / radius + PI / 2.0;
                (-l + radius * a.cos(), radius * a.sin())
            };
            C64::new(center[0] + x, center[1] + y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dent_profile_is_zero_outside_window() {
        let (b, b1, b2) = dent_profile(0.1, 0.3, 0.7);
        assert_eq!((b, b1, b2), (0.0, 0.0, 0.0));
        let (b, _, _) = dent_profile(0.5, 0.3, 0.7);
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stadium_is_closed_and_smoothable() {
        let spec = ShapeSpec::SmoothedStadium {
            center: [0.0, 0.0],
            half_length: 1.0,
            radius: 0.6,
            modes: 40,
        };
        let c = spec.build_curve(256);
        assert!(c.closure_defect() < 1e-10);
        assert!(c.min_nonadjacent_distance() > 0.0);
    }
}
