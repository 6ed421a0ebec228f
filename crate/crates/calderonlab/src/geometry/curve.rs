//! Closed boundary curves sampled at equispaced parameters with exact or
//! spectral derivative data.
//!
//! Curves are parameterized over t in [0,1), traversed counterclockwise, with
//! the outward unit normal on the right of the tangent. A trigonometric
//! representation of the position samples supports interpolation at arbitrary
//! parameters, spectral upsampling, and foot-point searches.

use crate::num::fft;
use crate::{C64, Pt2};

#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    pub m: usize,
    pub pos: Vec<Pt2>,
    pub d1: Vec<Pt2>,
    pub d2: Vec<Pt2>,
    /// Outward unit normal at each node.
    pub normal: Vec<Pt2>,
    /// |p'(t)| at each node.
    pub speed: Vec<f64>,
    /// Signed curvature (positive for a counterclockwise circle).
    pub curvature: Vec<f64>,
    pub length: f64,
    /// DFT coefficients of the position samples as complex numbers x + iy.
    coeffs: Vec<C64>,
}

pub fn cross2(a: Pt2, b: Pt2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn to_c(p: Pt2) -> C64 {
    C64::new(p.x, p.y)
}

fn from_c(z: C64) -> Pt2 {
    Pt2::new(z.re, z.im)
}

impl BoundaryCurve {
    /// Builds a curve from an analytic parameterization returning position and
    /// its first two parameter derivatives.
    pub fn from_analytic<F>(m: usize, f: F) -> Self
    where
        F: Fn(f64) -> (Pt2, Pt2, Pt2),
    {
        let mut pos = Vec::with_capacity(m);
        let mut d1 = Vec::with_capacity(m);
        let mut d2 = Vec::with_capacity(m);
        for j in 0..m {
            let t = j as f64 / m as f64;
            let (p, v, a) = f(t);
            pos.push(p);
            d1.push(v);
            d2.push(a);
        }
        Self::from_jets(pos, d1, d2)
    }

    /// Builds a curve from explicit position/derivative samples.
    pub fn from_jets(pos: Vec<Pt2>, d1: Vec<Pt2>, d2: Vec<Pt2>) -> Self {
        let m = pos.len();
        assert!(m >= 8 && d1.len() == m && d2.len() == m);
        let samples: Vec<C64> = pos.iter().map(|&p| to_c(p)).collect();
        let coeffs = fft::dft(&samples);
        let mut normal = Vec::with_capacity(m);
        let mut speed = Vec::with_capacity(m);
        let mut curvature = Vec::with_capacity(m);
        for j in 0..m {
            let s = d1[j].norm();
            speed.push(s);
            normal.push(Pt2::new(d1[j].y / s, -d1[j].x / s));
            curvature.push(cross2(d1[j], d2[j]) / (s * s * s));
        }
        let length = speed.iter().sum::<f64>() / m as f64;
        Self {
            m,
            pos,
            d1,
            d2,
            normal,
            speed,
            curvature,
            length,
            coeffs,
        }
    }

    /// Builds a curve from position samples only; derivatives are spectral.
    pub fn from_samples_spectral(pos: Vec<Pt2>) -> Self {
        let samples: Vec<C64> = pos.iter().map(|&p| to_c(p)).collect();
        let d1: Vec<Pt2> = fft::diff_periodic(&samples, 1).iter().map(|&z| from_c(z)).collect();
        let d2: Vec<Pt2> = fft::diff_periodic(&samples, 2).iter().map(|&z| from_c(z)).collect();
        Self::from_jets(pos, d1, d2)
    }

    pub fn node_param(&self, j: usize) -> f64 {
        j as f64 / self.m as f64
    }

    /// Trapezoid weight of node j for line integrals with respect to arc
    /// length.
    pub fn ds_weight(&self, j: usize) -> f64 {
        self.speed[j] / self.m as f64
    }

    pub fn eval(&self, t: f64) -> Pt2 {
        from_c(fft::eval_trig(&self.coeffs, t))
    }

    pub fn eval_d1(&self, t: f64) -> Pt2 {
        from_c(fft::eval_trig_deriv(&self.coeffs, t, 1))
    }

    pub fn eval_d2(&self, t: f64) -> Pt2 {
        from_c(fft::eval_trig_deriv(&self.coeffs, t, 2))
    }

    pub fn eval_normal(&self, t: f64) -> Pt2 {
        let v = self.eval_d1(t);
        let s = v.norm();
        Pt2::new(v.y / s, -v.x / s)
    }

    pub fn eval_curvature(&self, t: f64) -> f64 {
        let v = self.eval_d1(t);
        let a = self.eval_d2(t);
        cross2(v, a) / v.norm().powi(3)
    }

    /// Typical node spacing in space.
    pub fn node_spacing(&self) -> f64 {
        self.length / self.m as f64
    }

    pub fn nearest_node(&self, x: Pt2) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (j, p) in self.pos.iter().enumerate() {
            let d = (x - p).norm();
            if d < best.1 {
                best = (j, d);
            }
        }
        best
    }

    /// Foot point of x on the curve: returns (t, signed depth) where
    /// depth > 0 means x lies on the inner (domain) side, x = p(t) - depth * nu(t).
    pub fn foot_point(&self, x: Pt2) -> (f64, f64) {
        let (j, _) = self.nearest_node(x);
        let mut t = self.node_param(j);
        for _ in 0..8 {
            let p = self.eval(t);
            let v = self.eval_d1(t);
            let a = self.eval_d2(t);
            let g = (x - p).dot(&v);
            let dg = -v.norm_squared() + (x - p).dot(&a);
            let step = g / dg;
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        t = t.rem_euclid(1.0);
        let p = self.eval(t);
        let nu = self.eval_normal(t);
        let depth = (p - x).dot(&nu);
        (t, depth)
    }

    /// Spectrally upsampled copy (positions exact for band-limited curves,
    /// derivatives recomputed spectrally).
    pub fn upsampled(&self, factor: usize) -> BoundaryCurve {
        let up = fft::upsample(
            &self.pos.iter().map(|&p| to_c(p)).collect::<Vec<_>>(),
            factor,
        );
        BoundaryCurve::from_samples_spectral(up.iter().map(|&z| from_c(z)).collect())
    }

    /// Max distance between the analytic samples and the closure at t = 0/1.
    pub fn closure_defect(&self) -> f64 {
        (self.eval(0.0) - self.pos[0]).norm()
    }

    /// Minimum distance between non-adjacent node pairs (curve simplicity).
    pub fn min_nonadjacent_distance(&self) -> f64 {
        let m = self.m;
        let mut min = f64::INFINITY;
        for i in 0..m {
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let d = (self.pos[i] - self.pos[j]).norm();
                if d < min {
                    min = d;
                }
            }
        }
        min
    }
}
