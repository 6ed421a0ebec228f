//! Nyström discretization of the second-kind boundary integral equation for
//! the interior Dirichlet problem, with the spectrally accurate log-kernel
//! single layer used for boundary normal derivatives.

use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::num::fft;
use crate::{C64, Pt2};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Double-layer kernel d/dn_y Phi(x - y) with Phi = -(1/2pi) log|x-y|.
#[inline]
pub fn double_layer_kernel(x: Pt2, y: Pt2, nu_y: Pt2) -> f64 {
    let r = x - y;
    nu_y.dot(&r) / (2.0 * PI * r.norm_squared())
}

/// Gradient in x of the double-layer kernel.
#[inline]
pub fn double_layer_kernel_grad(x: Pt2, y: Pt2, nu_y: Pt2) -> [f64; 2] {
    let r = x - y;
    let r2 = r.norm_squared();
    let dot = nu_y.dot(&r);
    let g = (nu_y - r * (2.0 * dot / r2)) / (2.0 * PI * r2);
    [g.x, g.y]
}

/// Fundamental solution Phi(x - y).
#[inline]
pub fn fundamental(x: Pt2, y: Pt2) -> f64 {
    -(x - y).norm().ln() / (2.0 * PI)
}

#[inline]
pub fn fundamental_grad_x(x: Pt2, y: Pt2) -> [f64; 2] {
    let r = x - y;
    let g = -r / (2.0 * PI * r.norm_squared());
    [g.x, g.y]
}

/// Solves complex right-hand sides through a real LU factorization.
pub struct RealLu {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl RealLu {
    pub fn new(a: DMatrix<f64>) -> Self {
        let n = a.nrows();
        Self {
            lu: a.lu(),
            n,
        }
    }

    pub fn solve_real(&self, rhs: &[f64]) -> Vec<f64> {
        let b = DVector::from_column_slice(rhs);
        let x = self.lu.solve(&b).expect("LU solve failed");
        x.as_slice().to_vec()
    }

    pub fn solve_complex(&self, rhs: &[C64]) -> Vec<C64> {
        assert_eq!(rhs.len(), self.n);
        let re: Vec<f64> = rhs.iter().map(|c| c.re).collect();
        let im: Vec<f64> = rhs.iter().map(|c| c.im).collect();
        let xr = self.solve_real(&re);
        let xi = self.solve_real(&im);
        xr.into_iter()
            .zip(xi)
            .map(|(a, b)| C64::new(a, b))
            .collect()
    }
}

/// Nyström solver for one smooth closed curve: (K - I/2) density = data.
pub struct NystromSolver {
    pub curve: Arc<BoundaryCurve>,
    lu: RealLu,
    norm1_a: f64,
    cond_estimate: OnceLock<f64>,
    single_layer: OnceLock<DMatrix<f64>>,
}

impl NystromSolver {
    pub fn new(curve: Arc<BoundaryCurve>) -> Self {
        let a = assemble_second_kind(&curve);
        let norm1_a = one_norm(&a);
        Self {
            curve,
            lu: RealLu::new(a),
            norm1_a,
            cond_estimate: OnceLock::new(),
            single_layer: OnceLock::new(),
        }
    }

    /// Cheap 1-norm condition estimate (Hager style, few solves).
    pub fn condition_estimate(&self) -> f64 {
        *self.cond_estimate.get_or_init(|| {
            let n = self.curve.m;
            let mut x = vec![1.0 / n as f64; n];
            let mut est = 0.0;
            for _ in 0..4 {
                let y = self.lu.solve_real(&x);
                let norm: f64 = y.iter().map(|v| v.abs()).sum();
                if norm <= est {
                    break;
                }
                est = norm;
                let sign: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
                // transpose solve approximated by another forward solve on the
                // sign vector; adequate for an order-of-magnitude estimate
                let z = self.lu.solve_real(&sign);
                let (mut best, mut arg) = (0.0, 0);
                for (j, v) in z.iter().enumerate() {
                    if v.abs() > best {
                        best = v.abs();
                        arg = j;
                    }
                }
                x = vec![0.0; n];
                x[arg] = 1.0;
            }
            est * self.norm1_a
        })
    }

    /// Solves for the double-layer density with the given Dirichlet data.
    pub fn solve(&self, data: &[C64]) -> Result<Vec<C64>> {
        let cond = self.condition_estimate();
        if cond > 1e12 {
            return Err(Error::IllConditioned { cond });
        }
        Ok(self.lu.solve_complex(data))
    }

    /// Single-layer matrix with spectrally accurate log-kernel quadrature
    /// (integration with respect to arc length absorbed in the weights).
    pub fn single_layer_matrix(&self) -> &DMatrix<f64> {
        self.single_layer
            .get_or_init(|| assemble_single_layer(&self.curve))
    }

    /// Normal derivative of the double-layer potential on its own boundary,
    /// via the Maue identity: T = d/ds S d/ds.
    pub fn maue_normal_derivative(&self, density: &[C64]) -> Vec<C64> {
        let curve = &self.curve;
        let m = curve.m;
        let dphi: Vec<C64> = fft::diff_periodic(density, 1)
            .iter()
            .zip(&curve.speed)
            .map(|(d, &s)| d / s)
            .collect();
        let s_mat = self.single_layer_matrix();
        let mut s_dphi = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m {
                acc += dphi[j] * s_mat[(i, j)];
            }
            s_dphi[i] = acc;
        }
        fft::diff_periodic(&s_dphi, 1)
            .iter()
            .zip(&curve.speed)
            .map(|(d, &s)| d / s)
            .collect()
    }
}

/// K - I/2 with the curvature diagonal limit.
fn assemble_second_kind(curve: &BoundaryCurve) -> DMatrix<f64> {
    let m = curve.m;
    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let w = curve.ds_weight(j);
            let k = if i == j {
                -curve.curvature[j] / (4.0 * PI)
            } else {
                double_layer_kernel(curve.pos[i], curve.pos[j], curve.normal[j])
            };
            a[(i, j)] = k * w;
        }
        a[(i, i)] -= 0.5;
    }
    a
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|v| v.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Log-kernel quadrature weights: R[d] approximates
/// integral over [0,1) of ln(2|sin(pi (t_i - s))|) against the trigonometric
/// interpolant, evaluated at grid offsets d = i - j.
pub fn log_weights(m: usize) -> Vec<f64> {
    let mut r = vec![0.0; m];
    for (d, slot) in r.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 1..(m / 2) {
            acc += (2.0 * PI * k as f64 * d as f64 / m as f64).cos() / k as f64;
        }
        let nyquist = if d % 2 == 0 { 1.0 } else { -1.0 };
        *slot = -acc / m as f64 - nyquist / (m as f64 * m as f64);
    }
    r
}

/// Single-layer Nyström matrix S_{ij}: (S f)(t_i) = sum_j S_{ij} f(t_j),
/// approximating the arc-length single layer integral.
fn assemble_single_layer(curve: &BoundaryCurve) -> DMatrix<f64> {
    let m = curve.m;
    let r = log_weights(m);
    let mut s = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let smooth = if i == j {
                (curve.speed[j] / (2.0 * PI)).ln()
            } else {
                let dist = (curve.pos[i] - curve.pos[j]).norm();
                let dt = (i as f64 - j as f64) / m as f64;
                (dist / (2.0 * (PI * dt).sin().abs())).ln()
            };
            let d = (i + m - j) % m;
            s[(i, j)] = -(r[d] + smooth / m as f64) * curve.speed[j] / (2.0 * PI);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_circle(m: usize) -> Arc<BoundaryCurve> {
        Arc::new(BoundaryCurve::from_analytic(m, |t| {
            let w = 2.0 * PI;
            let (c, s) = ((w * t).cos(), (w * t).sin());
            (
                Pt2::new(c, s),
                Pt2::new(-w * s, w * c),
                Pt2::new(-w * w * c, -w * w * s),
            )
        }))
    }

    #[test]
    fn single_layer_circle_eigenfunctions() {
        let m = 64;
        let curve = unit_circle(m);
        let solver = NystromSolver::new(curve.clone());
        let s = solver.single_layer_matrix();
        for k in [1usize, 3, 7] {
            // S cos(k theta) = cos(k theta) / (2k) on the unit circle
            let f: Vec<f64> = (0..m)
                .map(|j| (2.0 * PI * k as f64 * j as f64 / m as f64).cos())
                .collect();
            for i in 0..m {
                let mut acc = 0.0;
                for j in 0..m {
                    acc += s[(i, j)] * f[j];
                }
                assert_relative_eq!(acc, f[i] / (2.0 * k as f64), epsilon = 1e-12);
            }
        }
        // constants are in the kernel of S on the unit circle (capacity 1)
        for i in 0..m {
            let row: f64 = (0..m).map(|j| s[(i, j)]).sum();
            assert!(row.abs() < 1e-12);
        }
    }

    #[test]
    fn condition_estimate_is_moderate_on_circle() {
        let solver = NystromSolver::new(unit_circle(128));
        let cond = solver.condition_estimate();
        assert!(cond > 0.5 && cond < 100.0, "cond = {cond}");
    }
}
