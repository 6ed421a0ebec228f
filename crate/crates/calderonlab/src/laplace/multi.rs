//! Dirichlet solver on multiply connected domains: double layers on every
//! boundary component plus one logarithmic source per hole, with a mean-zero
//! density constraint on each hole curve.

use super::nystrom::{
    double_layer_kernel, double_layer_kernel_grad, fundamental, fundamental_grad_x, log_weights,
    RealLu,
};
use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::num::{fft, quad};
use crate::{C64, Pt2};
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// One boundary component: a ccw curve flagged as outer boundary or hole.
#[derive(Clone)]
pub struct Component {
    pub curve: Arc<BoundaryCurve>,
    pub is_hole: bool,
}

impl Component {
    /// Normal pointing out of the solution domain.
    fn domain_normal(&self, j: usize) -> Pt2 {
        if self.is_hole {
            -self.curve.normal[j]
        } else {
            self.curve.normal[j]
        }
    }

    fn sign(&self) -> f64 {
        if self.is_hole {
            -1.0
        } else {
            1.0
        }
    }
}

pub struct MultiNystrom {
    pub components: Vec<Component>,
    pub hole_points: Vec<Pt2>,
    offsets: Vec<usize>,
    n_density: usize,
    lu: RealLu,
    single_layers: Vec<OnceLock<DMatrix<f64>>>,
}

impl MultiNystrom {
    pub fn new(components: Vec<Component>, hole_points: Vec<Pt2>) -> Result<Self> {
        let holes: Vec<usize> = components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_hole)
            .map(|(i, _)| i)
            .collect();
        if holes.len() != hole_points.len() {
            return Err(Error::Inconsistent(format!(
                "{} hole components but {} interior source points",
                holes.len(),
                hole_points.len()
            )));
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut n = 0usize;
        for c in &components {
            offsets.push(n);
            n += c.curve.m;
        }
        let n_total = n + hole_points.len();
        let mut a = DMatrix::zeros(n_total, n_total);
        for (ci, comp_i) in components.iter().enumerate() {
            for i in 0..comp_i.curve.m {
                let row = offsets[ci] + i;
                let x = comp_i.curve.pos[i];
                for (cj, comp_j) in components.iter().enumerate() {
                    for j in 0..comp_j.curve.m {
                        let col = offsets[cj] + j;
                        let w = comp_j.curve.ds_weight(j);
                        let k = if ci == cj && i == j {
                            comp_j.sign() * (-comp_j.curve.curvature[j] / (4.0 * PI))
                        } else {
                            double_layer_kernel(x, comp_j.curve.pos[j], comp_j.domain_normal(j))
                        };
                        a[(row, col)] = k * w;
                    }
                }
                a[(row, row)] -= 0.5;
                for (k, &z) in hole_points.iter().enumerate() {
                    a[(row, n + k)] = fundamental(x, z);
                }
            }
        }
        // mean-zero density constraints on hole curves close the system
        for (k, &hi) in holes.iter().enumerate() {
            let comp = &components[hi];
            for j in 0..comp.curve.m {
                a[(n + k, offsets[hi] + j)] = comp.curve.ds_weight(j);
            }
        }
        let single_layers = components.iter().map(|_| OnceLock::new()).collect();
        Ok(Self {
            components,
            hole_points,
            offsets,
            n_density: n,
            lu: RealLu::new(a),
            single_layers,
        })
    }

    /// Solves with per-component Dirichlet data.
    pub fn solve(self: &Arc<Self>, data: Vec<Vec<f64>>) -> Result<MultiField> {
        if data.len() != self.components.len()
            || data
                .iter()
                .zip(&self.components)
                .any(|(d, c)| d.len() != c.curve.m)
        {
            return Err(Error::Inconsistent(
                "data must provide one sample per node of every component".into(),
            ));
        }
        let mut rhs = vec![0.0; self.n_density + self.hole_points.len()];
        for (ci, d) in data.iter().enumerate() {
            rhs[self.offsets[ci]..self.offsets[ci] + d.len()].copy_from_slice(d);
        }
        let sol = self.lu.solve_real(&rhs);
        let mut densities = Vec::with_capacity(self.components.len());
        for (ci, c) in self.components.iter().enumerate() {
            densities.push(sol[self.offsets[ci]..self.offsets[ci] + c.curve.m].to_vec());
        }
        let log_coeffs = sol[self.n_density..].to_vec();
        Ok(MultiField {
            solver: self.clone(),
            densities,
            log_coeffs,
            data,
            jets: self.components.iter().map(|_| OnceLock::new()).collect(),
            upsampled: self.components.iter().map(|_| OnceLock::new()).collect(),
        })
    }

    fn single_layer(&self, ci: usize) -> &DMatrix<f64> {
        self.single_layers[ci].get_or_init(|| {
            let curve = &self.components[ci].curve;
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
        })
    }
}

struct ComponentJets {
    trace_coef: Vec<C64>,
    u_nu: Vec<f64>,
    unu_coef: Vec<C64>,
    gs_coef: Vec<C64>,
    gss_coef: Vec<C64>,
    unus_coef: Vec<C64>,
}

/// A real harmonic function on the multiply connected domain.
pub struct MultiField {
    solver: Arc<MultiNystrom>,
    pub densities: Vec<Vec<f64>>,
    pub log_coeffs: Vec<f64>,
    pub data: Vec<Vec<f64>>,
    jets: Vec<OnceLock<ComponentJets>>,
    upsampled: Vec<OnceLock<(Arc<BoundaryCurve>, Vec<f64>)>>,
}

const PLAIN_ZONE: f64 = 4.5;
const TAYLOR_ZONE: f64 = 0.25;
const UPSAMPLE: usize = 16;

impl MultiField {
    fn layer_sum(&self, x: Pt2, ci: usize, curve: &BoundaryCurve, density: &[f64]) -> f64 {
        let comp = &self.solver.components[ci];
        let vals: Vec<f64> = (0..curve.m)
            .map(|j| {
                let nu = if comp.is_hole {
                    -curve.normal[j]
                } else {
                    curve.normal[j]
                };
                density[j] * double_layer_kernel(x, curve.pos[j], nu) * curve.ds_weight(j)
            })
            .collect();
        quad::pairwise_sum(&vals)
    }

    fn layer_grad(&self, x: Pt2, ci: usize, curve: &BoundaryCurve, density: &[f64]) -> [f64; 2] {
        let comp = &self.solver.components[ci];
        let mut gx = Vec::with_capacity(curve.m);
        let mut gy = Vec::with_capacity(curve.m);
        for j in 0..curve.m {
            let nu = if comp.is_hole {
                -curve.normal[j]
            } else {
                curve.normal[j]
            };
            let g = double_layer_kernel_grad(x, curve.pos[j], nu);
            let w = curve.ds_weight(j) * density[j];
            gx.push(g[0] * w);
            gy.push(g[1] * w);
        }
        [quad::pairwise_sum(&gx), quad::pairwise_sum(&gy)]
    }

    fn log_sum(&self, x: Pt2) -> f64 {
        self.solver
            .hole_points
            .iter()
            .zip(&self.log_coeffs)
            .map(|(&z, &a)| a * fundamental(x, z))
            .sum()
    }

    fn log_grad(&self, x: Pt2) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for (&z, &a) in self.solver.hole_points.iter().zip(&self.log_coeffs) {
            let gg = fundamental_grad_x(x, z);
            g[0] += a * gg[0];
            g[1] += a * gg[1];
        }
        g
    }

    fn upsampled(&self, ci: usize) -> &(Arc<BoundaryCurve>, Vec<f64>) {
        self.upsampled[ci].get_or_init(|| {
            let cx: Vec<C64> = self.densities[ci].iter().map(|&v| C64::new(v, 0.0)).collect();
            (
                Arc::new(self.solver.components[ci].curve.upsampled(UPSAMPLE)),
                fft::upsample(&cx, UPSAMPLE).iter().map(|c| c.re).collect(),
            )
        })
    }

    fn jets(&self, ci: usize) -> &ComponentJets {
        self.jets[ci].get_or_init(|| {
            let comp = &self.solver.components[ci];
            let curve = &comp.curve;
            let m = curve.m;
            // own-layer normal derivative by the Maue identity (valid with the
            // domain-outward normal for outer curves and holes alike)
            let s_mat = self.solver.single_layer(ci);
            let dens: Vec<C64> = self.densities[ci].iter().map(|&v| C64::new(v, 0.0)).collect();
            let dphi: Vec<C64> = fft::diff_periodic(&dens, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            let mut s_dphi = vec![C64::new(0.0, 0.0); m];
            for i in 0..m {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..m {
                    acc += dphi[j] * s_mat[(i, j)];
                }
                s_dphi[i] = acc;
            }
            let own: Vec<f64> = fft::diff_periodic(&s_dphi, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| (d / s).re)
                .collect();
            // cross terms: other components' layers and log sources are smooth
            let mut u_nu = vec![0.0; m];
            for i in 0..m {
                let x = curve.pos[i];
                let nu = comp.domain_normal(i);
                let mut acc = own[i];
                for (cj, other) in self.solver.components.iter().enumerate() {
                    if cj == ci {
                        continue;
                    }
                    let g = self.layer_grad(x, cj, &other.curve, &self.densities[cj]);
                    acc += g[0] * nu.x + g[1] * nu.y;
                }
                let lg = self.log_grad(x);
                acc += lg[0] * nu.x + lg[1] * nu.y;
                u_nu[i] = acc;
            }
            let g_cx: Vec<C64> = self.data[ci].iter().map(|&v| C64::new(v, 0.0)).collect();
            let g_s: Vec<C64> = fft::diff_periodic(&g_cx, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            let g_ss: Vec<C64> = fft::diff_periodic(&g_s, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            let unu_cx: Vec<C64> = u_nu.iter().map(|&v| C64::new(v, 0.0)).collect();
            let unu_s: Vec<C64> = fft::diff_periodic(&unu_cx, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            ComponentJets {
                trace_coef: fft::dft(&g_cx),
                u_nu,
                unu_coef: fft::dft(&unu_cx),
                gs_coef: fft::dft(&g_s),
                gss_coef: fft::dft(&g_ss),
                unus_coef: fft::dft(&unu_s),
            }
        })
    }

    /// Normal derivative of the field at the nodes of component `ci`, with
    /// respect to the domain-outward normal.
    pub fn normal_derivative(&self, ci: usize) -> Vec<f64> {
        self.jets(ci).u_nu.clone()
    }

    /// Normal derivative at an arbitrary boundary parameter of component `ci`.
    pub fn normal_derivative_at(&self, ci: usize, t: f64) -> f64 {
        fft::eval_trig(&self.jets(ci).unu_coef, t).re
    }

    pub fn evaluate(&self, x: Pt2) -> f64 {
        // locate the nearest component
        let mut near = (0usize, f64::INFINITY);
        for (ci, comp) in self.solver.components.iter().enumerate() {
            let (_, d) = comp.curve.nearest_node(x);
            if d < near.1 {
                near = (ci, d);
            }
        }
        let (ci, dn) = near;
        let curve = &self.solver.components[ci].curve;
        let spacing = curve.node_spacing();

        let mut total = self.log_sum(x);
        for (cj, other) in self.solver.components.iter().enumerate() {
            if cj != ci {
                total += self.layer_sum(x, cj, &other.curve, &self.densities[cj]);
            }
        }
        if dn > (PLAIN_ZONE + 1.5) * spacing {
            return total + self.layer_sum(x, ci, curve, &self.densities[ci]);
        }
        let (t, raw_depth) = curve.foot_point(x);
        let comp = &self.solver.components[ci];
        // depth measured into the domain
        let depth = if comp.is_hole { -raw_depth } else { raw_depth };
        if depth >= PLAIN_ZONE * spacing {
            total + self.layer_sum(x, ci, curve, &self.densities[ci])
        } else if depth >= TAYLOR_ZONE * spacing {
            let (up_curve, up_density) = self.upsampled(ci);
            total + self.layer_sum(x, ci, up_curve, up_density)
        } else {
            // second-order boundary Taylor of the full field(cross terms are
            // part of the jets via u_nu; trace is the full data)
            let jets = self.jets(ci);
            let d = depth.max(0.0);
            let g = fft::eval_trig(&jets.trace_coef, t).re;
            let unu = fft::eval_trig(&jets.unu_coef, t).re;
            let gss = fft::eval_trig(&jets.gss_coef, t).re;
            let kappa_signed = comp.sign() * curve.eval_curvature(t);
            g - d * unu + 0.5 * d * d * (-kappa_signed * unu - gss)
        }
    }

    pub fn gradient(&self, x: Pt2) -> [f64; 2] {
        let mut near = (0usize, f64::INFINITY);
        for (ci, comp) in self.solver.components.iter().enumerate() {
            let (_, d) = comp.curve.nearest_node(x);
            if d < near.1 {
                near = (ci, d);
            }
        }
        let (ci, dn) = near;
        let curve = &self.solver.components[ci].curve;
        let spacing = curve.node_spacing();
        let mut g = self.log_grad(x);
        for (cj, other) in self.solver.components.iter().enumerate() {
            if cj != ci {
                let gg = self.layer_grad(x, cj, &other.curve, &self.densities[cj]);
                g[0] += gg[0];
                g[1] += gg[1];
            }
        }
        let own = if dn > PLAIN_ZONE * spacing {
            self.layer_grad(x, ci, curve, &self.densities[ci])
        } else {
            let (t, raw_depth) = curve.foot_point(x);
            let comp = &self.solver.components[ci];
            let depth = if comp.is_hole { -raw_depth } else { raw_depth };
            if depth >= PLAIN_ZONE * spacing {
                self.layer_grad(x, ci, curve, &self.densities[ci])
            } else if depth >= TAYLOR_ZONE * spacing {
                let (up_curve, up_density) = self.upsampled(ci);
                self.layer_grad(x, ci, up_curve.as_ref(), up_density)
            } else {
                // gradient of the full field from boundary jets, minus the
                // separately added smooth parts
                let jets = self.jets(ci);
                let d = depth.max(0.0);
                let gs = fft::eval_trig(&jets.gs_coef, t).re;
                let unu = fft::eval_trig(&jets.unu_coef, t).re;
                let gss = fft::eval_trig(&jets.gss_coef, t).re;
                let unus = fft::eval_trig(&jets.unus_coef, t).re;
                let kappa_signed = comp.sign() * curve.eval_curvature(t);
                let v = curve.eval_d1(t);
                let tang0 = v / v.norm();
                // the (s, depth) frame advances along +s and inward -nu_dom;
                // for holes the inward direction is +curve normal
                let nu_dom = if comp.is_hole {
                    -Pt2::new(tang0.y, -tang0.x)
                } else {
                    Pt2::new(tang0.y, -tang0.x)
                };
                let u_dd = -kappa_signed * unu - gss;
                let u_s = (gs - unus * d) * (1.0 + d * kappa_signed);
                let u_d = -unu + u_dd * d;
                let full = [
                    u_s * tang0.x + u_d * (-nu_dom.x),
                    u_s * tang0.y + u_d * (-nu_dom.y),
                ];
                [full[0] - g[0], full[1] - g[1]]
            }
        };
        [g[0] + own[0], g[1] + own[1]]
    }
}
