//! Harmonic fields: layer-potential solutions, closed-form harmonic
//! functions, their sums and conformal compositions, with interior evaluation
//! that stays accurate up to the boundary.

use super::nystrom::{
    double_layer_kernel, double_layer_kernel_grad, fundamental, fundamental_grad_x, NystromSolver,
};
use crate::geometry::conformal::ConformalNormalization;
use crate::geometry::{BoundaryCurve, Domain2D, InteriorQuadrature};
use crate::num::{fft, quad};
use crate::{C64, Pt2};
use rayon::prelude::*;
use std::sync::{Arc, OnceLock};

/// Closed-form harmonic functions with exact gradients.
pub trait AnalyticHarmonic: Send + Sync {
    fn eval(&self, x: Pt2) -> C64;
    fn grad(&self, x: Pt2) -> [C64; 2];
}

/// exp(-i x . zeta / h) for a complex frequency zeta.
pub struct ComplexExponential {
    pub zeta: [C64; 2],
    pub h: f64,
}

impl AnalyticHarmonic for ComplexExponential {
    fn eval(&self, x: Pt2) -> C64 {
        let phase = -(self.zeta[0] * x.x + self.zeta[1] * x.y) * C64::new(0.0, 1.0 / self.h);
        phase.exp()
    }
    fn grad(&self, x: Pt2) -> [C64; 2] {
        let v = self.eval(x);
        let factor = C64::new(0.0, -1.0 / self.h);
        [v * self.zeta[0] * factor, v * self.zeta[1] * factor]
    }
}

/// Holomorphic polynomial sum c_k z^k (harmonic in the plane).
pub struct HarmonicPoly {
    pub coeffs: Vec<C64>,
}

impl AnalyticHarmonic for HarmonicPoly {
    fn eval(&self, x: Pt2) -> C64 {
        let z = C64::new(x.x, x.y);
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
    fn grad(&self, x: Pt2) -> [C64; 2] {
        let z = C64::new(x.x, x.y);
        let mut acc = C64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        [acc, acc * C64::new(0.0, 1.0)]
    }
}

/// Weighted sum of fundamental solutions (harmonic away from the sources).
pub struct PointSources {
    pub points: Vec<Pt2>,
    pub strengths: Vec<C64>,
}

impl AnalyticHarmonic for PointSources {
    fn eval(&self, x: Pt2) -> C64 {
        let vals: Vec<C64> = self
            .points
            .iter()
            .zip(&self.strengths)
            .map(|(&y, &a)| a * fundamental(x, y))
            .collect();
        quad::pairwise_sum_c(&vals)
    }
    fn grad(&self, x: Pt2) -> [C64; 2] {
        let mut gx = Vec::with_capacity(self.points.len());
        let mut gy = Vec::with_capacity(self.points.len());
        for (&y, &a) in self.points.iter().zip(&self.strengths) {
            let g = fundamental_grad_x(x, y);
            gx.push(a * g[0]);
            gy.push(a * g[1]);
        }
        [quad::pairwise_sum_c(&gx), quad::pairwise_sum_c(&gy)]
    }
}

struct BoundaryJets {
    trace_coef: Vec<C64>,
    u_nu: Vec<C64>,
    unu_coef: Vec<C64>,
    gs_coef: Vec<C64>,
    gss_coef: Vec<C64>,
    unus_coef: Vec<C64>,
}

/// Double-layer potential with its solved density on one curve.
pub struct LayerField {
    pub solver: Arc<NystromSolver>,
    pub density: Vec<C64>,
    pub data: Vec<C64>,
    jets: OnceLock<BoundaryJets>,
    upsampled: OnceLock<(Arc<BoundaryCurve>, Vec<C64>)>,
}

const UPSAMPLE: usize = 16;
const PLAIN_ZONE: f64 = 4.5; // node spacings
const TAYLOR_ZONE: f64 = 0.25;

impl LayerField {
    pub fn new(solver: Arc<NystromSolver>, density: Vec<C64>, data: Vec<C64>) -> Self {
        Self {
            solver,
            density,
            data,
            jets: OnceLock::new(),
            upsampled: OnceLock::new(),
        }
    }

    fn curve(&self) -> &Arc<BoundaryCurve> {
        &self.solver.curve
    }

    fn jets(&self) -> &BoundaryJets {
        self.jets.get_or_init(|| {
            let curve = self.curve();
            let u_nu = self.solver.maue_normal_derivative(&self.density);
            let d_trace = fft::diff_periodic(&self.data, 1);
            let g_s: Vec<C64> = d_trace
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            let g_ss: Vec<C64> = fft::diff_periodic(&g_s, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            let unu_s: Vec<C64> = fft::diff_periodic(&u_nu, 1)
                .iter()
                .zip(&curve.speed)
                .map(|(d, &s)| d / s)
                .collect();
            BoundaryJets {
                trace_coef: fft::dft(&self.data),
                unu_coef: fft::dft(&u_nu),
                gs_coef: fft::dft(&g_s),
                gss_coef: fft::dft(&g_ss),
                unus_coef: fft::dft(&unu_s),
                u_nu,
            }
        })
    }

    fn upsampled(&self) -> &(Arc<BoundaryCurve>, Vec<C64>) {
        self.upsampled.get_or_init(|| {
            (
                Arc::new(self.curve().upsampled(UPSAMPLE)),
                fft::upsample(&self.density, UPSAMPLE),
            )
        })
    }

    fn plain_sum(&self, x: Pt2, curve: &BoundaryCurve, density: &[C64]) -> C64 {
        let vals: Vec<C64> = (0..curve.m)
            .map(|j| {
                density[j] * (double_layer_kernel(x, curve.pos[j], curve.normal[j]) * curve.ds_weight(j))
            })
            .collect();
        quad::pairwise_sum_c(&vals)
    }

    fn plain_grad(&self, x: Pt2, curve: &BoundaryCurve, density: &[C64]) -> [C64; 2] {
        let mut gx = Vec::with_capacity(curve.m);
        let mut gy = Vec::with_capacity(curve.m);
        for j in 0..curve.m {
            let g = double_layer_kernel_grad(x, curve.pos[j], curve.normal[j]);
            let w = curve.ds_weight(j);
            gx.push(density[j] * (g[0] * w));
            gy.push(density[j] * (g[1] * w));
        }
        [quad::pairwise_sum_c(&gx), quad::pairwise_sum_c(&gy)]
    }

    /// Second-order boundary Taylor expansion at depth d inside the foot
    /// point t: u = g - d u_nu + d^2/2 (-kappa u_nu - g_ss).
    fn taylor_value(&self, t: f64, d: f64) -> C64 {
        let jets = self.jets();
        let g = fft::eval_trig(&jets.trace_coef, t);
        let unu = fft::eval_trig(&jets.unu_coef, t);
        let gss = fft::eval_trig(&jets.gss_coef, t);
        let kappa = self.curve().eval_curvature(t);
        g - unu * d + (unu * (-kappa) - gss) * (0.5 * d * d)
    }

    fn taylor_grad(&self, t: f64, d: f64) -> [C64; 2] {
        let jets = self.jets();
        let gs = fft::eval_trig(&jets.gs_coef, t);
        let unu = fft::eval_trig(&jets.unu_coef, t);
        let gss = fft::eval_trig(&jets.gss_coef, t);
        let unus = fft::eval_trig(&jets.unus_coef, t);
        let curve = self.curve();
        let kappa = curve.eval_curvature(t);
        let v = curve.eval_d1(t);
        let tang = v / v.norm();
        let nu = Pt2::new(tang.y, -tang.x);
        // tangential and inward-depth derivatives at depth d
        let u_dd = unu * (-kappa) - gss;
        let u_s = (gs - unus * d) * (1.0 + d * kappa);
        let u_d = -unu + u_dd * d;
        let gx = u_s * tang.x + u_d * (-nu.x);
        let gy = u_s * tang.y + u_d * (-nu.y);
        [gx, gy]
    }

    pub fn evaluate(&self, x: Pt2) -> C64 {
        let curve = self.curve();
        let spacing = curve.node_spacing();
        let (_, dn) = curve.nearest_node(x);
        if dn > (PLAIN_ZONE + 1.5) * spacing {
            return self.plain_sum(x, curve, &self.density);
        }
        let (t, depth) = curve.foot_point(x);
        if depth >= PLAIN_ZONE * spacing {
            self.plain_sum(x, curve, &self.density)
        } else if depth >= TAYLOR_ZONE * spacing {
            let (up_curve, up_density) = self.upsampled();
            self.plain_sum(x, up_curve, up_density)
        } else {
            self.taylor_value(t, depth.max(0.0))
        }
    }

    pub fn gradient(&self, x: Pt2) -> [C64; 2] {
        let curve = self.curve();
        let spacing = curve.node_spacing();
        let (_, dn) = curve.nearest_node(x);
        if dn > (PLAIN_ZONE + 1.5) * spacing {
            return self.plain_grad(x, curve, &self.density);
        }
        let (t, depth) = curve.foot_point(x);
        if depth >= PLAIN_ZONE * spacing {
            self.plain_grad(x, curve, &self.density)
        } else if depth >= TAYLOR_ZONE * spacing {
            let (up_curve, up_density) = self.upsampled();
            self.plain_grad(x, up_curve, up_density)
        } else {
            self.taylor_grad(t, depth.max(0.0))
        }
    }
}

enum Repr {
    Layer(Arc<LayerField>),
    Analytic(Arc<dyn AnalyticHarmonic>),
    Sum(Vec<HarmonicField>),
    Scaled(C64, Box<HarmonicField>),
    Composed {
        inner: Box<HarmonicField>,
        map: ConformalNormalization,
    },
}

/// A complex-valued harmonic function on a domain: boundary trace plus an
/// interior representation. Immutable; evaluation is safe to run from many
/// threads.
pub struct HarmonicField {
    pub domain: Arc<Domain2D>,
    trace: Vec<C64>,
    repr: Arc<Repr>,
}

impl Clone for HarmonicField {
    fn clone(&self) -> Self {
        Self {
            domain: self.domain.clone(),
            trace: self.trace.clone(),
            repr: self.repr.clone(),
        }
    }
}

impl HarmonicField {
    pub fn from_layer(domain: Arc<Domain2D>, layer: LayerField) -> Self {
        let trace = layer.data.clone();
        Self {
            domain,
            trace,
            repr: Arc::new(Repr::Layer(Arc::new(layer))),
        }
    }

    pub fn analytic(domain: Arc<Domain2D>, f: Arc<dyn AnalyticHarmonic>) -> Self {
        let trace = domain.boundary_nodes().iter().map(|&p| f.eval(p)).collect();
        Self {
            domain,
            trace,
            repr: Arc::new(Repr::Analytic(f)),
        }
    }

    pub fn sum(domain: Arc<Domain2D>, parts: Vec<HarmonicField>) -> Self {
        let m = domain.node_count();
        let mut trace = vec![C64::new(0.0, 0.0); m];
        for part in &parts {
            if Arc::ptr_eq(&part.domain, &domain) {
                for j in 0..m {
                    trace[j] += part.trace[j];
                }
            } else {
                for j in 0..m {
                    trace[j] += part.evaluate(domain.boundary_nodes()[j]);
                }
            }
        }
        Self {
            domain,
            trace,
            repr: Arc::new(Repr::Sum(parts)),
        }
    }

    pub fn scaled(factor: C64, field: HarmonicField) -> Self {
        let trace = field.trace.iter().map(|&t| t * factor).collect();
        Self {
            domain: field.domain.clone(),
            trace,
            repr: Arc::new(Repr::Scaled(factor, Box::new(field))),
        }
    }

    /// Kelvin-type composition u(F(x)) of a field on the image domain of a
    /// conformal normalization.
    pub fn composed(
        domain: Arc<Domain2D>,
        inner: HarmonicField,
        map: ConformalNormalization,
    ) -> Self {
        let m = domain.node_count();
        let inner_m = inner.domain.node_count();
        let mut trace = Vec::with_capacity(m);
        // boundary nodes correspond under the orientation-reversing map when
        // node counts match (the image curve was built that way)
        let index_correspondence = m == inner_m && {
            let x1 = domain.boundary_nodes()[1];
            if let Ok(y) = map.apply(x1) {
                (y - inner.domain.boundary_nodes()[(m - 1) % m]).norm()
                    < 1e-8 * inner.domain.curve.length
            } else {
                false
            }
        };
        for j in 0..m {
            if index_correspondence {
                trace.push(inner.trace[(m - j) % m]);
            } else {
                let y = map
                    .apply(domain.boundary_nodes()[j])
                    .expect("boundary node maps through the inversion center");
                trace.push(inner.evaluate(y));
            }
        }
        Self {
            domain,
            trace,
            repr: Arc::new(Repr::Composed {
                inner: Box::new(inner),
                map,
            }),
        }
    }

    pub fn trace(&self) -> &[C64] {
        &self.trace
    }

    pub fn evaluate(&self, x: Pt2) -> C64 {
        match &*self.repr {
            Repr::Layer(layer) => layer.evaluate(x),
            Repr::Analytic(f) => f.eval(x),
            Repr::Sum(parts) => {
                let vals: Vec<C64> = parts.iter().map(|p| p.evaluate(x)).collect();
                quad::pairwise_sum_c(&vals)
            }
            Repr::Scaled(c, f) => *c * f.evaluate(x),
            Repr::Composed { inner, map } => {
                let y = map.apply(x).expect("evaluation at the inversion center");
                inner.evaluate(y)
            }
        }
    }

    pub fn gradient(&self, x: Pt2) -> [C64; 2] {
        match &*self.repr {
            Repr::Layer(layer) => layer.gradient(x),
            Repr::Analytic(f) => f.grad(x),
            Repr::Sum(parts) => {
                let mut gx = Vec::with_capacity(parts.len());
                let mut gy = Vec::with_capacity(parts.len());
                for p in parts {
                    let g = p.gradient(x);
                    gx.push(g[0]);
                    gy.push(g[1]);
                }
                [quad::pairwise_sum_c(&gx), quad::pairwise_sum_c(&gy)]
            }
            Repr::Scaled(c, f) => {
                let g = f.gradient(x);
                [*c * g[0], *c * g[1]]
            }
            Repr::Composed { inner, map } => {
                let y = map.apply(x).expect("evaluation at the inversion center");
                let g = inner.gradient(y);
                let j = map.jacobian(x);
                [
                    g[0] * j[0][0] + g[1] * j[1][0],
                    g[0] * j[0][1] + g[1] * j[1][1],
                ]
            }
        }
    }

    pub fn evaluate_many(&self, points: &[Pt2]) -> Vec<C64> {
        points.par_iter().map(|&x| self.evaluate(x)).collect()
    }

    pub fn gradient_many(&self, points: &[Pt2]) -> Vec<[C64; 2]> {
        points.par_iter().map(|&x| self.gradient(x)).collect()
    }

    /// Normal derivative on this field's own boundary nodes (outward normal).
    pub fn normal_derivative(&self) -> Vec<C64> {
        match &*self.repr {
            Repr::Layer(layer) => layer.jets().u_nu.clone(),
            _ => {
                let nodes = self.domain.boundary_nodes();
                let normals = self.domain.normals();
                (0..nodes.len())
                    .map(|j| {
                        let g = self.gradient(nodes[j]);
                        g[0] * normals[j].x + g[1] * normals[j].y
                    })
                    .collect()
            }
        }
    }

    /// H^1 norm (L^2 of the value and the gradient) over the given interior
    /// quadrature.
    pub fn h1_norm(&self, quad_rule: &InteriorQuadrature) -> f64 {
        let vals: Vec<f64> = quad_rule
            .nodes
            .par_iter()
            .zip(&quad_rule.weights)
            .map(|(&x, &w)| {
                let u = self.evaluate(x);
                let g = self.gradient(x);
                w * (u.norm_sqr() + g[0].norm_sqr() + g[1].norm_sqr())
            })
            .collect();
        quad::pairwise_sum(&vals).sqrt()
    }

    /// L^2 norm over the given interior quadrature.
    pub fn l2_norm(&self, quad_rule: &InteriorQuadrature) -> f64 {
        let vals: Vec<f64> = quad_rule
            .nodes
            .par_iter()
            .zip(&quad_rule.weights)
            .map(|(&x, &w)| w * self.evaluate(x).norm_sqr())
            .collect();
        quad::pairwise_sum(&vals).sqrt()
    }

    /// CSV rows (x1, x2, Re u, Im u) on an evaluation grid.
    pub fn write_csv<W: std::io::Write>(
        &self,
        points: &[Pt2],
        mut w: W,
    ) -> std::io::Result<()> {
        writeln!(w, "x1,x2,re_u,im_u")?;
        let vals = self.evaluate_many(points);
        for (p, v) in points.iter().zip(vals) {
            writeln!(w, "{:.17e},{:.17e},{:.17e},{:.17e}", p.x, p.y, v.re, v.im)?;
        }
        Ok(())
    }
}
