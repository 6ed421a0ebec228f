//! Planar domains with smooth star-shaped boundaries, boundary partitions
//! into an accessible part and its inaccessible complement, interior
//! quadrature, and the conformal normalization that flattens a domain against
//! its tangent line at a boundary point.

pub mod conformal;
pub mod curve;
pub mod shape;

pub use conformal::{kelvin_transfer, normalize_at, ConformalNormalization};
pub use curve::BoundaryCurve;
pub use shape::ShapeSpec;

use crate::error::{Error, Result};
use crate::num::quad;
use crate::Pt2;
use curve::cross2;
use std::io::Write;
use std::sync::Arc;

/// A bounded planar domain with smooth closed boundary, star-shaped with
/// respect to `center`. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Domain2D {
    pub curve: Arc<BoundaryCurve>,
    pub center: Pt2,
    /// Shape metadata when the domain came from a named spec.
    pub shape: Option<ShapeSpec>,
    /// Unwrapped polar angles of the boundary nodes around `center`
    /// (monotone increasing, total increment 2 pi).
    angles: Vec<f64>,
}

impl Domain2D {
    pub fn from_curve(curve: BoundaryCurve, center: Pt2, shape: Option<ShapeSpec>) -> Result<Self> {
        let m = curve.m;
        if curve.closure_defect() > 1e-9 * curve.length {
            return Err(Error::InvalidDomain(format!(
                "curve is not closed: defect {:.3e}",
                curve.closure_defect()
            )));
        }
        if curve.min_nonadjacent_distance() <= 0.0 {
            return Err(Error::InvalidDomain("curve is not simple".into()));
        }
        for j in 0..m {
            let dot = curve.normal[j].dot(&curve.d1[j]) / curve.speed[j];
            if dot.abs() > 1e-12 {
                return Err(Error::InvalidDomain(format!(
                    "normal not orthogonal to tangent at node {j}: {dot:.3e}"
                )));
            }
        }
        // star-shape: the angular speed of p(t) - center never vanishes
        let mut min_cross = f64::INFINITY;
        let mut min_node = 0;
        for j in 0..m {
            let q = curve.pos[j] - center;
            let c = cross2(q, curve.d1[j]) / (q.norm_squared().max(1e-300));
            if c < min_cross {
                min_cross = c;
                min_node = j;
            }
        }
        if min_cross <= 0.0 {
            return Err(Error::NotStarShaped {
                min_cross,
                node: min_node,
            });
        }
        let mut angles = Vec::with_capacity(m + 1);
        let mut prev = {
            let q = curve.pos[0] - center;
            q.y.atan2(q.x)
        };
        angles.push(prev);
        for j in 1..m {
            let q = curve.pos[j] - center;
            let mut a = q.y.atan2(q.x);
            while a < prev {
                a += std::f64::consts::TAU;
            }
            angles.push(a);
            prev = a;
        }
        Ok(Self {
            curve: Arc::new(curve),
            center,
            shape,
            angles,
        })
    }

    pub fn boundary_nodes(&self) -> &[Pt2] {
        &self.curve.pos
    }

    pub fn normals(&self) -> &[Pt2] {
        &self.curve.normal
    }

    pub fn node_count(&self) -> usize {
        self.curve.m
    }

    /// Area enclosed by the boundary (shoelace with exact tangents).
    pub fn area(&self) -> f64 {
        let m = self.curve.m;
        let vals: Vec<f64> = (0..m)
            .map(|j| 0.5 * cross2(self.curve.pos[j] - self.center, self.curve.d1[j]) / m as f64)
            .collect();
        quad::pairwise_sum(&vals)
    }

    /// Boundary parameter whose ray from the center passes through x.
    fn param_of_angle(&self, theta: f64) -> f64 {
        let m = self.curve.m;
        let base = self.angles[0];
        let th = base + (theta - base).rem_euclid(std::f64::consts::TAU);
        // binary search in the monotone angle table
        let mut lo = 0usize;
        let mut hi = m; // angle at index m is base + 2 pi
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let a = if mid == m {
                base + std::f64::consts::TAU
            } else {
                self.angles[mid]
            };
            if a <= th {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // refine within the node interval by Newton on the angle
        let mut t = (lo as f64 + 0.5) / m as f64;
        for _ in 0..30 {
            let q = self.curve.eval(t) - self.center;
            let dq = self.curve.eval_d1(t);
            let a = q.y.atan2(q.x);
            let diff = wrap_angle(a - th);
            let da = cross2(q, dq) / q.norm_squared();
            let step = diff / da;
            t -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        t.rem_euclid(1.0)
    }

    /// Distance from the center to the boundary along the ray through x.
    pub fn radial_extent(&self, x: Pt2) -> f64 {
        let q = x - self.center;
        let t = self.param_of_angle(q.y.atan2(q.x));
        (self.curve.eval(t) - self.center).norm()
    }

    pub fn contains(&self, x: Pt2) -> bool {
        let q = x - self.center;
        let r = q.norm();
        if r == 0.0 {
            return true;
        }
        r < self.radial_extent(x)
    }

    /// Distance from x to the boundary (positive inside).
    pub fn boundary_distance(&self, x: Pt2) -> f64 {
        let (_, depth) = self.curve.foot_point(x);
        depth
    }

    /// Tensor-product interior quadrature: Gauss-Legendre radially against the
    /// star parameterization x = center + rho (p(t) - center), trapezoid in t.
    /// All nodes are strictly interior; the reduction order is fixed.
    pub fn interior_quadrature(&self, n_r: usize, n_t: usize) -> InteriorQuadrature {
        let (rho, wr) = quad::gauss_legendre_01(n_r);
        let mut nodes = Vec::with_capacity(n_r * n_t);
        let mut weights = Vec::with_capacity(n_r * n_t);
        for jt in 0..n_t {
            let t = jt as f64 / n_t as f64;
            let q = self.curve.eval(t) - self.center;
            let dq = self.curve.eval_d1(t);
            let jac = cross2(q, dq);
            for ir in 0..n_r {
                nodes.push(self.center + q * rho[ir]);
                weights.push(wr[ir] * rho[ir] * jac / n_t as f64);
            }
        }
        InteriorQuadrature {
            nodes,
            weights,
            n_r,
            n_t,
        }
    }

    /// CSV rows (t, x1, x2, nu1, nu2), one per boundary node.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x1,x2,nu1,nu2")?;
        for j in 0..self.curve.m {
            let p = self.curve.pos[j];
            let nu = self.curve.normal[j];
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                self.curve.node_param(j),
                p.x,
                p.y,
                nu.x,
                nu.y
            )?;
        }
        Ok(())
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(std::f64::consts::TAU);
    if w > std::f64::consts::PI {
        w -= std::f64::consts::TAU;
    }
    w
}

/// Interior quadrature nodes and weights.
#[derive(Clone, Debug)]
pub struct InteriorQuadrature {
    pub nodes: Vec<Pt2>,
    pub weights: Vec<f64>,
    pub n_r: usize,
    pub n_t: usize,
}

impl InteriorQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Deterministic pairwise-reduced integral of a sampled function.
    pub fn integrate<F: FnMut(Pt2) -> f64>(&self, mut f: F) -> f64 {
        let vals: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        quad::pairwise_sum(&vals)
    }

    pub fn total_weight(&self) -> f64 {
        quad::pairwise_sum(&self.weights)
    }
}

/// Closed union of parameter intervals defining the inaccessible boundary
/// portion; the accessible part is the open complement.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct BoundaryPartition {
    /// Closed intervals [a, b] in [0, 1); an interval with a > b wraps.
    pub gamma: Vec<[f64; 2]>,
}

impl BoundaryPartition {
    pub fn new(gamma: Vec<[f64; 2]>) -> Result<Self> {
        for iv in &gamma {
            if !(0.0..1.0).contains(&iv[0]) || !(0.0..1.0).contains(&iv[1]) {
                return Err(Error::Inconsistent(format!(
                    "partition endpoints must lie in [0,1): {iv:?}"
                )));
            }
        }
        let p = Self { gamma };
        if p.total_length() >= 1.0 - 1e-12 {
            return Err(Error::Inconsistent(
                "inaccessible set must be proper (accessible complement nonempty)".into(),
            ));
        }
        Ok(p)
    }

    pub fn total_length(&self) -> f64 {
        self.gamma
            .iter()
            .map(|iv| (iv[1] - iv[0]).rem_euclid(1.0))
            .sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = t.rem_euclid(1.0);
        self.gamma.iter().any(|iv| {
            if iv[0] <= iv[1] {
                t >= iv[0] && t <= iv[1]
            } else {
                t >= iv[0] || t <= iv[1]
            }
        })
    }

    /// Parameters of the domain's boundary nodes lying on the inaccessible
    /// part.
    pub fn node_indices(&self, domain: &Domain2D) -> Vec<usize> {
        (0..domain.node_count())
            .filter(|&j| self.contains(domain.curve.node_param(j)))
            .collect()
    }

    /// Inaccessible portion from the half-plane condition x1 <= threshold.
    pub fn from_halfplane_x1(domain: &Domain2D, threshold: f64) -> Result<Self> {
        let g = |t: f64| domain.curve.eval(t).x - threshold;
        let m = domain.node_count();
        let fine = 4 * m;
        let mut roots = Vec::new();
        let mut prev = g(0.0);
        for j in 1..=fine {
            let t = j as f64 / fine as f64;
            let val = g(t);
            if (prev <= 0.0) != (val <= 0.0) {
                // bisection refine
                let (mut lo, mut hi) = ((j - 1) as f64 / fine as f64, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (g(lo) <= 0.0) != (g(mid) <= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev = val;
        }
        if roots.is_empty() {
            if g(0.0) <= 0.0 {
                return Err(Error::Inconsistent(
                    "entire boundary lies in the half-plane; inaccessible set must be proper"
                        .into(),
                ));
            }
            return Self::new(vec![]);
        }
        let mut gamma = Vec::new();
        for k in 0..roots.len() {
            let a = roots[k];
            let b = roots[(k + 1) % roots.len()];
            let mid = if a <= b {
                0.5 * (a + b)
            } else {
                (0.5 * (a + b + 1.0)).rem_euclid(1.0)
            };
            if g(mid) <= 0.0 {
                gamma.push([a, b.rem_euclid(1.0)]);
            }
        }
        Self::new(gamma)
    }
}

/// Builds a validated domain from a named shape.
///
/// Requires an even node count of at least 64; rejects parameter combinations
/// that break star-shapedness with a diagnostic.
pub fn make_domain(shape: ShapeSpec, m: usize) -> Result<Domain2D> {
    if m < 64 || m % 2 != 0 {
        return Err(Error::InvalidDomain(format!(
            "node count must be even and >= 64, got {m}"
        )));
    }
    let curve = shape.build_curve(m);
    Domain2D::from_curve(curve, shape.center(), Some(shape))
}

/// Supporting function of a finite point set: H_K(xi) = max over K of x . xi.
/// Positively homogeneous of degree 1 in xi.
pub fn supporting_function(points: &[Pt2], xi: Pt2) -> f64 {
    assert!(!points.is_empty(), "supporting function of an empty set");
    points
        .iter()
        .map(|p| p.dot(&xi))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    pub(crate) fn tangent_disc(m: usize) -> Domain2D {
        make_domain(
            ShapeSpec::Circle {
                center: [-1.0, 0.0],
                radius: 1.0,
            },
            m,
        )
        .unwrap()
    }

    #[test]
    fn tangent_disc_passes_through_origin() {
        let d = tangent_disc(128);
        // node at t = 0 sits at the rightmost point (origin)
        let p0 = d.boundary_nodes()[0];
        assert_relative_eq!(p0.x, 0.0, epsilon = 1e-14);
        assert_relative_eq!(p0.y, 0.0, epsilon = 1e-14);
        let nu = d.normals()[0];
        assert_relative_eq!(nu.x, 1.0, epsilon = 1e-14);
        assert_relative_eq!(nu.y, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_ellipse_matches_circle() {
        let c = make_domain(
            ShapeSpec::Circle {
                center: [0.25, -0.5],
                radius: 1.0,
            },
            128,
        )
        .unwrap();
        let e = make_domain(
            ShapeSpec::Ellipse {
                center: [0.25, -0.5],
                a: 1.0,
                b: 1.0,
            },
            128,
        )
        .unwrap();
        for j in 0..128 {
            assert_relative_eq!(
                (c.boundary_nodes()[j] - e.boundary_nodes()[j]).norm(),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn perturbed_circle_length_matches_adaptive_oracle() {
        let spec = ShapeSpec::FourierCircle {
            center: [0.0, 0.0],
            radius: 1.0,
            amplitude: 0.1,
            mode: 3,
        };
        let d = make_domain(spec, 256).unwrap();
        // independent oracle: adaptive quadrature of |p'(t)| from the analytic
        // derivative of the shape formula
        let speed = |t: f64| {
            let w = 2.0 * PI;
            let r = 1.0 + 0.1 * (w * 3.0 * t).cos();
            let r1 = -0.1 * w * 3.0 * (w * 3.0 * t).sin();
            ((r1 * r1) + (r * r * w * w)).sqrt()
        };
        let oracle = quad::adaptive_simpson(speed, 0.0, 1.0, 1e-13);
        assert_relative_eq!(d.curve.length, oracle, epsilon = 1e-10);
    }

    #[test]
    fn non_star_shaped_rejected() {
        // a wavy boundary seen from a point deep inside one lobe: rays cross
        // the neighbouring lobes, so the star-shape check must fail
        let spec = ShapeSpec::FourierCircle {
            center: [0.0, 0.0],
            radius: 1.0,
            amplitude: 0.25,
            mode: 4,
        };
        let curve = spec.build_curve(256);
        match Domain2D::from_curve(curve, Pt2::new(0.9, 0.0), None) {
            Err(Error::NotStarShaped { min_cross, .. }) => assert!(min_cross < 0.0),
            other => panic!("expected star-shape rejection, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_area_of_unit_disc() {
        let d = make_domain(
            ShapeSpec::Circle {
                center: [0.0, 0.0],
                radius: 1.0,
            },
            128,
        )
        .unwrap();
        let q = d.interior_quadrature(40, 80);
        assert_relative_eq!(q.total_weight(), PI, epsilon = 1e-10);
        // odd moment vanishes by symmetry
        let m1 = q.integrate(|x| x.x);
        assert!(m1.abs() < 1e-12);
        assert!(q.nodes.iter().all(|&x| x.norm() < 1.0));
    }

    #[test]
    fn quadrature_exp_moment_matches_series_oracle() {
        // integral of exp(x1) over the unit disc = 2 pi I_1(1), from the
        // series I_1(1) = sum_k (1/2)^(2k+1) / (k! (k+1)!)
        let mut i1 = 0.0;
        let mut term = 0.5;
        for k in 0..30 {
            i1 += term;
            term *= 0.25 / ((k + 1) as f64 * (k + 2) as f64);
        }
        let oracle = 2.0 * PI * i1;
        let d = make_domain(
            ShapeSpec::Circle {
                center: [0.0, 0.0],
                radius: 1.0,
            },
            128,
        )
        .unwrap();
        let q = d.interior_quadrature(60, 120);
        let val = q.integrate(|x| x.x.exp());
        assert_relative_eq!(val, oracle, epsilon = 1e-11);
    }

    #[test]
    fn quadrature_area_convergence_order() {
        let spec = ShapeSpec::FourierCircle {
            center: [0.0, 0.0],
            radius: 1.0,
            amplitude: 0.1,
            mode: 3,
        };
        let d = make_domain(spec, 256).unwrap();
        let exact = d.area();
        let err = |n_r: usize| (d.interior_quadrature(n_r, 200).total_weight() - exact).abs();
        let e1 = err(25);
        let e2 = err(50);
        // at least algebraic of order 4 (or already at the rounding floor)
        assert!(e2 <= (e1 / 16.0).max(1e-12 * exact));
    }

    #[test]
    fn supporting_function_examples() {
        let p = Pt2::new(0.3, -0.7);
        let xi = Pt2::new(2.0, 1.0);
        assert_relative_eq!(supporting_function(&[p], xi), p.dot(&xi));
        // sampled unit circle against xi = (0, 3): H = 3 |xi|/3 = 3
        let circle: Vec<Pt2> = (0..512)
            .map(|j| {
                let a = std::f64::consts::TAU * j as f64 / 512.0;
                Pt2::new(a.cos(), a.sin())
            })
            .collect();
        let h = supporting_function(&circle, Pt2::new(0.0, 3.0));
        assert_relative_eq!(h, 3.0, epsilon = 1e-3);
        // arc x1 <= -c against (-1, 0): max of -x1 over the arc
        let c = 0.4;
        let arc: Vec<Pt2> = circle.iter().copied().filter(|p| p.x <= -c).collect();
        let oracle = arc.iter().map(|p| -p.x).fold(f64::NEG_INFINITY, f64::max);
        assert_relative_eq!(supporting_function(&arc, Pt2::new(-1.0, 0.0)), oracle);
    }

    #[test]
    fn halfplane_partition_covers_back_of_disc() {
        let d = tangent_disc(256);
        let part = BoundaryPartition::from_halfplane_x1(&d, -0.4).unwrap();
        assert_eq!(part.gamma.len(), 1);
        for j in part.node_indices(&d) {
            assert!(d.boundary_nodes()[j].x <= -0.4 + 1e-10);
        }
        // endpoints solve x1(t) = -0.4
        for iv in &part.gamma {
            for &t in iv {
                assert_relative_eq!(d.curve.eval(t).x, -0.4, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn contains_and_radial_extent() {
        let d = tangent_disc(128);
        assert!(d.contains(Pt2::new(-1.0, 0.0)));
        assert!(d.contains(Pt2::new(-0.1, 0.0)));
        assert!(!d.contains(Pt2::new(0.1, 0.0)));
        assert!(!d.contains(Pt2::new(-1.0, 1.1)));
        assert_relative_eq!(d.radial_extent(Pt2::new(-1.0, 0.5)), 1.0, epsilon = 1e-12);
    }
}
