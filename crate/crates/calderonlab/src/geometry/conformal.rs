//! Inversion-based normalization: flattens a domain against its tangent line
//! at a chosen boundary point, so that the image sits inside the unit ball
//! tangent to {x1 = 0} at the origin, and transfers harmonic fields back by
//! the Kelvin transform (which in the plane is plain composition).

use super::curve::BoundaryCurve;
use super::Domain2D;
use crate::error::{Error, Result};
use crate::laplace::HarmonicField;
use crate::{C64, Pt2};
use std::sync::Arc;

/// The inversion x -> a + r^2 (x-a)/|x-a|^2 composed with the similarity that
/// sends the tangent ball B(a, r) to B(-e1, 1) and x0 to the origin.
///
/// The raw inversion `psi` is an involution; `weight` is the Jacobian factor
/// r^4 |x-a|^{-4} of the induced change of variables on potentials.
#[derive(Clone, Debug)]
pub struct ConformalNormalization {
    pub a: Pt2,
    pub r: f64,
    pub x0: Pt2,
    /// Unit rotation of the post-inversion similarity.
    rot: C64,
}

fn to_c(p: Pt2) -> C64 {
    C64::new(p.x, p.y)
}

fn from_c(z: C64) -> Pt2 {
    Pt2::new(z.re, z.im)
}

impl ConformalNormalization {
    pub fn new(a: Pt2, r: f64, x0: Pt2) -> Self {
        // q rotates (a - x0)/r onto -e1
        let rot = -C64::new(r, 0.0) / (to_c(a) - to_c(x0));
        Self { a, r, x0, rot }
    }

    /// Raw inversion; rejected at the center.
    pub fn psi(&self, x: Pt2) -> Result<Pt2> {
        let w = x - self.a;
        let n2 = w.norm_squared();
        if n2 < 1e-28 {
            return Err(Error::AtInversionCenter);
        }
        Ok(self.a + w * (self.r * self.r / n2))
    }

    /// Change-of-variables weight r^4 |x-a|^{-4}.
    pub fn weight(&self, x: Pt2) -> f64 {
        let n2 = (x - self.a).norm_squared();
        self.r.powi(4) / (n2 * n2)
    }

    /// Full normalized map: similarity after inversion.
    pub fn apply(&self, x: Pt2) -> Result<Pt2> {
        let y = self.psi(x)?;
        Ok(from_c(self.rot * (to_c(y) - to_c(self.x0)) / self.r))
    }

    /// Inverse of the full map (the inversion is its own inverse).
    pub fn apply_inverse(&self, y: Pt2) -> Result<Pt2> {
        let z = to_c(self.x0) + to_c(y) * self.r / self.rot;
        self.psi(from_c(z))
    }

    /// Complex anti-holomorphic derivative g with dF = g * conj(dz).
    fn map_deriv(&self, x: Pt2) -> C64 {
        let w = to_c(x) - to_c(self.a);
        -self.rot * self.r / (w.conj() * w.conj())
    }

    /// Real 2x2 Jacobian of the full map at x.
    pub fn jacobian(&self, x: Pt2) -> [[f64; 2]; 2] {
        let g = self.map_deriv(x);
        // F(x + dx) = F(x) + g * conj(dx): d(Re F) = Re(g) dx1 + Im(g) dx2, ...
        [[g.re, g.im], [g.im, -g.re]]
    }

    /// Image of a boundary curve under the full map, reparameterized to keep
    /// counterclockwise orientation (the inversion reverses it).
    pub fn map_curve(&self, curve: &BoundaryCurve) -> Result<BoundaryCurve> {
        let m = curve.m;
        let mut pos = vec![Pt2::zeros(); m];
        let mut d1 = vec![Pt2::zeros(); m];
        let mut d2 = vec![Pt2::zeros(); m];
        let alpha = to_c(self.a);
        for j in 0..m {
            let z = to_c(curve.pos[j]);
            let zp = to_c(curve.d1[j]);
            let zpp = to_c(curve.d2[j]);
            let w = (z - alpha).conj();
            if w.norm() < 1e-14 {
                return Err(Error::AtInversionCenter);
            }
            let r2 = self.r * self.r;
            // psi(z) = alpha + r^2 / conj(z - alpha)
            let c = alpha + r2 / w;
            let cp = -r2 * zp.conj() / (w * w);
            let cpp = -r2 * (zpp.conj() / (w * w) - 2.0 * zp.conj() * zp.conj() / (w * w * w));
            let s = self.rot / self.r;
            let gamma = s * (c - to_c(self.x0));
            let gammap = s * cp;
            let gammapp = s * cpp;
            // reverse orientation: index m - j, parameter flip negates d1
            let k = (m - j) % m;
            pos[k] = from_c(gamma);
            d1[k] = -from_c(gammap);
            d2[k] = from_c(gammapp);
        }
        Ok(BoundaryCurve::from_jets(pos, d1, d2))
    }
}

/// Chooses a tangent ball at the boundary point with parameter `t0`, builds
/// the normalized image domain, and returns it with the normalization.
///
/// The ball radius is searched on a geometric grid from the curvature radius
/// at the point down to a tenth of it; the largest radius whose clearance
/// (distance of the remaining boundary to the closed ball) is at least 1e-6
/// wins. Fails with the smallest violated clearance when no radius works.
pub fn normalize_at_param(
    domain: &Domain2D,
    t0: f64,
) -> Result<(Domain2D, ConformalNormalization)> {
    let curve = &domain.curve;
    let x0 = curve.eval(t0);
    let nu0 = curve.eval_normal(t0);
    let kappa = curve.eval_curvature(t0);
    let scale = curve
        .pos
        .iter()
        .map(|p| (p - domain.center).norm())
        .fold(0.0, f64::max);
    let r_max = if kappa > 1e-9 { 1.0 / kappa } else { 4.0 * scale };
    let dense = curve.upsampled(4);
    let spacing = curve.node_spacing();
    let mut best_clearance = f64::NEG_INFINITY;
    let ratio = 0.93_f64;
    let steps = ((10.0_f64.ln()) / (1.0 / ratio).ln()).ceil() as usize + 1;
    for k in 0..=steps {
        let r = r_max * ratio.powi(k as i32);
        let a = x0 + nu0 * r;
        let mut clearance = f64::INFINITY;
        for p in &dense.pos {
            if (p - x0).norm() < 1.5 * spacing {
                continue; // tangency neighbourhood
            }
            let c = (p - a).norm() - r;
            if c < clearance {
                clearance = c;
            }
        }
        if clearance >= 1e-6 {
            let norm = ConformalNormalization::new(a, r, x0);
            let image_curve = norm.map_curve(curve)?;
            let center_guess = norm.apply(domain.center)?;
            let image = Domain2D::from_curve(image_curve.clone(), center_guess, None).or_else(
                |_| {
                    // fall back to the image centroid as star center
                    let centroid = image_curve
                        .pos
                        .iter()
                        .fold(Pt2::zeros(), |acc, p| acc + p)
                        / image_curve.m as f64;
                    Domain2D::from_curve(image_curve, centroid, None)
                },
            )?;
            return Ok((image, norm));
        }
        if clearance > best_clearance {
            best_clearance = clearance;
        }
    }
    Err(Error::NoTangentBall {
        clearance: best_clearance,
    })
}

/// As [`normalize_at_param`], locating the boundary parameter from a point.
pub fn normalize_at(domain: &Domain2D, x0: Pt2) -> Result<(Domain2D, ConformalNormalization)> {
    let (t0, depth) = domain.curve.foot_point(x0);
    if depth.abs() > 1e-6 * domain.curve.length {
        return Err(Error::Inconsistent(format!(
            "x0 is not on the boundary (distance {depth:.3e})"
        )));
    }
    normalize_at_param(domain, t0)
}

/// Kelvin transform of a harmonic field on the image domain back to the
/// original domain. In the plane the power factor is 1, so the transfer is
/// composition with the normalization map.
pub fn kelvin_transfer(
    field: &HarmonicField,
    norm: &ConformalNormalization,
    original: &Domain2D,
) -> HarmonicField {
    HarmonicField::composed(
        Arc::new(original.clone()),
        field.clone(),
        norm.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ShapeSpec};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn tangent_disc() -> Domain2D {
        make_domain(
            ShapeSpec::Circle {
                center: [-1.0, 0.0],
                radius: 1.0,
            },
            128,
        )
        .unwrap()
    }

    #[test]
    fn involution_on_random_points() {
        let norm = ConformalNormalization::new(Pt2::new(1.5, 0.0), 1.25, Pt2::new(0.25, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = Pt2::new(rng.gen_range(-2.0..0.5), rng.gen_range(-1.0..1.0));
            if (x - norm.a).norm() < 0.05 {
                continue;
            }
            let y = norm.psi(norm.psi(x).unwrap()).unwrap();
            assert_relative_eq!((y - x).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn psi_rejected_at_center() {
        let norm = ConformalNormalization::new(Pt2::new(1.0, 0.0), 1.0, Pt2::new(0.0, 0.0));
        assert!(matches!(
            norm.psi(Pt2::new(1.0, 0.0)),
            Err(Error::AtInversionCenter)
        ));
    }

    #[test]
    fn disc_maps_to_disc_in_left_halfplane() {
        let d = tangent_disc();
        // boundary point at t = 0 is the origin
        let (image, norm) = normalize_at_param(&d, 0.0).unwrap();
        assert_relative_eq!((norm.x0 - Pt2::new(0.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        // x0 maps to the origin; image inside the unit ball tangent at 0
        let y0 = norm.apply(norm.x0).unwrap();
        assert_relative_eq!(y0.norm(), 0.0, epsilon = 1e-12);
        for p in image.boundary_nodes() {
            assert!(p.x <= 1e-10, "image crosses the tangent line: {p:?}");
            assert!((p + Pt2::new(1.0, 0.0)).norm() <= 1.0 + 1e-9);
        }
        // inversions map discs to discs: all image nodes on a common circle
        // (circumcenter of three well-separated nodes)
        let m = image.node_count();
        let (a, b, c) = (
            image.boundary_nodes()[0],
            image.boundary_nodes()[m / 3],
            image.boundary_nodes()[2 * m / 3],
        );
        let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        let c_est = Pt2::new(
            (a.norm_squared() * (b.y - c.y)
                + b.norm_squared() * (c.y - a.y)
                + c.norm_squared() * (a.y - b.y))
                / d,
            (a.norm_squared() * (c.x - b.x)
                + b.norm_squared() * (a.x - c.x)
                + c.norm_squared() * (b.x - a.x))
                / d,
        );
        let r_est = (image.boundary_nodes()[0] - c_est).norm();
        for p in image.boundary_nodes() {
            assert_relative_eq!((p - c_est).norm(), r_est, epsilon = 1e-9);
        }
    }

    #[test]
    fn image_area_matches_weight_integral() {
        // change of variables: area of the image equals the integral of the
        // weight over the original domain; Monte-Carlo style independent check
        // on a quadrature grid
        let d = make_domain(
            ShapeSpec::FourierCircle {
                center: [-1.05, 0.0],
                radius: 1.0,
                amplitude: 0.05,
                mode: 2,
            },
            256,
        )
        .unwrap();
        let (t0, _) = d.curve.foot_point(Pt2::new(0.0, 0.0));
        let (image, norm) = normalize_at_param(&d, t0).unwrap();
        let q = d.interior_quadrature(100, 200);
        // full map adds a 1/r^2 similarity on top of psi, so the area weight
        // picks up the factor 1/r^2 squared
        let w_int = q.integrate(|x| norm.weight(x)) / (norm.r * norm.r);
        assert_relative_eq!(image.area(), w_int, max_relative = 1e-6);
    }

    #[test]
    fn no_tangent_ball_error_carries_clearance() {
        // request a normalization at a concave-ish point of a wavy domain
        // where even the smallest searched ball still hits the boundary
        let d = make_domain(
            ShapeSpec::FourierCircle {
                center: [0.0, 0.0],
                radius: 1.0,
                amplitude: 0.25,
                mode: 4,
            },
            256,
        )
        .unwrap();
        // t = 1/8 is a trough between lobes (cos(8 pi t) = -1): neighbouring
        // lobes shadow the outward ball
        match normalize_at_param(&d, 0.125) {
            Err(Error::NoTangentBall { clearance }) => assert!(clearance < 1e-6),
            other => panic!("expected NoTangentBall, got {other:?}"),
        }
    }
}
