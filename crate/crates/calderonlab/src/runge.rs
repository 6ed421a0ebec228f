//! Density of Green-kernel superpositions among harmonic functions vanishing
//! on a shared boundary portion, realized as least-squares approximation
//! between nested domains, plus the boundary-integral orthogonality identity
//! behind it.

use crate::error::{Error, Result};
use crate::geometry::{make_domain, BoundaryPartition, Domain2D, InteriorQuadrature, ShapeSpec};
use crate::laplace::nystrom::fundamental;
use crate::laplace::{AnalyticHarmonic, GreenKernel, HarmonicField, LayerField, PointSources};
use crate::num::quad;
use crate::{C64, Pt2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Two nested domains sharing part of their boundary, with source points in
/// the closed gap.
pub struct NestedPair {
    pub omega1: Arc<Domain2D>,
    pub omega2: Arc<Domain2D>,
    /// Parameter intervals of omega1's boundary lying on the shared arc.
    pub shared: BoundaryPartition,
    pub sources: Vec<Pt2>,
}

impl NestedPair {
    /// A disc of radius `r2` and its radial dent: the inner boundary
    /// coincides with the circle away from the dent window, which is the
    /// non-shared portion.
    pub fn dented_disc(
        r2: f64,
        depth: f64,
        window: [f64; 2],
        m1: usize,
        m2: usize,
        n_sources: usize,
        seed: u64,
    ) -> Result<Self> {
        let omega2 = Arc::new(make_domain(
            ShapeSpec::Circle {
                center: [0.0, 0.0],
                radius: r2,
            },
            m2,
        )?);
        let omega1 = Arc::new(make_domain(
            ShapeSpec::DentedCircle {
                center: [0.0, 0.0],
                radius: r2,
                depth,
                window,
            },
            m1,
        )?);
        let shared = BoundaryPartition::new(vec![[window[1], window[0]]])?;
        // invariant: inner boundary nodes inside the outer domain or on the
        // shared set
        for (j, p) in omega1.boundary_nodes().iter().enumerate() {
            let t = omega1.curve.node_param(j);
            if shared.contains(t) {
                if (p.norm() - r2).abs() > 1e-10 * r2 {
                    return Err(Error::Inconsistent(format!(
                        "shared node {j} is off the outer boundary by {:.3e}",
                        (p.norm() - r2).abs()
                    )));
                }
            } else if !omega2.contains(*p) {
                return Err(Error::Inconsistent(format!(
                    "inner boundary node {j} escapes the outer domain"
                )));
            }
        }
        // source candidates: outer-domain quadrature nodes in the gap, kept
        // clear of both boundaries so the per-source Dirichlet data stays
        // resolved
        let gap_quad = omega2.interior_quadrature(48, 220);
        let clear2 = 4.5 * omega2.curve.node_spacing();
        let clear1 = 0.05 * r2;
        let mut candidates: Vec<Pt2> = gap_quad
            .nodes
            .into_iter()
            .filter(|&x| {
                if omega1.contains(x) {
                    return false;
                }
                if x.norm() > r2 - clear2 {
                    return false;
                }
                let (_, depth1) = omega1.curve.foot_point(x);
                depth1 < -clear1
            })
            .collect();
        if candidates.len() < n_sources {
            return Err(Error::Inconsistent(format!(
                "only {} admissible source nodes for {} requested",
                candidates.len(),
                n_sources
            )));
        }
        // deterministic nested subsets: a seeded shuffle, then prefixes
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        candidates.shuffle(&mut rng);
        candidates.truncate(n_sources);
        Ok(Self {
            omega1,
            omega2,
            shared,
            sources: candidates,
        })
    }

    pub fn shared_node_indices(&self) -> Vec<usize> {
        self.shared.node_indices(&self.omega1)
    }

    /// Parameter window of the non-shared portion of the inner boundary.
    pub fn open_window(&self) -> [f64; 2] {
        let iv = self.shared.gamma[0];
        [iv[1], iv[0]]
    }
}

/// Superposition field sum_j a_j G(., y_j) of outer-domain Green kernels,
/// restricted to the inner domain. Harmonic there (all sources are outside)
/// and vanishing on the shared arc.
pub fn green_superposition(
    pair: &NestedPair,
    green: &GreenKernel,
    amplitudes: &[f64],
) -> Result<HarmonicField> {
    if amplitudes.len() != pair.sources.len() {
        return Err(Error::Inconsistent(format!(
            "{} amplitudes for {} sources",
            amplitudes.len(),
            pair.sources.len()
        )));
    }
    let m2 = pair.omega2.node_count();
    let mut density = vec![C64::new(0.0, 0.0); m2];
    let mut data = vec![C64::new(0.0, 0.0); m2];
    for (&y, &a) in pair.sources.iter().zip(amplitudes) {
        let corrector = green.corrector(y)?;
        for j in 0..m2 {
            density[j] += a * corrector.density[j];
            data[j] += a * corrector.data[j];
        }
    }
    let singular = HarmonicField::analytic(
        pair.omega1.clone(),
        Arc::new(PointSources {
            points: pair.sources.clone(),
            strengths: amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect(),
        }),
    );
    let solver = green.corrector(pair.sources[0])?.solver.clone();
    let corrector_field = HarmonicField::from_layer(
        pair.omega2.clone(),
        LayerField::new(solver, density, data),
    );
    Ok(HarmonicField::sum(
        pair.omega1.clone(),
        vec![singular, corrector_field],
    ))
}

/// Least-squares approximation of a target by Green superpositions.
pub struct RungeApproximation {
    pub amplitudes: Vec<f64>,
    pub l2_error: f64,
    pub relative_l2_error: f64,
}

/// Design matrix of single-source fields on the quadrature, weighted so the
/// Euclidean residual is the L^2(Omega_1) norm. Each column goes through the
/// same boundary-aware evaluation as an assembled superposition field, so
/// quadrature nodes hugging the shared arc stay consistent.
fn design_matrix(
    pair: &NestedPair,
    green: &GreenKernel,
    quad_rule: &InteriorQuadrature,
    sources: &[Pt2],
) -> Result<nalgebra::DMatrix<f64>> {
    use rayon::prelude::*;
    let n = quad_rule.len();
    let correctors: Vec<_> = sources
        .iter()
        .map(|&y| green.corrector(y))
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<Vec<f64>> = correctors
        .par_iter()
        .zip(sources.par_iter())
        .map(|(corr, &y)| {
            quad_rule
                .nodes
                .iter()
                .map(|&x| corr.evaluate(x).re + fundamental(x, y))
                .collect()
        })
        .collect();
    let mut d = nalgebra::DMatrix::<f64>::zeros(n, sources.len());
    for (j, col) in columns.iter().enumerate() {
        for (r, (&v, &w)) in col.iter().zip(&quad_rule.weights).enumerate() {
            d[(r, j)] = w.sqrt() * v;
        }
    }
    Ok(d)
}

/// Minimizes |superposition - target|_{L^2(Omega_1)}^2 + lambda |a|^2 over
/// source amplitudes. At lambda = 0 the normal equations are solved by a
/// truncated spectral pseudo-inverse; breakdown advises regularization.
pub fn runge_approximate(
    pair: &NestedPair,
    green: &GreenKernel,
    target: &HarmonicField,
    quad_rule: &InteriorQuadrature,
    lambda: f64,
    n_sources: usize,
) -> Result<RungeApproximation> {
    if lambda < 0.0 {
        return Err(Error::Inconsistent("lambda must be nonnegative".into()));
    }
    if n_sources > pair.sources.len() {
        return Err(Error::Inconsistent(format!(
            "{} sources requested, pair holds {}",
            n_sources,
            pair.sources.len()
        )));
    }
    // precondition: the target vanishes on the shared arc
    let shared_max = pair
        .shared_node_indices()
        .into_iter()
        .map(|j| target.trace()[j].norm())
        .fold(0.0, f64::max);
    let target_scale = target
        .trace()
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    if shared_max > 1e-6 * target_scale {
        return Err(Error::Inconsistent(format!(
            "target does not vanish on the shared arc: max |trace| = {shared_max:.3e}"
        )));
    }
    let sources = &pair.sources[..n_sources];
    let d = design_matrix(pair, green, quad_rule, sources)?;
    let tvals = target.evaluate_many(&quad_rule.nodes);
    let t = nalgebra::DVector::<f64>::from_iterator(
        quad_rule.len(),
        tvals
            .iter()
            .zip(&quad_rule.weights)
            .map(|(v, &w)| w.sqrt() * v.re),
    );
    let gram = d.transpose() * &d;
    let solve_normal = |rhs: &nalgebra::DVector<f64>| -> Result<nalgebra::DVector<f64>> {
        if lambda > 0.0 {
            let reg = &gram + nalgebra::DMatrix::identity(n_sources, n_sources) * lambda;
            Ok(reg
                .cholesky()
                .ok_or(Error::NormalEquation {
                    cond: f64::INFINITY,
                })?
                .solve(rhs))
        } else {
            let eig = gram.clone().symmetric_eigen();
            let max_e = eig
                .eigenvalues
                .iter()
                .cloned()
                .fold(0.0f64, f64::max)
                .max(1e-300);
            let cutoff = 1e-13 * max_e;
            if eig.eigenvalues.iter().all(|&e| e <= cutoff) {
                return Err(Error::NormalEquation {
                    cond: f64::INFINITY,
                });
            }
            let proj = eig.eigenvectors.transpose() * rhs;
            let scaled = nalgebra::DVector::from_iterator(
                n_sources,
                proj.iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(p, &e)| if e > cutoff { p / e } else { 0.0 }),
            );
            Ok(&eig.eigenvectors * scaled)
        }
    };
    // normal equations square the conditioning; a few refinement sweeps on
    // the residual recover least-squares accuracy
    let mut coeffs = solve_normal(&(d.transpose() * &t))?;
    for _ in 0..2 {
        let r = &t - &d * &coeffs;
        let dc = solve_normal(&(d.transpose() * r))?;
        coeffs += dc;
    }
    let resid = (&d * &coeffs - &t).norm();
    let t_norm = t.norm().max(1e-300);
    Ok(RungeApproximation {
        amplitudes: coeffs.as_slice().to_vec(),
        l2_error: resid,
        relative_l2_error: resid / t_norm,
    })
}

/// A harmonic target vanishing on the shared arc: a holomorphic-polynomial
/// field minus the outer-domain harmonic extension of its windowed trace.
pub fn windowed_polynomial_target(
    pair: &NestedPair,
    green: &GreenKernel,
    coeffs: Vec<C64>,
) -> Result<HarmonicField> {
    let poly = Arc::new(crate::laplace::HarmonicPoly { coeffs });
    let window = pair.open_window();
    let m2 = pair.omega2.node_count();
    // smooth window equal to 1 on the shared arc of the outer boundary
    let data: Vec<C64> = (0..m2)
        .map(|j| {
            let t = pair.omega2.curve.node_param(j);
            let w = shared_window(t, window);
            poly.eval(pair.omega2.boundary_nodes()[j]) * w
        })
        .collect();
    let solver = green.corrector(pair.sources[0])?.solver.clone();
    let density = solver.solve(&data)?;
    let extension = HarmonicField::from_layer(
        pair.omega2.clone(),
        LayerField::new(solver, density, data),
    );
    let poly_field = HarmonicField::analytic(pair.omega1.clone(), poly);
    Ok(HarmonicField::sum(
        pair.omega1.clone(),
        vec![
            poly_field,
            HarmonicField::scaled(C64::new(-1.0, 0.0), extension),
        ],
    ))
}

/// Smooth periodic window: 1 outside the open interval, rolling to 0 well
/// inside it.
fn shared_window(t: f64, open: [f64; 2]) -> f64 {
    let span = (open[1] - open[0]).rem_euclid(1.0);
    let u = (t - open[0]).rem_euclid(1.0);
    if u >= span {
        return 1.0;
    }
    let x = u / span;
    let edge = 0.25;
    if x < edge {
        1.0 - crate::num::special::smoothstep_c4(x / edge)
    } else if x > 1.0 - edge {
        crate::num::special::smoothstep_c4((x - (1.0 - edge)) / edge)
    } else {
        0.0
    }
}

/// Both sides of the boundary orthogonality identity for a test density v on
/// the inner domain and a harmonic target u vanishing on the shared arc:
/// with w the outer-domain Green potential of v, the volume pairing of u and
/// v equals the boundary pairing of (w, u) over the non-shared arc.
pub struct OrthogonalityCheck {
    pub volume_side: f64,
    pub boundary_side: f64,
    pub residual: f64,
}

pub fn verify_orthogonality_identity(
    pair: &NestedPair,
    green: &GreenKernel,
    v: &crate::pairing::PotentialGrid,
    u: &HarmonicField,
) -> Result<OrthogonalityCheck> {
    // w = Newtonian potential of v (on Omega_1) plus the outer-domain
    // correction making w vanish on the outer boundary
    let newton_pts: Vec<Pt2> = v.quad.nodes.clone();
    let newton_str: Vec<C64> = v
        .values
        .iter()
        .zip(&v.quad.weights)
        .map(|(&val, &w)| C64::new(val * w, 0.0))
        .collect();
    let newton = PointSources {
        points: newton_pts,
        strengths: newton_str,
    };
    let m2 = pair.omega2.node_count();
    let data: Vec<C64> = (0..m2)
        .map(|j| -newton.eval(pair.omega2.boundary_nodes()[j]))
        .collect();
    let solver = green.corrector(pair.sources[0])?.solver.clone();
    let density = solver.solve(&data)?;
    let correction = LayerField::new(solver, density, data);

    // volume side over the inner quadrature
    let uv = u.evaluate_many(&v.quad.nodes);
    let terms: Vec<f64> = uv
        .iter()
        .zip(v.values.iter().zip(&v.quad.weights))
        .map(|(uval, (&vv, &w))| w * vv * uval.re)
        .collect();
    let volume_side = quad::pairwise_sum(&terms);

    // boundary side: Gauss panels over the non-shared window
    let window = pair.open_window();
    let span = (window[1] - window[0]).rem_euclid(1.0);
    let (xs, ws) = quad::gauss_legendre_01(160);
    let mut vals = Vec::with_capacity(xs.len());
    for (&x, &wq) in xs.iter().zip(&ws) {
        let t = (window[0] + span * x).rem_euclid(1.0);
        let p = pair.omega1.curve.eval(t);
        let speed = pair.omega1.curve.eval_d1(t).norm();
        let nu = pair.omega1.curve.eval_normal(t);
        let w_val = (newton.eval(p) + correction.evaluate(p)).re;
        let gw_n = newton.grad(p);
        let gw_c = correction.gradient(p);
        let dw = (gw_n[0] + gw_c[0]).re * nu.x + (gw_n[1] + gw_c[1]).re * nu.y;
        let u_val = u.evaluate(p).re;
        let gu = u.gradient(p);
        let du = gu[0].re * nu.x + gu[1].re * nu.y;
        vals.push(wq * span * speed * (w_val * du - u_val * dw));
    }
    let boundary_side = quad::pairwise_sum(&vals);
    Ok(OrthogonalityCheck {
        volume_side,
        boundary_side,
        residual: (volume_side - boundary_side).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn standard_pair(n_sources: usize) -> (NestedPair, GreenKernel) {
        let pair = NestedPair::dented_disc(
            1.5,
            0.3,
            [0.35, 0.65],
            384,
            384,
            n_sources,
            11,
        )
        .unwrap();
        let green = GreenKernel::new(pair.omega2.clone());
        (pair, green)
    }

    #[test]
    fn zero_amplitudes_give_zero_field() {
        let (pair, green) = standard_pair(24);
        let field = green_superposition(&pair, &green, &vec![0.0; 24]).unwrap();
        for p in [Pt2::new(0.0, 0.0), Pt2::new(0.4, -0.3)] {
            assert_eq!(field.evaluate(p).norm(), 0.0);
        }
    }

    #[test]
    fn single_source_matches_image_oracle() {
        let (pair, green) = standard_pair(24);
        let mut amps = vec![0.0; 24];
        amps[7] = 1.0;
        let y = pair.sources[7];
        let field = green_superposition(&pair, &green, &amps).unwrap();
        // method of images on the outer disc of radius r2
        let r2 = 1.5;
        let image = y * (r2 * r2 / y.norm_squared());
        for p in [Pt2::new(0.1, 0.2), Pt2::new(-0.5, 0.1), Pt2::new(0.3, -0.6)] {
            let oracle = -1.0 / (2.0 * std::f64::consts::PI)
                * ((p - y).norm().ln() - ((p - image).norm() * y.norm() / r2).ln());
            assert_relative_eq!(field.evaluate(p).re, oracle, epsilon = 1e-9);
        }
        // vanishing on the shared arc
        let defect = pair
            .shared_node_indices()
            .into_iter()
            .map(|j| field.trace()[j].norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-8, "shared-arc defect {defect:.3e}");
        // harmonic on the inner domain: finite-difference Laplacian probe
        let fd = 1e-3;
        let p = Pt2::new(0.2, 0.1);
        let lap = (field.evaluate(Pt2::new(p.x + fd, p.y)).re
            + field.evaluate(Pt2::new(p.x - fd, p.y)).re
            + field.evaluate(Pt2::new(p.x, p.y + fd)).re
            + field.evaluate(Pt2::new(p.x, p.y - fd)).re
            - 4.0 * field.evaluate(p).re)
            / (fd * fd);
        assert!(lap.abs() < 1e-6);
    }

    #[test]
    fn target_in_span_is_recovered() {
        // well-separated sources keep the design spectrum away from the
        // sqrt(lambda) band where Tikhonov bias would dominate
        let (mut pair, green) = standard_pair(120);
        let mut selected: Vec<Pt2> = Vec::new();
        for &y in &pair.sources {
            if selected.iter().all(|s| (s - y).norm() > 0.12) {
                selected.push(y);
            }
            if selected.len() == 12 {
                break;
            }
        }
        assert!(selected.len() == 12, "only {} separated sources", selected.len());
        pair.sources = selected;
        let mut amps = vec![0.0; 12];
        amps[3] = 0.8;
        amps[9] = -1.2;
        let target = green_superposition(&pair, &green, &amps).unwrap();
        let quad_rule = pair.omega1.interior_quadrature(40, 80);
        let approx = runge_approximate(&pair, &green, &target, &quad_rule, 1e-12, 12).unwrap();
        assert!(
            approx.relative_l2_error < 1e-8,
            "relative error {:.3e}",
            approx.relative_l2_error
        );
    }

    #[test]
    fn zero_target_gives_zero_amplitudes() {
        let (pair, green) = standard_pair(16);
        let zero = HarmonicField::analytic(
            pair.omega1.clone(),
            Arc::new(crate::laplace::HarmonicPoly {
                coeffs: vec![C64::new(0.0, 0.0)],
            }),
        );
        let quad_rule = pair.omega1.interior_quadrature(30, 60);
        let approx = runge_approximate(&pair, &green, &zero, &quad_rule, 1e-8, 16).unwrap();
        assert!(approx.amplitudes.iter().all(|a| a.abs() < 1e-10));
        assert!(approx.l2_error < 1e-12);
    }

    #[test]
    fn non_vanishing_target_rejected() {
        let (pair, green) = standard_pair(16);
        let bad = HarmonicField::analytic(
            pair.omega1.clone(),
            Arc::new(crate::laplace::HarmonicPoly {
                coeffs: vec![C64::new(1.0, 0.0)],
            }),
        );
        let quad_rule = pair.omega1.interior_quadrature(20, 40);
        assert!(runge_approximate(&pair, &green, &bad, &quad_rule, 1e-8, 16).is_err());
    }

    #[test]
    fn windowed_target_vanishes_on_shared_arc() {
        let (pair, green) = standard_pair(16);
        let target = windowed_polynomial_target(
            &pair,
            &green,
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.5),
            ],
        )
        .unwrap();
        let defect = pair
            .shared_node_indices()
            .into_iter()
            .map(|j| target.trace()[j].norm())
            .fold(0.0, f64::max);
        let scale = target
            .trace()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-7 * scale.max(1.0), "defect {defect:.3e}");
    }

    #[test]
    fn orthogonality_identity_for_green_identity_case() {
        // u = 1 with an empty shared arc reduces to Green's second identity:
        // integral of v = - integral over the whole boundary of dw/dnu
        let (pair, green) = standard_pair(8);
        let v_quad = Arc::new(pair.omega1.interior_quadrature(60, 120));
        let v = crate::pairing::PotentialGrid::bump(
            pair.omega1.clone(),
            v_quad,
            Pt2::new(0.2, 0.0),
            0.4,
            1.0,
        );
        // full-boundary variant computed directly
        let newton = PointSources {
            points: v.quad.nodes.clone(),
            strengths: v
                .values
                .iter()
                .zip(&v.quad.weights)
                .map(|(&val, &w)| C64::new(val * w, 0.0))
                .collect(),
        };
        let m2 = pair.omega2.node_count();
        let data: Vec<C64> = (0..m2)
            .map(|j| -newton.eval(pair.omega2.boundary_nodes()[j]))
            .collect();
        let solver = green.corrector(pair.sources[0]).unwrap().solver.clone();
        let density = solver.solve(&data).unwrap();
        let correction = LayerField::new(solver, density, data);
        let mut boundary = Vec::new();
        let curve = &pair.omega1.curve;
        for j in 0..curve.m {
            let p = curve.pos[j];
            let nu = curve.normal[j];
            let gw_n = newton.grad(p);
            let gw_c = correction.gradient(p);
            let dw = (gw_n[0] + gw_c[0]).re * nu.x + (gw_n[1] + gw_c[1]).re * nu.y;
            boundary.push(curve.ds_weight(j) * dw);
        }
        let flux = quad::pairwise_sum(&boundary);
        let mass: f64 = v
            .values
            .iter()
            .zip(&v.quad.weights)
            .map(|(a, b)| a * b)
            .sum();
        // -Delta w = v: the outward flux of grad w equals -mass
        assert_relative_eq!(flux, -mass, max_relative = 1e-8);
    }

    #[test]
    fn orthogonality_identity_for_windowed_target() {
        let (pair, green) = standard_pair(8);
        let v_quad = Arc::new(pair.omega1.interior_quadrature(60, 120));
        let v = crate::pairing::PotentialGrid::bump(
            pair.omega1.clone(),
            v_quad,
            Pt2::new(0.3, -0.1),
            0.35,
            1.0,
        );
        let u = windowed_polynomial_target(
            &pair,
            &green,
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.3, 0.0)],
        )
        .unwrap();
        let check = verify_orthogonality_identity(&pair, &green, &v, &u).unwrap();
        assert!(
            check.residual <= 1e-6 * check.volume_side.abs().max(1e-12),
            "identity residual {:.3e} vs volume side {:.3e}",
            check.residual,
            check.volume_side
        );
    }

    #[test]
    fn zero_test_function_zeroes_both_sides() {
        let (pair, green) = standard_pair(8);
        let v_quad = Arc::new(pair.omega1.interior_quadrature(20, 40));
        let v = crate::pairing::PotentialGrid::zero(pair.omega1.clone(), v_quad);
        let u = windowed_polynomial_target(&pair, &green, vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
            .unwrap();
        let check = verify_orthogonality_identity(&pair, &green, &v, &u).unwrap();
        assert_eq!(check.volume_side, 0.0);
        assert!(check.boundary_side.abs() < 1e-12);
    }
}
