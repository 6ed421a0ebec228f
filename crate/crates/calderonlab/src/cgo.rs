//! Harmonic exponentials exp(-i x . zeta / h) with null complex frequency,
//! corrected by a Dirichlet term so they vanish on the inaccessible boundary
//! portion, and the quantitative decay of the correction.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPartition, Domain2D, InteriorQuadrature};
use crate::laplace::{ComplexExponential, DomainSolver, HarmonicField};
use crate::num::{fit, special};
use crate::report::{DecayReport, SCHEMA_VERSION};
use crate::{C64, CVec2, CVec3, Pt2};
use std::sync::Arc;

/// gamma = i e1 + e2, spanning one of the two null lines of the symbol.
pub const GAMMA: CVec2 = [C64::new(0.0, 1.0), C64::new(1.0, 0.0)];

/// conj(gamma) = -i e1 + e2, spanning the other null line.
pub const GAMMA_BAR: CVec2 = [C64::new(0.0, -1.0), C64::new(1.0, 0.0)];

/// Seed direction for the three-dimensional decomposition.
pub const GAMMA_3: CVec3 = [C64::new(0.0, 1.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];

pub fn bilinear2(a: CVec2, b: CVec2) -> C64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn bilinear3(a: CVec3, b: CVec3) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm2(a: CVec2) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

fn norm3(a: CVec3) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

/// A complex frequency on the characteristic variety: zeta . zeta = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullVector {
    pub zeta: CVec2,
}

impl NullVector {
    pub fn new(zeta: CVec2) -> Result<Self> {
        let res = bilinear2(zeta, zeta).norm();
        let scale = norm2(zeta).powi(2);
        if res > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Inconsistent(format!(
                "zeta is not a null vector: |zeta.zeta| = {res:.3e} vs |zeta|^2 = {scale:.3e}"
            )));
        }
        Ok(Self { zeta })
    }

    pub fn scaled(factor: C64, of: CVec2) -> Self {
        Self {
            zeta: [of[0] * factor, of[1] * factor],
        }
    }

    pub fn norm(&self) -> f64 {
        norm2(self.zeta)
    }

    pub fn im(&self) -> Pt2 {
        Pt2::new(self.zeta[0].im, self.zeta[1].im)
    }

    pub fn re(&self) -> Pt2 {
        Pt2::new(self.zeta[0].re, self.zeta[1].re)
    }
}

/// Null vector in dimension three (produced by the Newton decomposition).
#[derive(Clone, Copy, Debug)]
pub struct NullVector3 {
    pub zeta: CVec3,
}

/// Exact decomposition of a planar complex vector along the two null lines:
/// z = zeta + eta with zeta on the gamma line and eta on the conjugate line.
pub fn null_decompose_2d(z: CVec2) -> (NullVector, NullVector) {
    let i = C64::new(0.0, 1.0);
    let lambda = (z[1] - i * z[0]) * 0.5;
    let mu = (z[1] + i * z[0]) * 0.5;
    (
        NullVector::scaled(lambda, GAMMA),
        NullVector::scaled(mu, GAMMA_BAR),
    )
}

/// Decomposition of z near 2 i a e1 in the plane, with the measured distance
/// constant of the near-axis bounds.
pub struct NearDecomposition2 {
    pub zeta: NullVector,
    pub eta: NullVector,
    /// max(|zeta - a gamma|, |eta + a gamma_bar|) / (eps a).
    pub c_measured: f64,
}

pub fn null_decompose_near_2d(z: CVec2, a: f64, eps: f64) -> Result<NearDecomposition2> {
    let anchor = [C64::new(0.0, 2.0 * a), C64::new(0.0, 0.0)];
    let dist = norm2([z[0] - anchor[0], z[1] - anchor[1]]);
    if dist >= 2.0 * eps * a {
        return Err(Error::ParameterRule(format!(
            "|z - 2 i a e1| = {dist:.3e} must be below 2 eps a = {:.3e}",
            2.0 * eps * a
        )));
    }
    let (zeta, eta) = null_decompose_2d(z);
    let d_zeta = norm2([zeta.zeta[0] - a * GAMMA[0], zeta.zeta[1] - a * GAMMA[1]]);
    let d_eta = norm2([eta.zeta[0] + a * GAMMA_BAR[0], eta.zeta[1] + a * GAMMA_BAR[1]]);
    Ok(NearDecomposition2 {
        zeta,
        eta,
        c_measured: d_zeta.max(d_eta) / (eps * a),
    })
}

/// Decomposition of z near 2 i a e1 in dimension three by Gauss-Newton on the
/// two null constraints, seeded on the axis pair (a gamma3, -a conj(gamma3)).
pub struct NearDecomposition3 {
    pub zeta: NullVector3,
    pub eta: NullVector3,
    pub c_measured: f64,
    pub iterations: usize,
}

pub fn null_decompose_near_3d(z: CVec3, a: f64, eps: f64) -> Result<NearDecomposition3> {
    let anchor = [C64::new(0.0, 2.0 * a), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let dist = norm3([z[0] - anchor[0], z[1] - anchor[1], z[2] - anchor[2]]);
    if dist >= 2.0 * eps * a {
        return Err(Error::ParameterRule(format!(
            "|z - 2 i a e1| = {dist:.3e} must be below 2 eps a = {:.3e}",
            2.0 * eps * a
        )));
    }
    let mut zeta = [a * GAMMA_3[0], a * GAMMA_3[1], a * GAMMA_3[2]];
    let tol = 1e-13 * (a * a).max(1.0);
    for iter in 0..50 {
        let eta = [z[0] - zeta[0], z[1] - zeta[1], z[2] - zeta[2]];
        let f = [bilinear3(zeta, zeta), bilinear3(eta, eta)];
        let res = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
        if res < tol {
            let d_zeta = norm3([
                zeta[0] - a * GAMMA_3[0],
                zeta[1] - a * GAMMA_3[1],
                zeta[2] - a * GAMMA_3[2],
            ]);
            let d_eta = norm3([
                eta[0] + a * GAMMA_3[0].conj(),
                eta[1] + a * GAMMA_3[1].conj(),
                eta[2] + a * GAMMA_3[2].conj(),
            ]);
            return Ok(NearDecomposition3 {
                zeta: NullVector3 { zeta },
                eta: NullVector3 { zeta: eta },
                c_measured: d_zeta.max(d_eta) / (eps * a),
                iterations: iter,
            });
        }
        // minimum-norm Newton step: J = [2 zeta; -2 eta], dzeta = -J^H (J J^H)^{-1} f
        let j = [
            [2.0 * zeta[0], 2.0 * zeta[1], 2.0 * zeta[2]],
            [-2.0 * eta[0], -2.0 * eta[1], -2.0 * eta[2]],
        ];
        let mut g = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                g[r][c] = (0..3).map(|k| j[r][k] * j[c][k].conj()).sum();
            }
        }
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.norm() < 1e-300 {
            break;
        }
        let y = [
            (g[1][1] * f[0] - g[0][1] * f[1]) / det,
            (g[0][0] * f[1] - g[1][0] * f[0]) / det,
        ];
        for k in 0..3 {
            zeta[k] -= j[0][k].conj() * y[0] + j[1][k].conj() * y[1];
        }
    }
    let eta = [z[0] - zeta[0], z[1] - zeta[1], z[2] - zeta[2]];
    let res = (bilinear3(zeta, zeta).norm_sqr() + bilinear3(eta, eta).norm_sqr()).sqrt();
    Err(Error::NewtonDiverged {
        iters: 50,
        residual: res,
    })
}

/// Cutoff profile: a quintic smoothstep of x1 equal to 1 for x1 <= -2c and 0
/// for x1 >= -c.
#[derive(Clone, Copy, Debug)]
pub struct CutoffSpec {
    pub c: f64,
}

impl CutoffSpec {
    pub fn new(c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::Inconsistent("clearance must be positive".into()));
        }
        Ok(Self { c })
    }

    pub fn profile(&self, x1: f64) -> f64 {
        special::smoothstep_c2((-self.c - x1) / self.c)
    }

    pub fn value(&self, x: Pt2) -> f64 {
        self.profile(x.x)
    }

    /// Inaccessible boundary portion matching this cutoff: {x1 <= -2c}.
    pub fn partition(&self, domain: &Domain2D) -> Result<BoundaryPartition> {
        BoundaryPartition::from_halfplane_x1(domain, -2.0 * self.c)
    }
}

/// exp(-i x . zeta / h) + w with w the Dirichlet correction killing the trace
/// on the cutoff region.
pub struct CorrectedExponential {
    pub domain: Arc<Domain2D>,
    pub zeta: NullVector,
    pub h: f64,
    pub chi: CutoffSpec,
    pub exponential: HarmonicField,
    pub w: HarmonicField,
    pub u: HarmonicField,
}

/// Minimum resolution: nodes per oscillation length h/|Re zeta| along the
/// boundary.
pub const NODES_PER_WAVELENGTH: f64 = 10.0;

pub fn build_corrected_exponential(
    solver: &DomainSolver,
    zeta: NullVector,
    h: f64,
    chi: CutoffSpec,
) -> Result<CorrectedExponential> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::Inconsistent(format!(
            "h must lie in (0, 1], got {h}"
        )));
    }
    let domain = &solver.domain;
    let cutoff_active = domain
        .boundary_nodes()
        .iter()
        .any(|&p| chi.value(p) > 0.0);
    // overflow budget on the boundary data exp(-i x.zeta/h) chi(x)
    let im = zeta.im();
    let max_log = domain
        .boundary_nodes()
        .iter()
        .filter(|&&p| chi.value(p) > 0.0)
        .map(|p| p.dot(&im) / h)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_log > 690.0 {
        return Err(Error::DynamicRange {
            range: max_log.exp(),
        });
    }
    // resolution rule: aliased boundary data silently destroys the decay
    // experiments, so refuse under-resolved oscillations
    let re_norm = zeta.re().norm();
    if cutoff_active && re_norm > 0.0 {
        let wavelength = h / re_norm;
        let nodes_per = wavelength / domain.curve.node_spacing();
        if nodes_per < NODES_PER_WAVELENGTH {
            return Err(Error::UnderResolved {
                nodes_per_wavelength: nodes_per,
                required: NODES_PER_WAVELENGTH,
            });
        }
    }
    let exponential = HarmonicField::analytic(
        domain.clone(),
        Arc::new(ComplexExponential {
            zeta: zeta.zeta,
            h,
        }),
    );
    let data: Vec<C64> = domain
        .boundary_nodes()
        .iter()
        .zip(exponential.trace())
        .map(|(&p, &e)| -e * chi.value(p))
        .collect();
    let w = solver.solve(data)?;
    let u = HarmonicField::sum(domain.clone(), vec![exponential.clone(), w.clone()]);
    Ok(CorrectedExponential {
        domain: domain.clone(),
        zeta,
        h,
        chi,
        exponential,
        w,
        u,
    })
}

impl CorrectedExponential {
    /// max |u| over the boundary nodes where the cutoff equals 1.
    pub fn boundary_vanishing_defect(&self) -> f64 {
        self.domain
            .boundary_nodes()
            .iter()
            .zip(self.u.trace())
            .filter(|(p, _)| self.chi.value(**p) >= 1.0)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Measures the decay rate of the correction norm along an h-sweep and tests
/// it against the bound slope -c Im zeta_1 + |Im zeta'|.
pub fn verify_w_bound(
    solver: &DomainSolver,
    quad: &InteriorQuadrature,
    zeta: NullVector,
    chi: CutoffSpec,
    h_list: &[f64],
    slope_tol: f64,
) -> Result<DecayReport> {
    if h_list.len() < 3 || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Inconsistent(
            "h_list must be strictly decreasing with at least 3 values".into(),
        ));
    }
    if zeta.zeta[0].im <= 0.0 {
        return Err(Error::Inconsistent(
            "decay regime requires Im zeta_1 > 0".into(),
        ));
    }
    let bound_slope = -chi.c * zeta.zeta[0].im + zeta.zeta[1].im.abs();
    let mut log_norms = Vec::with_capacity(h_list.len());
    let mut exact_zero = true;
    for &h in h_list {
        let ce = build_corrected_exponential(solver, zeta, h, chi)?;
        let n = ce.w.h1_norm(quad);
        if n > 0.0 {
            exact_zero = false;
        }
        log_norms.push(n.ln());
    }
    if exact_zero {
        return Ok(DecayReport {
            schema_version: SCHEMA_VERSION,
            h_list: h_list.to_vec(),
            log_norms: vec![],
            fitted_slope: None,
            bound_slope,
            slope_tol,
            fit_residual: None,
            inconclusive: false,
            note: Some("exact zero".into()),
            pass: true,
        });
    }
    let inv_h: Vec<f64> = h_list.iter().map(|&h| 1.0 / h).collect();
    let (_, slope, resid) = fit::linear_fit(&inv_h, &log_norms);
    let inconclusive = resid > 0.35;
    Ok(DecayReport {
        schema_version: SCHEMA_VERSION,
        h_list: h_list.to_vec(),
        log_norms,
        fitted_slope: Some(slope),
        bound_slope,
        slope_tol,
        fit_residual: Some(resid),
        inconclusive,
        note: None,
        pass: !inconclusive && slope <= bound_slope + slope_tol,
    })
}
