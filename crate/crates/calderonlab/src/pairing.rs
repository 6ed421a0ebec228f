//! Bilinear moment data of the linearized problem: pairings of a potential
//! against products of corrected harmonic exponentials, the moment identity
//! with its Fourier-decay consequence, and regularized reconstruction of a
//! potential from partial-data moments.

use crate::cgo::{
    build_corrected_exponential, null_decompose_2d, null_decompose_near_2d, CorrectedExponential,
    CutoffSpec, NullVector,
};
use crate::error::{Error, Result};
use crate::geometry::{Domain2D, InteriorQuadrature};
use crate::laplace::{DomainSolver, HarmonicField};
use crate::num::special::mollifier;
use crate::num::{fit, logcomplex, quad};
use crate::report::SCHEMA_VERSION;
use crate::{C64, CVec2, LogComplex, Pt2};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A real bounded potential sampled at interior quadrature nodes.
#[derive(Clone)]
pub struct PotentialGrid {
    pub domain: Arc<Domain2D>,
    pub quad: Arc<InteriorQuadrature>,
    pub values: Vec<f64>,
    sup_norm: f64,
    /// When set, the support is contained in the half-plane {x1 <= s}.
    pub support_x1: Option<f64>,
}

impl PotentialGrid {
    pub fn from_fn<F: Fn(Pt2) -> f64>(
        domain: Arc<Domain2D>,
        quad: Arc<InteriorQuadrature>,
        f: F,
        support_x1: Option<f64>,
    ) -> Result<Self> {
        let values: Vec<f64> = quad.nodes.iter().map(|&x| f(x)).collect();
        Self::from_values(domain, quad, values, support_x1)
    }

    pub fn from_values(
        domain: Arc<Domain2D>,
        quad: Arc<InteriorQuadrature>,
        values: Vec<f64>,
        support_x1: Option<f64>,
    ) -> Result<Self> {
        if values.len() != quad.len() {
            return Err(Error::Inconsistent(
                "potential values must match the quadrature node count".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inconsistent("potential values must be finite".into()));
        }
        if let Some(s) = support_x1 {
            for (x, v) in quad.nodes.iter().zip(&values) {
                if *v != 0.0 && x.x > s + 1e-12 {
                    return Err(Error::Inconsistent(format!(
                        "support flag x1 <= {s} inconsistent with nonzero value at x1 = {}",
                        x.x
                    )));
                }
            }
        }
        let sup_norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Ok(Self {
            domain,
            quad,
            values,
            sup_norm,
            support_x1,
        })
    }

    pub fn zero(domain: Arc<Domain2D>, quad: Arc<InteriorQuadrature>) -> Self {
        let n = quad.len();
        Self {
            domain,
            quad,
            values: vec![0.0; n],
            sup_norm: 0.0,
            support_x1: Some(f64::NEG_INFINITY),
        }
    }

    /// Smooth compactly supported bump `amplitude * m(|x - center| / radius)`.
    pub fn bump(
        domain: Arc<Domain2D>,
        quad: Arc<InteriorQuadrature>,
        center: Pt2,
        radius: f64,
        amplitude: f64,
    ) -> Self {
        let values: Vec<f64> = quad
            .nodes
            .iter()
            .map(|&x| amplitude * mollifier((x - center).norm() / radius))
            .collect();
        let sup_norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Self {
            domain,
            quad,
            values,
            sup_norm,
            support_x1: Some(center.x + radius),
        }
    }

    /// Random low-order trigonometric polynomial windowed to a compactly
    /// supported smooth potential.
    pub fn random_smooth<R: Rng>(
        domain: Arc<Domain2D>,
        quad: Arc<InteriorQuadrature>,
        rng: &mut R,
    ) -> Self {
        let center = domain.center;
        let r0 = domain
            .boundary_nodes()
            .iter()
            .map(|p| (p - center).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = 0.8 * r0;
        let mut coeffs = [[0.0f64; 3]; 3];
        let mut phases = [[0.0f64; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                coeffs[k][l] = rng.gen_range(-1.0..1.0);
                phases[k][l] = rng.gen_range(0.0..std::f64::consts::TAU);
            }
        }
        let values: Vec<f64> = quad
            .nodes
            .iter()
            .map(|&x| {
                let q = (x - center) / radius;
                let mut acc = 0.0;
                for (k, row) in coeffs.iter().enumerate() {
                    for (l, &c) in row.iter().enumerate() {
                        acc += c
                            * (std::f64::consts::PI * (k as f64 * q.x + l as f64 * q.y)
                                + phases[k][l])
                                .cos();
                    }
                }
                acc * mollifier(q.norm())
            })
            .collect();
        let sup_norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Self {
            domain,
            quad,
            values,
            sup_norm,
            support_x1: Some(center.x + radius),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn l1_norm(&self) -> f64 {
        let vals: Vec<f64> = self
            .values
            .iter()
            .zip(&self.quad.weights)
            .map(|(v, w)| v.abs() * w)
            .collect();
        quad::pairwise_sum(&vals)
    }

    /// Relative L^2 distance to a reference sampled on the same quadrature.
    pub fn relative_l2_error(&self, reference: &PotentialGrid) -> f64 {
        assert_eq!(self.values.len(), reference.values.len());
        let mut num = Vec::with_capacity(self.values.len());
        let mut den = Vec::with_capacity(self.values.len());
        for ((a, b), w) in self
            .values
            .iter()
            .zip(&reference.values)
            .zip(&self.quad.weights)
        {
            num.push(w * (a - b) * (a - b));
            den.push(w * b * b);
        }
        (quad::pairwise_sum(&num) / quad::pairwise_sum(&den)).sqrt()
    }
}

/// Log-scale pairing of a potential with sampled complex factors.
fn weighted_product_log(f: &PotentialGrid, a: &[C64], b: &[C64]) -> LogComplex {
    let terms: Vec<LogComplex> = f
        .values
        .iter()
        .zip(&f.quad.weights)
        .zip(a.iter().zip(b))
        .map(|((&fv, &w), (&av, &bv))| {
            if fv == 0.0 {
                return LogComplex::ZERO;
            }
            let prod = av * bv;
            if prod.re == 0.0 && prod.im == 0.0 {
                return LogComplex::ZERO;
            }
            LogComplex::new(
                (w * fv.abs()).ln() + prod.norm().ln(),
                prod.arg() + if fv < 0.0 { std::f64::consts::PI } else { 0.0 },
            )
        })
        .collect();
    logcomplex::sum(&terms)
}

/// Pairing of two harmonic fields against a potential, in log scale.
pub fn pair_fields_log(f: &PotentialGrid, u: &HarmonicField, v: &HarmonicField) -> LogComplex {
    let a = u.evaluate_many(&f.quad.nodes);
    let b = v.evaluate_many(&f.quad.nodes);
    weighted_product_log(f, &a, &b)
}

pub fn pair_fields(f: &PotentialGrid, u: &HarmonicField, v: &HarmonicField) -> C64 {
    pair_fields_log(f, u, v).to_complex()
}

/// The bilinear moment of the linearized problem for a pair of corrected
/// exponentials. Accumulated in log scale with a fixed reduction order, so
/// dynamic-range overflow never silently saturates.
pub fn pair(f: &PotentialGrid, u: &CorrectedExponential, v: &CorrectedExponential) -> C64 {
    pair_fields(f, &u.u, &v.u)
}

pub fn pair_log(
    f: &PotentialGrid,
    u: &CorrectedExponential,
    v: &CorrectedExponential,
) -> LogComplex {
    pair_fields_log(f, &u.u, &v.u)
}

/// Complex-frequency Fourier moment of f at frequency z/h, in log scale.
pub fn fourier_moment_log(f: &PotentialGrid, z: CVec2, h: f64) -> LogComplex {
    let terms: Vec<LogComplex> = f
        .values
        .iter()
        .zip(f.quad.nodes.iter().zip(&f.quad.weights))
        .map(|(&fv, (&x, &w))| {
            if fv == 0.0 {
                return LogComplex::ZERO;
            }
            // -i x.z = x.Im z - i x.Re z
            let log_mod = (x.x * z[0].im + x.y * z[1].im) / h + (w * fv.abs()).ln();
            let phase = -(x.x * z[0].re + x.y * z[1].re) / h
                + if fv < 0.0 { std::f64::consts::PI } else { 0.0 };
            LogComplex::new(log_mod, phase)
        })
        .collect();
    logcomplex::sum(&terms)
}

pub fn fourier_moment(f: &PotentialGrid, z: CVec2, h: f64) -> C64 {
    fourier_moment_log(f, z, h).to_complex()
}

/// One stored moment with its frequency metadata, so experiments replay
/// bit for bit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentEntry {
    pub zeta: CVec2,
    pub eta: CVec2,
    pub h: f64,
    pub moment: C64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentSet {
    pub schema_version: u32,
    /// Clearance of the cutoff the corrected exponentials were built with.
    pub clearance_c: f64,
    pub entries: Vec<MomentEntry>,
}

impl MomentSet {
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.entries.iter().enumerate() {
            for v in [e.zeta, e.eta] {
                let res = (v[0] * v[0] + v[1] * v[1]).norm();
                let scale = v[0].norm_sqr() + v[1].norm_sqr();
                if res > 1e-10 * scale.max(1e-30) {
                    return Err(Error::Inconsistent(format!(
                        "entry {i}: frequency is not a null vector"
                    )));
                }
            }
            if !e.moment.re.is_finite() || !e.moment.im.is_finite() {
                return Err(Error::Inconsistent(format!("entry {i}: moment not finite")));
            }
        }
        Ok(())
    }
}

/// Real frequency rectangle lifted to complex frequencies z = t + 2 i a e1
/// with t on an n1 x n2 grid of [-t_max, t_max] x [0, t_max]; the conjugate
/// half-plane is implied by realness of the potential.
pub fn reconstruction_frequencies(a: f64, t_max: f64, n1: usize, n2: usize) -> Vec<CVec2> {
    let mut freqs = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let t1 = -t_max + 2.0 * t_max * i as f64 / (n1 - 1) as f64;
        for j in 0..n2 {
            let t2 = t_max * j as f64 / (n2 - 1) as f64;
            freqs.push([C64::new(t1, 2.0 * a), C64::new(t2, 0.0)]);
        }
    }
    freqs
}

/// Forward map: moments of f against corrected-exponential pairs for the
/// given complex frequencies.
pub fn forward_moments(
    solver: &DomainSolver,
    chi: CutoffSpec,
    f: &PotentialGrid,
    freqs: &[CVec2],
    h: f64,
) -> Result<MomentSet> {
    let mut entries = Vec::with_capacity(freqs.len());
    for &z in freqs {
        let (zeta, eta) = null_decompose_2d(z);
        let u = build_corrected_exponential(solver, zeta, h, chi)?;
        let v = build_corrected_exponential(solver, eta, h, chi)?;
        let moment = pair(f, &u, &v);
        entries.push(MomentEntry {
            zeta: zeta.zeta,
            eta: eta.zeta,
            h,
            moment,
        });
    }
    Ok(MomentSet {
        schema_version: SCHEMA_VERSION,
        clearance_c: chi.c,
        entries,
    })
}

/// Report of the Fourier-decay estimate experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierEstimateReport {
    pub schema_version: u32,
    pub a: f64,
    pub epsilon: f64,
    pub c_measured: f64,
    pub h_list: Vec<f64>,
    /// |lhs + corrections - total| per h, relative to sup|f|.
    pub identity_residuals: Vec<f64>,
    /// log |sum of the three correction integrals| per h.
    pub correction_log_norms: Vec<f64>,
    pub fitted_slope: Option<f64>,
    /// -c a / 2 + 2 C_meas eps a.
    pub bound_exponent: f64,
    pub slope_tol: f64,
    pub identity_tol: f64,
    pub identity_pass: bool,
    pub decay_pass: bool,
    pub pass: bool,
}

pub struct FourierEstimateConfig {
    pub a: f64,
    pub epsilon: f64,
    pub h_list: Vec<f64>,
    pub slope_tol: f64,
    pub identity_tol: f64,
}

/// Measures the distance constant of the near-axis decomposition on a ring of
/// sample frequencies just inside the admissible ball.
pub fn measure_decomposition_constant(a: f64, eps: f64) -> f64 {
    let mut c_meas: f64 = 0.0;
    let dirs = 16;
    for k in 0..dirs {
        let ang = std::f64::consts::TAU * k as f64 / dirs as f64;
        for &(p, q) in &[(1.0, 0.0), (0.0, 1.0), (0.5, 0.5)] {
            let w = [
                C64::new(ang.cos() * p, ang.sin() * q) * 1.9 * eps * a,
                C64::new(-ang.sin() * p, ang.cos() * q) * 1.9 * eps * a
                    / std::f64::consts::SQRT_2,
            ];
            let z = [C64::new(0.0, 2.0 * a) + w[0], w[1]];
            if let Ok(d) = null_decompose_near_2d(z, a, eps) {
                c_meas = c_meas.max(d.c_measured);
            }
        }
    }
    c_meas
}

/// Verifies the moment identity and the Fourier-decay estimate along an
/// h-sweep at the axis frequency pair (a gamma, -a conj gamma).
pub fn verify_fourier_estimate(
    solver: &DomainSolver,
    chi: CutoffSpec,
    f: &PotentialGrid,
    config: &FourierEstimateConfig,
) -> Result<FourierEstimateReport> {
    let c = chi.c;
    let c_measured = measure_decomposition_constant(config.a, config.epsilon);
    if config.epsilon >= c / (8.0 * c_measured) {
        return Err(Error::ParameterRule(format!(
            "epsilon = {} must be below c / (8 C_meas) = {:.6}",
            config.epsilon,
            c / (8.0 * c_measured)
        )));
    }
    let bound_exponent = -c * config.a / 2.0 + 2.0 * c_measured * config.epsilon * config.a;
    if f.sup_norm() == 0.0 {
        return Ok(FourierEstimateReport {
            schema_version: SCHEMA_VERSION,
            a: config.a,
            epsilon: config.epsilon,
            c_measured,
            h_list: config.h_list.clone(),
            identity_residuals: vec![0.0; config.h_list.len()],
            correction_log_norms: vec![],
            fitted_slope: None,
            bound_exponent,
            slope_tol: config.slope_tol,
            identity_tol: config.identity_tol,
            identity_pass: true,
            decay_pass: true,
            pass: true,
        });
    }
    let axis = [C64::new(0.0, 2.0 * config.a), C64::new(0.0, 0.0)];
    let (zeta, eta) = null_decompose_2d(axis);
    let mut identity_residuals = Vec::new();
    let mut correction_log_norms = Vec::new();
    for &h in &config.h_list {
        let u = build_corrected_exponential(solver, zeta, h, chi)?;
        let v = build_corrected_exponential(solver, eta, h, chi)?;
        let (res, corr) = moment_identity_residual(f, &u, &v);
        identity_residuals.push(res / f.sup_norm());
        correction_log_norms.push(corr.log_mod);
    }
    let inv_h: Vec<f64> = config.h_list.iter().map(|&h| 1.0 / h).collect();
    let (_, slope, _) = fit::linear_fit(&inv_h, &correction_log_norms);
    let identity_pass = identity_residuals.iter().all(|r| *r <= config.identity_tol);
    let decay_pass = slope <= bound_exponent + config.slope_tol;
    Ok(FourierEstimateReport {
        schema_version: SCHEMA_VERSION,
        a: config.a,
        epsilon: config.epsilon,
        c_measured,
        h_list: config.h_list.clone(),
        identity_residuals,
        correction_log_norms,
        fitted_slope: Some(slope),
        bound_exponent,
        slope_tol: config.slope_tol,
        identity_tol: config.identity_tol,
        identity_pass,
        decay_pass,
        pass: identity_pass && decay_pass,
    })
}

/// Residual of the rearranged moment identity: the direct Fourier moment plus
/// the three correction integrals reassembles the full pairing. Returns the
/// absolute residual and the log-scale size of the correction side.
pub fn moment_identity_residual(
    f: &PotentialGrid,
    u: &CorrectedExponential,
    v: &CorrectedExponential,
) -> (f64, LogComplex) {
    let nodes = &f.quad.nodes;
    let e_z = u.exponential.evaluate_many(nodes);
    let e_e = v.exponential.evaluate_many(nodes);
    let w_z = u.w.evaluate_many(nodes);
    let w_e = v.w.evaluate_many(nodes);
    // independent left side: one complex exponential of the summed frequency
    let z_sum = [
        u.zeta.zeta[0] + v.zeta.zeta[0],
        u.zeta.zeta[1] + v.zeta.zeta[1],
    ];
    let lhs = fourier_moment_log(f, z_sum, u.h);
    let m1 = weighted_product_log(f, &e_z, &w_e);
    let m2 = weighted_product_log(f, &e_e, &w_z);
    let m3 = weighted_product_log(f, &w_z, &w_e);
    let total_u: Vec<C64> = e_z.iter().zip(&w_z).map(|(a, b)| a + b).collect();
    let total_v: Vec<C64> = e_e.iter().zip(&w_e).map(|(a, b)| a + b).collect();
    let total = weighted_product_log(f, &total_u, &total_v);
    let corr = logcomplex::sum(&[m1, m2, m3]);
    let residual = (lhs.to_complex() + corr.to_complex() - total.to_complex()).norm();
    (residual, corr)
}

/// Result of a regularized reconstruction.
pub struct ReconstructionResult {
    pub potential: PotentialGrid,
    pub lambda: f64,
    pub residual: f64,
    pub normal_condition: f64,
}

/// Tikhonov-regularized least squares: pixel values on a coarse interior
/// quadrature against the stored moments. When no regularization weight is
/// given, the discrepancy principle against the quadrature tolerance picks
/// one.
pub fn reconstruct(
    solver: &DomainSolver,
    moments: &MomentSet,
    grid_spec: (usize, usize),
    lambda: Option<f64>,
) -> Result<ReconstructionResult> {
    moments.validate()?;
    if let Some(lam) = lambda {
        if lam <= 0.0 {
            return Err(Error::Inconsistent("lambda must be positive".into()));
        }
    }
    let n_unknown = grid_spec.0 * grid_spec.1;
    if moments.entries.len() < n_unknown / 4 {
        return Err(Error::Inconsistent(format!(
            "{} moments cannot determine {} unknowns (need at least a quarter)",
            moments.entries.len(),
            n_unknown
        )));
    }
    let chi = CutoffSpec::new(moments.clearance_c)?;
    let coarse = Arc::new(solver.domain.interior_quadrature(grid_spec.0, grid_spec.1));
    let n = coarse.len();
    let m_rows = 2 * moments.entries.len();
    let mut a = nalgebra::DMatrix::<f64>::zeros(m_rows, n);
    let mut b = nalgebra::DVector::<f64>::zeros(m_rows);
    for (row2, entry) in moments.entries.iter().enumerate() {
        let u = build_corrected_exponential(solver, NullVector::new(entry.zeta)?, entry.h, chi)?;
        let v = build_corrected_exponential(solver, NullVector::new(entry.eta)?, entry.h, chi)?;
        let uv: Vec<C64> = u
            .u
            .evaluate_many(&coarse.nodes)
            .into_iter()
            .zip(v.u.evaluate_many(&coarse.nodes))
            .map(|(x, y)| x * y)
            .collect();
        // row scaling keeps the widely different moment magnitudes from
        // swamping the least-squares functional
        let scale = uv
            .iter()
            .zip(&coarse.weights)
            .map(|(c, w)| c.norm() * w)
            .fold(0.0, f64::max)
            .max(1e-300);
        for (i, (c, w)) in uv.iter().zip(&coarse.weights).enumerate() {
            a[(2 * row2, i)] = w * c.re / scale;
            a[(2 * row2 + 1, i)] = w * c.im / scale;
        }
        b[2 * row2] = entry.moment.re / scale;
        b[2 * row2 + 1] = entry.moment.im / scale;
    }
    let ata = a.transpose() * &a;
    let atb = a.transpose() * &b;
    let trace_scale = ata.trace() / n as f64;
    let solve_for = |lam: f64| -> Option<(nalgebra::DVector<f64>, f64, f64)> {
        let reg = &ata + nalgebra::DMatrix::identity(n, n) * (lam * trace_scale);
        let eig = reg.clone().symmetric_eigen();
        let max_e = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let min_e = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
        let cond = max_e / min_e.max(1e-300);
        let chol = reg.cholesky()?;
        let c = chol.solve(&atb);
        let resid = (&a * &c - &b).norm();
        Some((c, resid, cond))
    };
    let (coeffs, residual, cond, lam_used) = match lambda {
        Some(lam) => {
            let (c, r, k) = solve_for(lam).ok_or(Error::NormalEquation {
                cond: f64::INFINITY,
            })?;
            (c, r, k, lam)
        }
        None => {
            // discrepancy principle: largest lambda whose residual reaches the
            // noiseless quadrature floor
            let floor = 1e-8 * b.norm();
            let mut chosen = None;
            for k in 0..10 {
                let lam = 10f64.powi(-(k as i32) - 3);
                if let Some((c, r, cnd)) = solve_for(lam) {
                    let done = r <= floor.max(1e-12);
                    chosen = Some((c, r, cnd, lam));
                    if done {
                        break;
                    }
                }
            }
            chosen.ok_or(Error::NormalEquation {
                cond: f64::INFINITY,
            })?
        }
    };
    if cond > 1e14 {
        return Err(Error::NormalEquation { cond });
    }
    let potential = PotentialGrid::from_values(
        solver.domain.clone(),
        coarse,
        coeffs.as_slice().to_vec(),
        None,
    )?;
    Ok(ReconstructionResult {
        potential,
        lambda: lam_used,
        residual,
        normal_condition: cond,
    })
}
