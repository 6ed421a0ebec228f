//! Gaussian-kernel transform of bounded potentials in overflow-safe log
//! scale, with its exponential bound chain: the a-priori bound, the
//! half-space improvement, the superposition split, and the improved bound on
//! a ball of complex frequencies.

use crate::error::{Error, Result};
use crate::num::special::erfc;
use crate::num::{fit, logcomplex, quad};
use crate::pairing::{fourier_moment_log, PotentialGrid};
use crate::report::{BoundReport, BoundSample, DecayReport, SCHEMA_VERSION};
use crate::{C64, CVec2, LogComplex};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Piecewise weight: |Im z1|^2 on the left half plane, |Im z1|^2 - |Re z1|^2
/// on the right; continuous across the seam.
pub fn weight_phi(z1: C64) -> f64 {
    if z1.re <= 0.0 {
        z1.im * z1.im
    } else {
        z1.im * z1.im - z1.re * z1.re
    }
}

/// Gaussian transform of a planar potential at z in C^2, log scale.
///
/// Quadrature over the support of f; relative accuracy follows the interior
/// rule driving the potential grid.
pub fn transform(f: &PotentialGrid, z: CVec2, h: f64) -> LogComplex {
    let terms: Vec<LogComplex> = f
        .values
        .iter()
        .zip(f.quad.nodes.iter().zip(&f.quad.weights))
        .map(|(&fv, (&y, &w))| {
            if fv == 0.0 {
                return LogComplex::ZERO;
            }
            let d0 = z[0] - y.x;
            let d1 = z[1] - y.y;
            let sq = d0 * d0 + d1 * d1;
            let log_mod = -sq.re / (2.0 * h) + (w * fv.abs()).ln();
            let phase = -sq.im / (2.0 * h) + if fv < 0.0 { PI } else { 0.0 };
            LogComplex::new(log_mod, phase)
        })
        .collect();
    logcomplex::sum(&terms)
}

/// One-dimensional reference potentials for line transforms.
#[derive(Clone, Copy, Debug)]
pub enum LinePotential {
    /// f = 1 on the whole line (unbounded support).
    ConstOne,
    /// Indicator of the half line (-inf, 0].
    HalfLineIndicator,
}

/// One-dimensional Gaussian transform. The constant potential integrates in
/// closed form; the half-line indicator is quadrature over a truncated
/// interval covering the Gaussian mass.
pub fn transform_1d(kind: LinePotential, z: C64, h: f64) -> LogComplex {
    match kind {
        LinePotential::ConstOne => LogComplex::from_real((2.0 * PI * h).sqrt()),
        LinePotential::HalfLineIndicator => {
            let reach = 9.0 * (2.0 * h).sqrt();
            let lo = z.re.min(0.0) - reach;
            let n = 600;
            let (xs, ws) = quad::gauss_legendre_01(n);
            let terms: Vec<LogComplex> = xs
                .iter()
                .zip(&ws)
                .map(|(&x, &w)| {
                    let y = lo + (0.0 - lo) * x;
                    let d = z - y;
                    let sq = d * d;
                    LogComplex::new(
                        -sq.re / (2.0 * h) + (w * (0.0 - lo)).ln(),
                        -sq.im / (2.0 * h),
                    )
                })
                .collect();
            logcomplex::sum(&terms)
        }
    }
}

/// Closed form for the half-line indicator: sqrt(2 pi h)/2 erfc(z / sqrt(2h)).
pub fn halfline_oracle(z: C64, h: f64) -> C64 {
    0.5 * (2.0 * PI * h).sqrt() * erfc(z / (2.0 * h).sqrt())
}

/// Complex-frequency grid of transform samples at a fixed real second
/// coordinate.
pub struct BargmannGrid {
    pub h: f64,
    /// Real second coordinate of the two-dimensional frequency (slice).
    pub x2: f64,
    pub z1_nodes: Vec<C64>,
    pub values: Vec<LogComplex>,
    pub potential_sup: f64,
    /// Support half-plane flag {x1 <= s} carried over from the potential.
    pub support_x1: Option<f64>,
    pub dimension: u32,
}

impl BargmannGrid {
    /// Populates the grid from a planar potential.
    pub fn compute(f: &PotentialGrid, h: f64, x2: f64, z1_nodes: Vec<C64>) -> Result<Self> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::Inconsistent("h must lie in (0, 1]".into()));
        }
        for (i, a) in z1_nodes.iter().enumerate() {
            for b in z1_nodes.iter().skip(i + 1) {
                if (a - b).norm() == 0.0 {
                    return Err(Error::Inconsistent("grid nodes must be distinct".into()));
                }
            }
        }
        let values: Vec<LogComplex> = z1_nodes
            .par_iter()
            .map(|&z1| transform(f, [z1, C64::new(x2, 0.0)], h))
            .collect();
        Ok(Self {
            h,
            x2,
            z1_nodes,
            values,
            potential_sup: f.sup_norm(),
            support_x1: f.support_x1,
            dimension: 2,
        })
    }

    /// Rectangular node set re1 x im1.
    pub fn rectangle(re: (f64, f64, usize), im: (f64, f64, usize)) -> Vec<C64> {
        let mut nodes = Vec::with_capacity(re.2 * im.2);
        for i in 0..re.2 {
            let x = re.0 + (re.1 - re.0) * i as f64 / (re.2 - 1).max(1) as f64;
            for j in 0..im.2 {
                let y = im.0 + (im.1 - im.0) * j as f64 / (im.2 - 1).max(1) as f64;
                nodes.push(C64::new(x, y));
            }
        }
        nodes
    }

    /// CSV rows (Re z, Im z, log_mod, phase).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "re_z,im_z,log_mod,phase")?;
        for (z, v) in self.z1_nodes.iter().zip(&self.values) {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e}",
                z.re, z.im, v.log_mod, v.phase
            )?;
        }
        Ok(())
    }
}

fn check_bound<F: Fn(C64) -> f64>(
    grid: &BargmannGrid,
    description: &str,
    tol: f64,
    applies: impl Fn(C64) -> bool,
    log_bound: F,
) -> BoundReport {
    let mut worst: Option<BoundSample> = None;
    let mut checked = 0;
    for (&z, v) in grid.z1_nodes.iter().zip(&grid.values) {
        if !applies(z) {
            continue;
        }
        checked += 1;
        if v.is_zero() {
            continue;
        }
        let rhs = log_bound(z);
        let slack = rhs - v.log_mod;
        if worst.as_ref().map_or(true, |w| slack < w.slack) {
            worst = Some(BoundSample {
                node: [z.re, z.im, grid.x2, 0.0],
                lhs: v.log_mod,
                rhs,
                slack,
            });
        }
    }
    let pass = worst.as_ref().map_or(true, |w| w.slack >= -tol);
    BoundReport {
        schema_version: SCHEMA_VERSION,
        description: description.to_string(),
        checked_nodes: checked,
        worst,
        tol,
        pass,
    }
}

/// A-priori bound: |Tf(z)| <= (2 pi h)^{n/2} exp(|Im z|^2 / 2h) sup|f|.
pub fn check_apriori_bound(grid: &BargmannGrid, tol: f64) -> BoundReport {
    if grid.potential_sup == 0.0 {
        return BoundReport::empty("a-priori exponential bound (zero potential)", tol);
    }
    let n = grid.dimension as f64;
    let h = grid.h;
    let log_sup = grid.potential_sup.ln();
    check_bound(
        grid,
        "a-priori exponential bound",
        tol,
        |_| true,
        |z| (n / 2.0) * (2.0 * PI * h).ln() + z.im * z.im / (2.0 * h) + log_sup,
    )
}

/// Half-space improvement for potentials supported in {x1 <= 0}: the exponent
/// gains -(Re z1)^2 on Re z1 >= 0.
pub fn check_halfspace_bound(grid: &BargmannGrid, tol: f64) -> Result<BoundReport> {
    match grid.support_x1 {
        Some(s) if s <= 1e-12 => {}
        _ => {
            return Err(Error::Inconsistent(
                "half-space bound requires a potential flagged with support in x1 <= 0".into(),
            ))
        }
    }
    if grid.potential_sup == 0.0 {
        return Ok(BoundReport::empty(
            "half-space exponential bound (zero potential)",
            tol,
        ));
    }
    let n = grid.dimension as f64;
    let h = grid.h;
    let log_sup = grid.potential_sup.ln();
    Ok(check_bound(
        grid,
        "half-space exponential bound",
        tol,
        |z| z.re >= 0.0,
        |z| (n / 2.0) * (2.0 * PI * h).ln() + (z.im * z.im - z.re * z.re) / (2.0 * h) + log_sup,
    ))
}

/// Measured decay slope of log|Tf| against Re z1 along the real axis of the
/// grid (at least two real nodes required).
pub fn halfspace_decay_slope(grid: &BargmannGrid) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&z, v) in grid.z1_nodes.iter().zip(&grid.values) {
        if z.im.abs() < 1e-14 && z.re >= 0.0 && !v.is_zero() {
            xs.push(z.re);
            ys.push(v.log_mod);
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let (_, slope, _) = fit::linear_fit(&xs, &ys);
    Some(slope)
}

/// The split of the superposed representation: the |t| <= t_split part
/// evaluated through Fourier moments, and the log-scale bound on the tail,
/// sqrt(2) exp(|Re z'|/h) exp(-t_split^2/4h) |f|_L1.
pub struct SuperposedTransform {
    pub inner: LogComplex,
    pub tail_bound: LogComplex,
}

fn t_disc_quadrature(r_lo: f64, r_hi: f64, n_r: usize, n_t: usize) -> Vec<(f64, f64, f64)> {
    let (xs, ws) = quad::gauss_legendre_01(n_r);
    let mut out = Vec::with_capacity(n_r * n_t);
    for jt in 0..n_t {
        let ang = std::f64::consts::TAU * jt as f64 / n_t as f64;
        for ir in 0..n_r {
            let r = r_lo + (r_hi - r_lo) * xs[ir];
            let w = ws[ir] * (r_hi - r_lo) * r * std::f64::consts::TAU / n_t as f64;
            out.push((r * ang.cos(), r * ang.sin(), w));
        }
    }
    out
}

fn superposed_part(f: &PotentialGrid, z: CVec2, h: f64, r_lo: f64, r_hi: f64) -> LogComplex {
    let n = 2.0;
    let grid = t_disc_quadrature(r_lo, r_hi, 32, 64);
    let z_sq = z[0] * z[0] + z[1] * z[1];
    let terms: Vec<LogComplex> = grid
        .par_iter()
        .map(|&(t1, t2, w)| {
            let freq = [
                C64::new(t1, 0.0) + C64::new(0.0, 1.0) * z[0],
                C64::new(t2, 0.0) + C64::new(0.0, 1.0) * z[1],
            ];
            let moment = fourier_moment_log(f, freq, h);
            if moment.is_zero() {
                return LogComplex::ZERO;
            }
            let t_sq = t1 * t1 + t2 * t2;
            let pref = -(z_sq + C64::new(t_sq, 0.0)) / (2.0 * h);
            moment.mul(&LogComplex::new(pref.re + w.ln(), pref.im))
        })
        .collect();
    logcomplex::sum(&terms).scale_log(-(n / 2.0) * (2.0 * PI * h).ln())
}

/// Superposition split of the transform for a potential supported in the
/// half-plane {x1 <= 0}.
pub fn superposed_transform(
    f: &PotentialGrid,
    z: CVec2,
    h: f64,
    t_split: f64,
) -> Result<SuperposedTransform> {
    match f.support_x1 {
        Some(s) if s <= 1e-12 => {}
        _ => {
            return Err(Error::Inconsistent(
                "superposition split requires support in x1 <= 0".into(),
            ))
        }
    }
    let inner = superposed_part(f, z, h, 0.0, t_split);
    let l1 = f.l1_norm();
    let tail_bound = if l1 == 0.0 {
        LogComplex::ZERO
    } else {
        LogComplex::new(
            0.5 * 2f64.ln() + z[1].re.abs() / h - t_split * t_split / (4.0 * h) + l1.ln(),
            0.0,
        )
    };
    Ok(SuperposedTransform { inner, tail_bound })
}

/// Exact quadrature of the tail |t| >= t_split (for consistency checks the
/// analytic tail bound is replaced by this).
pub fn superposed_exact_tail(f: &PotentialGrid, z: CVec2, h: f64, t_split: f64) -> LogComplex {
    let reach = t_split + 10.0 * h.sqrt();
    superposed_part(f, z, h, t_split, reach)
}

/// Decay-slope check of the weight-normalized transform at the real frequency
/// 2a e1, with the admissibility rule eps < c / (8 C) and a > (c + 4 eps) /
/// eps^2 enforced before any computation.
#[allow(clippy::too_many_arguments)]
pub fn check_improved_bound(
    f: &PotentialGrid,
    c: f64,
    a: f64,
    epsilon: f64,
    c_measured: f64,
    x2: f64,
    h_list: &[f64],
    slope_tol: f64,
) -> Result<DecayReport> {
    if epsilon >= c / (8.0 * c_measured) {
        return Err(Error::ParameterRule(format!(
            "epsilon = {epsilon} must be below c/(8 C_meas) = {}",
            c / (8.0 * c_measured)
        )));
    }
    if a <= (c + 4.0 * epsilon) / (epsilon * epsilon) {
        return Err(Error::ParameterRule(format!(
            "a = {a} must exceed (c + 4 eps)/eps^2 = {}",
            (c + 4.0 * epsilon) / (epsilon * epsilon)
        )));
    }
    let bound_slope = -c * a / 4.0;
    if f.sup_norm() == 0.0 {
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
    let z1 = C64::new(2.0 * a, 0.0);
    let phi = weight_phi(z1);
    let mut log_norms = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let v = transform(f, [z1, C64::new(x2, 0.0)], h);
        log_norms.push(v.log_mod - phi / (2.0 * h));
    }
    let inv_h: Vec<f64> = h_list.iter().map(|&h| 1.0 / h).collect();
    let (_, slope, resid) = fit::linear_fit(&inv_h, &log_norms);
    Ok(DecayReport {
        schema_version: SCHEMA_VERSION,
        h_list: h_list.to_vec(),
        log_norms,
        fitted_slope: Some(slope),
        bound_slope,
        slope_tol,
        fit_residual: Some(resid),
        inconclusive: false,
        note: None,
        pass: slope <= bound_slope + slope_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, Domain2D, ShapeSpec};
    use crate::Pt2;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn tangent_ctx() -> (Arc<Domain2D>, Arc<crate::geometry::InteriorQuadrature>) {
        let d = Arc::new(
            make_domain(
                ShapeSpec::Circle {
                    center: [-1.0, 0.0],
                    radius: 1.0,
                },
                128,
            )
            .unwrap(),
        );
        let q = Arc::new(d.interior_quadrature(100, 200));
        (d, q)
    }

    #[test]
    fn weight_phi_branches_and_seam() {
        assert_relative_eq!(weight_phi(C64::new(0.0, 1.0)), 1.0);
        assert_relative_eq!(weight_phi(C64::new(1.0, 0.0)), -1.0);
        assert_eq!(weight_phi(C64::new(0.0, 0.0)), 0.0);
        // continuity across Re z1 = 0
        let eps = 1e-9;
        let up = weight_phi(C64::new(eps, 0.7));
        let dn = weight_phi(C64::new(-eps, 0.7));
        assert_relative_eq!(up, dn, epsilon = 1e-8);
    }

    #[test]
    fn const_one_line_transform_is_gaussian_mass() {
        for &h in &[0.1, 0.5, 1.0] {
            let v = transform_1d(LinePotential::ConstOne, C64::new(0.3, -2.0), h);
            assert_relative_eq!(v.to_complex().re, (2.0 * PI * h).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn halfline_indicator_matches_erfc_oracle() {
        for &h in &[0.1, 0.4] {
            for &(re, im) in &[(0.0, 0.0), (0.7, 0.3), (-0.5, 1.2), (1.5, -0.8)] {
                let z = C64::new(re, im);
                let quad_v = transform_1d(LinePotential::HalfLineIndicator, z, h).to_complex();
                let oracle = halfline_oracle(z, h);
                assert_relative_eq!(quad_v.re, oracle.re, max_relative = 1e-9, epsilon = 1e-12);
                assert_relative_eq!(quad_v.im, oracle.im, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_potential_transforms_to_exact_zero() {
        let (d, q) = tangent_ctx();
        let zero = crate::pairing::PotentialGrid::zero(d, q);
        let v = transform(&zero, [C64::new(1.0, 2.0), C64::new(0.0, 0.0)], 0.3);
        assert!(v.is_zero());
        let grid = BargmannGrid::compute(&zero, 0.3, 0.0, vec![C64::new(0.0, 0.0)]).unwrap();
        assert!(check_apriori_bound(&grid, 1e-8).pass);
        assert!(check_halfspace_bound(&grid, 1e-8).unwrap().pass);
    }

    #[test]
    fn apriori_and_halfspace_bounds_on_bump() {
        let (d, q) = tangent_ctx();
        let f = crate::pairing::PotentialGrid::bump(d, q, Pt2::new(-1.0, 0.0), 0.5, 1.0);
        let nodes = BargmannGrid::rectangle((-2.0, 2.0, 9), (-2.0, 2.0, 9));
        let grid = BargmannGrid::compute(&f, 0.2, 0.0, nodes).unwrap();
        let ap = check_apriori_bound(&grid, 1e-8);
        assert!(ap.pass, "{ap:?}");
        let hs = check_halfspace_bound(&grid, 1e-8).unwrap();
        assert!(hs.pass, "{hs:?}");
        // the half-space gain is visible: at z1 = 1.5 real the weighted value
        // sits below the plain bound by roughly (Re z1)^2/2h
        let slope = halfspace_decay_slope(&grid);
        assert!(slope.unwrap() < 0.0);
    }

    #[test]
    fn superposition_reconstructs_direct_transform() {
        let (d, q) = tangent_ctx();
        let mut rng = {
            use rand::SeedableRng as _;
            rand_chacha::ChaCha8Rng::seed_from_u64(9)
        };
        let f = crate::pairing::PotentialGrid::random_smooth(d, q, &mut rng);
        let a = 4.0;
        let h = 0.2;
        let z = [C64::new(2.0 * a, 0.0), C64::new(0.0, 0.0)];
        let split = superposed_transform(&f, z, h, 0.1 * a).unwrap();
        let tail = superposed_exact_tail(&f, z, h, 0.1 * a);
        let direct = transform(&f, z, h);
        let sum = logcomplex::sum(&[split.inner, tail]);
        assert!(
            (sum.log_mod - direct.log_mod).abs() < 1e-8,
            "log moduli differ: {} vs {}",
            sum.log_mod,
            direct.log_mod
        );
        let rel = (sum.to_complex() / direct.to_complex() - C64::new(1.0, 0.0)).norm();
        // compare in renormalized scale (absolute values are ~ exp(-160))
        let renorm = (sum.scale_log(-direct.log_mod).to_complex()
            - direct.scale_log(-direct.log_mod).to_complex())
        .norm();
        assert!(renorm < 1e-8, "renormalized mismatch {renorm:.3e} (rel {rel:.3e})");
        // the analytic tail bound dominates the exact tail
        assert!(split.tail_bound.log_mod >= tail.log_mod);
    }

    #[test]
    fn tail_bound_exponent_bookkeeping() {
        // the tail factor exp(-eps^2 a^2 / 4h) at eps = 0.1, a = 40, h = 0.5
        // contributes exactly -8 log units
        let eps = 0.1;
        let a = 40.0;
        let h = 0.5;
        let exponent = -eps * eps * a * a / (4.0 * h);
        assert_relative_eq!(exponent, -8.0, epsilon = 1e-14);
        let (d, q) = tangent_ctx();
        let f = crate::pairing::PotentialGrid::bump(d, q, Pt2::new(-1.0, 0.0), 0.5, 1.0);
        let z = [C64::new(2.0 * a, 0.0), C64::new(0.0, 0.0)];
        let split = superposed_transform(&f, z, h, eps * a).unwrap();
        let expected =
            0.5 * 2f64.ln() + 0.0 / h - eps * eps * a * a / (4.0 * h) + f.l1_norm().ln();
        assert_relative_eq!(split.tail_bound.log_mod, expected, epsilon = 1e-12);
    }

    #[test]
    fn translation_covariance() {
        let d1 = Arc::new(
            make_domain(
                ShapeSpec::Circle {
                    center: [-1.0, 0.0],
                    radius: 1.0,
                },
                128,
            )
            .unwrap(),
        );
        let q1 = Arc::new(d1.interior_quadrature(100, 200));
        let v = Pt2::new(0.4, -0.3);
        let d2 = Arc::new(
            make_domain(
                ShapeSpec::Circle {
                    center: [-1.0 + v.x, v.y],
                    radius: 1.0,
                },
                128,
            )
            .unwrap(),
        );
        let q2 = Arc::new(d2.interior_quadrature(100, 200));
        let profile = |x: Pt2| crate::num::special::mollifier((x - Pt2::new(-1.0, 0.0)).norm() / 0.5);
        let f = crate::pairing::PotentialGrid::from_fn(d1, q1, profile, None).unwrap();
        let f_shift =
            crate::pairing::PotentialGrid::from_fn(d2, q2, |x| profile(x - v), None).unwrap();
        let h = 0.3;
        let z = [C64::new(0.5, 0.8), C64::new(-0.2, 0.1)];
        let shifted_z = [z[0] + v.x, z[1] + v.y];
        let lhs = transform(&f_shift, shifted_z, h);
        let rhs = transform(&f, z, h);
        assert!((lhs.log_mod - rhs.log_mod).abs() < 1e-10);
        let diff = (lhs.scale_log(-rhs.log_mod).to_complex()
            - rhs.scale_log(-rhs.log_mod).to_complex())
        .norm();
        assert!(diff < 1e-10, "covariance mismatch {diff:.3e}");
    }

    #[test]
    fn entirety_proxy_cauchy_riemann() {
        let (d, q) = tangent_ctx();
        let f = crate::pairing::PotentialGrid::bump(d, q, Pt2::new(-1.0, 0.0), 0.5, 1.0);
        let h = 0.3;
        let step = 0.05;
        let center = C64::new(0.4, 0.6);
        let sample = |z: C64| transform(&f, [z, C64::new(0.0, 0.0)], h).to_complex();
        let fr = sample(center + step);
        let fl = sample(center - step);
        let fu = sample(center + C64::new(0.0, step));
        let fd = sample(center - C64::new(0.0, step));
        let fc = sample(center);
        let dzbar = ((fr - fl) + C64::new(0.0, 1.0) * (fu - fd)) / (4.0 * step);
        // truncation proxy from the discrete curvature of the samples
        let curv = ((fr - 2.0 * fc + fl).norm() + (fu - 2.0 * fc + fd).norm()) / (step * step);
        let trunc = curv * step / 6.0 + 1e-12 * fc.norm();
        assert!(
            dzbar.norm() <= 10.0 * trunc,
            "CR residual {:.3e} vs truncation proxy {:.3e}",
            dzbar.norm(),
            trunc
        );
    }

    #[test]
    fn improved_bound_parameter_rule() {
        let (d, q) = tangent_ctx();
        let f = crate::pairing::PotentialGrid::bump(d, q, Pt2::new(-1.0, 0.0), 0.3, 1.0);
        // rule violation rejected before any computation
        assert!(matches!(
            check_improved_bound(&f, 0.2, 10.0, 0.05, 2.0, 0.0, &[0.4, 0.25], 0.05),
            Err(Error::ParameterRule(_))
        ));
        assert!(matches!(
            check_improved_bound(&f, 0.2, 10.0, 0.01, 2.0, 0.0, &[0.4, 0.25], 0.05),
            Err(Error::ParameterRule(_))
        ));
    }

    #[test]
    fn improved_bound_slope_for_separated_support() {
        let (d, q) = tangent_ctx();
        // supported well away from the tangent point
        let f = crate::pairing::PotentialGrid::bump(d.clone(), q, Pt2::new(-1.2, 0.0), 0.4, 1.0);
        let c = 0.2;
        let c_meas = 2.0;
        let eps = 0.01;
        let a = (c + 4.0 * eps) / (eps * eps) * 1.05;
        let report =
            check_improved_bound(&f, c, a, eps, c_meas, 0.0, &[0.4, 0.25, 0.15], 0.05).unwrap();
        assert!(report.pass, "{report:?}");
        // exponent bookkeeping: the -ca/2 term of the full bound equals -0.1 a
        assert_relative_eq!(-c * a / 2.0, -0.1 * a, epsilon = 1e-12);
    }
}
