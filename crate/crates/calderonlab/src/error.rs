use thiserror::Error;

/// Errors surfaced by construction and solve operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("domain is not star-shaped with respect to its center: min cross(q, q') = {min_cross:.3e} at node {node}")]
    NotStarShaped { min_cross: f64, node: usize },

    #[error("no admissible tangent ball at the requested boundary point; smallest violated clearance {clearance:.3e}")]
    NoTangentBall { clearance: f64 },

    #[error("evaluation at the inversion center is undefined")]
    AtInversionCenter,

    #[error("boundary data under-resolved: {nodes_per_wavelength:.2} nodes per oscillation wavelength (need >= {required})")]
    UnderResolved {
        nodes_per_wavelength: f64,
        required: f64,
    },

    #[error("boundary data dynamic range {range:.3e} exceeds overflow budget; increase h or decrease |zeta|/h")]
    DynamicRange { range: f64 },

    #[error("linear system conditioning beyond threshold: estimated condition {cond:.3e}")]
    IllConditioned { cond: f64 },

    #[error("normal-equation conditioning {cond:.3e} beyond 1e14; advise larger regularization")]
    NormalEquation { cond: f64 },

    #[error("barrier region invalid: {0}")]
    InvalidRegion(String),

    #[error("hypothesis bound violated at boundary sample {index} (s = {s_re:.6}+{s_im:.6}i): lhs {lhs:.6e} > rhs {rhs:.6e}")]
    HypothesisViolated {
        index: usize,
        s_re: f64,
        s_im: f64,
        lhs: f64,
        rhs: f64,
    },

    #[error("probe too close to a region corner: |Im s| = {probe:.3} exceeds safe height {safe:.3}")]
    ProbeNearCorner { probe: f64, safe: f64 },

    #[error("parameter rule violated: {0}")]
    ParameterRule(String),

    #[error("Newton iteration failed to converge after {iters} steps (residual {residual:.3e})")]
    NewtonDiverged { iters: usize, residual: f64 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
