//! Numerical laboratory for the linearized partial-data moment problem of the
//! Laplacian on planar domains.
//!
//! The crate is organized around one experimental pipeline:
//!
//! * [`geometry`] — smooth star-shaped boundary curves, accessible/inaccessible
//!   boundary partitions, interior quadrature, and the inversion that flattens
//!   a domain against its tangent line at a boundary point.
//! * [`laplace`] — Dirichlet solves by second-kind boundary integral equations
//!   (Nyström double layer), Green kernels, and field norms.
//! * [`cgo`] — harmonic exponentials `exp(-i x·ζ/h)` with null frequency ζ,
//!   corrected by a Dirichlet term so they vanish on the inaccessible boundary
//!   portion, together with decay-rate verification of the correction.
//! * [`pairing`] — bilinear moment data `∫ f u v`, the moment identity and its
//!   Fourier-decay consequence, and Tikhonov reconstruction of a potential
//!   from partial-data moments.
//! * [`bargmann`] — the Segal-Bargmann transform in overflow-safe log scale and
//!   its exponential bound chain (a priori, half-space, superposition split,
//!   improved bound on a complex ball).
//! * [`watermelon`] — propagation of exponential decay by a harmonic barrier on
//!   a cut semi-disc with an excluded disc, with quantitative Hopf and Harnack
//!   checks and the vanishing conclusion.
//! * [`runge`] — density of Green-kernel superpositions among harmonic
//!   functions vanishing on a shared boundary portion, as a constructive
//!   least-squares approximation between nested domains.
//! * [`report`] — machine-readable experiment reports.

pub mod bargmann;
pub mod cgo;
pub mod error;
pub mod geometry;
pub mod laplace;
pub mod num;
pub mod pairing;
pub mod report;
pub mod runge;
pub mod watermelon;

pub use error::{Error, Result};
pub use num::logcomplex::LogComplex;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Real 2-vector (points, normals, real frequencies).
pub type Pt2 = nalgebra::Vector2<f64>;
/// Complex frequency vector in dimension 2.
pub type CVec2 = [C64; 2];
/// Complex frequency vector in dimension 3.
pub type CVec3 = [C64; 3];
