//! Shared numerical machinery: log-scale complex arithmetic, periodic spectral
//! helpers, special functions, quadrature rules, and small fitting utilities.

pub mod fft;
pub mod fit;
pub mod logcomplex;
pub mod quad;
pub mod special;
