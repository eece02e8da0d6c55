//! Dirichlet spectra of the m-order logarithmic Laplacian, the operator with
//! Fourier symbol `(2 log|ξ|)^m`, together with executable versions of the
//! known eigenvalue bounds and Weyl-type asymptotics.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] — log-gamma, polygamma, Bessel `J`.
//! * [`coeffs`] — the κ functions, kernel coefficients α_j and structural constants.
//! * [`operator`] — pointwise evaluation of `L_m ζ` by singular kernels and by the symbol.
//! * [`galerkin`] — piecewise-constant Galerkin eigenvalues on lattice domains.
//! * [`bounds`] — closed-form bounds turned into pass/fail certificates.
//! * [`experiment`] — configuration, caching and reports behind the `logspec` binary.

pub mod bounds;
pub mod coeffs;
pub mod error;
pub mod experiment;
pub mod galerkin;
pub mod operator;
pub mod quad;
pub mod specfun;

pub use coeffs::OperatorParams;
pub use error::{Error, Result};
pub use galerkin::{LatticeDomain, Spectrum};
