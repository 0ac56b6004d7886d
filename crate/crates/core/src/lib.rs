//! Rotation group elements `exp(iθ n̂·J)` written as finite polynomials of
//! degree `2j` in the spin matrices, for any spin `j`.
//!
//! The crate has three independent ways to the same matrix, which check
//! each other:
//!
//! - [`series`]: exact-rational truncated Taylor coefficients `c_k(θ)`,
//!   evaluated through [`spin_algebra::rotation_from_polynomial`];
//! - [`vandermonde`]: the Lagrange–Sylvester route, inverting the exact
//!   Vandermonde matrix of the eigenvalues of `2n̂·J`;
//! - [`spin_algebra::rotation_oracle`]: a plain dense matrix exponential.
//!
//! [`cayley_hamilton`] holds the resolution polynomial `p_j(x)` and the
//! first-order differential relations between coefficients, and
//! [`asymptotics`] the large-spin limits.

pub mod asymptotics;
pub mod cayley_hamilton;
mod error;
mod extended;
pub mod matrix;
pub mod series;
mod spin;
pub mod spin_algebra;
pub mod vandermonde;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use spin::Spin;

pub use num_complex::Complex64;
