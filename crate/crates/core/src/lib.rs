//! Exact symbolic engine for the `lam`-connection on the Brieskorn-type
//! module of a polynomial with `n+2` monomials in `n+1` variables.
//!
//! The building blocks are:
//!
//! - [`exact`]: rationals, Laurent polynomials in `lam`, rational matrices;
//! - [`algebra`]: normal-form arithmetic in the algebra generated by `a`, `b`
//!   with `a·b − b·a = b²`, over `Q[lam, lam⁻¹]`;
//! - [`exponent`]: hypotheses on the exponent matrix and the integral
//!   dependency `r·α_{n+2} = Σ p_j·α_j`;
//! - [`connection`]: `(σ, τ)` for a monomial, the `lam·∇` formula and the
//!   period-integral PDE;
//! - [`families`]: closed-form operators for two explicit families;
//! - [`asymptotics`]: propagation of log-polynomial expansion coefficients.

pub mod algebra;
pub mod asymptotics;
pub mod cli;
pub mod connection;
pub mod error;
pub mod exact;
pub mod exponent;
pub mod families;
pub mod parse;
pub mod selftest;

pub use error::{Error, Result};
pub use exact::{LaurentPoly, Rat, RatMatrix};
