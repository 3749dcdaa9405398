//! Exact scalars, Laurent polynomials in `lam`, and dense rational matrices.

mod laurent;
mod matrix;
mod rat;

pub use laurent::LaurentPoly;
pub use matrix::RatMatrix;
pub use rat::{lcm_denominators, Rat};
