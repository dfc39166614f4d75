//! Certified evaluation of the generalised quadratic Gauss sum
//! `S_N(x, theta) = sum_{j=1}^N exp(pi i x j^2 + 2 pi i j theta)`.
//!
//! Three independent paths are provided:
//! * [`gauss::direct_sum`], compensated high-precision summation (the oracle);
//! * [`exact::exact_sum`], the exact representation through complementary
//!   error functions;
//! * [`asymptotic::theorem1_eval`], the small-`x` expansion whose truncation
//!   error carries a computable, `N`-independent bound.

pub mod asymptotic;
pub mod cli;
pub mod error;
pub mod exact;
pub mod expr;
pub mod gauss;
pub mod precision;
pub mod special;
pub mod summation;

pub use error::{GaussError, Result};
pub use precision::{BoundedValue, ComplexValue, PrecisionContext};
