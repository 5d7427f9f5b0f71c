//! Computational substrate: precision-carrying scalars, complex
//! arithmetic, truncated power series, Bernoulli numbers and log-gamma.

pub mod complex;
pub mod gamma;
pub mod scalar;
pub mod series;

pub use complex::{polar_pi, Complex};
pub use gamma::{bernoulli_numbers, factorial, log_gamma, rational_to};
pub use scalar::{BigReal, Scalar};
pub use series::{cbrt_branch, ComplexSeries, ORDER_EXACT};
