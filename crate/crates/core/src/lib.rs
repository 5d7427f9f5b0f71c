//! Asymptotic evaluation of the Gauss hypergeometric function
//! F(a−λ, b+λ; c+iαλ; z) for large λ by the method of steepest descents,
//! together with the Legendre functions of real degree and imaginary
//! order that it generates.
//!
//! The crate is generic over the working scalar: the same phase, saddle,
//! coefficient and series code runs in `f64` (curve tracing, quick
//! evaluation) and in arbitrary-precision arithmetic (reference oracle,
//! table-grade evaluation). Concrete aliases live at the crate root.

pub mod coalescence;
pub mod coeffs;
pub mod error;
pub mod expansion;
pub mod legendre;
pub mod numerics;
pub mod oracle;
pub mod phase;
pub mod regions;
pub mod tables;

pub use error::{Error, Result};
pub use numerics::{BigReal, Complex, ComplexSeries, Scalar};

/// Native double-precision complex number.
pub type C64 = Complex<f64>;
/// Arbitrary-precision complex number (precision carried per value).
pub type BigComplex = Complex<BigReal>;
/// Truncated power series over f64 complex coefficients.
pub type Series64 = ComplexSeries<f64>;
/// Truncated power series at extended precision.
pub type BigSeries = ComplexSeries<BigReal>;

/// A precision model: zero at `digits` significant decimal digits.
pub fn big(digits: u32) -> BigReal {
    BigReal::model(digits)
}
