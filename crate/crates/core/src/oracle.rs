//! Reference evaluation of F_α(λ; z) = F(−λ, 1+λ; 1+iαλ; z).
//!
//! For positive integer λ the series terminates after λ+1 terms, so the
//! function is a polynomial in z and can be summed exactly at any
//! precision; severe cancellation (the largest term can exceed the sum by
//! ten orders of magnitude around λ = 100) is absorbed by the working
//! precision. At z = ½ a gamma-ratio closed form provides an independent
//! second route for any λ > 0.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::numerics::gamma::log_gamma;
use crate::numerics::scalar::Scalar;

/// Configuration for the terminating-series reference value.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Working significant decimal digits (default 64).
    pub precision_digits: u32,
    /// Degree; the series terminates at n = λ.
    pub lambda: u32,
    pub alpha: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            precision_digits: 64,
            lambda: 80,
            alpha: 1.0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambda == 0 {
            return Err(Error::InvalidParams("oracle needs integer λ ≥ 1".into()));
        }
        if self.lambda >= 40 && self.precision_digits < 32 {
            return Err(Error::InvalidParams(
                "λ ≥ 40 needs at least 32 working digits against cancellation".into(),
            ));
        }
        Ok(())
    }
}

/// Σ_{n=0}^{λ} (−λ)_n (1+λ)_n / ((1+iαλ)_n n!) · zⁿ with term-ratio
/// recursion; exact apart from rounding at the working precision.
///
/// `alpha` may be of either sign here (the conjugation identity is tested
/// against direct summation with −α).
pub fn oracle_f<T: Scalar>(lambda: u32, alpha: &T, z: &Complex<T>) -> Complex<T> {
    let m = alpha;
    let lam = m.lift_i(lambda as i64);
    let i_alpha_lam = Complex::new(m.lift(0.0), alpha.clone() * lam.clone());
    let mut term = Complex::one_like(m);
    let mut sum = term.clone();
    for n in 0..lambda {
        let nf = m.lift_i(n as i64);
        // term ← term · (−λ+n)(1+λ+n) z / ((1+iαλ+n)(n+1))
        let num = Complex::real(nf.clone() - lam.clone())
            * Complex::real(m.lift(1.0) + lam.clone() + nf.clone())
            * z.clone();
        let den = (i_alpha_lam.clone() + Complex::real(m.lift(1.0) + nf.clone()))
            .scale(&(nf + m.lift(1.0)));
        term = term * (num / den);
        sum = sum + term.clone();
    }
    sum
}

/// Closed form at z = ½ for any λ > 0:
/// 2^{−iαλ} √π Γ(1+iαλ) / (Γ(½+½λ(iα−1)) Γ(1+½λ(iα+1))).
pub fn exact_half<T: Scalar>(lambda: &T, alpha: &T) -> Result<Complex<T>> {
    let m = alpha;
    let al = Complex::new(m.lift(0.0), alpha.clone() * lambda.clone()); // iαλ
    let one = Complex::one_like(m);
    let half = Complex::of(m, 0.5, 0.0);
    let g1 = log_gamma(&(one.clone() + al.clone()))?;
    let g2 = log_gamma(&(half.clone() + (al.clone() - Complex::real(lambda.clone())).scale(&m.lift(0.5))))?;
    let g3 = log_gamma(&(one + (al.clone() + Complex::real(lambda.clone())).scale(&m.lift(0.5))))?;
    let ln2 = m.lift(2.0).ln();
    let ln_sqrt_pi = m.pi().ln() * m.lift(0.5);
    let exponent = Complex::real(ln_sqrt_pi) - al.scale(&ln2) + g1 - g2 - g3;
    Ok(exponent.exp())
}

/// F_{−α}(λ; z) from a value of F_α: F_{−α}(λ; z) = conj F_α(λ; conj z).
///
/// `value_at_conj_z` must be F_α(λ; conj z).
pub fn conjugate_flip<T: Scalar>(value_at_conj_z: &Complex<T>) -> Complex<T> {
    value_at_conj_z.conj()
}
