//! Even-order Bernoulli numbers (exact rationals) and the principal
//! complex log-gamma function at arbitrary working precision.
//!
//! `log_gamma` shifts the argument to the right until the Stirling series
//! converges well below the working precision, then subtracts the
//! accumulated `log(z + k)` terms. Branch slips of 2πi are possible far
//! in the left half-plane; every consumer in this crate exponentiates
//! gamma combinations, so such slips cancel.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::Complex;
use super::scalar::Scalar;
use crate::error::{Error, Result};

thread_local! {
    // B_0, B_1, B_2, ... with B_1 = -1/2 (only even indices are consumed).
    static BERNOULLI: RefCell<Vec<BigRational>> = const { RefCell::new(Vec::new()) };
}

/// Exact Bernoulli numbers B_2, B_4, ..., B_{2K} by the defining
/// recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0.
pub fn bernoulli_numbers(k_max: usize) -> Vec<BigRational> {
    BERNOULLI.with(|cell| {
        let mut tab = cell.borrow_mut();
        extend_bernoulli(&mut tab, 2 * k_max);
        (1..=k_max).map(|k| tab[2 * k].clone()).collect()
    })
}

fn extend_bernoulli(tab: &mut Vec<BigRational>, n_max: usize) {
    if tab.is_empty() {
        tab.push(BigRational::one()); // B_0
    }
    while tab.len() <= n_max {
        let n = tab.len(); // computing B_n
        // B_n = -1/(n+1) * sum_{k=0}^{n-1} C(n+1, k) B_k
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(n+1, 0)
        for (k, b) in tab.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            // C(n+1, k+1) = C(n+1, k) * (n+1-k) / (k+1)
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        let b_n = -acc / BigRational::from_integer(BigInt::from(n + 1));
        tab.push(b_n);
    }
}

/// Convert an exact rational to the working precision of `model`.
pub fn rational_to<T: Scalar>(model: &T, r: &BigRational) -> T {
    let num = model.parse_decimal(&r.numer().to_string());
    let den = model.parse_decimal(&r.denom().to_string());
    num / den
}

/// n! at the working precision of `model`.
pub fn factorial<T: Scalar>(model: &T, n: u32) -> T {
    let mut acc = model.lift(1.0);
    for k in 2..=n.max(1) {
        acc = acc * model.lift_i(k as i64);
    }
    acc
}

/// Principal branch of log Γ(z), accurate to roughly the working
/// precision of `z` (up to 2πi far in the left half-plane).
pub fn log_gamma<T: Scalar>(z: &Complex<T>) -> Result<Complex<T>> {
    let model = &z.re;
    let digits = model.digits().max(16);

    // Poles at 0, -1, -2, ...
    if z.im.clone().abs().to_f64() == 0.0 {
        let re = z.re.to_f64();
        if re <= 0.0 && (re - re.round()).abs() == 0.0 {
            return Err(Error::GammaPole(format!("log_gamma at pole z = {re}")));
        }
    }

    // Shift until Re(w) is large enough that the Stirling tail at the
    // requested precision is dominated by terms we keep.
    let target = (1.2 * digits as f64).max(20.0);
    let shift = ((target - z.re.to_f64()).ceil()).max(0.0) as i64;
    let mut log_accum = Complex::zero_like(model);
    let mut w = z.clone();
    for _ in 0..shift {
        log_accum = log_accum + w.ln();
        w = w + Complex::one_like(model);
    }

    // Stirling: (w - 1/2) ln w - w + ln(2π)/2 + Σ B_{2k} / (2k(2k-1) w^{2k-1})
    let ln_w = w.ln();
    let half = model.lift(0.5);
    let two_pi = model.pi() * model.lift(2.0);
    let mut s = (w.clone() - Complex::of(model, 0.5, 0.0)) * ln_w - w.clone()
        + Complex::real(two_pi.ln() * half);

    let w_inv_sq = (w.clone() * w.clone()).inv();
    let mut w_pow = w.inv(); // w^{-(2k-1)}, starting at k = 1
    let tol = model.lift(10.0).powi(-(digits as i32) - 6);
    let k_cap = (4 * digits as usize).max(64);
    let rationals = bernoulli_numbers(k_cap);
    let mut converged = false;
    for (idx, b2k) in rationals.iter().enumerate() {
        let k = idx + 1;
        let coeff = rational_to(model, b2k) / model.lift_i((2 * k * (2 * k - 1)) as i64);
        let term = w_pow.scale(&coeff);
        let tmag = term.abs();
        s = s + term;
        if tmag < tol {
            converged = true;
            break;
        }
        w_pow = w_pow * w_inv_sq.clone();
    }
    if !converged {
        return Err(Error::Numerical(
            "log_gamma: Stirling tail did not reach the working precision".into(),
        ));
    }

    Ok(s - log_accum)
}
