//! Legendre functions of real degree λ and purely imaginary order ±iαλ,
//! assembled from F_α(λ; z) with z = ½ − ½x:
//!
//!   P_λ^{−iαλ}(x) = Γ(1+iαλ)^{−1} ((x−1)/(x+1))^{iαλ/2} F_α(λ; z),
//!
//!   e^{−παλ} Q_λ^{−iαλ}(x) = ½Γ(−iαλ) R^{iαλ/2} F_α(λ; z)
//!        + (Γ(iαλ)Γ(1+λβ)/(2Γ(1+λβ̄))) R^{−iαλ/2} F_{−α}(λ; z),
//!
//! with R = (x−1)/(x+1) and F_{−α}(λ; z) = conj F_α(λ; conj z). Q is
//! carried in the e^{−παλ} normalization throughout: the bare Q overflows
//! double precision already at moderate αλ.
//!
//! At x = √(1+α²) the argument z lands exactly on the double point z_d^−
//! and the coalescence expansion takes over.

use crate::coalescence::{calb_coeffs, coalescence_sum};
use crate::error::{Error, Result};
use crate::expansion::{evaluate, g_exact, Mode};
use crate::numerics::complex::Complex;
use crate::numerics::gamma::log_gamma;
use crate::numerics::scalar::Scalar;
use crate::phase::Params;

#[derive(Clone, Debug)]
pub struct LegendreArgs<T: Scalar> {
    pub lambda: T,
    pub alpha: T,
    pub x: Complex<T>,
}

impl<T: Scalar> LegendreArgs<T> {
    pub fn new(lambda: T, alpha: T, x: Complex<T>) -> Result<Self> {
        if !(alpha > T::zero()) || !(lambda > T::zero()) {
            return Err(Error::InvalidParams("need α > 0 and λ > 0".into()));
        }
        if x.im.to_f64() == 0.0 && x.re.to_f64() <= 1.0 {
            return Err(Error::InvalidParams(
                "x on the cut (−∞, 1]: the functions are defined off it".into(),
            ));
        }
        Ok(LegendreArgs { lambda, alpha, x })
    }

    /// z = ½ − ½x.
    pub fn z(&self) -> Complex<T> {
        let m = &self.alpha;
        (Complex::one_like(m) - self.x.clone()).scale(&m.lift(0.5))
    }

    /// True when x = √(1+α²), i.e. z = z_d^− (the coalescence route).
    pub fn at_coalescence(&self) -> bool {
        let m = &self.alpha;
        let root = (m.lift(1.0) + self.alpha.clone() * self.alpha.clone()).sqrt();
        (self.x.clone() - Complex::real(root)).abs().to_f64() < 1e-12
    }

    /// R^{iαλ/2} with R = (x−1)/(x+1), principal branch.
    fn half_power(&self) -> Complex<T> {
        let m = &self.alpha;
        let one = Complex::one_like(m);
        let ratio = (self.x.clone() - one.clone()) / (self.x.clone() + one);
        let exponent = Complex::new(
            m.lift(0.0),
            self.alpha.clone() * self.lambda.clone() * m.lift(0.5),
        );
        ratio.powc(&exponent)
    }
}

/// Q in the e^{−παλ} normalization.
#[derive(Clone, Debug)]
pub struct QScaled<T: Scalar> {
    /// e^{−παλ} Q_λ^{−iαλ}(x).
    pub scaled: Complex<T>,
    /// παλ, kept for unscaling.
    pub pi_alpha_lambda: T,
}

impl<T: Scalar> QScaled<T> {
    /// The bare Q; may overflow in f64 (checked).
    pub fn unscaled(&self) -> Result<Complex<T>> {
        let v = self.scaled.scale(&self.pi_alpha_lambda.exp());
        if !v.is_finite() {
            return Err(Error::Numerical(
                "unscaled Q overflows the working type; use the e^{−παλ} form".into(),
            ));
        }
        Ok(v)
    }
}

/// P from a supplied value of F_α(λ; ½−½x) (asymptotic or reference).
pub fn assemble_p<T: Scalar>(args: &LegendreArgs<T>, f_value: &Complex<T>) -> Result<Complex<T>> {
    let m = &args.alpha;
    let one = Complex::one_like(m);
    let ial = Complex::new(m.lift(0.0), args.alpha.clone() * args.lambda.clone());
    let lg = log_gamma(&(one + ial))?;
    Ok((-lg).exp() * args.half_power() * f_value.clone())
}

/// e^{−παλ}Q from supplied values of F_α at z and at conj z.
pub fn assemble_q<T: Scalar>(
    args: &LegendreArgs<T>,
    f_at_z: &Complex<T>,
    f_at_conj_z: &Complex<T>,
) -> Result<QScaled<T>> {
    let m = &args.alpha;
    let al = args.alpha.clone() * args.lambda.clone();
    let ial = Complex::new(m.lift(0.0), al.clone());
    let beta = Complex::new(m.lift(1.0), -args.alpha.clone());
    let beta_bar = beta.conj();
    let one = Complex::one_like(m);
    let half = m.lift(0.5);

    let g_minus = log_gamma(&(-ial.clone()))?.exp();
    let g_plus = log_gamma(&ial)?.exp();
    let g_beta = log_gamma(&(one.clone() + beta.scale(&args.lambda)))?.exp();
    let g_beta_bar = log_gamma(&(one + beta_bar.scale(&args.lambda)))?.exp();

    let pow = args.half_power();
    let f_neg_alpha = f_at_conj_z.conj();
    let term1 = (g_minus * pow.clone() * f_at_z.clone()).scale(&half);
    let term2 = (g_plus * g_beta / g_beta_bar * pow.inv() * f_neg_alpha).scale(&half);
    Ok(QScaled {
        scaled: term1 + term2,
        pi_alpha_lambda: m.pi() * al,
    })
}

/// P by the steepest-descent expansion of F (truncation index s_max).
pub fn legendre_p<T: Scalar>(args: &LegendreArgs<T>, s_max: u32) -> Result<Complex<T>> {
    let p = Params::standard(args.alpha.clone(), args.lambda.clone(), args.z())?;
    let f = evaluate(&p, s_max, Mode::Auto)?;
    assemble_p(args, &f.value)
}

/// e^{−παλ}Q by the steepest-descent expansion of F.
///
/// Q is the recessive combination: the two terms cancel the dominant
/// saddle, so the relative accuracy of this route degrades by the
/// dominance ratio e^{λ|Re Δψ|}. The reference route substitutes oracle
/// values of F into [`assemble_q`] instead.
pub fn legendre_q<T: Scalar>(args: &LegendreArgs<T>, s_max: u32) -> Result<QScaled<T>> {
    let p1 = Params::standard(args.alpha.clone(), args.lambda.clone(), args.z())?;
    let f1 = evaluate(&p1, s_max, Mode::Auto)?;
    let p2 = Params::standard(args.alpha.clone(), args.lambda.clone(), args.z().conj())?;
    let f2 = evaluate(&p2, s_max, Mode::Auto)?;
    assemble_q(args, &f1.value, &f2.value)
}

/// P at x = √(1+α²) by the double-saddle expansion:
/// P ∼ −(Γ(1+λβ)/Γ(1+λ)) R_d^{iαλ/2} (e^{λψ(t_d)}/π) S(λ; α).
pub fn legendre_p_coalescence<T: Scalar>(lambda: &T, alpha: &T, m_max: u32) -> Result<Complex<T>> {
    let m = alpha;
    let (w, g_ratio, _) = coalescence_core(lambda, alpha, m_max)?;
    Ok(-(g_ratio * w).scale(&(m.lift(1.0) / m.pi())))
}

/// e^{−παλ}Q at x = √(1+α²):
/// e^{−παλ}Q ∼ (Γ(1+λβ)/Γ(1+λ)) Im{R_d^{iαλ/2} e^{λψ(t_d)} S} / sinh(παλ).
pub fn legendre_q_coalescence<T: Scalar>(lambda: &T, alpha: &T, m_max: u32) -> Result<QScaled<T>> {
    let m = alpha;
    let (w, g_ratio, pi_al) = coalescence_core(lambda, alpha, m_max)?;
    let im_part = Complex::real(w.im.clone());
    let scaled = (g_ratio * im_part).scale(&(m.lift(1.0) / pi_al.sinh()));
    Ok(QScaled {
        scaled,
        pi_alpha_lambda: pi_al,
    })
}

/// Shared assembly: W = R_d^{iαλ/2} e^{λψ(t_d)} S(λ;α), the ratio
/// Γ(1+λβ)/Γ(1+λ), and παλ.
fn coalescence_core<T: Scalar>(
    lambda: &T,
    alpha: &T,
    m_max: u32,
) -> Result<(Complex<T>, Complex<T>, T)> {
    let m = alpha;
    let coeffs = calb_coeffs(alpha, m_max)?;
    let s = coalescence_sum(lambda, &coeffs.b)?;

    let root = (m.lift(1.0) + alpha.clone() * alpha.clone()).sqrt();
    let r_d = (root.clone() - m.lift(1.0)) / (root + m.lift(1.0));
    let exponent = Complex::new(m.lift(0.0), alpha.clone() * lambda.clone() * m.lift(0.5));
    let pow = Complex::real(r_d).powc(&exponent);

    let w = pow * coeffs.cubic.psi_d.scale(lambda).exp() * s;

    let one = Complex::one_like(m);
    let beta = Complex::new(m.lift(1.0), -alpha.clone());
    let g_ratio = (log_gamma(&(one.clone() + beta.scale(lambda)))?
        - log_gamma(&(one + Complex::real(lambda.clone())))?)
    .exp();
    let pi_al = m.pi() * alpha.clone() * lambda.clone();
    Ok((w, g_ratio, pi_al))
}

/// Positive-order value from the negative-order one:
/// Q^{+iαλ} = (Γ(1+λβ̄)/Γ(1+λβ)) e^{−2παλ} Q^{−iαλ}, in scaled form.
pub fn q_positive_order<T: Scalar>(
    lambda: &T,
    alpha: &T,
    q_minus: &QScaled<T>,
) -> Result<QScaled<T>> {
    let m = alpha;
    let one = Complex::one_like(m);
    let beta = Complex::new(m.lift(1.0), -alpha.clone());
    let ratio = (log_gamma(&(one.clone() + beta.conj().scale(lambda)))?
        - log_gamma(&(one + beta.scale(lambda)))?)
    .exp();
    let factor = (-(m.lift(2.0) * q_minus.pi_alpha_lambda.clone())).exp();
    Ok(QScaled {
        scaled: ratio * q_minus.scaled.scale(&factor),
        pi_alpha_lambda: q_minus.pi_alpha_lambda.clone(),
    })
}
