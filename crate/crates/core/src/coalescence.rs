//! The double-saddle expansion at z = z_d^− = ½(1 − √(1+α²)).
//!
//! There ψ′ = ψ″ = 0 and the local behavior is cubic:
//! ψ(t) − ψ(t_d) = Aτ³ + Bτ⁴ + Cτ⁵ + Dτ⁶ + …, τ = t − t_d. Inverting to
//! τ(w) as a series in w^{1/3} and expanding (t−1)^{−1} dτ/dw =
//! Σ_m 𝓑_m(α) w^{(m−2)/3} produces
//!
//!   F_α(λ; z_d^−) ∼ −(G_α(λ)/π) e^{λψ(t_d)}
//!        Σ_m 𝓑_m(α) Γ((m+1)/3) λ^{−(m+1)/3} sin(π(m+1)/3),
//!
//! where the m ≡ 2 (mod 3) slots carry an exactly vanishing sine. The
//! cubic coefficients are computed twice — closed forms in α and a
//! direct Taylor recomputation — and must agree; the tabulated reference
//! coefficients carry the amplitude normalization 𝓑_m·T (amplitude
//! factor 1/(t_d−1) removed), exposed via [`CoalescenceCoeffs::table_normalized`].

use crate::error::{Error, Result};
use crate::expansion::g_exact;
use crate::numerics::complex::Complex;
use crate::numerics::gamma::log_gamma;
use crate::numerics::scalar::{BigReal, Scalar};
use crate::numerics::series::{cbrt_branch, ComplexSeries};
use crate::oracle::oracle_f;
use crate::phase::{double_points, double_saddle, psi_derivs, Params};

/// Cubic saddle data at t_d.
#[derive(Clone, Debug)]
pub struct CubicData<T: Scalar> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
    pub t_d: Complex<T>,
    /// T = t_d − 1.
    pub t_cap: Complex<T>,
    /// κ = z_d^− t_d / (1 − z_d^− t_d).
    pub kappa: Complex<T>,
    /// ψ(t_d) on the principal branch (z_d^− is reached along the upper
    /// continuation where all logs stay principal).
    pub psi_d: Complex<T>,
    /// Cube-root branch of A, fixed by an oracle probe.
    pub root_selector: u8,
}

/// Closed forms for A, B, C, D, cross-checked against the Taylor
/// coefficients ψ^{(m)}(t_d)/m!; disagreement flags a transcription error.
pub fn cubic_coeffs<T: Scalar>(alpha: &T) -> Result<CubicData<T>> {
    let m = alpha;
    let one = Complex::one_like(m);
    let a2 = alpha.clone() * alpha.clone();
    let root = (m.lift(1.0) + a2.clone()).sqrt();
    let ia = Complex::new(m.lift(0.0), alpha.clone());
    let one_p_ia = one.clone() + ia.clone(); // 1+iα
    let one_m_ia = one.clone() - ia.clone(); // 1−iα

    let sd = double_saddle(alpha)?;
    let t_d = sd.t.clone();
    let t_cap = t_d.clone() - one.clone();
    let (zdm, _) = double_points(alpha);
    let zd = Complex::real(zdm);
    let kappa = zd.clone() * t_d.clone() / (one.clone() - zd.clone() * t_d.clone());

    // A = −(1+iα)³/(6α²√(1+α²)) {α²(−3+√(1+α²)) + 4(−1+√(1+α²))}
    let brace_a = a2.clone() * (root.clone() - m.lift(3.0))
        + (root.clone() - m.lift(1.0)) * m.lift(4.0);
    let a = -(one_p_ia.powi(3).scale(&(brace_a / (m.lift(6.0) * a2.clone() * root.clone()))));

    // B = (1+iα)³(α+2i)/(8α³(1−iα)) {α⁴ − 4α²(−2+√(1+α²)) − 8(−1+√(1+α²))}
    let brace_b = a2.clone() * a2.clone()
        - a2.clone() * (root.clone() - m.lift(2.0)) * m.lift(4.0)
        - (root.clone() - m.lift(1.0)) * m.lift(8.0);
    let b = one_p_ia.powi(3) * Complex::new(alpha.clone(), m.lift(2.0))
        / (one_m_ia.clone().scale(&(m.lift(8.0) * a2.clone() * alpha.clone())));
    let b = b.scale(&brace_b);

    // C = (1+iα)⁴(6−5iα−α²)/(20α⁴(1−iα)√(1+α²))
    //     {α⁴(−5+√(1+α²)) + 4α²(−5+3√(1+α²)) + 16(−1+√(1+α²))}
    let brace_c = a2.clone() * a2.clone() * (root.clone() - m.lift(5.0))
        + a2.clone() * (root.clone() * m.lift(3.0) - m.lift(5.0)) * m.lift(4.0)
        + (root.clone() - m.lift(1.0)) * m.lift(16.0);
    let poly_c = Complex::new(m.lift(6.0) - a2.clone(), -(m.lift(5.0) * alpha.clone()));
    let c = one_p_ia.powi(4) * poly_c
        / (one_m_ia
            .clone()
            .scale(&(m.lift(20.0) * a2.clone() * a2.clone() * root.clone())));
    let c = c.scale(&brace_c);

    // D = −i(1+iα)⁴(8−9iα−3α²)/(24α⁵(1−iα)²)
    //     {α⁶ − 6α⁴(−3+√(1+α²)) − 16α²(−3+2√(1+α²)) − 32(−1+√(1+α²))}
    let a4 = a2.clone() * a2.clone();
    let brace_d = a4.clone() * a2.clone()
        - a4.clone() * (root.clone() - m.lift(3.0)) * m.lift(6.0)
        - a2.clone() * (root.clone() * m.lift(2.0) - m.lift(3.0)) * m.lift(16.0)
        - (root.clone() - m.lift(1.0)) * m.lift(32.0);
    let poly_d = Complex::new(m.lift(8.0) - m.lift(3.0) * a2.clone(), -(m.lift(9.0) * alpha.clone()));
    let d = -(Complex::i_like(m) * one_p_ia.powi(4) * poly_d
        / (one_m_ia.powi(2).scale(&(m.lift(24.0) * a4 * alpha.clone()))));
    let d = d.scale(&brace_d);

    // Taylor recomputation: ψ − ψ_d = Σ_{n≥3} ψ^{(n)}(t_d)/n! τ^n
    let beta = Complex::new(m.lift(1.0), -alpha.clone());
    let derivs = psi_derivs(&t_d, &zd, &beta, 6)?;
    let taylor = |n: usize, fact: i64| derivs[n - 1].scale(&(m.lift(1.0) / m.lift_i(fact)));
    let checks = [
        (a.clone(), taylor(3, 6), "A"),
        (b.clone(), taylor(4, 24), "B"),
        (c.clone(), taylor(5, 120), "C"),
        (d.clone(), taylor(6, 720), "D"),
    ];
    let digits = m.digits().max(16);
    let tol = 10f64.powi(-(digits.min(300) as i32) + 10);
    for (closed, direct, name) in checks {
        let rel = ((closed.clone() - direct.clone()).abs() / direct.abs()).to_f64();
        if !(rel < tol) {
            return Err(Error::Numerical(format!(
                "cubic coefficient {name}: closed form and Taylor recomputation \
                 disagree (rel {rel:.3e})"
            )));
        }
    }

    Ok(CubicData {
        a,
        b,
        c,
        d,
        t_d,
        t_cap,
        kappa,
        psi_d: sd.psi,
        root_selector: 0, // fixed later by the oracle probe
    })
}

/// sin(π(m+1)/3) exactly: ±√3/2 with the six-fold pattern, 0 at m ≡ 2 (mod 3).
fn sine_factor<T: Scalar>(m: &T, idx: u32) -> T {
    let s3_half = m.lift(3.0).sqrt() * m.lift(0.5);
    match idx % 6 {
        0 | 1 => s3_half,
        3 | 4 => -s3_half,
        _ => m.lift(0.0),
    }
}

/// Coefficient ladder for the double-saddle expansion.
#[derive(Clone, Debug)]
pub struct CoalescenceCoeffs<T: Scalar> {
    /// 𝓑_m(α) of the (t−1)^{−1} dτ/dw series, m = 0..=m_max.
    pub b: Vec<Complex<T>>,
    pub cubic: CubicData<T>,
    pub alpha: T,
}

impl<T: Scalar> CoalescenceCoeffs<T> {
    /// The tabulated normalization 𝓑_m·T (amplitude factor removed).
    pub fn table_normalized(&self) -> Vec<Complex<T>> {
        self.b
            .iter()
            .map(|bm| bm.clone() * self.cubic.t_cap.clone())
            .collect()
    }
}

/// Pick the cube-root branch of A so that the leading-order value agrees
/// in argument (within π/3) with the terminating-series oracle at λ = 10.
fn probe_selector<T: Scalar>(cubic: &CubicData<T>, alpha: &T) -> Result<u8> {
    let af = alpha.to_f64();
    let lam = 10u32;
    let mb = BigReal::model(48);
    let (zdm_b, _) = double_points(&mb.lift(af));
    let oracle = oracle_f(lam, &mb.lift(af), &Complex::real(zdm_b)).to_c64();

    let g = g_exact(&(lam as f64), &af)?;
    let psi_d = cubic.psi_d.to_c64();
    let t_cap = cubic.t_cap.to_c64();
    let a64 = cubic.a.to_c64();
    let gamma_third = 2.678938534707747633655692940974677644129; // Γ(1/3)
    let lam_pow = (lam as f64).powf(-1.0 / 3.0);
    let sin_third = 3f64.sqrt() / 2.0;

    let mut winner = None;
    for sel in 0u8..3 {
        let b0 = (cbrt_branch(&a64, sel) * t_cap.clone()).inv().scale(&(1.0 / 3.0));
        let f0 = -(g.clone() * psi_d.scale(&(lam as f64)).exp() * b0)
            .scale(&(gamma_third * lam_pow * sin_third / std::f64::consts::PI));
        let arg_gap = (f0 / oracle.clone()).arg().abs();
        if arg_gap < std::f64::consts::PI / 3.0 {
            if winner.is_some() {
                return Err(Error::BranchAmbiguous(
                    "two cube-root branches both fit the oracle probe".into(),
                ));
            }
            winner = Some(sel);
        }
    }
    winner.ok_or_else(|| {
        Error::BranchAmbiguous("no cube-root branch fits the oracle probe".into())
    })
}

/// 𝓑_0..𝓑_{m_max} by the series pipeline: revert ψ−ψ_d, differentiate,
/// multiply by the amplitude series of (t−1)^{−1}.
pub fn calb_coeffs<T: Scalar>(alpha: &T, m_max: u32) -> Result<CoalescenceCoeffs<T>> {
    let mut cubic = cubic_coeffs(alpha)?;
    cubic.root_selector = probe_selector(&cubic, alpha)?;
    let m = alpha;
    let one = Complex::one_like(m);

    // amplitude series 1/(t−1) = (1/T)(1 + τ/T)^{−1} about τ = 0
    let order = m_max as i32 + 1;
    let amp = ComplexSeries::new(1, 0, vec![one.clone(), cubic.t_cap.inv()], order)
        .pow_c(&(-one.clone()))?
        .scale(&cubic.t_cap.inv());

    let b = ladder_from_amplitude(&cubic, alpha, m_max, &amp)?;
    Ok(CoalescenceCoeffs {
        b,
        cubic,
        alpha: alpha.clone(),
    })
}

/// Shared tail of the pipelines: given the amplitude Taylor series in τ,
/// produce the w^{(m−2)/3} ladder of amplitude(τ(w))·dτ/dw.
fn ladder_from_amplitude<T: Scalar>(
    cubic: &CubicData<T>,
    alpha: &T,
    m_max: u32,
    amp: &ComplexSeries<T>,
) -> Result<Vec<Complex<T>>> {
    let m = alpha;
    let (zdm, _) = double_points(alpha);
    let zd = Complex::real(zdm);
    let beta = Complex::new(m.lift(1.0), -alpha.clone());

    // u-series: ψ(t_d+τ) − ψ(t_d) = Σ_{n=3}^{M+3} ψ^{(n)}/n! τ^n
    let top = m_max + 3;
    let derivs = psi_derivs(&cubic.t_d, &zd, &beta, top)?;
    let mut fact = m.lift(2.0);
    let mut coeffs = Vec::with_capacity((top - 2) as usize);
    for n in 3..=top {
        fact = fact * m.lift_i(n as i64);
        coeffs.push(derivs[(n - 1) as usize].scale(&(m.lift(1.0) / fact.clone())));
    }
    let u = ComplexSeries::new(1, 3, coeffs, top as i32);

    let tau = u.revert_root(3, cubic.root_selector)?;
    let dtau_dw = tau.derivative();
    let composed = amp.compose(&tau)?;
    let product = composed * dtau_dw;

    Ok((0..=m_max as i32).map(|mm| product.coeff(mm - 2)).collect())
}

/// Σ_m 𝓑_m Γ((m+1)/3) λ^{−(m+1)/3} sin(π(m+1)/3) over m ≤ m_max.
pub fn coalescence_sum<T: Scalar>(lambda: &T, coeffs: &[Complex<T>]) -> Result<Complex<T>> {
    let m = lambda;
    let ln_lam = lambda.ln();
    let mut acc = Complex::zero_like(m);
    for (idx, bm) in coeffs.iter().enumerate() {
        let s = sine_factor(m, idx as u32);
        if s.clone().abs().is_zero() {
            continue;
        }
        // (m+1)/3 built as a ratio at working precision
        let arg = m.lift_i(idx as i64 + 1) / m.lift(3.0);
        let gamma = log_gamma(&Complex::real(arg.clone()))?.exp();
        let lam_pow = (-(arg * ln_lam.clone())).exp();
        acc = acc + (gamma.scale(&lam_pow)).scale(&s) * bm.clone();
    }
    Ok(acc)
}

/// F_α(λ; z_d^−) by the double-saddle expansion with terms m ≤ m_max.
pub fn f_at_coalescence<T: Scalar>(lambda: &T, alpha: &T, m_max: u32) -> Result<Complex<T>> {
    let coeffs = calb_coeffs(alpha, m_max)?;
    let g = g_exact(lambda, alpha)?;
    let s = coalescence_sum(lambda, &coeffs.b)?;
    let m = alpha;
    let pi = m.pi();
    Ok(-(g * coeffs.cubic.psi_d.scale(lambda).exp() * s).scale(&(m.lift(1.0) / pi)))
}

/// General-parameter ladder: amplitude t^{b−1}(t−1)^{c−b−1}(1−z t)^{−a}.
pub fn calb_general<T: Scalar>(
    alpha: &T,
    a: &Complex<T>,
    b: &Complex<T>,
    c: &Complex<T>,
    m_max: u32,
) -> Result<CoalescenceCoeffs<T>> {
    let mut cubic = cubic_coeffs(alpha)?;
    cubic.root_selector = probe_selector(&cubic, alpha)?;
    let m = alpha;
    let one = Complex::one_like(m);
    let order = m_max as i32 + 1;

    let b_m1 = b.clone() - one.clone();
    let cb_m1 = c.clone() - b.clone() - one.clone();
    let minus_a = -a.clone();

    // constant amplitude 1/T̂ = t_d^{b−1}(t_d−1)^{c−b−1}(1−z_d t_d)^{−a},
    // principal logs at the double saddle
    let (zdm, _) = double_points(alpha);
    let zd = Complex::real(zdm);
    let w0 = one.clone() - zd.clone() * cubic.t_d.clone();
    let f0 = (cubic.t_d.ln() * b_m1.clone() + cubic.t_cap.ln() * cb_m1.clone()
        + w0.ln() * minus_a.clone())
    .exp();

    let lin = |k: Complex<T>| ComplexSeries::new(1, 0, vec![one.clone(), k], order);
    let s1 = lin(cubic.t_d.inv()).pow_c(&b_m1)?;
    let s2 = lin(cubic.t_cap.inv()).pow_c(&cb_m1)?;
    let s3 = lin(-(zd.clone() / w0.clone())).pow_c(&minus_a)?;
    let amp = (s1 * s2 * s3).scale(&f0);

    let bm = ladder_from_amplitude(&cubic, alpha, m_max, &amp)?;
    Ok(CoalescenceCoeffs {
        b: bm,
        cubic,
        alpha: alpha.clone(),
    })
}

/// General-parameter value at the coalescence point, with the prefactor
/// Γ(c+iαλ)Γ(1+b−c+λβ)/Γ(b+λ).
pub fn f_general_at_coalescence<T: Scalar>(
    lambda: &T,
    alpha: &T,
    a: &Complex<T>,
    b: &Complex<T>,
    c: &Complex<T>,
    m_max: u32,
) -> Result<Complex<T>> {
    let m = alpha;
    let coeffs = calb_general(alpha, a, b, c, m_max)?;
    let (zdm, _) = double_points(alpha);
    let p = Params::general(
        a.clone(),
        b.clone(),
        c.clone(),
        alpha.clone(),
        lambda.clone(),
        Complex::real(zdm),
    )?;
    let g = crate::expansion::prefactor_general(&p)?;
    let s = coalescence_sum(lambda, &coeffs.b)?;
    let pi = m.pi();
    Ok(-(g * coeffs.cubic.psi_d.scale(lambda).exp() * s).scale(&(m.lift(1.0) / pi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::BigReal;

    fn big(d: u32) -> BigReal {
        BigReal::model(d)
    }

    #[test]
    fn kappa_closed_form_at_alpha_one() {
        // κ(1) = (1−√2+i)/(1+√2+i)
        let m = big(64);
        let cubic = cubic_coeffs(&m.lift(1.0)).unwrap();
        let r2 = m.lift(2.0).sqrt();
        let want = Complex::new(m.lift(1.0) - r2.clone(), m.lift(1.0))
            / Complex::new(m.lift(1.0) + r2, m.lift(1.0));
        assert!((cubic.kappa.clone() - want).abs().to_f64() < 1e-55);
    }

    #[test]
    fn cubic_closed_forms_agree_with_taylor_across_alpha() {
        // cubic_coeffs errors internally when the two routes disagree
        let m = big(64);
        for a in [0.3, 0.7, 1.0, 2.5, 6.0] {
            let cubic = cubic_coeffs(&m.lift(a)).unwrap();
            assert!(cubic.a.abs().to_f64() > 1e-8, "A must be the leading coefficient");
        }
    }

    #[test]
    fn closed_forms_of_first_ladder_coefficients() {
        let m = big(64);
        let alpha = m.lift(1.0);
        let lad = calb_coeffs(&alpha, 3).unwrap();
        let cu = &lad.cubic;
        let a13 = cbrt_branch(&cu.a, cu.root_selector);
        let one = Complex::one_like(&alpha);

        // 𝓑₀ = 1/(3A^{1/3}T)
        let b0 = (a13.clone() * cu.t_cap.clone()).inv().scale(&(m.lift(1.0) / m.lift(3.0)));
        assert!(
            ((lad.b[0].clone() - b0.clone()).abs() / b0.abs()).to_f64() < 1e-45,
            "𝓑₀ pipeline vs closed form"
        );

        // 𝓑₁ = −(1/(9A^{2/3}T²))(3 + 2BT/A)
        let bt_a = cu.b.clone() * cu.t_cap.clone() / cu.a.clone();
        let brace = Complex::of(&alpha, 3.0, 0.0) + bt_a.scale(&m.lift(2.0));
        let b1 = -(brace
            / (a13.powi(2) * cu.t_cap.clone() * cu.t_cap.clone()).scale(&m.lift(9.0)));
        assert!(
            ((lad.b[1].clone() - b1.clone()).abs() / b1.abs()).to_f64() < 1e-45,
            "𝓑₁ pipeline vs closed form"
        );

        // 𝓑₃ = −(1/(243A^{4/3}T⁴)){81 + 140B³T³/A³ + 126BT²(B−2CT)/A²
        //        + 108T(B−CT+DT²)/A}
        let t = cu.t_cap.clone();
        let brace3 = Complex::of(&alpha, 81.0, 0.0)
            + (cu.b.powi(3) * t.powi(3) / cu.a.powi(3)).scale(&m.lift(140.0))
            + (cu.b.clone() * t.powi(2) * (cu.b.clone() - cu.c.clone().scale(&m.lift(2.0)) * t.clone())
                / cu.a.powi(2))
            .scale(&m.lift(126.0))
            + (t.clone()
                * (cu.b.clone() - cu.c.clone() * t.clone() + cu.d.clone() * t.powi(2))
                / cu.a.clone())
            .scale(&m.lift(108.0));
        let b3 = -(brace3 / (a13.powi(4) * t.powi(4)).scale(&m.lift(243.0)));
        assert!(
            ((lad.b[3].clone() - b3.clone()).abs() / b3.abs()).to_f64() < 1e-40,
            "𝓑₃ pipeline vs closed form"
        );
        let _ = one;
    }

    #[test]
    fn tabulated_coefficients_alpha_one() {
        // reference values to 10 dp (the tabulated normalization 𝓑_m·T)
        let m = big(64);
        let lad = calb_coeffs(&m.lift(1.0), 10).unwrap();
        let tab = lad.table_normalized();
        let reference: [(usize, f64, f64); 8] = [
            (0, 1.1210852199, 0.3003938793),
            (1, 0.2166214717, 0.8084423383),
            (3, 0.0700678262, 0.0187746174),
            (4, 0.0082200112, 0.0306774994),
            (6, 0.0251806251, 0.0067471281),
            (7, -0.0018434584, -0.0068798804),
            (9, 0.0044976298, 0.0012051363),
            (10, -0.0001979294, -0.0007386825),
        ];
        for (idx, re, im) in reference {
            let got = tab[idx].to_c64();
            assert!(
                (got.re - re).abs() < 5e-10 && (got.im - im).abs() < 5e-10,
                "𝓑_{idx}·T = {got:?}, reference ({re}, {im})"
            );
        }
    }

    #[test]
    fn coalescence_value_matches_reference_lambda_10() {
        let m = big(64);
        let v = f_at_coalescence(&m.lift(10.0), &m.lift(1.0), 10).unwrap();
        let got = v.to_c64();
        assert!(
            (got.re - (-1.360471937691)).abs() < 1e-9,
            "re = {:.12}",
            got.re
        );
        assert!(
            (got.im - (-1.001859435166)).abs() < 1e-9,
            "im = {:.12}",
            got.im
        );
    }

    #[test]
    fn coalescence_value_matches_reference_lambda_100() {
        let m = big(64);
        let v = f_at_coalescence(&m.lift(100.0), &m.lift(1.0), 10).unwrap();
        let got = v.to_c64();
        assert!(
            (got.re - 2.373096383284).abs() < 1e-9,
            "re = {:.12}",
            got.re
        );
        assert!(
            (got.im - 0.016497731932).abs() < 1e-9,
            "im = {:.12}",
            got.im
        );
    }

    #[test]
    fn conjugation_at_real_coalescence_point() {
        // F_{−α}(λ; z_d^−) = conj F_α(λ; z_d^−): compare the conjugated
        // expansion against the oracle run with −α
        let m = big(64);
        let v = f_at_coalescence(&m.lift(10.0), &m.lift(1.0), 10).unwrap();
        let (zdm, _) = double_points(&m.lift(1.0));
        let direct_neg = oracle_f(10, &m.lift(-1.0), &Complex::real(zdm));
        let gap = (v.conj() - direct_neg.clone()).abs().to_f64() / direct_neg.abs().to_f64();
        assert!(gap < 1e-6, "conjugation gap {gap:e} (should be ~expansion error)");
    }

    #[test]
    fn two_branch_summation_equals_sine_form() {
        // assemble the m ≤ 4 sum from the explicit e^{∓iπ(m+1)/3} pair of
        // path halves and compare with the sine form
        let m = big(64);
        let lam = m.lift(25.0);
        let lad = calb_coeffs(&m.lift(1.0), 4).unwrap();
        let sine_route = coalescence_sum(&lam, &lad.b).unwrap();

        let mut phase_route = Complex::zero_like(&m.lift(1.0));
        let ln_lam = lam.clone().ln();
        for (idx, bm) in lad.b.iter().enumerate() {
            let arg = m.lift_i(idx as i64 + 1) / m.lift(3.0);
            let gamma = log_gamma(&Complex::real(arg.clone())).unwrap().exp();
            let lam_pow = (-(arg.clone() * ln_lam.clone())).exp();
            let ang = m.pi() * arg;
            let up = Complex::new(ang.cos(), ang.sin());
            let dn = up.conj();
            // (e^{iπ(m+1)/3} − e^{−iπ(m+1)/3})/(2i) = sin(π(m+1)/3)
            let half_i_inv = Complex::of(&m.lift(1.0), 0.0, -0.5);
            let s = (up - dn) * half_i_inv;
            phase_route = phase_route + (gamma.scale(&lam_pow) * s) * bm.clone();
        }
        let gap = (sine_route.clone() - phase_route).abs().to_f64();
        assert!(gap < 1e-50 * sine_route.abs().to_f64().max(1e-30), "gap {gap:e}");
    }

    #[test]
    fn dropped_slots_never_contribute() {
        // m ≡ 2 (mod 3): perturbing those coefficients must not move the sum
        let m = big(48);
        let lam = m.lift(40.0);
        let lad = calb_coeffs(&m.lift(1.0), 8).unwrap();
        let base = coalescence_sum(&lam, &lad.b).unwrap();
        let mut perturbed = lad.b.clone();
        for idx in [2usize, 5, 8] {
            perturbed[idx] = perturbed[idx].clone() + Complex::of(&m.lift(1.0), 7.0, -3.0);
        }
        let same = coalescence_sum(&lam, &perturbed).unwrap();
        assert!((base.clone() - same).abs().to_f64() == 0.0);
    }

    #[test]
    fn general_ladder_reduces_to_standard() {
        let m = big(64);
        let alpha = m.lift(1.0);
        let one = Complex::one_like(&alpha);
        let std_lad = calb_coeffs(&alpha, 7).unwrap();
        let gen_lad = calb_general(&alpha, &Complex::zero_like(&alpha), &one, &one, 7).unwrap();
        for idx in 0..=7usize {
            let d = (std_lad.b[idx].clone() - gen_lad.b[idx].clone()).abs().to_f64();
            let scale = std_lad.b[idx].abs().to_f64().max(1e-12);
            assert!(d / scale < 1e-45, "𝓑̂_{idx} reduction gap {:.3e}", d / scale);
        }
    }

    #[test]
    fn general_closed_forms_match_pipeline() {
        // (a,b,c) = (1,2,1), α = 1: check the γ/D route closed forms for
        // 𝓑̂₀, 𝓑̂₁, 𝓑̂₃
        let m = big(64);
        let alpha = m.lift(1.0);
        let one = Complex::one_like(&alpha);
        let two = Complex::of(&alpha, 2.0, 0.0);
        let a_p = one.clone();
        let lad = calb_general(&alpha, &a_p, &two, &one, 3).unwrap();
        let cu = &lad.cubic;
        let a13 = cbrt_branch(&cu.a, cu.root_selector);

        // T̂^{-1} = t_d^{b−1}(t_d−1)^{c−b−1}(1−z_d t_d)^{−a}
        let (zdm, _) = double_points(&alpha);
        let zd = Complex::real(zdm);
        let w0 = one.clone() - zd.clone() * cu.t_d.clone();
        let that_inv = cu.t_d.clone() * cu.t_cap.inv().powi(2) * w0.inv();
        let that = that_inv.inv();

        let b0_closed = (a13.clone() * that.clone()).inv().scale(&(m.lift(1.0) / m.lift(3.0)));
        let gap0 = ((lad.b[0].clone() - b0_closed.clone()).abs() / b0_closed.abs()).to_f64();
        assert!(gap0 < 1e-45, "𝓑̂₀ gap {gap0:e}");

        // γ ladder
        let (av, bv, cv) = (one.clone(), two.clone(), one.clone());
        let kappa = cu.kappa.clone();
        let g1 = (cv.clone() - bv.clone() - one.clone()) / cu.t_cap.clone()
            + (bv.clone() - one.clone() + kappa.clone() * av.clone()) / cu.t_d.clone();
        let g2 = -((bv.clone() - one.clone() - kappa.clone() * kappa.clone() * av.clone())
            / (cu.t_d.clone() * cu.t_d.clone()).scale(&m.lift(2.0)))
            - (cv.clone() - bv.clone() - one.clone())
                / (cu.t_cap.clone() * cu.t_cap.clone()).scale(&m.lift(2.0))
            - g1.clone() * cu.b.clone() / cu.a.clone().scale(&m.lift(3.0));
        let g3 = (cu.b.clone() * cu.b.clone() - cu.a.clone() * cu.c.clone().scale(&m.lift(3.0)))
            * g1.clone()
            / (cu.a.clone() * cu.a.clone()).scale(&m.lift(9.0))
            - cu.b.clone() * g2.clone().scale(&m.lift(2.0)) / cu.a.clone().scale(&m.lift(3.0))
            + (bv.clone() - one.clone() + kappa.powi(3) * av.clone())
                / cu.t_d.powi(3).scale(&m.lift(3.0))
            + (cv.clone() - bv.clone() - one.clone()) / cu.t_cap.powi(3).scale(&m.lift(3.0));
        let d1 = g1.clone();
        let d2 = (g1.clone() * g1.clone()).scale(&m.lift(0.5)) + g2.clone();
        let d3 = g1.powi(3).scale(&(m.lift(1.0) / m.lift(6.0))) + g1.clone() * g2.clone() + g3;

        // 𝓑̂₁ = (1/(9A^{2/3}T̂)){3γ₁ − 2B/A}
        let b1_closed = (g1.scale(&m.lift(3.0))
            - (cu.b.clone() / cu.a.clone()).scale(&m.lift(2.0)))
            / (a13.powi(2) * that.clone()).scale(&m.lift(9.0));
        let gap1 = ((lad.b[1].clone() - b1_closed.clone()).abs() / b1_closed.abs()).to_f64();
        assert!(gap1 < 1e-40, "𝓑̂₁ gap {gap1:e}");

        // 𝓑̂₃ = −(1/(243A^{4/3}T̂)){(4/A³)(35B³−63ABC+27A²D)
        //        − (81/A²)(B²−AC)D₁ + 54BD₂/A − 81D₃}
        let brace = (cu.b.powi(3).scale(&m.lift(35.0))
            - (cu.a.clone() * cu.b.clone() * cu.c.clone()).scale(&m.lift(63.0))
            + (cu.a.clone() * cu.a.clone() * cu.d.clone()).scale(&m.lift(27.0)))
        .scale(&m.lift(4.0))
            / cu.a.powi(3)
            - (cu.b.clone() * cu.b.clone() - cu.a.clone() * cu.c.clone())
                .scale(&m.lift(81.0))
                * d1
                / cu.a.powi(2)
            + cu.b.clone() * d2.scale(&m.lift(54.0)) / cu.a.clone()
            - d3.scale(&m.lift(81.0));
        let b3_closed = -(brace / (a13.powi(4) * that).scale(&m.lift(243.0)));
        let gap3 = ((lad.b[3].clone() - b3_closed.clone()).abs() / b3_closed.abs()).to_f64();
        assert!(gap3 < 1e-38, "𝓑̂₃ gap {gap3:e}");
    }

    #[test]
    fn general_value_reduces_exactly() {
        let m = big(64);
        let alpha = m.lift(1.0);
        let one = Complex::one_like(&alpha);
        let lam = m.lift(40.0);
        let std_v = f_at_coalescence(&lam, &alpha, 9).unwrap();
        let gen_v = f_general_at_coalescence(
            &lam,
            &alpha,
            &Complex::zero_like(&alpha),
            &one,
            &one,
            9,
        )
        .unwrap();
        let gap = ((std_v.clone() - gen_v).abs() / std_v.abs()).to_f64();
        assert!(gap < 1e-45, "general (0,1,1) must reduce exactly, gap {gap:e}");
    }

    #[test]
    fn general_truncation_self_consistency() {
        // (a,b,c) = (1,2,1), α = 1, λ = 40: the M = 6 and M = 9 values
        // differ by less than the first omitted term at M = 6
        let m = big(64);
        let alpha = m.lift(1.0);
        let one = Complex::one_like(&alpha);
        let two = Complex::of(&alpha, 2.0, 0.0);
        let lam = m.lift(40.0);
        let v6 = f_general_at_coalescence(&lam, &alpha, &one, &two, &one, 6).unwrap();
        let v9 = f_general_at_coalescence(&lam, &alpha, &one, &two, &one, 9).unwrap();
        // first omitted term of the M = 6 sum is the m = 7 slot
        let lad = calb_general(&alpha, &one, &two, &one, 7).unwrap();
        let g = {
            let (zdm, _) = double_points(&alpha);
            let p = Params::general(
                one.clone(),
                two.clone(),
                one.clone(),
                alpha.clone(),
                lam.clone(),
                Complex::real(zdm),
            )
            .unwrap();
            crate::expansion::prefactor_general(&p).unwrap()
        };
        let arg = m.lift(8.0) / m.lift(3.0);
        let gamma = log_gamma(&Complex::real(arg.clone())).unwrap().exp();
        let lam_pow = (-(arg * lam.clone().ln())).exp();
        let omitted = (g * lad.cubic.psi_d.scale(&lam).exp() * gamma.scale(&lam_pow)
            * lad.b[7].clone())
        .abs()
        .to_f64()
            * (3f64.sqrt() / 2.0)
            / std::f64::consts::PI;
        let diff = (v6 - v9).abs().to_f64();
        assert!(
            diff < omitted * 1.5,
            "truncation self-consistency: diff {diff:e} vs omitted {omitted:e}"
        );
    }
}
