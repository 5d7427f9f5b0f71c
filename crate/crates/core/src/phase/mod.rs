//! Parameter bundle, phase/amplitude functions, saddle points, and the
//! double-saddle geometry.
//!
//! The phase is ψ(t) = log t(1−zt) − β log(t−1) with β = 1 − iα. Saddle
//! points solve ψ′ = 0; they coalesce at z = ½ ± ½√(1+α²). Branch
//! bookkeeping lives in [`continuation`]: logs are continued along a
//! fixed path family anchored on the positive real z-axis between the
//! double points, where all branches are principal.

pub mod continuation;

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::numerics::gamma::factorial;
use crate::numerics::scalar::Scalar;

/// Full parameter bundle (a, b, c, α, λ, z) with derived β, θ, φ.
#[derive(Clone, Debug)]
pub struct Params<T: Scalar> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub alpha: T,
    pub lambda: T,
    pub z: Complex<T>,
    /// β = 1 − iα.
    pub beta: Complex<T>,
    /// θ = arg z ∈ [−π, π].
    pub theta: T,
    /// φ = arctan α ∈ (0, π/2).
    pub phi: T,
}

impl<T: Scalar> Params<T> {
    /// The case (a, b, c) = (0, 1, 1).
    pub fn standard(alpha: T, lambda: T, z: Complex<T>) -> Result<Self> {
        let m = &alpha;
        Self::general(
            Complex::zero_like(m),
            Complex::one_like(m),
            Complex::one_like(m),
            alpha.clone(),
            lambda,
            z,
        )
    }

    pub fn general(
        a: Complex<T>,
        b: Complex<T>,
        c: Complex<T>,
        alpha: T,
        lambda: T,
        z: Complex<T>,
    ) -> Result<Self> {
        if !(alpha > T::zero()) {
            return Err(Error::InvalidParams(
                "alpha must be positive (negative alpha is reached through conjugation)".into(),
            ));
        }
        if !(lambda > T::zero()) {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        if z.abs().is_zero() {
            return Err(Error::InvalidParams("z must be nonzero".into()));
        }
        let one_minus_z = Complex::one_like(&alpha) - z.clone();
        if one_minus_z.im.to_f64() == 0.0 && one_minus_z.re.to_f64() <= 0.0 {
            return Err(Error::InvalidParams(
                "z on the cut: need |arg(1-z)| < pi strictly".into(),
            ));
        }
        if !z.is_finite() || !alpha.is_finite() || !lambda.is_finite() {
            return Err(Error::InvalidParams("non-finite input".into()));
        }
        let beta = Complex::new(alpha.lift(1.0), -alpha.clone());
        let theta = z.arg();
        let phi = alpha.atan();
        Ok(Params {
            a,
            b,
            c,
            alpha,
            lambda,
            z,
            beta,
            theta,
            phi,
        })
    }

    /// Precision model for constants.
    pub fn model(&self) -> &T {
        &self.alpha
    }

    pub fn is_standard(&self) -> bool {
        self.a.abs().to_f64() == 0.0
            && (self.b.clone() - Complex::one_like(&self.alpha)).abs().to_f64() == 0.0
            && (self.c.clone() - Complex::one_like(&self.alpha)).abs().to_f64() == 0.0
    }

    pub fn to_f64(&self) -> Params<f64> {
        Params {
            a: self.a.to_c64(),
            b: self.b.to_c64(),
            c: self.c.to_c64(),
            alpha: self.alpha.to_f64(),
            lambda: self.lambda.to_f64(),
            z: self.z.to_c64(),
            beta: self.beta.to_c64(),
            theta: self.theta.to_f64(),
            phi: self.phi.to_f64(),
        }
    }
}

/// Branch offsets: 2πi multiples distinguishing the continued logs from
/// principal values. `n_prod` corrects log(t(1−zt)), `n_t` log t alone,
/// `n_w` log(1−zt), `n_v` log(t−1).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchOffsets {
    pub n_prod: i32,
    pub n_t: i32,
    pub n_w: i32,
    pub n_v: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleLabel {
    S1,
    S2,
    Double,
}

/// A saddle with its branch-consistent phase data.
#[derive(Clone, Debug)]
pub struct SaddleData<T: Scalar> {
    pub label: SaddleLabel,
    pub t: Complex<T>,
    /// ψ(t) on the declared branch.
    pub psi: Complex<T>,
    /// ψ″(t).
    pub psi2: Complex<T>,
    pub offsets: BranchOffsets,
    /// The continued √ψ″ equals the principal square root times (−1)^sqrt_flip.
    pub sqrt_flip: i32,
}

impl<T: Scalar> SaddleData<T> {
    /// Spec-shaped pair: corrections to log t_s and log(t_s − 1).
    pub fn branch_offsets(&self) -> (i32, i32) {
        (self.offsets.n_t, self.offsets.n_v)
    }
}

/// ψ(t) = log t(1−zt) − β log(t−1) with explicit branch integers applied
/// to the two logarithms (product-log convention for the first).
pub fn psi<T: Scalar>(
    t: &Complex<T>,
    z: &Complex<T>,
    beta: &Complex<T>,
    n1: i32,
    n2: i32,
) -> Result<Complex<T>> {
    let m = &t.re;
    let u = t.clone() * (Complex::one_like(m) - z.clone() * t.clone());
    let v = t.clone() - Complex::one_like(m);
    if u.abs().is_zero() || v.abs().is_zero() {
        return Err(Error::Numerical(
            "psi evaluated at a logarithmic singularity".into(),
        ));
    }
    let two_pi_i = Complex::new(m.lift(0.0), m.pi() * m.lift(2.0));
    let log_u = u.ln() + two_pi_i.scale(&m.lift_i(n1 as i64));
    let log_v = v.ln() + two_pi_i.scale(&m.lift_i(n2 as i64));
    Ok(log_u - beta.clone() * log_v)
}

/// ψ′(t), …, ψ^{(m)}(t) in closed form:
/// ψ^{(m)} = (−1)^{m−1}(m−1)! [t^{−m} − β (t−1)^{−m}] − (m−1)! z^m (1−zt)^{−m}.
pub fn psi_derivs<T: Scalar>(
    t: &Complex<T>,
    z: &Complex<T>,
    beta: &Complex<T>,
    m_max: u32,
) -> Result<Vec<Complex<T>>> {
    let model = &t.re;
    let one = Complex::one_like(model);
    let v = t.clone() - one.clone();
    let w = one.clone() - z.clone() * t.clone();
    if t.abs().is_zero() || v.abs().is_zero() || w.abs().is_zero() {
        return Err(Error::Numerical("psi derivative at a singularity".into()));
    }
    let t_inv = t.inv();
    let v_inv = v.inv();
    let w_inv = w.inv();
    let z_w_inv = z.clone() * w_inv.clone();

    let mut out = Vec::with_capacity(m_max as usize);
    let mut t_pow = t_inv.clone(); // t^{-m}
    let mut v_pow = v_inv.clone();
    let mut zw_pow = z_w_inv.clone(); // z^m (1-zt)^{-m}
    let mut fact = model.lift(1.0); // (m-1)!
    let mut sign = model.lift(1.0); // (-1)^{m-1}
    for m in 1..=m_max {
        if m > 1 {
            fact = fact * model.lift_i((m - 1) as i64);
            sign = -sign;
            t_pow = t_pow * t_inv.clone();
            v_pow = v_pow * v_inv.clone();
            zw_pow = zw_pow * z_w_inv.clone();
        }
        let main = (t_pow.clone() - beta.clone() * v_pow.clone()).scale(&(sign.clone() * fact.clone()));
        let tail = zw_pow.scale(&fact);
        out.push(main - tail);
    }
    Ok(out)
}

/// The displayed saddle-point form of ψ″ (valid only where ψ′ = 0):
/// ψ″ = −2/(t−1)² { (1 − 1/t)(1 − 1/t − β) − ½β(1−β) }.
pub fn psi2_saddle_form<T: Scalar>(t: &Complex<T>, beta: &Complex<T>) -> Complex<T> {
    let m = &t.re;
    let one = Complex::one_like(m);
    let g = one.clone() - t.inv();
    let brace = g.clone() * (g.clone() - beta.clone())
        - beta.clone() * (one.clone() - beta.clone()).scale(&m.lift(0.5));
    let v = t.clone() - one;
    -(brace / (v.clone() * v)).scale(&m.lift(2.0))
}

/// Closed-form saddle pair with the principal square root:
/// (z + ½iα ∓ i(z − z² + ¼α²)^{1/2}) / ((1+iα)z).
/// Returned as (minus-branch, plus-branch); at θ = 0 these are the
/// labels 1 and 2 respectively.
pub fn saddles_raw<T: Scalar>(z: &Complex<T>, alpha: &T) -> (Complex<T>, Complex<T>) {
    let m = alpha;
    let half_alpha_i = Complex::new(m.lift(0.0), alpha.clone() * m.lift(0.5));
    let disc = z.clone() - z.clone() * z.clone()
        + Complex::real(alpha.clone() * alpha.clone() * m.lift(0.25));
    let root = disc.sqrt().mul_i();
    let denom = Complex::new(m.lift(1.0), alpha.clone()) * z.clone();
    let num = z.clone() + half_alpha_i;
    (
        (num.clone() - root.clone()) / denom.clone(),
        (num + root) / denom,
    )
}

/// Newton refinement of a saddle from a nearby guess; converges to the
/// working precision of the inputs.
pub fn newton_refine<T: Scalar>(
    t0: &Complex<T>,
    z: &Complex<T>,
    beta: &Complex<T>,
) -> Result<Complex<T>> {
    let m = &t0.re;
    let digits = m.digits().max(16);
    let tol = m.lift(10.0).powi(-(digits as i32) + 3);
    let mut t = t0.clone();
    for _ in 0..80 {
        let d = psi_derivs(&t, z, beta, 2)?;
        let step = d[0].clone() / d[1].clone();
        t = t.clone() - step.clone();
        let scale = m.lift(1.0) + t.abs();
        if step.abs() < tol.clone() * scale {
            return Ok(t);
        }
    }
    Err(Error::Numerical("saddle Newton did not converge".into()))
}

/// Residual check |ψ′(t)| < 10⁻¹²·(1 + |t|) in double precision terms,
/// scaled to the working precision for big scalars.
pub fn saddle_residual_ok<T: Scalar>(t: &Complex<T>, z: &Complex<T>, beta: &Complex<T>) -> bool {
    let m = &t.re;
    let digits = m.digits().max(16);
    let tol = m.lift(10.0).powi(-(digits.min(16) as i32) + 4);
    match psi_derivs(t, z, beta, 1) {
        Ok(d) => d[0].abs() < tol * (m.lift(1.0) + t.abs()),
        Err(_) => false,
    }
}

/// Double points z_d^∓ = ½ ∓ ½√(1+α²) where the saddles coalesce,
/// returned as (z_d^−, z_d^+).
pub fn double_points<T: Scalar>(alpha: &T) -> (T, T) {
    let half = alpha.lift(0.5);
    let root = (alpha.lift(1.0) + alpha.clone() * alpha.clone()).sqrt();
    (
        half.clone() - half.clone() * root.clone(),
        half.clone() + half * root,
    )
}

/// The double saddle t_d = (z_d^− + ½iα)/((1+iα) z_d^−).
pub fn double_saddle<T: Scalar>(alpha: &T) -> Result<SaddleData<T>> {
    let m = alpha;
    let (zdm, _) = double_points(alpha);
    let zd = Complex::real(zdm);
    let num = zd.clone() + Complex::new(m.lift(0.0), alpha.clone() * m.lift(0.5));
    let den = Complex::new(m.lift(1.0), alpha.clone()) * zd.clone();
    let t_d = num / den;
    let beta = Complex::new(m.lift(1.0), -alpha.clone());
    let psi_val = psi(&t_d, &zd, &beta, 0, 0)?;
    let d = psi_derivs(&t_d, &zd, &beta, 2)?;
    Ok(SaddleData {
        label: SaddleLabel::Double,
        t: t_d,
        psi: psi_val,
        psi2: d[1].clone(),
        offsets: BranchOffsets::default(),
        sqrt_flip: 0,
    })
}

/// Continuity-labeled saddle pair at z, each Newton-refined to the
/// working precision, with branch data continued from the positive real
/// axis anchor. Errors when z is too close to a double point.
pub fn saddles<T: Scalar>(z: &Complex<T>, alpha: &T) -> Result<(SaddleData<T>, SaddleData<T>)> {
    let walk = continuation::walk_to_target(alpha.to_f64(), z.to_c64())?;
    let beta = Complex::new(alpha.lift(1.0), -alpha.clone());
    let mut out = Vec::with_capacity(2);
    for (i, label) in [(0usize, SaddleLabel::S1), (1, SaddleLabel::S2)] {
        let tracked = &walk.s[i];
        let t0 = Complex::of(alpha, tracked.t.re, tracked.t.im);
        let t = newton_refine(&t0, z, &beta)?;
        let sd = continuation::saddle_data_from_track(label, &t, tracked, z, &beta)?;
        out.push(sd);
    }
    let s2 = out.pop().expect("two saddles");
    let s1 = out.pop().expect("two saddles");
    Ok((s1, s2))
}

/// Taylor coefficients of ψ around t₀ from exponent 2 upward:
/// α̂_r = ψ^{(r+2)}(t₀)/(r+2)! for r = 0..=r_max.
pub fn psi_taylor_from_quadratic<T: Scalar>(
    t0: &Complex<T>,
    z: &Complex<T>,
    beta: &Complex<T>,
    r_max: u32,
) -> Result<Vec<Complex<T>>> {
    let m = &t0.re;
    let d = psi_derivs(t0, z, beta, r_max + 2)?;
    Ok((0..=r_max)
        .map(|r| {
            let f = factorial(m, r + 2);
            d[(r + 1) as usize].scale(&(m.lift(1.0) / f))
        })
        .collect())
}
