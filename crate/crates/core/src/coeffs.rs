//! Steepest-descent coefficients c_s at a simple saddle.
//!
//! Two independent routes are implemented and cross-checked:
//! the closed formula in Bell-polynomial form
//!
//!   c_s = (−1)^s α̂₀^{−s} Σ_{k=0}^{2s} (β̂_{2s−k}/β̂₀)
//!           Σ_{j=0}^{k} (−1)^j (s+½)_j / (j! α̂₀^j) · B_{kj},
//!
//! with (s+½)_j the rising factorial and B_{kj} the partial ordinary Bell
//! polynomials of the α̂ ladder, and the explicit expressions for c₁, c₂
//! in terms of Ψ_m = ψ^{(m)}/ψ″ and F_m = f^{(m)}/f. Here α̂_r and β̂_r
//! are the Taylor coefficients of ψ(t)−ψ(t_s) (from exponent 2) and of
//! the amplitude f at the saddle.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::numerics::scalar::Scalar;
use crate::numerics::series::ComplexSeries;
use crate::phase::{psi_taylor_from_quadratic, Params, SaddleData};

/// Local Taylor data at a simple saddle.
#[derive(Clone, Debug)]
pub struct LocalExpansion<T: Scalar> {
    /// α̂_r = ψ^{(r+2)}(t_s)/(r+2)!, r = 0, 1, …
    pub alpha_hat: Vec<Complex<T>>,
    /// β̂_r = f^{(r)}(t_s)/r!, r = 0, 1, …
    pub beta_hat: Vec<Complex<T>>,
    /// ψ″(t_s).
    pub psi2: Complex<T>,
}

/// Build the local expansion to index `r_max` (both ladders inclusive).
///
/// The amplitude is (t−1)^{−1} in the standard case and
/// t^{b−1}(t−1)^{c−b−1}(1−zt)^{−a} in general, expanded with the
/// branch-continued logs recorded in the saddle data.
pub fn local_expansions<T: Scalar>(
    sd: &SaddleData<T>,
    p: &Params<T>,
    r_max: u32,
) -> Result<LocalExpansion<T>> {
    let m = p.model();
    if sd.psi2.abs().to_f64().abs() < 1e-10 {
        return Err(Error::Coalescent(
            "local expansion requested at a (near-)double saddle".into(),
        ));
    }
    let alpha_hat = psi_taylor_from_quadratic(&sd.t, &p.z, &p.beta, r_max)?;

    let beta_hat = if p.is_standard() {
        // f = (t−1)^{−1}: β̂_r = (−1)^r (t_s−1)^{−(r+1)}
        let v_inv = (sd.t.clone() - Complex::one_like(m)).inv();
        let mut out = Vec::with_capacity(r_max as usize + 1);
        let mut cur = v_inv.clone();
        for _ in 0..=r_max {
            out.push(cur.clone());
            cur = -(cur * v_inv.clone());
        }
        out
    } else {
        general_amplitude_taylor(sd, p, r_max)?
    };

    Ok(LocalExpansion {
        alpha_hat,
        beta_hat,
        psi2: sd.psi2.clone(),
    })
}

/// Taylor ladder of f(t) = t^{b−1}(t−1)^{c−b−1}(1−zt)^{−a} about t_s,
/// branch-consistent through the continued logs.
fn general_amplitude_taylor<T: Scalar>(
    sd: &SaddleData<T>,
    p: &Params<T>,
    r_max: u32,
) -> Result<Vec<Complex<T>>> {
    let m = p.model();
    let one = Complex::one_like(m);
    let t = &sd.t;
    let v = t.clone() - one.clone(); // t−1
    let w = one.clone() - p.z.clone() * t.clone(); // 1−zt
    let two_pi_i = Complex::new(m.lift(0.0), m.pi() * m.lift(2.0));

    let log_t = t.ln() + two_pi_i.scale(&m.lift_i(sd.offsets.n_t as i64));
    let log_v = v.ln() + two_pi_i.scale(&m.lift_i(sd.offsets.n_v as i64));
    let log_w = w.ln() + two_pi_i.scale(&m.lift_i(sd.offsets.n_w as i64));

    let b_minus_1 = p.b.clone() - one.clone();
    let cb_minus_1 = p.c.clone() - p.b.clone() - one.clone();
    let minus_a = -p.a.clone();

    // constant amplitude on the declared branch
    let f0 = (log_t.clone() * b_minus_1.clone()
        + log_v.clone() * cb_minus_1.clone()
        + log_w.clone() * minus_a.clone())
    .exp();

    // (1 + τ/t)^{b−1} (1 + τ/(t−1))^{c−b−1} (1 − zτ/(1−zt))^{−a}
    let order = r_max as i32;
    let lin = |k: Complex<T>| {
        ComplexSeries::new(1, 0, vec![one.clone(), k], order)
    };
    let s1 = lin(t.inv()).pow_c(&b_minus_1)?;
    let s2 = lin(v.inv()).pow_c(&cb_minus_1)?;
    let s3 = lin(-(p.z.clone() / w.clone())).pow_c(&minus_a)?;
    let prod = s1 * s2 * s3;

    Ok((0..=order).map(|r| prod.coeff(r) * f0.clone()).collect())
}

/// Partial ordinary Bell polynomial table B_{kj} for 0 ≤ j ≤ k ≤ k_max,
/// generated by B_{kj} = Σ_{r=1}^{k−j+1} α̂_r B_{k−r,j−1}, B_{k0} = δ_{k0}.
///
/// `alpha_hat` is indexed from α̂₀ (entry 0 is unused by the recursion).
pub fn bell_table<T: Scalar>(alpha_hat: &[Complex<T>], k_max: usize) -> Vec<Vec<Complex<T>>> {
    let m = alpha_hat
        .first()
        .map(|c| c.re.clone())
        .unwrap_or_else(T::zero);
    let zero = Complex::zero_like(&m);
    let mut table: Vec<Vec<Complex<T>>> = vec![vec![zero.clone(); k_max + 1]; k_max + 1];
    table[0][0] = Complex::one_like(&m);
    for k in 1..=k_max {
        for j in 1..=k {
            let mut acc = zero.clone();
            for r in 1..=(k - j + 1) {
                if r < alpha_hat.len() && k >= r {
                    acc = acc + alpha_hat[r].clone() * table[k - r][j - 1].clone();
                }
            }
            table[k][j] = acc;
        }
    }
    table
}

/// c_s by the Bell-polynomial closed formula.
pub fn wojdylo_c<T: Scalar>(le: &LocalExpansion<T>, s: u32) -> Result<Complex<T>> {
    let m = le.psi2.re.clone();
    let a0 = le.alpha_hat[0].clone();
    if a0.abs().is_zero() {
        return Err(Error::Coalescent("α̂₀ = 0 in coefficient formula".into()));
    }
    let need = 2 * s as usize;
    if le.alpha_hat.len() <= need || le.beta_hat.len() <= need {
        return Err(Error::Numerical(format!(
            "local expansion too short for c_{s}: need index {need}"
        )));
    }
    let table = bell_table(&le.alpha_hat, need);
    let b0 = le.beta_hat[0].clone();
    let a0_inv = a0.inv();

    let mut outer = Complex::zero_like(&m);
    for k in 0..=need {
        let beta_ratio = le.beta_hat[need - k].clone() / b0.clone();
        // inner: Σ_j (−1)^j (s+½)_j / (j! α̂₀^j) B_{kj}
        let mut inner = Complex::zero_like(&m);
        let mut poch = m.lift(1.0); // (s+½)_0
        let mut jfact = m.lift(1.0);
        let mut a0j = Complex::one_like(&m); // α̂₀^{-j}
        let mut sign = m.lift(1.0);
        for j in 0..=k {
            if j > 0 {
                poch = poch * (m.lift(s as f64) + m.lift(0.5) + m.lift_i(j as i64 - 1));
                jfact = jfact * m.lift_i(j as i64);
                a0j = a0j * a0_inv.clone();
                sign = -sign;
            }
            let w = a0j.scale(&(sign.clone() * poch.clone() / jfact.clone()));
            inner = inner + table[k][j].clone() * w;
        }
        outer = outer + beta_ratio * inner;
    }

    let sign_s = if s % 2 == 0 { m.lift(1.0) } else { m.lift(-1.0) };
    Ok(outer * a0_inv.powi(s as i64).scale(&sign_s))
}

/// Explicit c₁ and c₂ from the derivative ratios Ψ_m and F_m.
pub fn explicit_c12<T: Scalar>(le: &LocalExpansion<T>) -> Result<(Complex<T>, Complex<T>)> {
    let m = le.psi2.re.clone();
    if le.alpha_hat.len() < 5 || le.beta_hat.len() < 5 {
        return Err(Error::Numerical(
            "explicit c₁/c₂ need local data through index 4".into(),
        ));
    }
    let psi2 = le.psi2.clone();
    // Ψ_m = ψ^{(m)}/ψ″ = α̂_{m−2}·m!/ψ″ ;  F_m = f^{(m)}/f = β̂_m·m!/β̂₀
    let fact = |n: u32| -> T {
        let mut acc = m.lift(1.0);
        for q in 2..=n {
            acc = acc * m.lift_i(q as i64);
        }
        acc
    };
    let psi_m = |mm: u32| -> Complex<T> {
        le.alpha_hat[(mm - 2) as usize].scale(&fact(mm)) / psi2.clone()
    };
    let f_m = |mm: u32| -> Complex<T> {
        le.beta_hat[mm as usize].scale(&fact(mm)) / le.beta_hat[0].clone()
    };

    let p3 = psi_m(3);
    let p4 = psi_m(4);
    let p5 = psi_m(5);
    let p6 = psi_m(6);
    let f1 = f_m(1);
    let f2 = f_m(2);
    let f3 = f_m(3);
    let f4 = f_m(4);

    let r = |num: i64, den: i64| -> T { m.lift_i(num) / m.lift_i(den) };

    // The brace multiplies 1/(2p″) in the classical e^{−λp} form; with
    // p = −ψ that is −1/(2ψ″). Verified against an independent quadrature
    // oracle (the squared prefactor of c₂ is sign-blind).
    let c1_brace = f2.scale(&r(2, 1)) - (p3.clone() * f1.clone()).scale(&r(2, 1))
        + (p3.clone() * p3.clone()).scale(&r(5, 6))
        - p4.clone().scale(&r(1, 2));
    let two_psi2 = psi2.scale(&m.lift(2.0));
    let c1 = -(c1_brace / two_psi2.clone());

    let part1 = f4.scale(&r(2, 3)) - (p3.clone() * f3).scale(&r(20, 9));
    let part2 = ((p3.clone() * p3.clone()).scale(&r(7, 3)) - p4.clone()) * f2.scale(&r(5, 3));
    let part3 = (p3.clone() * p3.clone() * p3.clone() - p3.clone() * p4.clone()
        + p5.clone().scale(&r(6, 35)))
        * f1.scale(&r(35, 9));
    let inner = (p3.clone() * p3.clone() * p3.clone() * p3.clone()).scale(&r(11, 24))
        - ((p3.clone() * p3.clone() - p4.clone().scale(&r(1, 6))) * p4.clone()).scale(&r(3, 4))
        + (p3.clone() * p5.clone()).scale(&r(1, 5))
        - p6.scale(&r(1, 35));
    let part4 = inner.scale(&r(35, 9));

    let c2 = (part1 + part2 - part3 + part4) / (two_psi2.clone() * two_psi2);
    Ok((c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::BigReal;
    use crate::phase::saddles;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn bell_footnote_values() {
        // B₄₁ = α̂₄, B₄₂ = α̂₂² + 2α̂₁α̂₃, B₄₃ = 3α̂₁²α̂₂, B₄₄ = α̂₁⁴
        let a: Vec<C> = vec![
            c(0.9, 0.1), // α̂₀ (unused by recursion)
            c(0.3, -0.2),
            c(-0.5, 0.4),
            c(0.2, 0.6),
            c(-0.1, -0.3),
        ];
        let t = bell_table(&a, 4);
        assert!((t[4][1].clone() - a[4].clone()).abs() < 1e-14);
        let b42 = a[2].clone() * a[2].clone() + (a[1].clone() * a[3].clone()).scale(&2.0);
        assert!((t[4][2].clone() - b42).abs() < 1e-14);
        let b43 = (a[1].clone() * a[1].clone() * a[2].clone()).scale(&3.0);
        assert!((t[4][3].clone() - b43).abs() < 1e-14);
        let b44 = a[1].clone().powi(4);
        assert!((t[4][4].clone() - b44).abs() < 1e-14);
        // base cases
        assert!((t[0][0].clone() - c(1.0, 0.0)).abs() < 1e-15);
        for k in 1..=4 {
            assert!(t[k][0].abs() < 1e-15);
        }
    }

    #[test]
    fn bell_geometric_pattern() {
        // α̂_r = x^r gives B_{kj} = C(k−1, k−j) x^k (composition count),
        // checked against direct expansion of (Σ x^r τ^r)^j
        let x = 0.7f64;
        let a: Vec<C> = (0..=4).map(|r| c(x.powi(r), 0.0)).collect();
        let t = bell_table(&a, 4);
        let binom = |n: i64, k: i64| -> f64 {
            if k < 0 || k > n {
                return 0.0;
            }
            let mut v = 1.0;
            for i in 0..k {
                v = v * (n - i) as f64 / (i + 1) as f64;
            }
            v
        };
        for k in 1..=4i64 {
            for j in 1..=k {
                let want = binom(k - 1, k - j) * x.powi(k as i32);
                let got = t[k as usize][j as usize].re;
                assert!(
                    (got - want).abs() < 1e-12,
                    "B_{{{k}{j}}} = {got}, want {want}"
                );
            }
        }
    }

    fn gaussian_le() -> LocalExpansion<f64> {
        // ψ − ψ(t_s) = τ² exactly, f ≡ 1
        let zero = c(0.0, 0.0);
        LocalExpansion {
            alpha_hat: vec![
                c(1.0, 0.0),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
            ],
            beta_hat: vec![
                c(1.0, 0.0),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero,
            ],
            psi2: c(2.0, 0.0),
        }
    }

    #[test]
    fn gaussian_case_has_no_corrections() {
        let le = gaussian_le();
        assert!((wojdylo_c(&le, 0).unwrap() - c(1.0, 0.0)).abs() < 1e-15);
        for s in 1..=4 {
            let cs = wojdylo_c(&le, s).unwrap();
            assert!(cs.abs() < 1e-14, "c_{s} = {cs:?} should vanish");
        }
    }

    #[test]
    fn amplitude_scaling_leaves_cs_unchanged() {
        let p = Params::standard(1.0f64, 80.0, c(0.4, 0.2)).unwrap();
        let (s1, _) = saddles(&p.z, &p.alpha).unwrap();
        let le = local_expansions(&s1, &p, 8).unwrap();
        let kappa = c(3.0, -1.5);
        let scaled = LocalExpansion {
            alpha_hat: le.alpha_hat.clone(),
            beta_hat: le.beta_hat.iter().map(|b| b.clone() * kappa.clone()).collect(),
            psi2: le.psi2.clone(),
        };
        for s in 0..=3 {
            let a = wojdylo_c(&le, s).unwrap();
            let b = wojdylo_c(&scaled, s).unwrap();
            assert!((a - b).abs() < 1e-12, "c_{s} changed under f → κf");
        }
    }

    #[test]
    fn wojdylo_matches_explicit_small_grid() {
        for (zr, zi, alpha) in [
            (0.5, 0.0, 1.0),
            (0.35, 0.4, 0.5),
            (0.3, -0.45, 2.0),
            (0.8, 0.3, 1.0),
        ] {
            let p = Params::standard(alpha, 80.0f64, c(zr, zi)).unwrap();
            let (s1, s2) = saddles(&p.z, &p.alpha).unwrap();
            for sd in [s1, s2] {
                let le = local_expansions(&sd, &p, 6).unwrap();
                let (c1e, c2e) = explicit_c12(&le).unwrap();
                let c1w = wojdylo_c(&le, 1).unwrap();
                let c2w = wojdylo_c(&le, 2).unwrap();
                let r1 = (c1w.clone() - c1e.clone()).abs() / c1e.abs();
                let r2 = (c2w.clone() - c2e.clone()).abs() / c2e.abs();
                // f64 route: limited by roundoff in the Bell sums
                assert!(r1 < 1e-11, "c₁ routes differ at ({zr},{zi},{alpha}): {r1:e}");
                assert!(r2 < 1e-11, "c₂ routes differ at ({zr},{zi},{alpha}): {r2:e}");
            }
        }
    }

    #[test]
    fn wojdylo_matches_explicit_at_high_precision() {
        let m = BigReal::model(64);
        let z = Complex::of(&m, 0.5, 0.2);
        let p = Params::standard(m.lift(1.0), m.lift(80.0), z).unwrap();
        let (s1, s2) = saddles(&p.z, &p.alpha).unwrap();
        for sd in [s1, s2] {
            let le = local_expansions(&sd, &p, 6).unwrap();
            let (c1e, c2e) = explicit_c12(&le).unwrap();
            let c1w = wojdylo_c(&le, 1).unwrap();
            let c2w = wojdylo_c(&le, 2).unwrap();
            let r1 = ((c1w - c1e.clone()).abs() / c1e.abs()).to_f64();
            let r2 = ((c2w - c2e.clone()).abs() / c2e.abs()).to_f64();
            assert!(r1 < 1e-50, "c₁ routes differ: {r1:e}");
            assert!(r2 < 1e-50, "c₂ routes differ: {r2:e}");
        }
    }

    #[test]
    fn general_amplitude_reduces_to_standard() {
        let m = BigReal::model(48);
        let z = Complex::of(&m, 0.45, 0.3);
        let p_std = Params::standard(m.lift(1.0), m.lift(40.0), z.clone()).unwrap();
        let p_gen = Params::general(
            Complex::zero_like(&m),
            Complex::one_like(&m),
            Complex::one_like(&m),
            m.lift(1.0),
            m.lift(40.0),
            z,
        )
        .unwrap();
        let (s1, _) = saddles(&p_std.z, &p_std.alpha).unwrap();
        let le_std = local_expansions(&s1, &p_std, 6).unwrap();
        // force the general path by a, b, c that only formally differ
        let le_gen = super::general_amplitude_taylor(&s1, &p_gen, 6).unwrap();
        for r in 0..=6 {
            let d = (le_std.beta_hat[r].clone() - le_gen[r].clone()).abs().to_f64();
            assert!(d < 1e-40, "β̂_{r} differs between routes: {d:e}");
        }
    }

    #[test]
    fn general_amplitude_value_matches_formula() {
        // a=1, b=2, c=1: f(t) = t(t−1)^{−2}(1−zt)^{−1}, so
        // β̂₀ = t_s (t_s−1)^{−2} (1−z t_s)^{−1}
        let p = Params::general(
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
            1.0f64,
            40.0,
            c(0.4, 0.25),
        )
        .unwrap();
        let (s1, _) = saddles(&p.z, &p.alpha).unwrap();
        let le = local_expansions(&s1, &p, 4).unwrap();
        let t = s1.t.clone();
        let want = t.clone()
            * (t.clone() - c(1.0, 0.0)).powi(-2)
            * (c(1.0, 0.0) - p.z.clone() * t).inv();
        assert!((le.beta_hat[0].clone() - want).abs() < 1e-12);
    }
}
