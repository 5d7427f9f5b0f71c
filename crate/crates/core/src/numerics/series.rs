//! Truncated power series with complex coefficients on an integer or
//! one-third exponent grid.
//!
//! A series tracks the highest exponent it is reliable to (`order`);
//! arithmetic never claims coefficients beyond what the operands supply.
//! Exact polynomials carry an `order` sentinel so products of closed-form
//! data stay exact.
//!
//! The one-third grid exists for the cube-root inversion at a double
//! saddle: [`ComplexSeries::revert_root`] inverts `u = Aτ³ + Bτ⁴ + …`
//! into `τ(w)` as a series in `w^{1/3}` with a caller-chosen cube-root
//! branch of `A`.

use std::ops::{Add, Mul, Neg, Sub};

use super::complex::Complex;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Order sentinel for exact (closed-form) polynomials.
pub const ORDER_EXACT: i32 = i32::MAX / 4;

#[derive(Clone, Debug)]
pub struct ComplexSeries<T: Scalar> {
    /// Exponent denominator: 1 or 3.
    den: u8,
    /// Lowest stored exponent, in units of 1/den.
    lead: i32,
    /// Coefficient k multiplies x^{(lead + k)/den}.
    coeffs: Vec<Complex<T>>,
    /// Highest reliable exponent (inclusive), in units of 1/den.
    order: i32,
}

impl<T: Scalar> ComplexSeries<T> {
    pub fn new(den: u8, lead: i32, coeffs: Vec<Complex<T>>, order: i32) -> Self {
        assert!(den == 1 || den == 3, "exponent grid must be 1 or 1/3");
        let mut s = ComplexSeries {
            den,
            lead,
            coeffs,
            order,
        };
        s.trim();
        s
    }

    /// Exact polynomial from coefficients starting at exponent `lead`.
    pub fn poly(den: u8, lead: i32, coeffs: Vec<Complex<T>>) -> Self {
        Self::new(den, lead, coeffs, ORDER_EXACT)
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::poly(1, 0, vec![c])
    }

    pub fn zero_like(model: &T) -> Self {
        Self::poly(1, 0, vec![Complex::zero_like(model)])
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn lead(&self) -> i32 {
        self.lead
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= ORDER_EXACT
    }

    fn model(&self) -> T {
        self.coeffs
            .first()
            .map(|c| c.re.clone())
            .unwrap_or_else(T::zero)
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.first() {
            if c.re.is_zero() && c.im.is_zero() && self.coeffs.len() > 1 {
                self.coeffs.remove(0);
                self.lead += 1;
            } else {
                break;
            }
        }
        let cap = (self.order.saturating_sub(self.lead).saturating_add(1)).max(0) as usize;
        if self.order < ORDER_EXACT && self.coeffs.len() > cap {
            self.coeffs.truncate(cap);
        }
    }

    /// Coefficient at exponent index `k` (units 1/den); zero outside the
    /// stored range. Asking beyond `order` is a caller bug in waiting,
    /// but returns zero for convenience in truncation-aware callers.
    pub fn coeff(&self, k: i32) -> Complex<T> {
        let m = self.model();
        if k < self.lead {
            return Complex::zero_like(&m);
        }
        let idx = (k - self.lead) as usize;
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Complex::zero_like(&m))
    }

    /// Reinterpret on the 1/3 grid (no-op if already there).
    pub fn to_third_grid(&self) -> Self {
        if self.den == 3 {
            return self.clone();
        }
        let m = self.model();
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * 3);
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone());
            if i + 1 < self.coeffs.len() {
                coeffs.push(Complex::zero_like(&m));
                coeffs.push(Complex::zero_like(&m));
            }
        }
        let order = if self.is_exact() {
            ORDER_EXACT
        } else {
            // exponent o/1 is reliable ⇒ everything through (3o+2)/3 is.
            self.order * 3 + 2
        };
        ComplexSeries::new(3, self.lead * 3, coeffs, order)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.den == b.den {
            (a.clone(), b.clone())
        } else {
            (a.to_third_grid(), b.to_third_grid())
        }
    }

    pub fn truncate(mut self, order: i32) -> Self {
        if order < self.order {
            self.order = order;
            self.trim();
        }
        self
    }

    pub fn scale(&self, k: &Complex<T>) -> Self {
        ComplexSeries {
            den: self.den,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
            order: self.order,
        }
    }

    /// Multiply by x^{m/den}.
    pub fn shift(mut self, m: i32) -> Self {
        self.lead += m;
        self.order = self.order.saturating_add(m).min(ORDER_EXACT);
        self
    }

    /// Formal derivative d/dx.
    pub fn derivative(&self) -> Self {
        let m = self.model();
        let den_t = m.lift_i(self.den as i64);
        let coeffs: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.lead + i as i32;
                c.scale(&(m.lift_i(k as i64) / den_t.clone()))
            })
            .collect();
        ComplexSeries::new(
            self.den,
            self.lead - self.den as i32,
            coeffs,
            if self.is_exact() {
                ORDER_EXACT
            } else {
                self.order - self.den as i32
            },
        )
    }

    /// Natural logarithm of a series with nonzero constant term.
    ///
    /// The constant term of the result is `ln c₀ + 2πi·branch`.
    pub fn log_with_branch(&self, branch: i32) -> Result<Self> {
        if self.lead > 0 || self.coeff(0).abs().is_zero() {
            return Err(Error::Numerical(
                "series log requires a nonzero constant term".into(),
            ));
        }
        if self.lead < 0 {
            return Err(Error::Numerical(
                "series log requires lead exponent 0".into(),
            ));
        }
        let m = self.model();
        let c0 = self.coeff(0);
        let n_max = if self.is_exact() {
            ((self.coeffs.len() as i32 - 1).max(0)) * 4 + 8
        } else {
            self.order
        };
        // h = self/c0 - 1, then n L_n = n h_n - Σ_{k=1}^{n-1} k L_k h_{n-k}.
        let h: Vec<Complex<T>> = (1..=n_max)
            .map(|k| self.coeff(k) / c0.clone())
            .collect();
        let mut l: Vec<Complex<T>> = Vec::with_capacity(n_max as usize + 1);
        let mut l0 = c0.ln();
        if branch != 0 {
            let two_pi = m.pi() * m.lift(2.0);
            l0 = l0 + Complex::new(m.lift(0.0), two_pi * m.lift_i(branch as i64));
        }
        l.push(l0);
        for n in 1..=n_max {
            let mut acc = h[(n - 1) as usize].scale(&m.lift_i(n as i64));
            for k in 1..n {
                let t = l[k as usize].clone() * h[(n - k - 1) as usize].clone();
                acc = acc - t.scale(&m.lift_i(k as i64));
            }
            l.push(acc.scale(&(m.lift(1.0) / m.lift_i(n as i64))));
        }
        Ok(ComplexSeries::new(
            self.den,
            0,
            l,
            if self.is_exact() { n_max } else { self.order },
        ))
    }

    pub fn log(&self) -> Result<Self> {
        self.log_with_branch(0)
    }

    /// Exponential of a series with no negative exponents.
    pub fn exp(&self) -> Result<Self> {
        if self.lead < 0 {
            return Err(Error::Numerical(
                "series exp requires no negative exponents".into(),
            ));
        }
        let m = self.model();
        let n_max = if self.is_exact() {
            ((self.coeffs.len() as i32 + self.lead - 1).max(0)) * 4 + 8
        } else {
            self.order
        };
        // b_0 = 1, n b_n = Σ_{k=1}^{n} k a_k b_{n-k}, then scale by e^{a_0}.
        let a: Vec<Complex<T>> = (1..=n_max).map(|k| self.coeff(k)).collect();
        let mut b: Vec<Complex<T>> = vec![Complex::one_like(&m)];
        for n in 1..=n_max {
            let mut acc = Complex::zero_like(&m);
            for k in 1..=n {
                let t = a[(k - 1) as usize].clone() * b[(n - k) as usize].clone();
                acc = acc + t.scale(&m.lift_i(k as i64));
            }
            b.push(acc.scale(&(m.lift(1.0) / m.lift_i(n as i64))));
        }
        let e0 = self.coeff(0).exp();
        let out = ComplexSeries::new(
            self.den,
            0,
            b,
            if self.is_exact() { n_max } else { self.order },
        );
        Ok(out.scale(&e0))
    }

    /// Principal power with complex exponent: exp(ν log self).
    pub fn pow_c(&self, nu: &Complex<T>) -> Result<Self> {
        let lg = self.log()?;
        lg.scale(nu).exp()
    }

    /// Substitute `inner` for the variable of `self` (an integer-grid
    /// series with no negative exponents). `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.den != 1 || self.lead < 0 {
            return Err(Error::Numerical(
                "composition outer must be an integer-grid series with lead ≥ 0".into(),
            ));
        }
        if inner.lead < 1 {
            return Err(Error::Numerical(
                "composition inner must vanish at the origin".into(),
            ));
        }
        let top = if self.is_exact() {
            self.lead + self.coeffs.len() as i32 - 1
        } else {
            self.order
        };
        let m = inner.model();
        let mut acc = ComplexSeries::poly(inner.den, 0, vec![self.coeff(top)]);
        let mut k = top;
        while k > 0 {
            k -= 1;
            acc = acc * inner.clone();
            acc = acc + ComplexSeries::poly(inner.den, 0, vec![self.coeff(k)]);
        }
        // Unknown outer tail enters at exponent (order+1)·inner.lead.
        let cap = if self.is_exact() {
            ORDER_EXACT
        } else {
            (self.order + 1).saturating_mul(inner.lead) - 1
        };
        let _ = m;
        Ok(acc.truncate(cap.min(ORDER_EXACT)))
    }

    /// Invert `u = A τ^p + B τ^{p+1} + …` (p = 3 only) into `τ(w)`, a
    /// series in w^{1/p}; `selector` picks the cube-root branch of `A`
    /// (`A^{1/3} · e^{2πi·selector/3}`).
    pub fn revert_root(&self, p: u32, selector: u8) -> Result<Self> {
        if p != 3 {
            return Err(Error::Numerical(format!(
                "root reversion supports only cubic leading order, got p = {p}"
            )));
        }
        if self.den != 1 {
            return Err(Error::Numerical(
                "root reversion input must live on the integer grid".into(),
            ));
        }
        for k in self.lead..3 {
            if !self.coeff(k).abs().is_zero() {
                return Err(Error::WrongSaddleOrder(format!(
                    "nonzero coefficient at exponent {k} below the cubic term"
                )));
            }
        }
        let a_lead = self.coeff(3);
        let m = self.model();
        if a_lead.abs() < m.lift(1e-300) {
            return Err(Error::WrongSaddleOrder(
                "vanishing cubic coefficient in root reversion".into(),
            ));
        }
        let n_out = if self.is_exact() {
            (self.coeffs.len() as i32 + self.lead) * 3
        } else {
            self.order - 2
        };
        if n_out < 1 {
            return Err(Error::Numerical(
                "series too short to invert past its cubic term".into(),
            ));
        }

        // u = A τ³ (1 + e(τ));  v(τ) := A^{1/3} τ (1+e)^{1/3} so v(τ)³ = u.
        let e_order = if self.is_exact() {
            n_out - 1
        } else {
            self.order - 3
        };
        let e_coeffs: Vec<Complex<T>> = (1..=e_order)
            .map(|r| self.coeff(3 + r) / a_lead.clone())
            .collect();
        let e = ComplexSeries::new(1, 1, e_coeffs, e_order);
        let third = Complex::real(m.lift(1.0) / m.lift(3.0));
        let g = (ComplexSeries::constant(Complex::one_like(&m)) + e).pow_c(&third)?;

        let a_cbrt = cbrt_branch(&a_lead, selector);
        // v_k as a dense vector over exponents 1..=n_out.
        let mut v: Vec<Complex<T>> = vec![Complex::zero_like(&m); n_out as usize + 1];
        for (k, slot) in v.iter_mut().enumerate().skip(1).take(n_out as usize) {
            *slot = g.coeff(k as i32 - 1) * a_cbrt.clone();
        }

        // Reversion of v(τ) = s: τ(s) = Σ t_n s^n.
        let mut t: Vec<Complex<T>> = vec![Complex::zero_like(&m); n_out as usize + 1];
        t[1] = v[1].inv();
        for n in 2..=n_out as usize {
            // coefficient of s^n in Σ_{k=2}^{n} v_k τ_partial(s)^k
            let mut pow: Vec<Complex<T>> = t[..=n].to_vec(); // τ^1
            let mut excess = Complex::zero_like(&m);
            for (k, vk) in v.iter().enumerate().take(n + 1).skip(2) {
                pow = poly_mul_trunc(&pow, &t[..=n], n);
                // pow now holds τ^k
                excess = excess + vk.clone() * pow[n].clone();
                if k == n {
                    break;
                }
            }
            t[n] = -(excess / v[1].clone());
        }

        Ok(ComplexSeries::new(
            3,
            1,
            t[1..].to_vec(),
            if self.is_exact() { n_out } else { n_out },
        ))
    }
}

/// Principal cube root rotated by e^{2πi·selector/3}.
pub fn cbrt_branch<T: Scalar>(a: &Complex<T>, selector: u8) -> Complex<T> {
    let m = &a.re;
    let third = m.lift(1.0) / m.lift(3.0);
    let r = a.abs().ln() * third.clone();
    let ang = a.arg() * third.clone()
        + m.pi() * m.lift(2.0) * m.lift_i(selector as i64 % 3) * third;
    Complex::new(r.clone().exp() * ang.cos(), r.exp() * ang.sin())
}

fn poly_mul_trunc<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], n_max: usize) -> Vec<Complex<T>> {
    let model = a
        .iter()
        .chain(b.iter())
        .next()
        .map(|c| c.re.clone())
        .unwrap_or_else(T::zero);
    let mut out = vec![Complex::zero_like(&model); n_max + 1];
    for (i, ai) in a.iter().enumerate() {
        if i > n_max || (ai.re.is_zero() && ai.im.is_zero()) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > n_max {
                break;
            }
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

impl<T: Scalar> Add for ComplexSeries<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = Self::aligned(&self, &rhs);
        let m = if a.coeffs.is_empty() { b.model() } else { a.model() };
        let lead = a.lead.min(b.lead);
        let order = a.order.min(b.order);
        let top_stored = (a.lead + a.coeffs.len() as i32 - 1)
            .max(b.lead + b.coeffs.len() as i32 - 1)
            .min(order);
        let mut coeffs = Vec::new();
        for k in lead..=top_stored {
            coeffs.push(a.coeff(k) + b.coeff(k));
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero_like(&m));
        }
        ComplexSeries::new(a.den, lead, coeffs, order)
    }
}

impl<T: Scalar> Sub for ComplexSeries<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for ComplexSeries<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexSeries {
            den: self.den,
            lead: self.lead,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl<T: Scalar> Mul for ComplexSeries<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = Self::aligned(&self, &rhs);
        let m = a.model();
        let order = (a.order.saturating_add(b.lead))
            .min(b.order.saturating_add(a.lead))
            .min(ORDER_EXACT);
        let lead = a.lead + b.lead;
        let top = if order >= ORDER_EXACT {
            a.lead + a.coeffs.len() as i32 - 1 + b.lead + b.coeffs.len() as i32 - 1
        } else {
            order
        };
        let mut coeffs = vec![Complex::zero_like(&m); (top - lead + 1).max(1) as usize];
        for (i, ai) in a.coeffs.iter().enumerate() {
            let ka = a.lead + i as i32;
            if ai.re.is_zero() && ai.im.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let k = ka + b.lead + j as i32;
                if k > top {
                    break;
                }
                let idx = (k - lead) as usize;
                coeffs[idx] = coeffs[idx].clone() + ai.clone() * bj.clone();
            }
        }
        ComplexSeries::new(a.den, lead, coeffs, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::BigReal;

    type S = ComplexSeries<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> S {
        S::poly(1, 0, coeffs.iter().map(|&x| c(x, 0.0)).collect())
    }

    #[test]
    fn mul_hand_expansions() {
        // (1+x)(1-x) = 1 - x²
        let p = poly(&[1.0, 1.0]) * poly(&[1.0, -1.0]);
        assert!((p.coeff(0) - c(1.0, 0.0)).abs() < 1e-15);
        assert!(p.coeff(1).abs() < 1e-15);
        assert!((p.coeff(2) - c(-1.0, 0.0)).abs() < 1e-15);

        // (1+2x+3x²)² = 1+4x+10x²+12x³+9x⁴
        let q = poly(&[1.0, 2.0, 3.0]);
        let q2 = q.clone() * q;
        for (k, want) in [1.0, 4.0, 10.0, 12.0, 9.0].iter().enumerate() {
            assert!(
                (q2.coeff(k as i32) - c(*want, 0.0)).abs() < 1e-14,
                "coeff {k}"
            );
        }
    }

    #[test]
    fn geometric_times_one_minus_x() {
        let n = 12;
        let geo = S::new(1, 0, vec![c(1.0, 0.0); n + 1], n as i32);
        let p = geo * poly(&[1.0, -1.0]);
        assert_eq!(p.order(), n as i32);
        assert!((p.coeff(0) - c(1.0, 0.0)).abs() < 1e-15);
        for k in 1..=n as i32 {
            assert!(p.coeff(k).abs() < 1e-15, "coeff {k} should vanish");
        }
    }

    #[test]
    fn truncation_respects_min_order() {
        let a = S::new(1, 0, vec![c(1.0, 0.0); 6], 5); // known through x^5
        let b = S::new(1, 1, vec![c(2.0, 0.0); 3], 3); // 2x+2x²+2x³, through x³
        let p = a * b;
        // b's unknown x⁴ tail meets a's constant term at x⁴
        assert_eq!(p.order(), 3); // min(5+1, 3+0)
    }

    #[test]
    fn log_is_mercator() {
        let one_plus_x = S::new(1, 0, vec![c(1.0, 0.0), c(1.0, 0.0)], 8);
        let l = one_plus_x.log().unwrap();
        for k in 1..=8 {
            let want = if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 };
            assert!(
                (l.coeff(k) - c(want, 0.0)).abs() < 1e-14,
                "log coeff {k}: {:?}",
                l.coeff(k)
            );
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let a = S::new(
            1,
            0,
            vec![c(0.7, -0.3), c(0.1, 0.2), c(-0.4, 0.05), c(0.0, -0.2)],
            6,
        );
        let back = a.log().unwrap().exp().unwrap();
        for k in 0..=6 {
            assert!(
                (back.coeff(k) - a.coeff(k)).abs() < 1e-13,
                "round trip coeff {k}"
            );
        }
        let fwd = a.exp().unwrap().log().unwrap();
        for k in 0..=6 {
            assert!((fwd.coeff(k) - a.coeff(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn log_of_constant() {
        let l = S::constant(c(std::f64::consts::E, 0.0)).log().unwrap();
        assert!((l.coeff(0) - c(1.0, 0.0)).abs() < 1e-14);
    }

    #[test]
    fn log_branch_shift() {
        let l0 = S::constant(c(2.0, 0.0)).log_with_branch(0).unwrap();
        let l1 = S::constant(c(2.0, 0.0)).log_with_branch(1).unwrap();
        let d = l1.coeff(0) - l0.coeff(0);
        assert!((d.im - 2.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn revert_pure_cube() {
        let u = S::poly(1, 3, vec![c(1.0, 0.0)]); // u = τ³
        let tau = u.revert_root(3, 0).unwrap();
        assert!((tau.coeff(1) - c(1.0, 0.0)).abs() < 1e-14);
        for k in 2..=6 {
            assert!(tau.coeff(k).abs() < 1e-14);
        }
    }

    #[test]
    fn revert_matches_closed_form() {
        // u = Aτ³+Bτ⁴+Cτ⁵+Dτ⁶ inverts to
        // τ = w^{1/3}/A^{1/3} - B w^{2/3}/(3A^{5/3}) + (B²-AC)w/(3A³)
        //     - w^{4/3}(35B³-63ABC+27A²D)/(81A^{13/3}) + O(w^{5/3}).
        let a = c(0.8, -0.45);
        let b = c(-0.3, 0.2);
        let cc = c(0.15, 0.7);
        let d = c(0.4, -0.1);
        let u = S::poly(1, 3, vec![a.clone(), b.clone(), cc.clone(), d.clone()]);
        let tau = u.revert_root(3, 0).unwrap();

        let a13 = cbrt_branch(&a, 0);
        let t1 = a13.inv();
        let t2 = -(b.clone() / (a13.powi(5).scale(&3.0)));
        let t3 = (b.clone() * b.clone() - a.clone() * cc.clone()) / a.powi(3).scale(&3.0);
        let t4 = -((b.clone() * b.clone() * b.clone()).scale(&35.0)
            - (a.clone() * b.clone() * cc.clone()).scale(&63.0)
            + (a.clone() * a.clone() * d.clone()).scale(&27.0))
            / a13.powi(13).scale(&81.0);

        assert!((tau.coeff(1) - t1).abs() < 1e-13, "w^{{1/3}} term");
        assert!((tau.coeff(2) - t2).abs() < 1e-13, "w^{{2/3}} term");
        assert!((tau.coeff(3) - t3).abs() < 1e-13, "w term");
        assert!((tau.coeff(4) - t4).abs() < 1e-13, "w^{{4/3}} term");
    }

    #[test]
    fn revert_composes_to_identity() {
        let m = BigReal::model(64);
        let u = ComplexSeries::<BigReal>::new(
            1,
            3,
            vec![
                Complex::of(&m, 0.3, 0.6),
                Complex::of(&m, -0.2, 0.1),
                Complex::of(&m, 0.05, -0.4),
                Complex::of(&m, 0.25, 0.0),
                Complex::of(&m, -0.1, -0.1),
            ],
            12,
        );
        let tau = u.revert_root(3, 0).unwrap();
        let composed = u.compose(&tau).unwrap();
        // u(τ(w)) = w to the available order
        assert!((composed.coeff(3) - Complex::one_like(&m)).abs().to_f64() < 1e-58);
        for k in 4..=composed.order() {
            assert!(
                composed.coeff(k).abs().to_f64() < 1e-55,
                "residual at w^{{{k}/3}}: {:?}",
                composed.coeff(k).abs().to_f64()
            );
        }
    }

    #[test]
    fn revert_rejects_bad_leading_term() {
        let u = S::poly(1, 2, vec![c(1.0, 0.0), c(1.0, 0.0)]); // τ² leading
        assert!(u.revert_root(3, 0).is_err());
        let v = S::poly(1, 3, vec![c(0.0, 0.0)]);
        assert!(v.revert_root(3, 0).is_err());
    }

    #[test]
    fn derivative_on_third_grid() {
        // d/dw (w^{1/3}) = (1/3) w^{-2/3}
        let s = ComplexSeries::<f64>::poly(3, 1, vec![c(1.0, 0.0)]);
        let d = s.derivative();
        assert_eq!(d.lead(), -2);
        assert!((d.coeff(-2) - c(1.0 / 3.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn mixed_grid_mul_coerces() {
        let a = S::poly(1, 0, vec![c(1.0, 0.0), c(2.0, 0.0)]); // 1 + 2x
        let b = ComplexSeries::<f64>::poly(3, 1, vec![c(1.0, 0.0)]); // x^{1/3}
        let p = a * b;
        assert_eq!(p.den(), 3);
        assert!((p.coeff(1) - c(1.0, 0.0)).abs() < 1e-15);
        assert!((p.coeff(4) - c(2.0, 0.0)).abs() < 1e-15);
    }
}
