//! Complex arithmetic over any [`Scalar`], plus the elementary functions
//! needed by the phase/saddle machinery (principal log, exp, sqrt, powers).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }

    /// Complex constant stamped with the precision of `model`.
    pub fn of(model: &T, re: f64, im: f64) -> Self {
        Complex {
            re: model.lift(re),
            im: model.lift(im),
        }
    }

    pub fn real(v: T) -> Self {
        let im = v.lift(0.0);
        Complex { re: v, im }
    }

    pub fn zero_like(model: &T) -> Self {
        Complex::of(model, 0.0, 0.0)
    }

    pub fn one_like(model: &T) -> Self {
        Complex::of(model, 1.0, 0.0)
    }

    pub fn i_like(model: &T) -> Self {
        Complex::of(model, 0.0, 1.0)
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        Complex {
            re: self.re.clone() * k.clone(),
            im: self.im.clone() * k.clone(),
        }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Complex {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in (-π, π].
    pub fn arg(&self) -> T {
        self.im.atan2(&self.re)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Complex {
            re: r.clone() * self.im.cos(),
            im: r * self.im.sin(),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let r = self.abs().sqrt();
        let half = self.re.lift(0.5);
        let a = self.arg() * half;
        Complex {
            re: r.clone() * a.cos(),
            im: r * a.sin(),
        }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Complex {
            re: self.re.clone() / n.clone(),
            im: -self.im.clone() / n,
        }
    }

    /// Integer power by repeated squaring (branch-free).
    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return Complex::one_like(&self.re);
        }
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one_like(&self.re);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Principal complex power `self^w = exp(w ln self)`.
    pub fn powc(&self, w: &Complex<T>) -> Self {
        (w.clone() * self.ln()).exp()
    }

    /// Principal real power.
    pub fn powf(&self, p: &T) -> Self {
        self.ln().scale(p).exp()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_c64(&self) -> Complex<f64> {
        Complex {
            re: self.re.to_f64(),
            im: self.im.to_f64(),
        }
    }
}

/// `r · e^{iθπ}` with the angle given in units of π, constructed at the
/// precision of `model` (so quarter-turn table geometry is exact).
pub fn polar_pi<T: Scalar>(model: &T, r: f64, theta_over_pi: f64) -> Complex<T> {
    let ang = model.pi() * model.lift(theta_over_pi);
    Complex {
        re: model.lift(r) * ang.cos(),
        im: model.lift(r) * ang.sin(),
    }
}

impl<T: Scalar> Add for Complex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Complex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: Scalar> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Complex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: Scalar> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Complex {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: Scalar> Div for Complex<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sqr();
        let num = self * rhs.conj();
        Complex {
            re: num.re / n.clone(),
            im: num.im / n,
        }
    }
}

impl<T: Scalar> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<T: Scalar> fmt::Debug for Complex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl<T: Scalar> fmt::Display for Complex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, self.im.clone().neg())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
