//! Scalar abstraction over the working arithmetic.
//!
//! Every algorithm in this crate is generic over [`Scalar`], so the same
//! code runs in native `f64` (region tracing, quick evaluation) and in
//! arbitrary-precision arithmetic ([`BigReal`], backed by `astro-float`)
//! where tables demand 10+ trustworthy decimal digits after heavy
//! cancellation.
//!
//! A [`BigReal`] carries its working precision inside the value; binary
//! operations resolve to the larger precision of the two operands.
//! Constants are stamped with the precision of an existing value via
//! [`Scalar::lift`], so generic code never needs a separate precision
//! context.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{One, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Real scalar type the library is generic over.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// A constant with the same working precision as `self`.
    ///
    /// The `f64` payload is converted exactly, so dyadic constants
    /// (integers, 0.5, 0.25, ...) lose nothing at any precision.
    fn lift(&self, v: f64) -> Self;

    /// Exact integer constant at the precision of `self`.
    fn lift_i(&self, n: i64) -> Self;

    /// Parse a decimal literal at the precision of `self`.
    fn parse_decimal(&self, s: &str) -> Self;

    /// π at the precision of `self`.
    fn pi(&self) -> Self;

    /// Nearest `f64` (used at output boundaries only).
    fn to_f64(&self) -> f64;

    /// Working precision in decimal digits (16 for `f64`).
    fn digits(&self) -> u32;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn is_finite(&self) -> bool;

    /// Four-quadrant arctangent with `self` as the ordinate.
    fn atan2(&self, x: &Self) -> Self;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl Scalar for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }
    fn lift_i(&self, n: i64) -> Self {
        n as f64
    }
    fn parse_decimal(&self, s: &str) -> Self {
        s.parse::<f64>().expect("decimal literal")
    }
    fn pi(&self) -> Self {
        std::f64::consts::PI
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn digits(&self) -> u32 {
        16
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
}

/// Arbitrary-precision real number.
///
/// The value remembers how many significant decimal digits it works at;
/// arithmetic between two values resolves to the larger of the two
/// precisions, so exact constants (precision 0) never degrade a result.
#[derive(Clone)]
pub struct BigReal {
    x: BigFloat,
    digits: u32,
}

fn bits_for(digits: u32) -> usize {
    // log2(10) < 3.33; a fixed guard absorbs rounding in long pipelines.
    (digits as usize * 10) / 3 + 32
}

impl BigReal {
    /// A value converted exactly from `v`, working at `digits` significant
    /// decimal digits.
    pub fn with_digits(v: f64, digits: u32) -> Self {
        BigReal {
            x: BigFloat::from_f64(v, bits_for(digits)),
            digits,
        }
    }

    /// Zero at the given working precision; useful as a precision model.
    pub fn model(digits: u32) -> Self {
        Self::with_digits(0.0, digits)
    }

    fn bits(&self) -> usize {
        bits_for(self.digits)
    }

    fn bin<F: FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat>(&self, rhs: &Self, f: F) -> Self {
        let digits = self.digits.max(rhs.digits);
        BigReal {
            x: f(&self.x, &rhs.x, bits_for(digits)),
            digits,
        }
    }

    fn map<F: FnOnce(&BigFloat, usize) -> BigFloat>(&self, f: F) -> Self {
        BigReal {
            x: f(&self.x, self.bits()),
            digits: self.digits,
        }
    }

    pub fn raw(&self) -> &BigFloat {
        &self.x
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}d", self.x, self.digits)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.x.partial_cmp(&other.x) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.partial_cmp(&other.x)
    }
}

impl Add for BigReal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.bin(&rhs, |a, b, p| a.add(b, p, RM))
    }
}

impl Sub for BigReal {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.bin(&rhs, |a, b, p| a.sub(b, p, RM))
    }
}

impl Mul for BigReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.bin(&rhs, |a, b, p| a.mul(b, p, RM))
    }
}

impl Div for BigReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.bin(&rhs, |a, b, p| a.div(b, p, RM))
    }
}

impl Neg for BigReal {
    type Output = Self;
    fn neg(self) -> Self {
        BigReal {
            x: self.x.neg(),
            digits: self.digits,
        }
    }
}

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal::with_digits(0.0, 0)
    }
    fn is_zero(&self) -> bool {
        self.x.is_zero()
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal::with_digits(1.0, 0)
    }
}

impl Scalar for BigReal {
    fn lift(&self, v: f64) -> Self {
        BigReal::with_digits(v, self.digits)
    }

    fn lift_i(&self, n: i64) -> Self {
        BigReal {
            x: BigFloat::from_i64(n, self.bits()),
            digits: self.digits,
        }
    }

    fn parse_decimal(&self, s: &str) -> Self {
        let bits = self.bits();
        BigReal {
            x: with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc)),
            digits: self.digits,
        }
    }

    fn pi(&self) -> Self {
        let bits = self.bits();
        BigReal {
            x: with_consts(|cc| cc.pi(bits, RM)),
            digits: self.digits,
        }
    }

    fn to_f64(&self) -> f64 {
        if self.x.is_nan() {
            return f64::NAN;
        }
        if self.x.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.x.is_zero() {
            return 0.0;
        }
        let Some((words, _n, sign, exp, _inexact)) = self.x.as_raw_parts() else {
            return f64::NAN;
        };
        if words.is_empty() {
            return 0.0;
        }
        // Normalized mantissa: value = 0.m * 2^exp, top bit of the last
        // word set. Two words give 128 bits, ample for f64.
        let top = words[words.len() - 1] as f64;
        let next = if words.len() >= 2 {
            words[words.len() - 2] as f64
        } else {
            0.0
        };
        let m = top + next * 2f64.powi(-64);
        let v = m * 2f64.powi(exp - 64);
        if sign.is_negative() {
            -v
        } else {
            v
        }
    }

    fn digits(&self) -> u32 {
        self.digits
    }

    fn abs(&self) -> Self {
        BigReal {
            x: self.x.abs(),
            digits: self.digits,
        }
    }

    fn sqrt(&self) -> Self {
        self.map(|x, p| x.sqrt(p, RM))
    }
    fn exp(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.exp(p, RM, cc)))
    }
    fn ln(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.ln(p, RM, cc)))
    }
    fn sin(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.sin(p, RM, cc)))
    }
    fn cos(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.cos(p, RM, cc)))
    }
    fn atan(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.atan(p, RM, cc)))
    }
    fn sinh(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.sinh(p, RM, cc)))
    }
    fn cosh(&self) -> Self {
        self.map(|x, p| with_consts(|cc| x.cosh(p, RM, cc)))
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return self.lift(1.0);
        }
        let pos = self.map(|x, p| x.powi(n.unsigned_abs() as usize, p, RM));
        if n > 0 {
            pos
        } else {
            self.lift(1.0) / pos
        }
    }

    fn is_finite(&self) -> bool {
        !self.x.is_nan() && !self.x.is_inf()
    }

    fn atan2(&self, x: &Self) -> Self {
        let zero = Self::zero();
        let pi = self.pi().max_digits(x);
        if x.x.is_zero() && self.x.is_zero() {
            return self.lift(0.0);
        }
        if x > &zero {
            return (self.clone() / x.clone()).atan();
        }
        if x < &zero {
            let base = (self.clone() / x.clone()).atan();
            if self >= &zero {
                base + pi
            } else {
                base - pi
            }
        } else {
            // x == 0, self != 0
            let half_pi = pi / self.lift(2.0);
            if self > &zero {
                half_pi
            } else {
                -half_pi
            }
        }
    }
}

impl BigReal {
    fn max_digits(self, other: &Self) -> Self {
        if other.digits > self.digits {
            BigReal {
                x: self.x,
                digits: other.digits,
            }
        } else {
            self
        }
    }
}
