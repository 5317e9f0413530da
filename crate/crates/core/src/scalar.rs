//! Arithmetic backends. Every algorithm in the crate is generic over
//! [`Scalar`], which is implemented for `f64` (float mode) and
//! [`Rational`] (exact mode).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar: Signed + PartialOrd + Clone + Debug + Display + Send + Sync + 'static {
    /// True for exact rational arithmetic.
    const EXACT: bool;

    /// Pivot threshold used by the simplex engine.
    fn pivot_eps() -> Self;

    /// Tolerance of the `f(0) = 0` anchor.
    fn anchor_tol() -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Exact conversion for every finite double.
    fn from_f64(x: f64) -> Self;

    fn from_i64(x: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn sqrt(&self) -> Option<Self>;

    fn sin(&self) -> Option<Self>;

    fn cos(&self) -> Option<Self>;

    /// Parses `p/q`, integers and decimals.
    fn parse(text: &str) -> Option<Self>;

    /// Serialized form: `p/q` in exact mode, shortest round-trip decimal otherwise.
    fn render(&self) -> String;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Equality up to `tol`, relative to the larger magnitude when it exceeds 1.
    /// Exact scalars ignore `tol`.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let a = self.to_f64();
        let b = other.to_f64();
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn pivot_eps() -> Self {
        1e-11
    }

    fn anchor_tol() -> Self {
        1e-12
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(x: i64) -> Self {
        x as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Option<Self> {
        Some(f64::sqrt(*self))
    }

    fn sin(&self) -> Option<Self> {
        Some(f64::sin(*self))
    }

    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }

    fn parse(text: &str) -> Option<Self> {
        parse_rational(text)
            .map(|r| Self::from_rational(&r))
            .or_else(|| text.trim().parse().ok())
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn pivot_eps() -> Self {
        Rational::zero()
    }

    fn anchor_tol() -> Self {
        Rational::zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).expect("finite double")
    }

    fn from_i64(x: i64) -> Self {
        Rational::from_integer(BigInt::from(x))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn sin(&self) -> Option<Self> {
        None
    }

    fn cos(&self) -> Option<Self> {
        None
    }

    fn parse(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Parses `p/q`, `-12`, `3.25`, `1e-3` style literals into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (
            &text[..i],
            text[i + 1..]
                .parse::<i32>()
                .ok()
                .filter(|e| e.abs() <= 4096)?,
        ),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all).ok()?);
    let ten = Rational::from_integer(BigInt::from(10));
    let shift = exponent - frac_part.len() as i32;
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if negative {
        value = -value;
    }
    Some(value)
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
