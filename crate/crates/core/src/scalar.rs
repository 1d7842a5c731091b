//! Field abstraction shared by the exact and floating-point code paths.
//!
//! Every geometric predicate in the crate is written once against [`Scalar`].
//! [`Rational`] gives exact answers; `f64` compares against an absolute
//! tolerance that callers thread through as `eps`.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Default absolute tolerance for floating-point predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Which number system a space is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float,
}

impl Display for Arithmetic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arithmetic::Rational => f.write_str("rational"),
            Arithmetic::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ARITHMETIC: Arithmetic;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion for rationals (every finite double is a dyadic rational).
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;

    /// Sign of `self`, treating `|self| <= eps` as zero in float mode.
    fn sign(&self, eps: f64) -> Ordering;

    fn abs(&self) -> Self;

    /// Square root when it is representable; rationals only succeed on perfect squares.
    fn sqrt(&self) -> Option<Self>;

    /// Rescale a nonzero ray to a canonical representative (primitive integer
    /// vector for rationals, unit max-norm for floats).
    fn normalize_ray(ray: &mut [Self]);

    fn parse(s: &str) -> Result<Self>;
    fn to_json(&self) -> serde_json::Value;

    fn is_zero_tol(&self, eps: f64) -> bool {
        self.sign(eps) == Ordering::Equal
    }
    fn is_nonneg(&self, eps: f64) -> bool {
        self.sign(eps) != Ordering::Less
    }
    fn is_pos(&self, eps: f64) -> bool {
        self.sign(eps) == Ordering::Greater
    }
    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self.clone() - other.clone()).is_zero_tol(eps)
    }
    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    const ARITHMETIC: Arithmetic = Arithmetic::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sign(&self, _eps: f64) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        let r = BigRational::new(n, d);
        (&r * &r == *self).then_some(r)
    }
    fn normalize_ray(ray: &mut [Self]) {
        use num::Integer;
        let mut lcm = BigInt::one();
        for x in ray.iter() {
            lcm = lcm.lcm(x.denom());
        }
        let mut gcd = BigInt::zero();
        for x in ray.iter() {
            let n = (x * BigRational::from_integer(lcm.clone())).to_integer();
            gcd = gcd.gcd(&n);
        }
        if gcd.is_zero() {
            return;
        }
        let scale = BigRational::new(lcm, gcd);
        for x in ray.iter_mut() {
            *x = &*x * &scale;
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(n, d))
        } else if let Ok(n) = s.parse::<BigInt>() {
            Ok(BigRational::from_integer(n))
        } else {
            parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad number '{s}'")))
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").trim_start_matches('+').parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(digits * num::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num::pow(ten, (-shift) as usize))
    })
}

impl Scalar for f64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sign(&self, eps: f64) -> Ordering {
        if f64::abs(*self) <= eps {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
    fn normalize_ray(ray: &mut [Self]) {
        let m = ray.iter().fold(0.0f64, |m, x| m.max(f64::abs(*x)));
        if m > 0.0 {
            for x in ray.iter_mut() {
                *x /= m;
            }
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
            Ok(n / d)
        } else {
            s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// Convert a JSON number or numeric string into a scalar.
pub fn scalar_from_json<S: Scalar>(v: &serde_json::Value) -> Result<S> {
    match v {
        serde_json::Value::String(s) => S::parse(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(S::from_int(i))
            } else {
                // Route through the decimal text so "0.1" stays 1/10 in exact mode.
                S::parse(&n.to_string())
            }
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn scale<S: Scalar>(v: &[S], c: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

/// Outer product flattened row-major: `(a ⊗ b)[i * b.len() + j] = a[i] * b[j]`.
pub fn kron<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y.clone());
        }
    }
    out
}

pub fn vec_approx_eq<S: Scalar>(a: &[S], b: &[S], eps: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, eps))
}

pub fn is_zero_vec<S: Scalar>(a: &[S], eps: f64) -> bool {
    a.iter().all(|x| x.is_zero_tol(eps))
}

/// Convert between number systems. Float to rational is exact on the binary value.
pub fn convert_vec<S: Scalar, T: Scalar>(v: &[S]) -> Result<Vec<T>> {
    v.iter()
        .map(|x| {
            if S::ARITHMETIC == T::ARITHMETIC {
                T::parse(&x.to_string())
            } else {
                T::from_f64(x.to_f64()).ok_or_else(|| Error::Parse(format!("cannot convert {x}")))
            }
        })
        .collect()
}

/// Parse shorthand such as `"1/2"` or `"3"` into a rational. Panics on bad input; test helper.
pub fn q(s: &str) -> Rational {
    Rational::parse(s).expect("valid rational literal")
}

/// Rational vector from integers.
pub fn qv(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| Rational::from_int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization_is_primitive() {
        let mut r = vec![q("1/2"), q("-3/4"), q("0")];
        Rational::normalize_ray(&mut r);
        assert_eq!(r, qv(&[2, -3, 0]));
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(q("9/4").sqrt(), Some(q("3/2")));
        assert_eq!(q("2").sqrt(), None);
        assert_eq!(q("-1").sqrt(), None);
    }

    #[test]
    fn float_sign_respects_tolerance() {
        assert_eq!(1e-12f64.sign(1e-9), Ordering::Equal);
        assert_eq!((-1e-6f64).sign(1e-9), Ordering::Less);
    }

    #[test]
    fn json_decimal_stays_exact() {
        let v: serde_json::Value = serde_json::from_str("0.1").unwrap();
        assert_eq!(scalar_from_json::<Rational>(&v).unwrap(), q("1/10"));
        let s = serde_json::Value::String("-5/10".into());
        assert_eq!(scalar_from_json::<Rational>(&s).unwrap(), q("-1/2"));
        assert_eq!(q("-1.25e-1"), q("-1/8"));
        assert_eq!(q("2.5E2"), q("250"));
        assert!(Rational::parse("1.2.3").is_err());
    }

    #[test]
    fn kron_layout_is_row_major() {
        assert_eq!(kron(&qv(&[1, 2]), &qv(&[3, 4, 5])), qv(&[3, 4, 5, 6, 8, 10]));
    }
}
