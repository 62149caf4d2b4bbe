//! Exact arithmetic over the rationals and the quadratic field Q(√2).
//!
//! Every coordinate in the crate is an [`ExactScalar`], a number `a + b·√2`
//! with arbitrary-precision rational `a` and `b`. Rationals are always kept in
//! lowest terms, so the representation is unique and structural equality is
//! numeric equality.
//!
//! [`RadicalExpr`] adds exactly one more square root on top of Q(√2). It is
//! only ever used to decide signs; it has no arithmetic of its own.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in canonical form.
pub type Rational = BigRational;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An element `a + b·√2` of Q(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
}

impl ExactScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        ExactScalar { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        ExactScalar { a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The number √2 itself.
    pub fn sqrt2() -> Self {
        ExactScalar { a: Rational::zero(), b: Rational::one() }
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the value lies in Q (no √2 component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the value as a rational if it has no √2 component.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        ExactScalar { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a² − 2b²` (the product with the conjugate).
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    /// Exact sign of `a + b·√2`.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Signs disagree: |a| vs |b|·√2 decides, compared by squaring.
            (Ordering::Greater, _) => self.field_norm().cmp(&Rational::zero()),
            (Ordering::Less, _) => Rational::zero().cmp(&self.field_norm()),
        }
    }

    pub fn signum(&self) -> i8 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = ExactScalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse, failing on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Self::from_rational(self.a.recip()));
        }
        let norm = self.field_norm();
        Ok(ExactScalar { a: &self.a / &norm, b: -(&self.b / &norm) })
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactScalar { a: &self.a * r, b: &self.b * r }
    }

    pub fn half(&self) -> Self {
        self.scale(&rational(1, 2))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`, for display and floating-point filters only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Upper bound on `|a| + √2·|b|` as an `f64`, used to size rounding errors.
    pub fn magnitude_bound(&self) -> f64 {
        let a = self.a.abs().to_f64().unwrap_or(f64::INFINITY);
        let b = self.b.abs().to_f64().unwrap_or(f64::INFINITY);
        (a + 1.5 * b) * (1.0 + 1e-12)
    }
}

impl From<Rational> for ExactScalar {
    fn from(a: Rational) -> Self {
        Self::from_rational(a)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        (self - other).sign()
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, true) => ExactScalar::from_rational(&self.a * &rhs.a),
            (true, false) => ExactScalar { a: &self.a * &rhs.a, b: &self.a * &rhs.b },
            (false, true) => ExactScalar { a: &self.a * &rhs.a, b: &self.b * &rhs.a },
            (false, false) => {
                let two = Rational::from_integer(BigInt::from(2));
                ExactScalar {
                    a: &self.a * &rhs.a + two * &self.b * &rhs.b,
                    b: &self.a * &rhs.b + &self.b * &rhs.a,
                }
            }
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; use [`ExactScalar::checked_div`] to handle it.
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("ExactScalar division by zero")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -&self.a, b: -&self.b }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a, b: -self.b }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed) exactly. Decimal literals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.a))?;
        if !self.b.is_zero() {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}*r2", format_rational(&self.b.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/q+r/s*r2` and `p/q-r/s*r2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*r2") else {
            return Ok(Self::from_rational(parse_rational(s)?));
        };
        // The separator is the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| Error::Parse(format!("invalid scalar `{s}`: missing rational part")))?;
        let a = parse_rational(&body[..split])?;
        let b = parse_rational(&body[split..])?;
        Ok(ExactScalar { a, b })
    }
}

/// The expression `u + v·√k` with `u, v, k` in Q(√2) and `k ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalExpr {
    pub u: ExactScalar,
    pub v: ExactScalar,
    pub k: ExactScalar,
}

impl RadicalExpr {
    pub fn new(u: ExactScalar, v: ExactScalar, k: ExactScalar) -> Self {
        RadicalExpr { u, v, k }
    }

    /// Exact sign of `u + v·√k`, with √k the nonnegative root.
    pub fn sign(&self) -> Result<Ordering> {
        let sk = self.k.sign();
        if sk == Ordering::Less {
            return Err(Error::NegativeRadicand(self.k.to_string()));
        }
        let su = self.u.sign();
        let sv = if sk == Ordering::Equal { Ordering::Equal } else { self.v.sign() };
        Ok(match (su, sv) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // u and v·√k have opposite signs; compare u² with v²·k.
            (Ordering::Greater, _) => (self.u.square() - self.v.square() * &self.k).sign(),
            (Ordering::Less, _) => (self.v.square() * &self.k - self.u.square()).sign(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> ExactScalar {
        text.parse().unwrap()
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(s("1+1*r2") * s("1-1*r2"), s("-1"));
    }

    #[test]
    fn sqrt2_squared() {
        assert_eq!(ExactScalar::sqrt2().square(), ExactScalar::from_int(2));
    }

    #[test]
    fn division_by_conjugate() {
        let q = s("3").checked_div(&s("1+1*r2")).unwrap();
        assert_eq!(q, s("-3+3*r2"));
        assert_eq!(q * s("1+1*r2"), s("3"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(s("1").checked_div(&s("0")), Err(Error::DivisionByZero)));
        assert!(ExactScalar::zero().inverse().is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(s("3-2*r2").sign(), Ordering::Greater);
        assert_eq!(s("-3+2*r2").sign(), Ordering::Less);
        assert_eq!(s("0").sign(), Ordering::Equal);
        assert_eq!(s("-1/2-1/3*r2").sign(), Ordering::Less);
        assert_eq!(s("0+1/1000*r2").sign(), Ordering::Greater);
    }

    #[test]
    fn radical_signs() {
        let r = |u: i64, v: i64, k: i64| {
            RadicalExpr::new(u.into(), v.into(), k.into()).sign().unwrap()
        };
        assert_eq!(r(1, -1, 2), Ordering::Less);
        assert_eq!(r(0, 0, 7), Ordering::Equal);
        assert_eq!(r(-2, 1, 5), Ordering::Greater);
        assert_eq!(r(-2, 1, 4), Ordering::Equal);
        assert_eq!(r(5, -3, 0), Ordering::Greater);
    }

    #[test]
    fn radical_with_quadratic_radicand() {
        // √(3 + 2√2) = 1 + √2, so 1 + √2 − √(3 + 2√2) = 0.
        let e = RadicalExpr::new(s("1+1*r2"), s("-1"), s("3+2*r2"));
        assert_eq!(e.sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn negative_radicand_is_an_error() {
        let e = RadicalExpr::new(s("0"), s("1"), s("-1"));
        assert!(matches!(e.sign(), Err(Error::NegativeRadicand(_))));
        let e = RadicalExpr::new(s("0"), s("1"), s("1-1*r2"));
        assert!(e.sign().is_err());
    }

    #[test]
    fn text_encoding() {
        for text in ["0", "-7", "1/2", "-3/4", "1/2+3/4*r2", "-1/2-3/4*r2", "0+1*r2", "5-2*r2"] {
            assert_eq!(s(text).to_string(), text);
        }
        assert_eq!(s("2/4").to_string(), "1/2");
        assert_eq!(s("+3").to_string(), "3");
        for bad in ["0.5", "1/0", "", "r2", "*r2", "1+*r2", "a/b", "1/2+x*r2", "1//2"] {
            assert!(bad.parse::<ExactScalar>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = s("1/3+1/2*r2");
        let mut acc = ExactScalar::one();
        for e in 0..7 {
            assert_eq!(x.pow(e), acc);
            acc = &acc * &x;
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| rational(p, q))
    }

    fn scalar() -> impl Strategy<Value = ExactScalar> {
        (small_rational(), small_rational()).prop_map(|(a, b)| ExactScalar::new(a, b))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in scalar(), y in scalar(), z in scalar()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn sign_is_multiplicative(x in scalar(), y in scalar()) {
            prop_assert_eq!(x.signum() * y.signum(), (&x * &y).signum());
        }

        #[test]
        fn division_inverts_multiplication(x in scalar(), y in scalar()) {
            prop_assume!(!y.is_zero());
            prop_assert_eq!(x.checked_div(&y).unwrap() * &y, x);
        }

        #[test]
        fn order_agrees_with_floats_when_far_apart(x in scalar(), y in scalar()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
            }
        }

        #[test]
        fn text_round_trip(x in scalar()) {
            let back: ExactScalar = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
