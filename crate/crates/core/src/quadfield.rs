//! Exact arithmetic in a real quadratic field Q(sqrt N).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("radicand {0} must be a positive non-square integer")]
    InvalidField(i128),
    #[error("values live in different fields: sqrt({0}) and sqrt({1})")]
    ContextMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// The number `p + q*sqrt(n)` with rational `p`, `q`.
///
/// `n` is a positive non-square integer shared by every value that takes
/// part in the same computation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    p: BigRational,
    q: BigRational,
    n: u64,
}

pub fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Split `n` as `s^2 * core` with `core` squarefree.
pub fn square_part(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut core = n;
    let mut f = 2u64;
    while f * f <= core {
        while core % (f * f) == 0 {
            core /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, core)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl QuadNum {
    /// `p + q*sqrt(n)`, rejecting radicands that do not define a real quadratic field.
    pub fn new(p: BigRational, q: BigRational, n: i128) -> Result<Self, FieldError> {
        if n <= 0 || n > u64::MAX as i128 || is_square(n as u64) {
            return Err(FieldError::InvalidField(n));
        }
        Ok(QuadNum { p, q, n: n as u64 })
    }

    pub(crate) fn raw(p: BigRational, q: BigRational, n: u64) -> Self {
        QuadNum { p, q, n }
    }

    pub fn from_rational(p: BigRational, n: u64) -> Self {
        QuadNum { p, q: BigRational::zero(), n }
    }

    pub fn from_int(v: i64, n: u64) -> Self {
        QuadNum::from_rational(BigRational::from_integer(v.into()), n)
    }

    pub fn from_bigint(v: BigInt, n: u64) -> Self {
        QuadNum::from_rational(BigRational::from_integer(v), n)
    }

    /// `sqrt(n)` itself.
    pub fn sqrt_of(n: u64) -> Self {
        QuadNum { p: BigRational::zero(), q: BigRational::one(), n }
    }

    pub fn zero_in(n: u64) -> Self {
        QuadNum::from_int(0, n)
    }

    pub fn one_in(n: u64) -> Self {
        QuadNum::from_int(1, n)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// The same number with a different rational constant.
    pub fn with_int(&self, v: i64) -> Self {
        QuadNum::from_int(v, self.n)
    }

    fn check(&self, other: &QuadNum) -> Result<(), FieldError> {
        if self.n != other.n {
            Err(FieldError::ContextMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &QuadNum) -> Result<QuadNum, FieldError> {
        self.check(other)?;
        Ok(QuadNum { p: &self.p + &other.p, q: &self.q + &other.q, n: self.n })
    }

    pub fn try_sub(&self, other: &QuadNum) -> Result<QuadNum, FieldError> {
        self.check(other)?;
        Ok(QuadNum { p: &self.p - &other.p, q: &self.q - &other.q, n: self.n })
    }

    pub fn try_mul(&self, other: &QuadNum) -> Result<QuadNum, FieldError> {
        self.check(other)?;
        let nn = BigRational::from_integer(self.n.into());
        let p = &self.p * &other.p + &self.q * &other.q * nn;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(QuadNum { p, q, n: self.n })
    }

    pub fn try_div(&self, other: &QuadNum) -> Result<QuadNum, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn arith(&self, other: &QuadNum, op: ArithOp) -> Result<QuadNum, FieldError> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
            ArithOp::Neg => Ok(-self),
        }
    }

    pub fn conjugate(&self) -> QuadNum {
        QuadNum { p: self.p.clone(), q: -&self.q, n: self.n }
    }

    /// `p^2 - n q^2`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.n.into())
    }

    pub fn inverse(&self) -> Result<QuadNum, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let nm = self.norm();
        Ok(QuadNum { p: &self.p / &nm, q: -(&self.q / &nm), n: self.n })
    }

    pub fn pow(&self, mut e: u32) -> QuadNum {
        let mut base = self.clone();
        let mut acc = self.with_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn square(&self) -> QuadNum {
        self * self
    }

    pub fn scale(&self, r: &BigRational) -> QuadNum {
        QuadNum { p: &self.p * r, q: &self.q * r, n: self.n }
    }

    /// Exact sign, by comparing `p^2` with `n q^2`.
    pub fn sign(&self) -> i32 {
        let sp = rsign(&self.p);
        let sq = rsign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // opposite signs: the larger magnitude wins, and p^2 = n q^2 is impossible
        if self.norm().is_positive() {
            sp
        } else {
            sq
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> QuadNum {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn min_of(self, other: QuadNum) -> QuadNum {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `(A + B sqrt n) / den` with integers and `den > 0`.
    fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let den = self.p.denom().lcm(self.q.denom());
        let a = self.p.numer() * (&den / self.p.denom());
        let b = self.q.numer() * (&den / self.q.denom());
        (a, b, den)
    }

    pub fn floor(&self) -> BigInt {
        let (a, b, den) = self.integer_form();
        let r = (&b * &b * BigInt::from(self.n)).sqrt();
        let approx = if b.is_negative() { &a - &r } else { &a + &r };
        let mut c = approx.div_floor(&den);
        // the bracket is off by at most one; settle it with exact signs
        while self.sub_int(&c).is_negative() {
            c -= 1;
        }
        while self.sub_int(&(&c + 1)).sign() >= 0 {
            c += 1;
        }
        c
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest integer, halves rounded up.
    pub fn round(&self) -> BigInt {
        let half = QuadNum::from_rational(rat(1, 2), self.n);
        (self + &half).floor()
    }

    fn sub_int(&self, c: &BigInt) -> QuadNum {
        QuadNum { p: &self.p - BigRational::from_integer(c.clone()), q: self.q.clone(), n: self.n }
    }

    /// Decimal expansion rounded to nearest at `digits` places after the point.
    pub fn decimal(&self, digits: u32) -> Decimal {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.scale(&BigRational::from_integer(scale));
        let f = scaled.round();
        let neg = f.is_negative();
        let mag = f.abs().to_string();
        let text = if digits == 0 {
            mag
        } else {
            let d = digits as usize;
            let padded = if mag.len() <= d { format!("{}{}", "0".repeat(d + 1 - mag.len()), mag) } else { mag };
            let (ip, fp) = padded.split_at(padded.len() - d);
            format!("{ip}.{fp}")
        };
        Decimal { text: if neg { format!("-{text}") } else { text }, digits }
    }

    pub fn to_f64(&self) -> f64 {
        self.decimal(24).text.parse().unwrap_or(f64::NAN)
    }

    pub fn json(&self, digits: u32) -> QuadJson<'_> {
        QuadJson { value: self, digits }
    }
}

fn rsign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A decimal string whose distance from the exact value is at most half a unit
/// in the last printed place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    pub text: String,
    pub digits: u32,
}

impl Decimal {
    pub fn error_bound(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2) * BigInt::from(10u32).pow(self.digits))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.p, self.q, self.n)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let qs = if self.q.is_one() {
            String::new()
        } else if (-&self.q).is_one() {
            "-".to_string()
        } else {
            format!("{}*", self.q)
        };
        if self.p.is_zero() {
            write!(f, "{qs}sqrt({})", self.n)
        } else if self.q.is_negative() {
            let qa = -&self.q;
            let qs = if qa.is_one() { String::new() } else { format!("{qa}*") };
            write!(f, "{} - {qs}sqrt({})", self.p, self.n)
        } else {
            write!(f, "{} + {qs}sqrt({})", self.p, self.n)
        }
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.n != other.n {
            return None;
        }
        Some((self - other).sign().cmp(&0))
    }
}

/// JSON view `{"p": "num/den", "q": "num/den", "N": n, "approx": "..."}`.
pub struct QuadJson<'a> {
    value: &'a QuadNum,
    digits: u32,
}

impl Serialize for QuadJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadNum", 4)?;
        st.serialize_field("N", &self.value.n)?;
        st.serialize_field("approx", &self.value.decimal(self.digits).text)?;
        st.serialize_field("p", &rational_string(&self.value.p))?;
        st.serialize_field("q", &rational_string(&self.value.q))?;
        st.end()
    }
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.json(30).serialize(s)
    }
}

// Operators panic when the two operands come from different fields; the
// fallible forms are `try_add` and friends.
macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                self.$m(&rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<i64> for &QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: i64) -> QuadNum {
                self.$m(&self.with_int(rhs))
            }
        }
        impl $tr<i64> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: i64) -> QuadNum {
                (&self).$m(&self.with_int(rhs))
            }
        }
        impl $tr<&QuadNum> for i64 {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                rhs.with_int(self).$m(rhs)
            }
        }
        impl $tr<QuadNum> for i64 {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                rhs.with_int(self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { p: -&self.p, q: -&self.q, n: self.n }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl ToPrimitive for QuadNum {
    fn to_i64(&self) -> Option<i64> {
        self.floor().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.floor().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(QuadNum::to_f64(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: (i64, i64), s: (i64, i64), n: i128) -> QuadNum {
        QuadNum::new(rat(p.0, p.1), rat(s.0, s.1), n).unwrap()
    }

    #[test]
    fn rejects_bad_radicands() {
        assert_eq!(QuadNum::new(rat(1, 1), rat(1, 1), 0), Err(FieldError::InvalidField(0)));
        assert_eq!(QuadNum::new(rat(1, 1), rat(1, 1), -3), Err(FieldError::InvalidField(-3)));
        assert_eq!(QuadNum::new(rat(1, 1), rat(1, 1), 49), Err(FieldError::InvalidField(49)));
    }

    #[test]
    fn canonical_form() {
        let x = q((2, 4), (0, 1), 5);
        assert_eq!(x.p(), &rat(1, 2));
        assert_eq!(q((3, -6), (1, 1), 5).p(), &rat(-1, 2));
    }

    #[test]
    fn product_from_four_eight() {
        // (4 - sqrt14)(2 - sqrt14/2) = 15 - 4 sqrt14
        let eta = q((4, 1), (-1, 1), 14);
        let beta = q((2, 1), (-1, 2), 14);
        assert_eq!(&eta * &beta, q((15, 1), (-4, 1), 14));
    }

    #[test]
    fn inverse_and_cancellation() {
        let x = q((3, 1), (1, 1), 5);
        assert_eq!(&x * &x.inverse().unwrap(), x.with_int(1));
        let y = q((5, 2), (-1, 2), 15);
        assert!((&y + &(-&y)).is_zero());
        assert_eq!(x.with_int(0).inverse(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let x = QuadNum::sqrt_of(2);
        let y = QuadNum::sqrt_of(3);
        assert_eq!(x.try_add(&y), Err(FieldError::ContextMismatch(2, 3)));
        assert_eq!(x.arith(&y, ArithOp::Div), Err(FieldError::ContextMismatch(2, 3)));
    }

    #[test]
    fn signs() {
        assert_eq!(QuadNum::zero_in(2).sign(), 0);
        assert_eq!(q((-3, 2), (1, 1), 2).sign(), -1);
        assert_eq!(q((15, 1), (-4, 1), 14).sign(), 1);
        assert_eq!(q((-15, 1), (4, 1), 14).sign(), -1);
        assert_eq!(q((0, 1), (-1, 3), 7).sign(), -1);
    }

    #[test]
    fn floors_and_ceilings() {
        let phi = q((1, 2), (1, 2), 5);
        assert_eq!(phi.floor(), BigInt::from(1));
        let x = q((5, 1), (-1, 1), 15).inverse().unwrap();
        assert_eq!(x.ceil(), BigInt::from(1));
        assert_eq!(q((0, 1), (-1, 1), 2).floor(), BigInt::from(-2));
        assert_eq!(q((7, 1), (0, 1), 2).floor(), BigInt::from(7));
        assert_eq!(q((7, 1), (0, 1), 2).ceil(), BigInt::from(7));
    }

    #[test]
    fn decimals() {
        assert_eq!(QuadNum::sqrt_of(2).decimal(5).text, "1.41421");
        assert_eq!(q((5, 2), (-1, 2), 15).decimal(5).text, "0.56351");
        assert_eq!(QuadNum::zero_in(5).decimal(5).text, "0.00000");
        assert_eq!(q((4, 1), (-1, 1), 14).decimal(6).text, "0.258343");
        assert_eq!((-QuadNum::sqrt_of(2)).decimal(3).text, "-1.414");
        assert_eq!(q((1, 1000), (0, 1), 2).decimal(2).text, "0.00");
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(q((4, 1), (-1, 1), 14).json(6)).unwrap();
        assert_eq!(v["p"], "4/1");
        assert_eq!(v["q"], "-1/1");
        assert_eq!(v["N"], 14);
        assert_eq!(v["approx"], "0.258343");
    }

    #[test]
    fn square_parts() {
        assert_eq!(square_part(8832), (8, 138));
        assert_eq!(square_part(3360), (4, 210));
        assert_eq!(square_part(15), (1, 15));
    }
}
