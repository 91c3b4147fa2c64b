//! Negative continued fractions and the period-two numbers `[0; a, b, a, b, ...]`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::quadfield::{rat, square_part, QuadNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcfError {
    #[error("need 2 <= a < b, got a={0}, b={1}")]
    Domain(i64, i64),
    #[error("rational input has no periodic expansion")]
    NonPeriodic,
    #[error("no period found within {0} terms")]
    Truncated(usize),
    #[error("partial quotient does not fit in 64 bits")]
    Overflow,
}

/// `eta = [0; a, b, a, b, ...]^-` together with `beta = [0; b, a, b, a, ...]^-` and
/// `D = eta * beta`, all exact in `Q(sqrt N)`.
///
/// `N` is the squarefree part of `ab(ab - 4)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTwoAlpha {
    a: i64,
    b: i64,
    eta: QuadNum,
    beta: QuadNum,
    d: QuadNum,
    n: u64,
}

pub fn make_alpha(a: i64, b: i64) -> Result<PeriodTwoAlpha, NcfError> {
    PeriodTwoAlpha::new(a, b)
}

impl PeriodTwoAlpha {
    pub fn new(a: i64, b: i64) -> Result<Self, NcfError> {
        if a < 2 || a >= b || b > 1 << 20 {
            return Err(NcfError::Domain(a, b));
        }
        let ab = a * b;
        let (s, n) = square_part((ab * (ab - 4)) as u64);
        let s = s as i64;
        // eta = (ab - s sqrt N) / 2a, beta = (ab - s sqrt N) / 2b
        let eta = QuadNum::raw(rat(ab, 2 * a), rat(-s, 2 * a), n);
        let beta = QuadNum::raw(rat(ab, 2 * b), rat(-s, 2 * b), n);
        let d = &eta * &beta;
        Ok(PeriodTwoAlpha { a, b, eta, beta, d, n })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn eta(&self) -> &QuadNum {
        &self.eta
    }

    pub fn beta(&self) -> &QuadNum {
        &self.beta
    }

    pub fn d(&self) -> &QuadNum {
        &self.d
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    /// `ab(ab - 4)` before removing square factors.
    pub fn natural_radicand(&self) -> u64 {
        let ab = (self.a * self.b) as u64;
        ab * (ab - 4)
    }

    /// Partial quotient at index `i`: `a` at odd indices, `b` at even ones.
    pub fn quotient(&self, i: i64) -> i64 {
        if i.rem_euclid(2) == 1 {
            self.a
        } else {
            self.b
        }
    }

    /// `beta` at odd indices, `eta` at even ones.
    pub fn alpha_at(&self, i: i64) -> &QuadNum {
        if i.rem_euclid(2) == 1 {
            &self.beta
        } else {
            &self.eta
        }
    }

    pub fn int(&self, v: i64) -> QuadNum {
        QuadNum::from_int(v, self.n)
    }

    pub fn frac(&self, num: i64, den: i64) -> QuadNum {
        QuadNum::from_rational(rat(num, den), self.n)
    }

    pub fn sqrt_n(&self) -> QuadNum {
        QuadNum::sqrt_of(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcfForm {
    /// `x = [0; d1, d2, ...]^- = 1/(d1 - 1/(d2 - ...))`, used for `0 < x < 1`.
    Fractional,
    /// `x = c - 1/(d1 - 1/(d2 - ...))` with `c = ceil(x)`.
    Subtractive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCf {
    pub form: NcfForm,
    pub integer_part: BigInt,
    pub preperiod: Vec<i64>,
    pub period: Vec<i64>,
}

pub const DEFAULT_MAX_TERMS: usize = 512;

/// Negative continued fraction of a quadratic irrational, with the period found
/// by exact repetition of the remainder.
pub fn ncf_expand(x: &QuadNum, max_terms: usize) -> Result<NegativeCf, NcfError> {
    if x.is_rational() {
        return Err(NcfError::NonPeriodic);
    }
    let zero = x.with_int(0);
    let one = x.with_int(1);
    let (form, integer_part, mut y) = if x > &zero && x < &one {
        (NcfForm::Fractional, BigInt::zero(), x.clone())
    } else {
        let c = x.ceil();
        let y = QuadNum::from_bigint(c.clone(), x.radicand()) - x;
        (NcfForm::Subtractive, c, y)
    };
    let mut seen: HashMap<QuadNum, usize> = HashMap::new();
    let mut digits = Vec::new();
    while digits.len() <= max_terms {
        if let Some(&start) = seen.get(&y) {
            let period = digits.split_off(start);
            return Ok(NegativeCf { form, integer_part, preperiod: digits, period });
        }
        seen.insert(y.clone(), digits.len());
        let inv = y.inverse().map_err(|_| NcfError::NonPeriodic)?;
        let d = inv.ceil();
        y = QuadNum::from_bigint(d.clone(), x.radicand()) - &inv;
        digits.push(d.to_i64().ok_or(NcfError::Overflow)?);
    }
    Err(NcfError::Truncated(max_terms))
}

impl NegativeCf {
    /// Rebuild the value from the expansion (exact, via the periodic fixed point).
    pub fn value(&self, n: u64) -> QuadNum {
        // the purely periodic tail y satisfies y = f(y); solve the quadratic
        // by running the Moebius map of one period
        let (mut p, mut q, mut r, mut s) =
            (BigRational::from_integer(1.into()), BigRational::zero(), BigRational::zero(), BigRational::from_integer(1.into()));
        // y = (p t + q)/(r t + s) where t is the tail after the digits processed so far
        let compose = |p: &mut BigRational, q: &mut BigRational, r: &mut BigRational, s: &mut BigRational, d: i64| {
            // y = 1/(d - t)  ->  matrix [[0,1],[-1,d]]
            let d = BigRational::from_integer(d.into());
            let (np, nq) = (-q.clone(), p.clone() + &*q * &d);
            let (nr, ns) = (-s.clone(), r.clone() + &*s * &d);
            *p = np;
            *q = nq;
            *r = nr;
            *s = ns;
        };
        for &d in &self.period {
            compose(&mut p, &mut q, &mut r, &mut s, d);
        }
        // t = (p t + q)/(r t + s): r t^2 + (s - p) t - q = 0, root in (0, 1)
        let a2 = r.clone();
        let a1 = &s - &p;
        let a0 = -q.clone();
        let disc = &a1 * &a1 - BigRational::from_integer(4.into()) * &a2 * &a0;
        let tail = quadratic_root_in_unit(&a2, &a1, &disc, n);
        let mut y = tail;
        for &d in self.preperiod.iter().rev() {
            y = (QuadNum::from_int(d, n) - &y).inverse().expect("nonzero");
        }
        match self.form {
            NcfForm::Fractional => y,
            NcfForm::Subtractive => QuadNum::from_bigint(self.integer_part.clone(), n) - &y,
        }
    }
}

fn quadratic_root_in_unit(a2: &BigRational, a1: &BigRational, disc: &BigRational, n: u64) -> QuadNum {
    // disc = c^2 n for a rational c; recover c
    let ratio = disc / BigRational::from_integer(n.into());
    let c = rational_sqrt(&ratio).expect("discriminant lies in the field");
    let two_a = a2 * BigRational::from_integer(2.into());
    let zero = QuadNum::zero_in(n);
    let one = QuadNum::one_in(n);
    for sgn in [1, -1] {
        let root = QuadNum::raw(-a1 / &two_a, &c * BigRational::from_integer(sgn.into()) / &two_a, n);
        if root > zero && root < one {
            return root;
        }
    }
    panic!("no root in (0,1)");
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let nu = r.numer().sqrt();
    let de = r.denom().sqrt();
    if &(&nu * &nu) == r.numer() && &(&de * &de) == r.denom() {
        Some(BigRational::new(nu, de))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_five_constants() {
        let al = make_alpha(2, 5).unwrap();
        assert_eq!(al.radicand(), 15);
        assert_eq!(al.eta(), &(al.frac(5, 2) - al.sqrt_n().scale(&rat(1, 2))));
        assert_eq!(al.beta(), &(al.int(1) - al.sqrt_n().scale(&rat(1, 5))));
        assert_eq!(al.d(), &(al.int(4) - al.sqrt_n()));
    }

    #[test]
    fn four_eight_constants() {
        let al = make_alpha(4, 8).unwrap();
        assert_eq!(al.radicand(), 14);
        assert_eq!(al.eta(), &(al.int(4) - al.sqrt_n()));
        assert_eq!(al.beta(), &(al.int(2) - al.sqrt_n().scale(&rat(1, 2))));
        assert_eq!(al.d(), &(al.int(15) - al.sqrt_n() * 4));
        assert_eq!(al.eta() * 4, al.int(16) - al.sqrt_n() * 4);
        assert_eq!(al.eta() * 4, al.d() + 1);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(make_alpha(1, 5), Err(NcfError::Domain(1, 5)));
        assert_eq!(make_alpha(5, 5), Err(NcfError::Domain(5, 5)));
        assert_eq!(make_alpha(6, 4), Err(NcfError::Domain(6, 4)));
    }

    #[test]
    fn sqrt_fourteen() {
        let cf = ncf_expand(&QuadNum::sqrt_of(14), DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(cf.form, NcfForm::Subtractive);
        assert_eq!(cf.integer_part, BigInt::from(4));
        assert!(cf.preperiod.is_empty());
        assert_eq!(cf.period, vec![4, 8]);
        assert_eq!(cf.value(14), QuadNum::sqrt_of(14));
    }

    #[test]
    fn golden_ratio_has_all_threes() {
        let phi = QuadNum::new(rat(1, 2), rat(1, 2), 5).unwrap();
        let cf = ncf_expand(&phi, DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(cf.integer_part, BigInt::from(2));
        assert_eq!(cf.period, vec![3]);
        assert_eq!(cf.value(5), phi);
    }

    #[test]
    fn eta_is_purely_periodic() {
        let al = make_alpha(2, 5).unwrap();
        let cf = ncf_expand(al.eta(), DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(cf.form, NcfForm::Fractional);
        assert!(cf.preperiod.is_empty());
        assert_eq!(cf.period, vec![2, 5]);
    }

    #[test]
    fn rational_input_rejected() {
        assert_eq!(ncf_expand(&QuadNum::from_int(3, 2), 10), Err(NcfError::NonPeriodic));
    }

    #[test]
    fn preperiod_is_reported() {
        // 1/(7 - eta) has preperiod (7) before the (a, b) cycle
        let al = make_alpha(3, 5).unwrap();
        let x = (al.int(7) - al.eta()).inverse().unwrap();
        let cf = ncf_expand(&x, DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(cf.preperiod, vec![7]);
        assert_eq!(cf.period, vec![3, 5]);
        assert_eq!(cf.value(al.radicand()), x);
    }
}
