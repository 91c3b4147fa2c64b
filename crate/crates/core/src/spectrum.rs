//! Named classes of periodic `gamma`, their closed-form values, and the ordered
//! list of spectrum values above the first limit point.

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use thiserror::Error;

use crate::expansion::{m_star, m_value, tseq_from_blocks, Block, BlockKind, ExpansionError, TSequence};
use crate::ncf::PeriodTwoAlpha;
use crate::quadfield::QuadNum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("(a,b)=(2,{0}) is not covered (b must be at least 5 when a=2)")]
    Excluded(i64),
    #[error("{0} does not apply to (a,b)=({1},{2})")]
    Inapplicable(String, i64, i64),
    #[error("{0} needs a k value")]
    MissingK(String),
    #[error("unknown class symbol {0:?}")]
    UnknownFamily(String),
    #[error("catalogue has fewer than two points")]
    InsufficientPoints,
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `a >= 4` even.
    EvenA,
    /// `a >= 3` odd.
    OddA,
    /// `a = 2`, `b >= 5`.
    Two,
}

pub fn regime(alpha: &PeriodTwoAlpha) -> Result<Regime, SpectrumError> {
    match alpha.a() {
        2 if alpha.b() < 5 => Err(SpectrumError::Excluded(alpha.b())),
        2 => Ok(Regime::Two),
        a if a % 2 == 0 => Ok(Regime::EvenA),
        _ => Ok(Regime::OddA),
    }
}

/// `b = m a + r` with `0 < r <= 2a`, `r` even, and the derived `n = m + 2`, `s = m - 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddParams {
    pub m: i64,
    pub r: i64,
    pub n: i64,
    pub s: i64,
    pub v: QuadNum,
}

pub fn odd_params(alpha: &PeriodTwoAlpha) -> OddParams {
    let (a, b) = (alpha.a(), alpha.b());
    let mut m = (b - 1) / a;
    let mut r = b - m * a;
    if r % 2 != 0 {
        m -= 1;
        r += a;
    }
    debug_assert!(r > 0 && r <= 2 * a && r % 2 == 0 && b == m * a + r);
    let d = alpha.d();
    let v = (alpha.beta() * m - d) / (1 - d);
    OddParams { m, r, n: m + 2, s: m - 2, v }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `S_0`
    Zero,
    /// `S_{-j}`
    Minus(u8),
    /// `S_k`, even `a` with odd `b`
    K,
    /// `S_{k,i}`
    KI(u8),
    /// `S_{0,t}`, `a = 2`
    ZeroT,
    /// `S_{2k}`, `a = 2`
    EvenK,
    /// `S_{2k+1}`, `a = 2`
    OddK,
}

impl Family {
    pub fn symbol(&self) -> String {
        match self {
            Family::Zero => "S0".into(),
            Family::Minus(j) => format!("S-{j}"),
            Family::K => "Sk".into(),
            Family::KI(i) => format!("Sk{i}"),
            Family::ZeroT => "S0t".into(),
            Family::EvenK => "S2k".into(),
            Family::OddK => "S2k+1".into(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::Zero => "S_0".into(),
            Family::Minus(j) => format!("S_{{-{j}}}"),
            Family::K => "S_k".into(),
            Family::KI(i) => format!("S_{{k,{i}}}"),
            Family::ZeroT => "S_{0,t}".into(),
            Family::EvenK => "S_{2k}".into(),
            Family::OddK => "S_{2k+1}".into(),
        }
    }

    pub fn has_k(&self) -> bool {
        matches!(self, Family::K | Family::KI(_) | Family::EvenK | Family::OddK)
    }
}

impl FromStr for Family {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Family, SpectrumError> {
        let bad = || SpectrumError::UnknownFamily(s.to_string());
        let s = s.trim();
        Ok(match s {
            "S0" => Family::Zero,
            "Sk" => Family::K,
            "S0t" => Family::ZeroT,
            "S2k" => Family::EvenK,
            "S2k+1" => Family::OddK,
            _ => {
                if let Some(j) = s.strip_prefix("S-") {
                    let j: u8 = j.parse().map_err(|_| bad())?;
                    if !(1..=9).contains(&j) {
                        return Err(bad());
                    }
                    Family::Minus(j)
                } else if let Some(i) = s.strip_prefix("Sk") {
                    let i: u8 = i.parse().map_err(|_| bad())?;
                    if !(1..=12).contains(&i) {
                        return Err(bad());
                    }
                    Family::KI(i)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub family: Family,
    pub k: Option<u32>,
    pub t: Option<i64>,
}

impl ClassId {
    pub fn single(family: Family) -> ClassId {
        ClassId { family, k: None, t: None }
    }

    pub fn member(family: Family, k: u32) -> ClassId {
        ClassId { family, k: Some(k), t: None }
    }

    pub fn zero_t(t: i64) -> ClassId {
        ClassId { family: Family::ZeroT, k: None, t: Some(t) }
    }

    /// Label with the parameter filled in, e.g. `S_{2,3}` or `S_{0,6}`.
    pub fn label(&self) -> String {
        let k = self.k.unwrap_or(0);
        match self.family {
            Family::K => format!("S_{k}"),
            Family::KI(i) => format!("S_{{{k},{i}}}"),
            Family::ZeroT => format!("S_{{0,{}}}", self.t.unwrap_or(0)),
            Family::EvenK => format!("S_{{{}}}", 2 * k),
            Family::OddK => format!("S_{{{}}}", 2 * k + 1),
            f => f.label(),
        }
    }

    fn k_or_err(&self) -> Result<u32, SpectrumError> {
        self.k.ok_or_else(|| SpectrumError::MissingK(self.family.label()))
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn inapplicable(cls: &ClassId, alpha: &PeriodTwoAlpha) -> SpectrumError {
    SpectrumError::Inapplicable(cls.label(), alpha.a(), alpha.b())
}

fn blk(kind: BlockKind, t: i64) -> Block {
    Block::new(kind, t)
}

fn repeat(v: &[Block], k: u32) -> Vec<Block> {
    let mut out = Vec::new();
    for _ in 0..k {
        out.extend_from_slice(v);
    }
    out
}

fn cat(parts: &[&[Block]]) -> Vec<Block> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

fn rep_t(v: &[i64], k: u32) -> Vec<i64> {
    (0..k).flat_map(|_| v.iter().copied()).collect()
}

enum Period {
    Blocks(Vec<Block>),
    Raw(Vec<i64>),
}

/// Block periods of a class: the first is canonical, the rest are the
/// alternative periods listed alongside it.
fn periods(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<Vec<Period>, SpectrumError> {
    use BlockKind::*;
    let (a, b) = (alpha.a(), alpha.b());
    let no = || Err(inapplicable(cls, alpha));
    let f = cls.family;
    let out = match regime(alpha)? {
        Regime::EvenA if b % 2 == 1 => {
            let (a1, a1p) = (blk(A, 1), blk(APrime, 1));
            match f {
                Family::Zero => vec![Period::Blocks(vec![a1p, a1])],
                Family::Minus(1) => vec![Period::Blocks(vec![a1, a1, a1p, a1p])],
                Family::Minus(2) => vec![Period::Blocks(vec![blk(C, 3)])],
                Family::K => {
                    let k = cls.k_or_err()?;
                    vec![Period::Blocks(cat(&[&[a1p, a1], &repeat(&[a1p, a1p, a1, a1], k)]))]
                }
                _ => return no(),
            }
        }
        Regime::EvenA => {
            let (a0, a2, a2p) = (blk(A, 0), blk(A, 2), blk(APrime, 2));
            let (c2, c4, c2p, c4p) = (blk(C, 2), blk(C, 4), blk(CPrime, 2), blk(CPrime, 4));
            match f {
                Family::Minus(1) => vec![Period::Blocks(vec![c2])],
                Family::Minus(2) if (a, b) == (4, 6) => vec![Period::Blocks(vec![a2, c2])],
                Family::KI(i) => {
                    let k = cls.k_or_err()?;
                    let ok = match i {
                        1 => true,
                        2 => b == 2 * a - 2 && a >= 8 && k >= 1,
                        3 => b == 2 * a - 4 && a >= 10 && k >= 1,
                        4 => k == 0 || (a + 6 <= b && b <= 2 * a - 6) || ((a, b) == (6, 10) && k == 1) || (b == 2 * a - 4 && a >= 10 && k == 1),
                        5 => k == 0 || b <= 2 * a - 6 || (a, b) == (6, 8) || (k == 1 && b == 2 * a - 4),
                        6 => (a, b) == (8, 12),
                        7 => (a, b) == (6, 10) && k >= 1,
                        _ => false,
                    };
                    if !ok {
                        return no();
                    }
                    let blocks = match i {
                        1 => cat(&[&[a0], &repeat(&[a2, a2p], k)]),
                        2 => cat(&[&[a2], &repeat(&[c4], k), &[c2, a2p], &repeat(&[c4p], k), &[c2p]]),
                        3 => cat(&[&[c4], &repeat(&[c2, c4], k)]),
                        4 => cat(&[&[c4], &repeat(&[c2], k)]),
                        5 => cat(&[&[a2], &repeat(&[c2], k), &[a2p], &repeat(&[c2p], k)]),
                        6 => cat(&[&repeat(&[a2p, c2p, a2, c2], k), &[a2p, c2p, c2p, a2, c2, c2]]),
                        _ => cat(&[&repeat(&[c4, c2], k), &[a2p, a2]]),
                    };
                    vec![Period::Blocks(blocks)]
                }
                _ => return no(),
            }
        }
        Regime::OddA => {
            let p = odd_params(alpha);
            let (m, r, n, s) = (p.m, p.r, p.n, p.s);
            let bb = |t| blk(B, t);
            let bp = |t| blk(BPrime, t);
            match f {
                Family::Zero => vec![Period::Blocks(vec![bb(m)])],
                Family::Minus(1) => vec![Period::Blocks(vec![bb(m), bb(n)])],
                Family::Minus(2) => vec![Period::Blocks(vec![bb(n)])],
                Family::Minus(3) => vec![Period::Blocks(vec![bb(n), bb(s)])],
                Family::Minus(4) => {
                    let u = if m == 1 { s } else { m };
                    vec![Period::Blocks(vec![bb(u), bp(u)])]
                }
                Family::Minus(5) if m == 1 && a >= 5 => vec![Period::Blocks(vec![blk(E, 3)])],
                Family::Minus(6) if b % 2 == 0 => {
                    vec![Period::Blocks(vec![blk(F, 2)])]
                }
                Family::Minus(7) if b % 2 == 1 => vec![Period::Blocks(vec![blk(F, 1)]), Period::Blocks(vec![blk(F, 3)])],
                Family::Minus(8) if (a, b) == (3, 4) => {
                    vec![Period::Blocks(vec![blk(F, 0), bb(0)]), Period::Blocks(vec![blk(F, 2), bp(2)])]
                }
                Family::Minus(9) if (a, b) == (3, 5) => {
                    let (g, h, hp) = (blk(G, 0), blk(H, 0), blk(HPrime, 0));
                    vec![Period::Blocks(vec![h, g, hp, g])]
                }
                Family::KI(i) => {
                    let k = cls.k_or_err()?;
                    let ok = match i {
                        1 => r >= a + 3,
                        2 => m == 0 && k >= 1 && r >= a + 3,
                        3 => r <= a + 1 && b >= 6 && k >= 1,
                        4 => b == a + 1 && b >= 6 && k >= 1,
                        5 => r <= a - 1,
                        6 => r == 2 && b >= 7 && k >= 1,
                        7 => b == 2 * a + 2 && k >= 1,
                        8 => b == a + 2 && b >= 7 && k >= 1,
                        9 => b == a + 2 && b >= 11,
                        10 => (a, b) == (3, 4),
                        11 => (a, b) == (3, 5),
                        12 => (a, b) == (3, 6),
                        _ => false,
                    };
                    if !ok {
                        return no();
                    }
                    match i {
                        1 => vec![Period::Blocks(cat(&[&repeat(&[bb(n)], k), &[bb(m)]]))],
                        2 => vec![Period::Blocks(cat(&[&repeat(&[bb(n)], k), &[bb(m)], &repeat(&[bp(n)], k), &[bp(m)]]))],
                        3 => vec![Period::Blocks(cat(&[&repeat(&[bb(m), bb(n)], k), &[bb(n)]]))],
                        4 => vec![Period::Blocks(cat(&[&repeat(&[bb(n), bb(m)], k), &repeat(&[bp(n), bp(m)], k)]))],
                        5 => vec![Period::Blocks(cat(&[&repeat(&[bb(m)], k), &[bb(n)]]))],
                        6 => vec![Period::Blocks(cat(&[&repeat(&[bb(n), bb(s)], k), &[bb(n)], &repeat(&[bb(m)], k)]))],
                        7 => vec![Period::Blocks(cat(&[&repeat(&[bb(n), bb(s)], k), &repeat(&[bp(n), bp(s)], k)]))],
                        8 => vec![Period::Blocks(cat(&[&repeat(&[bb(n), bb(s)], k), &[bp(m)]]))],
                        9 => vec![Period::Blocks(cat(&[&repeat(&[bb(m)], k), &[bp(n), blk(EPrime, 3), bp(s)]]))],
                        10 => {
                            let (f2, f0) = (blk(F, 2), blk(F, 0));
                            vec![
                                Period::Blocks(cat(&[&[f2], &repeat(&[f2, bp(2)], k)])),
                                Period::Blocks(cat(&[&[f2], &repeat(&[f0, bb(0)], k)])),
                            ]
                        }
                        11 => {
                            let (g, h, hp) = (blk(G, 0), blk(H, 0), blk(HPrime, 0));
                            vec![Period::Blocks(cat(&[&repeat(&[hp, g, h, g], k), &[h, g]]))]
                        }
                        _ => {
                            let (f2, f0) = (blk(F, 2), blk(F, 0));
                            vec![
                                Period::Blocks(cat(&[&[f2], &repeat(&[bp(2)], k + 1)])),
                                Period::Blocks(cat(&[&[f0], &repeat(&[bb(2)], k), &[bb(0)]])),
                            ]
                        }
                    }
                }
                _ => return no(),
            }
        }
        Regime::Two => {
            let k = cls.k;
            match (f, b % 2 == 0) {
                (Family::ZeroT, _) => {
                    let t = cls.t.ok_or_else(|| inapplicable(cls, alpha))?;
                    if t < 2 || t > b - 2 || (t - b) % 2 != 0 {
                        return no();
                    }
                    let mut v = vec![Period::Raw(vec![a, -t])];
                    if t != 2 {
                        v.push(Period::Raw(vec![a, t - 4]));
                    }
                    v
                }
                (Family::Minus(1), true) => vec![Period::Raw(vec![0, 0])],
                (Family::EvenK, true) => {
                    let k = k.ok_or_else(|| SpectrumError::MissingK(f.label()))?;
                    if k < 1 {
                        return no();
                    }
                    vec![
                        Period::Raw([vec![a, -4], rep_t(&[a, -2], k)].concat()),
                        Period::Raw([vec![a, 0], rep_t(&[a, -2], k)].concat()),
                    ]
                }
                (Family::OddK, true) => {
                    let k = k.ok_or_else(|| SpectrumError::MissingK(f.label()))?;
                    vec![
                        Period::Raw([vec![a, -2, 0, 0], rep_t(&[a, -2], k)].concat()),
                        Period::Raw([vec![a, 0, 0, -2], rep_t(&[a, -2], k)].concat()),
                    ]
                }
                (Family::Minus(2), false) => vec![Period::Raw(vec![a, -3, a, -1])],
                (Family::Minus(1), false) => vec![
                    Period::Raw(vec![a, -1, a, -3, a, -1, a, -1]),
                    Period::Raw(vec![a, -3, a, -1, a, -3, a, -3]),
                ],
                (Family::EvenK, false) => {
                    let k = k.ok_or_else(|| SpectrumError::MissingK(f.label()))?;
                    if k < 1 {
                        return no();
                    }
                    vec![
                        Period::Raw([vec![a, -1], rep_t(&[a, -3, a, -1], k)].concat()),
                        Period::Raw([vec![a, -3], rep_t(&[a, -1, a, -3], k)].concat()),
                    ]
                }
                (Family::OddK, false) => {
                    let k = k.ok_or_else(|| SpectrumError::MissingK(f.label()))?;
                    vec![
                        Period::Raw([vec![a, -1, 0, -1], rep_t(&[a, -3, a, -1], k)].concat()),
                        Period::Raw([vec![a, -1, 0, -1], rep_t(&[a, -1, a, -3], k)].concat()),
                    ]
                }
                _ => return no(),
            }
        }
    };
    if f.has_k() && cls.k.is_none() {
        return Err(SpectrumError::MissingK(f.label()));
    }
    Ok(out)
}

fn to_tseq(p: Period, alpha: &PeriodTwoAlpha) -> Result<TSequence, SpectrumError> {
    let s = match p {
        Period::Blocks(bs) => tseq_from_blocks(&bs, alpha)?,
        Period::Raw(ts) => TSequence::periodic(ts)?,
    };
    s.validate(alpha)?;
    Ok(s)
}

/// The canonical periodic t-sequence of a class.
pub fn class_tsequence(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<TSequence, SpectrumError> {
    let first = periods(cls, alpha)?.into_iter().next().expect("at least one period");
    to_tseq(first, alpha)
}

/// Every period listed for the class (canonical first).
pub fn class_tsequences(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<Vec<TSequence>, SpectrumError> {
    periods(cls, alpha)?.into_iter().map(|p| to_tseq(p, alpha)).collect()
}

/// Shorthand for the exact constants used by the closed forms.
struct Ctx<'a> {
    al: &'a PeriodTwoAlpha,
    e: QuadNum,
    bt: QuadNum,
    d: QuadNum,
}

impl<'a> Ctx<'a> {
    fn new(al: &'a PeriodTwoAlpha) -> Self {
        Ctx { al, e: al.eta().clone(), bt: al.beta().clone(), d: al.d().clone() }
    }

    fn x(&self, v: i64) -> QuadNum {
        self.al.int(v)
    }

    fn dp(&self, e: u32) -> QuadNum {
        self.d.pow(e)
    }

    /// `D^(mult*k + add)`, which vanishes in the limit `k -> infinity`.
    fn dk(&self, k: Option<u32>, mult: u32, add: u32) -> QuadNum {
        match k {
            Some(k) => self.d.pow(mult * k + add),
            None => self.x(0),
        }
    }
}

fn sq(x: QuadNum) -> QuadNum {
    x.square()
}

/// Closed-form value of a `k`-family, with `k = None` giving the limit.
fn family_formula(fam: Family, k: Option<u32>, al: &PeriodTwoAlpha) -> Result<QuadNum, SpectrumError> {
    let c = Ctx::new(al);
    let (e, bt, d) = (&c.e, &c.bt, &c.d);
    let (a, b) = (al.a(), al.b());
    let v = match (regime(al)?, fam) {
        (Regime::EvenA, Family::K) => {
            let w = c.dk(k, 4, 1) * 2 * (1 - d) / ((1 + c.dp(2)) * (1 - c.dk(k, 4, 2)));
            (1 - bt - bt * (1 - d) * (1 + c.dp(2) * 2) / (1 + c.dp(2)) - bt * c.dp(3) * &w)
                * (1 - e - d * (1 - d) / (1 + c.dp(2)) + &w)
        }
        (Regime::EvenA, Family::KI(1)) => {
            let w = c.dk(k, 2, 0) * (1 - d) / (1 - c.dk(k, 2, 1));
            (1 - e + c.dp(2) * 2 / (1 + d) * (1 - &w)) * (1 - bt - bt * 2 / (1 + d) * (1 - &w))
        }
        (Regime::EvenA, Family::KI(2)) => {
            let w = c.dk(k, 1, 1) * 2 * (1 + d) * (1 - e + d) / ((1 - d) * (1 + c.dk(k, 1, 2)));
            (1 - e * 3 + d * 2 * (2 - e) / (1 - d) - &w)
                * (1 + bt - bt * d * 2 / (1 - d) * (1 - e + d) + bt * d * &w)
        }
        (Regime::EvenA, Family::KI(3)) => {
            let w = c.dk(k, 2, 1) * 2 / ((1 + d) * (1 - c.dk(k, 2, 1)));
            (1 - e - e * d * 2 / (1 - d) + d * 2 / (1 - c.dp(2)) * (1 + d * 2) + &w)
                * (1 - bt * 3 + d * 2 / (1 - d) - bt * d * 2 / (1 - c.dp(2)) * (2 + d) - bt * d * &w)
        }
        (Regime::EvenA, Family::KI(4)) => {
            let w = c.dk(k, 1, 1) * 2 / (1 - c.dk(k, 1, 1));
            (1 - e + d * 2 * (1 - e) / (1 - d) + &w) * (1 - bt * 3 + d * 2 * (1 - bt) / (1 - d) - bt * &w)
        }
        (Regime::EvenA, Family::KI(5)) => {
            let w = c.dk(k, 1, 1) * 2 * (1 - bt * 2 + d) / ((1 - d) * (1 + c.dk(k, 1, 1)));
            (1 - e + d * 2 * (1 - e) / (1 - d) + e * &w) * (1 - bt * 3 + d * 2 * (1 - bt) / (1 - d) - &w)
        }
        (Regime::EvenA, Family::KI(6)) => {
            let w = c.dk(k, 4, 4) * 2 * (1 - bt * 2 + d) * (1 - c.dp(3)) / ((1 + c.dp(2)) * (1 - c.dk(k, 4, 6)));
            (1 - e * 3 + d * 2 - c.dp(2) * 2 + e * c.dp(2) * 2 - c.dp(3) * 2 * (1 - e + d) / (1 + c.dp(2)) - e * c.dp(2) * &w)
                * (1 + bt - d * 2 * (1 - bt + bt * d) / (1 + c.dp(2)) + &w)
        }
        (Regime::EvenA, Family::KI(7)) => {
            let w = c.dk(k, 2, 0) * 2 * (1 - bt * 3 + d) / (1 - c.dk(k, 2, 2));
            (1 + e - d * 2 + c.dp(2) * 2 + e * c.dp(3) * 2 / (1 - d) - c.dp(3) * 2 * (1 + d * 2) / (1 - c.dp(2)) - e * c.dp(3) * 2 * &w)
                * (1 - bt * 5 + d * 2 / (1 - d) - bt * d * 2 * (1 + d * 2) / (1 - c.dp(2)) - &w)
        }
        (Regime::OddA, Family::KI(i)) => {
            let p = odd_params(al);
            let vv = &p.v;
            match i {
                1 => {
                    let t = c.dk(k, 1, 1) * 2 / (1 - c.dk(k, 1, 1));
                    (1 - e * 2 + e * vv + d * 2 / (1 - d) - &t) * (1 - bt + vv + bt * d * 2 / (1 - d) - bt * &t)
                }
                2 => {
                    let eps = c.dk(k, 1, 0) * 2 * (bt * (1 + d) - d) / ((1 - d) * (1 + c.dk(k, 1, 1)));
                    (1 - e * 2 + d * (2 - e) / (1 - d) - e * &eps) * (1 - bt + d * (1 - bt * 2) / (1 - d) + d * &eps)
                }
                3 => {
                    let eps = bt * c.dk(k, 2, 1) * 2 / ((1 + d) * (1 - c.dk(k, 2, 1)));
                    (1 - e * vv - d * 2 / (1 - c.dp(2)) - e * &eps)
                        * (1 - bt * 3 - vv - bt * c.dp(2) * 2 / (1 - c.dp(2)) - &eps)
                }
                4 => {
                    let eps = c.dk(k, 2, 0) * 2 * (1 - al.frac(2, b)) / ((1 - d) * (1 + c.dk(k, 2, 0)));
                    (1 - e * d / (1 - d) + c.dp(2) * 2 / (1 - c.dp(2)) + e * d * &eps)
                        * (1 - bt * 3 + d / (1 - d) - bt * c.dp(2) * 2 / (1 - c.dp(2)) - &eps)
                }
                5 => {
                    let t = c.dk(k, 1, 1) * 2 / (1 - c.dk(k, 1, 1));
                    (1 - e * vv - &t) * (1 - bt * 3 - vv - bt * &t)
                }
                6 => {
                    let den = (1 + d) * (1 - c.dk(k, 3, 1));
                    let t1 = c.dk(k, 1, 1) * 2 * (1 + c.dk(k, 2, 1)) / &den;
                    let t2 = bt * c.dk(k, 2, 1) * 2 * (1 + c.dk(k, 1, 0)) / &den;
                    (1 - e * vv - t1) * (1 - bt * 3 - vv + d * 2 / c.x(b) - t2)
                }
                7 => {
                    let eps = c.dk(k, 2, 0) * 2 * (1 - al.frac(4, b)) / ((1 - d) * (1 + c.dk(k, 2, 0)));
                    (1 - e * d / (1 - d) + c.dp(2) * 4 / (1 - c.dp(2)) + e * d * &eps)
                        * (1 - bt + d / (1 - d) - bt * 4 / (1 - c.dp(2)) - &eps)
                }
                8 => {
                    let eps = c.dk(k, 2, 0) * 2 * (1 - al.frac(2, b)) / (1 - c.dk(k, 2, 1));
                    (1 + d * (1 + d - c.dp(2) * 4) / (1 - c.dp(2)) - e * d * (1 - d * 2) / (1 - d) - e * c.dp(2) * &eps)
                        * (1 - bt * 4 + d / (1 - d) + bt * d * (1 - d * 3) / (1 - c.dp(2)) - &eps)
                }
                9 => {
                    let eps = c.dk(k, 1, 1) * 2 / (1 - c.dk(k, 1, 3)) * (1 - bt * 2 + d * 2 - bt * d * 2 + c.dp(2));
                    (1 - e * 2 + d * 3 - e * d * 3 + c.dp(2) * 3 - e * c.dp(2) - e * c.dp(2) * (bt - d) / (1 - d) - e * c.dp(2) * &eps)
                        * (1 - bt * 2 + d * (1 - bt) / (1 - d) - &eps)
                }
                10 => {
                    let eps = bt * c.dk(k, 2, 0) * (1 - e + d) / ((1 + d) * (1 - c.dk(k, 2, 1)));
                    let base = bt * (1 - e + d) / (1 - c.dp(2));
                    e * (1 - &base + &eps) * (1 + d * &base - d * &eps)
                }
                11 => {
                    let eps = c.dk(k, 8, 0) * 2 / (1 - c.dk(k, 8, 4));
                    let xx = c.dp(3) * (1 - bt * 2 - bt * d * 2 + c.dp(2)) / (1 + c.dp(4));
                    e * (1 - bt * 2 + d - &xx * (1 - &eps)) * (1 + bt * 2 - d - &xx * (1 + c.dp(4) * &eps))
                }
                12 => {
                    let ratio = (1 - c.dk(k, 1, 1)) / (1 - c.dk(k, 1, 2));
                    e * (1 - sq(bt * (1 - e + d) * ratio / (1 - d)))
                }
                _ => return Err(SpectrumError::Inapplicable(fam.label(), a, b)),
            }
        }
        (Regime::Two, Family::EvenK) if b % 2 == 0 => {
            let den = 1 - c.dk(k, 1, 1);
            e * (1 - bt * 2 - bt * c.dk(k, 1, 1) * 2 / &den) * (1 + bt * 2 * c.dk(k, 1, 0) / &den)
        }
        (Regime::Two, Family::OddK) if b % 2 == 0 => {
            let ratio = (1 - c.dk(k, 1, 1)) / (1 - c.dk(k, 1, 2));
            e * (sq(1 - bt) - bt.square() * sq(ratio))
        }
        (Regime::Two, Family::EvenK) => {
            let den = (1 + d) * (1 - c.dk(k, 2, 1));
            let lead = bt * c.dk(k, 2, 0) * 2 / &den;
            e * (1 - bt - bt.square() / 2 - bt * c.dk(k, 2, 2) * 2 / &den) * (1 - bt + bt.square() / 2 + lead)
        }
        (Regime::Two, Family::OddK) => {
            let ratio = (1 - c.dk(k, 2, 0)) / (1 - c.dk(k, 2, 2));
            e * (sq(1 - bt) - bt.pow(4) / 4 * sq(ratio))
        }
        _ => return Err(SpectrumError::Inapplicable(fam.label(), a, b)),
    };
    Ok(v)
}

/// Closed-form value of a single class.
pub fn delta_closed_form(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<QuadNum, SpectrumError> {
    // shares the applicability rules with the period constructors
    periods(cls, alpha)?;
    let c = Ctx::new(alpha);
    let (e, bt, d) = (&c.e, &c.bt, &c.d);
    let (a, b) = (alpha.a(), alpha.b());
    let f = cls.family;
    let v = match regime(alpha)? {
        Regime::EvenA if b % 2 == 1 => match f {
            Family::Zero => (1 - bt - alpha.frac(1, b)) * (1 - e + e / c.x(b)),
            Family::Minus(1) => {
                let q = 1 + c.dp(2);
                (1 - bt - bt * (1 - d) / &q) * (1 - e - d * (1 - d) / &q)
            }
            Family::Minus(2) => {
                let x = (bt * 3 - d * 2) / (1 - d);
                let y = (e * 2 - d * 3) / (1 - d);
                // 3a/2 compared through 2b against 3a
                if b >= 2 * a - 5 && 2 * b >= 3 * a {
                    (1 - bt + x) * (1 - e - y)
                } else if b <= a + 5 && 2 * b <= 3 * a {
                    (1 - bt - x) * (1 - e + y)
                } else {
                    (1 + bt - x) * (1 + e - y)
                }
            }
            _ => family_formula(f, cls.k, alpha)?,
        },
        Regime::EvenA => match (f, cls.k) {
            (Family::Minus(1), _) => (1 - e * 3 + d * 2 * (1 - e) / (1 - d)) * (1 - bt + bt * 2 * (1 - e) / (1 - d)),
            (Family::Minus(2), _) => {
                let q2 = 1 - c.dp(2);
                (1 - e - d * 2 / (1 - d) + e * d * 2 / &q2) * (1 - bt * 3 - bt * d * 2 / (1 - d) + d * 2 / &q2)
            }
            (Family::KI(4), Some(0)) => {
                if b >= 3 * a - 6 && b >= 2 * a {
                    (1 + bt * 3 - d * 2 * (1 - bt * 2) / (1 - d)) * (1 - e * 3 + d * 2 * (2 - e) / (1 - d))
                } else if b <= a + 6 && b <= 2 * a - 2 {
                    (1 - bt * 5 + d * 2 * (1 - bt * 2) / (1 - d)) * (1 + e - d * 2 * (2 - e) / (1 - d))
                } else {
                    (1 - bt * 3 + d * 2 * (1 - bt * 2) / (1 - d)) * (1 - e + d * 2 * (2 - e) / (1 - d))
                }
            }
            (Family::KI(4), Some(1)) if (a, b) == (6, 10) => {
                // stated directly as 703/40 - (703/600) sqrt(210)
                alpha.frac(703, 40) - alpha.sqrt_n().scale(&crate::quadfield::rat(703, 600))
            }
            (Family::KI(4), Some(_)) if !(a + 6 <= b && b <= 2 * a - 6) => {
                return Err(SpectrumError::Inapplicable(format!("closed form for {}", cls.label()), a, b));
            }
            _ => family_formula(f, cls.k, alpha)?,
        },
        Regime::OddA => {
            let p = odd_params(alpha);
            let (m, r) = (p.m, p.r);
            let vv = &p.v;
            match f {
                Family::Zero => (1 - e * 2 + e * vv) * (1 - bt + vv),
                Family::Minus(1) => {
                    let q2 = 1 - c.dp(2);
                    if r <= a + 1 {
                        (1 - e * vv - c.dp(2) * 2 / &q2) * (1 - bt * 3 - vv - bt * c.dp(2) * 2 / &q2)
                    } else {
                        (1 - e * 2 + e * vv + d * 2 / &q2) * (1 - bt + vv + bt * d * 2 / &q2)
                    }
                }
                Family::Minus(2) => (1 - e * vv - d * 2 / (1 - d)) * (1 - bt * 3 - vv - bt * d * 2 / (1 - d)),
                Family::Minus(3) => (1 - e * 2 + e * vv + e * 2 / c.x(b)) * (1 - bt * 3 + vv + d * 2 / c.x(b)),
                Family::Minus(4) => (1 - e * 2 + e * (e + m) / c.x(b)) * (1 - bt - (c.x(m) - e) / c.x(b)),
                Family::Minus(5) => {
                    if r >= a - 7 {
                        (1 - e * 4 + d * 3 * (1 - e) / (1 - d)) * (1 + bt * 2 - d * 3 * (1 - bt) / (1 - d))
                    } else {
                        (1 - e * 2 + d * 3 * (1 - e) / (1 - d)) * (1 - bt * 2 + d * 3 * (1 - bt) / (1 - d))
                    }
                }
                Family::Minus(6) => e.clone(),
                Family::Minus(7) => e * (1 - sq(bt / (1 - d))),
                Family::Minus(8) => e * (1 - sq(bt * (1 - e + d) / (1 - c.dp(2)))),
                Family::Minus(9) => {
                    let inner = (bt * 2 - d + c.dp(3) - bt * c.dp(3) * 2) / (1 + c.dp(4));
                    e * (1 - sq(inner))
                }
                _ => family_formula(f, cls.k, alpha)?,
            }
        }
        Regime::Two => match f {
            Family::ZeroT => {
                let t = cls.t.expect("checked by periods");
                // t <= b - sqrt(2b - 4)  <=>  b - t >= 0 and (b - t)^2 >= 2b - 4
                let low = b - t >= 0 && (b - t) * (b - t) >= 2 * b - 4;
                let u = bt * (t - 2) / (1 - d);
                if low {
                    e * (1 - sq(u))
                } else {
                    e * (sq(2 - bt * 2 - u) - 1)
                }
            }
            Family::Minus(1) if b % 2 == 0 => e * sq(1 - bt),
            Family::Minus(2) => e * sq(1 - bt + bt * d / (1 + d)),
            Family::Minus(1) => {
                let q4 = 1 - c.dp(4);
                e * (sq(1 - bt + bt * (1 - d) * c.dp(3) / &q4) - sq(bt * (1 + d) * d / &q4))
            }
            _ => family_formula(f, cls.k, alpha)?,
        },
    };
    Ok(v)
}

/// `delta_k` for a family with the correction term dropped.
pub fn family_limit(family: Family, alpha: &PeriodTwoAlpha) -> Result<QuadNum, SpectrumError> {
    if !family.has_k() {
        return Err(SpectrumError::Inapplicable(family.label(), alpha.a(), alpha.b()));
    }
    // the family must exist for this (a,b) at some k
    let exists = (0..3).any(|k| periods(&ClassId::member(family, k), alpha).is_ok());
    if !exists {
        return Err(SpectrumError::Inapplicable(family.label(), alpha.a(), alpha.b()));
    }
    family_formula(family, None, alpha)
}

/// The evaluator route: `M*` of the canonical period.
pub fn evaluate_class(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<QuadNum, SpectrumError> {
    Ok(m_star(&class_tsequence(cls, alpha)?, alpha))
}

/// Every class that applies to `(a,b)`, with `k` up to `kmax` and, for `a = 2`,
/// every admissible `t`.
pub fn applicable_classes(alpha: &PeriodTwoAlpha, kmax: u32) -> Result<Vec<ClassId>, SpectrumError> {
    let mut fams: Vec<Family> = vec![Family::Zero, Family::K, Family::EvenK, Family::OddK];
    fams.extend((1..=9).map(Family::Minus));
    fams.extend((1..=12).map(Family::KI));
    let mut out = Vec::new();
    for f in fams {
        if f.has_k() {
            for k in 0..=kmax {
                let c = ClassId::member(f, k);
                if periods(&c, alpha).is_ok() {
                    out.push(c);
                }
            }
        } else {
            let c = ClassId::single(f);
            if periods(&c, alpha).is_ok() {
                out.push(c);
            }
        }
    }
    if regime(alpha)? == Regime::Two {
        for t in 2..=alpha.b() {
            let c = ClassId::zero_t(t);
            if periods(&c, alpha).is_ok() {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Isolated,
    FamilyMember,
    LimitPoint,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::Isolated => "isolated",
            PointKind::FamilyMember => "family_member",
            PointKind::LimitPoint => "limit_point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
    None,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueSource {
    ClosedForm,
    /// No closed form is stated for this member; the value is `M*` of its period.
    Evaluator,
}

#[derive(Debug, Clone)]
pub struct SpectrumPoint {
    pub class: ClassId,
    /// For a limit point, the family whose limit it is.
    pub limit_of: Option<Family>,
    pub m_star: QuadNum,
    pub m: QuadNum,
    pub kind: PointKind,
    pub direction: Direction,
    pub source: ValueSource,
    /// Other classes with exactly the same value.
    pub aliases: Vec<ClassId>,
}

impl SpectrumPoint {
    pub fn label(&self) -> String {
        match self.limit_of {
            Some(f) => match f {
                Family::KI(i) => format!("S_{{inf,{i}}}"),
                _ => "S_{inf}".to_string(),
            },
            None => self.class.label(),
        }
    }

    pub fn is_class(&self, cls: &ClassId) -> bool {
        self.limit_of.is_none() && (&self.class == cls || self.aliases.contains(cls))
    }
}

#[derive(Debug, Clone)]
pub struct FamilyInfo {
    pub family: Family,
    pub start_k: u32,
    pub direction: Direction,
    pub limit: QuadNum,
}

/// What the classification says for one `(a,b)`: the largest value, the listed
/// isolated values, the monotone families and which family limit comes first.
#[derive(Debug, Clone)]
pub struct CatalogPlan {
    pub rho_star: ClassId,
    pub isolated: Vec<ClassId>,
    pub families: Vec<(Family, u32, Direction)>,
    pub limit_family: Family,
}

pub fn catalog_plan(alpha: &PeriodTwoAlpha) -> Result<CatalogPlan, SpectrumError> {
    use Direction::*;
    let (a, b) = (alpha.a(), alpha.b());
    let one = ClassId::single;
    let mem = ClassId::member;
    let plan = match regime(alpha)? {
        Regime::EvenA if b % 2 == 1 => {
            let rho = if b == a + 1 || b == a + 3 || b >= 2 * a - 3 { mem(Family::K, 0) } else { one(Family::Minus(2)) };
            let mut iso = vec![one(Family::Minus(1))];
            if a + 3 <= b && b <= 2 * a - 3 {
                iso.push(one(Family::Minus(2)));
            }
            CatalogPlan { rho_star: rho, isolated: iso, families: vec![(Family::K, 0, Decreasing)], limit_family: Family::K }
        }
        Regime::EvenA => {
            let ki = Family::KI;
            let rho = mem(ki(1), 0);
            if (a, b) == (8, 12) {
                CatalogPlan {
                    rho_star: rho,
                    isolated: vec![mem(ki(1), 0), mem(ki(5), 1)],
                    families: vec![(ki(6), 0, Decreasing)],
                    limit_family: ki(6),
                }
            } else if (a, b) == (6, 10) {
                CatalogPlan {
                    rho_star: rho,
                    isolated: vec![mem(ki(1), 0), mem(ki(5), 0), mem(ki(4), 1)],
                    families: vec![(ki(7), 1, Increasing)],
                    limit_family: ki(7),
                }
            } else if b >= 2 * a || (a, b) == (4, 6) {
                let mut iso = vec![mem(ki(5), 0)];
                if 2 * a <= b && b <= 3 * a - 6 {
                    iso.push(mem(ki(4), 0));
                }
                if (a, b) == (4, 6) {
                    iso.push(one(Family::Minus(2)));
                }
                CatalogPlan { rho_star: rho, isolated: iso, families: vec![(ki(1), 0, Decreasing)], limit_family: ki(1) }
            } else if b == 2 * a - 2 && a >= 8 {
                CatalogPlan {
                    rho_star: rho,
                    isolated: vec![mem(ki(1), 0), mem(ki(4), 0)],
                    families: vec![(ki(2), 1, Increasing)],
                    limit_family: ki(2),
                }
            } else if b == 2 * a - 4 && a >= 10 {
                CatalogPlan {
                    rho_star: rho,
                    isolated: vec![mem(ki(1), 0), mem(ki(4), 0), mem(ki(4), 1), mem(ki(5), 1)],
                    families: vec![(ki(3), 1, Decreasing)],
                    limit_family: ki(3),
                }
            } else {
                // b <= 2a - 6 or (a,b) = (6,8)
                let mut fams = vec![(ki(5), 0, Increasing)];
                let mut limit = ki(5);
                if a + 6 <= b && b <= 2 * a - 6 {
                    fams.push((ki(4), 0, Decreasing));
                    limit = ki(4);
                }
                CatalogPlan { rho_star: rho, isolated: vec![mem(ki(1), 0), one(Family::Minus(1))], families: fams, limit_family: limit }
            }
        }
        Regime::OddA => {
            let p = odd_params(alpha);
            let (m, r) = (p.m, p.r);
            let ki = Family::KI;
            let mi = |j| one(Family::Minus(j));
            if (a, b) == (3, 4) {
                CatalogPlan { rho_star: mi(6), isolated: vec![mi(6), mi(8)], families: vec![(ki(10), 0, Decreasing)], limit_family: ki(10) }
            } else if (a, b) == (3, 5) {
                CatalogPlan { rho_star: mi(7), isolated: vec![mi(7), mi(9)], families: vec![(ki(11), 0, Decreasing)], limit_family: ki(11) }
            } else if (a, b) == (3, 6) {
                CatalogPlan { rho_star: mi(2), isolated: vec![mi(2), mi(6)], families: vec![(ki(12), 0, Decreasing)], limit_family: ki(12) }
            } else if (a, b) == (5, 7) || (a, b) == (7, 9) {
                CatalogPlan {
                    rho_star: one(Family::Zero),
                    isolated: vec![one(Family::Zero), mi(3), mi(4)],
                    families: vec![(ki(8), 1, Increasing)],
                    limit_family: ki(8),
                }
            } else if r >= a + 3 {
                let fam = if m >= 1 { (ki(1), 0) } else { (ki(2), 1) };
                CatalogPlan { rho_star: mi(2), isolated: vec![mi(2)], families: vec![(fam.0, fam.1, Increasing)], limit_family: fam.0 }
            } else if r == a + 1 {
                let fam = if m >= 1 { ki(3) } else { ki(4) };
                CatalogPlan { rho_star: mi(1), isolated: vec![mi(1)], families: vec![(fam, 1, Increasing)], limit_family: fam }
            } else if r >= 4 {
                let mut iso = vec![one(Family::Zero)];
                if b == a + 4 && b >= 17 {
                    iso.push(mi(5));
                }
                CatalogPlan { rho_star: one(Family::Zero), isolated: iso, families: vec![(ki(5), 0, Increasing)], limit_family: ki(5) }
            } else {
                // r = 2
                let (second, fam, start) = if m >= 3 {
                    (mi(3), ki(6), 1)
                } else if m == 2 {
                    (mi(3), ki(7), 1)
                } else {
                    (mi(5), ki(9), 0)
                };
                CatalogPlan {
                    rho_star: one(Family::Zero),
                    isolated: vec![one(Family::Zero), second],
                    families: vec![(fam, start, Increasing)],
                    limit_family: fam,
                }
            }
        }
        Regime::Two => {
            let rho = if b % 2 == 0 { ClassId::zero_t(2) } else { ClassId::zero_t(3) };
            let mut iso = vec![rho];
            if b % 2 == 0 {
                iso.push(one(Family::Minus(1)));
            } else {
                iso.push(one(Family::Minus(2)));
                iso.push(one(Family::Minus(1)));
            }
            if b >= 8 {
                let top = 2 + (2 * b - 4).sqrt();
                for t in (4..=top).filter(|t| (t - b) % 2 == 0) {
                    if (b, t) != (6, 4) && (b, t) != (7, 5) {
                        iso.push(ClassId::zero_t(t));
                    }
                }
            }
            CatalogPlan {
                rho_star: rho,
                isolated: iso,
                families: vec![(Family::EvenK, 1, Decreasing), (Family::OddK, 0, Decreasing)],
                limit_family: Family::EvenK,
            }
        }
    };
    Ok(plan)
}

#[derive(Debug, Clone)]
pub struct SpectrumCatalog {
    pub alpha: PeriodTwoAlpha,
    pub points: Vec<SpectrumPoint>,
    pub rho_star: ClassId,
    pub first_limit_point: QuadNum,
    pub families: Vec<FamilyInfo>,
    pub truncation_k: u32,
    pub odd: Option<OddParams>,
}

fn point_value(cls: &ClassId, alpha: &PeriodTwoAlpha) -> Result<(QuadNum, ValueSource), SpectrumError> {
    match delta_closed_form(cls, alpha) {
        Ok(v) => Ok((v, ValueSource::ClosedForm)),
        Err(SpectrumError::Inapplicable(..)) if class_tsequence(cls, alpha).is_ok() => Ok((evaluate_class(cls, alpha)?, ValueSource::Evaluator)),
        Err(e) => Err(e),
    }
}

pub const DEFAULT_KMAX: u32 = 8;

/// Values above the first limit point, largest first, compared exactly.
pub fn spectrum_catalog(alpha: &PeriodTwoAlpha, kmax: u32) -> Result<SpectrumCatalog, SpectrumError> {
    let plan = catalog_plan(alpha)?;
    let mut raw: Vec<SpectrumPoint> = Vec::new();
    let to_m = |v: &QuadNum| m_value(v, alpha);
    for cls in &plan.isolated {
        let (v, src) = point_value(cls, alpha)?;
        raw.push(SpectrumPoint {
            class: *cls,
            limit_of: None,
            m: to_m(&v),
            m_star: v,
            kind: PointKind::Isolated,
            direction: Direction::None,
            source: src,
            aliases: Vec::new(),
        });
    }
    let mut families = Vec::new();
    for &(fam, start, dir) in &plan.families {
        let limit = family_limit(fam, alpha)?;
        for k in start..=kmax.max(start) {
            let cls = ClassId::member(fam, k);
            let (v, src) = point_value(&cls, alpha)?;
            raw.push(SpectrumPoint {
                class: cls,
                limit_of: None,
                m: to_m(&v),
                m_star: v,
                kind: PointKind::FamilyMember,
                direction: dir,
                source: src,
                aliases: Vec::new(),
            });
        }
        families.push(FamilyInfo { family: fam, start_k: start, direction: dir, limit });
    }
    let first_limit_point = family_limit(plan.limit_family, alpha)?;
    raw.push(SpectrumPoint {
        class: ClassId::member(plan.limit_family, kmax),
        limit_of: Some(plan.limit_family),
        m: to_m(&first_limit_point),
        m_star: first_limit_point.clone(),
        kind: PointKind::LimitPoint,
        direction: Direction::None,
        source: ValueSource::ClosedForm,
        aliases: Vec::new(),
    });
    // stable sort keeps isolated entries ahead of family members with the same value
    raw.sort_by(|x, y| y.m_star.partial_cmp(&x.m_star).expect("same field"));
    // keep what lies above the first limit point, plus the members converging to it
    let limit_family = plan.limit_family;
    raw.retain(|p| p.m_star >= first_limit_point || (p.kind == PointKind::FamilyMember && p.class.family == limit_family));
    let mut points: Vec<SpectrumPoint> = Vec::new();
    for p in raw {
        match points.last_mut() {
            Some(last) if last.m_star == p.m_star => {
                if p.limit_of.is_none() {
                    last.aliases.push(p.class);
                }
            }
            _ => points.push(p),
        }
    }
    let odd = (regime(alpha)? == Regime::OddA).then(|| odd_params(alpha));
    Ok(SpectrumCatalog { alpha: alpha.clone(), points, rho_star: plan.rho_star, first_limit_point, families, truncation_k: kmax, odd })
}

/// Distance from the largest value to the next one.
pub fn isolation_gap(catalog: &SpectrumCatalog) -> Result<QuadNum, SpectrumError> {
    if catalog.points.len() < 2 {
        return Err(SpectrumError::InsufficientPoints);
    }
    Ok(&catalog.points[0].m_star - &catalog.points[1].m_star)
}

#[derive(Debug, Clone)]
pub struct EuclidReport {
    /// Largest value of `M`.
    pub rho: QuadNum,
    /// `1/sqrt(B^2 - 4C)` for the minimal polynomial `x^2 + Bx + C` of `eta`.
    pub threshold: QuadNum,
    /// `rho < threshold`.
    pub verdict: bool,
    /// Catalogue values of `M` strictly above the threshold.
    pub points_above: usize,
    /// Whether the first limit point itself lies above the threshold.
    pub limit_above: bool,
}

/// Compare the largest spectrum value with `1/sqrt(B^2 - 4C)`.
///
/// `eta` satisfies `x^2 - b x + b/a = 0`, so `B^2 - 4C = b^2 - 4b/a`,
/// whose square root is `sqrt(ab(ab - 4))/a`.
pub fn euclidean_test(alpha: &PeriodTwoAlpha) -> Result<EuclidReport, SpectrumError> {
    let catalog = spectrum_catalog(alpha, DEFAULT_KMAX)?;
    let (a, b) = (alpha.a(), alpha.b());
    let disc = alpha.frac(b * b * a - 4 * b, a);
    let (s, _) = crate::quadfield::square_part(alpha.natural_radicand());
    let root = alpha.sqrt_n() * (s as i64) / a;
    debug_assert_eq!(root.square(), disc);
    let threshold = root.inverse().expect("positive");
    let rho = catalog.points[0].m.clone();
    // both sides are positive, so compare squares: rho^2 (B^2 - 4C) < 1
    let verdict = (rho.square() * &disc - 1).is_negative();
    let points_above = catalog.points.iter().filter(|p| p.m > threshold).count();
    let limit_above = m_value(&catalog.first_limit_point, alpha) > threshold;
    Ok(EuclidReport { rho, threshold, verdict, points_above, limit_above })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncf::make_alpha;
    use crate::quadfield::rat;

    #[test]
    fn family_symbols_round_trip() {
        for s in ["S0", "S-1", "S-9", "Sk", "Sk1", "Sk12", "S0t", "S2k", "S2k+1"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.symbol(), s);
        }
        assert!("S-10".parse::<Family>().is_err());
        assert!("Sk13".parse::<Family>().is_err());
        assert!("X".parse::<Family>().is_err());
    }

    #[test]
    fn odd_parameters() {
        let p = odd_params(&make_alpha(5, 7).unwrap());
        assert_eq!((p.m, p.r, p.n, p.s), (1, 2, 3, -1));
        let p = odd_params(&make_alpha(5, 10).unwrap());
        assert_eq!((p.m, p.r), (0, 10));
        let p = odd_params(&make_alpha(3, 4).unwrap());
        assert_eq!((p.m, p.r), (0, 4));
        let p = odd_params(&make_alpha(3, 5).unwrap());
        assert_eq!((p.m, p.r), (1, 2));
        let p = odd_params(&make_alpha(7, 13).unwrap());
        assert_eq!((p.m, p.r), (1, 6));
    }

    #[test]
    fn class_periods() {
        let al = make_alpha(4, 8).unwrap();
        assert_eq!(class_tsequence(&ClassId::member(Family::KI(1), 0), &al).unwrap().period(), &[0, 0]);
        let al = make_alpha(5, 7).unwrap();
        assert_eq!(class_tsequence(&ClassId::single(Family::Zero), &al).unwrap().period(), &[-1, 1]);
        let al = make_alpha(2, 7).unwrap();
        assert_eq!(class_tsequence(&ClassId::single(Family::Minus(2)), &al).unwrap().period(), &[2, -3, 2, -1]);
    }

    #[test]
    fn inapplicable_classes() {
        let al = make_alpha(4, 8).unwrap();
        assert!(matches!(class_tsequence(&ClassId::member(Family::KI(2), 1), &al), Err(SpectrumError::Inapplicable(..))));
        assert!(matches!(delta_closed_form(&ClassId::member(Family::KI(7), 1), &al), Err(SpectrumError::Inapplicable(..))));
        assert!(matches!(class_tsequence(&ClassId::single(Family::KI(1)), &al), Err(SpectrumError::MissingK(_))));
        let al = make_alpha(2, 4).unwrap();
        assert_eq!(spectrum_catalog(&al, 3).unwrap_err(), SpectrumError::Excluded(4));
    }

    #[test]
    fn two_six_minus_one() {
        let al = make_alpha(2, 6).unwrap();
        let v = delta_closed_form(&ClassId::single(Family::Minus(1)), &al).unwrap();
        assert_eq!(v, al.eta() * (1 - al.beta()).square());
    }

    #[test]
    fn radical_values_from_the_classification() {
        let al = make_alpha(8, 12).unwrap();
        let lim = family_limit(Family::KI(6), &al).unwrap();
        let want = al.sqrt_n().scale(&rat(112387809, 2209)) - al.frac(1320256308, 2209);
        assert_eq!(al.radicand(), 138);
        assert_eq!(lim, want);
        let al = make_alpha(6, 10).unwrap();
        let lim = family_limit(Family::KI(7), &al).unwrap();
        assert_eq!(lim, al.frac(6329319, 40) - al.sqrt_n().scale(&rat(6551443, 600)));
    }

    #[test]
    fn gap_needs_two_points() {
        let al = make_alpha(4, 8).unwrap();
        let mut cat = spectrum_catalog(&al, 2).unwrap();
        assert!(isolation_gap(&cat).unwrap().is_positive());
        cat.points.truncate(1);
        assert_eq!(isolation_gap(&cat).unwrap_err(), SpectrumError::InsufficientPoints);
    }

    #[test]
    fn four_eight_catalogue_order() {
        let al = make_alpha(4, 8).unwrap();
        let cat = spectrum_catalog(&al, 3).unwrap();
        let labels: Vec<String> = cat.points.iter().map(|p| p.label()).collect();
        assert_eq!(labels, vec!["S_{0,1}", "S_{0,5}", "S_{1,1}", "S_{2,1}", "S_{3,1}", "S_{inf,1}"]);
    }

    #[test]
    fn four_eight_euclid() {
        let al = make_alpha(4, 8).unwrap();
        let r = euclidean_test(&al).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.points_above, 1);
        assert!(!r.limit_above);
        assert_eq!(r.threshold, al.sqrt_n().scale(&rat(1, 28)));
        assert_eq!(r.rho.decimal(6).text, "0.167038");
    }
}
