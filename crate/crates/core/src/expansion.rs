//! Digit expansions of `gamma` with respect to a period-two `alpha`, the tail
//! sums `d_i^+`, `d_i^-`, and the exact evaluator for `M*(alpha, gamma)`.
//!
//! Indices start at 1. Odd indices carry the partial quotient `a`, even
//! indices carry `b`. A digit `b_i` is stored through its centred form
//! `t_i = 2 b_i - (a_i - 2)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ncf::PeriodTwoAlpha;
use crate::quadfield::QuadNum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("block {0} gives a non-integer digit at offset {1}")]
    Parity(String, usize),
    #[error("block {0} gives digit {2} out of range at offset {1}")]
    Range(String, usize, i64),
    #[error("t = {1} at index {0} is not a valid centred digit")]
    InvalidT(i64, i64),
    #[error("sequence breaks the odd/even pairing")]
    Alignment,
    #[error("backward tail at index {0} reaches into the preperiod")]
    UndefinedTail(i64),
    #[error("t = {0} outside 0..={1}")]
    BoundDomain(i64, i64),
    #[error("cannot parse block {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(i: i64) -> Parity {
        if i.rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    A,
    APrime,
    B,
    BPrime,
    C,
    CPrime,
    E,
    EPrime,
    F,
    FPrime,
    G,
    H,
    HPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub kind: BlockKind,
    pub t: i64,
}

impl Block {
    pub fn new(kind: BlockKind, t: i64) -> Block {
        Block { kind, t }
    }

    /// Starting parity and centred digits.
    pub fn t_values(&self, alpha: &PeriodTwoAlpha) -> (Parity, Vec<i64>) {
        use BlockKind::*;
        let (a, t) = (alpha.a(), self.t);
        let pair = |o: i64, e: i64| (Parity::Odd, vec![o, e]);
        match self.kind {
            A => pair(0, t),
            APrime => pair(0, -t),
            B => pair(-1, t),
            BPrime => pair(1, -t),
            C => pair(-2, t),
            CPrime => pair(2, -t),
            E => pair(-3, t),
            EPrime => pair(3, -t),
            F => pair(a, -t),
            FPrime => pair(a, t - 4),
            G => (Parity::Even, vec![-1, a, -1]),
            H => (Parity::Odd, vec![1, -3, a, -3, 1]),
            HPrime => (Parity::Odd, vec![-1, 1, a, 1, -1]),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BlockKind::*;
        let (letter, prime) = match self.kind {
            A => ("A", false),
            APrime => ("A", true),
            B => ("B", false),
            BPrime => ("B", true),
            C => ("C", false),
            CPrime => ("C", true),
            E => ("E", false),
            EPrime => ("E", true),
            F => ("F", false),
            FPrime => ("F", true),
            G => return f.write_str("G"),
            H => return f.write_str("H"),
            HPrime => return f.write_str("H'"),
        };
        write!(f, "{letter}{}{}", self.t, if prime { "'" } else { "" })
    }
}

impl FromStr for Block {
    type Err = ExpansionError;

    /// `A1`, `A1'`, `C-2`, `G`, `H'`.
    fn from_str(s: &str) -> Result<Block, ExpansionError> {
        use BlockKind::*;
        let err = || ExpansionError::Parse(s.to_string());
        let s = s.trim();
        let (body, prime) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let letter = chars.next().ok_or_else(err)?;
        let rest = chars.as_str();
        let kind = match (letter, prime) {
            ('G', false) if rest.is_empty() => return Ok(Block::new(G, 0)),
            ('H', false) if rest.is_empty() => return Ok(Block::new(H, 0)),
            ('H', true) if rest.is_empty() => return Ok(Block::new(HPrime, 0)),
            ('A', false) => A,
            ('A', true) => APrime,
            ('B', false) => B,
            ('B', true) => BPrime,
            ('C', false) => C,
            ('C', true) => CPrime,
            ('E', false) => E,
            ('E', true) => EPrime,
            ('F', false) => F,
            ('F', true) => FPrime,
            _ => return Err(err()),
        };
        let t = rest.parse().map_err(|_| err())?;
        Ok(Block::new(kind, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitPair {
    pub odd: i64,
    pub even: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDigits {
    pub start: Parity,
    pub digits: Vec<i64>,
}

impl BlockDigits {
    /// Digit pairs, when the block starts at an odd index and has even length.
    pub fn pairs(&self) -> Option<Vec<DigitPair>> {
        if self.start != Parity::Odd || self.digits.len() % 2 != 0 {
            return None;
        }
        Some(self.digits.chunks(2).map(|c| DigitPair { odd: c[0], even: c[1] }).collect())
    }
}

fn digit_of(t: i64, q: i64) -> Option<i64> {
    let twice = q - 2 + t;
    if twice.rem_euclid(2) != 0 {
        None
    } else {
        Some(twice / 2)
    }
}

pub fn block_digits(block: &Block, alpha: &PeriodTwoAlpha) -> Result<BlockDigits, ExpansionError> {
    let (start, ts) = block.t_values(alpha);
    let first = if start == Parity::Odd { 1 } else { 2 };
    let mut digits = Vec::with_capacity(ts.len());
    for (k, &t) in ts.iter().enumerate() {
        let q = alpha.quotient(first + k as i64);
        let d = digit_of(t, q).ok_or_else(|| ExpansionError::Parity(block.to_string(), k))?;
        if d < 0 || d > q - 1 {
            return Err(ExpansionError::Range(block.to_string(), k, d));
        }
        digits.push(d);
    }
    Ok(BlockDigits { start, digits })
}

/// Eventually periodic centred digits `t_1, t_2, ...`; the first entry sits at
/// index 1 and both parts have even length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TSequence {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl TSequence {
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<TSequence, ExpansionError> {
        if preperiod.len() % 2 != 0 || period.len() % 2 != 0 || period.is_empty() {
            return Err(ExpansionError::Alignment);
        }
        Ok(TSequence { preperiod, period })
    }

    pub fn periodic(period: Vec<i64>) -> Result<TSequence, ExpansionError> {
        TSequence::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    /// Number of indices before the period starts.
    pub fn offset(&self) -> i64 {
        self.preperiod.len() as i64
    }

    pub fn period_len(&self) -> i64 {
        self.period.len() as i64
    }

    /// `t_i` for `i >= 1`.
    pub fn t(&self, i: i64) -> i64 {
        debug_assert!(i >= 1);
        if i <= self.offset() {
            self.preperiod[(i - 1) as usize]
        } else {
            self.t_periodic(i)
        }
    }

    /// `t_i` of the two-sided periodic extension, any integer `i`.
    pub fn t_periodic(&self, i: i64) -> i64 {
        self.period[(i - 1 - self.offset()).rem_euclid(self.period_len()) as usize]
    }

    /// Check `-(a_i - 2) <= t_i <= a_i` and `t_i = a_i (mod 2)` everywhere.
    pub fn validate(&self, alpha: &PeriodTwoAlpha) -> Result<(), ExpansionError> {
        let all = self.preperiod.iter().chain(self.period.iter());
        for (k, &t) in all.enumerate() {
            let i = k as i64 + 1;
            let q = alpha.quotient(i);
            if t > q || t < -(q - 2) || (t - q).rem_euclid(2) != 0 {
                return Err(ExpansionError::InvalidT(i, t));
            }
        }
        Ok(())
    }

    pub fn digits(&self, alpha: &PeriodTwoAlpha) -> (Vec<i64>, Vec<i64>) {
        let conv = |v: &[i64], start: i64| {
            v.iter().enumerate().map(|(k, &t)| (alpha.quotient(start + k as i64) - 2 + t) / 2).collect::<Vec<_>>()
        };
        (conv(&self.preperiod, 1), conv(&self.period, self.offset() + 1))
    }

    /// Does some period entry equal its partial quotient (`t_k = a_k`)?
    pub fn has_full_digit(&self, alpha: &PeriodTwoAlpha) -> bool {
        let base = self.offset();
        self.period.iter().enumerate().any(|(k, &t)| t == alpha.quotient(base + 1 + k as i64))
    }

    /// Rotate the period by `pairs` digit pairs.
    pub fn rotate_pairs(&self, pairs: usize) -> TSequence {
        let mut period = self.period.clone();
        let len = period.len();
        period.rotate_left((2 * pairs) % len);
        TSequence { preperiod: self.preperiod.clone(), period }
    }
}

impl fmt::Display for TSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.preperiod.is_empty() {
            write!(f, "({})", join(&self.period))
        } else {
            write!(f, "{} ({})", join(&self.preperiod), join(&self.period))
        }
    }
}

/// Parse `t:(2,-3)` or a block string such as `A1 A1 A1' A1'`.
pub fn parse_period(text: &str, alpha: &PeriodTwoAlpha) -> Result<TSequence, ExpansionError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("t:") {
        let inner = rest.trim().trim_start_matches('(').trim_end_matches(')');
        let ts = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| ExpansionError::Parse(text.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        return TSequence::periodic(ts);
    }
    let blocks = text.split_whitespace().map(Block::from_str).collect::<Result<Vec<_>, _>>()?;
    tseq_from_blocks(&blocks, alpha)
}

/// Concatenate blocks into one period starting at index 1.
pub fn tseq_from_blocks(blocks: &[Block], alpha: &PeriodTwoAlpha) -> Result<TSequence, ExpansionError> {
    let mut period = Vec::new();
    for b in blocks {
        let next = Parity::of(period.len() as i64 + 1);
        let bd = block_digits(b, alpha)?;
        if bd.start != next {
            return Err(ExpansionError::Alignment);
        }
        period.extend(b.t_values(alpha).1);
    }
    TSequence::periodic(period)
}

fn geometric_factor(alpha: &PeriodTwoAlpha, half: u32) -> QuadNum {
    (1 - alpha.d().pow(half)).inverse().expect("D^h < 1")
}

/// `gamma = sum_i (b_{2i-1} eta + b_{2i} D) D^{i-1}`.
pub fn gamma_value(tseq: &TSequence, alpha: &PeriodTwoAlpha) -> QuadNum {
    let (pre, per) = tseq.digits(alpha);
    let eta = alpha.eta();
    let d = alpha.d();
    let pair_sum = |ds: &[i64]| {
        let mut acc = alpha.int(0);
        let mut w = alpha.int(1);
        for c in ds.chunks(2) {
            acc = acc + (eta * c[0] + d * c[1]) * &w;
            w = &w * d;
        }
        (acc, w)
    };
    let (head, scale) = pair_sum(&pre);
    let (body, _) = pair_sum(&per);
    head + scale * body * geometric_factor(alpha, (per.len() / 2) as u32)
}

fn check_index(tseq: &TSequence, i: i64, backward: bool) -> Result<(), ExpansionError> {
    let ok = tseq.preperiod.is_empty() || if backward { i > tseq.offset() } else { i >= 0 };
    if ok {
        Ok(())
    } else {
        Err(ExpansionError::UndefinedTail(i))
    }
}

/// `d_i^+ = sum_j (t_{i+2j+1} alpha_i + t_{i+2j+2} D) D^j`.
pub fn d_plus(tseq: &TSequence, i: i64, alpha: &PeriodTwoAlpha) -> Result<QuadNum, ExpansionError> {
    check_index(tseq, i, false)?;
    let d = alpha.d();
    let ai = alpha.alpha_at(i);
    if i + 1 <= tseq.offset() {
        let head = ai * tseq.t(i + 1) + d * tseq.t(i + 2);
        return Ok(head + d * d_plus(tseq, i + 2, alpha)?);
    }
    let h = tseq.period_len() / 2;
    let mut acc = alpha.int(0);
    let mut w = alpha.int(1);
    for j in 0..h {
        acc = acc + (ai * tseq.t_periodic(i + 2 * j + 1) + d * tseq.t_periodic(i + 2 * j + 2)) * &w;
        w = &w * d;
    }
    Ok(acc * geometric_factor(alpha, h as u32))
}

/// `d_i^- = sum_j (t_{i-2j} alpha_{i-1} + t_{i-2j-1} D) D^j`, on the periodic extension.
pub fn d_minus(tseq: &TSequence, i: i64, alpha: &PeriodTwoAlpha) -> Result<QuadNum, ExpansionError> {
    check_index(tseq, i, true)?;
    let d = alpha.d();
    let am = alpha.alpha_at(i - 1);
    let h = tseq.period_len() / 2;
    let mut acc = alpha.int(0);
    let mut w = alpha.int(1);
    for j in 0..h {
        acc = acc + (am * tseq.t_periodic(i - 2 * j) + d * tseq.t_periodic(i - 2 * j - 1)) * &w;
        w = &w * d;
    }
    Ok(acc * geometric_factor(alpha, h as u32))
}

fn s_from_tails(alpha: &PeriodTwoAlpha, i: i64, dp: &QuadNum, dm: &QuadNum) -> [QuadNum; 4] {
    let ai = alpha.alpha_at(i);
    let am = alpha.alpha_at(i - 1);
    [
        (1 - ai + dp) * (1 - am + dm),
        (1 + ai - dp) * (1 + am + dm),
        (1 - ai - dp) * (1 - am - dm),
        (1 + ai + dp) * (1 + am - dm),
    ]
}

/// The four products `s_1*(i) .. s_4*(i)`.
pub fn s_star(tseq: &TSequence, i: i64, alpha: &PeriodTwoAlpha) -> Result<[QuadNum; 4], ExpansionError> {
    let dp = d_plus(tseq, i, alpha)?;
    let dm = d_minus(tseq, i, alpha)?;
    Ok(s_from_tails(alpha, i, &dp, &dm))
}

#[derive(Debug, Clone)]
pub struct Cut {
    pub index: i64,
    pub d_plus: QuadNum,
    pub d_minus: QuadNum,
    pub s: [QuadNum; 4],
}

/// Tails and products at every index of one period, by the one-step recurrences.
pub fn cuts(tseq: &TSequence, alpha: &PeriodTwoAlpha) -> Vec<Cut> {
    let base = tseq.offset();
    let len = tseq.period_len();
    let d = alpha.d();
    let idx = |i: i64| (i - base - 1) as usize;
    let mut dp = vec![alpha.int(0); len as usize];
    let mut dm = vec![alpha.int(0); len as usize];
    for i in [base + len - 1, base + len] {
        dp[idx(i)] = d_plus(tseq, i, alpha).expect("periodic index");
    }
    for i in (base + 1..=base + len - 2).rev() {
        let v = alpha.alpha_at(i) * tseq.t_periodic(i + 1) + d * tseq.t_periodic(i + 2) + d * &dp[idx(i + 2)];
        dp[idx(i)] = v;
    }
    for i in [base + 1, base + 2] {
        dm[idx(i)] = d_minus(tseq, i, alpha).expect("periodic index");
    }
    for i in base + 3..=base + len {
        let v = alpha.alpha_at(i - 1) * tseq.t_periodic(i) + d * tseq.t_periodic(i - 1) + d * &dm[idx(i - 2)];
        dm[idx(i)] = v;
    }
    (base + 1..=base + len)
        .map(|i| {
            let (p, m) = (dp[idx(i)].clone(), dm[idx(i)].clone());
            let s = s_from_tails(alpha, i, &p, &m);
            Cut { index: i, d_plus: p, d_minus: m, s }
        })
        .collect()
}

/// The expansion of the reflected point.
///
/// Every `t` is negated. Where the original has `t_k = a_k` the negated digit
/// would be `-1`; it is carried back into range using `a_k alpha_{k-1} = 1 + D`,
/// which adds `2 a_k` at `k` and subtracts 2 from both neighbours. Carries are
/// applied cyclically inside the period; the preperiod is only negated.
pub fn reflect(tseq: &TSequence, alpha: &PeriodTwoAlpha) -> TSequence {
    let base = tseq.offset();
    let len = tseq.period.len();
    let mut out: Vec<i64> = tseq.period.iter().map(|t| -t).collect();
    for (k, &t) in tseq.period.iter().enumerate() {
        let q = alpha.quotient(base + 1 + k as i64);
        if t == q {
            out[k] += 2 * q;
            out[(k + len - 1) % len] -= 2;
            out[(k + 1) % len] -= 2;
        }
    }
    TSequence { preperiod: tseq.preperiod.iter().map(|t| -t).collect(), period: out }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinRule {
    /// No full digits: minimum of all four products.
    AllFour,
    /// Some `t_k = a_k`: minimum of `s_1`, `s_2` over the sequence and its reflection.
    FirstTwoBothSides,
}

#[derive(Debug, Clone)]
pub struct MStar {
    pub value: QuadNum,
    pub index: i64,
    /// Which product (1..=4) attains the minimum.
    pub which: usize,
    pub reflected: bool,
    pub rule: MinRule,
}

fn scan(cuts: &[Cut], count: usize, reflected: bool, rule: MinRule, best: &mut Option<MStar>) {
    for c in cuts {
        for (w, s) in c.s.iter().take(count).enumerate() {
            if best.as_ref().map_or(true, |b| s < &b.value) {
                *best = Some(MStar { value: s.clone(), index: c.index, which: w + 1, reflected, rule });
            }
        }
    }
}

/// `M*(alpha, gamma)` for periodic `gamma`, with the place it is attained.
pub fn m_star_detail(tseq: &TSequence, alpha: &PeriodTwoAlpha) -> MStar {
    let mut best = None;
    if tseq.has_full_digit(alpha) {
        let rule = MinRule::FirstTwoBothSides;
        scan(&cuts(tseq, alpha), 2, false, rule, &mut best);
        scan(&cuts(&reflect(tseq, alpha), alpha), 2, true, rule, &mut best);
    } else {
        scan(&cuts(tseq, alpha), 4, false, MinRule::AllFour, &mut best);
    }
    best.expect("period is nonempty")
}

pub fn m_star(tseq: &TSequence, alpha: &PeriodTwoAlpha) -> QuadNum {
    m_star_detail(tseq, alpha).value
}

/// `M = M* / (4 (1 - D))`.
pub fn m_value(mstar: &QuadNum, alpha: &PeriodTwoAlpha) -> QuadNum {
    mstar / ((1 - alpha.d()) * 4)
}

/// `M* <= alpha_{j-1}` when `t_j = a_j` infinitely often.
pub fn upper_bound_inf_ta(alpha: &PeriodTwoAlpha, j: Parity) -> QuadNum {
    let jj = if j == Parity::Odd { 1 } else { 2 };
    alpha.alpha_at(jj - 1).clone()
}

/// `(a_j - t) alpha_{j-1}`, which equals `1 - t alpha_{j-1} + D`.
pub fn upper_bound_inf_t(alpha: &PeriodTwoAlpha, j: Parity, t: i64) -> Result<QuadNum, ExpansionError> {
    let jj = if j == Parity::Odd { 1 } else { 2 };
    let q = alpha.quotient(jj);
    if t < 0 || t > q {
        return Err(ExpansionError::BoundDomain(t, q));
    }
    Ok(alpha.alpha_at(jj - 1) * (q - t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncf::make_alpha;

    fn blocks(s: &str) -> Vec<Block> {
        s.split_whitespace().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn block_table() {
        let al = make_alpha(4, 7).unwrap();
        let bd = block_digits(&Block::new(BlockKind::A, 1), &al).unwrap();
        assert_eq!(bd.pairs().unwrap(), vec![DigitPair { odd: 1, even: 3 }]);
        let al = make_alpha(5, 7).unwrap();
        let bd = block_digits(&Block::new(BlockKind::B, 1), &al).unwrap();
        assert_eq!(bd.digits, vec![1, 3]);
        let al = make_alpha(4, 6).unwrap();
        assert!(matches!(block_digits(&Block::new(BlockKind::A, 1), &al), Err(ExpansionError::Parity(_, 1))));
        assert!(matches!(block_digits(&Block::new(BlockKind::A, 8), &al), Err(ExpansionError::Range(_, 1, _))));
    }

    #[test]
    fn odd_length_blocks_for_three_five() {
        let al = make_alpha(3, 5).unwrap();
        assert_eq!(block_digits(&"G".parse().unwrap(), &al).unwrap(), BlockDigits { start: Parity::Even, digits: vec![1, 2, 1] });
        assert_eq!(block_digits(&"H".parse().unwrap(), &al).unwrap().digits, vec![1, 0, 2, 0, 1]);
        assert_eq!(block_digits(&"H'".parse().unwrap(), &al).unwrap().digits, vec![0, 2, 2, 2, 0]);
        let s = tseq_from_blocks(&blocks("H G H' G"), &al).unwrap();
        assert_eq!(s.period_len(), 16);
        assert_eq!(tseq_from_blocks(&blocks("G H"), &al), Err(ExpansionError::Alignment));
    }

    #[test]
    fn block_sequences() {
        let al = make_alpha(4, 7).unwrap();
        let s = tseq_from_blocks(&blocks("A1 A1 A1' A1'"), &al).unwrap();
        assert_eq!(s.period(), &[0, 1, 0, 1, 0, -1, 0, -1]);
        let al = make_alpha(8, 13).unwrap();
        assert_eq!(tseq_from_blocks(&blocks("C3"), &al).unwrap().period(), &[-2, 3]);
        let al = make_alpha(4, 8).unwrap();
        assert_eq!(parse_period("A0", &al).unwrap().period(), &[0, 0]);
        assert_eq!(parse_period("t:(2,-3)", &al).unwrap().period(), &[2, -3]);
    }

    #[test]
    fn block_names_round_trip() {
        for s in ["A1", "A1'", "C-2", "F3'", "E3'", "G", "H", "H'"] {
            let b: Block = s.parse().unwrap();
            let back: Block = b.to_string().parse().unwrap();
            assert_eq!(b, back);
        }
        assert!("Q1".parse::<Block>().is_err());
        assert!("A".parse::<Block>().is_err());
    }

    #[test]
    fn gamma_examples() {
        let al = make_alpha(4, 8).unwrap();
        let zero = TSequence::periodic(vec![-2, -6]).unwrap();
        assert!(gamma_value(&zero, &al).is_zero());
        let a0 = TSequence::periodic(vec![0, 0]).unwrap();
        let expect = (al.eta() + al.d() * 3) / (1 - al.d());
        assert_eq!(gamma_value(&a0, &al), expect);
        let sq = al.sqrt_n();
        let other = (49 - &sq * 13) / (&sq * 4 - 14);
        assert_eq!(gamma_value(&a0, &al), other);
        let al = make_alpha(2, 5).unwrap();
        let s = TSequence::periodic(vec![0, -1]).unwrap();
        assert_eq!(gamma_value(&s, &al), al.d() / (1 - al.d()));
    }

    #[test]
    fn tails_for_b_blocks() {
        // period B_m at odd a: d+ at odd i is (m beta - D)/(1 - D)
        let al = make_alpha(5, 7).unwrap();
        let m = 1;
        let s = TSequence::periodic(vec![-1, m]).unwrap();
        let v = (al.beta() * m - al.d()) / (1 - al.d());
        assert_eq!(d_plus(&s, 1, &al).unwrap(), v);
        assert_eq!(d_plus(&s, 3, &al).unwrap(), v);
        let zero = TSequence::periodic(vec![0, 0]).unwrap();
        for i in 1..5 {
            assert!(d_plus(&zero, i, &al).unwrap().is_zero());
            assert!(d_minus(&zero, i, &al).unwrap().is_zero());
        }
    }

    #[test]
    fn tail_before_a_repeated_a1() {
        // A1 A1 A1' A1' at (4,7); the second A1 starts at index 3
        let al = make_alpha(4, 7).unwrap();
        let s = tseq_from_blocks(&blocks("A1 A1 A1' A1'"), &al).unwrap();
        let d = al.d();
        let want = d * (1 - d) / (1 + d * d);
        assert_eq!(d_minus(&s, 3, &al).unwrap(), want);
    }

    #[test]
    fn preperiod_tails() {
        let al = make_alpha(4, 8).unwrap();
        let s = TSequence::new(vec![2, 4], vec![0, 0]).unwrap();
        let p0 = d_plus(&s, 0, &al).unwrap();
        assert_eq!(p0, al.eta() * 2 + al.d() * 4);
        assert_eq!(d_minus(&s, 2, &al), Err(ExpansionError::UndefinedTail(2)));
        assert!(d_minus(&s, 3, &al).unwrap().is_zero());
    }

    #[test]
    fn recurrence_matches_direct_sums() {
        let al = make_alpha(6, 11).unwrap();
        let s = TSequence::periodic(vec![0, 1, -2, 3, 2, -5, 0, 1]).unwrap();
        for c in cuts(&s, &al) {
            assert_eq!(c.d_plus, d_plus(&s, c.index, &al).unwrap());
            assert_eq!(c.d_minus, d_minus(&s, c.index, &al).unwrap());
            assert_eq!(c.s, s_star(&s, c.index, &al).unwrap());
        }
    }

    #[test]
    fn zero_tails_give_plain_products() {
        let al = make_alpha(4, 8).unwrap();
        let s = TSequence::periodic(vec![0, 0]).unwrap();
        let st = s_star(&s, 1, &al).unwrap();
        assert_eq!(st[0], (1 - al.eta()) * (1 - al.beta()));
        assert!(st[1] > al.int(1));
    }

    #[test]
    fn four_eight_zero_sequence() {
        let al = make_alpha(4, 8).unwrap();
        let s = TSequence::periodic(vec![0, 0]).unwrap();
        let m = m_star(&s, &al);
        assert_eq!(m, (1 - al.eta()) * (1 - al.beta()));
        assert_eq!(m_value(&m, &al).decimal(6).text, "0.167038");
        assert_eq!(m_value(&m, &al) * ((1 - al.d()) * 4), m);
        assert!(m_value(&al.int(0), &al).is_zero());
    }

    #[test]
    fn four_seven_s0() {
        let al = make_alpha(4, 7).unwrap();
        let s = tseq_from_blocks(&blocks("A1' A1"), &al).unwrap();
        let b = al.b();
        let want = (1 - al.beta() - al.frac(1, b)) * (1 - al.eta() + al.eta() / al.int(b));
        assert_eq!(m_star(&s, &al), want);
    }

    #[test]
    fn reflection_negates_without_full_digits() {
        let al = make_alpha(4, 7).unwrap();
        let s = TSequence::periodic(vec![0, 1, 0, -1]).unwrap();
        assert_eq!(reflect(&s, &al).period(), &[0, -1, 0, 1]);
        let z = TSequence::periodic(vec![0, 0]).unwrap();
        assert_eq!(reflect(&z, &al), z);
    }

    #[test]
    fn reflection_carries_full_digits() {
        let al = make_alpha(2, 7).unwrap();
        let s = TSequence::periodic(vec![2, -3, 2, -1]).unwrap();
        let r = reflect(&s, &al);
        assert_eq!(r.period(), &[2, -1, 2, -3]);
        r.validate(&al).unwrap();
        // the reflected point is 1 - eta - gamma up to an integer
        let g = gamma_value(&s, &al);
        let g2 = gamma_value(&r, &al);
        assert_eq!(&g + &g2 + al.eta(), al.int(2));
    }

    #[test]
    fn bounds() {
        let al = make_alpha(4, 8).unwrap();
        assert_eq!(&upper_bound_inf_ta(&al, Parity::Even), al.beta());
        let v = upper_bound_inf_t(&al, Parity::Even, 2).unwrap();
        assert_eq!(v, 1 - al.beta() * 2 + al.d());
        let al = make_alpha(2, 5).unwrap();
        let v = upper_bound_inf_t(&al, Parity::Odd, 1).unwrap();
        assert_eq!(v, 1 - al.eta() + al.d());
        assert_eq!(upper_bound_inf_t(&al, Parity::Odd, 3), Err(ExpansionError::BoundDomain(3, 2)));
    }
}
