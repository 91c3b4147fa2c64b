//! Direct search for `min n ||n eta - gamma||` over a window of `n`, used to
//! corroborate the exact values.
//!
//! The fast path keeps the fractional part of `n eta - gamma` as a 128-bit
//! fixed-point number, so each step is one wrapping addition. Every chunk
//! starts from an exactly computed value and every near-minimal `n` is
//! re-evaluated exactly, so the reported minimum carries no rounding error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::ncf::PeriodTwoAlpha;
use crate::quadfield::QuadNum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("window [{0}, {1}] is empty or starts below 1")]
    InvalidWindow(u64, u64),
    #[error("windows must be increasing and disjoint")]
    WindowOrder,
    #[error("gamma lies in Q(sqrt {0}) but alpha needs Q(sqrt {1})")]
    FieldMismatch(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleMode {
    #[default]
    Hybrid,
    /// Exact field arithmetic at every `n`.
    Exact,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub n_lo: u64,
    pub n_hi: u64,
    /// Smallest `n` attaining the minimum.
    pub argmin: u64,
    /// `argmin * ||argmin eta - gamma||`, exact.
    pub window_min: QuadNum,
    pub mode: OracleMode,
    /// How many `n` were re-checked exactly.
    pub exact_checks: usize,
}

impl OracleReport {
    pub fn approx(&self) -> f64 {
        self.window_min.to_f64()
    }
}

const CHUNK: u64 = 1 << 16;
/// Candidates within this relative distance of the float minimum are re-checked.
const MARGIN: f64 = 1e-9;
/// Absolute slack covering the fixed-point drift, far above `n * CHUNK * 2^-128`.
const SLACK: f64 = 1e-20;
const TWO128: f64 = 340282366920938463463374607431768211456.0;

/// `n ||n eta - gamma||`, exact.
pub fn scaled_distance(alpha: &PeriodTwoAlpha, gamma: &QuadNum, n: u64) -> QuadNum {
    let y = alpha.eta() * (n as i64) - gamma;
    let r = QuadNum::from_bigint(y.round(), y.radicand());
    (y - r).abs() * (n as i64)
}

fn two_pow_128() -> BigRational {
    BigRational::from_integer(BigInt::one() << 128)
}

/// `floor(frac(x) * 2^128)`.
fn fixed_frac(x: &QuadNum) -> u128 {
    let f = x - &QuadNum::from_bigint(x.floor(), x.radicand());
    f.scale(&two_pow_128()).floor().to_u128().expect("fraction below one")
}

fn check(alpha: &PeriodTwoAlpha, gamma: &QuadNum, n_lo: u64, n_hi: u64) -> Result<(), OracleError> {
    if n_lo < 1 || n_lo > n_hi {
        return Err(OracleError::InvalidWindow(n_lo, n_hi));
    }
    if gamma.radicand() != alpha.radicand() {
        return Err(OracleError::FieldMismatch(gamma.radicand(), alpha.radicand()));
    }
    Ok(())
}

pub fn brute_force_min(alpha: &PeriodTwoAlpha, gamma: &QuadNum, n_lo: u64, n_hi: u64) -> Result<OracleReport, OracleError> {
    brute_force_min_with(alpha, gamma, n_lo, n_hi, OracleMode::Hybrid)
}

pub fn brute_force_min_with(
    alpha: &PeriodTwoAlpha,
    gamma: &QuadNum,
    n_lo: u64,
    n_hi: u64,
    mode: OracleMode,
) -> Result<OracleReport, OracleError> {
    check(alpha, gamma, n_lo, n_hi)?;
    match mode {
        OracleMode::Exact => Ok(exact_scan(alpha, gamma, n_lo, n_hi)),
        OracleMode::Hybrid => Ok(hybrid_scan(alpha, gamma, n_lo, n_hi)),
    }
}

fn exact_scan(alpha: &PeriodTwoAlpha, gamma: &QuadNum, n_lo: u64, n_hi: u64) -> OracleReport {
    let mut y = alpha.eta() * (n_lo as i64) - gamma;
    let mut best: Option<(u64, QuadNum)> = None;
    for n in n_lo..=n_hi {
        let r = QuadNum::from_bigint(y.round(), y.radicand());
        let v = (&y - r).abs() * (n as i64);
        if best.as_ref().map_or(true, |(_, b)| v < *b) {
            best = Some((n, v));
        }
        y = y + alpha.eta();
    }
    let (argmin, window_min) = best.expect("nonempty window");
    OracleReport { n_lo, n_hi, argmin, window_min, mode: OracleMode::Exact, exact_checks: (n_hi - n_lo + 1) as usize }
}

/// Float minimum of one chunk and the `n` that came close to it.
fn scan_chunk(step: u128, alpha: &PeriodTwoAlpha, gamma: &QuadNum, lo: u64, hi: u64) -> (f64, Vec<(u64, f64)>) {
    let start = alpha.eta() * (lo as i64) - gamma;
    let mut x = fixed_frac(&start);
    let mut best = f64::INFINITY;
    let mut cands: Vec<(u64, f64)> = Vec::new();
    for n in lo..=hi {
        let dist = x.min(x.wrapping_neg());
        let v = dist as f64 / TWO128 * n as f64;
        if v <= best * (1.0 + MARGIN) + SLACK {
            if v < best {
                best = v;
            }
            cands.push((n, v));
        }
        x = x.wrapping_add(step);
    }
    cands.retain(|&(_, v)| v <= best * (1.0 + MARGIN) + SLACK);
    (best, cands)
}

fn hybrid_scan(alpha: &PeriodTwoAlpha, gamma: &QuadNum, n_lo: u64, n_hi: u64) -> OracleReport {
    let step = fixed_frac(alpha.eta());
    let starts: Vec<u64> = (n_lo..=n_hi).step_by(CHUNK as usize).collect();
    let parts: Vec<(f64, Vec<(u64, f64)>)> = starts
        .par_iter()
        .map(|&lo| scan_chunk(step, alpha, gamma, lo, (lo + CHUNK - 1).min(n_hi)))
        .collect();
    let best = parts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut cands: Vec<u64> = parts
        .into_iter()
        .flat_map(|(_, c)| c)
        .filter(|&(_, v)| v <= best * (1.0 + MARGIN) + SLACK)
        .map(|(n, _)| n)
        .collect();
    cands.sort_unstable();
    let exact_checks = cands.len();
    let mut winner: Option<(u64, QuadNum)> = None;
    for n in cands {
        let v = scaled_distance(alpha, gamma, n);
        if winner.as_ref().map_or(true, |(_, b)| v < *b) {
            winner = Some((n, v));
        }
    }
    let (argmin, window_min) = winner.expect("at least one candidate");
    OracleReport { n_lo, n_hi, argmin, window_min, mode: OracleMode::Hybrid, exact_checks }
}

/// Minimum over `n` of both signs: negative `n` for `gamma` is positive `n` for `-gamma`.
pub fn two_sided_min(
    alpha: &PeriodTwoAlpha,
    gamma: &QuadNum,
    n_lo: u64,
    n_hi: u64,
    mode: OracleMode,
) -> Result<(OracleReport, OracleReport), OracleError> {
    let pos = brute_force_min_with(alpha, gamma, n_lo, n_hi, mode)?;
    let neg = brute_force_min_with(alpha, &-gamma, n_lo, n_hi, mode)?;
    Ok((pos, neg))
}

pub const DEFAULT_WINDOWS: [(u64, u64); 3] = [(1_000, 10_000), (10_000, 100_000), (100_000, 1_000_000)];

#[derive(Debug, Clone)]
pub struct LiminfReport {
    pub rows: Vec<OracleReport>,
    /// The last two window minima agree to three decimals.
    pub stabilized: bool,
    /// Minimum of the last window.
    pub estimate: QuadNum,
}

pub fn liminf_estimate(
    alpha: &PeriodTwoAlpha,
    gamma: &QuadNum,
    windows: &[(u64, u64)],
    mode: OracleMode,
) -> Result<LiminfReport, OracleError> {
    if windows.is_empty() {
        return Err(OracleError::WindowOrder);
    }
    for w in windows.windows(2) {
        // neighbouring windows may share an endpoint
        if w[1].0 < w[0].1 {
            return Err(OracleError::WindowOrder);
        }
    }
    let rows = windows
        .iter()
        .map(|&(lo, hi)| brute_force_min_with(alpha, gamma, lo, hi, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let last = rows.last().expect("nonempty").window_min.clone();
    let stabilized = match rows.len() {
        1 => false,
        k => {
            let prev = &rows[k - 2].window_min;
            (prev - &last).abs().to_f64() < 5e-4
        }
    };
    Ok(LiminfReport { rows, stabilized, estimate: last })
}
