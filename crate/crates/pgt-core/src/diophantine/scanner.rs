//! Fixed-point phase scanning. A phase is a value modulo 2 stored in a `u128` with
//! `2^127` standing for one, so that wrapping arithmetic is arithmetic modulo 2.

use rayon::prelude::*;
use rug::{Float, Integer};

use super::{DiophantineError, ParityRule, RealSource};

pub type Phase = u128;

pub const PHASE_ONE: Phase = 1 << 127;
const HALF: Phase = 1 << 126;
const CHUNK: u64 = 1 << 16;

/// `x mod 2` as a phase, rounded to nearest.
pub fn to_phase(x: &Float) -> Phase {
    let prec = x.prec().max(160) + x.get_exp().unwrap_or(0).max(0) as u32;
    let two = Float::with_val(prec, 2);
    let r = Float::with_val(prec, x / &two).floor();
    let frac = Float::with_val(prec, x - Float::with_val(prec, &r * &two));
    let scaled = Float::with_val(prec, frac * Float::with_val(prec, Float::i_exp(1, 127)));
    let mut i = scaled.to_integer().unwrap_or_default();
    i.keep_bits_mut(128);
    i.to_u128().unwrap_or(0)
}

/// Nearest-integer parity and signed residual (in `[-1/2, 1/2)`).
#[inline]
pub fn nearest(v: Phase) -> (u8, f64) {
    let w = v.wrapping_add(HALF);
    let parity = (w >> 127) as u8;
    let r = (w & (PHASE_ONE - 1)) as i128 - HALF as i128;
    (parity, r as f64 * 2f64.powi(-127))
}

/// Signed difference of two phases as a real in `[-1, 1)`.
#[inline]
pub fn signed(v: Phase) -> f64 {
    v as i128 as f64 * 2f64.powi(-127)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimultaneousHit {
    pub q: Integer,
    pub numerators: Vec<Integer>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// `j` with `M = 2^j` (zero when `M` is not a power of two).
    pub level: u32,
    pub parity_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    /// Inclusive range of `q`; defaults to `1..=M^m`.
    pub q_range: Option<(u64, u64)>,
    /// Upper limit on `q * m` evaluations.
    pub budget: u128,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { q_range: None, budget: 1_000_000_000 }
    }
}

/// All `q` in range with `|q x_k - p_k| < 1/M` and every `p_k` obeying its parity rule,
/// sorted by `q`. Candidates from the fixed-point screen are confirmed at higher precision.
pub fn simultaneous_approx(
    xs: &[&dyn RealSource],
    rules: &[ParityRule],
    m_bound: u64,
    options: &ScanOptions,
) -> Result<Vec<SimultaneousHit>, DiophantineError> {
    if xs.is_empty() {
        return Err(DiophantineError::Empty);
    }
    assert_eq!(xs.len(), rules.len(), "one parity rule per irrational");
    let m = xs.len() as u32;
    let (lo, hi) = match options.q_range {
        Some(r) => r,
        None => {
            let top = (m_bound as u128).checked_pow(m).unwrap_or(u128::MAX);
            if top * m as u128 > options.budget {
                return Err(DiophantineError::RangeTooLarge(top * m as u128, options.budget));
            }
            (1, top as u64)
        }
    };
    let work = (hi.saturating_sub(lo) as u128 + 1) * m as u128;
    if work > options.budget {
        return Err(DiophantineError::RangeTooLarge(work, options.budget));
    }
    let steps: Vec<Phase> = xs.iter().map(|x| to_phase(&x.eval(192))).collect();
    let limit = PHASE_ONE / m_bound as u128;
    // A little slack: borderline candidates are settled by the exact check.
    let screen = limit + (limit >> 40) + 1;

    let chunks: Vec<(u64, u64)> = chunk_ranges(lo, hi);
    let candidates: Vec<u64> = chunks
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut acc: Vec<Phase> = steps.iter().map(|s| s.wrapping_mul(a as u128)).collect();
            let mut out = Vec::new();
            for q in a..=b {
                let qp = (q & 1) as u8;
                let ok = acc.iter().zip(rules).all(|(&v, rule)| {
                    let w = v.wrapping_add(HALF);
                    let r = (w & (PHASE_ONE - 1)) as i128 - HALF as i128;
                    r.unsigned_abs() < screen && rule.admits((w >> 127) as u8, qp)
                });
                if ok {
                    out.push(q);
                }
                for (v, s) in acc.iter_mut().zip(&steps) {
                    *v = v.wrapping_add(*s);
                }
            }
            out
        })
        .collect();

    let mut hits = Vec::new();
    for q in candidates {
        let q = Integer::from(q);
        if let Some(hit) = confirm(xs, rules, m_bound, &q) {
            hits.push(hit);
        }
    }
    Ok(hits)
}

fn confirm(xs: &[&dyn RealSource], rules: &[ParityRule], m_bound: u64, q: &Integer) -> Option<SimultaneousHit> {
    let prec = 160 + q.significant_bits();
    let qp = q.is_odd() as u8;
    let mut numerators = Vec::with_capacity(xs.len());
    let mut residuals = Vec::with_capacity(xs.len());
    for (x, rule) in xs.iter().zip(rules) {
        let v = Float::with_val(prec, x.eval(prec) * q);
        let p = v.clone().round().to_integer()?;
        let r = Float::with_val(prec, &v - &p).to_f64();
        if r.abs() * m_bound as f64 >= 1.0 || !rule.admits(p.is_odd() as u8, qp) {
            return None;
        }
        numerators.push(p);
        residuals.push(r);
    }
    let max_residual = residuals.iter().fold(0f64, |a, r| a.max(r.abs()));
    let level = if m_bound.is_power_of_two() { m_bound.trailing_zeros() } else { 0 };
    Some(SimultaneousHit { q: q.clone(), numerators, residuals, max_residual, level, parity_ok: true })
}

fn chunk_ranges(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    while a <= hi {
        let b = a.saturating_add(CHUNK - 1).min(hi);
        out.push((a, b));
        if b == u64::MAX {
            break;
        }
        a = b + 1;
    }
    out
}

/// Phases `start_i + g step_i` of the weighted states, with pair coefficients `4 a_i a_j`
/// sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSystem {
    pub start: Vec<Phase>,
    pub step: Vec<Phase>,
    pub pairs: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontierRecord {
    pub g: u64,
    pub epsilon: f64,
}

impl PhaseSystem {
    pub fn new(start: Vec<Phase>, step: Vec<Phase>, amplitudes: &[f64]) -> Self {
        let n = start.len();
        let mut pairs = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, 4.0 * amplitudes[i] * amplitudes[j]));
            }
        }
        pairs.sort_by(|a, b| b.2.total_cmp(&a.2));
        PhaseSystem { start, step, pairs }
    }

    pub fn phases_at(&self, g: u64) -> Vec<Phase> {
        self.start.iter().zip(&self.step).map(|(s, d)| s.wrapping_add(d.wrapping_mul(g as u128))).collect()
    }

    /// `sum 4 a_i a_j sin^2(pi (phi_i - phi_j) / 2)`, abandoned once it reaches `cutoff`.
    #[inline]
    pub fn epsilon(&self, phases: &[Phase], cutoff: f64) -> Option<f64> {
        let mut acc = 0.0;
        for &(i, j, c) in &self.pairs {
            let x = signed(phases[i].wrapping_sub(phases[j]));
            // sin^2(pi x / 2) >= x^2 on [-1, 1].
            if acc + c * x * x >= cutoff {
                return None;
            }
            let s = (std::f64::consts::FRAC_PI_2 * x).sin();
            acc += c * s * s;
            if acc >= cutoff {
                return None;
            }
        }
        Some(acc)
    }

    pub fn epsilon_at(&self, g: u64) -> f64 {
        self.epsilon(&self.phases_at(g), f64::INFINITY).unwrap_or(f64::INFINITY)
    }
}

/// Every `g` in `lo..=hi` whose misalignment beats all earlier ones (and `best`).
/// Chunks run in parallel against their own running best; the sequential merge keeps exactly
/// the global records, so the output does not depend on the thread count.
pub fn frontier_scan(sys: &PhaseSystem, lo: u64, hi: u64, best: f64) -> Vec<FrontierRecord> {
    if lo > hi {
        return Vec::new();
    }
    let local: Vec<Vec<FrontierRecord>> = chunk_ranges(lo, hi)
        .par_iter()
        .map(|&(a, b)| {
            let mut phases = sys.phases_at(a);
            let mut running = best;
            let mut out = Vec::new();
            for g in a..=b {
                if let Some(e) = sys.epsilon(&phases, running) {
                    running = e;
                    out.push(FrontierRecord { g, epsilon: e });
                }
                for (v, s) in phases.iter_mut().zip(&sys.step) {
                    *v = v.wrapping_add(*s);
                }
            }
            out
        })
        .collect();
    let mut running = best;
    let mut out = Vec::new();
    for rec in local.into_iter().flatten() {
        if rec.epsilon < running {
            running = rec.epsilon;
            out.push(rec);
        }
    }
    out
}
