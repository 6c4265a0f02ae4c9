//! Searches for pretty-good transfer times, ε → t_ε staircases and power-law fits.
//!
//! The search walks the alignment lattice `t = pi u (o + h g) / Q` level by level. Level `j`
//! covers `g <= 2^(j m)` (Dirichlet bound `M_j = 2^j` for `m` irrationals). Every `g` whose
//! misalignment `1 - P` beats all earlier ones becomes a record after a high-precision check.

mod fit;
mod scans;

use rug::{Float, Integer};
use thiserror::Error;

use crate::chain::{ChainError, ChainSpec, Coupling, Regime};
use crate::diophantine::{
    continued_fraction, frontier_scan, parity_requirements, to_phase, AlignmentLattice, DiophantineError, PhaseSystem,
    RealSource, SimultaneousHit,
};
use crate::dynamics::{build_series, evaluate_p, periodicity_analysis, CosineSumSeries, DynamicsError, PeriodicityReport, Time, TimePoint};
use crate::radicals::HighReal;
use crate::spectral::{closed_form_spectrum_with, n4_exact, scl_spectrum, SpectralData, SpectralError};

pub use fit::{epsilon_curve, fit_points, fit_power_law, PowerLawFit, StaircasePoint};
pub use scans::{crossover_scan, log_grid, scl_wcl_equivalence, CrossoverScan, EquivalenceReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PgtError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error("fit needs at least 4 records spanning 3 decades of epsilon; got {records} spanning {decades:.2}")]
    InsufficientSpan { records: usize, decades: f64 },
    #[error("no records")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Epsilon fell by at least the configured number of decades.
    PgtObserved,
    /// Some lattice time gives `P = 1` to the requested digits.
    PerfectTransfer,
    /// The trailing levels stopped improving.
    Stagnated,
    /// The work budget ran out before either outcome.
    StagnatedAtBudget,
    /// Periodic `P` with a bound below `1 - 1e-6`.
    CertifiedNoPgt,
    /// Levels exhausted without three decades or a stagnation run.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Exhaustive lattice scan.
    Scan,
    /// Continued-fraction convergent beyond the scanned range.
    ContinuedFraction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PgtRecord {
    pub time: TimePoint,
    /// Lattice index of the time.
    pub g: Integer,
    pub p_value: HighReal,
    pub epsilon: HighReal,
    pub search_level: u32,
    pub hit: SimultaneousHit,
    pub provenance: Provenance,
    pub improving: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSummary {
    pub level: u32,
    pub g_range: (u64, u64),
    /// Best epsilon after the level (screening value).
    pub best_epsilon: f64,
    pub new_records: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub max_level: u32,
    pub digits: u32,
    /// Limit on `g * m` evaluations.
    pub budget: u128,
    /// Trailing levels with < 10% improvement that count as stagnation.
    pub stagnation_window: usize,
    /// Decades of epsilon improvement that count as PGT observed.
    pub decades: f64,
    /// Continued-fraction proposals past the budget (one irrational only) go up to `2^bits`.
    pub proposal_bits: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_level: 30, digits: 6, budget: 1_000_000_000, stagnation_window: 4, decades: 3.0, proposal_bits: 128 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PgtCurve {
    /// Improving records, increasing in time and decreasing in epsilon.
    pub records: Vec<PgtRecord>,
    /// Every verified candidate, including non-improving proposals.
    pub candidates: Vec<PgtRecord>,
    pub fit: Option<PowerLawFit>,
    pub verdict: Verdict,
    pub lattice: Option<AlignmentLattice>,
    pub levels: Vec<LevelSummary>,
    pub budget_exhausted: bool,
    pub periodicity: Option<PeriodicityReport>,
}

impl PgtCurve {
    pub fn best(&self) -> Option<&PgtRecord> {
        self.records.last()
    }
}

/// Spectrum used by the search; amplitudes carry enough bits for deep verification.
pub fn search_spectrum(spec: &ChainSpec) -> Result<SpectralData, PgtError> {
    Ok(match spec.regime() {
        Regime::StrongCouplingLimit => scl_spectrum(spec.n_sites(), 256).to_spectral_data(),
        Regime::Finite(j2) if spec.n_sites() == 4 => n4_exact(j2, 256)?,
        Regime::Finite(_) => closed_form_spectrum_with(spec, 256, 256)?,
    })
}

fn phase_system(series: &CosineSumSeries, lattice: &AlignmentLattice) -> Result<PhaseSystem, PgtError> {
    const PREC: u32 = 320;
    let energies = series.frequencies(PREC)?;
    let step = Float::with_val(PREC, lattice.tau_step());
    let offset = Float::with_val(PREC, lattice.tau_offset());
    let mut starts = Vec::new();
    let mut steps = Vec::new();
    let mut amps = Vec::new();
    for &i in &lattice.levels {
        let e = energies[i].as_float();
        let w = series.weights[i].to_f64();
        steps.push(to_phase(&Float::with_val(PREC, e * &step)));
        let sigma = if w < 0.0 { 1 } else { 0 };
        starts.push(to_phase(&(Float::with_val(PREC, e * &offset) + sigma)));
        amps.push(w.abs());
    }
    Ok(PhaseSystem::new(starts, steps, &amps))
}

fn provenance_hit(lattice: &AlignmentLattice, g: &Integer, level: u32) -> SimultaneousHit {
    let prec = 128 + g.significant_bits();
    let shift = Float::with_val(prec, lattice.offset) / lattice.step;
    let scale = Float::with_val(prec, g) + shift;
    let q_parity = g.is_odd() as u8;
    let mut numerators = Vec::new();
    let mut residuals = Vec::new();
    let mut parity_ok = true;
    for r in &lattice.requirements {
        let z = Float::with_val(prec, r.multiplier.eval(prec) * &scale);
        let p = z.clone().round().to_integer().unwrap_or_default();
        residuals.push(Float::with_val(prec, &z - &p).to_f64());
        parity_ok &= r.rule.admits(p.is_odd() as u8, q_parity);
        numerators.push(p);
    }
    let max_residual = residuals.iter().fold(0f64, |a, r| a.max(r.abs()));
    SimultaneousHit { q: g.clone(), numerators, residuals, max_residual, level, parity_ok }
}

/// `P` at a record time with enough digits to resolve `epsilon`.
fn verify(series: &CosineSumSeries, time: &TimePoint, eps_hint: f64, digits: u32) -> Result<HighReal, PgtError> {
    let extra = if eps_hint > 0.0 { (-eps_hint.log10()).ceil().max(0.0) as u32 } else { 30 };
    Ok(evaluate_p(series, &Time::PiMultiple(time.clone()), digits + extra + 2)?)
}

struct Accumulator<'a> {
    series: &'a CosineSumSeries,
    lattice: &'a AlignmentLattice,
    digits: u32,
    best: Option<HighReal>,
    candidates: Vec<PgtRecord>,
}

impl Accumulator<'_> {
    fn push(&mut self, g: Integer, level: u32, eps_hint: f64, provenance: Provenance) -> Result<bool, PgtError> {
        let time = self.lattice.time(&g);
        let p_value = verify(self.series, &time, eps_hint, self.digits)?;
        let epsilon = HighReal::from(Float::with_val(p_value.precision(), 1 - p_value.as_float()));
        let improving = self.best.as_ref().is_none_or(|b| epsilon < *b);
        if improving {
            self.best = Some(epsilon.clone());
        }
        let hit = provenance_hit(self.lattice, &g, level);
        self.candidates.push(PgtRecord { time, g, p_value, epsilon, search_level: level, hit, provenance, improving });
        Ok(improving)
    }
}

/// Stagnation ends the scan early only after this many levels.
const MIN_LEVELS_BEFORE_STOP: usize = 8;

fn trailing_stagnation(bests: &[f64]) -> usize {
    let mut run = 0;
    for w in bests.windows(2).rev() {
        let (prev, cur) = (w[0], w[1]);
        if prev > 0.0 && (prev - cur) / prev < 0.1 {
            run += 1;
        } else {
            break;
        }
    }
    run
}

/// Runs the lattice search up to `max_level` with the default budget.
pub fn pgt_search(spec: &ChainSpec, max_level: u32, target_digits: u32) -> Result<PgtCurve, PgtError> {
    pgt_search_with(spec, &SearchConfig { max_level, digits: target_digits, ..SearchConfig::default() })
}

pub fn pgt_search_with(spec: &ChainSpec, cfg: &SearchConfig) -> Result<PgtCurve, PgtError> {
    let mut periodicity = None;
    if let (Regime::Finite(Coupling::Exact(j)), 4) = (spec.regime(), spec.n_sites()) {
        let report = periodicity_analysis(j);
        if report.is_periodic {
            if report.effective_bound().is_some_and(|b| b < 1.0 - 1e-6) {
                return Ok(PgtCurve {
                    records: Vec::new(),
                    candidates: Vec::new(),
                    fit: None,
                    verdict: Verdict::CertifiedNoPgt,
                    lattice: None,
                    levels: Vec::new(),
                    budget_exhausted: false,
                    periodicity: Some(report),
                });
            }
            periodicity = Some(report);
        }
    }

    let sd = search_spectrum(spec)?;
    let series = build_series(&sd);
    let lattice = parity_requirements(&series)?;
    let system = phase_system(&series, &lattice)?;
    let m = lattice.requirements.len().max(1) as u32;
    let mut acc = Accumulator { series: &series, lattice: &lattice, digits: cfg.digits, best: None, candidates: Vec::new() };

    let mut levels = Vec::new();
    let mut screen_best = f64::INFINITY;
    let mut spent: u128 = 0;
    let mut budget_exhausted = false;
    let mut perfect = false;
    let mut next_g: u64 = if lattice.offset > 0 { 0 } else { 1 };
    for level in 1..=cfg.max_level {
        let top = 1u128.checked_shl(level * m).unwrap_or(u128::MAX).min(u64::MAX as u128 / 2) as u64;
        if top < next_g {
            continue;
        }
        let mut hi = top;
        let room = cfg.budget.saturating_sub(spent) / m as u128;
        if (hi - next_g) as u128 + 1 > room {
            budget_exhausted = true;
            if room == 0 {
                break;
            }
            hi = next_g + room as u64 - 1;
        }
        let found = frontier_scan(&system, next_g, hi, screen_best);
        spent += (hi - next_g + 1) as u128 * m as u128;
        let mut new_records = 0;
        for rec in &found {
            screen_best = rec.epsilon;
            if acc.push(Integer::from(rec.g), level, rec.epsilon, Provenance::Scan)? {
                new_records += 1;
            }
            if rec.epsilon == 0.0 && acc.best.as_ref().is_some_and(|b| b.to_f64().abs() < 10f64.powi(-(cfg.digits as i32))) {
                perfect = true;
                break;
            }
        }
        levels.push(LevelSummary { level, g_range: (next_g, hi), best_epsilon: screen_best, new_records });
        next_g = hi + 1;
        if perfect || budget_exhausted {
            break;
        }
        // A floor that never dropped by `decades` is not worth the remaining budget.
        let bests: Vec<f64> = levels.iter().map(|l| l.best_epsilon).collect();
        let fallen = bests.first().zip(bests.last()).is_some_and(|(a, b)| *b > 0.0 && (a / b).log10() >= cfg.decades);
        if !fallen && levels.len() >= MIN_LEVELS_BEFORE_STOP && trailing_stagnation(&bests) >= cfg.stagnation_window {
            break;
        }
    }

    // One irrational: continued fractions reach far beyond any exhaustive scan.
    if !perfect && lattice.requirements.len() == 1 && lattice.offset == 0 && cfg.proposal_bits > 0 {
        let req = &lattice.requirements[0];
        let mult = req.multiplier.clone();
        let x = move |prec: u32| mult.eval(prec).abs();
        let src: &dyn RealSource = &x;
        let cf = continued_fraction(src, 160)?;
        for c in cf.convergents.iter().take(cf.certified) {
            if c.q < next_g || c.q.significant_bits() > cfg.proposal_bits {
                continue;
            }
            if !req.rule.admits(c.p.is_odd() as u8, c.q.is_odd() as u8) {
                continue;
            }
            let level = c.q.significant_bits().div_ceil(m);
            let hint = c.residual.to_f64().powi(2);
            acc.push(c.q.clone(), level, hint, Provenance::ContinuedFraction)?;
        }
    }

    let records: Vec<PgtRecord> = acc.candidates.iter().filter(|r| r.improving).cloned().collect();
    let fit = fit_power_law(&records).ok();
    let verdict = if perfect {
        Verdict::PerfectTransfer
    } else {
        let first = records.first().map(|r| r.epsilon.to_f64()).unwrap_or(1.0);
        let best = records.last().map(|r| r.epsilon.to_f64()).unwrap_or(1.0);
        let bests: Vec<f64> = levels.iter().map(|l| l.best_epsilon).collect();
        if best > 0.0 && (first / best).log10() >= cfg.decades {
            Verdict::PgtObserved
        } else if trailing_stagnation(&bests) >= cfg.stagnation_window {
            Verdict::Stagnated
        } else if budget_exhausted {
            Verdict::StagnatedAtBudget
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(PgtCurve {
        records,
        candidates: acc.candidates,
        fit,
        verdict,
        lattice: Some(lattice),
        levels,
        budget_exhausted,
        periodicity,
    })
}
