use rayon::prelude::*;
use rug::Float;

use super::{pgt_search_with, search_spectrum, PgtError, SearchConfig};
use crate::chain::{ChainSpec, Coupling};
use crate::diophantine::{integer_relations, parity_requirements, AlignmentLattice, BasisValue, LatticeStatus};
use crate::dynamics::{build_series, evaluate_p, p_infty, Time};
use crate::radicals::HighReal;
use crate::spectral::{closed_form_spectrum_with, n4_exact};

#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverScan {
    pub points: Vec<(Coupling, HighReal)>,
    /// Strong-coupling asymptote at the same time.
    pub p_infty: HighReal,
}

/// `points` couplings spaced evenly in `log J2` between `min` and `max`.
pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<Coupling> {
    assert!(min > 0.0 && max >= min && points >= 1, "grid needs 0 < min <= max and at least one point");
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|k| {
            // Endpoints exactly as given, not through exp(ln x).
            let v = match k {
                0 => min,
                _ if k == points - 1 => max,
                _ => (a + (b - a) * k as f64 / (points - 1) as f64).exp(),
            };
            Coupling::Real(HighReal::from_f64(v, 128))
        })
        .collect()
}

/// `P(J2, t)` along a coupling grid, with the strong-coupling limit as reference.
pub fn crossover_scan(n_sites: usize, t: &Time, grid: &[Coupling], digits: u32) -> Result<CrossoverScan, PgtError> {
    let amp_bits = (digits as f64 * 3.33 + 64.0).max(128.0) as u32;
    let points = grid
        .par_iter()
        .map(|j2| {
            let spec = ChainSpec::staggered(n_sites, j2.clone())?;
            let sd = if n_sites == 4 { n4_exact(j2, 128)? } else { closed_form_spectrum_with(&spec, 128, amp_bits)? };
            let p = evaluate_p(&build_series(&sd), t, digits)?;
            Ok((j2.clone(), p))
        })
        .collect::<Result<Vec<_>, PgtError>>()?;
    Ok(CrossoverScan { points, p_infty: p_infty(n_sites, t, digits)? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub n_double: usize,
    pub scl_irrationals: Vec<String>,
    pub wcl_irrationals: Vec<String>,
    /// Both sets span the same space over the rationals (modulo rationals).
    pub coincide: bool,
    /// The strong-coupling chain aligns exactly at some lattice time.
    pub scl_perfect_transfer: bool,
    pub scl_exponent: Option<f64>,
    pub wcl_exponent: Option<f64>,
}

fn lattice_for(spec: &ChainSpec) -> Result<AlignmentLattice, PgtError> {
    Ok(parity_requirements(&build_series(&search_spectrum(spec)?))?)
}

/// Whether `x` lies in the rational span of `1` and `ys`.
fn in_span(x: &BasisValue, ys: &[BasisValue]) -> bool {
    let values = |prec: u32| {
        let mut v = vec![Float::with_val(prec, 1)];
        v.extend(ys.iter().map(|y| y.eval(prec)));
        v.push(x.eval(prec));
        v
    };
    integer_relations(&values, 384, 768).iter().any(|r| *r.last().expect("non-empty") != 0)
}

/// Compares the irrational content of the strong-coupling chain of length `n_double` with the
/// homogeneous chain of half the length, optionally fitting both staircases.
pub fn scl_wcl_equivalence(n_double: usize, search: Option<&SearchConfig>) -> Result<EquivalenceReport, PgtError> {
    let scl_spec = ChainSpec::strong_coupling(n_double)?;
    let wcl_spec = ChainSpec::staggered(n_double / 2, Coupling::from_ratio(1, 1))?;
    let scl = lattice_for(&scl_spec)?;
    let wcl = lattice_for(&wcl_spec)?;
    let xs: Vec<BasisValue> = scl.requirements.iter().map(|r| r.multiplier.clone()).collect();
    let ys: Vec<BasisValue> = wcl.requirements.iter().map(|r| r.multiplier.clone()).collect();
    let coincide = xs.len() == ys.len() && xs.iter().all(|x| in_span(x, &ys)) && ys.iter().all(|y| in_span(y, &xs));
    let (scl_exponent, wcl_exponent) = match search {
        Some(cfg) => (
            pgt_search_with(&scl_spec, cfg)?.fit.map(|f| f.exponent),
            pgt_search_with(&wcl_spec, cfg)?.fit.map(|f| f.exponent),
        ),
        None => (None, None),
    };
    Ok(EquivalenceReport {
        n_double,
        scl_irrationals: xs.iter().map(ToString::to_string).collect(),
        wcl_irrationals: ys.iter().map(ToString::to_string).collect(),
        coincide,
        scl_perfect_transfer: xs.is_empty() && scl.status == LatticeStatus::Consistent,
        scl_exponent,
        wcl_exponent,
    })
}
