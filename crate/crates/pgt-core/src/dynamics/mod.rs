//! Transfer probability between the chain ends at exact times.

mod periodicity;
mod time;

use std::sync::{Arc, Mutex};

use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use crate::chain::{ChainError, ChainSpec, Coupling};
use crate::radicals::{cos_rational_pi, CosineValue, HighReal};
use crate::spectral::{closed_form_spectrum_with, n4_c_constants, SpectralData, SpectralError, AMPLITUDE_PREC};

pub use periodicity::{periodicity_analysis, Certificate, ObstructionWitness, PeriodicityReport, RationalCosineSeries};
pub use time::{Time, TimePoint};

/// Largest working precision the ladder may reach, in bits.
pub const PRECISION_CAP: u32 = 16384;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("phase of frequency {index} (value {frequency}) still unstable at the {cap}-bit cap")]
    PrecisionCap { index: usize, frequency: f64, cap: u32 },
    #[error("{digits} digits requested but amplitudes carry only {amp_prec} bits; rebuild the spectrum with more amplitude bits")]
    AmplitudePrecision { digits: u32, amp_prec: u32 },
    #[error("cannot parse time {0:?}")]
    BadTime(String),
    #[error("strong-coupling formulas need an even length of at least 4, got {0}")]
    BadLength(usize),
}

type FrequencyCache = Arc<Mutex<Vec<(u32, Arc<Vec<HighReal>>)>>>;

/// `P(t) = |sum_i w_i exp(-i E_i t)|^2` with frequencies re-derivable at any precision.
#[derive(Clone, Debug)]
pub struct CosineSumSeries {
    pub weights: Vec<HighReal>,
    spectral: SpectralData,
    /// Only differences of the frequencies enter `P`.
    pub shift_invariant: bool,
    cache: FrequencyCache,
}

impl CosineSumSeries {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    /// Energies at (at least) `prec` bits, cached per 64-bit tier.
    pub fn frequencies(&self, prec: u32) -> Result<Arc<Vec<HighReal>>, DynamicsError> {
        let tier = prec.div_ceil(64) * 64;
        if let Some((_, v)) = self.cache.lock().expect("cache lock").iter().find(|(p, _)| *p == tier) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.spectral.energies_at(tier)?);
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() > 8 {
            cache.remove(0);
        }
        cache.push((tier, v.clone()));
        Ok(v)
    }

    fn weights_for(&self, digits: u32, prec: u32) -> Result<Vec<HighReal>, DynamicsError> {
        if self.spectral.weights_exact() {
            return Ok(self.spectral.weights_at(prec));
        }
        let amp_prec = self.spectral.amplitude_precision();
        if (digits as f64) > amp_prec as f64 * std::f64::consts::LOG10_2 - 3.0 {
            return Err(DynamicsError::AmplitudePrecision { digits, amp_prec });
        }
        Ok(self.weights.clone())
    }

    /// Bound `(sum |w_i|)^2` on `P`.
    pub fn amplitude_bound(&self) -> f64 {
        let s: f64 = self.weights.iter().map(|w| w.to_f64().abs()).sum();
        s * s
    }
}

pub fn build_series(sd: &SpectralData) -> CosineSumSeries {
    CosineSumSeries {
        weights: sd.weights(),
        spectral: sd.clone(),
        shift_invariant: true,
        cache: Arc::new(Mutex::new(Vec::new())),
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * 3.33).ceil() as u32
}

/// Evaluates `eval` at a starting precision and its double, doubling until they agree.
fn ladder<F>(start: u32, digits: u32, eval: F) -> Result<HighReal, DynamicsError>
where
    F: Fn(u32) -> Result<(Float, Vec<Float>), DynamicsError>,
{
    let tol = Float::with_val(64, 10u32).pow(-(digits as i32) - 2);
    let mut prec = start.min(PRECISION_CAP);
    let (mut value, mut phases) = eval(prec)?;
    loop {
        let next = (prec * 2).min(PRECISION_CAP);
        if next == prec {
            let (index, frequency) = phases.iter().enumerate().map(|(i, p)| (i, p.to_f64())).next().unwrap_or((0, 0.0));
            return Err(DynamicsError::PrecisionCap { index, frequency, cap: PRECISION_CAP });
        }
        let (v2, p2) = eval(next)?;
        if Float::with_val(prec, &v2 - &value).abs() <= tol {
            return Ok(HighReal::from(v2));
        }
        if next == PRECISION_CAP {
            let worst = phases
                .iter()
                .zip(&p2)
                .enumerate()
                .max_by(|a, b| {
                    let da = Float::with_val(64, a.1 .0 - a.1 .1).abs();
                    let db = Float::with_val(64, b.1 .0 - b.1 .1).abs();
                    da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                })
                .map(|(i, _)| i)
                .unwrap_or(0);
            return Err(DynamicsError::PrecisionCap { index: worst, frequency: p2[worst].to_f64(), cap: PRECISION_CAP });
        }
        prec = next;
        value = v2;
        phases = p2;
    }
}

fn modulus_sq(weights: &[HighReal], freqs: &[HighReal], t: &Time, prec: u32) -> (Float, Vec<Float>) {
    let mut re = Float::new(prec);
    let mut im = Float::new(prec);
    let mut phases = Vec::with_capacity(freqs.len());
    for (w, e) in weights.iter().zip(freqs) {
        let omega = Float::with_val(prec, e.as_float());
        let (s, c) = t.sin_cos(&omega, prec);
        re += Float::with_val(prec, w.as_float() * &c);
        im -= Float::with_val(prec, w.as_float() * &s);
        phases.push(c);
    }
    (re.square() + im.square(), phases)
}

fn start_precision(t: &Time, max_abs: f64, digits: u32) -> u32 {
    let e_bits = max_abs.abs().max(1.0).log2().ceil() as u32;
    t.magnitude_bits() + e_bits + digits_to_bits(digits) + 64
}

/// `P(t)` to `target_digits` decimal digits.
pub fn evaluate_p(series: &CosineSumSeries, t: &Time, target_digits: u32) -> Result<HighReal, DynamicsError> {
    assert!(target_digits >= 1, "at least one digit must be requested");
    let max_e = series.spectral().energies.iter().map(|e| e.to_f64().abs()).fold(0.0, f64::max);
    let start = start_precision(t, max_e, target_digits);
    ladder(start, target_digits, |prec| {
        let freqs = series.frequencies(prec)?;
        let weights = series.weights_for(target_digits, prec)?;
        Ok(modulus_sq(&weights, &freqs, t, prec))
    })
}

fn cos_sum(constant: &Float, terms: &[(Float, Float)], t: &Time, prec: u32) -> (Float, Vec<Float>) {
    let mut acc = Float::with_val(prec, constant);
    let mut phases = Vec::with_capacity(terms.len());
    for (coef, omega) in terms {
        let (_, c) = t.sin_cos(omega, prec);
        acc += Float::with_val(prec, coef * &c);
        phases.push(c);
    }
    (acc, phases)
}

/// Coefficients of the six-cosine form of `P` for `N = 4`, as `(constant, [(coef, omega)])`.
pub fn p4_terms(j2: &Coupling, prec: u32) -> (Float, Vec<(Float, Float)>) {
    let j = j2.to_float(prec);
    let r = Float::with_val(prec, j.clone().square() + 1u32).sqrt();
    let (c2, c4) = n4_c_constants(j2, prec);
    let c2s = Float::with_val(prec, c2.as_float().clone().square());
    let c4s = Float::with_val(prec, c4.as_float().clone().square());
    let constant = Float::with_val(prec, 0.125) + Float::with_val(prec, c2s.clone().square()) + Float::with_val(prec, c4s.clone().square());
    let half2 = -Float::with_val(prec, &c2s / 2u32);
    let half4 = -Float::with_val(prec, &c4s / 2u32);
    let one_pj = Float::with_val(prec, 1u32 + &j);
    let one_mj = Float::with_val(prec, 1u32 - &j);
    let w = |x: Float| Float::with_val(prec, x * 2u32);
    let terms = vec![
        (Float::with_val(prec, 0.125), Float::with_val(prec, 4)),
        (Float::with_val(prec, 2u32 * Float::with_val(prec, &c2s * &c4s)), Float::with_val(prec, 4u32 * &r)),
        (half2.clone(), w(Float::with_val(prec, &one_pj - &r))),
        (half2, w(Float::with_val(prec, &one_mj + &r))),
        (half4.clone(), w(Float::with_val(prec, &one_pj + &r))),
        (half4, w(Float::with_val(prec, &one_mj - &r))),
    ];
    (constant, terms)
}

/// The closed six-cosine formula for `P` on the `N = 4` chain.
pub fn p4_closed(j2: &Coupling, t: &Time, target_digits: u32) -> Result<HighReal, DynamicsError> {
    let start = start_precision(t, 4.0 * (1.0 + j2.to_f64()), target_digits);
    ladder(start, target_digits, |prec| {
        let (constant, terms) = p4_terms(j2, prec);
        Ok(cos_sum(&constant, &terms, t, prec))
    })
}

/// Signed frequency terms of the strong-coupling amplitude: `(coefficient, 2 cos(i pi / n))`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitTerm {
    pub coefficient: i64,
    pub cosine: CosineValue,
}

/// Terms of the bracket in the limit formula: `sin` terms for odd `n`, `cos` terms for even `n`
/// (the constant `(-1)^(n/2)` of the even case is the `i = n/2` term with zero frequency).
pub fn p_infty_terms(n_sites: usize, prec: u32) -> Result<Vec<LimitTerm>, DynamicsError> {
    if n_sites < 4 || n_sites % 2 == 1 {
        return Err(DynamicsError::BadLength(n_sites));
    }
    let n = n_sites / 2;
    let last = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    let mut terms = vec![LimitTerm { coefficient: 1, cosine: cos_rational_pi(0, 1, prec) }];
    for i in 1..=last {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let coefficient = if n.is_multiple_of(2) && i == n / 2 { sign } else { 2 * sign };
        terms.push(LimitTerm { coefficient, cosine: cos_rational_pi(i as i64, n as u64, prec) });
    }
    Ok(terms)
}

/// `P` in the strong-coupling limit:
/// `(1/n^2) (sin 2t + 2 sum (-1)^i sin(2 cos(i pi/n) t))^2` for odd `n`,
/// `(1/n^2) ((-1)^(n/2) + cos 2t + 2 sum (-1)^i cos(2 cos(i pi/n) t))^2` for even `n`.
pub fn p_infty(n_sites: usize, t: &Time, target_digits: u32) -> Result<HighReal, DynamicsError> {
    let odd = (n_sites / 2) % 2 == 1;
    let start = start_precision(t, 2.0, target_digits);
    let n = (n_sites / 2) as u32;
    ladder(start, target_digits, |prec| {
        let terms = p_infty_terms(n_sites, prec)?;
        let mut acc = Float::new(prec);
        let mut phases = Vec::with_capacity(terms.len());
        for term in &terms {
            let omega = Float::with_val(prec, term.cosine.value.as_float() * 2u32);
            let (s, c) = t.sin_cos(&omega, prec);
            let v = if odd { s } else { c };
            acc += Float::with_val(prec, &v * term.coefficient);
            phases.push(v);
        }
        Ok((acc.square() / (n * n), phases))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SclLimitCheck {
    pub p_finite: HighReal,
    pub p_infty: HighReal,
    pub gap: HighReal,
}

/// Finite-coupling `P` beside its strong-coupling limit at the same time.
pub fn scl_limit_check(n_sites: usize, j2_large: &Coupling, t: &Time, digits: u32) -> Result<SclLimitCheck, DynamicsError> {
    let spec = ChainSpec::staggered(n_sites, j2_large.clone())?;
    let amp_prec = AMPLITUDE_PREC.max(digits_to_bits(digits) + 32);
    let sd = closed_form_spectrum_with(&spec, 128, amp_prec)?;
    let p_finite = evaluate_p(&build_series(&sd), t, digits)?;
    let p_inf = p_infty(n_sites, t, digits)?;
    let gap = (&p_finite - &p_inf).abs();
    Ok(SclLimitCheck { p_finite, p_infty: p_inf, gap })
}

/// Site occupation `|<E_a|i>|^2` of each eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct Localization {
    /// `probabilities[a][i]` for state `a` and site `i`.
    pub probabilities: Vec<Vec<HighReal>>,
}

impl Localization {
    pub fn state_sums(&self) -> Vec<f64> {
        self.probabilities.iter().map(|row| row.iter().map(HighReal::to_f64).sum()).collect()
    }

    pub fn site_sums(&self) -> Vec<f64> {
        let n = self.probabilities.first().map_or(0, Vec::len);
        (0..n).map(|i| self.probabilities.iter().map(|row| row[i].to_f64()).sum()).collect()
    }

    /// Occupation of the two end sites for each state.
    pub fn endpoint_weight(&self) -> Vec<f64> {
        self.probabilities.iter().map(|row| row[0].to_f64() + row[row.len() - 1].to_f64()).collect()
    }
}

pub fn localization(full_vectors: &[Vec<HighReal>]) -> Localization {
    Localization { probabilities: full_vectors.iter().map(|v| v.iter().map(HighReal::square).collect()).collect() }
}

#[cfg(test)]
mod tests;
