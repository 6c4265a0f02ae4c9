//! Eigenvalues and endpoint amplitudes of the single-excitation matrix.

mod numeric;
mod scl;

use std::cmp::Ordering;

use rug::{Float, Rational};
use thiserror::Error;

use crate::chain::{build_single_excitation_matrix, shift_matrix, ChainError, ChainSpec, Coupling, Regime, TridiagonalMatrix};
use crate::radicals::{cos_rational_pi, eval_branch_eigenvalue, BranchSign, HighReal, COMPARE_GUARD};

pub use numeric::{tridiagonal_eigenvalues, tridiagonal_eigenvectors, AMPLITUDE_PREC};
pub use scl::{scl_spectrum, SclSpectrum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("bisection for eigenvalue {index} did not converge; bracket [{lo}, {hi}]")]
    NoConvergence { index: usize, lo: String, hi: String },
    #[error("eigenvalues near {energy} are {gap:e} apart, too close for {amp_prec}-bit inverse iteration; raise the amplitude precision")]
    NearDegenerate { energy: f64, gap: f64, amp_prec: u32 },
    #[error("{given} energies supplied for a matrix of size {size}")]
    SizeMismatch { given: usize, size: usize },
    #[error("the strong-coupling limit has no finite-coupling spectrum")]
    NotFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralSource {
    ClosedForm,
    NumericOracle,
    SclFirstOrder,
    N4Exact,
}

/// Which closed-form branch produced an eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchLabel {
    pub sign: BranchSign,
    pub m: u64,
    /// Eigenvector symmetric under site reversal (the `A + BS` block).
    pub symmetric: bool,
    pub radical_form: Option<String>,
}

/// Enough information to re-derive the energies at another precision.
#[derive(Clone, Debug, PartialEq)]
enum Origin {
    Chain(ChainSpec),
    N4(Coupling),
    Matrix(TridiagonalMatrix),
    StrongCoupling(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    /// Ascending eigenvalues of `h`.
    pub energies: Vec<HighReal>,
    pub amp_first: Vec<HighReal>,
    pub amp_last: Vec<HighReal>,
    pub source: SpectralSource,
    pub labels: Option<Vec<BranchLabel>>,
    /// Indices `i` with `energies[i]` numerically equal to `energies[i + 1]`.
    pub ties: Vec<usize>,
    /// Exact value of `d + 2 J2` when the coupling is rational.
    pub centre: Option<Rational>,
    origin: Origin,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `<1|E_i><E_i|N>` for each level.
    pub fn weights(&self) -> Vec<HighReal> {
        self.amp_first.iter().zip(&self.amp_last).map(|(a, b)| a * b).collect()
    }

    pub fn amplitude_precision(&self) -> u32 {
        self.amp_first.iter().map(HighReal::precision).min().unwrap_or(0)
    }

    /// Whether the weights can be regenerated at any precision.
    pub fn weights_exact(&self) -> bool {
        matches!(self.origin, Origin::N4(_) | Origin::StrongCoupling(_))
    }

    /// Largest deviation from unit norm of the first and last amplitude columns.
    pub fn completeness_defect(&self) -> f64 {
        let p = self.amplitude_precision().max(64);
        let norm = |v: &[HighReal]| v.iter().fold(Float::new(p), |a, x| a + x.as_float().clone().square());
        let a = Float::with_val(p, norm(&self.amp_first) - 1u32).abs().to_f64();
        let b = Float::with_val(p, norm(&self.amp_last) - 1u32).abs().to_f64();
        a.max(b)
    }

    /// Energies recomputed at `prec` bits, in the same order as `energies`.
    pub fn energies_at(&self, prec: u32) -> Result<Vec<HighReal>, SpectralError> {
        match &self.origin {
            Origin::Chain(spec) => {
                let labels = self.labels.as_ref().expect("closed form carries labels");
                let centre = centre_float(spec, prec + 16)?;
                let j2 = spec.coupling()?.to_high(prec + 16);
                Ok(labels
                    .iter()
                    .map(|l| branch_value(&j2, spec.n_sites() as u64, l.sign, l.m, prec + 16).0)
                    .map(|v| HighReal::from(Float::with_val(prec, v.as_float() + &centre)))
                    .collect())
            }
            Origin::N4(j2) => Ok(n4_energies(j2, prec)),
            Origin::Matrix(m) => {
                let vals = tridiagonal_eigenvalues(m, prec)?;
                Ok(vals.iter().map(|v| HighReal::from(Float::with_val(prec, v.as_float() + m.shift_applied.as_float()))).collect())
            }
            Origin::StrongCoupling(n) => Ok(scl_spectrum(*n, prec).offsets.into_iter().rev().collect()),
        }
    }

    /// The chain behind a closed-form spectrum.
    pub fn chain_spec(&self) -> Option<ChainSpec> {
        match &self.origin {
            Origin::Chain(spec) => Some(spec.clone()),
            Origin::N4(j2) => ChainSpec::staggered(4, j2.clone()).ok(),
            _ => None,
        }
    }

    /// Chain length when the data is the strong-coupling cluster.
    pub fn strong_coupling_sites(&self) -> Option<usize> {
        match self.origin {
            Origin::StrongCoupling(n) => Some(n),
            _ => None,
        }
    }

    /// Weights at `prec` bits when exactly recomputable, otherwise the stored ones.
    pub fn weights_at(&self, prec: u32) -> Vec<HighReal> {
        match &self.origin {
            Origin::N4(j2) => {
                let (first, last) = n4_amplitudes(j2, prec + 16);
                first.iter().zip(&last).map(|(a, b)| (a * b).with_precision(prec)).collect()
            }
            Origin::StrongCoupling(n) => scl_spectrum(*n, prec).signed_weights().into_iter().rev().collect(),
            _ => self.weights(),
        }
    }
}

fn centre_float(spec: &ChainSpec, prec: u32) -> Result<Float, ChainError> {
    Ok(match spec.centre_exact()? {
        Some(c) => Float::with_val(prec, c),
        None => spec.centre(prec)?,
    })
}

/// `lambda(m)` of the centred matrix, with the endpoint branches written exactly.
fn branch_value(j2: &HighReal, n: u64, sign: BranchSign, m: u64, prec: u32) -> (HighReal, Option<String>) {
    let j = Float::with_val(prec, j2.as_float());
    if sign == BranchSign::Minus && m == 0 {
        return (HighReal::from(Float::with_val(prec, -2i32 * (j + 1u32))), Some("1".into()));
    }
    if sign == BranchSign::Minus && 2 * m == n {
        return (HighReal::from(Float::with_val(prec, 2u32 * (1u32 - j))), Some("-1".into()));
    }
    let c = cos_rational_pi(2 * m as i64, n, prec);
    let form = c.radical_form.clone();
    (eval_branch_eigenvalue(j2, &c, sign, prec), form)
}

fn find_ties(energies: &[HighReal]) -> Vec<usize> {
    energies.windows(2).enumerate().filter(|(_, w)| w[0].approx_eq(&w[1], COMPARE_GUARD)).map(|(i, _)| i).collect()
}

/// Closed-form eigenvalues `lambda_-(m)`, `m = 0..=N/2`, and `lambda_+(m)`, `m = 1..N/2`,
/// shifted back by `d + 2 J2`.
pub fn closed_form_spectrum(spec: &ChainSpec, prec: u32) -> Result<SpectralData, SpectralError> {
    closed_form_spectrum_with(spec, prec, AMPLITUDE_PREC)
}

pub fn closed_form_spectrum_with(spec: &ChainSpec, prec: u32, amp_prec: u32) -> Result<SpectralData, SpectralError> {
    let j2c = match spec.regime() {
        Regime::Finite(j) => j,
        Regime::StrongCouplingLimit => return Err(SpectralError::NotFinite),
    };
    let n = spec.n_sites() as u64;
    let wp = prec + 16;
    let j2 = j2c.to_high(wp);
    let centre = centre_float(spec, wp)?;
    let mut rows: Vec<(HighReal, BranchLabel)> = Vec::with_capacity(n as usize);
    let branches = (0..=n / 2).map(|m| (BranchSign::Minus, m)).chain((1..n / 2).map(|m| (BranchSign::Plus, m)));
    for (sign, m) in branches {
        let (lambda, radical_form) = branch_value(&j2, n, sign, m, wp);
        rows.push((lambda, BranchLabel { sign, m, symmetric: m % 2 == 0, radical_form }));
    }
    rows.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| (a.1.sign == BranchSign::Plus).cmp(&(b.1.sign == BranchSign::Plus)))
            .then_with(|| a.1.m.cmp(&b.1.m))
    });
    let lambdas: Vec<HighReal> = rows.iter().map(|r| r.0.clone()).collect();
    let blocks: Vec<bool> = rows.iter().map(|r| r.1.symmetric).collect();
    let centred = shift_matrix(&build_single_excitation_matrix(spec, amp_prec + 64)?, spec)?;
    let (amp_first, amp_last) = block_amplitudes(&centred, &lambdas, &blocks, amp_prec)?;
    let energies: Vec<HighReal> =
        lambdas.iter().map(|l| HighReal::from(Float::with_val(prec, l.as_float() + &centre))).collect();
    Ok(SpectralData {
        ties: find_ties(&energies),
        energies,
        amp_first,
        amp_last,
        source: SpectralSource::ClosedForm,
        labels: Some(rows.into_iter().map(|r| r.1).collect()),
        centre: spec.centre_exact()?,
        origin: Origin::Chain(spec.clone()),
    })
}

/// Tridiagonal halves `A + BS` (symmetric) and `A - BS` of a bisymmetric tridiagonal matrix.
fn half_blocks(m: &TridiagonalMatrix, prec: u32) -> [(Vec<Float>, Vec<Float>); 2] {
    let h = m.size() / 2;
    let diag: Vec<Float> = m.diag[..h].iter().map(|d| Float::with_val(prec, d.as_float())).collect();
    let off: Vec<Float> = m.offdiag[..h - 1].iter().map(|e| Float::with_val(prec, e.as_float())).collect();
    let b = m.offdiag[h - 1].as_float();
    let mut plus = diag.clone();
    let mut minus = diag;
    plus[h - 1] += b;
    minus[h - 1] -= b;
    [(plus, off.clone()), (minus, off)]
}

/// Endpoint amplitudes through the reversal-symmetric blocks; `symmetric[i]` picks the block for `energies[i]`.
fn block_amplitudes(
    m: &TridiagonalMatrix,
    energies: &[HighReal],
    symmetric: &[bool],
    amp_prec: u32,
) -> Result<(Vec<HighReal>, Vec<HighReal>), SpectralError> {
    let wp = amp_prec + 32;
    let blocks = half_blocks(m, wp);
    for want in [true, false] {
        let group: Vec<HighReal> =
            energies.iter().zip(symmetric).filter(|(_, &s)| s == want).map(|(e, _)| e.clone()).collect();
        numeric::check_separation(&group, amp_prec)?;
    }
    let root_half = Float::with_val(wp, 2).sqrt().recip();
    let mut first = Vec::with_capacity(energies.len());
    let mut last = Vec::with_capacity(energies.len());
    for (e, &sym) in energies.iter().zip(symmetric) {
        let (d, off) = &blocks[if sym { 0 } else { 1 }];
        let v = numeric::inverse_iteration(d, off, &Float::with_val(wp, e.as_float()), wp);
        let a = Float::with_val(amp_prec, &v[0] * &root_half);
        last.push(HighReal::from(if sym { a.clone() } else { -a.clone() }));
        first.push(HighReal::from(a));
    }
    Ok((first, last))
}

/// First and last eigenvector components of `m` for the given eigenvalues of `m`.
pub fn endpoint_amplitudes(
    m: &TridiagonalMatrix,
    energies: &[HighReal],
    amp_prec: u32,
) -> Result<(Vec<HighReal>, Vec<HighReal>), SpectralError> {
    if energies.len() != m.size() {
        return Err(SpectralError::SizeMismatch { given: energies.len(), size: m.size() });
    }
    if m.size().is_multiple_of(2) && m.size() >= 2 && m.is_centrosymmetric() {
        let wp = amp_prec + 32;
        let mut pooled: Vec<(Float, bool)> = Vec::with_capacity(m.size());
        for (blk, sym) in half_blocks(m, wp).iter().zip([true, false]) {
            for v in numeric::bisect_eigenvalues(&blk.0, &blk.1, wp)? {
                pooled.push((v, sym));
            }
        }
        pooled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut order: Vec<usize> = (0..energies.len()).collect();
        order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap_or(Ordering::Equal));
        let mut symmetric = vec![true; energies.len()];
        for (slot, &i) in order.iter().enumerate() {
            symmetric[i] = pooled[slot].1;
        }
        return block_amplitudes(m, energies, &symmetric, amp_prec);
    }
    let vecs = tridiagonal_eigenvectors(m, energies, amp_prec)?;
    let n = m.size();
    Ok(vecs.into_iter().map(|v| (v[0].clone(), v[n - 1].clone())).unzip())
}

/// Eigen-data of any symmetric tridiagonal matrix by bisection and inverse iteration.
pub fn numeric_spectrum(m: &TridiagonalMatrix, prec: u32) -> Result<SpectralData, SpectralError> {
    numeric_spectrum_with(m, prec, AMPLITUDE_PREC)
}

pub fn numeric_spectrum_with(m: &TridiagonalMatrix, prec: u32, amp_prec: u32) -> Result<SpectralData, SpectralError> {
    let vals = tridiagonal_eigenvalues(m, prec)?;
    let (amp_first, amp_last) = endpoint_amplitudes(m, &vals, amp_prec)?;
    let energies: Vec<HighReal> =
        vals.iter().map(|v| HighReal::from(Float::with_val(prec, v.as_float() + m.shift_applied.as_float()))).collect();
    Ok(SpectralData {
        ties: find_ties(&energies),
        energies,
        amp_first,
        amp_last,
        source: SpectralSource::NumericOracle,
        labels: None,
        centre: None,
        origin: Origin::Matrix(m.clone()),
    })
}

fn n4_energies(j2: &Coupling, prec: u32) -> Vec<HighReal> {
    let wp = prec + 16;
    let j = j2.to_float(wp);
    let r = Float::with_val(wp, j.clone().square() + 1u32).sqrt();
    let two_r = Float::with_val(wp, 2u32 * &r);
    [
        Float::with_val(wp, -2i32 - &j),
        Float::with_val(wp, &j - &two_r),
        Float::with_val(wp, 2i32 - &j),
        Float::with_val(wp, &j + &two_r),
    ]
    .into_iter()
    .map(|v| HighReal::from(Float::with_val(prec, v)))
    .collect()
}

/// `C_2`, `C_4 = 1 / (2 sqrt(1 + J^2 -+ J sqrt(1 + J^2)))`.
pub fn n4_c_constants(j2: &Coupling, prec: u32) -> (HighReal, HighReal) {
    let wp = prec + 16;
    let j = j2.to_float(wp);
    let rsq = Float::with_val(wp, j.clone().square() + 1u32);
    let jr = Float::with_val(wp, &j * Float::with_val(wp, rsq.clone().sqrt()));
    let c = |x: Float| HighReal::from(Float::with_val(prec, Float::with_val(wp, 2u32 * x.sqrt()).recip()));
    (c(Float::with_val(wp, &rsq - &jr)), c(Float::with_val(wp, &rsq + &jr)))
}

fn n4_amplitudes(j2: &Coupling, prec: u32) -> (Vec<HighReal>, Vec<HighReal>) {
    let (c2, c4) = n4_c_constants(j2, prec);
    let half = HighReal::from(Float::with_val(prec, 0.5));
    let first = vec![half.clone(), -&c2, half.clone(), -&c4];
    let last = vec![half.clone(), c2, half, c4];
    (first, last)
}

/// The four eigenpairs of the `N = 4` chain in closed form.
pub fn n4_exact(j2: &Coupling, prec: u32) -> Result<SpectralData, SpectralError> {
    if !j2.is_positive() {
        return Err(ChainError::NonPositiveCoupling.into());
    }
    let energies = n4_energies(j2, prec);
    let (amp_first, amp_last) = n4_amplitudes(j2, prec);
    let label = |sign, m: u64| BranchLabel { sign, m, symmetric: m.is_multiple_of(2), radical_form: None };
    let spec = ChainSpec::staggered(4, j2.clone())?;
    Ok(SpectralData {
        ties: find_ties(&energies),
        energies,
        amp_first,
        amp_last,
        source: SpectralSource::N4Exact,
        labels: Some(vec![
            label(BranchSign::Minus, 0),
            label(BranchSign::Minus, 1),
            label(BranchSign::Minus, 2),
            label(BranchSign::Plus, 1),
        ]),
        centre: spec.centre_exact()?,
        origin: Origin::N4(j2.clone()),
    })
}

/// `a3(m) = ((6m + 1) - (-1)^m) / 2 + 1`: the odd numbers not divisible by three, from `m = 0`.
pub fn a3(m: u64) -> u64 {
    let sign: i64 = if m.is_multiple_of(2) { 1 } else { -1 };
    (((6 * m as i64 + 1) - sign) / 2 + 1) as u64
}

/// The `m`-th (from one) odd number not divisible by five.
pub fn a5(m: u64) -> u64 {
    assert!(m >= 1, "a5 is indexed from one");
    let (q, r) = ((m - 1) / 4, (m - 1) % 4);
    10 * q + [1, 3, 7, 9][r as usize]
}

/// The imaginary-unit generating formula `(10m - 9 - (-1)^m + 2 Re((1 + i) i^m)) / 4 + 1`.
pub fn a5_formula(m: u64) -> i64 {
    let sign: i64 = if m.is_multiple_of(2) { 1 } else { -1 };
    let re = [2, -2, -2, 2][(m % 4) as usize];
    (10 * m as i64 - 9 - sign + re) / 4 + 1
}

impl SpectralData {
    /// Level offsets and signed weights of the strong-coupling limit, reordered ascending.
    pub(crate) fn from_scl(s: &SclSpectrum) -> SpectralData {
        let weights: Vec<HighReal> = s.signed_weights().into_iter().rev().collect();
        let amp_first: Vec<HighReal> = s.weights_sq.iter().rev().map(HighReal::sqrt).collect();
        let amp_last = amp_first.iter().zip(&weights).map(|(a, w)| if w.is_sign_negative() { -a } else { a.clone() }).collect();
        SpectralData {
            ties: Vec::new(),
            energies: s.offsets.iter().rev().cloned().collect(),
            amp_first,
            amp_last,
            source: SpectralSource::SclFirstOrder,
            labels: None,
            centre: Some(Rational::new()),
            origin: Origin::StrongCoupling(s.n_sites),
        }
    }
}
