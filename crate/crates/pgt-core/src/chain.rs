//! Staggered single-excitation Hamiltonians and their bisymmetric split.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::radicals::HighReal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("chain length {0} is odd; the staggered builder needs an even length")]
    OddLength(usize),
    #[error("chain length {0} is below the minimum of {1}")]
    TooShort(usize, usize),
    #[error("coupling must be positive")]
    NonPositiveCoupling,
    #[error("operation needs a finite coupling, not the strong-coupling limit")]
    NotFinite,
    #[error("cannot parse coupling {0:?}")]
    BadCoupling(String),
    #[error("matrix of size {0} cannot be split; an even size is required")]
    OddSplit(usize),
}

/// Second coupling of the staggered chain (the first is fixed to one).
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    Exact(Rational),
    Real(HighReal),
}

impl Coupling {
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coupling::Exact(Rational::from((num, den)))
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Coupling::Exact(r) => Float::with_val(prec, r),
            Coupling::Real(h) => Float::with_val(prec, h.as_float()),
        }
    }

    pub fn to_high(&self, prec: u32) -> HighReal {
        HighReal::from(self.to_float(prec))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coupling::Exact(r) => Some(r),
            Coupling::Real(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Coupling::Exact(r) => *r > 0,
            Coupling::Real(h) => *h.as_float() > 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }
}

impl FromStr for Coupling {
    type Err = ChainError;

    /// Accepts `b/a`, integers and finite decimals (kept exact), e.g. `4/3`, `10`, `0.5`, `1e-3`.
    fn from_str(text: &str) -> Result<Self, ChainError> {
        let bad = || ChainError::BadCoupling(text.to_string());
        let t = text.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Coupling::Exact(Rational::from((n, d))));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let n: Integer = digits.parse().map_err(|_| bad())?;
        let shift = exp - frac_part.len() as i32;
        let ten = Integer::from(10);
        let r = if shift >= 0 {
            Rational::from(n * ten.pow(shift as u32))
        } else {
            Rational::from((n, ten.pow((-shift) as u32)))
        };
        Ok(Coupling::Exact(r))
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Coupling::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coupling::Real(h) => write!(f, "{}", h.to_decimal(30)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    Finite(Coupling),
    StrongCouplingLimit,
}

/// Length and coupling regime of a centrosymmetric staggered chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    regime: Regime,
}

impl ChainSpec {
    pub fn staggered(n_sites: usize, j2: Coupling) -> Result<Self, ChainError> {
        if n_sites < 2 {
            return Err(ChainError::TooShort(n_sites, 2));
        }
        if n_sites % 2 == 1 {
            return Err(ChainError::OddLength(n_sites));
        }
        if !j2.is_positive() {
            return Err(ChainError::NonPositiveCoupling);
        }
        Ok(ChainSpec { n_sites, regime: Regime::Finite(j2) })
    }

    pub fn strong_coupling(n_sites: usize) -> Result<Self, ChainError> {
        if n_sites < 4 {
            return Err(ChainError::TooShort(n_sites, 4));
        }
        if n_sites % 2 == 1 {
            return Err(ChainError::OddLength(n_sites));
        }
        Ok(ChainSpec { n_sites, regime: Regime::StrongCouplingLimit })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn half(&self) -> usize {
        self.n_sites / 2
    }

    pub fn regime(&self) -> &Regime {
        &self.regime
    }

    pub fn coupling(&self) -> Result<&Coupling, ChainError> {
        match &self.regime {
            Regime::Finite(j) => Ok(j),
            Regime::StrongCouplingLimit => Err(ChainError::NotFinite),
        }
    }

    /// `d = -(N/2 - 2) - (N/2 - 1) J2`, exact when the coupling is rational.
    pub fn endpoint_diagonal_exact(&self) -> Result<Option<Rational>, ChainError> {
        let h = self.half() as i64;
        Ok(self.coupling()?.as_rational().map(|j| Rational::from(-(h - 2)) - Rational::from(h - 1) * j.clone()))
    }

    /// `d + 2 J2`, the shift between the chain matrix and its centred form.
    pub fn centre_exact(&self) -> Result<Option<Rational>, ChainError> {
        let j = self.coupling()?.as_rational().cloned();
        Ok(self.endpoint_diagonal_exact()?.zip(j).map(|(d, j)| d + 2 * j))
    }

    pub fn centre(&self, prec: u32) -> Result<Float, ChainError> {
        let h = self.half() as i64;
        let j = self.coupling()?.to_float(prec);
        Ok(Float::with_val(prec, -(h - 2)) - Float::with_val(prec, (h - 1) as u32 * &j) + Float::with_val(prec, 2u32 * &j))
    }
}

/// `N = alpha * 2^k` decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolvabilityClass {
    pub alpha: u64,
    pub k: u32,
    /// `alpha` is 2 or a product of distinct Fermat primes.
    pub exactly_solvable: bool,
    /// `alpha` has an explicit radical seed (2, 3 or 5).
    pub alpha_in_catalog: bool,
}

const FERMAT_PRODUCT: u64 = 3 * 5 * 17 * 257 * 65537;

pub fn classify_length(n: usize) -> SolvabilityClass {
    assert!(n >= 2, "chain length must be at least 2");
    let n = n as u64;
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    let (alpha, k) = if odd == 1 { (2, tz - 1) } else { (odd, tz) };
    let exactly_solvable = alpha == 2 || FERMAT_PRODUCT.is_multiple_of(alpha);
    SolvabilityClass { alpha, k, exactly_solvable, alpha_in_catalog: matches!(alpha, 2 | 3 | 5) }
}

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<HighReal>,
    pub offdiag: Vec<HighReal>,
    /// Amount subtracted from the diagonal of the originating matrix.
    pub shift_applied: HighReal,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<HighReal>, offdiag: Vec<HighReal>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len().max(1), "band lengths disagree");
        let prec = diag.first().map(|d| d.precision()).unwrap_or(64);
        TridiagonalMatrix { diag, offdiag, shift_applied: HighReal::zero(prec) }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn precision(&self) -> u32 {
        self.diag.iter().map(HighReal::precision).min().unwrap_or(64)
    }

    pub fn is_centrosymmetric(&self) -> bool {
        self.diag.iter().eq(self.diag.iter().rev()) && self.offdiag.iter().eq(self.offdiag.iter().rev())
    }

    pub fn trace(&self) -> HighReal {
        let prec = self.precision();
        HighReal::from(self.diag.iter().fold(Float::new(prec + 16), |acc, d| acc + d.as_float()))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.size();
        let prec = self.precision();
        let mut m = DenseMatrix::zeros(n, prec);
        for i in 0..n {
            m.set(i, i, self.diag[i].as_float().clone());
            if i + 1 < n {
                m.set(i, i + 1, self.offdiag[i].as_float().clone());
                m.set(i + 1, i, self.offdiag[i].as_float().clone());
            }
        }
        m
    }

    /// Nearest-neighbour couplings `J_i` (hopping `-2 J_i`), diagonal `-sum J + 2(J_{i-1} + J_i)`.
    pub fn from_couplings(couplings: &[Float]) -> Self {
        let n = couplings.len() + 1;
        let prec = couplings.iter().map(Float::prec).max().unwrap_or(64);
        let total = couplings.iter().fold(Float::new(prec), |a, j| a + j);
        let diag = (0..n)
            .map(|i| {
                let mut d = Float::with_val(prec, -&total);
                if i > 0 {
                    d += Float::with_val(prec, 2u32 * &couplings[i - 1]);
                }
                if i + 1 < n {
                    d += Float::with_val(prec, 2u32 * &couplings[i]);
                }
                HighReal::from(d)
            })
            .collect();
        let offdiag = couplings.iter().map(|j| HighReal::from(Float::with_val(prec, -2i32 * j))).collect();
        TridiagonalMatrix::new(diag, offdiag)
    }
}

/// Exact band entries of the chain matrix for a rational coupling.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactBands {
    pub diag: Vec<Rational>,
    pub offdiag: Vec<Rational>,
}

impl ExactBands {
    pub fn to_matrix(&self, prec: u32) -> TridiagonalMatrix {
        TridiagonalMatrix::new(
            self.diag.iter().map(|r| HighReal::from_rational(r, prec)).collect(),
            self.offdiag.iter().map(|r| HighReal::from_rational(r, prec)).collect(),
        )
    }

    pub fn trace(&self) -> Rational {
        self.diag.iter().fold(Rational::new(), |a, d| a + d)
    }
}

fn staggered_bond(i: usize, j: &Rational) -> Rational {
    if i.is_multiple_of(2) {
        Rational::from(-2)
    } else {
        Rational::from(-2) * j.clone()
    }
}

pub fn exact_single_excitation_bands(spec: &ChainSpec) -> Result<Option<ExactBands>, ChainError> {
    let Some(j) = spec.coupling()?.as_rational() else { return Ok(None) };
    let n = spec.n_sites();
    let d = spec.endpoint_diagonal_exact()?.expect("rational coupling");
    let interior: Rational = d.clone() + 2 * j.clone();
    let diag = (0..n).map(|i| if i == 0 || i == n - 1 { d.clone() } else { interior.clone() }).collect();
    let offdiag = (0..n - 1).map(|i| staggered_bond(i, j)).collect();
    Ok(Some(ExactBands { diag, offdiag }))
}

/// The single-excitation matrix `h`: endpoints `d`, interior `d + 2 J2`, bonds `-2, -2 J2, -2, ...`.
pub fn build_single_excitation_matrix(spec: &ChainSpec, prec: u32) -> Result<TridiagonalMatrix, ChainError> {
    if let Some(bands) = exact_single_excitation_bands(spec)? {
        return Ok(bands.to_matrix(prec));
    }
    let n = spec.n_sites();
    let wp = prec + 8;
    let j = spec.coupling()?.to_float(wp);
    let h = spec.half() as i64;
    let d = Float::with_val(wp, -(h - 2)) - Float::with_val(wp, (h - 1) as u32 * &j);
    let interior = Float::with_val(wp, &d + Float::with_val(wp, 2u32 * &j));
    let diag = (0..n)
        .map(|i| HighReal::from(Float::with_val(prec, if i == 0 || i == n - 1 { &d } else { &interior })))
        .collect();
    let offdiag = (0..n - 1)
        .map(|i| HighReal::from(Float::with_val(prec, if i % 2 == 0 { Float::with_val(wp, -2) } else { Float::with_val(wp, -2i32 * &j) })))
        .collect();
    Ok(TridiagonalMatrix::new(diag, offdiag))
}

/// Centred form `h - (d + 2 J2) I`.
pub fn shift_matrix(m: &TridiagonalMatrix, spec: &ChainSpec) -> Result<TridiagonalMatrix, ChainError> {
    let prec = m.precision();
    let (c, diag) = match (spec.centre_exact()?, exact_single_excitation_bands(spec)?) {
        (Some(c), Some(bands)) if bands.diag.len() == m.size() => {
            let diag = bands.diag.iter().map(|d| HighReal::from_rational(&Rational::from(d - &c), prec)).collect();
            (Float::with_val(prec, &c), diag)
        }
        _ => {
            let c = spec.centre(prec + 16)?;
            let diag = m.diag.iter().map(|d| HighReal::from(Float::with_val(prec, d.as_float() - &c))).collect();
            (c, diag)
        }
    };
    Ok(TridiagonalMatrix {
        diag,
        offdiag: m.offdiag.clone(),
        shift_applied: HighReal::from(Float::with_val(prec, m.shift_applied.as_float() + &c)),
    })
}

/// Recover eigenvalues of the unshifted matrix.
pub fn unshift_eigenvalues(m: &TridiagonalMatrix, values: &[HighReal]) -> Vec<HighReal> {
    values.iter().map(|v| v + &m.shift_applied).collect()
}

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Float>,
}

impl DenseMatrix {
    pub fn zeros(n: usize, prec: u32) -> Self {
        DenseMatrix { n, data: vec![Float::new(prec); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.data[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Float {
        &mut self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Float) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// `A + BS` and `A - BS` halves of a bisymmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BisymmetricSplit {
    pub a_plus: DenseMatrix,
    pub a_minus: DenseMatrix,
    /// The bond preceding the central one.
    pub corner_a: HighReal,
    /// The central bond, the single entry of `B`.
    pub corner_b: HighReal,
}

/// Splits a bisymmetric tridiagonal matrix of even size into its symmetric and antisymmetric blocks.
pub fn split_bisymmetric(m: &TridiagonalMatrix) -> Result<BisymmetricSplit, ChainError> {
    let n = m.size();
    if n % 2 == 1 || n == 0 {
        return Err(ChainError::OddSplit(n));
    }
    let h = n / 2;
    let prec = m.precision();
    let corner_b = m.offdiag[h - 1].clone();
    let corner_a = if h >= 2 { m.offdiag[h - 2].clone() } else { HighReal::zero(prec) };
    let mut a_plus = DenseMatrix::zeros(h, prec);
    for i in 0..h {
        a_plus.set(i, i, m.diag[i].as_float().clone());
        if i + 1 < h {
            a_plus.set(i, i + 1, m.offdiag[i].as_float().clone());
            a_plus.set(i + 1, i, m.offdiag[i].as_float().clone());
        }
    }
    let mut a_minus = a_plus.clone();
    *a_plus.get_mut(h - 1, h - 1) += corner_b.as_float();
    *a_minus.get_mut(h - 1, h - 1) -= corner_b.as_float();
    Ok(BisymmetricSplit { a_plus, a_minus, corner_a, corner_b })
}
