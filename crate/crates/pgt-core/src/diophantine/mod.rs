//! Continued fractions, integer relations and parity-constrained simultaneous approximation.

mod alignment;
mod lll;
mod scanner;

use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::radicals::HighReal;

pub use alignment::{
    decompose_energies, parity_requirements, AlignmentLattice, BasisValue, Decomposition, DecompositionRoute,
    LatticeStatus, ParityRule, Requirement,
};
pub use lll::{integer_relations, lll_reduce};
pub use scanner::{
    frontier_scan, nearest, simultaneous_approx, to_phase, FrontierRecord, Phase, PhaseSystem, ScanOptions, SimultaneousHit,
    PHASE_ONE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiophantineError {
    #[error("continued fraction certified only to {certified} terms at the {cap}-bit cap")]
    PrecisionCap { certified: usize, cap: u32 },
    #[error("scan of {0} candidates exceeds the work budget of {1}")]
    RangeTooLarge(u128, u128),
    #[error("the value must be positive")]
    NonPositive,
    #[error("at least one irrational is required")]
    Empty,
    #[error("energy decomposition failed: {0}")]
    Decomposition(String),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
}

/// A real number that can be evaluated at any precision.
pub trait RealSource: Send + Sync {
    fn eval(&self, prec: u32) -> Float;
}

impl<F: Fn(u32) -> Float + Send + Sync> RealSource for F {
    fn eval(&self, prec: u32) -> Float {
        self(prec)
    }
}

/// `sqrt(r)` for a non-negative rational `r`.
pub fn sqrt_source(r: Rational) -> impl RealSource {
    move |prec: u32| Float::with_val(prec, &r).sqrt()
}

/// `p/q` with its residual `|q x - p|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Convergent {
    pub p: Integer,
    pub q: Integer,
    pub order: usize,
    pub residual: HighReal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<Integer>,
    pub convergents: Vec<Convergent>,
    /// Terms whose partial quotient is certified by an enclosing interval.
    pub certified: usize,
    /// The expansion terminated (the value is rational at the working precision).
    pub terminated: bool,
}

fn rational_cf(mut x: Rational, depth: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(depth);
    while out.len() < depth {
        let a = x.clone().floor().into_numer_denom().0;
        out.push(a.clone());
        let frac = x - a;
        if frac == 0 {
            break;
        }
        x = frac.recip();
    }
    out
}

fn residual(x: &dyn RealSource, p: &Integer, q: &Integer) -> HighReal {
    let prec = 128 + q.significant_bits() + p.significant_bits();
    let v = Float::with_val(prec, x.eval(prec) * q) - p;
    HighReal::from(Float::with_val(128, v.abs()))
}

/// First `depth` convergents; precision doubles until every partial quotient is enclosed.
pub fn continued_fraction(x: &dyn RealSource, depth: usize) -> Result<ContinuedFraction, DiophantineError> {
    const CAP: u32 = 16384;
    let mut prec = 128u32.max(depth as u32 * 8);
    loop {
        let v = x.eval(prec + 16);
        if v <= 0 {
            return Err(DiophantineError::NonPositive);
        }
        let ulp = Float::with_val(prec + 16, Float::i_exp(1, 8 - prec as i32)) * v.clone().abs();
        let lo = Float::with_val(prec + 16, &v - &ulp).to_rational().expect("finite");
        let hi = Float::with_val(prec + 16, &v + &ulp).to_rational().expect("finite");
        let a = rational_cf(lo, depth + 1);
        let b = rational_cf(hi, depth + 1);
        let common = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
        let mid = rational_cf(v.to_rational().expect("finite"), depth);
        let terminated = mid.len() < depth;
        if common >= depth || prec >= CAP {
            let certified = common.min(depth);
            let quotients: Vec<Integer> = if prec >= CAP { a[..certified].to_vec() } else { a[..depth].to_vec() };
            if prec >= CAP && certified < depth
                && certified == 0 {
                    return Err(DiophantineError::PrecisionCap { certified, cap: CAP });
                }
            return Ok(build_convergents(x, quotients, certified, terminated && common >= depth));
        }
        prec *= 2;
    }
}

fn build_convergents(x: &dyn RealSource, quotients: Vec<Integer>, certified: usize, terminated: bool) -> ContinuedFraction {
    let (mut p0, mut q0) = (Integer::from(1), Integer::new());
    let (mut p1, mut q1) = (quotients[0].clone(), Integer::from(1));
    let mut convergents = vec![Convergent { residual: residual(x, &p1, &q1), p: p1.clone(), q: q1.clone(), order: 0 }];
    for (j, a) in quotients.iter().enumerate().skip(1) {
        let p2 = Integer::from(a * &p1) + &p0;
        let q2 = Integer::from(a * &q1) + &q0;
        convergents.push(Convergent { residual: residual(x, &p2, &q2), p: p2.clone(), q: q2.clone(), order: j });
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    ContinuedFraction { partial_quotients: quotients, convergents, certified, terminated }
}

/// `a_0 = 1`, `a_{j+1} = a_j / 2 + 1 / a_j`, exactly.
pub fn newton_raphson_sqrt2(j: usize) -> Convergent {
    let mut a = Rational::from(1);
    for _ in 0..j {
        a = Rational::from(&a / 2u32) + Rational::from(a.recip_ref());
    }
    let (p, q) = a.into_numer_denom();
    let two = |prec: u32| Float::with_val(prec, 2).sqrt();
    Convergent { residual: residual(&two, &p, &q), p, q, order: j }
}

#[cfg(test)]
mod tests;
