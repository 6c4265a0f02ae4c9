//! First-order strong-coupling levels and weights.

use rug::{Float, Rational};

use super::SpectralData;
use crate::radicals::{cos_rational_pi, HighReal};

/// Low cluster of the chain as `J2 -> infinity`, indexed `i = 1..=n+1` with `n = N/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SclSpectrum {
    pub n_sites: usize,
    pub n: usize,
    /// `2 cos((i - 1) pi / n)`, the coupling-independent part of each level.
    pub offsets: Vec<HighReal>,
    /// `1/N` at both ends of the index range, `1/n` elsewhere.
    pub weights_sq: Vec<HighReal>,
    pub weights_sq_exact: Vec<Rational>,
    /// Dimensions of the low and high degenerate subspaces of the unperturbed term.
    pub degeneracies: (usize, usize),
}

impl SclSpectrum {
    /// `-J2 (n - 1) - n + 2`, the level common to the whole cluster.
    pub fn common_level(&self, j2: &Float) -> Float {
        let n = self.n as i64;
        Float::with_val(j2.prec(), -(n - 1) * j2.clone()) - (n - 2)
    }

    pub fn energies_first_order(&self, j2: &Float) -> Vec<HighReal> {
        let base = self.common_level(j2);
        self.offsets.iter().map(|o| HighReal::from(Float::with_val(j2.prec(), o.as_float() + &base))).collect()
    }

    /// `(-1)^(i - 1) w_i^2`, the end-to-end weight of level `i`.
    pub fn signed_weights(&self) -> Vec<HighReal> {
        self.weights_sq.iter().enumerate().map(|(i, w)| if i % 2 == 0 { w.clone() } else { -w }).collect()
    }

    pub fn to_spectral_data(&self) -> SpectralData {
        SpectralData::from_scl(self)
    }
}

pub fn scl_spectrum(n_sites: usize, prec: u32) -> SclSpectrum {
    assert!(n_sites >= 4 && n_sites.is_multiple_of(2), "strong-coupling spectrum needs an even length of at least 4");
    let n = n_sites / 2;
    let offsets = (0..=n)
        .map(|i| {
            let c = cos_rational_pi(i as i64, n as u64, prec + 8);
            HighReal::from(Float::with_val(prec, c.value.as_float() * 2u32))
        })
        .collect();
    let weights_sq_exact: Vec<Rational> = (0..=n)
        .map(|i| if i == 0 || i == n { Rational::from((1, n_sites as u64)) } else { Rational::from((1, n as u64)) })
        .collect();
    SclSpectrum {
        n_sites,
        n,
        offsets,
        weights_sq: weights_sq_exact.iter().map(|w| HighReal::from_rational(w, prec)).collect(),
        weights_sq_exact,
        degeneracies: (n + 1, n - 1),
    }
}
