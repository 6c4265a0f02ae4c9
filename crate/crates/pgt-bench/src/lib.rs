//! Fixtures shared by the benchmarks.

use pgt_core::chain::{ChainSpec, Coupling};
use pgt_core::diophantine::{to_phase, Phase, PhaseSystem};
use rug::Float;

pub fn staggered(n: usize, num: i64, den: i64) -> ChainSpec {
    ChainSpec::staggered(n, Coupling::from_ratio(num, den)).expect("valid chain")
}

/// Phase system with the three irrational frequencies of the sixteen-site limit
/// and the end weights of that limit.
pub fn sixteen_site_phases() -> PhaseSystem {
    let r2 = Float::with_val(192, 2).sqrt();
    let values = [
        Float::with_val(192, 0),
        Float::with_val(192, 2 - r2.clone()).sqrt(),
        r2.clone(),
        Float::with_val(192, 2 + r2).sqrt(),
        Float::with_val(192, 2),
    ];
    let step: Vec<Phase> = values.iter().map(to_phase).collect();
    let start = vec![0; step.len()];
    PhaseSystem::new(start, step, &[0.125, -0.25, 0.25, -0.25, 0.125])
}
