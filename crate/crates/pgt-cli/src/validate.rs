//! Oracle-equivalence suite behind `pgt validate`.

use pgt_core::chain::{build_single_excitation_matrix, ChainSpec, Coupling};
use pgt_core::dynamics::{build_series, evaluate_p, localization, Time};
use pgt_core::oracle::{dense_from_hamiltonian, evolve_direct, sieve_odd_nonmultiples, staggered_couplings};
use pgt_core::spectral::{a3, a5, closed_form_spectrum_with, tridiagonal_eigenvalues, tridiagonal_eigenvectors};
use pgt_core::HighReal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rug::Float;

use crate::dto::ValidationLine;

pub const COUPLINGS: [(i64, i64); 4] = [(1, 2), (1, 1), (3, 1), (10, 1)];

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
}

fn line(check: String, passed: bool, detail: String) -> ValidationLine {
    ValidationLine { check, passed, detail }
}

/// Closed-form eigenvalues against Sturm bisection, to `2^-64` at 128 bits.
pub fn spectrum_check(n: usize, j2: &Coupling) -> ValidationLine {
    let name = format!("spectrum n={n} j2={j2}");
    let run = || -> Result<f64, String> {
        let spec = ChainSpec::staggered(n, j2.clone()).map_err(|e| e.to_string())?;
        let closed = closed_form_spectrum_with(&spec, 128, 96).map_err(|e| e.to_string())?;
        let m = build_single_excitation_matrix(&spec, 160).map_err(|e| e.to_string())?;
        let sturm = tridiagonal_eigenvalues(&m, 128).map_err(|e| e.to_string())?;
        Ok(closed.energies.iter().zip(&sturm).map(|(a, b)| a.distance(b)).fold(0.0, f64::max))
    };
    match run() {
        Ok(d) => line(name, d <= 2f64.powi(-64), format!("max |closed - sturm| = {d:e}")),
        Err(e) => line(name, false, e),
    }
}

/// Dense oracle against the cosine series at seeded random times in `(0, 100)`.
pub fn evolution_check(n: usize, j2: &Coupling, times: &[f64]) -> ValidationLine {
    let name = format!("evolution n={n} j2={j2}");
    let run = || -> Result<f64, String> {
        let spec = ChainSpec::staggered(n, j2.clone()).map_err(|e| e.to_string())?;
        let sd = closed_form_spectrum_with(&spec, 160, 160).map_err(|e| e.to_string())?;
        let series = build_series(&sd);
        let dense = dense_from_hamiltonian(&staggered_couplings(n, &j2.to_float(256))).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for &t in times {
            let th = HighReal::from_f64(t, 256);
            let a = evaluate_p(&series, &Time::Real(th.clone()), 24).map_err(|e| e.to_string())?;
            let b = evolve_direct(&dense, &th, 24).map_err(|e| e.to_string())?;
            worst = worst.max(a.distance(&b));
        }
        Ok(worst)
    };
    match run() {
        Ok(d) => line(name, d <= 1e-20, format!("max |series - dense| = {d:e} over {} times", times.len())),
        Err(e) => line(name, false, e),
    }
}

/// Rows and columns of the localization matrix sum to one.
pub fn localization_check(n: usize, j2: &Coupling) -> ValidationLine {
    let name = format!("localization n={n} j2={j2}");
    let run = || -> Result<f64, String> {
        let spec = ChainSpec::staggered(n, j2.clone()).map_err(|e| e.to_string())?;
        let sd = closed_form_spectrum_with(&spec, 192, 160).map_err(|e| e.to_string())?;
        let m = build_single_excitation_matrix(&spec, 224).map_err(|e| e.to_string())?;
        let vecs = tridiagonal_eigenvectors(&m, &sd.energies, 160).map_err(|e| e.to_string())?;
        let loc = localization(&vecs);
        let one = Float::with_val(160, 1);
        let mut worst = Float::new(160);
        let size = loc.probabilities.len();
        for a in 0..size {
            let row = Float::with_val(160, Float::sum(loc.probabilities[a].iter().map(|x| x.as_float())));
            let col = Float::with_val(160, Float::sum(loc.probabilities.iter().map(|r| r[a].as_float())));
            for s in [row, col] {
                let d = Float::with_val(160, &s - &one).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst.to_f64())
    };
    match run() {
        Ok(d) => line(name, d <= 1e-30, format!("max |sum - 1| = {d:e}")),
        Err(e) => line(name, false, e),
    }
}

/// Index formulas against the sieves for `m <= 1000`.
pub fn sieve_checks() -> Vec<ValidationLine> {
    let s3 = sieve_odd_nonmultiples(3, 1001);
    let bad3 = (0..=1000u64).filter(|&m| a3(m) != s3[m as usize]).count();
    let s5 = sieve_odd_nonmultiples(5, 1000);
    let bad5 = (1..=1000u64).filter(|&m| a5(m) != s5[m as usize - 1]).count();
    vec![
        line("sieve a3".into(), bad3 == 0, format!("{bad3} mismatches for m <= 1000")),
        line("sieve a5".into(), bad5 == 0, format!("{bad5} mismatches for m <= 1000")),
    ]
}

pub fn run_suite(opts: &ValidateOptions) -> Vec<ValidationLine> {
    let lengths: Vec<usize> = (4..=opts.max_n.max(4)).step_by(2).collect();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut jobs = Vec::new();
    for &n in &lengths {
        for &(a, b) in &COUPLINGS {
            let times: Vec<f64> = (0..opts.samples).map(|_| rng.random_range(0.0..100.0)).collect();
            jobs.push((n, Coupling::from_ratio(a, b), times));
        }
    }
    let mut out: Vec<ValidationLine> = jobs
        .par_iter()
        .flat_map_iter(|(n, j2, times)| {
            let mut v = vec![spectrum_check(*n, j2), localization_check(*n, j2)];
            if *n <= 32 {
                v.push(evolution_check(*n, j2, times));
            }
            v
        })
        .collect();
    out.extend(sieve_checks());
    out
}
