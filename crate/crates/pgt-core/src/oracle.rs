//! Brute-force cross-checks: dense matrices from the spin algebra and a Jacobi eigensolver.

use rug::Float;
use thiserror::Error;

use crate::radicals::HighReal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("Jacobi sweeps did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("a chain needs at least one coupling")]
    Empty,
}

/// Real symmetric matrix of the Hamiltonian in the one-excitation basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    entries: Vec<Float>,
}

impl DenseHermitian {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.entries[i * self.n + j]
    }

    pub fn precision(&self) -> u32 {
        self.entries.first().map_or(64, Float::prec)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Action of `sx sx + sy sy + sz sz` on two spins `(up_a, up_b)`: diagonal sign and flip amplitude.
fn exchange_on_pair(up_a: bool, up_b: bool) -> (i32, i32) {
    let s = |up: bool| if up { 1 } else { -1 };
    let zz = s(up_a) * s(up_b);
    // sx flips with amplitude 1; sy flips with amplitude i*s, so sy sy contributes -s_a s_b
    let flip = 1 - s(up_a) * s(up_b);
    (zz, flip)
}

/// `<i| -sum_k J_k sigma_k . sigma_{k+1} |j>` over states with one spin up.
pub fn dense_from_hamiltonian(couplings: &[Float]) -> Result<DenseHermitian, OracleError> {
    if couplings.is_empty() {
        return Err(OracleError::Empty);
    }
    let n = couplings.len() + 1;
    let prec = couplings.iter().map(Float::prec).max().unwrap_or(64);
    let mut entries = vec![Float::new(prec); n * n];
    for site in 0..n {
        let state: u64 = 1 << site;
        for (k, j) in couplings.iter().enumerate() {
            let up_a = state >> k & 1 == 1;
            let up_b = state >> (k + 1) & 1 == 1;
            let (zz, flip) = exchange_on_pair(up_a, up_b);
            entries[site * n + site] -= Float::with_val(prec, j * zz);
            if flip != 0 {
                let target = (state ^ (0b11 << k)).trailing_zeros() as usize;
                entries[target * n + site] -= Float::with_val(prec, j * flip);
            }
        }
    }
    Ok(DenseHermitian { n, entries })
}

/// Staggered couplings `1, J2, 1, ...` for `n_sites` sites.
pub fn staggered_couplings(n_sites: usize, j2: &Float) -> Vec<Float> {
    (0..n_sites - 1).map(|k| if k % 2 == 0 { Float::with_val(j2.prec(), 1) } else { j2.clone() }).collect()
}

/// Eigenvalues (ascending) and column eigenvectors by cyclic Jacobi rotations.
pub fn jacobi_eigen(m: &DenseHermitian, prec: u32) -> Result<(Vec<Float>, Vec<Vec<Float>>), OracleError> {
    let n = m.n;
    let mut a: Vec<Vec<Float>> = (0..n).map(|i| (0..n).map(|j| Float::with_val(prec, m.get(i, j))).collect()).collect();
    let mut v: Vec<Vec<Float>> =
        (0..n).map(|i| (0..n).map(|j| Float::with_val(prec, (i == j) as u32)).collect()).collect();
    let scale = a.iter().flatten().fold(Float::with_val(prec, 1), |s, x| s.max(&x.clone().abs()));
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4)) * &scale;
    let max_sweeps = 60 + prec as usize / 16;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let off = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).fold(Float::new(prec), |s, (i, j)| {
            s.max(&a[i][j].clone().abs())
        });
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].clone().abs() <= Float::with_val(prec, &tol >> 8u32) {
                    continue;
                }
                let theta = Float::with_val(prec, &a[q][q] - &a[p][p]) / Float::with_val(prec, 2u32 * &a[p][q]);
                let sign = if theta.is_sign_negative() { -1 } else { 1 };
                let root = Float::with_val(prec, theta.clone().square() + 1u32).sqrt();
                let t = Float::with_val(prec, sign) / (theta.abs() + root);
                let c = Float::with_val(prec, t.clone().square() + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = Float::with_val(prec, &c * &akp) - Float::with_val(prec, &s * &akq);
                    a[k][q] = Float::with_val(prec, &s * &akp) + Float::with_val(prec, &c * &akq);
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = Float::with_val(prec, &c * &apk) - Float::with_val(prec, &s * &aqk);
                    a[q][k] = Float::with_val(prec, &s * &apk) + Float::with_val(prec, &c * &aqk);
                }
                for row in v.iter_mut() {
                    let vp = row[p].clone();
                    let vq = row[q].clone();
                    row[p] = Float::with_val(prec, &c * &vp) - Float::with_val(prec, &s * &vq);
                    row[q] = Float::with_val(prec, &s * &vp) + Float::with_val(prec, &c * &vq);
                }
            }
        }
    }
    if !converged {
        return Err(OracleError::NoConvergence(max_sweeps));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].partial_cmp(&a[y][y]).expect("finite"));
    let values = order.iter().map(|&k| a[k][k].clone()).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|i| v[i][k].clone()).collect()).collect();
    Ok((values, vectors))
}

/// `|<1| exp(-i H t) |N>|^2` from a full dense diagonalisation.
pub fn evolve_direct(m: &DenseHermitian, t: &HighReal, digits: u32) -> Result<HighReal, OracleError> {
    let e_bits = (0..m.n).map(|i| m.get(i, i).to_f64().abs()).fold(1.0f64, f64::max).log2().ceil() as u32 + 2;
    let t_bits = t.to_f64().abs().max(1.0).log2().ceil() as u32;
    let prec = e_bits + t_bits + (digits as f64 * 3.33).ceil() as u32 + 48;
    let (values, vectors) = jacobi_eigen(m, prec)?;
    let time = Float::with_val(prec, t.as_float());
    let mut re = Float::new(prec);
    let mut im = Float::new(prec);
    for (e, vec) in values.iter().zip(&vectors) {
        let w = Float::with_val(prec, &vec[0] * &vec[m.n - 1]);
        let (s, c) = Float::with_val(prec, e * &time).sin_cos(Float::new(prec));
        re += Float::with_val(prec, &w * &c);
        im -= Float::with_val(prec, &w * &s);
    }
    Ok(HighReal::from(re.square() + im.square()))
}

/// The first `count` odd positive integers not divisible by `divisor`.
pub fn sieve_odd_nonmultiples(divisor: u64, count: usize) -> Vec<u64> {
    (1u64..).step_by(2).filter(|x| x % divisor != 0).take(count).collect()
}
