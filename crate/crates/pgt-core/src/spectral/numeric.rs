//! Sturm-sequence bisection and inverse iteration for symmetric tridiagonal matrices.

use rayon::prelude::*;
use rug::Float;

use super::SpectralError;
use crate::chain::TridiagonalMatrix;
use crate::radicals::HighReal;

/// Default precision for eigenvector components, in bits.
pub const AMPLITUDE_PREC: u32 = 96;

/// Number of eigenvalues strictly below `x`.
pub(crate) fn sturm_count(diag: &[Float], off_sq: &[Float], x: &Float, prec: u32) -> usize {
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let mut count = 0;
    let mut q = Float::with_val(prec, &diag[0] - x);
    for i in 0..diag.len() {
        if i > 0 {
            let ratio = Float::with_val(prec, &off_sq[i - 1] / &q);
            q = Float::with_val(prec, &diag[i] - x);
            q -= ratio;
        }
        if q.is_zero() {
            q = -tiny.clone();
        }
        if q.is_sign_negative() {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[Float], off: &[Float], prec: u32) -> (Float, Float) {
    let n = diag.len();
    let mut lo = Float::with_val(prec, f64::INFINITY);
    let mut hi = Float::with_val(prec, f64::NEG_INFINITY);
    for i in 0..n {
        let mut r = Float::new(prec);
        if i > 0 {
            r += off[i - 1].clone().abs();
        }
        if i + 1 < n {
            r += off[i].clone().abs();
        }
        let a = Float::with_val(prec, &diag[i] - &r);
        let b = Float::with_val(prec, &diag[i] + &r);
        if a < lo {
            lo = a;
        }
        if b > hi {
            hi = b;
        }
    }
    let pad = (Float::with_val(prec, &hi - &lo).abs() + 1u32) >> 4;
    (lo - &pad, hi + pad)
}

/// All eigenvalues, ascending, to about `prec` bits.
pub(crate) fn bisect_eigenvalues(diag: &[Float], off: &[Float], prec: u32) -> Result<Vec<Float>, SpectralError> {
    let wp = prec + 32;
    let diag: Vec<Float> = diag.iter().map(|d| Float::with_val(wp, d)).collect();
    let off_sq: Vec<Float> = off.iter().map(|e| Float::with_val(wp, e.clone().square())).collect();
    let (lo0, hi0) = gershgorin(&diag, off, wp);
    let width_bits = Float::with_val(64, &hi0 - &lo0).log2().ceil().to_f64().max(0.0) as u32;
    let scale = Float::with_val(wp, lo0.clone().abs().max(&hi0.clone().abs())).max(&Float::with_val(wp, 1));
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 4)) * scale;
    let cap = prec + width_bits + 64;
    (0..diag.len())
        .into_par_iter()
        .map(|k| {
            let (mut lo, mut hi) = (lo0.clone(), hi0.clone());
            let mut iters = 0;
            while Float::with_val(wp, &hi - &lo) > tol {
                if iters > cap {
                    return Err(SpectralError::NoConvergence { index: k, lo: lo.to_string(), hi: hi.to_string() });
                }
                let mid = Float::with_val(wp, &lo + &hi) >> 1;
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(&diag, &off_sq, &mid, wp) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iters += 1;
            }
            Ok(Float::with_val(prec, &lo + &hi) >> 1)
        })
        .collect()
}

/// Solves the tridiagonal system with partial pivoting; `b` is overwritten with the solution.
fn solve_tridiagonal(mut dl: Vec<Float>, mut d: Vec<Float>, mut du: Vec<Float>, b: &mut [Float], tiny: &Float) {
    let n = d.len();
    let prec = tiny.prec();
    for i in 0..n.saturating_sub(1) {
        if d[i].clone().abs() >= dl[i].clone().abs() {
            if d[i].is_zero() {
                d[i] = tiny.clone();
            }
            let fact = Float::with_val(prec, &dl[i] / &d[i]);
            let t = Float::with_val(prec, &fact * &du[i]);
            d[i + 1] -= t;
            let t = Float::with_val(prec, &fact * &b[i]);
            b[i + 1] -= t;
            dl[i] = Float::new(prec);
        } else {
            let fact = Float::with_val(prec, &d[i] / &dl[i]);
            d[i] = dl[i].clone();
            let temp = d[i + 1].clone();
            d[i + 1] = Float::with_val(prec, &du[i] - Float::with_val(prec, &fact * &temp));
            if i + 2 < n {
                dl[i] = du[i + 1].clone();
                du[i + 1] = -Float::with_val(prec, &fact * &dl[i]);
            }
            du[i] = temp;
            let temp = b[i].clone();
            b[i] = b[i + 1].clone();
            b[i + 1] = Float::with_val(prec, &temp - Float::with_val(prec, &fact * &b[i + 1]));
        }
    }
    if d[n - 1].is_zero() {
        d[n - 1] = tiny.clone();
    }
    b[n - 1] /= &d[n - 1];
    if n >= 2 {
        let t = Float::with_val(prec, &du[n - 2] * &b[n - 1]);
        b[n - 2] -= t;
        b[n - 2] /= &d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        let t = Float::with_val(prec, &du[i] * &b[i + 1]) + Float::with_val(prec, &dl[i] * &b[i + 2]);
        b[i] -= t;
        b[i] /= &d[i];
    }
}

fn normalize(v: &mut [Float]) {
    let prec = v[0].prec();
    let norm = v.iter().fold(Float::new(prec), |a, x| a + x.clone().square()).sqrt();
    for x in v.iter_mut() {
        *x /= &norm;
    }
}

/// Unit eigenvector for the eigenvalue `lambda`, sign fixed so the first component is non-negative.
pub(crate) fn inverse_iteration(diag: &[Float], off: &[Float], lambda: &Float, prec: u32) -> Vec<Float> {
    let n = diag.len();
    if n == 1 {
        return vec![Float::with_val(prec, 1)];
    }
    let scale = diag.iter().chain(off).fold(Float::with_val(prec, 1), |a, x| a.max(&x.clone().abs()));
    let nudge = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2)) * &scale;
    let mu = Float::with_val(prec, lambda + &nudge);
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8)) * &scale;
    let shifted: Vec<Float> = diag.iter().map(|d| Float::with_val(prec, d - &mu)).collect();
    let off: Vec<Float> = off.iter().map(|e| Float::with_val(prec, e)).collect();
    let mut v: Vec<Float> = (0..n).map(|i| Float::with_val(prec, 1 + (i % 3) as i32)).collect();
    normalize(&mut v);
    let tol = Float::with_val(prec, Float::i_exp(1, 12 - prec as i32));
    for _ in 0..8 {
        let mut w = v.clone();
        solve_tridiagonal(off.clone(), shifted.clone(), off.clone(), &mut w, &tiny);
        normalize(&mut w);
        let sign = if w[0].is_sign_negative() { -1 } else { 1 };
        for x in w.iter_mut() {
            *x *= sign;
        }
        let change = v.iter().zip(&w).fold(Float::new(prec), |a, (x, y)| a.max(&Float::with_val(prec, x - y).abs()));
        v = w;
        if change < tol {
            break;
        }
    }
    if v[0].is_zero() && v[n - 1].is_sign_negative() {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

pub(crate) fn floats(xs: &[HighReal], prec: u32) -> Vec<Float> {
    xs.iter().map(|x| Float::with_val(prec, x.as_float())).collect()
}

/// Eigenvalues of a symmetric tridiagonal matrix by Sturm bisection, ascending.
pub fn tridiagonal_eigenvalues(m: &TridiagonalMatrix, prec: u32) -> Result<Vec<HighReal>, SpectralError> {
    let p = prec.max(m.precision());
    let vals = bisect_eigenvalues(&floats(&m.diag, p), &floats(&m.offdiag, p), prec)?;
    Ok(vals.into_iter().map(HighReal::from).collect())
}

/// Full unit eigenvectors for the supplied eigenvalues.
pub fn tridiagonal_eigenvectors(
    m: &TridiagonalMatrix,
    energies: &[HighReal],
    amp_prec: u32,
) -> Result<Vec<Vec<HighReal>>, SpectralError> {
    check_separation(energies, amp_prec)?;
    let diag = floats(&m.diag, amp_prec + 32);
    let off = floats(&m.offdiag, amp_prec + 32);
    Ok(energies
        .par_iter()
        .map(|e| {
            let lambda = Float::with_val(amp_prec + 32, e.as_float());
            inverse_iteration(&diag, &off, &lambda, amp_prec + 32)
                .into_iter()
                .map(|x| HighReal::from(Float::with_val(amp_prec, x)))
                .collect()
        })
        .collect())
}

pub(crate) fn check_separation(energies: &[HighReal], amp_prec: u32) -> Result<(), SpectralError> {
    let mut sorted: Vec<&HighReal> = energies.iter().collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
    let scale = sorted.iter().fold(1.0f64, |a, x| a.max(x.to_f64().abs()));
    let min_gap = scale * 2f64.powi(-(amp_prec as i32) / 2 + 4);
    for w in sorted.windows(2) {
        let gap = w[1].distance(w[0]);
        if gap < min_gap {
            return Err(SpectralError::NearDegenerate { energy: w[0].to_f64(), gap, amp_prec });
        }
    }
    Ok(())
}
