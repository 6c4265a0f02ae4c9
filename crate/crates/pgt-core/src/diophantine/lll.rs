//! Integral LLL (all Gram–Schmidt data kept as exact integers) and integer relations.

use rug::{Float, Integer};

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

/// Rounds `a / b` to the nearest integer, `b > 0`.
fn round_div(a: &Integer, b: &Integer) -> Integer {
    let twice = Integer::from(a * 2) + b;
    twice.div_rem_floor(Integer::from(b * 2)).0
}

/// LLL-reduces linearly independent integer rows with `delta = 3/4`.
pub fn lll_reduce(basis: &mut [Vec<Integer>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    // d[i] holds d_{i} with d[0] = 1; lambda[k][j] for j < k (0-based rows, 1-based d).
    let mut d = vec![Integer::from(1); n + 1];
    let mut lambda = vec![vec![Integer::new(); n]; n];
    d[1] = dot(&basis[0], &basis[0]);
    let mut k = 1usize;
    let mut k_max = 0usize;

    let redi = |basis: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize| {
        let two_l = Integer::from(&lambda[k][l] * 2).abs();
        if two_l > d[l + 1] {
            let q = round_div(&lambda[k][l], &d[l + 1]);
            let row_l = basis[l].clone();
            for (x, y) in basis[k].iter_mut().zip(&row_l) {
                *x -= Integer::from(&q * y);
            }
            lambda[k][l] -= Integer::from(&q * &d[l + 1]);
            for i in 0..l {
                let t = Integer::from(&q * &lambda[l][i]);
                lambda[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lambda[k][i] * &lambda[j][i])) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    assert!(u != 0, "LLL input rows must be independent");
                    d[k + 1] = u;
                }
            }
        }
        redi(basis, &mut lambda, &d, k, k - 1);
        // Lovász: 4 d_k d_{k-2} < 3 d_{k-1}^2 - 4 lambda^2 means swap.
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * 4;
        let rhs = Integer::from(d[k].square_ref()) * 3 - Integer::from(lambda[k][k - 1].square_ref()) * 4;
        if lhs < rhs {
            basis.swap(k, k - 1);
            for j in 0..k - 1 {
                let (a, b) = (lambda[k][j].clone(), lambda[k - 1][j].clone());
                lambda[k][j] = b;
                lambda[k - 1][j] = a;
            }
            let lam = lambda[k][k - 1].clone();
            let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(lam.square_ref())) / &d[k];
            for i in k + 1..=k_max {
                let t = lambda[i][k].clone();
                lambda[i][k] = (Integer::from(&d[k + 1] * &lambda[i][k - 1]) - Integer::from(&lam * &t)) / &d[k];
                lambda[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&lam * &lambda[i][k])) / &d[k + 1];
            }
            d[k] = b;
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                redi(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
}

/// Integer relations `sum c_i x_i = 0` among the values, found by LLL at `search_prec` bits and
/// kept only when they still hold at `verify_prec` bits. The returned vectors are independent.
pub fn integer_relations(values: &dyn Fn(u32) -> Vec<Float>, search_prec: u32, verify_prec: u32) -> Vec<Vec<Integer>> {
    let xs = values(search_prec);
    let n = xs.len();
    let scale = Float::with_val(search_prec, Float::i_exp(1, (search_prec as i32 * 7) / 8));
    let mut basis: Vec<Vec<Integer>> = (0..n)
        .map(|i| {
            let mut row = vec![Integer::new(); n + 1];
            row[i] = Integer::from(1);
            let v = Float::with_val(search_prec, &xs[i] * &scale);
            row[n] = v.to_integer().unwrap_or_default();
            row
        })
        .collect();
    lll_reduce(&mut basis);

    let check = values(verify_prec);
    let mut found: Vec<Vec<Integer>> = Vec::new();
    for row in basis {
        let coeffs: Vec<Integer> = row[..n].to_vec();
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        let size: u32 = coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0);
        if size as i32 > search_prec as i32 / 4 {
            continue;
        }
        let mut s = Float::with_val(verify_prec, 0);
        for (c, x) in coeffs.iter().zip(&check) {
            s += Float::with_val(verify_prec, x * c);
        }
        let tol = Float::with_val(verify_prec, Float::i_exp(1, -(verify_prec as i32 * 3) / 4 + size as i32));
        if s.abs() <= tol && independent_of(&found, &coeffs) {
            found.push(coeffs);
        }
    }
    found
}

fn independent_of(rows: &[Vec<Integer>], candidate: &[Integer]) -> bool {
    let mut all: Vec<Vec<rug::Rational>> =
        rows.iter().chain(std::iter::once(&candidate.to_vec())).map(|r| r.iter().map(rug::Rational::from).collect()).collect();
    rank(&mut all) == rows.len() + 1
}

/// Rank by exact Gaussian elimination (the input is destroyed).
pub(crate) fn rank(m: &mut [Vec<rug::Rational>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = rug::Rational::from(&m[i][c] / &m[r][c]);
                for j in c..cols {
                    let t = rug::Rational::from(&f * &m[r][j]);
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn reduces_textbook_basis() {
        let mut b = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        lll_reduce(&mut b);
        assert_eq!(b[0], ints(&[0, 1, 0]));
        let norms: Vec<Integer> = b.iter().map(|r| dot(r, r)).collect();
        assert!(norms.iter().all(|n| *n <= 5));
    }

    #[test]
    fn finds_golden_ratio_relation() {
        // phi^2 - phi - 1 = 0 among [1, phi, phi^2].
        let vals = |p: u32| {
            let phi = (Float::with_val(p, 5).sqrt() + 1u32) / 2u32;
            vec![Float::with_val(p, 1), phi.clone(), phi.square()]
        };
        let rel = integer_relations(&vals, 256, 512);
        assert_eq!(rel.len(), 1);
        let r = &rel[0];
        let sign = if r[2] > 0 { 1 } else { -1 };
        assert_eq!(r.iter().map(|c| Integer::from(c * sign)).collect::<Vec<_>>(), ints(&[-1, -1, 1]));
    }

    #[test]
    fn independent_surds_have_no_relation() {
        let vals = |p: u32| vec![Float::with_val(p, 1), Float::with_val(p, 2).sqrt(), Float::with_val(p, 3).sqrt()];
        assert!(integer_relations(&vals, 256, 512).is_empty());
    }
}
