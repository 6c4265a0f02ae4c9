//! Exact structure of the frequencies and the alignment conditions they impose.
//!
//! Each energy is written `E_i = r_i + sum_k D_ik xi_k` with rational `r_i`, integer `D_ik`
//! and `1, xi_1, ..., xi_K` linearly independent over the rationals. Perfect transfer at
//! `t = pi tau` needs `(E_i - E_0) tau = sigma_i - sigma_0 (mod 2)` for every weighted level,
//! where `sigma_i = 1` exactly when the end-to-end weight is negative.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Complete, Float, Integer, Rational};

use super::lll::integer_relations;
use super::DiophantineError;
use crate::dynamics::{CosineSumSeries, TimePoint};
use crate::spectral::SpectralData;

/// An irrational basis element `coef * core`.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisValue {
    /// `coef * sqrt(radicand)`.
    Surd { coef: Rational, radicand: Integer },
    /// `coef * 2 cos(m pi / n)`.
    TwiceCos { coef: Rational, m: u64, n: u64 },
    /// `coef * value`, with `value` known to about a thousand bits.
    Numeric { coef: Rational, value: Float },
}

impl BasisValue {
    pub fn eval(&self, prec: u32) -> Float {
        let wp = prec + 16;
        let (coef, core) = match self {
            BasisValue::Surd { coef, radicand } => (coef, Float::with_val(wp, radicand).sqrt()),
            BasisValue::TwiceCos { coef, m, n } => {
                let c = crate::radicals::cos_rational_pi(*m as i64, *n, wp);
                (coef, Float::with_val(wp, c.value.as_float() * 2u32))
            }
            BasisValue::Numeric { coef, value } => (coef, Float::with_val(wp, value)),
        };
        Float::with_val(prec, core * coef)
    }

    pub fn coefficient(&self) -> &Rational {
        match self {
            BasisValue::Surd { coef, .. } | BasisValue::TwiceCos { coef, .. } | BasisValue::Numeric { coef, .. } => coef,
        }
    }

    pub fn scaled(&self, by: &Rational) -> BasisValue {
        let mut out = self.clone();
        match &mut out {
            BasisValue::Surd { coef, .. } | BasisValue::TwiceCos { coef, .. } | BasisValue::Numeric { coef, .. } => {
                *coef *= by;
            }
        }
        out
    }
}

impl fmt::Display for BasisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let core = match self {
            BasisValue::Surd { radicand, .. } => format!("sqrt({radicand})"),
            BasisValue::TwiceCos { m, n, .. } => {
                let g = gcd_u64(*m, *n);
                let (m, n) = (m / g, n / g);
                if m == 1 {
                    format!("2cos(pi/{n})")
                } else {
                    format!("2cos({m}pi/{n})")
                }
            }
            BasisValue::Numeric { value, .. } => format!("{:.12}", value.to_f64()),
        };
        let c = self.coefficient();
        if *c == 1 {
            f.write_str(&core)
        } else if *c.denom() == 1 {
            write!(f, "{}*{core}", c.numer())
        } else if *c.numer() == 1 {
            write!(f, "{core}/{}", c.denom())
        } else {
            write!(f, "({c})*{core}")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionRoute {
    /// Levels of the form `rational + rational * sqrt(integer)`.
    SquareRoots,
    /// Strong-coupling offsets `2 cos(j pi / n)` with `n` a power of two.
    Cyclotomic,
    /// Integer relations found by lattice reduction.
    IntegerRelation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub rational: Vec<Rational>,
    pub coeffs: Vec<Vec<i64>>,
    pub basis: Vec<BasisValue>,
    pub route: DecompositionRoute,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_u64(b, a % b)
    }
}

/// Positive rational gcd of non-zero entries; `None` when all vanish.
fn gcd_q<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut num = Integer::new();
    let mut den = Integer::from(1);
    let mut any = false;
    for v in values {
        if *v == 0 {
            continue;
        }
        any = true;
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    any.then(|| Rational::from((num, den)))
}

/// `cos(2 m pi / n)` when rational.
fn rational_cos(m: u64, n: u64) -> Option<Rational> {
    let g = gcd_u64(2 * m, n);
    let (p, d) = ((2 * m / g) % (2 * n / g), n / g);
    match d {
        1 => Some(Rational::from(if p % 2 == 0 { 1 } else { -1 })),
        2 => Some(Rational::new()),
        3 => Some(Rational::from((if matches!(p % 6, 1 | 5) { 1 } else { -1 }, 2))),
        _ => None,
    }
}

fn square_root_route(sd: &SpectralData) -> Option<Decomposition> {
    let spec = sd.chain_spec()?;
    let j = spec.coupling().ok()?.as_rational()?.clone();
    let centre = sd.centre.clone()?;
    let labels = sd.labels.as_ref()?;
    let n = spec.n_sites() as u64;
    let (b, a) = (j.numer().clone(), j.denom().clone());
    let mut rational = Vec::with_capacity(labels.len());
    // (radicand representative, [(level, coefficient)])
    let mut groups: Vec<(Integer, Vec<(usize, Rational)>)> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let sign = l.sign.factor();
        if sign < 0 && l.m == 0 {
            rational.push((-2 * (Rational::from(1) + &j)) + &centre);
            continue;
        }
        if sign < 0 && 2 * l.m == n {
            rational.push((2 * (Rational::from(1) - &j)) + &centre);
            continue;
        }
        let c = rational_cos(l.m, n)?;
        let cross = &c * Rational::from(2 * (&a * &b).complete());
        debug_assert_eq!(*cross.denom(), 1);
        let rad = (a.square_ref().complete() + b.square_ref()) + cross.numer();
        let coef = Rational::from((Integer::from(2 * sign), a.clone()));
        if rad.is_perfect_square() {
            rational.push(coef * rad.sqrt() + &centre);
            continue;
        }
        rational.push(centre.clone());
        match groups.iter_mut().find(|(r0, _)| (r0 * &rad).complete().is_perfect_square()) {
            Some((r0, members)) => {
                let ratio = Rational::from(((&*r0 * &rad).complete().sqrt(), r0.clone()));
                members.push((i, coef * ratio));
            }
            None => groups.push((rad, vec![(i, coef)])),
        }
    }
    let mut coeffs = vec![vec![0i64; groups.len()]; labels.len()];
    let mut basis = Vec::with_capacity(groups.len());
    for (k, (radicand, members)) in groups.into_iter().enumerate() {
        let scale = gcd_q(members.iter().map(|(_, c)| c)).expect("non-empty group");
        for (i, c) in members {
            coeffs[i][k] = (c / &scale).numer().to_i64()?;
        }
        basis.push(BasisValue::Surd { coef: scale, radicand });
    }
    Some(Decomposition { rational, coeffs, basis, route: DecompositionRoute::SquareRoots })
}

fn cyclotomic_route(sd: &SpectralData) -> Option<Decomposition> {
    let n = sd.strong_coupling_sites()? / 2;
    if !n.is_power_of_two() || n < 2 {
        return None;
    }
    let kdim = n / 2 - 1;
    let mut rational = Vec::with_capacity(n + 1);
    let mut coeffs = vec![vec![0i64; kdim]; n + 1];
    // Ascending order: level k carries offset 2 cos((n - k) pi / n).
    for (k, row) in coeffs.iter_mut().enumerate() {
        let i = n - k;
        rational.push(Rational::from(match i {
            0 => 2,
            _ if i == n => -2,
            _ => 0,
        }));
        if i != 0 && i != n && 2 * i != n {
            if 2 * i < n {
                row[i - 1] = 1;
            } else {
                row[n - i - 1] = -1;
            }
        }
    }
    let basis = (1..=kdim as u64).map(|j| BasisValue::TwiceCos { coef: Rational::from(1), m: j, n: n as u64 }).collect();
    Some(Decomposition { rational, coeffs, basis, route: DecompositionRoute::Cyclotomic })
}

fn relation_route(sd: &SpectralData) -> Result<Decomposition, DiophantineError> {
    const SEARCH: u32 = 512;
    const VERIFY: u32 = 1024;
    let n = sd.len();
    let energies_hi = sd.energies_at(VERIFY + 64)?;
    let values = |prec: u32| {
        let mut v = vec![Float::with_val(prec, 1)];
        v.extend(energies_hi.iter().map(|e| Float::with_val(prec, e.as_float())));
        v
    };
    let relations = integer_relations(&values, SEARCH, VERIFY);
    // Columns E_1..E_n first, the constant last so that it is never eliminated.
    let mut m: Vec<Vec<Rational>> = relations
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = r[1..].iter().map(Rational::from).collect();
            row.push(Rational::from(&r[0]));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return Err(DiophantineError::Decomposition("relation involving only the constant".into()));
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut coeffs_q = vec![vec![Rational::new(); free.len()]; n];
    let mut rational = vec![Rational::new(); n];
    for (k, &f) in free.iter().enumerate() {
        coeffs_q[f][k] = Rational::from(1);
    }
    for (row, &p) in m.iter().zip(&pivots) {
        rational[p] = -row[n].clone();
        for (k, &f) in free.iter().enumerate() {
            coeffs_q[p][k] = -row[f].clone();
        }
    }
    let mut coeffs = vec![vec![0i64; free.len()]; n];
    let mut basis = Vec::with_capacity(free.len());
    for (k, &f) in free.iter().enumerate() {
        let scale = gcd_q((0..n).map(|i| &coeffs_q[i][k])).expect("free column has its own unit entry");
        for i in 0..n {
            let c = Rational::from(&coeffs_q[i][k] / &scale);
            coeffs[i][k] = c
                .numer()
                .to_i64()
                .ok_or_else(|| DiophantineError::Decomposition("coefficient does not fit in 64 bits".into()))?;
        }
        basis.push(BasisValue::Numeric { coef: scale, value: Float::with_val(VERIFY, energies_hi[f].as_float()) });
    }
    Ok(Decomposition { rational, coeffs, basis, route: DecompositionRoute::IntegerRelation })
}

/// Reduced row echelon form in place; returns the pivot column of each remaining row.
fn rref(m: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = Rational::from(m[r][c].recip_ref());
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = Rational::from(&f * &m[r][j]);
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    m.truncate(r);
    pivots
}

/// Writes every level as rational part plus an integer combination of independent irrationals.
pub fn decompose_energies(sd: &SpectralData) -> Result<Decomposition, DiophantineError> {
    let d = match square_root_route(sd).or_else(|| cyclotomic_route(sd)) {
        Some(d) => d,
        None => relation_route(sd)?,
    };
    let prec = 256;
    let energies = sd.energies_at(prec)?;
    let basis: Vec<Float> = d.basis.iter().map(|b| b.eval(prec)).collect();
    for (i, e) in energies.iter().enumerate() {
        let mut v = Float::with_val(prec, &d.rational[i]);
        for (c, x) in d.coeffs[i].iter().zip(&basis) {
            v += Float::with_val(prec, x * *c);
        }
        let err = Float::with_val(prec, e.as_float() - &v).abs().to_f64();
        if err > 1e-50 * (1.0 + e.to_f64().abs()) {
            return Err(DiophantineError::Decomposition(format!("level {i} misses its decomposition by {err:e}")));
        }
    }
    Ok(d)
}

/// Constraint on the parity of the integer nearest to `g * x` at lattice index `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityRule {
    Even,
    Odd,
    Free,
    SameAsQ,
    OppositeToQ,
}

impl ParityRule {
    #[inline]
    pub fn admits(&self, parity: u8, q_parity: u8) -> bool {
        match self {
            ParityRule::Even => parity == 0,
            ParityRule::Odd => parity == 1,
            ParityRule::Free => true,
            ParityRule::SameAsQ => parity == q_parity,
            ParityRule::OppositeToQ => parity != q_parity,
        }
    }
}

impl fmt::Display for ParityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityRule::Even => "even",
            ParityRule::Odd => "odd",
            ParityRule::Free => "free",
            ParityRule::SameAsQ => "same-as-q",
            ParityRule::OppositeToQ => "opposite-to-q",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Requirement {
    /// The irrational `x` whose multiples `g x` are constrained.
    pub multiplier: BasisValue,
    pub rule: ParityRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeStatus {
    Consistent,
    /// No real time satisfies every condition; targets are left free.
    Inconsistent,
    /// The conditions do not pin down a lattice (rank deficiency or an oversized modulus).
    Degenerate,
}

/// Candidate times `t = pi u (offset + step g) / modulus`, `g = 0, 1, 2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentLattice {
    pub unit: Rational,
    pub modulus: u64,
    pub offset: u64,
    pub step: u64,
    pub status: LatticeStatus,
    pub requirements: Vec<Requirement>,
    /// Rational frequency differences, satisfied on the lattice automatically.
    pub automatic: Vec<Rational>,
    /// Allowed values of `tau x_k (mod 2)` for each residue class of `g`.
    pub targets: Vec<Vec<Vec<Rational>>>,
    pub decomposition: Decomposition,
    /// Levels with non-zero weight, and the one used as phase reference.
    pub levels: Vec<usize>,
    pub reference: usize,
}

impl AlignmentLattice {
    /// `t / pi` at index `g`.
    pub fn tau(&self, g: &Integer) -> Rational {
        let num = Integer::from(g * self.step) + self.offset;
        Rational::from((num, self.modulus)) * &self.unit
    }

    pub fn time(&self, g: &Integer) -> TimePoint {
        let (q, den) = self.tau(g).into_numer_denom();
        TimePoint::new(q, den.to_u64().expect("time denominator fits in 64 bits"))
    }

    /// Increment of `t / pi` per lattice step.
    pub fn tau_step(&self) -> Rational {
        Rational::from((self.step, self.modulus)) * &self.unit
    }

    pub fn tau_offset(&self) -> Rational {
        Rational::from((self.offset, self.modulus)) * &self.unit
    }

    pub fn rules(&self) -> Vec<ParityRule> {
        self.requirements.iter().map(|r| r.rule).collect()
    }
}

fn mod_floor(a: &Integer, m: &Integer) -> Integer {
    a.clone().modulo(m)
}

/// Solutions of `a x = b (mod m)` in `[0, m)`.
fn solve_linear(a: &Integer, b: &Integer, m: &Integer) -> Vec<Integer> {
    let a = mod_floor(a, m);
    let b = mod_floor(b, m);
    let g = a.clone().gcd(m);
    if !b.is_divisible(&g) {
        return Vec::new();
    }
    let mg = Integer::from(m / &g);
    let x0 = if mg == 1 {
        Integer::new()
    } else {
        let inv = Integer::from(&a / &g).invert(&mg).expect("coprime after dividing the gcd");
        (Integer::from(&b / &g) * inv).modulo(&mg)
    };
    let count = g.to_u64().unwrap_or(u64::MAX);
    (0..count).map(|k| &x0 + Integer::from(&mg * k)).collect()
}

const MAX_SOLUTIONS: usize = 1 << 20;

/// Derives the time lattice and the parity targets from the weighted frequencies.
pub fn parity_requirements(series: &CosineSumSeries) -> Result<AlignmentLattice, DiophantineError> {
    let decomposition = decompose_energies(series.spectral())?;
    let weights: Vec<f64> = series.weights.iter().map(|w| w.to_f64()).collect();
    let levels: Vec<usize> = (0..weights.len()).filter(|&i| weights[i].abs() > 1e-40).collect();
    if levels.len() < 2 {
        return Err(DiophantineError::Empty);
    }
    let reference = *levels.iter().max_by(|&&a, &&b| weights[a].abs().total_cmp(&weights[b].abs())).expect("non-empty");
    let sigma = |i: usize| u8::from(weights[i] < 0.0);
    let d = &decomposition;
    let kdim = d.basis.len();
    // Only basis elements that survive in the differences matter.
    let used: Vec<usize> = (0..kdim).filter(|&k| levels.iter().any(|&i| d.coeffs[i][k] != d.coeffs[reference][k])).collect();
    let others: Vec<usize> = levels.iter().copied().filter(|&i| i != reference).collect();
    let diffs: Vec<Rational> = others.iter().map(|&i| Rational::from(&d.rational[i] - &d.rational[reference])).collect();

    let mut automatic: Vec<Rational> = Vec::new();
    for (a, &i) in levels.iter().enumerate() {
        for &j in &levels[a + 1..] {
            if d.coeffs[i] == d.coeffs[j] {
                let f = Rational::from(&d.rational[i] - &d.rational[j]).abs();
                if f != 0 && !automatic.contains(&f) {
                    automatic.push(f);
                }
            }
        }
    }
    automatic.sort();

    let unit = gcd_q(diffs.iter()).map(|g| g.recip()).unwrap_or_else(|| Rational::from(1));
    let fallback = |status: LatticeStatus| AlignmentLattice {
        unit: unit.clone(),
        modulus: 1,
        offset: 0,
        step: 1,
        status,
        requirements: used
            .iter()
            .map(|&k| Requirement { multiplier: d.basis[k].scaled(&unit), rule: ParityRule::Free })
            .collect(),
        automatic: automatic.clone(),
        targets: vec![vec![Vec::new(); used.len()]],
        decomposition: decomposition.clone(),
        levels: levels.clone(),
        reference,
    };

    let cols = used.len() + 1;
    let mut a: Vec<Vec<Integer>> = others
        .iter()
        .zip(&diffs)
        .map(|(&i, r)| {
            let mut row = vec![Rational::from(r * &unit).numer().clone()];
            row.extend(used.iter().map(|&k| Integer::from(d.coeffs[i][k] - d.coeffs[reference][k])));
            row
        })
        .collect();
    let mut s: Vec<Integer> = others.iter().map(|&i| Integer::from((sigma(i) + 2 - sigma(reference)) % 2)).collect();

    // Unimodular row reduction to an upper-triangular basis of the row lattice.
    let rows = a.len();
    for c in 0..cols {
        loop {
            let pivot = (c..rows).filter(|&r| a[r][c] != 0).min_by_key(|&r| a[r][c].clone().abs());
            let Some(p) = pivot else { break };
            a.swap(c, p);
            s.swap(c, p);
            let mut done = true;
            for r in c + 1..rows {
                if a[r][c] != 0 {
                    let q = Integer::from(&a[r][c] / &a[c][c]);
                    for j in c..cols {
                        let t = Integer::from(&q * &a[c][j]);
                        a[r][j] -= t;
                    }
                    let t = Integer::from(&q * &s[c]);
                    s[r] -= t;
                    if a[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if c >= rows || a[c][c] == 0 {
            return Ok(fallback(LatticeStatus::Degenerate));
        }
    }
    let q: Integer = (0..cols).map(|i| a[i][i].clone().abs()).product();
    let modulus = Integer::from(&q * 2);
    if s[cols..].iter().any(|x| x.is_odd()) {
        return Ok(fallback(LatticeStatus::Inconsistent));
    }
    if q > 1_000_000 {
        return Ok(fallback(LatticeStatus::Degenerate));
    }

    // Back substitution over W in [0, 2Q)^cols with H W = Q s (mod 2Q).
    let mut partial: Vec<Vec<Integer>> = vec![vec![Integer::new(); cols]];
    for j in (0..cols).rev() {
        let mut next = Vec::new();
        for w in &partial {
            let mut rhs = Integer::from(&q * &s[j]);
            for l in j + 1..cols {
                rhs -= Integer::from(&a[j][l] * &w[l]);
            }
            for x in solve_linear(&a[j][j], &rhs, &modulus) {
                let mut v = w.clone();
                v[j] = x;
                next.push(v);
            }
        }
        if next.len() > MAX_SOLUTIONS {
            return Ok(fallback(LatticeStatus::Degenerate));
        }
        partial = next;
    }
    if partial.is_empty() {
        return Ok(fallback(LatticeStatus::Inconsistent));
    }

    let two_q = modulus.to_u64().expect("bounded modulus");
    let qv = q.to_u64().expect("bounded modulus");
    let mut w0: Vec<u64> = partial.iter().map(|w| w[0].to_u64().expect("reduced")).collect();
    w0.sort_unstable();
    w0.dedup();
    let offset = w0[0];
    let step = w0.iter().fold(two_q, |g, &x| gcd_u64(g, x - offset));
    let classes = (two_q / step) as usize;

    let mut table: BTreeMap<u64, Vec<Vec<Rational>>> = BTreeMap::new();
    for w in &partial {
        let entry = table.entry(w[0].to_u64().expect("reduced")).or_insert_with(|| vec![Vec::new(); used.len()]);
        for (k, slot) in entry.iter_mut().enumerate() {
            let t = Rational::from((w[k + 1].clone(), qv));
            if !slot.contains(&t) {
                slot.push(t);
            }
        }
    }
    let targets: Vec<Vec<Vec<Rational>>> = (0..classes)
        .map(|c| {
            let mut v = table.get(&(offset + step * c as u64)).cloned().unwrap_or_else(|| vec![Vec::new(); used.len()]);
            for slot in &mut v {
                slot.sort();
            }
            v
        })
        .collect();

    let rule_for = |k: usize| -> ParityRule {
        let per_class: Vec<&Vec<Rational>> = targets.iter().map(|c| &c[k]).collect();
        if per_class.iter().any(|t| t.iter().any(|x| *x.denom() != 1)) {
            return ParityRule::Free;
        }
        if per_class.iter().all(|t| t.len() == 2) {
            return ParityRule::Free;
        }
        if per_class.iter().any(|t| t.len() != 1) {
            return ParityRule::Free;
        }
        let vals: Vec<bool> = per_class.iter().map(|t| *t[0].numer() == 1).collect();
        if vals.iter().all(|&v| !v) {
            ParityRule::Even
        } else if vals.iter().all(|&v| v) {
            ParityRule::Odd
        } else if classes.is_multiple_of(2) && vals.iter().enumerate().all(|(c, &v)| v == (c % 2 == 1)) {
            ParityRule::SameAsQ
        } else if classes.is_multiple_of(2) && vals.iter().enumerate().all(|(c, &v)| v == (c % 2 == 0)) {
            ParityRule::OppositeToQ
        } else {
            ParityRule::Free
        }
    };

    // tau = u (offset + step g) / Q, reduced.
    let g = gcd_u64(gcd_u64(offset, step), qv);
    let (offset_r, step_r, q_r) = (offset / g, step / g, qv / g);
    let tau_step = Rational::from((step_r, q_r)) * &unit;
    let requirements = used
        .iter()
        .enumerate()
        .map(|(idx, &k)| Requirement { multiplier: d.basis[k].scaled(&tau_step), rule: rule_for(idx) })
        .collect();

    Ok(AlignmentLattice {
        unit,
        modulus: q_r,
        offset: offset_r,
        step: step_r,
        status: LatticeStatus::Consistent,
        requirements,
        automatic,
        targets,
        decomposition,
        levels,
        reference,
    })
}
