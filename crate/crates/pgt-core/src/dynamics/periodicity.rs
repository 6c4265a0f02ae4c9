//! Exact period, coefficient bound and parity obstruction for Pythagorean couplings.

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::time::Time;
use crate::radicals::HighReal;

/// `constant + sum coef_k cos(omega_k t)` with rational data and distinct frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCosineSeries {
    pub constant: Rational,
    /// `(omega, coefficient)`, ascending positive frequencies.
    pub terms: Vec<(Rational, Rational)>,
}

impl RationalCosineSeries {
    /// Collects terms, folding `cos(-w t) = cos(w t)` and merging equal frequencies.
    pub fn from_terms(constant: Rational, raw: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut constant = constant;
        let mut terms: Vec<(Rational, Rational)> = Vec::new();
        for (omega, coef) in raw {
            let omega = omega.abs();
            if omega == 0 {
                constant += coef;
                continue;
            }
            match terms.iter_mut().find(|(w, _)| *w == omega) {
                Some((_, c)) => *c += coef,
                None => terms.push((omega, coef)),
            }
        }
        terms.retain(|(_, c)| *c != 0);
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        RationalCosineSeries { constant, terms }
    }

    /// `constant + sum |coef|`, attained only if every cosine takes the sign of its coefficient.
    pub fn sign_bound(&self) -> Rational {
        self.terms.iter().fold(self.constant.clone(), |acc, (_, c)| acc + c.clone().abs())
    }

    /// Least common period as a rational multiple of pi, `2 / gcd(omega)`.
    pub fn period_over_pi(&self) -> Option<Rational> {
        let mut num = Integer::new();
        let mut den = Integer::from(1);
        for (w, _) in &self.terms {
            num = num.gcd(w.numer());
            den = den.lcm(w.denom());
        }
        (num != 0).then(|| Rational::from((den * 2u32, num)))
    }

    pub fn eval(&self, t: &Float) -> Float {
        let prec = t.prec();
        let mut acc = Float::with_val(prec, &self.constant);
        for (w, c) in &self.terms {
            let x = Float::with_val(prec, w * t);
            acc += Float::with_val(prec, x.cos() * c);
        }
        acc
    }

    pub fn derivative(&self, t: &Float) -> Float {
        let prec = t.prec();
        let mut acc = Float::new(prec);
        for (w, c) in &self.terms {
            let x = Float::with_val(prec, w * t);
            let wc = Rational::from(w * c);
            acc -= Float::with_val(prec, x.sin() * &wc);
        }
        acc
    }

    fn eval_f64(&self, t: f64, data: &[(f64, f64)], constant: f64) -> f64 {
        constant + data.iter().map(|(w, c)| c * (w * t).cos()).sum::<f64>()
    }

    /// Global maximum over one period: grid of `samples` points, Lipschitz-bounded candidate set,
    /// golden-section refinement and a derivative sign check on each bracket.
    pub fn maximize(&self, period: f64, samples: usize, prec: u32) -> (HighReal, HighReal) {
        let data: Vec<(f64, f64)> = self.terms.iter().map(|(w, c)| (w.to_f64(), c.to_f64())).collect();
        let constant = self.constant.to_f64();
        let step = period / samples as f64;
        let lipschitz: f64 = data.iter().map(|(w, c)| (w * c).abs()).sum();
        let values: Vec<f64> = (0..=samples).map(|k| self.eval_f64(k as f64 * step, &data, constant)).collect();
        let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let floor = best - lipschitz * step;
        let mut candidates = Vec::new();
        for k in 0..=samples {
            let left = if k == 0 { values[samples - 1] } else { values[k - 1] };
            let right = if k == samples { values[1] } else { values[k + 1] };
            if values[k] >= floor && values[k] >= left && values[k] >= right {
                candidates.push(k as f64 * step);
            }
        }
        let mut top: Option<(Float, Float)> = None;
        let tie = Float::with_val(prec, Float::i_exp(1, 24 - prec as i32));
        for c in candidates {
            let (t, v) = self.golden(c - step, c + step, prec);
            let better = match &top {
                None => true,
                Some((tb, vb)) => {
                    let d = Float::with_val(prec, &v - vb);
                    d > tie || (d.clone().abs() <= tie && t < *tb)
                }
            };
            if better {
                top = Some((t, v));
            }
        }
        let (t, v) = top.expect("grid has a maximum");
        let t = if t < 0 { Float::with_val(prec, &t + Float::with_val(prec, period)) } else { t };
        (HighReal::from(t), HighReal::from(v))
    }

    /// Rigorous upper bound on `P` from a uniform grid: at an interior maximum `P' = 0`, so
    /// `P(t*) <= P(t_grid) + sup|P''| h^2 / 8` for the nearest grid point at distance `<= h/2`.
    pub fn grid_bound(&self, period: f64, samples: usize) -> f64 {
        let data: Vec<(f64, f64)> = self.terms.iter().map(|(w, c)| (w.to_f64(), c.to_f64())).collect();
        let constant = self.constant.to_f64();
        let step = period / samples as f64;
        let curvature: f64 = data.iter().map(|(w, c)| (w * w * c).abs()).sum();
        let best = (0..samples).map(|k| self.eval_f64(k as f64 * step, &data, constant)).fold(f64::NEG_INFINITY, f64::max);
        best + curvature * step * step / 8.0 + 1e-12
    }

    fn golden(&self, a: f64, b: f64, prec: u32) -> (Float, Float) {
        let mut lo = Float::with_val(prec, a);
        let mut hi = Float::with_val(prec, b);
        let inv_phi = (Float::with_val(prec, 5).sqrt() - 1u32) / 2u32;
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2 - 4));
        // derivative brackets: bisect on the sign of P' where it changes, golden section otherwise
        if self.derivative(&lo) > 0 && self.derivative(&hi) < 0 {
            while Float::with_val(prec, &hi - &lo) > Float::with_val(prec, Float::i_exp(1, 8 - prec as i32)) {
                let mid = Float::with_val(prec, &lo + &hi) / 2u32;
                if mid == lo || mid == hi {
                    break;
                }
                if self.derivative(&mid) > 0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = Float::with_val(prec, &lo + &hi) / 2u32;
            let v = self.eval(&t);
            return (t, v);
        }
        while Float::with_val(prec, &hi - &lo) > tol {
            let d = Float::with_val(prec, &hi - &lo) * &inv_phi;
            let x1 = Float::with_val(prec, &hi - &d);
            let x2 = Float::with_val(prec, &lo + &d);
            if self.eval(&x1) < self.eval(&x2) {
                lo = x1;
            } else {
                hi = x2;
            }
        }
        let t = Float::with_val(prec, &lo + &hi) / 2u32;
        let v = self.eval(&t);
        (t, v)
    }
}

/// 2-adic data showing that no integer `q` makes every `s_i q / a` an odd integer.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionWitness {
    pub a: Integer,
    /// `a + b + c`, `|a + b - c|`, `|a - b + c|`, `|a - b - c|`.
    pub s: Vec<Integer>,
    pub v2_a: u32,
    pub v2_s: Vec<u32>,
    /// `v2(a) - v2(s_i)`: each condition forces `v2(q)` to this value.
    pub required_v2_q: Vec<i64>,
    pub satisfiable: bool,
    pub trace: Vec<String>,
}

fn v2(x: &Integer) -> u32 {
    x.find_one(0).unwrap_or(0)
}

pub fn obstruction_witness(a: &Integer, b: &Integer, c: &Integer) -> ObstructionWitness {
    let s: Vec<Integer> = [
        Integer::from(a + b) + c,
        (Integer::from(a + b) - c).abs(),
        (Integer::from(a - b) + c).abs(),
        (Integer::from(a - b) - c).abs(),
    ]
    .into();
    let v2_a = v2(a);
    let v2_s: Vec<u32> = s.iter().map(v2).collect();
    let required: Vec<i64> = v2_s.iter().map(|&v| v2_a as i64 - v as i64).collect();
    let mut trace = Vec::new();
    for (si, r) in s.iter().zip(&required) {
        trace.push(format!("{si} q = (2r + 1) {a} forces v2(q) = {r}"));
    }
    let negative = required.iter().any(|&r| r < 0);
    let agree = required.windows(2).all(|w| w[0] == w[1]);
    if negative {
        trace.push(format!("v2(a) = {v2_a} is below some v2(s_i); no integer q exists"));
    }
    if !agree {
        trace.push("the four conditions demand different powers of two in q".into());
    }
    ObstructionWitness { a: a.clone(), s, v2_a, v2_s, required_v2_q: required, satisfiable: agree && !negative, trace }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Periodic, bounded below one, and the parity system has no solution.
    NoPgt,
    /// Periodic with `J2 < 1`; no certificate attempted.
    Unsupported,
    /// Not periodic.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicityReport {
    pub j2: Rational,
    pub is_periodic: bool,
    pub triple: Option<(Integer, Integer, Integer)>,
    /// Period divided by pi.
    pub period_over_pi: Option<Rational>,
    pub series: Option<RationalCosineSeries>,
    pub p_max: Option<HighReal>,
    /// Smallest maximiser within one period.
    pub t_max: Option<HighReal>,
    pub upper_bound: Option<Rational>,
    /// Grid maximum plus a curvature margin; a bound on `P` independent of the sign argument.
    pub grid_bound: Option<f64>,
    pub obstruction_witness: Option<ObstructionWitness>,
    pub certificate: Certificate,
}

/// `P` for `N = 4` and `J2 = b/a` with `sqrt(1 + J2^2) = c/a` rational.
pub fn n4_rational_series(j: &Rational, r: &Rational) -> RationalCosineSeries {
    let one = Rational::from(1);
    let rsq = Rational::from(r * r);
    let jr = Rational::from(j * r);
    let c2 = (4u32 * Rational::from(&rsq - &jr)).recip();
    let c4 = (4u32 * Rational::from(&rsq + &jr)).recip();
    let constant = Rational::from((1, 8)) + Rational::from(&c2 * &c2) + Rational::from(&c4 * &c4);
    let h2 = -Rational::from(&c2 / 2u32);
    let h4 = -Rational::from(&c4 / 2u32);
    let opj = Rational::from(&one + j);
    let omj = Rational::from(&one - j);
    RationalCosineSeries::from_terms(
        constant,
        [
            (Rational::from(4), Rational::from((1, 8))),
            (Rational::from(4u32 * r), (2u32 * Rational::from(&c2 * &c4))),
            ((2u32 * Rational::from(&opj - r)), h2.clone()),
            ((2u32 * Rational::from(&omj + r)), h2),
            ((2u32 * Rational::from(&opj + r)), h4.clone()),
            ((2u32 * Rational::from(&omj - r)), h4),
        ],
    )
}

/// Periodicity of the `N = 4` transfer probability at a rational coupling.
pub fn periodicity_analysis(j2: &Rational) -> PeriodicityReport {
    assert!(*j2 > 0, "coupling must be positive");
    let b = j2.numer().clone();
    let a = j2.denom().clone();
    let csq = Integer::from(&a * &a) + Integer::from(&b * &b);
    let mut report = PeriodicityReport {
        j2: j2.clone(),
        is_periodic: false,
        triple: None,
        period_over_pi: None,
        series: None,
        p_max: None,
        t_max: None,
        upper_bound: None,
        grid_bound: None,
        obstruction_witness: None,
        certificate: Certificate::NotApplicable,
    };
    if !csq.is_perfect_square() {
        return report;
    }
    let c = csq.sqrt();
    let r = Rational::from((c.clone(), a.clone()));
    let series = n4_rational_series(j2, &r);
    let period = series.period_over_pi().expect("non-constant series");
    let prec = 192;
    let period_f = Float::with_val(prec, Constant::Pi) * &period;
    let (t_max, p_max) = series.maximize(period_f.to_f64(), 100_000, prec);
    report.is_periodic = true;
    report.upper_bound = Some(series.sign_bound());
    report.grid_bound = Some(series.grid_bound(period_f.to_f64(), 100_000));
    report.period_over_pi = Some(period);
    report.series = Some(series);
    report.p_max = Some(p_max);
    report.t_max = Some(t_max);
    if b > a {
        let witness = obstruction_witness(&a, &b, &c);
        let bounded = report.upper_bound.as_ref().is_some_and(|u| *u < 1);
        report.certificate = if bounded || !witness.satisfiable { Certificate::NoPgt } else { Certificate::Unsupported };
        report.obstruction_witness = Some(witness);
    } else {
        report.certificate = Certificate::Unsupported;
    }
    report.triple = Some((a, b, c));
    report
}

impl PeriodicityReport {
    /// The tighter of the sign bound and the grid bound.
    pub fn effective_bound(&self) -> Option<f64> {
        let sign = self.upper_bound.as_ref().map(Rational::to_f64);
        match (sign, self.grid_bound) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn period(&self) -> Option<Time> {
        let p = self.period_over_pi.as_ref()?;
        p.denom().to_u64().map(|d| Time::PiMultiple(super::TimePoint::new(p.numer().clone(), d)))
    }
}
