//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any is red.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pgt_cli::dto::PeriodicityDto;
use pgt_cli::validate::{evolution_check, localization_check};
use pgt_core::chain::{build_single_excitation_matrix, ChainSpec, Coupling};
use pgt_core::diophantine::{simultaneous_approx, sqrt_source, ParityRule, RealSource, ScanOptions};
use pgt_core::dynamics::{build_series, evaluate_p, localization, p_infty, Time, TimePoint};
use pgt_core::pgtlab::{pgt_search_with, scl_wcl_equivalence, PgtCurve, SearchConfig, Verdict};
use pgt_core::spectral::{closed_form_spectrum, n4_c_constants, n4_exact, tridiagonal_eigenvalues, tridiagonal_eigenvectors};
use pgt_core::HighReal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rug::{Float, Integer, Rational};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn n4(num: i64, den: i64) -> ChainSpec {
    ChainSpec::staggered(4, Coupling::from_ratio(num, den)).unwrap()
}

fn pi_time(q: impl Into<Integer>, den: u64) -> Time {
    Time::PiMultiple(TimePoint::new(q, den))
}

/// `|value - printed| <= 5 * 10^-(d+1)` with `d` printed decimals, decided exactly.
fn matches_printed(value: &HighReal, printed: &str) -> bool {
    let digits = printed.split('.').nth(1).map_or(0, str::len) as u32;
    let scale = Integer::from(Integer::u_pow_u(10, digits));
    let shown = Rational::from((printed.replace('.', "").parse::<Integer>().unwrap(), scale.clone()));
    let half_ulp = Rational::from((1, scale * 2u32));
    let diff = (value.as_float().to_rational().unwrap() - shown).abs();
    diff <= half_ulp
}

fn search(spec: &ChainSpec, cfg: &SearchConfig) -> PgtCurve {
    pgt_search_with(spec, cfg).unwrap()
}

fn record_at<'a>(curve: &'a PgtCurve, t_over_pi: &Rational) -> Option<&'a HighReal> {
    curve
        .records
        .iter()
        .find(|r| Rational::from((r.time.q.clone(), r.time.pi_den)) == *t_over_pi)
        .map(|r| &r.p_value)
}

fn ac1() -> Outcome {
    const LENGTHS: [usize; 12] = [4, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48, 64];
    const COUPLINGS: [(i64, i64); 4] = [(1, 2), (1, 1), (2, 1), (10, 1)];
    let start = Instant::now();
    let jobs: Vec<(usize, (i64, i64))> = LENGTHS.iter().flat_map(|&n| COUPLINGS.iter().map(move |&c| (n, c))).collect();
    let gaps: Vec<f64> = jobs
        .iter()
        .map(|&(n, (a, b))| {
            let spec = ChainSpec::staggered(n, Coupling::from_ratio(a, b)).unwrap();
            let closed = closed_form_spectrum(&spec, 128).unwrap();
            let sturm = tridiagonal_eigenvalues(&build_single_excitation_matrix(&spec, 160).unwrap(), 128).unwrap();
            closed.energies.iter().zip(&sturm).map(|(x, y)| x.distance(y)).fold(0.0, f64::max)
        })
        .collect();
    let elapsed = start.elapsed();
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let ok = worst <= 2f64.powi(-64) && elapsed < Duration::from_secs(60);
    outcome(ok, format!("{} spectra, max |closed - sturm| = {worst:.2e} (bound 2^-64), {:.1} s single-threaded", jobs.len(), elapsed.as_secs_f64()))
}

/// `(J2, [(q, P)])` at `t = q pi / 2`, as printed.
const N4_TABLES: [(i64, &[(u64, &str)]); 4] = [
    (1, &[(1, "0.5170"), (2, "0.8962"), (5, "0.9815"), (12, "0.9968"), (29, "0.99945"), (70, "0.999906"), (169, "0.9999838"), (408, "0.9999972")]),
    (2, &[(1, "0.8459"), (4, "0.9908"), (17, "0.99949"), (72, "0.999971"), (305, "0.9999984"), (1292, "0.999999911"), (5473, "0.9999999951"), (23184, "0.99999999972")]),
    (5, &[(1, "0.4981"), (10, "0.99975"), (101, "0.9999976"), (1020, "0.999999976"), (10301, "0.99999999977"), (104030, "0.9999999999977"), (1050601, "0.999999999999978"), (10610040, "0.99999999999999978")]),
    (10, &[(1, "0.4956"), (20, "0.999985"), (401, "0.999999962"), (8040, "0.999999999905"), (161201, "0.99999999999976"), (3232060, "0.99999999999999941"), (64802401, "0.9999999999999999985"), (1299280080, "0.9999999999999999999963")]),
];

fn ac2() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    let mut misses = Vec::new();
    for (j, rows) in N4_TABLES {
        let series = build_series(&n4_exact(&Coupling::from_ratio(j, 1), 256).unwrap());
        for &(q, printed) in rows {
            total += 1;
            let digits = printed.len() as u32 + 4;
            let p = evaluate_p(&series, &pi_time(q, 2), digits).unwrap();
            if !matches_printed(&p, printed) {
                misses.push(format!("J2={j} q={q}: {} vs {printed}", p.to_decimal(printed.len() - 2)));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = misses.is_empty() && elapsed < Duration::from_secs(30);
    let mut detail = format!("{}/{total} rows to half an ulp, {:.1} s", total - misses.len(), elapsed.as_secs_f64());
    if !misses.is_empty() {
        detail += &format!("; mismatches: {}", misses.join("; "));
    }
    outcome(ok, detail)
}

fn ac3() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_pgt")).args(["periodicity", "--j2", "4/3", "--digits", "30"]).output().unwrap();
    if !out.status.success() {
        return outcome(false, format!("pgt periodicity failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let r: PeriodicityDto = serde_json::from_slice(&out.stdout).unwrap();
    let period = r.period.as_ref().map(|p| (p.q.as_str(), p.pi_den));
    let p_max: f64 = r.p_max.as_deref().map_or(f64::NAN, |s| s.parse().unwrap());
    let t_max: f64 = r.t_max.as_deref().map_or(f64::NAN, |s| s.parse().unwrap());
    let t_ref = 3.0 * ((2.0 + 1.5f64.sqrt()).sqrt() / 2.0).acos();
    let mut fails = Vec::new();
    if period != Some(("3", 2)) {
        fails.push(format!("period {period:?}"));
    }
    if r.upper_bound.as_deref() != Some("19/20") {
        fails.push(format!("upper bound {:?}", r.upper_bound));
    }
    if (p_max - 625.0 / 1024.0).abs() > 1e-12 {
        fails.push(format!("p_max {p_max}"));
    }
    if (t_max - t_ref).abs() > 1e-4 {
        fails.push(format!("t_max {t_max}"));
    }

    // Neighbourhood of the triple: 4003/3000.
    let curve = search(&n4(4003, 3000), &SearchConfig { max_level: 12, digits: 10, ..SearchConfig::default() });
    let mut rows = Vec::new();
    for (q, printed) in [(1u32, "0.57264"), (2, "0.8742"), (5, "0.9999912")] {
        match record_at(&curve, &Rational::from(1500 * q)) {
            Some(p) if matches_printed(p, printed) => rows.push(format!("{}pi {}", 1500 * q, p.to_decimal(printed.len() - 2))),
            Some(p) => fails.push(format!("4003/3000 at {}pi: {} vs {printed}", 1500 * q, p.to_decimal(printed.len() - 2))),
            None => fails.push(format!("4003/3000: no record at {}pi", 1500 * q)),
        }
    }
    let head = format!(
        "period {}pi/{}, bound {}, p_max {p_max:.12}, t_max {t_max:.6} (t_max/pi {:.4}); 4003/3000 records {}",
        r.period.as_ref().map_or("-", |p| p.q.as_str()),
        r.period.as_ref().map_or(0, |p| p.pi_den),
        r.upper_bound.as_deref().unwrap_or("-"),
        t_max / std::f64::consts::PI,
        rows.join(", ")
    );
    if fails.is_empty() {
        outcome(true, head)
    } else {
        outcome(false, format!("{head}; failures: {}", fails.join("; ")))
    }
}

fn ac4() -> Outcome {
    const PREC: u32 = 160;
    let mut worst = [0.0f64; 3];
    for k in 1..=1000 {
        let t = Float::with_val(PREC, f64::from(k) * 0.0131);
        let time = Time::Real(HighReal::from(t.clone()));
        let f = |x: Float| HighReal::from(x);
        let sin = |x: &Float| Float::with_val(PREC, x.sin_ref());
        let half = Float::with_val(PREC, &t / 2u32);
        let want4 = f(sin(&t).square().square());
        let want6 = f(Float::with_val(PREC, sin(&half).square().square() * sin(&t).square()) * 16u32 / 9u32);
        let root5 = Float::with_val(PREC, 5).sqrt();
        let want10 = {
            let inner = Float::with_val(PREC, sin(&Float::with_val(PREC, &t * 2u32)) - 4u32 * Float::with_val(PREC, Float::with_val(PREC, &root5 * &half).cos()) * sin(&half));
            f(inner.square() / 25u32)
        };
        for (slot, (n, want)) in [(4usize, want4), (6, want6), (10, want10)].into_iter().enumerate() {
            let got = p_infty(n, &time, 30).unwrap();
            worst[slot] = worst[slot].max(got.distance(&want));
        }
    }
    let at = p_infty(6, &pi_time(2, 3), 30).unwrap();
    let peak_gap = at.distance(&HighReal::from_f64(0.75, PREC));
    let grid = 40_000;
    let period = 4.0 * std::f64::consts::PI;
    let max6 = (0..grid)
        .into_par_iter()
        .map(|k| p_infty(6, &Time::Real(HighReal::from_f64(k as f64 * period / grid as f64, 64)), 8).unwrap().to_f64())
        .reduce(|| 0.0, f64::max);
    let ok = worst.iter().all(|&w| w < 1e-25) && peak_gap < 1e-25 && max6 <= 0.75 + 1e-6;
    outcome(
        ok,
        format!(
            "1000 points: max gap N4 {:.1e}, N6 {:.1e}, N10 {:.1e}; P6(2pi/3) - 3/4 = {peak_gap:.1e}; max P6 on [0, 4pi] grid {max6:.9}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut shown = Vec::new();
    for (q, printed) in [("1", "0.40"), ("2", "0.863"), ("12", "0.996"), ("408", "0.999996"), ("470832", "0.999999999997")] {
        let p = p_infty(8, &pi_time(q.parse::<Integer>().unwrap(), 1), 30).unwrap();
        if matches_printed(&p, printed) {
            shown.push(format!("{q}pi"));
        } else {
            fails.push(format!("N8 {q}pi: {} vs {printed}", p.to_decimal(printed.len())));
        }
    }
    let deep: Integer = "1111984844349868137938112".parse().unwrap();
    let p = p_infty(8, &pi_time(deep.clone(), 1), 70).unwrap();
    let eps = Float::with_val(256, 1) - p.as_float();
    let eps_ok = eps < 5e-49 && eps >= 0;
    if !eps_ok {
        fails.push(format!("N8 {deep}pi: eps {:.3e}", eps.to_f64()));
    }
    for (q, printed) in [(7u64, "0.7065"), (362, "0.9533"), (10608, "0.9965"), (28384580, "0.99998")] {
        let p = p_infty(16, &pi_time(q, 1), 20).unwrap();
        if matches_printed(&p, printed) {
            shown.push(format!("N16 {q}pi"));
        } else {
            fails.push(format!("N16 {q}pi: {} vs {printed}", p.to_decimal(printed.len())));
        }
    }

    // The SCL N=8 search finds the shallow rows itself.
    let curve = search(&ChainSpec::strong_coupling(8).unwrap(), &SearchConfig { max_level: 20, digits: 14, ..SearchConfig::default() });
    let missing: Vec<&str> =
        ["1", "2", "12", "408", "470832"].into_iter().filter(|q| record_at(&curve, &Rational::from(q.parse::<Integer>().unwrap())).is_none()).collect();
    if !missing.is_empty() {
        fails.push(format!("SCL8 search has no record at {}", missing.join(", ")));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        fails.push(format!("runtime {:.0} s", elapsed.as_secs_f64()));
    }
    let head = format!("rows {} match; eps({deep}pi) = {:.3e}; search records present; {:.1} s", shown.join(", "), eps.to_f64(), elapsed.as_secs_f64());
    if fails.is_empty() {
        outcome(true, head)
    } else {
        outcome(false, format!("{head}; failures: {}", fails.join("; ")))
    }
}

fn ac6() -> Outcome {
    let r2 = sqrt_source(Rational::from(2));
    let minus = |prec: u32| Float::with_val(prec, 2u32 - Float::with_val(prec, 2).sqrt()).sqrt();
    let plus = |prec: u32| Float::with_val(prec, 2u32 + Float::with_val(prec, 2).sqrt()).sqrt();
    let xs: [&dyn RealSource; 3] = [&r2, &minus, &plus];
    let rules = [ParityRule::Even, ParityRule::Odd, ParityRule::Odd];
    let expected = [7u64, 48, 362];
    let mut firsts = Vec::new();
    for j in 1..=3u32 {
        let m = 1u64 << j;
        let hits = simultaneous_approx(&xs, &rules, m, &ScanOptions { q_range: Some((1, 1 << 16)), ..ScanOptions::default() }).unwrap();
        firsts.push(hits.first().map(|h| h.q.to_u64().unwrap()));
    }
    let observed: Vec<String> = firsts.iter().map(|f| f.map_or("none".into(), |q| q.to_string())).collect();
    let ok = firsts.iter().zip(expected).all(|(f, e)| *f == Some(e));
    outcome(ok, format!("first hits for M = 2, 4, 8: [{}], table expects [7, 48, 362]", observed.join(", ")))
}

type Curves = [(i64, PgtCurve)];

struct Searches {
    n4: Vec<(i64, PgtCurve)>,
    n6: Vec<(i64, PgtCurve)>,
    elapsed: Duration,
}

fn run_searches() -> Searches {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let n4 = [1, 2, 5, 10].into_par_iter().map(|j| (j, search(&n4(j, 1), &cfg))).collect();
    let n6 = [3, 5, 6, 7, 10]
        .into_par_iter()
        .map(|j| (j, search(&ChainSpec::staggered(6, Coupling::from_ratio(j, 1)).unwrap(), &cfg)))
        .collect();
    Searches { n4, n6, elapsed: start.elapsed() }
}

fn ac7(s: &Searches) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let groups: [(usize, &Curves, &[i64], f64, f64); 2] = [(4, &s.n4, &[1, 2, 5, 10], 0.5, 0.1), (6, &s.n6, &[3, 5, 7], 1.0, 0.15)];
    for (n, curves, js, target, tol) in groups {
        for (j, curve) in curves.iter().filter(|(j, _)| js.contains(j)) {
            match &curve.fit {
                Some(fit) => {
                    let good = (fit.exponent - target).abs() <= tol && fit.decades >= 3.0;
                    ok &= good;
                    parts.push(format!("N{n} J2={j} f={:.3} ({:.1} dec){}", fit.exponent, fit.decades, if good { "" } else { " OUT" }));
                }
                None => {
                    ok = false;
                    parts.push(format!("N{n} J2={j} no fit"));
                }
            }
        }
    }
    outcome(ok, format!("{}; searches took {:.0} s wall", parts.join(", "), s.elapsed.as_secs_f64()))
}

fn ac8() -> Outcome {
    let report = scl_wcl_equivalence(8, Some(&SearchConfig::default())).unwrap();
    let single = report.scl_irrationals.len() == 1 && report.wcl_irrationals.len() == 1;
    let diff = match (report.scl_exponent, report.wcl_exponent) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    };
    let ok = report.coincide && single && diff.is_some_and(|d| d < 0.1);
    outcome(
        ok,
        format!(
            "SCL8 {:?} vs N4 J2=1 {:?}, coincide {}, f {:?} vs {:?}, |diff| {:?}",
            report.scl_irrationals, report.wcl_irrationals, report.coincide, report.scl_exponent, report.wcl_exponent, diff
        ),
    )
}

fn ac9(s: &Searches) -> Outcome {
    let mut ok = true;
    let parts: Vec<String> = s
        .n6
        .iter()
        .map(|(j, curve)| {
            let want = if [6, 10].contains(j) { Verdict::Stagnated } else { Verdict::PgtObserved };
            ok &= curve.verdict == want;
            format!("J2={j} {:?}", curve.verdict)
        })
        .collect();
    outcome(ok, format!("N6: {}", parts.join(", ")))
}

fn ac10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let samples: Vec<(usize, Coupling, f64)> = (0..20)
        .map(|_| {
            let n = 2 * rng.random_range(2..=16usize);
            let j2 = Coupling::from_ratio(rng.random_range(1..=20), rng.random_range(1..=10));
            (n, j2, rng.random_range(0.0..100.0))
        })
        .collect();
    let evolution: Vec<_> = samples.par_iter().map(|(n, j2, t)| evolution_check(*n, j2, &[*t])).collect();
    let evo_bad: Vec<&str> = evolution.iter().filter(|l| !l.passed).map(|l| l.check.as_str()).collect();

    let loc: Vec<_> = [(4usize, (1i64, 1i64)), (6, (3, 1)), (10, (1, 2)), (16, (10, 1)), (32, (2, 1))]
        .par_iter()
        .map(|&(n, (a, b))| localization_check(n, &Coupling::from_ratio(a, b)))
        .collect();
    let loc_bad: Vec<&str> = loc.iter().filter(|l| !l.passed).map(|l| l.check.as_str()).collect();

    // Rows of the N=4 table, matched irrespective of eigenvalue order.
    let mut b1_worst = 0.0f64;
    for (a, b) in [(1i64, 2i64), (1, 1), (3, 1), (10, 1)] {
        let j2 = Coupling::from_ratio(a, b);
        let spec = ChainSpec::staggered(4, j2.clone()).unwrap();
        let sd = n4_exact(&j2, 160).unwrap();
        let vecs = tridiagonal_eigenvectors(&build_single_excitation_matrix(&spec, 224).unwrap(), &sd.energies, 160).unwrap();
        let got = localization(&vecs).probabilities;
        let (c2, c4) = n4_c_constants(&j2, 160);
        let (c2, c4, q) = (c2.square(), c4.square(), HighReal::from_f64(0.25, 160));
        let expected = [
            vec![q.clone(), q.clone(), q.clone(), q.clone()],
            vec![c2.clone(), c4.clone(), c4.clone(), c2.clone()],
            vec![q.clone(), q.clone(), q.clone(), q.clone()],
            vec![c4.clone(), c2.clone(), c2.clone(), c4],
        ];
        let row_gap = |x: &[HighReal], y: &[HighReal]| x.iter().zip(y).map(|(u, v)| u.distance(v)).fold(0.0, f64::max);
        for row in &expected {
            let best = got.iter().map(|g| row_gap(g, row)).fold(f64::INFINITY, f64::min);
            b1_worst = b1_worst.max(best);
        }
    }

    let ok = evo_bad.is_empty() && loc_bad.is_empty() && b1_worst < 1e-30;
    let mut detail = format!(
        "{}/20 dense-vs-series samples within 1e-20; {}/{} localization sum checks within 1e-30; N4 table max gap {b1_worst:.1e}",
        20 - evo_bad.len(),
        loc.len() - loc_bad.len(),
        loc.len()
    );
    for bad in evo_bad.iter().chain(&loc_bad) {
        detail += &format!("; failed {bad}");
    }
    outcome(ok, detail)
}

fn guarded(id: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
        outcome(false, format!("panicked: {msg}"))
    });
    println!("{id} {} [{:.1} s] {}", if result.passed { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), result.detail);
    result.passed
}

fn main() -> ExitCode {
    let mut results = vec![guarded("AC1", ac1), guarded("AC2", ac2)];
    results.push(guarded("AC3", ac3));
    results.push(guarded("AC4", ac4));
    results.push(guarded("AC5", ac5));
    results.push(guarded("AC6", ac6));
    let searches = catch_unwind(run_searches).ok();
    match &searches {
        Some(s) => {
            results.push(guarded("AC7", || ac7(s)));
            results.push(guarded("AC8", ac8));
            results.push(guarded("AC9", || ac9(s)));
        }
        None => {
            for id in ["AC7", "AC8", "AC9"] {
                results.push(guarded(id, || outcome(false, "search panicked")));
            }
        }
    }
    results.push(guarded("AC10", ac10));
    let green = results.iter().filter(|&&p| p).count();
    println!("acceptance: {green}/{} criteria pass", results.len());
    if green == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
