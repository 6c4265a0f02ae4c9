use super::*;
use crate::spectral::{closed_form_spectrum, n4_exact, scl_spectrum, tridiagonal_eigenvectors};
use crate::chain::{build_single_excitation_matrix, ChainSpec};
use proptest::prelude::*;
use rug::Rational;

fn pi_time(q: i64, den: u64) -> Time {
    Time::PiMultiple(TimePoint::new(q, den))
}

fn n4_series(num: i64, den: i64) -> CosineSumSeries {
    build_series(&n4_exact(&Coupling::from_ratio(num, den), 128).unwrap())
}

fn within(x: &HighReal, want: f64, tol: f64) -> bool {
    (x.to_f64() - want).abs() <= tol
}

#[test]
fn n4_table_points() {
    let p = evaluate_p(&n4_series(1, 1), &pi_time(12, 2), 10).unwrap();
    assert!(within(&p, 0.9968, 5e-5), "{p}");
    let p = evaluate_p(&n4_series(10, 1), &pi_time(20, 2), 10).unwrap();
    assert!(within(&p, 0.999985, 5e-7), "{p}");
    let p = p4_closed(&Coupling::from_ratio(2, 1), &pi_time(4, 2), 10).unwrap();
    assert!(within(&p, 0.9908, 5e-5), "{p}");
}

#[test]
fn zero_time_gives_zero() {
    for series in [n4_series(3, 2), build_series(&closed_form_spectrum(&ChainSpec::staggered(10, Coupling::from_ratio(2, 1)).unwrap(), 128).unwrap())] {
        let p = evaluate_p(&series, &Time::PiMultiple(TimePoint::zero()), 20).unwrap();
        assert!(p.to_f64().abs() < 1e-20);
    }
    assert!(p4_closed(&Coupling::from_ratio(7, 3), &pi_time(0, 1), 20).unwrap().to_f64().abs() < 1e-20);
}

#[test]
fn huge_times_keep_phase() {
    let series = n4_series(1, 1);
    let q: rug::Integer = "1000000000000000000000000".parse().unwrap();
    let t = Time::PiMultiple(TimePoint::new(q, 2));
    let a = evaluate_p(&series, &t, 30).unwrap();
    let b = p4_closed(&Coupling::from_ratio(1, 1), &t, 30).unwrap();
    assert!(a.distance(&b) < 1e-29);
}

#[test]
fn t_max_of_four_thirds() {
    let prec = 256;
    let inner = (Float::with_val(prec, 1.5).sqrt() + 2u32).sqrt() / 2u32;
    let t = Float::with_val(prec, inner.acos() * 3u32);
    let p = p4_closed(&Coupling::from_ratio(4, 3), &Time::Real(HighReal::from(t)), 40).unwrap();
    let want = HighReal::from_rational(&Rational::from((625, 1024)), 256);
    assert!(p.distance(&want) < 1e-39);
}

#[test]
fn limit_formula_points() {
    let p = p_infty(4, &pi_time(1, 2), 30).unwrap();
    assert!(within(&p, 1.0, 1e-30));
    let p = p_infty(6, &pi_time(2, 3), 30).unwrap();
    assert!(within(&p, 0.75, 1e-30));
    let p = p_infty(8, &pi_time(408, 1), 12).unwrap();
    assert!(within(&p, 0.999996, 5e-7), "{p}");
}

#[test]
fn limit_formula_matches_weighted_series() {
    for n_sites in [4usize, 6, 8, 10, 12, 16] {
        let series = build_series(&scl_spectrum(n_sites, 128).to_spectral_data());
        for q in [1i64, 3, 7, 50, 1001] {
            let t = pi_time(q, 7);
            let a = p_infty(n_sites, &t, 25).unwrap();
            let b = evaluate_p(&series, &t, 25).unwrap();
            assert!(a.distance(&b) < 1e-24, "N = {n_sites}, q = {q}");
        }
    }
}

#[test]
fn limit_terms_negative_count() {
    for k in 2..7u32 {
        let n_sites = 1usize << (k + 1);
        let terms = p_infty_terms(n_sites, 128).unwrap();
        let n = n_sites / 2;
        let inner = &terms[1..n / 2];
        assert_eq!(inner.iter().filter(|t| t.coefficient < 0).count(), 1 << (k - 2));
        assert!(inner.iter().all(|t| t.cosine.radical_form.is_some()));
    }
}

#[test]
fn closed_forms_on_grid() {
    for k in 0..200 {
        let t = Time::Real(HighReal::from_f64(k as f64 * 0.0731, 128));
        let x = k as f64 * 0.0731;
        let p4 = p_infty(4, &t, 20).unwrap().to_f64();
        assert!((p4 - x.sin().powi(4)).abs() < 1e-14);
        let p6 = p_infty(6, &t, 20).unwrap().to_f64();
        let want = 16.0 / 9.0 * (x / 2.0).sin().powi(4) * x.sin().powi(2);
        assert!((p6 - want).abs() < 1e-14);
        let p10 = p_infty(10, &t, 20).unwrap().to_f64();
        let want = ((2.0 * x).sin() - 4.0 * (5f64.sqrt() * x / 2.0).cos() * (x / 2.0).sin()).powi(2) / 25.0;
        assert!((p10 - want).abs() < 1e-14);
        let p16 = p_infty(16, &t, 20).unwrap().to_f64();
        let (r2, rm, rp) = (2f64.sqrt(), (2.0 - 2f64.sqrt()).sqrt(), (2.0 + 2f64.sqrt()).sqrt());
        let want = (1.0 + (2.0 * x).cos() + 2.0 * (r2 * x).cos() - 2.0 * (rm * x).cos() - 2.0 * (rp * x).cos()).powi(2) / 64.0;
        assert!((p16 - want).abs() < 1e-13);
    }
}

#[test]
fn no_perfect_transfer_in_limits() {
    let grid = 40_000;
    let period = 4.0 * std::f64::consts::PI;
    let max6 = (0..grid)
        .map(|k| p_infty(6, &Time::Real(HighReal::from_f64(k as f64 * period / grid as f64, 64)), 8).unwrap().to_f64())
        .fold(0.0, f64::max);
    assert!(max6 <= 0.75 + 1e-6);
    assert!(max6 > 0.7499);
    let max10 = (0..grid)
        .map(|k| p_infty(10, &Time::Real(HighReal::from_f64(k as f64 * 0.005, 64)), 8).unwrap().to_f64())
        .fold(0.0, f64::max);
    assert!(max10 < 0.99);
}

#[test]
fn strong_coupling_checks() {
    let c = scl_limit_check(4, &Coupling::from_ratio(10_000, 1), &pi_time(1, 2), 15).unwrap();
    assert!(c.gap.to_f64() < 1e-3);
    let c = scl_limit_check(8, &Coupling::from_ratio(1_000_000, 1), &pi_time(12, 1), 15).unwrap();
    assert!(within(&c.p_finite, 0.996, 5e-4), "{}", c.p_finite);
    assert!(c.gap.to_f64() < 1e-4);
    let c = scl_limit_check(6, &Coupling::from_ratio(1_000_000, 1), &pi_time(2, 3), 15).unwrap();
    assert!(within(&c.p_finite, 0.75, 1e-4));
}

#[test]
fn n4_localization() {
    let spec = ChainSpec::staggered(4, Coupling::from_ratio(3, 1)).unwrap();
    let m = build_single_excitation_matrix(&spec, 160).unwrap();
    let sd = n4_exact(&Coupling::from_ratio(3, 1), 128).unwrap();
    let vecs = tridiagonal_eigenvectors(&m, &sd.energies, 96).unwrap();
    let loc = localization(&vecs);
    let (c2, c4) = crate::spectral::n4_c_constants(&Coupling::from_ratio(3, 1), 128);
    let (c2s, c4s) = (c2.to_f64().powi(2), c4.to_f64().powi(2));
    let p = |a: usize, i: usize| loc.probabilities[a][i].to_f64();
    for i in 0..4 {
        assert!((p(0, i) - 0.25).abs() < 1e-15);
    }
    assert!((p(1, 0) - c2s).abs() < 1e-15 && (p(1, 3) - c2s).abs() < 1e-15);
    assert!((p(1, 1) - c4s).abs() < 1e-15 && (p(1, 2) - c4s).abs() < 1e-15);
    assert!(loc.state_sums().iter().chain(&loc.site_sums()).all(|s| (s - 1.0).abs() < 1e-15));
}

#[test]
fn n6_end_localization_grows_with_coupling() {
    let mut last = vec![0.0; 2];
    for j in [1i64, 2, 5, 10] {
        let spec = ChainSpec::staggered(6, Coupling::from_ratio(j, 1)).unwrap();
        let sd = closed_form_spectrum(&spec, 128).unwrap();
        let m = build_single_excitation_matrix(&spec, 160).unwrap();
        let loc = localization(&tridiagonal_eigenvectors(&m, &sd.energies, 96).unwrap());
        let mut ends = loc.endpoint_weight();
        ends.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let top = ends[..2].to_vec();
        assert!(top.iter().zip(&last).all(|(a, b)| a >= b));
        last = top;
    }
    assert!(last.iter().all(|&x| x > 0.66 && x < 2.0 / 3.0));
}

#[test]
fn pythagorean_four_thirds() {
    let r = periodicity_analysis(&Rational::from((4, 3)));
    assert!(r.is_periodic);
    assert_eq!(r.period_over_pi, Some(Rational::from((3, 2))));
    assert_eq!(r.upper_bound, Some(Rational::from((19, 20))));
    let want = HighReal::from_rational(&Rational::from((625, 1024)), 192);
    assert!(r.p_max.as_ref().unwrap().distance(&want) < 1e-40);
    assert!((r.t_max.as_ref().unwrap().to_f64() - 1.367_607_436_45).abs() < 1e-10);
    let series = r.series.unwrap();
    assert_eq!(series.constant, Rational::from((33, 100)));
    assert_eq!(series.terms.len(), 5);
    let w = r.obstruction_witness.unwrap();
    assert!(!w.satisfiable);
    assert_eq!(r.certificate, Certificate::NoPgt);
}

#[test]
fn pythagorean_others() {
    let r = periodicity_analysis(&Rational::from((4003, 3000)));
    assert!(!r.is_periodic && r.certificate == Certificate::NotApplicable);
    let r = periodicity_analysis(&Rational::from((12, 5)));
    assert!(r.is_periodic && *r.upper_bound.as_ref().unwrap() == 1);
    assert!(r.p_max.as_ref().unwrap().to_f64() < 0.99 && r.certificate == Certificate::NoPgt);
    let p_max = r.p_max.as_ref().unwrap().to_f64();
    let grid = r.grid_bound.unwrap();
    assert!(grid >= p_max && grid - p_max < 1e-6);
    assert_eq!(r.effective_bound(), Some(grid));
    assert!(!r.obstruction_witness.unwrap().satisfiable);
    let r = periodicity_analysis(&Rational::from((3, 4)));
    assert!(r.is_periodic && r.certificate == Certificate::Unsupported && r.obstruction_witness.is_none());
    let r = periodicity_analysis(&Rational::from((8, 6)));
    assert_eq!(r.triple.unwrap().0, 3);
}

#[test]
fn periodic_series_repeats() {
    for (b, a) in [(4i64, 3i64), (12, 5), (24, 7), (15, 8)] {
        let rep = periodicity_analysis(&Rational::from((b, a)));
        let period = rep.period_over_pi.unwrap();
        let series = n4_series(b, a);
        for q in [1i64, 5, 17] {
            let t0 = TimePoint::new(q, 7);
            let shifted = Rational::from((q, 7)) + &period;
            let den = shifted.denom().to_u64().unwrap();
            let t1 = TimePoint::new(shifted.numer().clone(), den);
            let a0 = evaluate_p(&series, &Time::PiMultiple(t0), 25).unwrap();
            let a1 = evaluate_p(&series, &Time::PiMultiple(t1), 25).unwrap();
            assert!(a0.distance(&a1) < 1e-24);
        }
    }
}

#[test]
fn four_thirds_weights_cancel_exactly() {
    let c2 = Rational::from((9, 20));
    let c4 = Rational::from((1, 20));
    assert_eq!(Rational::from((1, 2)) - c2 - c4, 0);
    let r = periodicity_analysis(&Rational::from((4, 3)));
    let s = r.series.unwrap();
    let at_zero = s.terms.iter().fold(s.constant.clone(), |a, (_, c)| a + c);
    assert_eq!(at_zero, 0);
}

#[test]
fn time_parsing() {
    let t = Time::parse("12pi/2", 1, 128).unwrap();
    assert_eq!(t, pi_time(12, 2));
    assert_eq!(Time::parse("pi/2", 1, 128).unwrap(), pi_time(1, 2));
    assert_eq!(Time::parse("3*pi/2", 1, 128).unwrap(), pi_time(3, 2));
    assert_eq!(Time::parse("q=408", 1, 128).unwrap(), pi_time(408, 1));
    assert!(matches!(Time::parse("0.5", 1, 128).unwrap(), Time::Real(_)));
    assert!(Time::parse("pi/0", 1, 128).is_err());
    assert_eq!(pi_time(12, 2).to_string(), "12pi/2");
}

#[test]
fn amplitude_precision_is_enforced() {
    let spec = ChainSpec::staggered(6, Coupling::from_ratio(2, 1)).unwrap();
    let series = build_series(&closed_form_spectrum(&spec, 128).unwrap());
    assert!(matches!(evaluate_p(&series, &pi_time(3, 1), 40), Err(DynamicsError::AmplitudePrecision { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn closed_n4_matches_series(num in 1i64..60, den in 1i64..20, q in 0i64..100_000, tden in 1u64..9) {
        let t = pi_time(q, tden);
        let a = p4_closed(&Coupling::from_ratio(num, den), &t, 25).unwrap();
        let b = evaluate_p(&n4_series(num, den), &t, 25).unwrap();
        prop_assert!(a.distance(&b) < 1e-24);
        prop_assert!(b.to_f64() >= -1e-25 && b.to_f64() <= 1.0 + 1e-25);
    }
}
