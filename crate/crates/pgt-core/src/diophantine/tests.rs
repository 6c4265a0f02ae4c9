use proptest::prelude::*;
use rug::{Float, Integer, Rational};

use super::*;
use crate::chain::{ChainSpec, Coupling};
use crate::dynamics::build_series;
use crate::spectral::{closed_form_spectrum, n4_exact, scl_spectrum};

fn pq(c: &Convergent) -> (u64, u64) {
    (c.p.to_u64().unwrap(), c.q.to_u64().unwrap())
}

#[test]
fn sqrt5_convergents() {
    let cf = continued_fraction(&sqrt_source(Rational::from(5)), 4).unwrap();
    let got: Vec<_> = cf.convergents.iter().map(pq).collect();
    assert_eq!(got, vec![(2, 1), (9, 4), (38, 17), (161, 72)]);
    assert_eq!(cf.certified, 4);
    for c in &cf.convergents {
        assert!(c.residual.to_f64() < 1.0 / c.q.to_f64());
    }
}

#[test]
fn sqrt101_and_sqrt2_convergents() {
    let cf = continued_fraction(&sqrt_source(Rational::from(101)), 2).unwrap();
    assert_eq!(cf.convergents.iter().map(pq).collect::<Vec<_>>(), vec![(10, 1), (201, 20)]);
    let cf = continued_fraction(&sqrt_source(Rational::from(2)), 8).unwrap();
    assert_eq!(pq(&cf.convergents[3]), (17, 12));
    assert_eq!(pq(&cf.convergents[7]), (577, 408));
}

#[test]
fn deep_expansion_needs_more_bits() {
    let cf = continued_fraction(&sqrt_source(Rational::from(3)), 200).unwrap();
    assert_eq!(cf.certified, 200);
    let q = &cf.convergents[199].q;
    assert!(q.significant_bits() > 128);
    assert!(cf.convergents[199].residual.to_f64() > 0.0);
}

#[test]
fn rational_values_terminate() {
    let half = |prec: u32| Float::with_val(prec, 0.75);
    let cf = continued_fraction(&half, 5);
    // 3/4 = [0; 1, 3]; enclosing intervals straddle the end of the expansion.
    match cf {
        Ok(cf) => assert!(cf.certified <= 3),
        Err(e) => assert!(matches!(e, DiophantineError::PrecisionCap { .. })),
    }
}

#[test]
fn newton_iterates_are_convergents() {
    let (a, b) = (newton_raphson_sqrt2(3), newton_raphson_sqrt2(4));
    assert_eq!(pq(&a), (577, 408));
    assert_eq!((b.p.to_u64().unwrap(), b.q.to_u64().unwrap()), (665857, 470832));
    let five = newton_raphson_sqrt2(5);
    let cf = continued_fraction(&sqrt_source(Rational::from(2)), 40).unwrap();
    assert!(cf.convergents.iter().any(|c| c.q == five.q && c.p == five.p));
}

fn n16_irrationals() -> Vec<Box<dyn RealSource>> {
    vec![
        Box::new(sqrt_source(Rational::from(2))),
        Box::new(|p: u32| Float::with_val(p, 2i32 - Float::with_val(p, 2).sqrt()).sqrt()),
        Box::new(|p: u32| Float::with_val(p, 2i32 + Float::with_val(p, 2).sqrt()).sqrt()),
    ]
}

#[test]
fn n16_hits_with_parity() {
    let xs = n16_irrationals();
    let refs: Vec<&dyn RealSource> = xs.iter().map(|b| b.as_ref()).collect();
    let rules = [ParityRule::Even, ParityRule::Odd, ParityRule::Odd];
    let hits = simultaneous_approx(&refs, &rules, 2, &ScanOptions::default()).unwrap();
    // q = 4 and q = 6 also stay within 1/2 of integers of the right parity.
    assert_eq!(hits.iter().map(|h| h.q.to_u64().unwrap()).collect::<Vec<_>>(), vec![4, 6, 7]);
    let seven: Vec<u64> = hits[2].numerators.iter().map(|p| p.to_u64().unwrap()).collect();
    assert_eq!(seven, vec![10, 5, 13]);
    let hits = simultaneous_approx(&refs, &rules, 8, &ScanOptions::default()).unwrap();
    let h = hits.iter().find(|h| h.q == 362).expect("362 is a level-3 hit");
    assert_eq!(h.numerators, vec![Integer::from(512), Integer::from(277), Integer::from(669)]);
    assert!(hits.windows(2).all(|w| w[0].q < w[1].q));
}

#[test]
fn sqrt2_odd_hit_at_twelve() {
    let x = sqrt_source(Rational::from(2));
    let hits = simultaneous_approx(&[&x], &[ParityRule::Odd], 16, &ScanOptions::default()).unwrap();
    let h = hits.iter().find(|h| h.q == 12).unwrap();
    assert_eq!(h.numerators[0], 17);
    assert!(hits.iter().all(|h| h.numerators[0].is_odd()));
}

#[test]
fn scan_budget_is_enforced() {
    let x = sqrt_source(Rational::from(2));
    let opts = ScanOptions { q_range: None, budget: 1000 };
    assert!(matches!(
        simultaneous_approx(&[&x, &x], &[ParityRule::Free; 2], 64, &opts),
        Err(DiophantineError::RangeTooLarge(..))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn dirichlet_guarantee(m in 1usize..=3, level in 1u32..=6, seeds in prop::collection::vec(1u64..u64::MAX, 3)) {
        let m_bound = 1u64 << level.min(if m == 3 { 5 } else { 6 });
        let xs: Vec<Box<dyn RealSource>> = seeds[..m]
            .iter()
            .map(|&s| {
                let r = Rational::from((Integer::from(s), Integer::from(u64::MAX))) + 1u32;
                Box::new(move |p: u32| Float::with_val(p, &r).sqrt()) as Box<dyn RealSource>
            })
            .collect();
        let refs: Vec<&dyn RealSource> = xs.iter().map(|b| b.as_ref()).collect();
        let hits = simultaneous_approx(&refs, &vec![ParityRule::Free; m], m_bound, &ScanOptions::default()).unwrap();
        prop_assert!(!hits.is_empty());
        for h in &hits {
            prop_assert!(h.max_residual < 1.0 / m_bound as f64);
        }
    }
}

fn lattice_n4(j: Coupling) -> AlignmentLattice {
    parity_requirements(&build_series(&n4_exact(&j, 256).unwrap())).unwrap()
}

fn lattice_chain(n: usize, j: Coupling) -> AlignmentLattice {
    let spec = ChainSpec::staggered(n, j).unwrap();
    parity_requirements(&build_series(&closed_form_spectrum(&spec, 256).unwrap())).unwrap()
}

fn lattice_scl(n: usize) -> AlignmentLattice {
    parity_requirements(&build_series(&scl_spectrum(n, 256).to_spectral_data())).unwrap()
}

fn time_of(l: &AlignmentLattice, g: u64) -> (Integer, u64) {
    let t = l.time(&Integer::from(g));
    (t.q, t.pi_den)
}

#[test]
fn n4_lattices() {
    let l = lattice_n4(Coupling::from_ratio(1, 1));
    assert_eq!(l.status, LatticeStatus::Consistent);
    assert_eq!(time_of(&l, 5), (Integer::from(5), 2));
    assert_eq!(l.rules(), vec![ParityRule::Odd]);
    assert_eq!(l.requirements[0].multiplier.to_string(), "sqrt(2)");

    let l = lattice_n4(Coupling::from_ratio(2, 1));
    assert_eq!(time_of(&l, 17), (Integer::from(17), 2));
    assert_eq!(l.rules(), vec![ParityRule::OppositeToQ]);
    assert_eq!(l.requirements[0].multiplier.to_string(), "sqrt(5)");

    let l = lattice_n4(Coupling::from_ratio(4003, 3000));
    assert_eq!(time_of(&l, 1), (Integer::from(1500), 1));
    assert_eq!(l.rules(), vec![ParityRule::OppositeToQ]);
    assert_eq!(l.requirements[0].multiplier.to_string(), "sqrt(25024009)");
}

#[test]
fn n4_pythagorean_is_all_rational() {
    let l = lattice_n4(Coupling::from_ratio(4, 3));
    assert!(l.requirements.is_empty());
    assert_eq!(l.decomposition.route, DecompositionRoute::SquareRoots);
}

#[test]
fn n6_lattices() {
    for (j, rules) in [(3, [ParityRule::Odd, ParityRule::Even]), (7, [ParityRule::Odd, ParityRule::Even]), (5, [ParityRule::Even, ParityRule::Odd])] {
        let l = lattice_chain(6, Coupling::from_ratio(j, 1));
        assert_eq!(l.status, LatticeStatus::Consistent, "J = {j}");
        assert_eq!(time_of(&l, 0), (Integer::from(1), 4), "J = {j}");
        assert_eq!(time_of(&l, 3), (Integer::from(7), 4), "J = {j}");
        let labels: Vec<String> = l.requirements.iter().map(|r| r.multiplier.to_string()).collect();
        let plus = format!("sqrt({})", 1 + j + j * j);
        let minus = format!("sqrt({})", 1 - j + j * j);
        let mut got: Vec<(String, ParityRule)> = labels.into_iter().zip(l.rules()).collect();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let mut want = vec![(plus, rules[0]), (minus, rules[1])];
        want.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, want, "J = {j}");
    }
    for j in [2, 4, 6, 10] {
        assert_eq!(lattice_chain(6, Coupling::from_ratio(j, 1)).status, LatticeStatus::Inconsistent, "J = {j}");
    }
}

#[test]
fn scl_lattices() {
    let l = lattice_scl(8);
    assert_eq!(time_of(&l, 12), (Integer::from(12), 1));
    assert_eq!(l.rules(), vec![ParityRule::Odd]);
    assert!(l.automatic.contains(&Rational::from(4)));

    let l = lattice_scl(16);
    assert_eq!(time_of(&l, 7), (Integer::from(7), 1));
    let got: Vec<(String, ParityRule)> = l.requirements.iter().map(|r| (r.multiplier.to_string(), r.rule)).collect();
    assert_eq!(
        got,
        vec![
            ("2cos(pi/8)".to_string(), ParityRule::Odd),
            ("2cos(pi/4)".to_string(), ParityRule::Even),
            ("2cos(3pi/8)".to_string(), ParityRule::Odd),
        ]
    );

    let l = lattice_scl(4);
    assert!(l.requirements.is_empty());
    assert_eq!(time_of(&l, 0), (Integer::from(1), 2));
}

#[test]
fn relation_route_matches_structure() {
    // N = 8 has nested radicals; the lattice-reduction route must still find a consistent basis.
    let spec = ChainSpec::staggered(8, Coupling::from_ratio(1, 1)).unwrap();
    let sd = closed_form_spectrum(&spec, 256).unwrap();
    let d = decompose_energies(&sd).unwrap();
    assert_eq!(d.route, DecompositionRoute::IntegerRelation);
    assert_eq!(d.basis.len(), 3);
    let scl = decompose_energies(&scl_spectrum(10, 256).to_spectral_data()).unwrap();
    assert_eq!(scl.route, DecompositionRoute::IntegerRelation);
    assert_eq!(scl.basis.len(), 1);
}
