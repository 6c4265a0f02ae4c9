//! Arbitrary-precision reals and algebraic cosine values.

mod highreal;

pub use highreal::{format_fixed, HighReal, COMPARE_GUARD, SPECTRUM_PREC};

use rug::Float;

/// `cos(m*pi/n)` with an optional nested-radical rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineValue {
    pub m: i64,
    pub n: u64,
    pub value: HighReal,
    pub radical_form: Option<String>,
}

/// Which square-root branch an eigenvalue belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchSign {
    Minus,
    Plus,
}

impl BranchSign {
    pub fn factor(self) -> i32 {
        match self {
            BranchSign::Minus => -1,
            BranchSign::Plus => 1,
        }
    }
}

fn guard_for(steps: u32) -> u32 {
    2 * steps + 32
}

/// `2cos(pi/2^k)` in text, `k >= 1`; `k = 1` gives `0`.
fn twice_cos_pow2_text(k: u32) -> String {
    let mut text = String::from("0");
    for _ in 1..k {
        text = if text == "0" { "√2".to_string() } else { format!("√(2+{text})") };
    }
    text
}

/// `cos(pi/2^(k+1))` by the nested half-angle recursion `c <- sqrt((1+c)/2)` from `c = 0`.
pub fn cos_pi_over_pow2(k: u32, prec: u32) -> CosineValue {
    assert!(k >= 1, "k must be positive");
    let wp = prec + guard_for(k);
    let mut c = Float::new(wp);
    for _ in 0..k {
        c = ((c + 1u32) / 2u32).sqrt();
    }
    CosineValue {
        m: 1,
        n: 1u64 << (k + 1),
        value: HighReal::from(Float::with_val(prec, c)),
        radical_form: Some(format!("½{}", twice_cos_pow2_text(k + 1))),
    }
}

/// `sin(pi/2^(k+1)) = (1/2) sqrt(2 - 2cos(pi/2^k))`.
pub fn sin_pi_over_pow2(k: u32, prec: u32) -> CosineValue {
    assert!(k >= 1, "k must be positive");
    let wp = prec + guard_for(k) + 8;
    let mut c = Float::new(wp);
    for _ in 0..k - 1 {
        c = ((c + 1u32) / 2u32).sqrt();
    }
    let s = ((Float::with_val(wp, 1) - c) / 2u32).sqrt();
    let inner = twice_cos_pow2_text(k);
    let text = if inner == "0" { "½√2".to_string() } else { format!("½√(2-{inner})") };
    CosineValue {
        m: 1,
        n: 1u64 << (k + 1),
        value: HighReal::from(Float::with_val(prec, s)),
        radical_form: Some(text),
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `2cos(k*pi/alpha)` for `alpha` in {1, 3, 5}: value and text.
fn twice_cos_seed(k: u64, alpha: u64, wp: u32) -> (Float, String) {
    let k = k % (2 * alpha);
    let sqrt5 = Float::with_val(wp, 5).sqrt();
    let golden = || (Float::with_val(wp, 1) + &sqrt5) / 2u32;
    let golden_m1 = || (sqrt5.clone() - 1u32) / 2u32;
    match (alpha, k) {
        (_, 0) => (Float::with_val(wp, 2), "2".into()),
        (1, 1) | (3, 3) | (5, 5) => (Float::with_val(wp, -2), "-2".into()),
        (3, 1) | (3, 5) => (Float::with_val(wp, 1), "1".into()),
        (3, 2) | (3, 4) => (Float::with_val(wp, -1), "-1".into()),
        (5, 1) | (5, 9) => (golden(), "(1+√5)/2".into()),
        (5, 2) | (5, 8) => (golden_m1(), "(√5-1)/2".into()),
        (5, 3) | (5, 7) => (-golden_m1(), "-(√5-1)/2".into()),
        (5, 4) | (5, 6) => (-golden(), "-(1+√5)/2".into()),
        _ => unreachable!("seed outside catalog"),
    }
}

/// Sign of `cos(num*pi/den)` as -1, 0 or 1, exactly.
fn cos_sign(num: u64, den: u64) -> i32 {
    let r = num % (2 * den);
    let two_r = 2 * r as u128;
    let d = den as u128;
    if two_r == d || two_r == 3 * d {
        0
    } else if two_r < d || two_r > 3 * d {
        1
    } else {
        -1
    }
}

/// `cos(m*pi/n)`. Denominators `alpha * 2^j` with `alpha` in {1, 3, 5} take the half-angle
/// radical route; everything else uses the transcendental cosine.
pub fn cos_rational_pi(m: i64, n: u64, prec: u32) -> CosineValue {
    assert!(n > 0, "denominator must be positive");
    let two_n = 2 * n as i128;
    let mut a = (m as i128).rem_euclid(two_n) as u64;
    if a > n {
        a = 2 * n - a;
    }
    let g = gcd_u64(a, n).max(1);
    let (a, b) = (a / g, n / g);
    let j = b.trailing_zeros();
    let alpha = b >> j;
    if !matches!(alpha, 1 | 3 | 5) {
        let wp = prec + 16;
        let x = Float::with_val(wp, a) / Float::with_val(wp, b);
        return CosineValue { m, n, value: HighReal::from(Float::with_val(prec, x.cos_pi())), radical_form: None };
    }
    let wp = prec + guard_for(j);
    // walk from angle a*pi/alpha down to a*pi/(alpha*2^j), carrying 2cos
    let (mut t, mut text) = twice_cos_seed(a, alpha, wp);
    for i in 1..=j {
        let den = alpha << i;
        let sign = cos_sign(a, den);
        let radicand = Float::with_val(wp, 2) + &t;
        t = if sign == 0 { Float::new(wp) } else { radicand.max(&Float::new(wp)).sqrt() };
        if sign < 0 {
            t = -t;
        }
        text = match (sign, text.as_str()) {
            (0, _) => "0".into(),
            (_, "0") => "√2".into(),
            (_, "2") => "2".into(),
            (_, "1") => "√3".into(),
            (_, "-1") => "1".into(),
            (_, prev) => {
                let inner = if let Some(rest) = prev.strip_prefix('-') { format!("2-{rest}") } else { format!("2+{prev}") };
                format!("√({inner})")
            }
        };
        if sign < 0 && text != "0" {
            text = format!("-{text}");
        }
    }
    let value = Float::with_val(prec, t / 2u32);
    let radical = match text.as_str() {
        "0" => "0".to_string(),
        "2" => "1".to_string(),
        "-2" => "-1".to_string(),
        "1" => "1/2".to_string(),
        "-1" => "-1/2".to_string(),
        "(1+√5)/2" => "(1+√5)/4".to_string(),
        "(√5-1)/2" => "(√5-1)/4".to_string(),
        "-(1+√5)/2" => "-(1+√5)/4".to_string(),
        "-(√5-1)/2" => "-(√5-1)/4".to_string(),
        other => match other.strip_prefix('-') {
            Some(rest) => format!("-½{rest}"),
            None => format!("½{other}"),
        },
    };
    CosineValue { m, n, value: HighReal::from(value), radical_form: Some(radical) }
}

/// `sign * 2 * sqrt(1 + j2^2 + 2 j2 c)`.
pub fn eval_branch_eigenvalue(j2: &HighReal, c: &CosineValue, sign: BranchSign, prec: u32) -> HighReal {
    let wp = prec + 16;
    let j = Float::with_val(wp, j2.as_float());
    let radicand = Float::with_val(wp, 1) + j.clone().square() + Float::with_val(wp, 2 * &j) * c.value.as_float();
    let root = radicand.max(&Float::new(wp)).sqrt() * 2u32;
    let v = if sign == BranchSign::Minus { -root } else { root };
    HighReal::from(Float::with_val(prec, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference_cos(m: i64, n: u64, prec: u32) -> Float {
        let x = Float::with_val(prec + 64, m) / Float::with_val(prec + 64, n);
        x.cos_pi()
    }

    #[test]
    fn quarter_and_eighth_angles() {
        let c = cos_pi_over_pow2(1, 128);
        let half_root2 = Float::with_val(128, 2).sqrt() / 2u32;
        assert!(c.value.approx_eq(&HighReal::from(half_root2), 4));
        assert_eq!(c.radical_form.as_deref(), Some("½√2"));
        let c2 = cos_pi_over_pow2(2, 128);
        assert_eq!(c2.radical_form.as_deref(), Some("½√(2+√2)"));
        let s2 = sin_pi_over_pow2(2, 128);
        assert_eq!(s2.radical_form.as_deref(), Some("½√(2-√2)"));
        assert!((s2.value.to_f64() - 0.382_683_432_365_089_8).abs() < 1e-15);
    }

    #[test]
    fn nested_radicals_match_transcendental_cosine() {
        for k in 1..=20u32 {
            let prec = 200;
            let c = cos_pi_over_pow2(k, prec);
            let r = HighReal::from(Float::with_val(prec, reference_cos(1, 1u64 << (k + 1), prec)));
            assert!(c.value.approx_eq(&r, 8), "k={k}");
            let s = sin_pi_over_pow2(k, prec);
            let one = c.value.square() + s.value.square();
            assert!(one.approx_eq(&HighReal::from_i64(1, prec), 8));
        }
    }

    #[test]
    fn monotone_towards_one() {
        let mut prev = Float::new(96);
        for k in 1..40 {
            let v = cos_pi_over_pow2(k, 96).value.into_float();
            assert!(v > prev && v < 1);
            prev = v;
        }
    }

    #[test]
    fn catalog_seeds() {
        let c = cos_rational_pi(1, 5, 128);
        assert!((c.value.to_f64() - 0.809_016_994_374_947_4).abs() < 1e-15);
        assert_eq!(c.radical_form.as_deref(), Some("(1+√5)/4"));
        let z = cos_rational_pi(2, 4, 128);
        assert!(z.value.is_zero());
        let tw = cos_rational_pi(1, 12, 128);
        assert_eq!(tw.radical_form.as_deref(), Some("½√(2+√3)"));
        assert!((tw.value.to_f64() - (std::f64::consts::PI / 12.0).cos()).abs() < 1e-15);
        assert!(cos_rational_pi(1, 7, 64).radical_form.is_none());
    }

    #[test]
    fn branch_eigenvalue_examples() {
        let one = HighReal::from_i64(1, 128);
        let c0 = cos_rational_pi(1, 2, 128);
        let v = eval_branch_eigenvalue(&one, &c0, BranchSign::Minus, 128);
        assert!((v.to_f64() + 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let cm1 = cos_rational_pi(1, 1, 128);
        assert!(eval_branch_eigenvalue(&one, &cm1, BranchSign::Plus, 128).is_zero());
        let two = HighReal::from_i64(2, 128);
        let w = eval_branch_eigenvalue(&two, &c0, BranchSign::Plus, 128);
        assert!((w.to_f64() - 2.0 * 5f64.sqrt()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn radical_route_agrees_with_cospi(m in -500i64..500, j in 0u32..12, alpha_ix in 0usize..3) {
            let alpha = [1u64, 3, 5][alpha_ix];
            let n = alpha << j;
            let prec = 160;
            let c = cos_rational_pi(m, n, prec);
            let r = HighReal::from(Float::with_val(prec, reference_cos(m, n, prec)));
            prop_assert!(c.value.approx_eq(&r, 16), "m={} n={} got {} want {}", m, n, c.value, r);
            prop_assert!(c.value.abs().to_f64() <= 1.0);
        }

        #[test]
        fn doubling_recovers_angle(m in 0i64..200, j in 1u32..10) {
            let n = 3u64 << j;
            let half = cos_rational_pi(m, 2 * n, 192);
            let full = cos_rational_pi(m, n, 192);
            let doubled = HighReal::from_i64(2, 192) * half.value.square() - HighReal::from_i64(1, 192);
            prop_assert!(doubled.approx_eq(&full.value, 16));
        }

        #[test]
        fn precision_contract_against_f64(m in 1i64..1000, n in 1u64..1000) {
            let c = cos_rational_pi(m, n, 53);
            let want = (std::f64::consts::PI * m as f64 / n as f64).cos();
            prop_assert!((c.value.to_f64() - want).abs() < 1e-12);
        }
    }
}
