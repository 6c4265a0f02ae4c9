use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Default working precision for spectra, in bits.
pub const SPECTRUM_PREC: u32 = 128;

/// Guard bits granted to the tolerance-based comparison helper.
pub const COMPARE_GUARD: u32 = 16;

/// Arbitrary-precision real with its precision carried along.
#[derive(Clone, Debug)]
pub struct HighReal(Float);

impl HighReal {
    pub fn zero(prec: u32) -> Self {
        HighReal(Float::new(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        HighReal(Float::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        HighReal(Float::with_val(prec, v))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        HighReal(Float::with_val(prec, r))
    }

    pub fn from_integer(i: &Integer, prec: u32) -> Self {
        HighReal(Float::with_val(prec, i))
    }

    pub fn pi(prec: u32) -> Self {
        HighReal(Float::with_val(prec, Constant::Pi))
    }

    /// Parses a decimal literal, e.g. `"0.25"` or `"-1e-3"`.
    pub fn parse(text: &str, prec: u32) -> Option<Self> {
        Float::parse(text.trim()).ok().map(|p| HighReal(Float::with_val(prec, p)))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Rounds to a different precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        HighReal(Float::with_val(prec, &self.0))
    }

    pub fn abs(&self) -> Self {
        HighReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        HighReal(self.0.clone().sqrt())
    }

    pub fn square(&self) -> Self {
        HighReal(self.0.clone().square())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    /// Tolerance equality: `|a - b| <= 2^(-p + guard)` with `p` the smaller precision,
    /// scaled by the larger magnitude when it exceeds one.
    pub fn approx_eq(&self, other: &HighReal, guard: u32) -> bool {
        let p = self.precision().min(other.precision());
        let diff = Float::with_val(p + 8, &self.0 - &other.0).abs();
        let scale = Float::with_val(p, self.0.clone().abs().max(&other.0.clone().abs())).max(&Float::with_val(p, 1));
        let tol = Float::with_val(p, Float::i_exp(1, guard as i32 - p as i32)) * scale;
        diff <= tol
    }

    /// Absolute distance as an `f64` (for diagnostics).
    pub fn distance(&self, other: &HighReal) -> f64 {
        let p = self.precision().max(other.precision());
        Float::with_val(p, &self.0 - &other.0).abs().to_f64()
    }

    /// Fixed-point decimal rendering with exactly `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_fixed(&self.0, digits)
    }
}

/// Round-to-nearest fixed-point decimal text of a float.
pub fn format_fixed(x: &Float, digits: usize) -> String {
    let scale = Integer::from(10).pow(digits as u32);
    let scaled = Float::with_val(x.prec() + 8 + (digits as f64 * 3.33) as u32, x * &scale);
    let (mut n, _) = scaled.to_integer_round(Round::Nearest).unwrap_or((Integer::new(), Ordering::Equal));
    let negative = n < 0;
    if negative {
        n = -n;
    }
    let mut text = n.to_string_radix(10);
    if digits > 0 {
        if text.len() <= digits {
            text = format!("{}{}", "0".repeat(digits + 1 - text.len()), text);
        }
        text.insert(text.len() - digits, '.');
    }
    if negative && text.chars().any(|c| c != '0' && c != '.') {
        text.insert(0, '-');
    }
    text
}

impl From<Float> for HighReal {
    fn from(f: Float) -> Self {
        HighReal(f)
    }
}

impl From<HighReal> for Float {
    fn from(h: HighReal) -> Self {
        h.0
    }
}

impl PartialEq for HighReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for HighReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for HighReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.precision() as f64) / 3.33).floor() as usize);
        f.write_str(&format_fixed(&self.0, digits))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&HighReal> for &HighReal {
            type Output = HighReal;
            fn $m(self, rhs: &HighReal) -> HighReal {
                let p = self.precision().max(rhs.precision());
                HighReal(Float::with_val(p, (&self.0).$m(&rhs.0)))
            }
        }
        impl $tr<HighReal> for HighReal {
            type Output = HighReal;
            fn $m(self, rhs: HighReal) -> HighReal {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal(-self.0)
    }
}

impl Neg for &HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal(-self.0.clone())
    }
}
