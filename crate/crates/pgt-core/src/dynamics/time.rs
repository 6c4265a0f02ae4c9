use std::fmt;

use rug::float::Constant;
use rug::{Float, Integer};

use super::DynamicsError;
use crate::radicals::HighReal;

/// `t = q pi / pi_den`, carried exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePoint {
    pub q: Integer,
    pub pi_den: u64,
    /// `q pi / pi_den` at 128 bits plus the size of `q`.
    pub decimal: HighReal,
}

impl TimePoint {
    pub fn new(q: impl Into<Integer>, pi_den: u64) -> Self {
        assert!(pi_den > 0, "pi denominator must be positive");
        let q = q.into();
        let prec = 128 + q.significant_bits();
        let decimal = HighReal::from(Float::with_val(prec, Constant::Pi) * &q / pi_den);
        TimePoint { q, pi_den, decimal }
    }

    pub fn zero() -> Self {
        TimePoint::new(0, 1)
    }

    /// `q pi / pi_den` at the requested precision.
    pub fn value(&self, prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi) * &self.q / self.pi_den
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_den {
            1 => write!(f, "{}pi", self.q),
            d => write!(f, "{}pi/{}", self.q, d),
        }
    }
}

/// A time either as an exact multiple of pi or as a real number.
#[derive(Clone, Debug, PartialEq)]
pub enum Time {
    PiMultiple(TimePoint),
    Real(HighReal),
}

impl Time {
    /// Accepts `12pi`, `pi/2`, `3*pi/2`, `12pi/2`, `q=408` (with `default_den`) or a decimal.
    pub fn parse(text: &str, default_den: u64, prec: u32) -> Result<Time, DynamicsError> {
        let bad = || DynamicsError::BadTime(text.to_string());
        let t = text.trim().replace(' ', "");
        if let Some(q) = t.strip_prefix("q=") {
            let q: Integer = q.parse().map_err(|_| bad())?;
            return Ok(Time::PiMultiple(TimePoint::new(q, default_den)));
        }
        if let Some(pos) = t.find("pi") {
            let head = t[..pos].trim_end_matches('*');
            let tail = &t[pos + 2..];
            let q: Integer = if head.is_empty() { Integer::from(1) } else { head.parse().map_err(|_| bad())? };
            let den: u64 = match tail.strip_prefix('/') {
                Some(d) => d.parse().map_err(|_| bad())?,
                None if tail.is_empty() => 1,
                None => return Err(bad()),
            };
            if den == 0 || q < 0 {
                return Err(bad());
            }
            return Ok(Time::PiMultiple(TimePoint::new(q, den)));
        }
        HighReal::parse(&t, prec).map(Time::Real).ok_or_else(bad)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Time::PiMultiple(tp) => tp.decimal.to_f64(),
            Time::Real(h) => h.to_f64(),
        }
    }

    pub fn value(&self, prec: u32) -> Float {
        match self {
            Time::PiMultiple(tp) => tp.value(prec),
            Time::Real(h) => Float::with_val(prec, h.as_float()),
        }
    }

    /// Extra bits needed to resolve phases at this time.
    pub(crate) fn magnitude_bits(&self) -> u32 {
        match self {
            Time::PiMultiple(tp) => tp.q.significant_bits(),
            Time::Real(h) => h.as_float().get_exp().unwrap_or(0).max(0) as u32,
        }
    }

    /// `(sin, cos)` of `omega t`.
    pub(crate) fn sin_cos(&self, omega: &Float, prec: u32) -> (Float, Float) {
        match self {
            Time::PiMultiple(tp) => {
                let mut x = Float::with_val(prec, omega * &tp.q);
                x /= tp.pi_den;
                let r = reduce_mod2(x);
                (r.clone().sin_pi(), r.cos_pi())
            }
            Time::Real(h) => {
                let x = Float::with_val(prec, omega * h.as_float());
                x.sin_cos(Float::new(prec))
            }
        }
    }
}

impl From<TimePoint> for Time {
    fn from(tp: TimePoint) -> Self {
        Time::PiMultiple(tp)
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::PiMultiple(tp) => tp.fmt(f),
            Time::Real(h) => f.write_str(&h.to_decimal(20)),
        }
    }
}

/// `x mod 2` into `[-1, 1)`.
pub(crate) fn reduce_mod2(x: Float) -> Float {
    let prec = x.prec();
    let half = Float::with_val(prec, &x / 2u32);
    let k = half.round();
    let r = Float::with_val(prec, &x - Float::with_val(prec, &k * 2u32));
    if r >= 1 {
        r - 2u32
    } else {
        r
    }
}
