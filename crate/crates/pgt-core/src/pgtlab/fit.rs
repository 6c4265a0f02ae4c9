use crate::dynamics::TimePoint;
use crate::radicals::HighReal;

use super::{PgtError, PgtRecord};

/// `t_eps = c / eps^f` fitted by least squares on `(log eps, log t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerLawFit {
    pub c: f64,
    pub exponent: f64,
    /// Coefficient of determination.
    pub quality: f64,
    pub points: usize,
    pub decades: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StaircasePoint {
    pub time: TimePoint,
    pub p_value: HighReal,
    pub epsilon: HighReal,
}

impl StaircasePoint {
    /// `(log10 eps, log10 t)` for plotting.
    pub fn log_log(&self) -> (f64, f64) {
        (self.epsilon.to_f64().log10(), self.time.decimal.to_f64().log10())
    }
}

/// Pareto frontier: the earliest time reaching each epsilon, strictly improving.
pub fn epsilon_curve(records: &[PgtRecord]) -> Vec<StaircasePoint> {
    let mut pts: Vec<StaircasePoint> = records
        .iter()
        .map(|r| StaircasePoint { time: r.time.clone(), p_value: r.p_value.clone(), epsilon: r.epsilon.clone() })
        .collect();
    pts.sort_by(|a, b| {
        a.time
            .decimal
            .partial_cmp(&b.time.decimal)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.epsilon.partial_cmp(&b.epsilon).unwrap_or(std::cmp::Ordering::Equal))
    });
    pts.dedup_by(|later, earlier| later.time == earlier.time);
    let mut out: Vec<StaircasePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_none_or(|l| p.epsilon < l.epsilon) {
            out.push(p);
        }
    }
    out
}

/// Least squares of `log t` against `-log eps` over the given `(eps, t)` points.
pub fn fit_points(points: &[(f64, f64)]) -> Result<PowerLawFit, PgtError> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(e, t)| *e > 0.0 && *t > 0.0).map(|(e, t)| (-e.ln(), t.ln())).collect();
    let n = pts.len();
    let decades = if n > 0 {
        let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        (hi - lo) / std::f64::consts::LN_10
    } else {
        0.0
    };
    if n < 4 || decades < 3.0 {
        return Err(PgtError::InsufficientSpan { records: n, decades });
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let quality = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(PowerLawFit { c: intercept.exp(), exponent: slope, quality, points: n, decades })
}

/// Fit over the improving records past the first decade of epsilon.
pub fn fit_power_law(records: &[PgtRecord]) -> Result<PowerLawFit, PgtError> {
    let improving: Vec<&PgtRecord> = records.iter().filter(|r| r.improving).collect();
    let first = improving.first().ok_or(PgtError::Empty)?.epsilon.to_f64();
    let pts: Vec<(f64, f64)> = improving
        .iter()
        .map(|r| (r.epsilon.to_f64(), r.time.decimal.to_f64()))
        .filter(|(e, _)| *e <= first / 10.0)
        .collect();
    fit_points(&pts)
}
