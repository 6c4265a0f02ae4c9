//! Serializable mirrors of the library results. Big integers travel as strings.

use pgt_core::chain::ChainSpec;
use pgt_core::diophantine::{AlignmentLattice, LatticeStatus, ParityRule};
use pgt_core::dynamics::{Certificate, PeriodicityReport, TimePoint};
use pgt_core::pgtlab::{LevelSummary, PgtCurve, PgtRecord, PowerLawFit, Provenance, Verdict};
use pgt_core::spectral::SpectralData;
use pgt_core::HighReal;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Scientific notation with `digits` significant digits.
pub fn scientific(x: &HighReal, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.as_float().to_string_radix(10, Some(digits.max(1) as usize))
}

fn sci_f64(x: f64, digits: u32) -> String {
    scientific(&HighReal::from(Float::with_val(64, x)), digits)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeDto {
    pub q: String,
    pub pi_den: u64,
    pub decimal: String,
}

impl TimeDto {
    pub fn from_point(t: &TimePoint, digits: u32) -> Self {
        TimeDto { q: t.q.to_string(), pi_den: t.pi_den, decimal: t.decimal.to_decimal(digits as usize) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub index: usize,
    pub energy: String,
    pub amp_first: String,
    pub amp_last: String,
    pub branch: Option<String>,
    pub m: Option<u64>,
    pub symmetric: Option<bool>,
    pub radical: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDto {
    pub n_sites: usize,
    pub regime: String,
    pub source: String,
    pub digits: u32,
    pub rows: Vec<EigenRow>,
}

pub fn regime_label(spec: &ChainSpec) -> String {
    match spec.coupling() {
        Ok(j) => format!("j2={j}"),
        Err(_) => "strong-coupling-limit".to_string(),
    }
}

impl SpectrumDto {
    pub fn new(spec: &ChainSpec, sd: &SpectralData, digits: u32) -> Self {
        let d = digits as usize;
        let rows = sd
            .energies
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let label = sd.labels.as_ref().and_then(|l| l.get(i));
                EigenRow {
                    index: i,
                    energy: e.to_decimal(d),
                    amp_first: sd.amp_first[i].to_decimal(d),
                    amp_last: sd.amp_last[i].to_decimal(d),
                    branch: label.map(|l| format!("{:?}", l.sign).to_lowercase()),
                    m: label.map(|l| l.m),
                    symmetric: label.map(|l| l.symmetric),
                    radical: label.and_then(|l| l.radical_form.clone()),
                }
            })
            .collect();
        SpectrumDto { n_sites: spec.n_sites(), regime: regime_label(spec), source: format!("{:?}", sd.source), digits, rows }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitDto {
    pub c: f64,
    pub f: f64,
    pub r2: f64,
    pub points: usize,
    pub decades: f64,
}

impl From<&PowerLawFit> for FitDto {
    fn from(fit: &PowerLawFit) -> Self {
        FitDto { c: fit.c, f: fit.exponent, r2: fit.quality, points: fit.points, decades: fit.decades }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDto {
    pub time: TimeDto,
    pub g: String,
    pub p: String,
    pub epsilon: String,
    pub level: u32,
    pub provenance: String,
    pub improving: bool,
    pub numerators: Vec<String>,
    pub max_residual: f64,
}

impl RecordDto {
    pub fn new(r: &PgtRecord, digits: u32) -> Self {
        RecordDto {
            time: TimeDto::from_point(&r.time, digits),
            g: r.g.to_string(),
            p: r.p_value.to_decimal(digits as usize),
            epsilon: scientific(&r.epsilon, digits),
            level: r.search_level,
            provenance: provenance_label(r.provenance).to_string(),
            improving: r.improving,
            numerators: r.hit.numerators.iter().map(|n| n.to_string()).collect(),
            max_residual: r.hit.max_residual,
        }
    }
}

pub fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Scan => "scan",
        Provenance::ContinuedFraction => "continued-fraction",
    }
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::PgtObserved => "PGTObserved",
        Verdict::PerfectTransfer => "PerfectTransfer",
        Verdict::Stagnated => "Stagnated",
        Verdict::StagnatedAtBudget => "StagnatedAtBudget",
        Verdict::CertifiedNoPgt => "CertifiedNoPGT",
        Verdict::Inconclusive => "Inconclusive",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequirementDto {
    pub multiplier: String,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDto {
    pub status: String,
    /// `t = pi * unit * (offset + step g) / modulus`.
    pub unit: String,
    pub modulus: u64,
    pub offset: u64,
    pub step: u64,
    pub requirements: Vec<RequirementDto>,
    pub automatic: Vec<String>,
    pub basis: Vec<String>,
}

fn rule_label(r: ParityRule) -> &'static str {
    match r {
        ParityRule::Even => "even",
        ParityRule::Odd => "odd",
        ParityRule::Free => "free",
        ParityRule::SameAsQ => "same-as-g",
        ParityRule::OppositeToQ => "opposite-to-g",
    }
}

impl From<&AlignmentLattice> for LatticeDto {
    fn from(l: &AlignmentLattice) -> Self {
        let status = match l.status {
            LatticeStatus::Consistent => "consistent",
            LatticeStatus::Inconsistent => "inconsistent",
            LatticeStatus::Degenerate => "degenerate",
        };
        LatticeDto {
            status: status.to_string(),
            unit: l.unit.to_string(),
            modulus: l.modulus,
            offset: l.offset,
            step: l.step,
            requirements: l
                .requirements
                .iter()
                .map(|r| RequirementDto { multiplier: r.multiplier.to_string(), rule: rule_label(r.rule).to_string() })
                .collect(),
            automatic: l.automatic.iter().map(|r| r.to_string()).collect(),
            basis: l.decomposition.basis.iter().map(|b| b.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDto {
    pub level: u32,
    pub g_min: u64,
    pub g_max: u64,
    pub best_epsilon: String,
    pub new_records: usize,
}

impl LevelDto {
    fn new(l: &LevelSummary, digits: u32) -> Self {
        LevelDto {
            level: l.level,
            g_min: l.g_range.0,
            g_max: l.g_range.1,
            best_epsilon: sci_f64(l.best_epsilon, digits.min(6)),
            new_records: l.new_records,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDto {
    pub n_sites: usize,
    pub regime: String,
    pub digits: u32,
    pub max_level: u32,
    pub verdict: String,
    pub budget_exhausted: bool,
    pub fit: Option<FitDto>,
    pub lattice: Option<LatticeDto>,
    pub records: Vec<RecordDto>,
    pub levels: Vec<LevelDto>,
    pub periodicity: Option<PeriodicityDto>,
}

impl CurveDto {
    pub fn new(spec: &ChainSpec, curve: &PgtCurve, max_level: u32, digits: u32) -> Self {
        CurveDto {
            n_sites: spec.n_sites(),
            regime: regime_label(spec),
            digits,
            max_level,
            verdict: verdict_label(curve.verdict).to_string(),
            budget_exhausted: curve.budget_exhausted,
            fit: curve.fit.as_ref().map(FitDto::from),
            lattice: curve.lattice.as_ref().map(LatticeDto::from),
            records: curve.records.iter().map(|r| RecordDto::new(r, digits)).collect(),
            levels: curve.levels.iter().map(|l| LevelDto::new(l, digits)).collect(),
            periodicity: curve.periodicity.as_ref().map(|p| PeriodicityDto::new(p, digits.max(12))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityDto {
    pub j2: String,
    pub is_periodic: bool,
    pub triple: Option<[String; 3]>,
    pub period: Option<TimeDto>,
    pub p_max: Option<String>,
    pub t_max: Option<String>,
    pub upper_bound: Option<String>,
    pub upper_bound_decimal: Option<f64>,
    pub grid_bound: Option<f64>,
    pub certificate: String,
    pub obstruction: Option<Vec<String>>,
}

impl PeriodicityDto {
    pub fn new(r: &PeriodicityReport, digits: u32) -> Self {
        let d = digits as usize;
        PeriodicityDto {
            j2: r.j2.to_string(),
            is_periodic: r.is_periodic,
            triple: r.triple.as_ref().map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()]),
            period: r.period().and_then(|t| match t {
                pgt_core::dynamics::Time::PiMultiple(tp) => Some(TimeDto::from_point(&tp, digits)),
                pgt_core::dynamics::Time::Real(_) => None,
            }),
            p_max: r.p_max.as_ref().map(|p| p.to_decimal(d)),
            t_max: r.t_max.as_ref().map(|t| t.to_decimal(d)),
            upper_bound: r.upper_bound.as_ref().map(|u| u.to_string()),
            upper_bound_decimal: r.upper_bound.as_ref().map(|u| u.to_f64()),
            grid_bound: r.grid_bound,
            certificate: match r.certificate {
                Certificate::NoPgt => "no-pgt",
                Certificate::Unsupported => "unsupported",
                Certificate::NotApplicable => "not-applicable",
            }
            .to_string(),
            obstruction: r.obstruction_witness.as_ref().map(|w| w.trace.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseRow {
    pub q: String,
    pub pi_den: u64,
    pub time: String,
    pub p: String,
    pub epsilon: String,
    pub level: u32,
    pub provenance: String,
}

impl StaircaseRow {
    pub fn new(r: &PgtRecord, digits: u32) -> Self {
        StaircaseRow {
            q: r.time.q.to_string(),
            pi_den: r.time.pi_den,
            time: r.time.decimal.to_decimal(digits as usize),
            p: r.p_value.to_decimal(digits as usize),
            epsilon: scientific(&r.epsilon, digits),
            level: r.search_level,
            provenance: provenance_label(r.provenance).to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveRow {
    pub q: String,
    pub pi_den: u64,
    pub t: String,
    pub p: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverRow {
    pub j2: String,
    pub inv_j2: String,
    pub p: String,
    pub p_infty: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationLine {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationDto {
    pub n_sites: usize,
    pub regime: String,
    pub energies: Vec<String>,
    /// `probabilities[a][i]`: weight of eigenstate `a` on site `i + 1`.
    pub probabilities: Vec<Vec<String>>,
}

impl LocalizationDto {
    /// One row per eigenstate; columns `state,energy,site_1..site_N`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["state".to_string(), "energy".to_string()];
        header.extend((1..=self.n_sites).map(|i| format!("site_{i}")));
        w.write_record(&header)?;
        for (a, row) in self.probabilities.iter().enumerate() {
            let mut rec = vec![a.to_string(), self.energies[a].clone()];
            rec.extend(row.iter().cloned());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
