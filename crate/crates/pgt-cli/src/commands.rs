use std::fs::File;

use pgt_core::chain::{build_single_excitation_matrix, ChainSpec, Coupling};
use pgt_core::dynamics::{build_series, evaluate_p, localization, p_infty, periodicity_analysis, Time, TimePoint};
use pgt_core::pgtlab::{crossover_scan, fit_points, log_grid, pgt_search_with, SearchConfig};
use pgt_core::spectral::{closed_form_spectrum_with, scl_spectrum, tridiagonal_eigenvectors, AMPLITUDE_PREC};
use pgt_core::HighReal;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::args::{ChainArgs, Cli, Command, Format};
use crate::dto::*;
use crate::validate::{run_suite, ValidateOptions};
use crate::{Artifacts, CliError};

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * 3.33).ceil() as u32 + 32
}

fn coupling(text: &str) -> Result<Coupling, CliError> {
    let c: Coupling = text.parse()?;
    if !c.is_positive() {
        return Err(CliError::Usage(format!("coupling must be positive, got {text}")));
    }
    Ok(c)
}

fn chain_spec(c: &ChainArgs) -> Result<ChainSpec, CliError> {
    match (&c.j2, c.scl) {
        (_, true) => Ok(ChainSpec::strong_coupling(c.n)?),
        (Some(j), false) => Ok(ChainSpec::staggered(c.n, coupling(j)?)?),
        (None, false) => Err(CliError::Usage("either --j2 or --scl is required".into())),
    }
}

fn time_arg(text: &str, default_den: u64) -> Result<Time, CliError> {
    Time::parse(text, default_den, 256).map_err(|_| CliError::Usage(format!("cannot parse time {text:?}; use forms like 8pi, 12pi/2, q=408 or 3.7")))
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn one_format(cli: &Cli, default: Format, allowed: &[Format], cmd: &str) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(CliError::Usage(format!("{cmd} does not emit {f:?}")));
    }
    Ok(f)
}

pub(crate) fn dispatch(cli: &Cli) -> Result<Artifacts, CliError> {
    use Format::{Csv, Json};
    let primary = |s: String| Ok(Artifacts { primary: s, ..Default::default() });
    match &cli.command {
        Command::Spectrum { chain, prec, digits } => {
            let spec = chain_spec(chain)?;
            if *prec < 64 {
                return Err(CliError::Usage("--prec must be at least 64 bits".into()));
            }
            let sd = if chain.scl {
                scl_spectrum(chain.n, *prec).to_spectral_data()
            } else {
                closed_form_spectrum_with(&spec, *prec, (*prec).max(AMPLITUDE_PREC))?
            };
            let digits = digits.unwrap_or(((*prec - 8) as f64 / 3.33) as u32);
            let dto = SpectrumDto::new(&spec, &sd, digits);
            match one_format(cli, Json, &[Json, Csv], "spectrum")? {
                Json => primary(json(&dto)?),
                Csv => primary(csv_rows(&dto.rows)?),
            }
        }
        Command::Evolve { chain, t_max, samples, digits } => {
            let spec = chain_spec(chain)?;
            if *samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            let t_max = time_arg(t_max, if chain.scl { 1 } else { 2 })?;
            let series = if chain.scl {
                None
            } else {
                Some(build_series(&closed_form_spectrum_with(&spec, 128, bits_for(*digits).max(AMPLITUDE_PREC))?))
            };
            let steps = (*samples - 1) as u64;
            let mut rows = Vec::with_capacity(*samples);
            for k in 0..=steps {
                let t = match &t_max {
                    Time::PiMultiple(tp) => {
                        let r = Rational::from((Integer::from(&tp.q * k), Integer::from(tp.pi_den) * steps));
                        let (q, d) = r.into_numer_denom();
                        Time::PiMultiple(TimePoint::new(q, d.to_u64().expect("denominator fits")))
                    }
                    Time::Real(h) => Time::Real(h * &HighReal::from_rational(&Rational::from((k, steps)), h.precision())),
                };
                let p = match &series {
                    Some(s) => evaluate_p(s, &t, *digits)?,
                    None => p_infty(chain.n, &t, *digits)?,
                };
                let (q, pi_den, dec) = match &t {
                    Time::PiMultiple(tp) => (tp.q.to_string(), tp.pi_den, tp.decimal.to_decimal(*digits as usize)),
                    Time::Real(h) => (String::new(), 0, h.to_decimal(*digits as usize)),
                };
                rows.push(EvolveRow { q, pi_den, t: dec, p: p.to_decimal(*digits as usize) });
            }
            match one_format(cli, Csv, &[Json, Csv], "evolve")? {
                Json => primary(json(&rows)?),
                Csv => primary(csv_rows(&rows)?),
            }
        }
        Command::PgtSearch { chain, levels, digits, budget, .. } => {
            let spec = chain_spec(chain)?;
            if *levels == 0 || *digits == 0 {
                return Err(CliError::Usage("--levels and --digits must be positive".into()));
            }
            let cfg = SearchConfig { max_level: *levels, digits: *digits, budget: *budget, ..SearchConfig::default() };
            let curve = pgt_search_with(&spec, &cfg)?;
            let dto = CurveDto::new(&spec, &curve, *levels, *digits);
            let stairs: Vec<StaircaseRow> = curve.records.iter().map(|r| StaircaseRow::new(r, *digits)).collect();
            let stairs = csv_rows(&stairs)?;
            match one_format(cli, Json, &[Json, Csv], "pgt-search")? {
                Json => Ok(Artifacts { primary: json(&dto)?, staircase: Some(stairs), failure: None }),
                Csv => primary(stairs),
            }
        }
        Command::Periodicity { j2, digits } => {
            one_format(cli, Json, &[Json], "periodicity")?;
            let c = coupling(j2)?;
            let r = c.as_rational().ok_or_else(|| CliError::Usage(format!("periodicity needs a rational coupling, got {j2}")))?;
            primary(json(&PeriodicityDto::new(&periodicity_analysis(r), *digits))?)
        }
        Command::Fit { input } => {
            let mut rd = csv::Reader::from_reader(File::open(input)?);
            let headers = rd.headers()?.clone();
            let col = |name: &str| {
                headers.iter().position(|h| h.trim() == name).ok_or_else(|| CliError::Usage(format!("{} has no {name:?} column", input.display())))
            };
            let (ti, ei) = (col("time")?, col("epsilon")?);
            let mut pts = Vec::new();
            for rec in rd.records() {
                let rec = rec?;
                let num = |i: usize| {
                    rec.get(i).and_then(|s| s.trim().parse::<f64>().ok()).ok_or_else(|| CliError::Usage(format!("bad number in row {:?}", rec)))
                };
                pts.push((num(ei)?, num(ti)?));
            }
            let fit = FitDto::from(&fit_points(&pts)?);
            match one_format(cli, Json, &[Json, Csv], "fit")? {
                Json => primary(json(&fit)?),
                Csv => primary(csv_rows(&[fit])?),
            }
        }
        Command::Crossover { n, t, j2_min, j2_max, points, log, digits } => {
            if !(*j2_min > 0.0 && j2_max >= j2_min && *points >= 1) {
                return Err(CliError::Usage("need 0 < --j2-min <= --j2-max and --points >= 1".into()));
            }
            ChainSpec::strong_coupling(*n)?;
            let t = time_arg(t, 1)?;
            let grid = if *log {
                log_grid(*j2_min, *j2_max, *points)
            } else {
                (0..*points)
                    .map(|k| {
                        let x = if *points == 1 { *j2_min } else { j2_min + (j2_max - j2_min) * k as f64 / (*points - 1) as f64 };
                        Coupling::Real(HighReal::from_f64(x, 128))
                    })
                    .collect()
            };
            let scan = crossover_scan(*n, &t, &grid, *digits)?;
            let d = *digits as usize;
            let rows: Vec<CrossoverRow> = scan
                .points
                .iter()
                .map(|(j, p)| {
                    let jh = j.to_high(128);
                    let inv = &HighReal::from_i64(1, 128) / &jh;
                    CrossoverRow { j2: jh.to_decimal(d), inv_j2: inv.to_decimal(d), p: p.to_decimal(d), p_infty: scan.p_infty.to_decimal(d) }
                })
                .collect();
            match one_format(cli, Csv, &[Json, Csv], "crossover")? {
                Json => primary(json(&rows)?),
                Csv => primary(csv_rows(&rows)?),
            }
        }
        Command::Localization { n, j2, digits } => {
            let spec = ChainSpec::staggered(*n, coupling(j2)?)?;
            let bits = bits_for(*digits).max(AMPLITUDE_PREC);
            let sd = closed_form_spectrum_with(&spec, bits + 32, bits)?;
            let m = build_single_excitation_matrix(&spec, bits + 64)?;
            let loc = localization(&tridiagonal_eigenvectors(&m, &sd.energies, bits)?);
            let d = *digits as usize;
            let dto = LocalizationDto {
                n_sites: *n,
                regime: regime_label(&spec),
                energies: sd.energies.iter().map(|e| e.to_decimal(d)).collect(),
                probabilities: loc.probabilities.iter().map(|row| row.iter().map(|x| x.to_decimal(d)).collect()).collect(),
            };
            match one_format(cli, Csv, &[Json, Csv], "localization")? {
                Json => primary(json(&dto)?),
                Csv => primary(dto.to_csv()?),
            }
        }
        Command::Validate { max_n, samples, seed } => {
            if *max_n < 4 {
                return Err(CliError::Usage("--max-n must be at least 4".into()));
            }
            let lines = run_suite(&ValidateOptions { max_n: *max_n, samples: *samples, seed: *seed });
            let failed = lines.iter().filter(|l| !l.passed).count();
            let text = match one_format(cli, Csv, &[Json, Csv], "validate")? {
                Json => json(&lines)?,
                Csv => csv_rows(&lines)?,
            };
            let failure = (failed > 0).then_some(CliError::ValidationFailed(failed, lines.len()));
            Ok(Artifacts { primary: text, staircase: None, failure })
        }
    }
}
