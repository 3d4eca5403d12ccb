//! Job execution and output files.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use levy_pide::american::{extract_boundary, solve_american_detailed};
use levy_pide::bs::bs_price;
use levy_pide::format::{fmt9, fmt_sig};
use levy_pide::oracle::{mc_price, McConfig, McEstimate};
use levy_pide::pide::solve_european;
use levy_pide::{LevyModel, OptionSpec, PriceSurface};
use rayon::prelude::*;

use crate::config::{expand_path, OutputKind, RunConfig, Style};
use crate::error::CliError;

/// Spot sample of plot data files: 80 to 125 in steps of 0.5.
pub fn plot_spots() -> Vec<f64> {
    (0..=90).map(|i| 80.0 + 0.5 * i as f64).collect()
}

/// One model at one rate.
#[derive(Debug, Clone)]
pub struct JobResult {
    pub label: String,
    pub rate: f64,
    pub spec: OptionSpec,
    pub model: LevyModel,
    /// `None` when the closed form replaced the solver.
    pub surface: Option<PriceSurface>,
    /// `(S, V(0, S))` at the scenario spots.
    pub prices: Vec<(f64, f64)>,
    pub mc: Vec<McEstimate>,
    pub warnings: Vec<String>,
}

impl JobResult {
    pub fn value_at(&self, spot: f64) -> levy_pide::Result<f64> {
        match &self.surface {
            Some(s) => s.price_at(0.0, spot),
            None => bs_price(&self.spec, spot, 0.0),
        }
    }
}

/// Runs every (scenario, model) pair concurrently; results come back in
/// scenario-major order regardless of scheduling.
pub fn execute(cfg: &RunConfig) -> Result<Vec<JobResult>, CliError> {
    let needs_surface = cfg
        .outputs
        .iter()
        .any(|o| matches!(o.kind, OutputKind::Surface | OutputKind::Boundary));
    let jobs: Vec<(usize, usize)> = (0..cfg.scenarios.len())
        .flat_map(|s| (0..cfg.models.len()).map(move |m| (s, m)))
        .collect();
    jobs.par_iter()
        .map(|&(si, mi)| {
            let scenario = &cfg.scenarios[si];
            let named = &cfg.models[mi];
            let context = format!("{} at r = {}", named.label, scenario.rate);
            let wrap = |source| CliError::Pricing {
                context: context.clone(),
                source,
            };
            let spec = cfg.spec_for(named, scenario.rate);
            let model = named.model.build().map_err(wrap)?;
            let closed = cfg.closed_form
                && cfg.style == Style::European
                && matches!(model, LevyModel::None)
                && !needs_surface;
            let mut warnings = Vec::new();
            let surface = if closed {
                None
            } else {
                Some(match cfg.style {
                    Style::European => solve_european(&spec, &model, &cfg.grid).map_err(wrap)?,
                    Style::American => {
                        let sol = solve_american_detailed(&spec, &model, &cfg.grid, &cfg.penalty())
                            .map_err(wrap)?;
                        warnings = sol.warnings.iter().map(|w| format!("{context}: {w}")).collect();
                        sol.surface
                    }
                })
            };
            let mut result = JobResult {
                label: named.label.clone(),
                rate: scenario.rate,
                spec,
                model,
                surface,
                prices: Vec::new(),
                mc: Vec::new(),
                warnings,
            };
            for &s in &scenario.spots {
                let v = result.value_at(s).map_err(wrap)?;
                result.prices.push((s, v));
            }
            if let Some(mc) = &cfg.monte_carlo {
                let mcc = McConfig {
                    n_paths: mc.n_paths,
                    n_steps: mc.n_steps,
                    seed: mc.seed,
                    ..McConfig::default()
                };
                for &s in &scenario.spots {
                    result.mc.push(mc_price(&result.spec, &result.model, s, &mcc).map_err(wrap)?);
                }
            }
            Ok(result)
        })
        .collect()
}

/// Writes all requested files after the jobs have finished.
pub fn write_outputs(cfg: &RunConfig, results: &[JobResult]) -> Result<(), CliError> {
    for out in &cfg.outputs {
        match out.kind {
            OutputKind::Table => with_file(&out.path, |w| write_table(results, w))?,
            OutputKind::Surface => {
                for r in results {
                    let path = expand_path(&out.path, &r.label, r.rate);
                    let surface = r.surface.as_ref().expect("surface outputs force a solve");
                    with_file(&path, |w| surface.write_csv(w))?;
                }
            }
            OutputKind::Boundary => {
                for r in results {
                    let path = expand_path(&out.path, &r.label, r.rate);
                    let surface = r.surface.as_ref().expect("boundary outputs force a solve");
                    let boundary = extract_boundary(surface, 1e-6 * r.spec.strike);
                    with_file(&path, |w| boundary.write_csv(w))?;
                }
            }
            OutputKind::Plotdata => {
                let spots = plot_spots();
                for sc in &cfg.scenarios {
                    let mut columns = Vec::new();
                    for r in results.iter().filter(|r| r.rate == sc.rate) {
                        let values = spots
                            .iter()
                            .map(|&s| r.value_at(s))
                            .collect::<levy_pide::Result<Vec<f64>>>()
                            .map_err(|source| CliError::Pricing {
                                context: format!("plot data for {} at r = {}", r.label, r.rate),
                                source,
                            })?;
                        columns.push((format!("V_{}", r.label), values));
                    }
                    let path = expand_path(&out.path, "", sc.rate);
                    let mut buf = Vec::new();
                    emit_plotdata(&columns, &spots, &mut buf)?;
                    with_file(&path, |w| w.write_all(&buf))?;
                }
            }
        }
    }
    Ok(())
}

fn with_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(err)?);
    body(&mut w).map_err(err)?;
    w.flush().map_err(err)
}

/// `model,rate,S,V` rows, plus `mc,mc_stderr` when Monte Carlo ran.
pub fn write_table<W: Write>(results: &[JobResult], mut out: W) -> std::io::Result<()> {
    let with_mc = results.iter().any(|r| !r.mc.is_empty());
    write!(out, "model,rate,S,V")?;
    if with_mc {
        write!(out, ",mc,mc_stderr")?;
    }
    writeln!(out)?;
    for r in results {
        for (k, &(s, v)) in r.prices.iter().enumerate() {
            write!(out, "{},{},{},{}", r.label, fmt9(r.rate), fmt9(s), fmt9(v))?;
            if let Some(est) = r.mc.get(k) {
                write!(out, ",{},{}", fmt9(est.price), fmt9(est.stderr))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Columnar `S,<name>...` data at six significant digits.
pub fn emit_plotdata<W: Write>(columns: &[(String, Vec<f64>)], spots: &[f64], mut out: W) -> Result<(), CliError> {
    if columns.is_empty() {
        return Err(CliError::Config("plot data needs at least one priced model".into()));
    }
    let mut names = std::collections::BTreeSet::new();
    names.insert("S");
    for (name, values) in columns {
        if !names.insert(name.as_str()) {
            return Err(CliError::Config(format!("plot data column {name} appears twice; rename a model label")));
        }
        assert_eq!(values.len(), spots.len(), "one value per spot");
    }
    let mut text = String::from("S");
    for (name, _) in columns {
        text.push(',');
        text.push_str(name);
    }
    text.push('\n');
    for (k, &s) in spots.iter().enumerate() {
        text.push_str(&fmt_sig(s, 6));
        for (_, values) in columns {
            text.push(',');
            text.push_str(&fmt_sig(values[k], 6));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
        path: "plot data".into(),
        source,
    })
}

/// Table with one row per spot and one column per model and rate, followed
/// by the payoff.
pub fn summary(results: &[JobResult]) -> String {
    let mut spots: Vec<f64> = results.iter().flat_map(|r| r.prices.iter().map(|p| p.0)).collect();
    spots.sort_by(f64::total_cmp);
    spots.dedup();
    let headers: Vec<String> = results.iter().map(|r| format!("{} r={}", r.label, r.rate)).collect();
    let widths: Vec<usize> = headers.iter().map(|h| h.len().max(10)).collect();
    let mut text = String::new();
    let _ = write!(text, "{:>10}", "S");
    for (h, w) in headers.iter().zip(&widths) {
        let _ = write!(text, "  {h:>w$}");
    }
    let _ = writeln!(text, "  {:>10}", "payoff");
    for s in spots {
        let _ = write!(text, "{:>10}", fmt_sig(s, 6));
        for (r, w) in results.iter().zip(&widths) {
            let cell = r
                .prices
                .iter()
                .find(|p| p.0 == s)
                .map(|p| fmt_sig(p.1, 6))
                .unwrap_or_default();
            let _ = write!(text, "  {cell:>w$}");
        }
        let payoff = results.first().map(|r| r.spec.payoff(s)).unwrap_or(0.0);
        let _ = writeln!(text, "  {:>10}", fmt_sig(payoff, 6));
    }
    text
}
