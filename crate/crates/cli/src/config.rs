//! Run configuration file.
//!
//! A JSON object. Units: strike and spots in currency, maturity in years,
//! rates and volatilities per year (continuously compounded, per square-root
//! year). Example:
//!
//! ```json
//! {
//!   "option": {"kind": "put", "strike": 100, "maturity": 1, "rate": 0, "sigma": 0.23},
//!   "models": [
//!     {"label": "merton", "type": "merton", "lambda": 0.1, "m": -0.2, "delta": 0.15},
//!     {"label": "vg", "type": "variance_gamma", "theta": -0.43, "kappa": 0.27, "sigma_vg": 0.12}
//!   ],
//!   "scenarios": [{"rate": 0.0, "spots": [90, 100, 110]}],
//!   "outputs": [{"kind": "table", "path": "prices.csv"}]
//! }
//! ```
//!
//! `option.rate` is only a placeholder; each scenario supplies its own rate.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use levy_pide::{GridSpec, LevyModel, OptionKind, OptionSpec, PenaltyConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub option: OptionSpec,
    pub models: Vec<NamedModel>,
    #[serde(default = "GridSpec::standard")]
    pub grid: GridSpec,
    #[serde(default)]
    pub style: Style,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<Output>,
    pub scenarios: Vec<Scenario>,
    /// Use the Black-Scholes formula instead of the solver for models without
    /// jumps (European style only).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closed_form: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarlo>,
}

/// A jump model with a column label and an optional diffusion volatility that
/// replaces `option.sigma` for this model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedModel {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(flatten)]
    pub model: ModelConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelConfig {
    None,
    Merton {
        lambda: f64,
        m: f64,
        delta: f64,
    },
    Kou {
        lambda: f64,
        theta: f64,
        lambda_plus: f64,
        lambda_minus: f64,
    },
    VarianceGamma(VgParams),
    Nig {
        a: f64,
        b: f64,
        c: f64,
    },
    Cgmy {
        c: f64,
        g: f64,
        m: f64,
        y: f64,
    },
}

/// Variance gamma either by its measure coefficients or by the subordinated
/// Brownian motion parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum VgParams {
    Measure { a: f64, b: f64, c: f64 },
    Subordinated { theta: f64, kappa: f64, sigma_vg: f64 },
}

impl ModelConfig {
    pub fn build(&self) -> levy_pide::Result<LevyModel> {
        match *self {
            Self::None => Ok(LevyModel::None),
            Self::Merton { lambda, m, delta } => LevyModel::merton(lambda, m, delta),
            Self::Kou {
                lambda,
                theta,
                lambda_plus,
                lambda_minus,
            } => LevyModel::kou(lambda, theta, lambda_plus, lambda_minus),
            Self::VarianceGamma(VgParams::Measure { a, b, c }) => {
                LevyModel::variance_gamma(a, b, c)
            }
            Self::VarianceGamma(VgParams::Subordinated {
                theta,
                kappa,
                sigma_vg,
            }) => LevyModel::variance_gamma_subordinated(theta, kappa, sigma_vg),
            Self::Nig { a, b, c } => LevyModel::nig(a, b, c),
            Self::Cgmy { c, g, m, y } => LevyModel::cgmy(c, g, m, y),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    #[default]
    European,
    American,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    /// `model,rate,S,V` rows for every scenario spot.
    Table,
    /// Full `tau,x,u` surface per model and rate.
    Surface,
    /// Early exercise boundary per model and rate (American only).
    Boundary,
    /// `S,V_<label>...` columns on a fixed spot sample, one file per rate.
    Plotdata,
}

/// Output file. `surface` and `boundary` paths may contain `{model}` and
/// `{rate}`, `plotdata` paths `{rate}`; the placeholders are required when
/// more than one file would be written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub kind: OutputKind,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub rate: f64,
    pub spots: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    #[serde(default = "default_paths")]
    pub n_paths: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_steps")]
    pub n_steps: usize,
}

fn default_paths() -> usize {
    100_000
}

fn default_seed() -> u64 {
    levy_pide::oracle::McConfig::default().seed
}

fn default_steps() -> usize {
    1
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            n_paths: default_paths(),
            seed: default_seed(),
            n_steps: default_steps(),
        }
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Keep only the model with this label, or use this inline JSON model.
    pub model: Option<String>,
    /// Replace the scenario rates; the spots of all scenarios are pooled.
    pub rates: Vec<f64>,
    pub output: Option<PathBuf>,
    pub grid_n: Option<usize>,
    pub grid_m: Option<usize>,
    pub epsilon: Option<f64>,
    pub closed_form: bool,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config does not parse: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(sel) = &o.model {
            if sel.trim_start().starts_with('{') {
                let m: NamedModel = serde_json::from_str(sel)
                    .map_err(|e| CliError::Config(format!("--model JSON does not parse: {e}")))?;
                self.models = vec![m];
            } else {
                let labels: Vec<&str> = self.models.iter().map(|m| m.label.as_str()).collect();
                let Some(m) = self.models.iter().find(|m| m.label == *sel) else {
                    return Err(CliError::Config(format!(
                        "--model {sel}: no model with that label; available: {}",
                        labels.join(", ")
                    )));
                };
                self.models = vec![m.clone()];
            }
        }
        if !o.rates.is_empty() {
            let mut spots: Vec<f64> = self.scenarios.iter().flat_map(|s| s.spots.iter().copied()).collect();
            spots.sort_by(f64::total_cmp);
            spots.dedup();
            self.scenarios = o
                .rates
                .iter()
                .map(|&rate| Scenario {
                    rate,
                    spots: spots.clone(),
                })
                .collect();
        }
        if let Some(path) = &o.output {
            match self.outputs.iter_mut().find(|out| out.kind == OutputKind::Table) {
                Some(out) => out.path = path.clone(),
                None => self.outputs.push(Output {
                    kind: OutputKind::Table,
                    path: path.clone(),
                }),
            }
        }
        if let Some(n) = o.grid_n {
            self.grid.n_space = n;
        }
        if let Some(m) = o.grid_m {
            self.grid.n_time = m;
        }
        if let Some(eps) = o.epsilon {
            self.penalty.get_or_insert_with(PenaltyConfig::default).epsilon = eps;
        }
        if o.closed_form {
            self.closed_form = true;
        }
        if let Some(seed) = o.seed {
            self.monte_carlo.get_or_insert_with(MonteCarlo::default).seed = seed;
        }
        Ok(())
    }

    /// Checks everything that can be checked without solving.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.option.validate()?;
        self.grid.validate()?;
        if self.models.is_empty() {
            return bad("`models` is empty; add at least one model".into());
        }
        let mut labels = BTreeSet::new();
        for m in &self.models {
            if m.label.is_empty() || m.label.contains([',', '{', '}', '/']) {
                return bad(format!("model label {:?} must be non-empty without , {{ }} /", m.label));
            }
            if !labels.insert(m.label.as_str()) {
                return bad(format!("model label {:?} is used twice", m.label));
            }
            m.model.build()?;
            if let Some(s) = m.sigma {
                self.option.with_sigma(s).validate()?;
            }
        }
        if self.scenarios.is_empty() {
            return bad("`scenarios` is empty; add at least one {\"rate\", \"spots\"} entry".into());
        }
        let lo = self.option.strike * (-self.grid.half_width).exp();
        let hi = self.option.strike * self.grid.half_width.exp();
        for sc in &self.scenarios {
            self.option.with_rate(sc.rate).validate()?;
            if sc.spots.is_empty() {
                return bad(format!("scenario with rate {} has no spots", sc.rate));
            }
            if let Some(s) = sc.spots.iter().find(|&&s| !(s > lo && s < hi)) {
                return bad(format!(
                    "spot {s} lies outside the grid range ({lo:.4}, {hi:.4}); widen grid.half_width"
                ));
            }
        }
        let mut rates: Vec<f64> = self.scenarios.iter().map(|s| s.rate).collect();
        rates.sort_by(f64::total_cmp);
        rates.dedup();
        if rates.len() != self.scenarios.len() {
            return bad("two scenarios share a rate; merge their spot lists".into());
        }
        if let Some(p) = &self.penalty {
            p.validate()?;
        }
        if self.style == Style::American {
            if self.option.kind != OptionKind::Put {
                return bad("american style is only available for puts".into());
            }
            if self.monte_carlo.is_some() {
                return bad("monte_carlo estimates are European; remove it for american style".into());
            }
        }
        if let Some(mc) = &self.monte_carlo {
            if mc.n_paths < 2 || mc.n_steps < 1 {
                return bad("monte_carlo needs n_paths >= 2 and n_steps >= 1".into());
            }
            for m in &self.models {
                if !matches!(
                    m.model,
                    ModelConfig::None | ModelConfig::Merton { .. } | ModelConfig::VarianceGamma(_)
                ) {
                    return bad(format!(
                        "monte_carlo supports none, merton and variance_gamma; model {:?} is not one of them",
                        m.label
                    ));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for out in &self.outputs {
            if !seen.insert(out.kind) {
                return bad(format!("output kind {:?} is listed twice", out.kind));
            }
            let path = out.path.to_string_lossy();
            let many_models = self.models.len() > 1;
            let many_rates = self.scenarios.len() > 1;
            match out.kind {
                OutputKind::Surface | OutputKind::Boundary => {
                    if (many_models && !path.contains("{model}")) || (many_rates && !path.contains("{rate}")) {
                        return bad(format!(
                            "{:?} output path {path} must contain {{model}} and {{rate}} placeholders when several models or rates are run",
                            out.kind
                        ));
                    }
                    if out.kind == OutputKind::Boundary && self.style != Style::American {
                        return bad("boundary output requires style \"american\"".into());
                    }
                }
                OutputKind::Plotdata => {
                    if many_rates && !path.contains("{rate}") {
                        return bad(format!("plotdata path {path} must contain {{rate}} when several rates are run"));
                    }
                }
                OutputKind::Table => {}
            }
            check_writable(&out.path)?;
        }
        Ok(())
    }

    pub fn penalty(&self) -> PenaltyConfig {
        self.penalty.unwrap_or_default()
    }

    pub fn spec_for(&self, model: &NamedModel, rate: f64) -> OptionSpec {
        let spec = self.option.with_rate(rate);
        match model.sigma {
            Some(s) => spec.with_sigma(s),
            None => spec,
        }
    }
}

fn check_writable(path: &Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    match std::fs::metadata(dir) {
        Ok(m) if m.is_dir() && !m.permissions().readonly() => Ok(()),
        Ok(_) => Err(CliError::Config(format!(
            "output directory {} is not writable",
            dir.display()
        ))),
        Err(_) => Err(CliError::Config(format!(
            "output directory {} does not exist; create it first",
            dir.display()
        ))),
    }
}

/// Substitutes `{model}` and `{rate}` in an output path.
pub fn expand_path(path: &Path, label: &str, rate: f64) -> PathBuf {
    let s = path.to_string_lossy().replace("{model}", label).replace("{rate}", &format!("{rate}"));
    PathBuf::from(s)
}
