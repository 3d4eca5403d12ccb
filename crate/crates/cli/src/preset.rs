//! Built-in run reproducing the European put price table: K = 100, T = 1,
//! sigma = 0.23, r in {0, 0.1}, Merton and variance gamma jumps.
//!
//! Black-Scholes and variance gamma are evaluated at both 0.12 and 0.23 for
//! the volatility that the table leaves ambiguous.

use levy_pide::{GridSpec, OptionSpec};

use crate::config::{ModelConfig, NamedModel, RunConfig, Scenario, Style, VgParams};

pub const TABLE_SPOTS: [f64; 8] = [85.2144, 88.692, 92.3116, 96.0789, 100.0, 104.081, 108.329, 112.75];

pub fn table1() -> RunConfig {
    let vg = |label: &str, sigma_vg: f64| NamedModel {
        label: label.into(),
        sigma: None,
        model: ModelConfig::VarianceGamma(VgParams::Subordinated {
            theta: -0.43,
            kappa: 0.27,
            sigma_vg,
        }),
    };
    let bs = |label: &str, sigma: Option<f64>| NamedModel {
        label: label.into(),
        sigma,
        model: ModelConfig::None,
    };
    RunConfig {
        option: OptionSpec::put(100.0, 1.0, 0.0, 0.23).expect("valid preset"),
        models: vec![
            bs("bs", Some(0.12)),
            bs("bs_sigma_0.23", None),
            vg("vg", 0.12),
            vg("vg_sigma_vg_0.23", 0.23),
            NamedModel {
                label: "merton".into(),
                sigma: None,
                model: ModelConfig::Merton {
                    lambda: 0.1,
                    m: -0.2,
                    delta: 0.15,
                },
            },
        ],
        grid: GridSpec::standard(),
        style: Style::European,
        penalty: None,
        outputs: Vec::new(),
        scenarios: [0.0, 0.1]
            .map(|rate| Scenario {
                rate,
                spots: TABLE_SPOTS.to_vec(),
            })
            .to_vec(),
        closed_form: true,
        monte_carlo: None,
    }
}
