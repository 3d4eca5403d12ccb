//! Measure diagnostics for the `check` subcommand.

use std::fmt::Write as _;

use levy_pide::QuadratureSpec;

use crate::config::RunConfig;
use crate::error::CliError;

pub fn report(cfg: &RunConfig) -> Result<String, CliError> {
    let quad = QuadratureSpec::default();
    let mut text = String::new();
    for named in &cfg.models {
        let model = named.model.build()?;
        let _ = writeln!(text, "{} ({})", named.label, model.name());
        let activity = if model.is_finite_activity() { "finite" } else { "infinite" };
        let _ = writeln!(text, "  activity: {activity}");
        let Some(w) = model.shape_witness() else {
            let _ = writeln!(text, "  empty measure: pure diffusion, all conditions hold trivially");
            continue;
        };
        let _ = writeln!(
            text,
            "  envelope: alpha = {}, D- = {:.6}, D+ = {:.6}, mu = {:.6}, C0 = {:.6}",
            w.alpha, w.d_minus, w.d_plus, w.mu, w.c0
        );
        let integ = model.integrability_check(&quad);
        let _ = writeln!(
            text,
            "  integrability: {} (int min(z^2, 1) nu(dz) = {:.9}){}",
            verdict(integ.pass),
            integ.value,
            integ.diagnostic.map(|d| format!(": {d}")).unwrap_or_default()
        );
        let _ = writeln!(text, "  admissible for pricing: {}", w.is_admissible_for_pricing());
        for sc in &cfg.scenarios {
            match model.structural_condition_check(sc.rate, &quad) {
                Ok(rep) => {
                    let _ = writeln!(
                        text,
                        "  structural condition at r = {}: {} (int_0^inf (e^y - 1) nu(dy) = {:.9})",
                        sc.rate,
                        verdict(rep.pass),
                        rep.value
                    );
                }
                Err(e) => {
                    let _ = writeln!(text, "  structural condition at r = {}: not applicable, {e}", sc.rate);
                }
            }
        }
    }
    Ok(text)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::table1;

    #[test]
    fn reports_every_model() {
        let text = report(&table1()).unwrap();
        assert!(text.contains("merton (merton)\n  activity: finite"));
        assert!(text.contains("vg (variance_gamma)\n  activity: infinite"));
        assert!(text.contains("structural condition at r = 0: FAIL"));
        assert!(text.contains("structural condition at r = 0.1: pass"));
    }
}
