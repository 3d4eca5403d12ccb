//! American put by the penalty method.
//!
//! The complementarity problem is replaced by the penalized equation
//! `u_tau = L u + eps^{-1} e^{x^-} (e^{r tau} Phi(K e^x) - u)^+`, which in the
//! original variables is the forcing `eps^{-1} min(S/K, 1) (Phi - V)^+`. Each
//! time step iterates on the set of nodes where the penalty is active, with
//! the penalty itself treated implicitly on that set, so every inner solve is
//! tridiagonal.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bs::{OptionKind, OptionSpec};
use crate::error::{invalid, Error, Result};
use crate::format::fmt9;
use crate::levy::{LevyModel, QuadratureSpec};
use crate::pide::{build_grid, check_growth, GridSpec, ImexScheme, PriceSurface};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig<S> {
    /// Penalty parameter, dimensionless, `0 < epsilon << 1`.
    pub epsilon: S,
    /// Iteration cap per time step.
    pub max_picard: usize,
    /// Stopping tolerance on successive iterates, as a fraction of the strike.
    pub picard_tol: S,
}

impl<S: Real> Default for PenaltyConfig<S> {
    fn default() -> Self {
        Self {
            epsilon: S::c(1e-3),
            max_picard: 50,
            picard_tol: S::c(1e-8),
        }
    }
}

impl<S: Real> PenaltyConfig<S> {
    pub fn with_epsilon(epsilon: S) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > S::zero()) || !self.epsilon.is_finite() {
            return Err(invalid(
                "epsilon",
                format!("must be positive, got {}", self.epsilon),
            ));
        }
        if self.max_picard == 0 {
            return Err(invalid("max_picard", "must be at least 1"));
        }
        if !(self.picard_tol > S::zero()) {
            return Err(invalid(
                "picard_tol",
                format!("must be positive, got {}", self.picard_tol),
            ));
        }
        Ok(())
    }
}

/// Transformed obstacle `e^{r tau} Phi(K e^x)`.
pub fn transformed_obstacle<S: Real>(spec: &OptionSpec<S>, tau: S, x: S) -> S {
    (spec.rate * tau).exp() * spec.payoff_log(x)
}

/// Penalty forcing `eps^{-1} e^{x^-} (e^{r tau} Phi - u)^+` at every node.
pub fn penalty_term<S: Real>(u: &[S], tau: S, xs: &[S], spec: &OptionSpec<S>, eps: S) -> Vec<S> {
    u.iter()
        .zip(xs)
        .map(|(&ui, &x)| {
            let gap = transformed_obstacle(spec, tau, x) - ui;
            if gap > S::zero() {
                x.min(S::zero()).exp() * gap / eps
            } else {
                S::zero()
            }
        })
        .collect()
}

/// Value of the American put in transformed variables beyond the grid:
/// immediate exercise on the left, worthless on the right.
pub fn american_far_field<S: Real>(spec: &OptionSpec<S>, tau: S, x: S) -> S {
    if x < S::zero() {
        transformed_obstacle(spec, tau, x)
    } else {
        S::zero()
    }
}

/// Surface plus the diagnostics gathered while solving.
#[derive(Debug, Clone)]
pub struct AmericanSolution<S> {
    pub surface: PriceSurface<S>,
    /// Non-fatal findings, e.g. a failed structural condition.
    pub warnings: Vec<String>,
    /// Largest number of penalty iterations used in a single step.
    pub max_iterations: usize,
}

/// Solves the penalized American put problem.
pub fn solve_american_penalized<S: Real>(
    spec: &OptionSpec<S>,
    model: &LevyModel<S>,
    grid: &GridSpec<S>,
    pcfg: &PenaltyConfig<S>,
) -> Result<PriceSurface<S>> {
    solve_american_detailed(spec, model, grid, pcfg).map(|s| s.surface)
}

pub fn solve_american_detailed<S: Real>(
    spec: &OptionSpec<S>,
    model: &LevyModel<S>,
    grid: &GridSpec<S>,
    pcfg: &PenaltyConfig<S>,
) -> Result<AmericanSolution<S>> {
    if spec.kind != OptionKind::Put {
        return Err(Error::Unsupported {
            what: "American exercise",
            model: "call",
        });
    }
    pcfg.validate()?;
    let mut warnings = Vec::new();
    let structural = model.structural_condition_check(spec.rate, &QuadratureSpec::default());
    match structural {
        Ok(report) if report.pass => {}
        Ok(report) => warnings.push(format!(
            "structural condition fails: int_0^inf (e^y - 1) nu(dy) = {} exceeds r = {}; \
             the complementarity characterization of the price is not guaranteed",
            report.value, spec.rate
        )),
        Err(e) => warnings.push(format!("structural condition could not be evaluated: {e}")),
    }

    let scheme = ImexScheme::new(spec, model, grid)?;
    let g = build_grid(spec, grid)?;
    let n = g.xs.len();
    let tol = pcfg.picard_tol * spec.strike;
    let weights: Vec<S> =
        g.xs.iter()
            .map(|&x| x.min(S::zero()).exp() / pcfg.epsilon)
            .collect();

    let mut u = Vec::with_capacity(n * g.taus.len());
    u.extend_from_slice(&g.u0);
    let mut current = g.u0.clone();
    let mut max_iterations = 0;
    for (step, &tau) in g.taus[..g.taus.len() - 1].iter().enumerate() {
        let tau_next = tau + scheme.dt;
        let far_prev = |x: S| american_far_field(spec, tau, x);
        let rhs = scheme.explicit_rhs(&current, &far_prev);
        let obstacle: Vec<S> =
            g.xs.iter()
                .map(|&x| transformed_obstacle(spec, tau_next, x))
                .collect();
        let left = american_far_field(spec, tau_next, g.xs[0]);
        let right = american_far_field(spec, tau_next, g.xs[n - 1]);

        let mut iterate = current.clone();
        let mut converged = false;
        let mut worst = (0usize, S::zero());
        for it in 1..=pcfg.max_picard {
            let mut diag = vec![S::zero(); n];
            let mut forcing = vec![S::zero(); n];
            for i in 0..n {
                if iterate[i] < obstacle[i] {
                    diag[i] = weights[i];
                    forcing[i] = weights[i] * obstacle[i];
                }
            }
            let next = scheme.implicit_solve(&rhs, left, right, Some((&diag, &forcing)))?;
            worst = next
                .iter()
                .zip(&iterate)
                .enumerate()
                .map(|(i, (a, b))| (i, (*a - *b).abs()))
                .fold((0, S::zero()), |m, c| if c.1 > m.1 { c } else { m });
            iterate = next;
            max_iterations = max_iterations.max(it);
            if worst.1 < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::PenaltyNotConverged {
                tau: tau_next.to_f64().unwrap_or(f64::NAN),
                node: worst.0,
                max_update: worst.1.to_f64().unwrap_or(f64::NAN),
            });
        }
        let bound = left
            .abs()
            .max(obstacle.iter().fold(S::zero(), |m, v| m.max(v.abs())));
        check_growth(step, &current, &iterate, bound)?;
        u.extend_from_slice(&iterate);
        current = iterate;
    }

    Ok(AmericanSolution {
        surface: PriceSurface {
            taus: g.taus,
            xs: g.xs,
            u,
            spec: *spec,
        },
        warnings,
        max_iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExerciseBoundary<S> {
    pub taus: Vec<S>,
    /// `S_f` per level; `None` when no node lies in the exercise region.
    pub s_f: Vec<Option<S>>,
}

impl<S: Real> ExerciseBoundary<S> {
    /// Whether `S_f` is nonincreasing in `tau` where defined.
    pub fn is_monotone(&self) -> bool {
        let defined: Vec<S> = self.s_f.iter().flatten().copied().collect();
        defined.windows(2).all(|w| w[1] <= w[0])
    }

    /// Writes `tau,s_f` rows; absent levels leave `s_f` empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tau,s_f")?;
        for (tau, s) in self.taus.iter().zip(&self.s_f) {
            let tau = fmt9(tau.to_f64().unwrap_or(f64::NAN));
            match s {
                Some(s) => writeln!(out, "{tau},{}", fmt9(s.to_f64().unwrap_or(f64::NAN)))?,
                None => writeln!(out, "{tau},")?,
            }
        }
        Ok(())
    }
}

/// Largest grid spot `S <= K` with `V <= Phi + tol` at each time level.
pub fn extract_boundary<S: Real>(surface: &PriceSurface<S>, tol: S) -> ExerciseBoundary<S> {
    let spec = &surface.spec;
    let s_f = (0..surface.n_levels())
        .map(|level| {
            (0..surface.xs.len())
                .filter(|&i| surface.xs[i] <= S::zero())
                .filter(|&i| {
                    let v = surface.value_at_node(level, i);
                    v <= spec.payoff(surface.spot(i)) + tol
                })
                .map(|i| surface.spot(i))
                .last()
        })
        .collect();
    ExerciseBoundary {
        taus: surface.taus.clone(),
        s_f,
    }
}

/// Discrete residuals of the complementarity problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcpReport<S> {
    /// `max (V_t + L V)^+`, the violation of the operator inequality.
    pub max_pde_violation: S,
    /// `max |V_t + L V|`.
    pub max_pde_residual: S,
    /// `max (Phi - V)^+`.
    pub max_obstacle_violation: S,
    /// `max |(V_t + L V) (V - Phi)|`.
    pub max_complementarity: S,
    /// `max |V_t + L V|` over nodes with `V > Phi`.
    pub max_continuation_residual: S,
}

impl<S: Real> LcpReport<S> {
    pub fn max_ineq_violation(&self) -> S {
        self.max_pde_violation.max(self.max_obstacle_violation)
    }
}

/// Evaluates the complementarity residuals of a solved surface over interior
/// nodes and levels with `tau >= 2 dt`. The operator is the one used by the
/// time stepper, so for a penalized surface `V_t + L V` equals minus the
/// back-transformed penalty forcing.
pub fn lcp_residual<S: Real>(
    surface: &PriceSurface<S>,
    spec: &OptionSpec<S>,
    model: &LevyModel<S>,
    grid: &GridSpec<S>,
) -> Result<LcpReport<S>> {
    let scheme = ImexScheme::new(spec, model, grid)?;
    let n = surface.xs.len();
    let mut report = LcpReport {
        max_pde_violation: S::zero(),
        max_pde_residual: S::zero(),
        max_obstacle_violation: S::zero(),
        max_complementarity: S::zero(),
        max_continuation_residual: S::zero(),
    };
    for level in 2..surface.n_levels() {
        let tau = surface.taus[level];
        let tau_prev = surface.taus[level - 1];
        let far = |x: S| american_far_field(spec, tau_prev, x);
        let res = scheme.step_residual(surface.row(level - 1), surface.row(level), &far);
        let discount = (-spec.rate * tau).exp();
        for i in 1..n - 1 {
            let pde = discount * res[i];
            let gap = surface.value_at_node(level, i) - spec.payoff(surface.spot(i));
            report.max_pde_violation = report.max_pde_violation.max(pde);
            report.max_pde_residual = report.max_pde_residual.max(pde.abs());
            report.max_obstacle_violation = report.max_obstacle_violation.max(-gap);
            report.max_complementarity = report.max_complementarity.max((pde * gap).abs());
            if gap > S::zero() {
                report.max_continuation_residual = report.max_continuation_residual.max(pde.abs());
            }
        }
    }
    Ok(report)
}
