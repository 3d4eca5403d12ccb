//! European pricing by finite differences in `(tau, x)`.

mod grid;
mod operator;
mod scheme;
mod surface;

pub use grid::{build_grid, Grid, GridSpec};
pub use operator::IntegralOperator;
pub use scheme::{european_far_field, ImexScheme};
pub use surface::PriceSurface;

pub(crate) use scheme::check_growth;

use crate::bs::OptionSpec;
use crate::error::Result;
use crate::levy::LevyModel;
use crate::real::Real;

/// Solves the European pricing problem on the whole grid.
pub fn solve_european<S: Real>(
    spec: &OptionSpec<S>,
    model: &LevyModel<S>,
    grid: &GridSpec<S>,
) -> Result<PriceSurface<S>> {
    let scheme = ImexScheme::new(spec, model, grid)?;
    solve_with_scheme(&scheme)
}

pub fn solve_with_scheme<S: Real>(scheme: &ImexScheme<S>) -> Result<PriceSurface<S>> {
    let spec = scheme.spec;
    let g = build_grid(&spec, &scheme.grid)?;
    let n = g.xs.len();
    let far = |tau: S, x: S| european_far_field(&spec, tau, x);
    let mut u = Vec::with_capacity(n * g.taus.len());
    u.extend_from_slice(&g.u0);
    let mut current = g.u0.clone();
    for (step, &tau) in g.taus[..g.taus.len() - 1].iter().enumerate() {
        let next = scheme.step(&current, tau, &far)?;
        let bound = far(tau + scheme.dt, g.xs[0])
            .abs()
            .max(far(tau + scheme.dt, g.xs[n - 1]).abs());
        check_growth(step, &current, &next, bound)?;
        u.extend_from_slice(&next);
        current = next;
    }
    Ok(PriceSurface {
        taus: g.taus,
        xs: g.xs,
        u,
        spec,
    })
}
