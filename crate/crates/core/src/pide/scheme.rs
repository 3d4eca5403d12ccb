//! Implicit-explicit time stepping.
//!
//! One step from `tau_n` to `tau_{n+1} = tau_n + dt` solves
//!
//! ```text
//! (I - dt A) u^{n+1} = u^n + dt J u^n + dt (boundary terms)
//! ```
//!
//! where `A` collects every local term (diffusion, drift, compensator,
//! near-origin correction and the `-nu(|z| >= delta) u` decay) as a
//! tridiagonal operator, and `J u = sum_k w_k u(x + z_k)` is the dense
//! nonlocal sum evaluated at the previous level. Dirichlet data is imposed at
//! `x = +-L` and the same far-field formula supplies `u(x + z)` beyond the grid.

use crate::bs::{OptionKind, OptionSpec};
use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::real::Real;
use crate::tridiag::Tridiagonal;

use super::grid::{build_grid, GridSpec};
use super::operator::IntegralOperator;

/// Asymptotic European value in transformed coordinates, used both as
/// Dirichlet data and as the extension of `u` beyond `[-L, L]`.
pub fn european_far_field<S: Real>(spec: &OptionSpec<S>, tau: S, x: S) -> S {
    let k = spec.strike;
    let forward = k * (x + spec.rate * tau).exp();
    match (spec.kind, x < S::zero()) {
        (OptionKind::Put, true) => k - forward,
        (OptionKind::Put, false) => S::zero(),
        (OptionKind::Call, true) => S::zero(),
        (OptionKind::Call, false) => forward - k,
    }
}

/// Tridiagonal-implicit, integral-explicit scheme on a fixed grid.
#[derive(Debug, Clone)]
pub struct ImexScheme<S> {
    pub spec: OptionSpec<S>,
    pub grid: GridSpec<S>,
    pub operator: IntegralOperator<S>,
    pub xs: Vec<S>,
    pub dt: S,
    /// Implicit interior coefficients `(lower, diag, upper)` of `I - dt A`.
    sub: S,
    main: S,
    sup: S,
}

impl<S: Real> ImexScheme<S> {
    pub fn new(spec: &OptionSpec<S>, model: &LevyModel<S>, grid: &GridSpec<S>) -> Result<Self> {
        spec.validate()?;
        let operator = IntegralOperator::assemble(model, grid)?;
        Self::with_operator(spec, grid, operator)
    }

    pub fn with_operator(
        spec: &OptionSpec<S>,
        grid: &GridSpec<S>,
        operator: IntegralOperator<S>,
    ) -> Result<Self> {
        let g = build_grid(spec, grid)?;
        let dx = grid.dx();
        let dt = grid.dt(spec.maturity);
        let half = S::c(0.5);
        let two = S::c(2.0);
        let diffusion = spec.sigma * spec.sigma * half + operator.local_correction;
        let drift = spec.rate
            - spec.sigma * spec.sigma * half
            - operator.drift_correction
            - operator.local_correction;
        let a = diffusion / (dx * dx);
        let b = drift / (two * dx);
        let sub = -dt * (a - b);
        let sup = -dt * (a + b);
        let main = S::one() + dt * (two * a + operator.mass);
        if !(main > S::zero()) {
            return Err(Error::Domain(
                "implicit matrix has a non-positive diagonal".into(),
            ));
        }
        Ok(Self {
            spec: *spec,
            grid: *grid,
            operator,
            xs: g.xs,
            dt,
            sub,
            main,
            sup,
        })
    }

    /// Interior tridiagonal system, optionally with an extra implicit diagonal.
    fn system(&self, extra_diag: Option<&[S]>) -> Tridiagonal<S> {
        let n = self.xs.len() - 2;
        let mut diag = vec![self.main; n];
        if let Some(extra) = extra_diag {
            for (d, e) in diag.iter_mut().zip(&extra[1..=n]) {
                *d += self.dt * *e;
            }
        }
        Tridiagonal {
            lower: vec![self.sub; n],
            diag,
            upper: vec![self.sup; n],
        }
    }

    /// `u^n + dt J u^n` at every node (boundary entries included).
    pub fn explicit_rhs(&self, u_prev: &[S], far: &dyn Fn(S) -> S) -> Vec<S> {
        if self.operator.shifts().is_empty() {
            return u_prev.to_vec();
        }
        let padded = self.operator.extend(u_prev, &self.xs, far);
        let sums = self.operator.nonlocal_sum(&padded, u_prev.len());
        u_prev
            .iter()
            .zip(sums)
            .map(|(&u, s)| u + self.dt * s)
            .collect()
    }

    /// Solves for the interior of `u^{n+1}` given the explicit right-hand side,
    /// Dirichlet values at both ends, and an optional implicit reaction
    /// `extra_diag * u = extra_rhs` added to the equation.
    pub fn implicit_solve(
        &self,
        rhs: &[S],
        left: S,
        right: S,
        extra: Option<(&[S], &[S])>,
    ) -> Result<Vec<S>> {
        let n = self.xs.len();
        let system = self.system(extra.map(|(d, _)| d));
        let mut interior: Vec<S> = rhs[1..n - 1].to_vec();
        if let Some((_, extra_rhs)) = extra {
            for (v, e) in interior.iter_mut().zip(&extra_rhs[1..n - 1]) {
                *v += self.dt * *e;
            }
        }
        interior[0] -= self.sub * left;
        let last = interior.len() - 1;
        interior[last] -= self.sup * right;
        let mut scratch = Vec::new();
        if !system.solve_in_place(&mut interior, &mut scratch) {
            return Err(Error::Domain("singular tridiagonal system".into()));
        }
        let mut out = Vec::with_capacity(n);
        out.push(left);
        out.extend(interior);
        out.push(right);
        Ok(out)
    }

    /// One IMEX step from `tau_prev` to `tau_prev + dt`, with `far(tau, x)`
    /// giving Dirichlet data and the extension beyond the grid.
    pub fn step(&self, u_prev: &[S], tau_prev: S, far: &dyn Fn(S, S) -> S) -> Result<Vec<S>> {
        let tau_next = tau_prev + self.dt;
        let far_prev = |x: S| far(tau_prev, x);
        let rhs = self.explicit_rhs(u_prev, &far_prev);
        let n = self.xs.len();
        let left = far(tau_next, self.xs[0]);
        let right = far(tau_next, self.xs[n - 1]);
        self.implicit_solve(&rhs, left, right, None)
    }

    /// Residual `||(I - dt A) u_next - rhs||_inf` on interior nodes, for checks.
    pub fn implicit_residual(&self, u_next: &[S], rhs: &[S]) -> S {
        let n = self.xs.len();
        (1..n - 1)
            .map(|i| {
                (self.sub * u_next[i - 1] + self.main * u_next[i] + self.sup * u_next[i + 1]
                    - rhs[i])
                    .abs()
            })
            .fold(S::zero(), S::max)
    }

    /// Residual of the step equation without forcing,
    /// `A u^{n+1} + J u^n - (u^{n+1} - u^n) / dt`, at every node (zero at the
    /// two boundary nodes). `far` extends `u^n` beyond the grid.
    pub fn step_residual(&self, u_prev: &[S], u_next: &[S], far: &dyn Fn(S) -> S) -> Vec<S> {
        let n = u_next.len();
        let rhs = self.explicit_rhs(u_prev, far);
        let mut out = vec![S::zero(); n];
        for i in 1..n - 1 {
            let lhs = self.sub * u_next[i - 1] + self.main * u_next[i] + self.sup * u_next[i + 1];
            out[i] = (rhs[i] - lhs) / self.dt;
        }
        out
    }

    /// Discrete generator `A u + J u` applied at interior nodes, with
    /// neighbours beyond the grid from `far`.
    pub fn generator(&self, u: &[S], far: &dyn Fn(S) -> S) -> Vec<S> {
        let dt = self.dt;
        let n = u.len();
        let padded = self.operator.extend(u, &self.xs, far);
        let sums = self.operator.nonlocal_sum(&padded, n);
        let pad = self.operator.max_shift().max(1);
        (0..n)
            .map(|i| {
                let j = i + pad;
                let implicit = self.sub * padded[j - 1]
                    + (self.main - S::one()) * padded[j]
                    + self.sup * padded[j + 1];
                -implicit / dt + sums[i]
            })
            .collect()
    }
}

/// Guards against blow-up of an explicit component.
pub(crate) fn check_growth<S: Real>(step: usize, prev: &[S], next: &[S], bound: S) -> Result<()> {
    let norm = |v: &[S]| v.iter().fold(S::zero(), |m, x| m.max(x.abs()));
    let before = norm(prev);
    let after = norm(next);
    if !after.is_finite() || after > S::c(2.0) * before.max(bound) {
        return Err(Error::Unstable {
            step,
            before: before.to_f64().unwrap_or(f64::NAN),
            after: after.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}
