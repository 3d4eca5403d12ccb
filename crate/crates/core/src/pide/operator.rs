//! Discretization of the jump integral
//! `f[u](x) = int (u(x+z) - u(x) - (e^z - 1) u'(x)) nu(dz)`.
//!
//! Jumps are snapped to the spatial lattice `z_k = k dx`. The weight of shift
//! `k` is the exact measure of the cell `[(k - 1/2) dx, (k + 1/2) dx]`
//! restricted to `delta <= |z| <= z_max`. On `|z| < delta` the integrand is
//! replaced by its Taylor expansion `z^2/2 (u'' - u')`, weighted by the
//! near-origin second moment. Snapping a cell to its lattice point misplaces
//! its second moment by `O(dx^2 / k)`; the sum of these defects is added to the
//! local term so the operator stays second order for `1/|z|` kernels.

use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::quad::GaussLegendre;
use crate::real::Real;

use super::grid::GridSpec;

const CELL_RULE_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralOperator<S> {
    dx: S,
    /// `(k, w_k)` for every lattice shift with positive weight.
    shifts: Vec<(isize, S)>,
    max_shift: usize,
    /// `sum_k w_k`, the truncated far-field mass.
    pub mass: S,
    /// Coefficient of `-u'` from the compensator, calibrated so that the
    /// discrete operator annihilates `e^x`.
    pub drift_correction: S,
    /// `sum_k w_k (e^{z_k} - 1)`, the coefficient before calibration.
    pub drift_correction_quadrature: S,
    /// `1/2 int_{|z|<delta} z^2 nu(dz)` plus half the lattice second-moment
    /// defect, multiplying `u'' - u'`.
    pub local_correction: S,
}

impl<S: Real> IntegralOperator<S> {
    /// Operator for the empty measure.
    pub fn zero(dx: S) -> Self {
        Self {
            dx,
            shifts: Vec::new(),
            max_shift: 0,
            mass: S::zero(),
            drift_correction: S::zero(),
            drift_correction_quadrature: S::zero(),
            local_correction: S::zero(),
        }
    }

    pub fn assemble(model: &LevyModel<S>, grid: &GridSpec<S>) -> Result<Self> {
        grid.validate()?;
        let dx = grid.dx();
        let Some(witness) = model.shape_witness() else {
            return Ok(Self::zero(dx));
        };
        if !(witness.alpha < S::c(3.0)) {
            return Err(Error::Inadmissible(format!(
                "singularity order alpha = {} of the {} measure is not below 3",
                witness.alpha,
                model.name()
            )));
        }
        model.validate()?;

        let delta = grid.delta();
        let z_max = grid.z_max();
        let half = S::c(0.5);
        let max_shift = (z_max / dx + half).floor().to_usize().unwrap_or(0);
        let rule = GaussLegendre::new(CELL_RULE_POINTS);

        let mut shifts = Vec::with_capacity(2 * max_shift);
        let mut mass = S::zero();
        let mut growth = S::zero();
        // exact minus lattice second moment, folded into the local term
        let mut moment_defect = S::zero();
        for k in 1..=max_shift {
            let kf = S::from_usize_lossy(k);
            let lo = ((kf - half) * dx).max(delta);
            let hi = ((kf + half) * dx).min(z_max);
            if !(lo < hi) {
                continue;
            }
            let z = kf * dx;
            for sign in [1isize, -1] {
                let (a, b) = if sign > 0 { (lo, hi) } else { (-hi, -lo) };
                let w = model.mass_on(a, b, &rule);
                if w > S::zero() {
                    let zk = if sign > 0 { z } else { -z };
                    shifts.push((sign * k as isize, w));
                    mass += w;
                    growth += w * zk.exp_m1();
                    moment_defect += model.moment_on(a, b, 2, &rule) - w * zk * zk;
                }
            }
        }
        shifts.sort_by_key(|&(k, _)| k);

        let local = half * (model.second_moment_near(delta)? + moment_defect);
        // central-difference symbols of d/dx and d2/dx2 acting on e^x
        let s1 = dx.sinh() / dx;
        let s2 = S::c(2.0) * (dx.cosh() - S::one()) / (dx * dx);
        let calibrated = (growth + local * (s2 - s1)) / s1;

        Ok(Self {
            dx,
            shifts,
            max_shift,
            mass,
            drift_correction: calibrated,
            drift_correction_quadrature: growth,
            local_correction: local,
        })
    }

    pub fn dx(&self) -> S {
        self.dx
    }

    /// Largest lattice shift `|k|` carried by the operator.
    pub fn max_shift(&self) -> usize {
        self.max_shift
    }

    pub fn shifts(&self) -> &[(isize, S)] {
        &self.shifts
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty() && self.local_correction == S::zero()
    }

    /// Nodal values extended by `far(x)` on `max_shift` lattice points beyond
    /// each end. `xs` are the grid nodes.
    pub fn extend(&self, u: &[S], xs: &[S], far: &dyn Fn(S) -> S) -> Vec<S> {
        let pad = self.max_shift.max(1);
        let n = u.len();
        let x0 = xs[0];
        let xn = xs[n - 1];
        let mut out = Vec::with_capacity(n + 2 * pad);
        for j in (1..=pad).rev() {
            out.push(far(x0 - S::from_usize_lossy(j) * self.dx));
        }
        out.extend_from_slice(u);
        for j in 1..=pad {
            out.push(far(xn + S::from_usize_lossy(j) * self.dx));
        }
        out
    }

    /// `sum_k w_k u(x_i + z_k)` for every node, given the padded vector from
    /// [`extend`](Self::extend).
    pub fn nonlocal_sum(&self, padded: &[S], n: usize) -> Vec<S> {
        let pad = self.max_shift.max(1) as isize;
        (0..n as isize)
            .map(|i| {
                self.shifts
                    .iter()
                    .map(|&(k, w)| w * padded[(i + k + pad) as usize])
                    .sum()
            })
            .collect()
    }

    /// Applies the full discrete operator to nodal values `u`, with values
    /// beyond the grid taken from `far`.
    pub fn apply(&self, u: &[S], xs: &[S], far: &dyn Fn(S) -> S) -> Vec<S> {
        let n = u.len();
        let padded = self.extend(u, xs, far);
        let pad = self.max_shift.max(1);
        let sums = self.nonlocal_sum(&padded, n);
        let two = S::c(2.0);
        let dx = self.dx;
        (0..n)
            .map(|i| {
                let j = i + pad;
                let d1 = (padded[j + 1] - padded[j - 1]) / (two * dx);
                let d2 = (padded[j + 1] - two * padded[j] + padded[j - 1]) / (dx * dx);
                sums[i] - self.mass * u[i] - self.drift_correction * d1
                    + self.local_correction * (d2 - d1)
            })
            .collect()
    }
}
