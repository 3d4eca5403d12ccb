use serde::{Deserialize, Serialize};

use crate::bs::OptionSpec;
use crate::error::{invalid, Result};
use crate::real::Real;

/// Uniform discretization of `[-L, L] x [0, T]` in `(x, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<S> {
    /// Half-width `L` of the log-moneyness domain.
    pub half_width: S,
    /// Number of spatial steps `N`; nodes are `x_i = -L + i 2L/N`.
    pub n_space: usize,
    /// Number of time steps `M`.
    pub n_time: usize,
    /// Jump truncation radius; defaults to `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_max: Option<S>,
    /// Radius of the near-origin Taylor region; defaults to the space step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<S>,
}

impl<S: Real> GridSpec<S> {
    pub fn new(half_width: S, n_space: usize, n_time: usize) -> Result<Self> {
        let grid = Self {
            half_width,
            n_space,
            n_time,
            z_max: None,
            delta: None,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `L = 4`, `N = 400`, `M = 200`: space step 0.02, time step `T / 200`.
    pub fn standard() -> Self {
        Self {
            half_width: S::c(4.0),
            n_space: 400,
            n_time: 200,
            z_max: None,
            delta: None,
        }
    }

    /// `L = 4`, `N = 800`, `M = 200`: space step 0.01.
    pub fn fine() -> Self {
        Self {
            n_space: 800,
            ..Self::standard()
        }
    }

    pub fn with_steps(mut self, n_space: usize, n_time: usize) -> Self {
        self.n_space = n_space;
        self.n_time = n_time;
        self
    }

    pub fn dx(&self) -> S {
        S::c(2.0) * self.half_width / S::from_usize_lossy(self.n_space)
    }

    pub fn dt(&self, maturity: S) -> S {
        maturity / S::from_usize_lossy(self.n_time)
    }

    pub fn z_max(&self) -> S {
        self.z_max.unwrap_or(self.half_width)
    }

    pub fn delta(&self) -> S {
        self.delta.unwrap_or_else(|| self.dx())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > S::zero()) || !self.half_width.is_finite() {
            return Err(invalid(
                "half_width",
                format!("must be positive, got {}", self.half_width),
            ));
        }
        if self.n_space < 4 || self.n_space % 2 != 0 {
            return Err(invalid(
                "n_space",
                format!("must be even and >= 4, got {}", self.n_space),
            ));
        }
        if self.n_time < 1 {
            return Err(invalid("n_time", "must be at least 1"));
        }
        let delta = self.delta();
        let max_delta = S::c(10.0) * self.half_width / S::from_usize_lossy(self.n_space);
        if !(delta > S::zero() && delta <= max_delta) {
            return Err(invalid(
                "delta",
                format!("must lie in (0, {max_delta}], got {delta}"),
            ));
        }
        let z_max = self.z_max();
        if !(z_max > S::zero() && z_max <= self.half_width) {
            return Err(invalid(
                "z_max",
                format!("must lie in (0, L = {}], got {z_max}", self.half_width),
            ));
        }
        Ok(())
    }

    /// Node `i` of the spatial grid, symmetric about `x = 0`.
    #[inline]
    pub fn node(&self, i: isize) -> S {
        S::from_isize(i - (self.n_space / 2) as isize).expect("grid index") * self.dx()
    }
}

/// Spatial nodes, time levels and the transformed payoff at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<S> {
    pub xs: Vec<S>,
    pub taus: Vec<S>,
    pub u0: Vec<S>,
}

pub fn build_grid<S: Real>(spec: &OptionSpec<S>, grid: &GridSpec<S>) -> Result<Grid<S>> {
    spec.validate()?;
    grid.validate()?;
    let xs: Vec<S> = (0..=grid.n_space).map(|i| grid.node(i as isize)).collect();
    let dt = grid.dt(spec.maturity);
    let taus = (0..=grid.n_time)
        .map(|j| S::from_usize_lossy(j) * dt)
        .collect();
    let u0 = xs.iter().map(|&x| spec.payoff_log(x)).collect();
    Ok(Grid { xs, taus, u0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_layout() {
        let spec = OptionSpec::<f64>::put(100.0, 1.0, 0.0, 0.23).unwrap();
        let g = build_grid(&spec, &GridSpec::standard()).unwrap();
        assert_eq!(g.xs.len(), 401);
        assert_eq!(g.taus.len(), 201);
        assert!((GridSpec::<f64>::standard().dx() - 0.02).abs() < 1e-15);
        assert_eq!(g.xs[200], 0.0);
        assert_eq!(g.xs[0], -4.0);
        assert_eq!(g.xs[400], 4.0);
        assert_eq!(g.u0[200], 0.0);
        // x = -0.16 is node 192
        assert!((g.u0[192] - 14.7856).abs() < 5e-5);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::<f64>::new(4.0, 401, 200).is_err());
        assert!(GridSpec::<f64>::new(4.0, 2, 200).is_err());
        assert!(GridSpec::<f64>::new(0.0, 400, 200).is_err());
        assert!(GridSpec::<f64>::new(4.0, 400, 0).is_err());
        let mut g = GridSpec::<f64>::standard();
        g.z_max = Some(5.0);
        assert!(g.validate().is_err());
        g.z_max = None;
        g.delta = Some(0.5);
        assert!(g.validate().is_err());
    }
}
