use std::io::Write;

use crate::bs::OptionSpec;
use crate::error::{Error, Result};
use crate::format::fmt9;
use crate::real::Real;

/// Transformed prices `u(tau_j, x_i)` on the full space-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSurface<S> {
    pub taus: Vec<S>,
    pub xs: Vec<S>,
    /// Row-major, `tau` outer: `u[j * xs.len() + i]`.
    pub u: Vec<S>,
    pub spec: OptionSpec<S>,
}

impl<S: Real> PriceSurface<S> {
    pub fn n_levels(&self) -> usize {
        self.taus.len()
    }

    pub fn row(&self, level: usize) -> &[S] {
        let n = self.xs.len();
        &self.u[level * n..(level + 1) * n]
    }

    pub fn last_row(&self) -> &[S] {
        self.row(self.taus.len() - 1)
    }

    /// Back-transformed price `V = e^{-r tau} u` at a node.
    pub fn value_at_node(&self, level: usize, i: usize) -> S {
        (-self.spec.rate * self.taus[level]).exp() * self.row(level)[i]
    }

    /// Spot price of node `i`.
    pub fn spot(&self, i: usize) -> S {
        self.spec.strike * self.xs[i].exp()
    }

    /// Price `V(t, S)`: nearest stored time level, linear interpolation in `x`.
    pub fn price_at(&self, t: S, spot: S) -> Result<S> {
        if !(spot > S::zero()) {
            return Err(Error::Domain(format!("spot must be positive, got {spot}")));
        }
        let maturity = self.spec.maturity;
        if !(t >= S::zero() && t <= maturity) {
            return Err(Error::Domain(format!("time {t} outside [0, {maturity}]")));
        }
        let tau = maturity - t;
        let last = self.taus.len() - 1;
        let dtau = self.taus[last] / S::from_usize_lossy(last);
        let level = (tau / dtau).round().to_usize().unwrap_or(0).min(last);

        let n = self.xs.len();
        let x = (spot / self.spec.strike).ln();
        let lo = self.xs[0];
        let hi = self.xs[n - 1];
        let slack = S::c(1e-12) * (S::one() + hi.abs());
        if x < lo - slack || x > hi + slack {
            return Err(Error::Domain(format!(
                "spot {spot} outside the grid range [{}, {}]",
                self.spec.strike * lo.exp(),
                self.spec.strike * hi.exp()
            )));
        }
        let dx = (hi - lo) / S::from_usize_lossy(n - 1);
        let pos = ((x - lo) / dx).max(S::zero());
        let mut i = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        let mut w = pos - S::from_usize_lossy(i);
        if w >= S::one() {
            i = (i + 1).min(n - 2);
            w = pos - S::from_usize_lossy(i);
        }
        let row = self.row(level);
        let u = if w == S::zero() {
            row[i]
        } else {
            row[i] + w * (row[i + 1] - row[i])
        };
        Ok((-self.spec.rate * self.taus[level]).exp() * u)
    }

    /// Writes `tau,x,u` rows, `tau` outer, nine significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tau,x,u")?;
        let n = self.xs.len();
        for (j, &tau) in self.taus.iter().enumerate() {
            let tau = fmt9(tau.to_f64().unwrap_or(f64::NAN));
            for i in 0..n {
                writeln!(
                    out,
                    "{},{},{}",
                    tau,
                    fmt9(self.xs[i].to_f64().unwrap_or(f64::NAN)),
                    fmt9(self.u[j * n + i].to_f64().unwrap_or(f64::NAN))
                )?;
            }
        }
        Ok(())
    }
}
