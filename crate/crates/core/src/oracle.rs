//! Pricing oracles that share no code path with the finite-difference solver:
//! the Merton conditional-jump-count series and Monte Carlo under Merton and
//! variance gamma dynamics.
//!
//! Both oracles use the same risk-neutral convention as the PIDE: the log
//! price drifts at `r - sigma^2/2 - int (e^z - 1) nu(dz)`, so the discounted
//! spot is a martingale. For variance gamma that integral is
//! `-ln(1 - theta kappa - sigma_vg^2 kappa / 2) / kappa`.
//!
//! The oracles run in `f64` only.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;

use crate::bs::{bs_value, norm_inv_cdf, OptionSpec};
use crate::error::{invalid, Error, Result};
use crate::levy::LevyModel;

const SERIES_TERM_TOL: f64 = 1e-12;
const PATHS_PER_BATCH: usize = 4096;

/// Merton put or call price at calendar time `t` as the Poisson mixture of
/// Black-Scholes prices conditional on the number of jumps.
pub fn merton_series_price(
    spec: &OptionSpec<f64>,
    model: &LevyModel<f64>,
    spot: f64,
    t: f64,
    n_terms: usize,
) -> Result<f64> {
    let (lambda, m, delta) = match *model {
        LevyModel::Merton { lambda, m, delta } => (lambda, m, delta),
        LevyModel::None => (0.0, 0.0, 0.0),
        _ => {
            return Err(Error::Unsupported {
                what: "the Merton series",
                model: model.name(),
            })
        }
    };
    if n_terms < 10 {
        return Err(invalid(
            "n_terms",
            format!("must be at least 10, got {n_terms}"),
        ));
    }
    if !(spot > 0.0) || !(t >= 0.0 && t < spec.maturity) {
        return Err(Error::Domain(format!("invalid (t, S) = ({t}, {spot})")));
    }
    let tau = spec.maturity - t;
    if lambda == 0.0 {
        return Ok(bs_value(spec, spot, tau));
    }
    let kappa = (m + 0.5 * delta * delta).exp_m1();
    let lt = lambda * tau;
    let mut weight = (-lt).exp();
    let mut total = 0.0;
    for n in 0..n_terms {
        let nf = n as f64;
        if n > 0 {
            weight *= lt / nf;
        }
        let sigma_n = (spec.sigma * spec.sigma + nf * delta * delta / tau).sqrt();
        let spot_n = spot * (nf * (m + 0.5 * delta * delta) - lt * kappa).exp();
        let term = weight * bs_value(&spec.with_sigma(sigma_n), spot_n, tau);
        total += term;
        if nf > lt && term.abs() < SERIES_TERM_TOL {
            break;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n_paths: usize,
    /// Time steps per path; increments are sampled exactly, so one step is
    /// enough for European payoffs.
    pub n_steps: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            n_steps: 1,
            seed: 20_240_601,
            antithetic: true,
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
}

/// Jump part of the log-price increment over `dt`, sampled exactly.
#[derive(Debug, Clone, Copy)]
enum Dynamics {
    Gbm,
    Merton {
        lambda: f64,
        m: f64,
        delta: f64,
    },
    /// `theta G + sigma_vg W(G)`, `G` a gamma process with variance rate `kappa`.
    VarianceGamma {
        theta: f64,
        kappa: f64,
        sigma_vg: f64,
    },
}

impl Dynamics {
    fn from_model(model: &LevyModel<f64>) -> Result<Self> {
        match *model {
            LevyModel::None => Ok(Self::Gbm),
            LevyModel::Merton { lambda, m, delta } => Ok(Self::Merton { lambda, m, delta }),
            LevyModel::VarianceGamma { .. } => {
                let (theta, kappa, sigma_vg) =
                    model.vg_subordination_params().expect("variance gamma");
                Ok(Self::VarianceGamma {
                    theta,
                    kappa,
                    sigma_vg,
                })
            }
            _ => Err(Error::Unsupported {
                what: "Monte Carlo",
                model: model.name(),
            }),
        }
    }

    /// `int (e^z - 1) nu(dz)`.
    fn compensator(&self) -> Result<f64> {
        match *self {
            Self::Gbm => Ok(0.0),
            Self::Merton { lambda, m, delta } => Ok(lambda * (m + 0.5 * delta * delta).exp_m1()),
            Self::VarianceGamma {
                theta,
                kappa,
                sigma_vg,
            } => {
                let arg = 1.0 - theta * kappa - 0.5 * sigma_vg * sigma_vg * kappa;
                if arg <= 0.0 {
                    return Err(Error::Divergent(
                        "variance gamma exponential moment does not exist".into(),
                    ));
                }
                Ok(-arg.ln() / kappa)
            }
        }
    }
}

/// Uniform on the open interval `(0, 1)`.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    norm_inv_cdf(open_uniform(rng))
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

fn validate_mc(mc: &McConfig) -> Result<()> {
    if mc.n_paths == 0 {
        return Err(invalid("n_paths", "must be positive"));
    }
    if mc.n_steps == 0 {
        return Err(invalid("n_steps", "must be positive"));
    }
    Ok(())
}

/// Discounted expectation of `payoff(S_T)` with one sample per independent
/// draw (an antithetic pair counts as one draw).
fn simulate<P>(
    spec: &OptionSpec<f64>,
    model: &LevyModel<f64>,
    spot: f64,
    mc: &McConfig,
    payoff: P,
) -> Result<McEstimate>
where
    P: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    validate_mc(mc)?;
    if !(spot > 0.0) {
        return Err(Error::Domain(format!("spot must be positive, got {spot}")));
    }
    let dynamics = Dynamics::from_model(model)?;
    let t = spec.maturity;
    let dt = t / mc.n_steps as f64;
    let sigma = spec.sigma;
    let drift = (spec.rate - 0.5 * sigma * sigma - dynamics.compensator()?) * dt;
    let vol = sigma * dt.sqrt();
    let poisson = match dynamics {
        Dynamics::Merton { lambda, .. } if lambda > 0.0 => {
            Some(Poisson::new(lambda * dt).map_err(|e| invalid("lambda", e.to_string()))?)
        }
        _ => None,
    };
    let gamma = match dynamics {
        Dynamics::VarianceGamma { kappa, .. } => {
            Some(Gamma::new(dt / kappa, kappa).map_err(|e| invalid("kappa", e.to_string()))?)
        }
        _ => None,
    };
    let discount = (-spec.rate * t).exp();
    let log_s0 = spot.ln();

    let draws = if mc.antithetic {
        mc.n_paths.div_ceil(2)
    } else {
        mc.n_paths
    };
    let n_batches = draws.div_ceil(PATHS_PER_BATCH);
    let batches: Vec<(KahanSum, KahanSum, usize)> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(batch as u64);
            let count = PATHS_PER_BATCH.min(draws - batch * PATHS_PER_BATCH);
            let mut sum = KahanSum::default();
            let mut sum_sq = KahanSum::default();
            for _ in 0..count {
                let mut x = [log_s0, log_s0];
                for _ in 0..mc.n_steps {
                    let z = std_normal(&mut rng);
                    let (jump, jump_anti) = match dynamics {
                        Dynamics::Gbm => (0.0, 0.0),
                        Dynamics::Merton { m, delta, .. } => {
                            let k = poisson.as_ref().map_or(0.0, |p| p.sample(&mut rng));
                            if k > 0.0 {
                                let w = std_normal(&mut rng);
                                let mean = k * m;
                                let sd = delta * k.sqrt();
                                (mean + sd * w, mean - sd * w)
                            } else {
                                (0.0, 0.0)
                            }
                        }
                        Dynamics::VarianceGamma {
                            theta, sigma_vg, ..
                        } => {
                            let g: f64 = gamma.as_ref().expect("gamma sampler").sample(&mut rng);
                            let w = std_normal(&mut rng);
                            let sd = sigma_vg * g.sqrt();
                            (theta * g + sd * w, theta * g - sd * w)
                        }
                    };
                    x[0] += drift + vol * z + jump;
                    x[1] += drift - vol * z + jump_anti;
                }
                let y = if mc.antithetic {
                    0.5 * (payoff(x[0].exp()) + payoff(x[1].exp()))
                } else {
                    payoff(x[0].exp())
                };
                sum.add(y);
                sum_sq.add(y * y);
            }
            (sum, sum_sq, count)
        })
        .collect();

    let mut sum = KahanSum::default();
    let mut sum_sq = KahanSum::default();
    let mut n = 0usize;
    for (s, q, c) in &batches {
        sum.add(s.value());
        sum_sq.add(q.value());
        n += c;
    }
    let nf = n as f64;
    let mean = sum.value() / nf;
    let var = if n > 1 {
        ((sum_sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        price: discount * mean,
        stderr: discount * (var / nf).sqrt(),
    })
}

/// Monte Carlo price of a European option at time 0.
pub fn mc_price(
    spec: &OptionSpec<f64>,
    model: &LevyModel<f64>,
    spot: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    simulate(spec, model, spot, mc, |s| spec.payoff(s))
}

/// Monte Carlo estimate of `E[e^{-rT} S_T]`, which equals `S_0` under the
/// risk-neutral dynamics.
pub fn mc_discounted_spot(
    spec: &OptionSpec<f64>,
    model: &LevyModel<f64>,
    spot: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    simulate(spec, model, spot, mc, |s| s)
}
