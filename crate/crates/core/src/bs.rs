//! Black-Scholes closed forms, the normal distribution, and the log-moneyness
//! change of variables shared by the solvers.
//!
//! The transformed price is `u(tau, x) = e^{r tau} V(T - tau, K e^x)` with
//! `tau = T - t` and `x = ln(S / K)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

/// Vanilla option contract plus the market data the pricing models share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec<S> {
    pub kind: OptionKind,
    /// Strike, currency units.
    pub strike: S,
    /// Maturity in years.
    pub maturity: S,
    /// Continuously compounded risk-free rate per year.
    pub rate: S,
    /// Diffusion volatility per square-root year.
    pub sigma: S,
}

impl<S: Real> OptionSpec<S> {
    pub fn new(kind: OptionKind, strike: S, maturity: S, rate: S, sigma: S) -> Result<Self> {
        let spec = Self {
            kind,
            strike,
            maturity,
            rate,
            sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn put(strike: S, maturity: S, rate: S, sigma: S) -> Result<Self> {
        Self::new(OptionKind::Put, strike, maturity, rate, sigma)
    }

    pub fn call(strike: S, maturity: S, rate: S, sigma: S) -> Result<Self> {
        Self::new(OptionKind::Call, strike, maturity, rate, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > S::zero()) || !self.strike.is_finite() {
            return Err(invalid(
                "strike",
                format!("must be positive, got {}", self.strike),
            ));
        }
        if !(self.maturity > S::zero()) || !self.maturity.is_finite() {
            return Err(invalid(
                "maturity",
                format!("must be positive, got {}", self.maturity),
            ));
        }
        if !(self.rate >= S::zero()) || !self.rate.is_finite() {
            return Err(invalid(
                "rate",
                format!("must be non-negative, got {}", self.rate),
            ));
        }
        if !(self.sigma > S::zero()) || !self.sigma.is_finite() {
            return Err(invalid(
                "sigma",
                format!("must be positive, got {}", self.sigma),
            ));
        }
        Ok(())
    }

    pub fn with_rate(mut self, rate: S) -> Self {
        self.rate = rate;
        self
    }

    pub fn with_sigma(mut self, sigma: S) -> Self {
        self.sigma = sigma;
        self
    }

    /// Payoff `Phi(S)`.
    pub fn payoff(&self, spot: S) -> S {
        match self.kind {
            OptionKind::Call => (spot - self.strike).pos(),
            OptionKind::Put => (self.strike - spot).pos(),
        }
    }

    /// Payoff in log-moneyness, `Phi(K e^x)`.
    pub fn payoff_log(&self, x: S) -> S {
        let k = self.strike;
        match self.kind {
            OptionKind::Call => (k * x.exp_m1()).pos(),
            OptionKind::Put => (-k * x.exp_m1()).pos(),
        }
    }
}

/// Standard normal density.
#[inline]
pub fn norm_pdf<S: Real>(d: S) -> S {
    (-(d * d) * S::c(0.5)).exp() / (S::c(2.0) * S::PI()).sqrt()
}

/// Standard normal distribution function `N(d)`.
///
/// Evaluated as `erfc(-d / sqrt 2) / 2`, so the lower tail keeps full relative
/// precision and `N(d) + N(-d) = 1` to rounding.
#[inline]
pub fn norm_cdf<S: Real>(d: S) -> S {
    S::c(0.5) * (-d * S::FRAC_1_SQRT_2()).erfc()
}

/// Inverse of [`norm_cdf`] on `(0, 1)`.
///
/// Acklam's rational approximation followed by one Halley correction step.
/// Returns `-inf`/`+inf` at 0/1 and NaN outside `[0, 1]`.
pub fn norm_inv_cdf<S: Real>(p: S) -> S {
    if p.is_nan() || p < S::zero() || p > S::one() {
        return S::nan();
    }
    if p == S::zero() {
        return S::neg_infinity();
    }
    if p == S::one() {
        return S::infinity();
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    let c = S::c;
    let p_low = c(0.02425);
    let horner = |coef: &[f64], x: S| coef.iter().fold(S::zero(), |acc, &a| acc * x + c(a));
    let x = if p < p_low {
        let q = (c(-2.0) * p.ln()).sqrt();
        horner(&C, q) / (horner(&D, q) * q + S::one())
    } else if p <= S::one() - p_low {
        let q = p - c(0.5);
        let r = q * q;
        horner(&A, r) * q / (horner(&B, r) * r + S::one())
    } else {
        let q = (c(-2.0) * (S::one() - p).ln()).sqrt();
        -horner(&C, q) / (horner(&D, q) * q + S::one())
    };
    // Halley step on N(x) - p
    let e = norm_cdf(x) - p;
    let u = e * (c(2.0) * S::PI()).sqrt() * (x * x * c(0.5)).exp();
    x - u / (S::one() + x * u * c(0.5))
}

/// Black-Scholes price with time to maturity `tau`. At `tau = 0` the payoff is
/// returned directly.
pub fn bs_value<S: Real>(spec: &OptionSpec<S>, spot: S, tau: S) -> S {
    if tau <= S::zero() {
        return spec.payoff(spot);
    }
    let k = spec.strike;
    let sig_sqrt = spec.sigma * tau.sqrt();
    let d1 = ((spot / k).ln() + (spec.rate + spec.sigma * spec.sigma * S::c(0.5)) * tau) / sig_sqrt;
    let d2 = d1 - sig_sqrt;
    let df = (-spec.rate * tau).exp();
    match spec.kind {
        OptionKind::Call => spot * norm_cdf(d1) - k * df * norm_cdf(d2),
        OptionKind::Put => k * df * norm_cdf(-d2) - spot * norm_cdf(-d1),
    }
}

/// Black-Scholes price `V(t, S)` at calendar time `t` in `[0, T)`.
pub fn bs_price<S: Real>(spec: &OptionSpec<S>, spot: S, t: S) -> Result<S> {
    if !(spot > S::zero()) {
        return Err(Error::Domain(format!("spot must be positive, got {spot}")));
    }
    if !(t < spec.maturity) {
        return Err(Error::Domain(format!(
            "time {t} is not before maturity {}",
            spec.maturity
        )));
    }
    Ok(bs_value(spec, spot, spec.maturity - t))
}

/// `(t, S) -> (tau, x)`.
pub fn to_log_coords<S: Real>(spec: &OptionSpec<S>, t: S, spot: S) -> Result<(S, S)> {
    if !(spot > S::zero()) {
        return Err(Error::Domain(format!("spot must be positive, got {spot}")));
    }
    Ok((spec.maturity - t, (spot / spec.strike).ln()))
}

/// Back-transforms a transformed value `u` at `(tau, x)` to `(t, S, V)`.
pub fn from_log_coords<S: Real>(spec: &OptionSpec<S>, tau: S, x: S, u: S) -> (S, S, S) {
    let t = spec.maturity - tau;
    let spot = spec.strike * x.exp();
    (t, spot, (-spec.rate * tau).exp() * u)
}

/// Forward transform of a price: `u = e^{r tau} V`.
pub fn to_transformed_value<S: Real>(spec: &OptionSpec<S>, tau: S, value: S) -> S {
    (spec.rate * tau).exp() * value
}

/// Transformed Black-Scholes solution `u_BS(tau, x) = e^{r tau} V_BS(T - tau, K e^x)`.
pub fn u_bs<S: Real>(spec: &OptionSpec<S>, tau: S, x: S) -> S {
    if tau <= S::zero() {
        return spec.payoff_log(x);
    }
    (spec.rate * tau).exp() * bs_value(spec, spec.strike * x.exp(), tau)
}
