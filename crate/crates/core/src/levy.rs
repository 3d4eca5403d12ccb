//! Lévy measures with a density: the finite-activity jump-diffusion families
//! (Merton, Kou) and the infinite-activity ones (variance gamma, NIG, CGMY).
//!
//! Every measure is bounded by an envelope
//! `C0 |z|^-alpha (e^{D- z} 1{z>=0} + e^{D+ z} 1{z<0}) e^{-mu z^2}`
//! described by [`ShapeParams`]. The envelope decides integrability of
//! `min(z^2, 1)` and whether the pricing integrals converge.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::{adaptive_simpson, integrate_dyadic, GaussLegendre};
use crate::real::Real;
use crate::special::bessel_k1;

/// Default truncation radius for measure integrals.
pub const DEFAULT_Z_MAX: f64 = 10.0;

/// Envelope parameters of an admissible activity Lévy measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams<S> {
    /// Singularity order at the origin.
    pub alpha: S,
    /// Exponential rate applied on `z >= 0`.
    pub d_minus: S,
    /// Exponential rate applied on `z < 0`.
    pub d_plus: S,
    /// Gaussian decay.
    pub mu: S,
    pub c0: S,
}

impl<S: Real> ShapeParams<S> {
    /// Envelope value at `z`; `+inf` at the origin when `alpha > 0`.
    pub fn bound(&self, z: S) -> S {
        let rate = if z >= S::zero() {
            self.d_minus
        } else {
            self.d_plus
        };
        let power = if self.alpha == S::zero() {
            S::one()
        } else {
            z.abs().powf(-self.alpha)
        };
        self.c0 * power * (rate * z - self.mu * z * z).exp()
    }

    /// Tail condition under which `min(z^2, 1)` is integrable:
    /// `mu > 0`, or `mu = 0` with `D- < 0 < D+`.
    pub fn tails_decay(&self) -> bool {
        self.mu > S::zero()
            || (self.mu == S::zero() && self.d_minus < S::zero() && S::zero() < self.d_plus)
    }

    /// `alpha < 3` together with [`tails_decay`](Self::tails_decay).
    pub fn is_integrable(&self) -> bool {
        self.alpha >= S::zero() && self.alpha < S::c(3.0) && self.tails_decay()
    }

    /// Stronger condition used for pricing with exponential payoffs:
    /// `alpha < 3` and either `mu > 0` or `D- + 1 < 0 < D+`.
    pub fn is_admissible_for_pricing(&self) -> bool {
        self.alpha >= S::zero()
            && self.alpha < S::c(3.0)
            && (self.mu > S::zero()
                || (self.mu == S::zero()
                    && self.d_minus + S::one() < S::zero()
                    && S::zero() < self.d_plus))
    }
}

/// Side of the origin for one-sided measure integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn sign<S: Real>(self) -> S {
        match self {
            Side::Positive => S::one(),
            Side::Negative => -S::one(),
        }
    }
}

/// Settings for numerical measure integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec<S> {
    /// Truncation radius; jumps with `|z| > z_max` are ignored.
    pub z_max: S,
    /// Radius of the near-origin region handled by moment expansion.
    pub delta: S,
    /// Absolute tolerance per adaptive panel.
    pub tol: S,
}

impl<S: Real> Default for QuadratureSpec<S> {
    fn default() -> Self {
        Self {
            z_max: S::c(DEFAULT_Z_MAX),
            delta: S::c(1e-3),
            tol: S::c(1e-12),
        }
    }
}

impl<S: Real> QuadratureSpec<S> {
    pub fn refined(&self) -> Self {
        Self {
            z_max: self.z_max,
            delta: self.delta * S::c(0.5),
            tol: self.tol * S::c(0.5),
        }
    }
}

/// Outcome of a numerical measure check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<S> {
    pub value: S,
    pub pass: bool,
    pub diagnostic: Option<String>,
}

/// Jump measure of the log-price process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LevyModel<S> {
    /// Empty measure: pure diffusion.
    None,
    /// Gaussian jumps with intensity `lambda`, mean `m`, st. dev. `delta`.
    Merton { lambda: S, m: S, delta: S },
    /// Double exponential jumps; `theta` is the probability of an up jump.
    Kou {
        lambda: S,
        theta: S,
        lambda_plus: S,
        lambda_minus: S,
    },
    /// `c |z|^-1 e^{a z - b |z|}`.
    VarianceGamma { a: S, b: S, c: S },
    /// `c |z|^-1 e^{a z} K_1(b |z|)`.
    Nig { a: S, b: S, c: S },
    /// `c |z|^{-1-y} (e^{g z} 1{z<0} + e^{-m z} 1{z>0})`.
    Cgmy { c: S, g: S, m: S, y: S },
}

impl<S: Real> LevyModel<S> {
    pub fn merton(lambda: S, m: S, delta: S) -> Result<Self> {
        let model = Self::Merton { lambda, m, delta };
        model.validate()?;
        Ok(model)
    }

    pub fn kou(lambda: S, theta: S, lambda_plus: S, lambda_minus: S) -> Result<Self> {
        let model = Self::Kou {
            lambda,
            theta,
            lambda_plus,
            lambda_minus,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn variance_gamma(a: S, b: S, c: S) -> Result<Self> {
        let model = Self::VarianceGamma { a, b, c };
        model.validate()?;
        Ok(model)
    }

    /// Variance gamma measure of `theta G + sigma_vg W(G)` with `G` a gamma
    /// subordinator of unit mean rate and variance rate `kappa`:
    /// `a = theta / sigma^2`, `b = sqrt(theta^2 + 2 sigma^2 / kappa) / sigma^2`,
    /// `c = 1 / kappa`.
    pub fn variance_gamma_subordinated(theta: S, kappa: S, sigma_vg: S) -> Result<Self> {
        if !(kappa > S::zero()) {
            return Err(invalid("kappa", format!("must be positive, got {kappa}")));
        }
        if !(sigma_vg > S::zero()) {
            return Err(invalid(
                "sigma_vg",
                format!("must be positive, got {sigma_vg}"),
            ));
        }
        let s2 = sigma_vg * sigma_vg;
        let a = theta / s2;
        let b = (theta * theta + S::c(2.0) * s2 / kappa).sqrt() / s2;
        Self::variance_gamma(a, b, S::one() / kappa)
    }

    pub fn nig(a: S, b: S, c: S) -> Result<Self> {
        let model = Self::Nig { a, b, c };
        model.validate()?;
        Ok(model)
    }

    pub fn cgmy(c: S, g: S, m: S, y: S) -> Result<Self> {
        let model = Self::Cgmy { c, g, m, y };
        model.validate()?;
        Ok(model)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Merton { .. } => "merton",
            Self::Kou { .. } => "kou",
            Self::VarianceGamma { .. } => "variance_gamma",
            Self::Nig { .. } => "nig",
            Self::Cgmy { .. } => "cgmy",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: S| {
            if v > S::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive, got {v}")))
            }
        };
        match *self {
            Self::None => Ok(()),
            Self::Merton { lambda, m, delta } => {
                pos("lambda", lambda)?;
                pos("delta", delta)?;
                if !m.is_finite() {
                    return Err(invalid("m", "must be finite"));
                }
                Ok(())
            }
            Self::Kou {
                lambda,
                theta,
                lambda_plus,
                lambda_minus,
            } => {
                pos("lambda", lambda)?;
                pos("lambda_plus", lambda_plus)?;
                pos("lambda_minus", lambda_minus)?;
                if !(theta >= S::zero() && theta <= S::one()) {
                    return Err(invalid("theta", format!("must lie in [0, 1], got {theta}")));
                }
                Ok(())
            }
            Self::VarianceGamma { a, b, c } | Self::Nig { a, b, c } => {
                pos("c", c)?;
                if !(a.is_finite() && b > a.abs()) {
                    return Err(invalid(
                        "b",
                        format!("must exceed |a| = {}, got {b}", a.abs()),
                    ));
                }
                Ok(())
            }
            Self::Cgmy { c, g, m, y } => {
                pos("c", c)?;
                pos("g", g)?;
                pos("m", m)?;
                if !(y < S::c(2.0)) {
                    return Err(invalid("y", format!("must be below 2, got {y}")));
                }
                Ok(())
            }
        }
    }

    /// Finite total mass `nu(R)`.
    pub fn is_finite_activity(&self) -> bool {
        match *self {
            Self::None | Self::Merton { .. } | Self::Kou { .. } => true,
            Self::VarianceGamma { .. } | Self::Nig { .. } => false,
            Self::Cgmy { y, .. } => y < S::zero(),
        }
    }

    /// True when the density blows up at `z = 0`.
    pub fn is_singular_at_origin(&self) -> bool {
        match *self {
            Self::None | Self::Merton { .. } | Self::Kou { .. } => false,
            Self::VarianceGamma { .. } | Self::Nig { .. } => true,
            Self::Cgmy { y, .. } => y > S::c(-1.0),
        }
    }

    /// Jump intensity `h(z)`.
    pub fn density(&self, z: S) -> Result<S> {
        if z == S::zero() && self.is_singular_at_origin() {
            return Err(Error::SingularAtOrigin { model: self.name() });
        }
        Ok(self.density_raw(z))
    }

    /// Density without the origin check; may return `+inf` at `z = 0`.
    pub(crate) fn density_raw(&self, z: S) -> S {
        match *self {
            Self::None => S::zero(),
            Self::Merton { lambda, m, delta } => {
                let d = (z - m) / delta;
                lambda / (delta * (S::c(2.0) * S::PI()).sqrt()) * (-(d * d) * S::c(0.5)).exp()
            }
            Self::Kou {
                lambda,
                theta,
                lambda_plus,
                lambda_minus,
            } => {
                if z >= S::zero() {
                    lambda * theta * lambda_plus * (-lambda_plus * z).exp()
                } else {
                    lambda * (S::one() - theta) * lambda_minus * (lambda_minus * z).exp()
                }
            }
            Self::VarianceGamma { a, b, c } => c / z.abs() * (a * z - b * z.abs()).exp(),
            Self::Nig { a, b, c } => {
                let bz = b * z.abs();
                // K_1(x) e^{x} keeps the product finite for large |z|
                c / z.abs() * ((a * z - bz).exp() * scaled_k1(bz))
            }
            Self::Cgmy { c, g, m, y } => {
                let rate = if z < S::zero() { g * z } else { -m * z };
                c * z.abs().powf(-S::one() - y) * rate.exp()
            }
        }
    }

    /// Envelope witness; `None` for the empty measure.
    ///
    /// For NIG, and CGMY with `y < -1`, the power factor of the density is not
    /// globally bounded by `|z|^-alpha` with the exponential rates given, so
    /// `c0` is taken as the supremum over `|z| <= DEFAULT_Z_MAX`.
    pub fn shape_witness(&self) -> Option<ShapeParams<S>> {
        let zero = S::zero();
        match *self {
            Self::None => None,
            Self::Merton { lambda, m, delta } => {
                let d2 = delta * delta;
                Some(ShapeParams {
                    alpha: zero,
                    d_minus: m / d2,
                    d_plus: m / d2,
                    mu: S::one() / (S::c(2.0) * d2),
                    c0: lambda / (delta * (S::c(2.0) * S::PI()).sqrt())
                        * (-(m * m) / (S::c(2.0) * d2)).exp(),
                })
            }
            Self::Kou {
                lambda,
                theta,
                lambda_plus,
                lambda_minus,
            } => Some(ShapeParams {
                alpha: zero,
                d_minus: -lambda_plus,
                d_plus: lambda_minus,
                mu: zero,
                c0: lambda * (theta * lambda_plus).max((S::one() - theta) * lambda_minus),
            }),
            Self::VarianceGamma { a, b, c } => Some(ShapeParams {
                alpha: S::one(),
                d_minus: a - b,
                d_plus: a + b,
                mu: zero,
                c0: c,
            }),
            Self::Nig { a, b, c } => {
                // h / (|z|^-2 e^{(a -+ b) z}) = (c / b) x e^x K_1(x), x = b|z|, increasing in x
                let x = b * S::c(DEFAULT_Z_MAX);
                let sup = (x * scaled_k1(x)).max(S::one());
                Some(ShapeParams {
                    alpha: S::c(2.0),
                    d_minus: a - b,
                    d_plus: a + b,
                    mu: zero,
                    c0: c / b * sup,
                })
            }
            Self::Cgmy { c, g, m, y } => {
                let alpha = S::one() + y;
                let (alpha, c0) = if alpha >= zero {
                    (alpha, c)
                } else {
                    (zero, c * S::c(DEFAULT_Z_MAX).powf(-alpha))
                };
                Some(ShapeParams {
                    alpha,
                    d_minus: -m,
                    d_plus: g,
                    mu: zero,
                    c0,
                })
            }
        }
    }

    /// `int_0^delta z^p h(+-z) dz` evaluated per family: exact series for the
    /// power-exponential densities, adaptive quadrature of the bounded integrand
    /// otherwise. Fails when the moment diverges at the origin.
    pub fn near_origin_moment(&self, p: u32, side: Side, delta: S) -> Result<S> {
        let pf = S::from_u32(p).expect("small integer");
        let sgn: S = side.sign();
        let tol = S::c(1e-15) * (S::one() + delta);
        match *self {
            Self::None => Ok(S::zero()),
            Self::Merton { .. } | Self::Kou { .. } => {
                // density is bounded near 0; evaluate at +-0 through a tiny offset for Kou
                let f = |z: S| {
                    let zz = if z == S::zero() {
                        sgn * S::min_positive_value()
                    } else {
                        sgn * z
                    };
                    z.powi(p as i32) * self.density_raw(zz)
                };
                adaptive_simpson(&f, S::zero(), delta, tol)
            }
            Self::VarianceGamma { a, b, c } => {
                let rate = b - sgn * a;
                power_exp_moment(c, pf - S::one(), rate, delta, self.name())
            }
            Self::Cgmy { c, g, m, y } => {
                let rate = match side {
                    Side::Positive => m,
                    Side::Negative => g,
                };
                power_exp_moment(c, pf - S::one() - y, rate, delta, self.name())
            }
            Self::Nig { a, b, c } => {
                if p < 2 {
                    return Err(Error::Divergent(format!(
                        "near-origin moment of order {p} diverges for the nig measure (alpha = 2)"
                    )));
                }
                let f = |z: S| {
                    if z == S::zero() {
                        if p == 2 {
                            c / b
                        } else {
                            S::zero()
                        }
                    } else {
                        c * z.powi(p as i32 - 1) * bessel_k1(b * z) * (sgn * a * z).exp()
                    }
                };
                adaptive_simpson(&f, S::zero(), delta, tol)
            }
        }
    }

    /// `int_lo^hi g(z) h(z) dz` for `0 < lo < hi` on one side of the origin
    /// (`g` receives the signed jump size).
    pub fn integrate_side<G: Fn(S) -> S>(
        &self,
        g: &G,
        side: Side,
        lo: S,
        hi: S,
        tol: S,
    ) -> Result<S> {
        if matches!(self, Self::None) || !(lo < hi) {
            return Ok(S::zero());
        }
        let sgn: S = side.sign();
        let f = |t: S| {
            let z = sgn * t;
            g(z) * self.density_raw(z)
        };
        integrate_dyadic(&f, lo, hi, tol)
    }

    /// `nu([a, b])` for an interval not containing the origin, by Gauss-Legendre
    /// on dyadic panels in `|z|`.
    pub fn mass_on(&self, a: S, b: S, rule: &GaussLegendre<S>) -> S {
        self.moment_on(a, b, 0, rule)
    }

    /// `int_a^b z^p nu(dz)` for an interval not containing the origin.
    pub fn moment_on(&self, a: S, b: S, p: i32, rule: &GaussLegendre<S>) -> S {
        if matches!(self, Self::None) || !(a < b) {
            return S::zero();
        }
        debug_assert!(a >= S::zero() || b <= S::zero());
        let (lo, hi, sgn) = if a >= S::zero() {
            (a, b, S::one())
        } else {
            (-b, -a, -S::one())
        };
        let two = S::c(2.0);
        let mut total = S::zero();
        let mut left = lo;
        while left < hi {
            let right = if left > S::zero() {
                (left * two).min(hi)
            } else {
                hi
            };
            total += rule.integrate(
                |t| (sgn * t).powi(p) * self.density_raw(sgn * t),
                left,
                right,
            );
            left = right;
        }
        total
    }

    /// `int_{|z| < delta} z^2 nu(dz)`.
    pub fn second_moment_near(&self, delta: S) -> Result<S> {
        Ok(self.near_origin_moment(2, Side::Positive, delta)?
            + self.near_origin_moment(2, Side::Negative, delta)?)
    }

    /// Numerically integrated total mass over `|z| <= z_max`.
    pub fn total_mass(&self, quad: &QuadratureSpec<S>) -> Result<S> {
        let one = |_z: S| S::one();
        let mut total = S::zero();
        for side in [Side::Positive, Side::Negative] {
            total += self.near_origin_moment(0, side, quad.delta)?;
            total += self.integrate_side(&one, side, quad.delta, quad.z_max, quad.tol)?;
        }
        Ok(total)
    }

    fn min_z2_integral(&self, quad: &QuadratureSpec<S>) -> Result<S> {
        let one = S::one();
        let delta = quad.delta.min(one);
        let z2 = |z: S| z * z;
        let unit = |_z: S| one;
        let mut total = S::zero();
        for side in [Side::Positive, Side::Negative] {
            total += self.near_origin_moment(2, side, delta)?;
            total += self.integrate_side(&z2, side, delta, one.min(quad.z_max), quad.tol)?;
            total += self.integrate_side(&unit, side, one, quad.z_max, quad.tol)?;
        }
        Ok(total)
    }

    /// Evaluates `int min(z^2, 1) nu(dz)` over `|z| <= z_max` and checks that it
    /// is finite and stable when the near-origin radius and tolerance are halved.
    /// The tails beyond `z_max` are judged from the envelope witness.
    pub fn integrability_check(&self, quad: &QuadratureSpec<S>) -> CheckReport<S> {
        if matches!(self, Self::None) {
            return CheckReport {
                value: S::zero(),
                pass: true,
                diagnostic: None,
            };
        }
        let coarse = self.min_z2_integral(quad);
        let fine = self.min_z2_integral(&quad.refined());
        let (coarse, fine) = match (coarse, fine) {
            (Ok(c), Ok(f)) => (c, f),
            (Err(e), _) | (_, Err(e)) => {
                return CheckReport {
                    value: S::infinity(),
                    pass: false,
                    diagnostic: Some(e.to_string()),
                }
            }
        };
        let rel = (fine - coarse).abs() / fine.abs().max(S::min_positive_value());
        let mut diagnostic = None;
        let mut pass = fine.is_finite();
        if !(rel < S::c(1e-3)) {
            pass = false;
            diagnostic = Some(format!(
                "value changed by {rel} (relative) under refinement"
            ));
        }
        if let Some(w) = self.shape_witness() {
            if !w.is_integrable() {
                pass = false;
                diagnostic.get_or_insert_with(|| {
                    format!(
                        "envelope violates integrability: alpha = {}, mu = {}, D- = {}, D+ = {}",
                        w.alpha, w.mu, w.d_minus, w.d_plus
                    )
                });
            }
        }
        CheckReport {
            value: fine,
            pass,
            diagnostic,
        }
    }

    /// `int_0^inf (e^y - 1) nu(dy)`, the expected exponential growth contributed
    /// by positive jumps. Divergent when the positive tail decays no faster than
    /// `e^{-y}` or when the measure is too singular at the origin.
    pub fn positive_jump_growth(&self, quad: &QuadratureSpec<S>) -> Result<S> {
        let Some(w) = self.shape_witness() else {
            return Ok(S::zero());
        };
        if !(w.mu > S::zero() || w.d_minus + S::one() < S::zero()) {
            return Err(Error::Divergent(format!(
                "positive-jump tail of the {} measure decays like e^({} y); need D- + 1 < 0 or mu > 0",
                self.name(),
                w.d_minus
            )));
        }
        let delta = quad.delta;
        let m1 = self
            .near_origin_moment(1, Side::Positive, delta)
            .map_err(|_| {
                Error::Divergent(format!(
                    "int_0 y nu(dy) diverges at the origin for the {} measure (alpha = {} >= 2)",
                    self.name(),
                    w.alpha
                ))
            })?;
        let m2 = self.near_origin_moment(2, Side::Positive, delta)?;
        let m3 = self.near_origin_moment(3, Side::Positive, delta)?;
        let m4 = self.near_origin_moment(4, Side::Positive, delta)?;
        let near = m1 + m2 / S::c(2.0) + m3 / S::c(6.0) + m4 / S::c(24.0);
        let g = |z: S| z.exp_m1();
        let far = self.integrate_side(&g, Side::Positive, delta, quad.z_max, quad.tol)?;
        Ok(near + far)
    }

    /// Checks `int_0^inf (e^y - 1) nu(dy) <= r`.
    pub fn structural_condition_check(
        &self,
        rate: S,
        quad: &QuadratureSpec<S>,
    ) -> Result<CheckReport<S>> {
        let value = self.positive_jump_growth(quad)?;
        let pass = value <= rate + S::c(1e-12);
        Ok(CheckReport {
            value,
            pass,
            diagnostic: (!pass)
                .then(|| format!("int_0^inf (e^y - 1) nu(dy) = {value} exceeds r = {rate}")),
        })
    }

    /// Lévy-Khintchine exponent
    /// `-sigma^2 y^2 / 2 + i omega y + int (e^{iyz} - 1 - iyz 1{|z|<=1}) nu(dz)`.
    pub fn characteristic_exponent(
        &self,
        sigma: S,
        omega: S,
        y: S,
        quad: &QuadratureSpec<S>,
    ) -> Result<Complex<S>> {
        let half = S::c(0.5);
        let mut re = -sigma * sigma * y * y * half;
        let mut im = omega * y;
        if y == S::zero() || matches!(self, Self::None) {
            return Ok(Complex::new(re, im));
        }
        let one = S::one();
        let delta = quad.delta.min(half);
        let z1 = one.min(quad.z_max);
        for side in [Side::Positive, Side::Negative] {
            let sgn: S = side.sign();
            let m2 = self.near_origin_moment(2, side, delta)?;
            let m3 = self.near_origin_moment(3, side, delta)?;
            let m4 = self.near_origin_moment(4, side, delta)?;
            let y2 = y * y;
            re += -y2 * half * m2 + y2 * y2 / S::c(24.0) * m4;
            im += -sgn * y2 * y / S::c(6.0) * m3;

            let cos_inner = |z: S| (y * z).cos() - one;
            let sin_inner = |z: S| (y * z).sin() - y * z;
            re += self.integrate_side(&cos_inner, side, delta, z1, quad.tol)?;
            im += self.integrate_side(&sin_inner, side, delta, z1, quad.tol)?;
            if quad.z_max > one {
                let sin_outer = |z: S| (y * z).sin();
                re += self.integrate_side(&cos_inner, side, one, quad.z_max, quad.tol)?;
                im += self.integrate_side(&sin_outer, side, one, quad.z_max, quad.tol)?;
            }
        }
        Ok(Complex::new(re, im))
    }

    /// Subordinated-Brownian-motion parameters `(theta, kappa, sigma_vg)` of a
    /// variance gamma measure.
    pub fn vg_subordination_params(&self) -> Option<(S, S, S)> {
        match *self {
            Self::VarianceGamma { a, b, c } => {
                let s2 = S::c(2.0) * c / (b * b - a * a);
                Some((a * s2, S::one() / c, s2.sqrt()))
            }
            _ => None,
        }
    }
}

/// `e^x K_1(x)`, finite for large `x`.
fn scaled_k1<S: Real>(x: S) -> S {
    if x > S::c(500.0) {
        // K_1(x) e^x ~ sqrt(pi / 2x) (1 + 3/(8x) - 15/(128 x^2))
        let inv = S::one() / x;
        (S::PI() * S::c(0.5) * inv).sqrt()
            * (S::one() + S::c(0.375) * inv - S::c(15.0 / 128.0) * inv * inv)
    } else {
        bessel_k1(x) * x.exp()
    }
}

/// `c int_0^delta z^e e^{-rate z} dz` via the lower incomplete gamma series
/// `delta^{e+1} e^{-rate delta} sum_n (rate delta)^n / ((e+1)(e+2)...(e+1+n))`.
fn power_exp_moment<S: Real>(c: S, e: S, rate: S, delta: S, model: &'static str) -> Result<S> {
    let s = e + S::one();
    if !(s > S::zero()) {
        return Err(Error::Divergent(format!(
            "near-origin integral of z^{e} diverges for the {model} measure"
        )));
    }
    let x = rate * delta;
    let mut term = S::one() / s;
    let mut sum = term;
    for n in 1..10_000usize {
        term *= x / (s + S::from_usize_lossy(n));
        sum += term;
        if term.abs() <= S::epsilon() * sum.abs() {
            break;
        }
    }
    Ok(c * delta.powf(s) * (-x).exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn merton() -> LevyModel<f64> {
        LevyModel::merton(0.1, -0.2, 0.15).unwrap()
    }

    #[test]
    fn merton_density_at_mean() {
        let h = merton().density(-0.2).unwrap();
        assert!((h - 0.265_961_520_267_622_4).abs() < 1e-12);
    }

    #[test]
    fn kou_density_right_limit() {
        let kou = LevyModel::<f64>::kou(1.0, 0.5, 10.0, 5.0).unwrap();
        assert_eq!(kou.density(0.0).unwrap(), 5.0);
        assert!((kou.density(1e-12).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn empty_measure() {
        let none = LevyModel::<f64>::None;
        assert_eq!(none.density(0.3).unwrap(), 0.0);
        assert!(none.shape_witness().is_none());
        let r = none.integrability_check(&QuadratureSpec::default());
        assert!(r.pass && r.value == 0.0);
    }

    #[test]
    fn singular_models_reject_origin() {
        let vg = LevyModel::variance_gamma(-1.0, 3.0, 2.0).unwrap();
        assert!(matches!(
            vg.density(0.0),
            Err(Error::SingularAtOrigin { .. })
        ));
        let nig = LevyModel::nig(0.5, 2.0, 1.0).unwrap();
        assert!(nig.density(0.0).is_err());
        let cgmy = LevyModel::cgmy(1.0, 5.0, 10.0, 0.5).unwrap();
        assert!(cgmy.density(0.0).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(LevyModel::merton(0.0, 0.0, 0.1).is_err());
        assert!(LevyModel::kou(1.0, 1.5, 2.0, 2.0).is_err());
        assert!(LevyModel::variance_gamma(3.0, 2.0, 1.0).is_err());
        assert!(LevyModel::nig(0.0, 1.0, 0.0).is_err());
        assert!(LevyModel::cgmy(1.0, 1.0, 1.0, 2.0).is_err());
        assert!(LevyModel::variance_gamma_subordinated(-0.43, 0.0, 0.2).is_err());
    }

    #[test]
    fn witnesses_follow_family_classification() {
        let vg = LevyModel::variance_gamma(-1.0, 3.0, 2.0).unwrap();
        let w = vg.shape_witness().unwrap();
        assert_eq!((w.alpha, w.d_plus, w.d_minus, w.mu), (1.0, 2.0, -4.0, 0.0));
        let cg = LevyModel::cgmy(1.0, 5.0, 10.0, 0.5).unwrap();
        let w = cg.shape_witness().unwrap();
        assert_eq!((w.alpha, w.d_plus, w.d_minus), (1.5, 5.0, -10.0));
        let w = merton().shape_witness().unwrap();
        assert_eq!(w.alpha, 0.0);
        assert!((w.mu - 1.0 / (2.0 * 0.15 * 0.15)).abs() < 1e-12);
    }

    #[test]
    fn vg_subordination_round_trip() {
        let vg = LevyModel::<f64>::variance_gamma_subordinated(-0.43, 0.27, 0.12).unwrap();
        let (t, k, s) = vg.vg_subordination_params().unwrap();
        assert!((t + 0.43).abs() < 1e-12 && (k - 0.27).abs() < 1e-12 && (s - 0.12).abs() < 1e-12);
    }

    #[test]
    fn power_moment_matches_quadrature() {
        // int_0^0.01 z^{0.3} e^{-7 z} dz
        let series = power_exp_moment(1.0, 0.3, 7.0, 0.01, "t").unwrap();
        // substitute z = t^10 to remove the endpoint singularity
        let lim = 0.01f64.powf(0.1);
        let q = adaptive_simpson(
            &|t: f64| 10.0 * t.powi(12) * (-7.0 * t.powi(10)).exp(),
            0.0,
            lim,
            1e-16,
        )
        .unwrap();
        assert!((series - q).abs() < 1e-12 * q.abs().max(1e-10));
        assert!(power_exp_moment(1.0, -1.0, 1.0, 0.1, "t").is_err());
    }

    #[test]
    fn nig_low_order_moments_diverge() {
        let nig = LevyModel::<f64>::nig(0.0, 2.0, 1.0).unwrap();
        assert!(nig.near_origin_moment(1, Side::Positive, 0.01).is_err());
        let m2 = nig.near_origin_moment(2, Side::Positive, 0.01).unwrap();
        // z K_1(bz) -> 1/b near 0
        assert!((m2 - 0.01 / 2.0).abs() < 1e-3 * 0.005);
    }

    #[test]
    fn structural_divergence_for_slow_positive_tail() {
        let kou = LevyModel::kou(1.0, 0.5, 0.9, 5.0).unwrap();
        let err = kou.structural_condition_check(0.1, &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::Divergent(_))));
    }

    #[test]
    fn characteristic_exponent_gaussian_part() {
        let q = QuadratureSpec::default();
        let none = LevyModel::<f64>::None;
        let v = none.characteristic_exponent(0.2, 0.0, 1.0, &q).unwrap();
        assert!((v.re + 0.02).abs() < 1e-15 && v.im == 0.0);
        let v = merton().characteristic_exponent(0.2, 0.1, 0.0, &q).unwrap();
        assert_eq!(v, Complex::new(0.0, 0.0));
    }
}
