//! One-dimensional quadrature used for Lévy measure integrals.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<S: Real, F: Fn(S) -> S>(f: &F, a: S, b: S, tol: S) -> Result<S> {
    if a == b {
        return Ok(S::zero());
    }
    let half = S::c(0.5);
    let m = (a + b) * half;
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / S::c(6.0) * (fa + S::c(4.0) * fm + fb);
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)?;
    if !v.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integral on [{a}, {b}]"
        )));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<S: Real, F: Fn(S) -> S>(
    f: &F,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    tol: S,
    depth: u32,
) -> Result<S> {
    let half = S::c(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = f(lm);
    let frm = f(rm);
    let six = S::c(6.0);
    let four = S::c(4.0);
    let left = (m - a) / six * (fa + four * flm + fm);
    let right = (b - m) / six * (fm + four * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= S::c(15.0) * tol || (b - a).abs() < S::epsilon() * a.abs().max(b.abs()) {
        return Ok(left + right + delta / S::c(15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "subdivision limit reached on [{a}, {b}] (error estimate {})",
            delta.abs() / S::c(15.0)
        )));
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, tol * half, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, tol * half, depth - 1)?,
    )
}

/// Integrates `f` over `[lo, hi]` with `0 < lo < hi`, splitting into dyadic
/// panels `[lo, 2 lo], [2 lo, 4 lo], ...` so that integrands with a power-law
/// blow-up towards the origin are resolved panel by panel.
pub fn integrate_dyadic<S: Real, F: Fn(S) -> S>(f: &F, lo: S, hi: S, tol: S) -> Result<S> {
    debug_assert!(lo > S::zero());
    let mut total = S::zero();
    let mut a = lo;
    let two = S::c(2.0);
    while a < hi {
        let b = (a * two).min(hi);
        total += adaptive_simpson(f, a, b, tol)?;
        a = b;
    }
    Ok(total)
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<S> {
    pub nodes: Vec<S>,
    pub weights: Vec<S>,
}

impl<S: Real> GaussLegendre<S> {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![S::zero(); n];
        let mut weights = vec![S::zero(); n];
        let nf = S::from_usize_lossy(n);
        let two = S::c(2.0);
        for i in 0..n.div_ceil(2) {
            let fi = S::from_usize_lossy(i);
            // Tricomi initial guess
            let mut x = (S::PI() * (fi + S::c(0.75)) / (nf + S::c(0.5))).cos();
            let mut dp = S::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < S::epsilon() {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != S::zero() {
                dp = d;
            }
            let w = two / ((S::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(S) -> S>(&self, f: F, a: S, b: S) -> S {
        let half = S::c(0.5);
        let c = (a + b) * half;
        let h = (b - a) * half;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(c + h * t))
            .sum::<S>()
            * h
    }
}

fn legendre<S: Real>(n: usize, x: S) -> (S, S) {
    let mut p0 = S::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = S::from_usize_lossy(k);
        let p2 = ((S::c(2.0) * kf - S::one()) * x * p1 - (kf - S::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = S::from_usize_lossy(n);
    let dp = nf * (x * p1 - p0) / (x * x - S::one());
    (p1, dp)
}
