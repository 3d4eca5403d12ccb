//! Special functions not covered by the scalar trait.

use crate::real::Real;

/// Argument at which [`bessel_k1`] switches from the power series to
/// Steed's continued fraction.
pub const K1_SWITCH: f64 = 2.0;

/// Modified Bessel function of the second kind of order one, `K_1(x)`, for `x > 0`.
///
/// For `x <= 2` the convergent ascending series is summed; above that the
/// Thompson-Barnett (Steed) continued fraction for `K_0`, `K_1` is used,
/// which stays accurate where the ascending series cancels catastrophically.
/// Returns `+inf` at `x = 0` and NaN for negative arguments.
pub fn bessel_k1<S: Real>(x: S) -> S {
    if x.is_nan() || x < S::zero() {
        return S::nan();
    }
    if x == S::zero() {
        return S::infinity();
    }
    if x <= S::c(K1_SWITCH) {
        k1_series(x)
    } else {
        k1_steed(x)
    }
}

fn k1_series<S: Real>(x: S) -> S {
    let euler_gamma = S::c(0.577_215_664_901_532_9);
    let half = x * S::c(0.5);
    let q = half * half;
    // term_k = (x^2/4)^k / (k! (k+1)!)
    let mut term = S::one();
    let mut harmonic = S::zero();
    let mut i1_sum = S::zero();
    let mut psi_sum = S::zero();
    for k in 0..60 {
        let kf = S::from_usize_lossy(k);
        if k > 0 {
            term *= q / (kf * (kf + S::one()));
            harmonic += S::one() / kf;
        }
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        let psi = S::c(2.0) * (harmonic - euler_gamma) + S::one() / (kf + S::one());
        i1_sum += term;
        psi_sum += psi * term;
        if term < S::epsilon() * S::c(1e-3) * i1_sum {
            break;
        }
    }
    let i1 = half * i1_sum;
    S::one() / x + i1 * half.ln() - half * S::c(0.5) * psi_sum
}

fn k1_steed<S: Real>(x: S) -> S {
    let two = S::c(2.0);
    let mut b = two * (S::one() + x);
    let mut d = S::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = S::zero();
    let mut q2 = S::one();
    let a1 = S::c(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = S::one() + q * delh;
    for i in 2..10_000usize {
        let fi = S::from_usize_lossy(i);
        a -= two * (fi - S::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = S::one() / (b + a * d);
        delh = (b * d - S::one()) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < S::epsilon() {
            break;
        }
    }
    h = a1 * h;
    let k0 = (S::PI() / (two * x)).sqrt() * (-x).exp() / s;
    k0 * (x + S::c(0.5) - h) / x
}
