use levy_pide::levy::Side;
use levy_pide::Error;
use levy_pide::{LevyModel, QuadratureSpec};
use proptest::prelude::*;

fn six_models() -> Vec<LevyModel> {
    vec![
        LevyModel::merton(0.1, -0.2, 0.15).unwrap(),
        LevyModel::kou(0.3, 0.4, 12.0, 6.0).unwrap(),
        LevyModel::variance_gamma_subordinated(-0.43, 0.27, 0.12).unwrap(),
        LevyModel::nig(-3.0, 15.0, 0.1).unwrap(),
        LevyModel::cgmy(0.5, 5.0, 10.0, 0.5).unwrap(),
        LevyModel::cgmy(0.2, 3.0, 8.0, -0.5).unwrap(),
    ]
}

/// `n` points log-spaced in `1e-4 <= |z| <= 10` on both sides.
fn log_spaced(n: usize) -> Vec<f64> {
    let half = n / 2;
    let mut out = Vec::with_capacity(2 * half);
    for i in 0..half {
        let t = i as f64 / (half - 1) as f64;
        let z = 10f64.powf(-4.0 + 5.0 * t);
        out.push(z);
        out.push(-z);
    }
    out
}

#[test]
fn densities_are_nonnegative() {
    let zs = log_spaced(10_000);
    for m in six_models() {
        for &z in &zs {
            let h = m.density(z).unwrap();
            assert!(h >= 0.0 && h.is_finite(), "{} at {z}: {h}", m.name());
        }
    }
    assert_eq!(LevyModel::None.density(0.3).unwrap(), 0.0);
}

#[test]
fn witnesses_bound_densities() {
    let zs = log_spaced(10_000);
    for m in six_models() {
        let w = m.shape_witness().unwrap();
        for &z in &zs {
            let h = m.density(z).unwrap();
            let b = w.bound(z);
            assert!(h <= b * (1.0 + 1e-12), "{} at {z}: {h} > {b}", m.name());
        }
    }
}

#[test]
fn merton_density_example() {
    let m = LevyModel::merton(0.1, -0.2, 0.15).unwrap();
    assert!((m.density(-0.2).unwrap() - 0.265_962).abs() < 1e-6);
}

#[test]
fn nig_large_jump_asymptotics() {
    let (a, b, c) = (-3.0, 15.0, 0.1);
    let m = LevyModel::nig(a, b, c).unwrap();
    for z in [-8.0f64, 8.0] {
        let asym = c
            * z.abs().powf(-1.5)
            * (a * z - b * z.abs()).exp()
            * (std::f64::consts::PI / 2.0).sqrt()
            / b.sqrt();
        let h = m.density(z).unwrap();
        // next term of the expansion is 3 / (8 b |z|)
        assert!(
            (h / asym - 1.0).abs() < 1.0 / (b * z.abs()),
            "{z}: {h} vs {asym}"
        );
    }
}

#[test]
fn finite_activity_mass_equals_intensity() {
    let quad = QuadratureSpec::default();
    for (m, lambda) in [
        (LevyModel::merton(0.1, -0.2, 0.15).unwrap(), 0.1),
        (LevyModel::kou(0.3, 0.4, 12.0, 6.0).unwrap(), 0.3),
    ] {
        let mass = m.total_mass(&quad).unwrap();
        assert!((mass / lambda - 1.0).abs() < 1e-6, "{}: {mass}", m.name());
    }
}

#[test]
fn activity_and_witness_classification() {
    let expect = [
        (true, 0.0),
        (true, 0.0),
        (false, 1.0),
        (false, 2.0),
        (false, 1.5),
        (true, 0.5),
    ];
    for (m, (finite, alpha)) in six_models().iter().zip(expect) {
        assert_eq!(m.is_finite_activity(), finite, "{}", m.name());
        assert_eq!(m.shape_witness().unwrap().alpha, alpha, "{}", m.name());
    }
    let vg = LevyModel::variance_gamma(2.0, 5.0, 1.0).unwrap();
    let w = vg.shape_witness().unwrap();
    assert_eq!((w.d_plus, w.d_minus, w.mu), (7.0, -3.0, 0.0));
    let merton = LevyModel::merton(0.1, -0.2, 0.15)
        .unwrap()
        .shape_witness()
        .unwrap();
    assert!((merton.mu - 1.0 / (2.0 * 0.15 * 0.15)).abs() < 1e-12);
}

#[test]
fn integrability_matches_definition() {
    let quad = QuadratureSpec::default();
    for m in six_models() {
        let w = m.shape_witness().unwrap();
        let r = m.integrability_check(&quad);
        assert_eq!(r.pass, w.is_integrable(), "{}: {:?}", m.name(), r);
        assert!(r.pass);
    }
    let none = LevyModel::None.integrability_check(&quad);
    assert!(none.pass && none.value == 0.0);

    let merton = LevyModel::merton(0.1, -0.2, 0.15)
        .unwrap()
        .integrability_check(&quad);
    assert!(merton.value <= 0.1);

    let too_singular = LevyModel::Cgmy {
        c: 1.0,
        g: 2.0,
        m: 3.0,
        y: 2.5,
    };
    let r = too_singular.integrability_check(&quad);
    assert!(!r.pass && r.diagnostic.is_some());
}

#[test]
fn structural_condition_examples() {
    let quad = QuadratureSpec::default();
    let none = LevyModel::None
        .structural_condition_check(0.0, &quad)
        .unwrap();
    assert!(none.pass && none.value == 0.0);

    let kou = LevyModel::kou(1.0, 0.5, 0.9, 5.0).unwrap();
    assert!(matches!(
        kou.structural_condition_check(0.1, &quad),
        Err(Error::Divergent(_))
    ));

    // closed form: lambda theta / (lambda_plus - 1)
    let kou = LevyModel::kou(0.3, 0.4, 12.0, 6.0).unwrap();
    let r = kou.structural_condition_check(0.1, &quad).unwrap();
    assert!((r.value - 0.3 * 0.4 / 11.0).abs() < 1e-10);
    assert!(r.pass);
}

#[test]
fn merton_structural_value_by_independent_quadrature() {
    let (lambda, m, delta) = (0.1f64, -0.2f64, 0.15f64);
    let model = LevyModel::merton(lambda, m, delta).unwrap();
    let r = model
        .structural_condition_check(0.1, &QuadratureSpec::default())
        .unwrap();
    // composite Simpson on [0, 3] with 6000 panels
    let n = 6000;
    let h = 3.0 / n as f64;
    let f = |y: f64| y.exp_m1() * model.density(y).unwrap();
    let mut s = f(0.0) + f(3.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    let oracle = s * h / 3.0;
    assert!((r.value - oracle).abs() < 1e-10, "{} vs {oracle}", r.value);
    assert!(r.pass);
}

#[test]
fn characteristic_exponent_at_zero_is_exactly_zero() {
    let quad = QuadratureSpec::default();
    for m in six_models() {
        let v = m.characteristic_exponent(0.23, 0.05, 0.0, &quad).unwrap();
        assert_eq!((v.re, v.im), (0.0, 0.0));
    }
    let g = LevyModel::None
        .characteristic_exponent(0.2, 0.0, 1.0, &quad)
        .unwrap();
    assert!((g.re + 0.02).abs() < 1e-15 && g.im == 0.0);
}

#[test]
fn merton_characteristic_exponent_closed_form() {
    let (lambda, m, delta) = (0.1f64, -0.2f64, 0.15f64);
    let model = LevyModel::merton(lambda, m, delta).unwrap();
    // int_{|z|<=1} z h(z) dz by composite Simpson
    let n = 20_000;
    let h = 2.0 / n as f64;
    let f = |z: f64| z * model.density(z).unwrap();
    let mut s = f(-1.0) + f(1.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(-1.0 + i as f64 * h);
    }
    let small_mean = s * h / 3.0;
    for y in [0.5f64, 1.0, 3.0] {
        let v = model
            .characteristic_exponent(0.23, 0.01, y, &QuadratureSpec::default())
            .unwrap();
        let jump_re = lambda * ((-0.5 * delta * delta * y * y).exp() * (y * m).cos() - 1.0);
        let jump_im =
            lambda * (-0.5 * delta * delta * y * y).exp() * (y * m).sin() - y * small_mean;
        let re = -0.5 * 0.23 * 0.23 * y * y + jump_re;
        let im = 0.01 * y + jump_im;
        assert!(
            (v.re - re).abs() < 1e-8 && (v.im - im).abs() < 1e-8,
            "y={y}: {v} vs {re}+{im}i"
        );
    }
}

#[test]
fn vg_near_origin_moment_against_quadrature() {
    let vg = LevyModel::variance_gamma_subordinated(-0.43, 0.27, 0.12).unwrap();
    for side in [Side::Positive, Side::Negative] {
        let exact = vg.near_origin_moment(2, side, 0.02).unwrap();
        let sgn = if side == Side::Positive { 1.0 } else { -1.0 };
        let n = 2000;
        let h = 0.02 / n as f64;
        // z^2 h(z) = c |z| e^{a z - b |z|} is smooth on [0, delta]
        let f = |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                t * t * vg.density(sgn * t).unwrap()
            }
        };
        let mut s = f(0.0) + f(0.02);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        assert!((exact - s * h / 3.0).abs() < 1e-12 * exact.max(1e-12) + 1e-15);
    }
}

proptest! {
    #[test]
    fn merton_witness_bounds_density(lambda in 0.01f64..2.0, m in -0.5f64..0.5, delta in 0.05f64..0.6, z in -10f64..10.0) {
        let model = LevyModel::merton(lambda, m, delta).unwrap();
        let w = model.shape_witness().unwrap();
        prop_assert!(model.density(z).unwrap() <= w.bound(z) * (1.0 + 1e-12));
    }

    #[test]
    fn vg_witness_bounds_density(theta in -0.6f64..0.3, kappa in 0.05f64..1.0, s in 0.05f64..0.5, z in 1e-6f64..10.0, neg in any::<bool>()) {
        let model = LevyModel::variance_gamma_subordinated(theta, kappa, s).unwrap();
        let z = if neg { -z } else { z };
        let w = model.shape_witness().unwrap();
        prop_assert!(model.density(z).unwrap() <= w.bound(z) * (1.0 + 1e-12));
    }

    #[test]
    fn cgmy_witness_bounds_density(c in 0.01f64..2.0, g in 0.5f64..20.0, m in 1.5f64..20.0, y in -2.0f64..1.9, z in 1e-4f64..10.0, neg in any::<bool>()) {
        let model = LevyModel::cgmy(c, g, m, y).unwrap();
        let z = if neg { -z } else { z };
        let w = model.shape_witness().unwrap();
        prop_assert!(model.density(z).unwrap() <= w.bound(z) * (1.0 + 1e-12));
    }

    #[test]
    fn nig_witness_bounds_density(a in -5.0f64..5.0, extra in 0.5f64..20.0, c in 0.01f64..1.0, z in 1e-4f64..10.0, neg in any::<bool>()) {
        let b = a.abs() + extra;
        let model = LevyModel::nig(a, b, c).unwrap();
        let z = if neg { -z } else { z };
        let w = model.shape_witness().unwrap();
        prop_assert!(model.density(z).unwrap() <= w.bound(z) * (1.0 + 1e-12));
    }
}
