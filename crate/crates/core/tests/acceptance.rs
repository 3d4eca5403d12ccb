//! Acceptance checks against the published price table and the solver
//! properties. Prints one `PASS`/`FAIL` line per criterion, followed by the
//! cell-level detail, and exits non-zero when any criterion fails.

use std::time::{Duration, Instant};

use levy_pide::american::{lcp_residual, solve_american_penalized};
use levy_pide::bs::bs_price;
use levy_pide::oracle::{mc_price, merton_series_price, McConfig};
use levy_pide::pide::{build_grid, solve_european, IntegralOperator};
use levy_pide::{GridSpec, LevyModel, OptionSpec, PenaltyConfig, PriceSurface, QuadratureSpec};

const STRIKE: f64 = 100.0;
const SIGMA: f64 = 0.23;
const SIGMA_BS_TABLE: f64 = 0.12;
const RATES: [f64; 2] = [0.0, 0.1];

const TABLE_S: [f64; 8] = [
    85.2144, 88.692, 92.3116, 96.0789, 100.0, 104.081, 108.329, 112.75,
];
const TABLE_BS: [[f64; 8]; 2] = [
    [
        15.2547, 12.2484, 9.42895, 6.90902, 4.78444, 3.1099, 1.88555, 1.0604,
    ],
    [
        7.35166, 5.24145, 3.51944, 2.21106, 1.29196, 0.69843, 0.34773, 0.15881,
    ],
];
const TABLE_VG: [[f64; 8]; 2] = [
    [
        19.2687, 17.2948, 15.428, 13.674, 12.0372, 10.52, 9.12343, 7.84623,
    ],
    [
        14.9855, 13.3899, 11.8822, 10.4691, 9.15576, 7.94499, 6.83762, 4.51403,
    ],
];
const TABLE_MERTON: [[f64; 8]; 2] = [
    [
        17.1692, 14.8335, 12.6423, 10.6201, 8.78655, 7.155, 5.73137, 5.83246,
    ],
    [
        12.9056, 10.9901, 9.21922, 7.61307, 6.18483, 4.94044, 3.87864, 2.99166,
    ],
];
const TABLE_PAYOFF: [f64; 8] = [14.7856, 11.308, 7.68837, 3.92106, 0.0, 0.0, 0.0, 0.0];
/// Cell excluded from the VG tolerance check: (rate index, spot index).
const VG_FLAGGED: (usize, usize) = (1, 7);

const TOL_MERTON: f64 = 0.15;
const TOL_SERIES: f64 = 0.1;
const MAX_SOLVE_TIME: Duration = Duration::from_secs(30);
const TOL_VG: f64 = 0.2;
const TOL_BS: f64 = 5e-3;
const TOL_PAYOFF: f64 = 5e-5;
const TOL_DIFFUSION: f64 = 0.02 * STRIKE;
const MIN_DIFFUSION_RATIO: f64 = 1.8;
const TOL_ANNIHILATION: f64 = 1e-6 * STRIKE;
const TOL_DOMINANCE: f64 = 1e-8;
const EPSILON: f64 = 1e-3;
const EPSILON_COARSE: f64 = 1e-2;
const MIN_PENALTY_RATIO: f64 = 5.0;
const TOL_TRIANGLE: f64 = 0.15;
const MC_PATHS: usize = 100_000;
const SERIES_TERMS: usize = 100;

fn put(r: f64, sigma: f64) -> OptionSpec {
    OptionSpec::put(STRIKE, 1.0, r, sigma).unwrap()
}

fn merton() -> LevyModel {
    LevyModel::merton(0.1, -0.2, 0.15).unwrap()
}

fn vg() -> LevyModel {
    LevyModel::variance_gamma_subordinated(-0.43, 0.27, 0.12).unwrap()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn table_check(
    model: &LevyModel,
    table: &[[f64; 8]; 2],
    tol: f64,
    skip: Option<(usize, usize)>,
) -> (bool, Vec<String>, Vec<PriceSurface>) {
    let mut ok = true;
    let mut lines = Vec::new();
    let mut surfaces = Vec::new();
    for (ri, &r) in RATES.iter().enumerate() {
        let surface = solve_european(&put(r, SIGMA), model, &GridSpec::standard()).unwrap();
        for (si, &s) in TABLE_S.iter().enumerate() {
            let v = surface.price_at(0.0, s).unwrap();
            let err = v - table[ri][si];
            let flagged = skip == Some((ri, si));
            let cell_ok = flagged || err.abs() <= tol;
            ok &= cell_ok;
            let tag = if flagged {
                "reported"
            } else {
                verdict(cell_ok)
            };
            lines.push(format!(
                "    r={r:<4} S={s:<8} table={:<9} pide={v:<10.5} diff={err:+.5} {tag}",
                table[ri][si]
            ));
        }
        surfaces.push(surface);
    }
    (ok, lines, surfaces)
}

fn criterion_1() -> bool {
    let (mut ok, lines, surfaces) = table_check(&merton(), &TABLE_MERTON, TOL_MERTON, None);
    let mut detail = lines;
    for (ri, &r) in RATES.iter().enumerate() {
        let spec = put(r, SIGMA);
        let start = Instant::now();
        solve_european(&spec, &merton(), &GridSpec::standard()).unwrap();
        let elapsed = start.elapsed();
        ok &= elapsed < MAX_SOLVE_TIME;
        detail.push(format!(
            "    r={r}: solve time {:.3} s",
            elapsed.as_secs_f64()
        ));
        for &s in &TABLE_S {
            let series = merton_series_price(&spec, &merton(), s, 0.0, SERIES_TERMS).unwrap();
            let pide = surfaces[ri].price_at(0.0, s).unwrap();
            let cell_ok = (series - pide).abs() <= TOL_SERIES;
            ok &= cell_ok;
            detail.push(format!(
                "    r={r:<4} S={s:<8} series={series:<10.5} pide={pide:<10.5} {}",
                verdict(cell_ok)
            ));
        }
    }
    println!(
        "{} criterion 1: Merton column within {TOL_MERTON}, series cross-check within {TOL_SERIES}, solve < {} s",
        verdict(ok),
        MAX_SOLVE_TIME.as_secs()
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_2() -> bool {
    let (ok, lines, _) = table_check(&vg(), &TABLE_VG, TOL_VG, Some(VG_FLAGGED));
    println!(
        "{} criterion 2: VG column (theta=-0.43, kappa=0.27, sigma_vg=0.12) within {TOL_VG}, flagged cell reported only",
        verdict(ok)
    );
    lines.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_3() -> bool {
    let mut ok = true;
    let mut detail = Vec::new();
    for (ri, &r) in RATES.iter().enumerate() {
        for (si, &s) in TABLE_S.iter().enumerate() {
            let v = bs_price(&put(r, SIGMA_BS_TABLE), s, 0.0).unwrap();
            let alt = bs_price(&put(r, SIGMA), s, 0.0).unwrap();
            let cell_ok = (v - TABLE_BS[ri][si]).abs() <= TOL_BS;
            ok &= cell_ok;
            detail.push(format!(
                "    r={r:<4} S={s:<8} table={:<9} sigma=0.12: {v:<10.5} sigma=0.23: {alt:<10.5} {}",
                TABLE_BS[ri][si],
                verdict(cell_ok)
            ));
        }
    }
    println!(
        "{} criterion 3: BS column with sigma={SIGMA_BS_TABLE} within {TOL_BS}",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_4() -> bool {
    let spec = put(0.0, SIGMA);
    let grid = build_grid(&spec, &GridSpec::standard()).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, &x) in [-0.16, -0.12, -0.08, -0.04, 0.0, 0.04, 0.08, 0.12]
        .iter()
        .enumerate()
    {
        let i = grid
            .xs
            .iter()
            .position(|&g| (g - x).abs() < 1e-9)
            .expect("table spot is a node");
        let spot = STRIKE * grid.xs[i].exp();
        let payoff = grid.u0[i];
        let cell_ok =
            (spot - TABLE_S[k]).abs() <= 5e-3 && (payoff - TABLE_PAYOFF[k]).abs() <= TOL_PAYOFF;
        ok &= cell_ok;
        detail.push(format!(
            "    x={x:<5} S={spot:.4} payoff={payoff:.4} table={} {}",
            TABLE_PAYOFF[k],
            verdict(cell_ok)
        ));
    }
    println!(
        "{} criterion 4: payoff column from grid nodes to 4 decimals",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_5() -> bool {
    let mut ok = true;
    let mut detail = Vec::new();
    for r in RATES {
        let spec = put(r, SIGMA);
        let mut errs = Vec::new();
        for grid in [
            GridSpec::standard(),
            GridSpec::standard().with_steps(800, 400),
        ] {
            let s = solve_european(&spec, &LevyModel::None, &grid).unwrap();
            let worst = (0..=90)
                .map(|i| 80.0 + 0.5 * i as f64)
                .map(|spot| {
                    (s.price_at(0.0, spot).unwrap() - bs_price(&spec, spot, 0.0).unwrap()).abs()
                })
                .fold(0.0f64, f64::max);
            errs.push(worst);
        }
        let ratio = errs[0] / errs[1];
        let rate_ok = errs[0] <= TOL_DIFFUSION && ratio >= MIN_DIFFUSION_RATIO;
        ok &= rate_ok;
        detail.push(format!(
            "    r={r}: max error {:.3e} (dx=0.02, dt=0.005), {:.3e} (halved), ratio {ratio:.2} {}",
            errs[0],
            errs[1],
            verdict(rate_ok)
        ));
    }
    println!(
        "{} criterion 5: nu=0 error <= {TOL_DIFFUSION} and halving ratio >= {MIN_DIFFUSION_RATIO}",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_6() -> bool {
    let grid = GridSpec::standard();
    let xs: Vec<f64> = (0..=grid.n_space).map(|i| grid.node(i as isize)).collect();
    let models = [
        merton(),
        LevyModel::kou(0.1, 0.3, 10.0, 5.0).unwrap(),
        vg(),
        LevyModel::nig(-3.0, 15.0, 0.1).unwrap(),
        LevyModel::cgmy(0.5, 5.0, 10.0, 0.5).unwrap(),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for m in models {
        let op = IntegralOperator::assemble(&m, &grid).unwrap();
        let u: Vec<f64> = xs.iter().map(|x| STRIKE * x.exp()).collect();
        let v = op.apply(&u, &xs, &|x| STRIKE * x.exp());
        let worst = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        ok &= worst <= TOL_ANNIHILATION;
        detail.push(format!(
            "    {:<14} |f[K e^x]| = {worst:.3e} {}",
            m.name(),
            verdict(worst <= TOL_ANNIHILATION)
        ));
    }
    println!(
        "{} criterion 6: discrete operator annihilates K e^x within {TOL_ANNIHILATION:.0e}",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn criterion_7() -> bool {
    let spec = put(0.1, SIGMA);
    let grid = GridSpec::standard();
    let eu = solve_european(&spec, &merton(), &grid).unwrap();
    let am = solve_american_penalized(
        &spec,
        &merton(),
        &grid,
        &PenaltyConfig::with_epsilon(EPSILON),
    )
    .unwrap();
    let coarse = solve_american_penalized(
        &spec,
        &merton(),
        &grid,
        &PenaltyConfig::with_epsilon(EPSILON_COARSE),
    )
    .unwrap();

    let mut dominance = f64::INFINITY;
    let mut deficit = 0.0f64;
    let mut deficit_coarse = 0.0f64;
    let mut worst_at = (0usize, 0usize);
    for level in 0..am.n_levels() {
        for i in 0..am.xs.len() {
            let phi = spec.payoff(am.spot(i));
            dominance = dominance.min(am.value_at_node(level, i) - eu.value_at_node(level, i));
            let d = phi - am.value_at_node(level, i);
            if d > deficit {
                deficit = d;
                worst_at = (level, i);
            }
            deficit_coarse = deficit_coarse.max(phi - coarse.value_at_node(level, i));
        }
    }
    let rep = lcp_residual(&am, &spec, &merton(), &grid).unwrap();
    let obstacle_tol = 2.0 * EPSILON * STRIKE;
    let compl_tol = rep.max_pde_residual * obstacle_tol;
    let ratio = deficit_coarse / deficit;

    let checks = [
        (dominance >= -TOL_DOMINANCE, format!("min(V_am - V_eu) = {dominance:.3e} >= -{TOL_DOMINANCE:e}")),
        (
            deficit <= obstacle_tol,
            format!(
                "max(Phi - V_am)+ = {deficit:.4} <= 2 eps K = {obstacle_tol} (worst at tau={:.3}, S={:.3})",
                am.taus[worst_at.0],
                am.spot(worst_at.1)
            ),
        ),
        (
            ratio >= MIN_PENALTY_RATIO,
            format!("deficit ratio eps {EPSILON_COARSE:e} -> {EPSILON:e}: {deficit_coarse:.4} / {deficit:.4} = {ratio:.2}"),
        ),
        (
            rep.max_complementarity <= compl_tol,
            format!(
                "complementarity {:.4} <= PDE residual {:.4} x 2 eps K = {compl_tol:.4}",
                rep.max_complementarity, rep.max_pde_residual
            ),
        ),
    ];
    let ok = checks.iter().all(|(c, _)| *c);
    println!(
        "{} criterion 7: American penalty properties (Merton, r=0.1, eps={EPSILON:e})",
        verdict(ok)
    );
    for (c, line) in &checks {
        println!("    {line} {}", verdict(*c));
    }
    ok
}

fn criterion_8() -> bool {
    let spec = put(0.0, SIGMA);
    let surface = solve_european(&spec, &merton(), &GridSpec::standard()).unwrap();
    let mc = McConfig {
        n_paths: MC_PATHS,
        ..McConfig::default()
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [85.2144, 100.0, 112.75] {
        let pide = surface.price_at(0.0, s).unwrap();
        let series = merton_series_price(&spec, &merton(), s, 0.0, SERIES_TERMS).unwrap();
        let est = mc_price(&spec, &merton(), s, &mc).unwrap();
        let tol = TOL_TRIANGLE.max(3.0 * est.stderr);
        let spread = [
            (pide - series).abs(),
            (pide - est.price).abs(),
            (series - est.price).abs(),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        ok &= spread <= tol;
        detail.push(format!(
            "    S={s:<8} pide={pide:.5} series={series:.5} mc={:.5}+-{:.5} spread={spread:.4} tol={tol:.4} {}",
            est.price,
            est.stderr,
            verdict(spread <= tol)
        ));
    }
    println!(
        "{} criterion 8: Merton PIDE / series / MC ({MC_PATHS} paths) pairwise agreement",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

/// Expected classification of one measure, derived by hand from its density.
struct Expected {
    model: LevyModel,
    finite_activity: bool,
    alpha: f64,
    integrable: bool,
    admissible: bool,
    /// `int_0^inf (e^y - 1) nu(dy)`, `None` where it diverges.
    growth: Option<f64>,
}

fn criterion_9() -> bool {
    use levy_pide::bs::norm_cdf;
    let phi = |x: f64| norm_cdf(x);
    let (lambda, m, delta) = (0.1f64, -0.2f64, 0.15f64);
    let merton_growth = lambda
        * ((m + 0.5 * delta * delta).exp() * phi((m + delta * delta) / delta) - phi(m / delta));
    let vg = vg();
    let (a, b, c) = match vg {
        LevyModel::VarianceGamma { a, b, c } => (a, b, c),
        _ => unreachable!(),
    };
    let vg_growth = c * ((b - a) / (b - a - 1.0)).ln();
    let cgmy_growth = 0.5 * (-2.0 * std::f64::consts::PI.sqrt()) * (9.0f64.sqrt() - 10.0f64.sqrt());
    let cases = [
        Expected {
            model: merton(),
            finite_activity: true,
            alpha: 0.0,
            integrable: true,
            admissible: true,
            growth: Some(merton_growth),
        },
        Expected {
            model: LevyModel::kou(0.1, 0.3, 10.0, 5.0).unwrap(),
            finite_activity: true,
            alpha: 0.0,
            integrable: true,
            admissible: true,
            growth: Some(0.1 * 0.3 / 9.0),
        },
        Expected {
            model: vg,
            finite_activity: false,
            alpha: 1.0,
            integrable: true,
            admissible: true,
            growth: Some(vg_growth),
        },
        Expected {
            model: LevyModel::nig(-3.0, 15.0, 0.1).unwrap(),
            finite_activity: false,
            alpha: 2.0,
            integrable: true,
            admissible: true,
            growth: None,
        },
        Expected {
            model: LevyModel::cgmy(0.5, 5.0, 10.0, 0.5).unwrap(),
            finite_activity: false,
            alpha: 1.5,
            integrable: true,
            admissible: true,
            growth: Some(cgmy_growth),
        },
    ];
    let quad = QuadratureSpec::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for case in cases {
        let w = case.model.shape_witness().unwrap();
        let integ = case.model.integrability_check(&quad);
        let mut agree = case.model.is_finite_activity() == case.finite_activity
            && w.alpha == case.alpha
            && integ.pass == case.integrable
            && w.is_integrable() == case.integrable
            && w.is_admissible_for_pricing() == case.admissible;
        let mut structural = String::new();
        for r in RATES {
            let got = case.model.structural_condition_check(r, &quad);
            match (case.growth, got) {
                (Some(g), Ok(rep)) => {
                    agree &=
                        rep.pass == (g <= r) && (rep.value - g).abs() <= 1e-6 * (1.0 + g.abs());
                    structural += &format!(" r={r}: {} ({:.6e} vs {g:.6e})", rep.pass, rep.value);
                }
                (None, Err(_)) => structural += &format!(" r={r}: divergent"),
                (expected, got) => {
                    agree = false;
                    structural += &format!(" r={r}: expected {expected:?}, got {got:?}");
                }
            }
        }
        ok &= agree;
        detail.push(format!(
            "    {:<14} finite={} alpha={} integrable={} admissible={} structural:{structural} {}",
            case.model.name(),
            case.model.is_finite_activity(),
            w.alpha,
            integ.pass,
            w.is_admissible_for_pricing(),
            verdict(agree)
        ));
    }
    println!(
        "{} criterion 9: measure classifications match the analytic ones",
        verdict(ok)
    );
    detail.iter().for_each(|l| println!("{l}"));
    ok
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let failed: Vec<usize> = criteria
        .iter()
        .enumerate()
        .filter_map(|(k, run)| (!run()).then_some(k + 1))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
