//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::ExitCode;

use montroll_susy::app::{self, report::printed_eq11_spot_gap, ConsistencyReport, EffectiveConfig, Model};
use montroll_susy::darboux::{lambda_sweep, Convention, DeformationParams};
use montroll_susy::kink::{kink_params, montroll_rd_residual, solve_cubic};
use montroll_susy::numerics::{cumulative_integral, make_grid};
use montroll_susy::spectral::verify_eigenpair;
use montroll_susy::susy::{self, morse_characteristics, SusyParams};

type Outcome = (bool, String);

fn default_report() -> (Model, ConsistencyReport) {
    let model = Model::build(&EffectiveConfig::defaults()).unwrap();
    let report = ConsistencyReport::build(&model).unwrap();
    (model, report)
}

fn c1_riccati(r: &ConsistencyReport) -> Outcome {
    let ok = r.riccati_residual <= 1e-11 && r.eq7_residual <= 1e-11;
    (ok, format!("riccati {:.2e} <= 1e-11, switching identity {:.2e} <= 1e-11", r.riccati_residual, r.eq7_residual))
}

fn c2_ground_state_quadrature(model: &Model) -> Outcome {
    // Richardson-extrapolated trapezoid integral of R from 0, compared
    // with the closed form wherever it has not underflowed.
    let p = &model.params;
    let coarse = model.grid;
    let fine = coarse.refined();
    let t_h = cumulative_integral(&susy::superpotential(p, &coarse), coarse.anchor()).unwrap();
    let t_h2 = cumulative_integral(&susy::superpotential(p, &fine), fine.anchor()).unwrap();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for i in 0..coarse.len() {
        let closed = model.phi0.values()[i];
        if closed < 1e-280 {
            continue;
        }
        let integral = (4.0 * t_h2.values()[2 * i] - t_h.values()[i]) / 3.0;
        let quad = p.amplitude * (-integral).exp();
        worst = worst.max((quad - closed).abs() / closed);
        compared += 1;
    }
    (worst <= 1e-6, format!("max relative gap {worst:.2e} <= 1e-6 over {compared} points"))
}

fn c3_splitting(r: &ConsistencyReport) -> Outcome {
    let s = &r.splitting;
    let ok = s.rel_error <= 0.02 && s.error_ratio >= 3.5 && s.nodes_ground == 0 && s.nodes_excited == 1;
    (
        ok,
        format!(
            "split {:.6} (rel err {:.2e} <= 0.02), halving ratio {:.3} >= 3.5, nodes {}/{}",
            s.computed, s.rel_error, s.error_ratio, s.nodes_ground, s.nodes_excited
        ),
    )
}

fn c4_schrodinger(r: &ConsistencyReport) -> Outcome {
    let s = &r.schrodinger_residuals;
    let ok = s.ground <= s.tolerance && s.excited <= s.tolerance && s.order_ground >= 1.95 && s.order_excited >= 1.95;
    (
        ok,
        format!(
            "ground {:.2e}, excited {:.2e} <= 50h^2 = {:.1e}; orders {:.4}, {:.4}",
            s.ground, s.excited, s.tolerance, s.order_ground, s.order_excited
        ),
    )
}

fn c5_isospectral(r: &ConsistencyReport) -> Outcome {
    let iso = &r.isospectral;
    let rows_ok = iso.rows.iter().all(|row| row.max_deviation <= 5e-3 && row.refined_max_deviation < row.max_deviation);
    let control_ok = (iso.control_deviation - 0.01).abs() <= 1e-6;
    let detail = iso
        .rows
        .iter()
        .map(|row| format!("lambda {:.2}: {:.2e} -> {:.2e}", row.lambda, row.max_deviation, row.refined_max_deviation))
        .collect::<Vec<_>>()
        .join(", ");
    (rows_ok && control_ok && iso.rows.len() == 2, format!("{detail}; control {:.6}", iso.control_deviation))
}

fn c6_lambda_family(model: &Model) -> Outcome {
    let tol = 50.0 * model.grid.h().powi(2);
    let mut ok = true;
    let mut parts = Vec::new();
    for l in [10.0, 5.0, -5.0] {
        let fam = model.family_at(&DeformationParams::new(l, Convention::PaperFigure).unwrap()).unwrap();
        let ric = fam.riccati_residual(model.params.epsilon0);
        let sch = verify_eigenpair(&fam.u_lambda, &fam.phi0_lambda, model.params.epsilon0, fam.residual_exclusion());
        ok &= ric <= 5e-8 && sch <= tol;
        parts.push(format!("lambda {l}: riccati {ric:.1e}, schrodinger {sch:.1e}"));
    }
    let norm = model.family_at(&DeformationParams::new(2.0, Convention::Normalized).unwrap()).unwrap().norm();
    ok &= (norm - 1.0).abs() <= 1e-6;
    (ok, format!("{}; norm(lambda=2) - 1 = {:.1e}", parts.join(", "), norm - 1.0))
}

fn c7_side_rule(model: &Model) -> Outcome {
    let mut ok = true;
    let mut with_root = 0;
    for l in [-10.0, -5.0, -2.0, 2.0, 5.0, 10.0] {
        match model.family_at(&DeformationParams::new(l, Convention::PaperFigure).unwrap()) {
            Ok(fam) => {
                if let Some(x) = fam.singularity {
                    with_root += 1;
                    ok &= x.signum() == -f64::signum(l);
                }
            }
            Err(_) => ok = false,
        }
    }
    (ok && with_root > 0, format!("{with_root} of 6 lambdas admit a pole, all on the side opposite to lambda"))
}

fn c8_large_lambda(model: &Model) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for conv in [Convention::PaperFigure, Convention::Normalized] {
        let rows = lambda_sweep(&model.r, &model.u, &model.phi0, &[1e2, 1e3, 1e4], conv).unwrap();
        for w in rows.windows(2) {
            let ratio = w[0].sup_dev_u / w[1].sup_dev_u;
            ok &= (8.0..=12.0).contains(&ratio);
            parts.push(format!("{ratio:.2}"));
        }
    }
    (ok, format!("per-decade ratios {} in [8, 12]", parts.join(", ")))
}

fn c9_morse() -> Outcome {
    let grid = make_grid(-8.0, 8.0, 4001).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (eps, tol) in [(0.01, 0.02), (0.1, 0.10)] {
        let p = SusyParams::new(-2.5 / SQRT_2, -0.5, eps, 0.0, 1.0).unwrap();
        let m = morse_characteristics(&p, &grid).unwrap();
        let target = 2.0 * eps * p.gamma;
        let bias_err = (m.bias - target).abs() / target.abs();
        let order = eps / (p.beta * p.beta);
        let min_err = ((m.xi_min_left - m.derived_minima.0) / m.derived_minima.0)
            .abs()
            .max(((m.xi_min_right - m.derived_minima.1) / m.derived_minima.1).abs());
        ok &= bias_err <= tol && min_err <= order;
        parts.push(format!(
            "eps {eps}: bias {:.5e} vs 2*eps*gamma {:.1e} (rel {:.1e} <= {tol}), minima rel {:.1e} <= {:.1e}",
            m.bias, target, bias_err, min_err, order
        ));
    }
    (ok, parts.join("; "))
}

fn c10_kink() -> Outcome {
    let mut ok = true;
    let mut vieta: f64 = 0.0;
    for sigma in [0.0, 0.2, -0.3] {
        let r = solve_cubic(sigma).unwrap();
        let (a, b, c) = (r.alpha1, r.alpha2, r.alpha3);
        vieta = vieta.max((a + b + c).abs()).max((a * b + b * c + c * a + 1.0).abs()).max((a * b * c - sigma).abs());
    }
    ok &= vieta <= 1e-10;

    let roots = solve_cubic(0.2).unwrap();
    let kp = kink_params(roots.alpha1, roots.alpha2, true).unwrap();
    let grid = make_grid(-20.0, 20.0, 4001).unwrap();
    let rho_star = kp.critical_friction();
    let residual = montroll_rd_residual(&kp, &grid, rho_star, 0.2).max_abs();
    ok &= residual <= 1e-10;

    // The residual is affine in rho; least squares has a closed form.
    let a = montroll_rd_residual(&kp, &grid, 0.0, 0.2);
    let b = montroll_rd_residual(&kp, &grid, 1.0, 0.2).zip_with(&a, |x, y| x - y);
    let ab: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();
    let bb: f64 = b.values().iter().map(|y| y * y).sum();
    let rho_fit = -ab / bb;
    ok &= (rho_fit - rho_star).abs() <= 1e-6;
    (
        ok,
        format!(
            "vieta {vieta:.1e} <= 1e-10, residual at rho* {residual:.1e} <= 1e-10, fitted rho - rho* = {:.1e}",
            rho_fit - rho_star
        ),
    )
}

fn c11_printed(r: &ConsistencyReport) -> Outcome {
    let spot = printed_eq11_spot_gap();
    let ok = (spot - 0.125).abs() <= 1e-12 && r.printed_eq11_max_gap > 0.0 && r.printed_eq8_max_gap > 0.0;
    (
        ok,
        format!(
            "spot gap {spot} (1/8), printed_eq11_max_gap {:.2e}, printed_eq8_max_gap {:.2e}",
            r.printed_eq11_max_gap, r.printed_eq8_max_gap
        ),
    )
}

/// Parsed rows plus the sign of each value read from its mantissa, which
/// survives values below the range of `f64`.
fn read_signed(path: &Path) -> Vec<(f64, f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            let mant: f64 = v.split('e').next().unwrap().parse().unwrap();
            (x.parse().unwrap(), v.parse().unwrap(), mant.signum() * (mant != 0.0) as u8 as f64)
        })
        .collect()
}

fn read_series(path: &Path) -> Vec<(f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

fn c12_figures() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = EffectiveConfig::defaults();
    let path = |name: &str| dir.path().join(name);
    let mut identical = true;
    for id in 1..=5u8 {
        app::run_figure(id, &cfg, &path("a.csv")).unwrap();
        app::run_figure(id, &cfg, &path("b.csv")).unwrap();
        identical &= std::fs::read(path("a.csv")).unwrap() == std::fs::read(path("b.csv")).unwrap();
    }
    app::run_verify(&cfg, &path("a.json")).unwrap();
    app::run_verify(&cfg, &path("b.json")).unwrap();
    identical &= std::fs::read(path("a.json")).unwrap() == std::fs::read(path("b.json")).unwrap();

    app::run_figure(1, &cfg, &path("f1.csv")).unwrap();
    let f1 = read_series(&path("f1.csv"));
    let minima: Vec<f64> = f1.windows(3).filter(|w| w[1].1 < w[0].1 && w[1].1 < w[2].1).map(|w| w[1].1).collect();
    let two_unequal = minima.len() == 2 && (minima[0] - minima[1]).abs() > 1e-6;

    app::run_figure(2, &cfg, &path("f2.csv")).unwrap();
    let f2s = read_signed(&path("f2.csv"));
    let positive = f2s.iter().all(|p| p.2 > 0.0);
    let f2: Vec<(f64, f64)> = f2s.iter().map(|p| (p.0, p.1)).collect();
    let at_zero = |s: &[(f64, f64)]| s.iter().find(|p| p.0 == 0.0).map(|p| p.1);
    let f2_zero = at_zero(&f2);

    app::run_figure(5, &cfg, &path("f5.csv")).unwrap();
    let f5 = read_series(&path("f5.csv"));
    let nondecreasing = f5.windows(2).all(|w| w[1].1 >= w[0].1);
    let f5_zero = at_zero(&f5);

    let ok = identical && two_unequal && positive && f2_zero == Some(1.0) && nondecreasing && f5_zero == Some(0.0);
    (
        ok,
        format!(
            "fig1 minima {minima:?}, fig2 positive {positive} at 0 {f2_zero:?}, fig5 nondecreasing {nondecreasing} at 0 {f5_zero:?}, reruns identical {identical}"
        ),
    )
}

fn main() -> ExitCode {
    let (model, report) = default_report();
    let results: Vec<(&str, Outcome)> = vec![
        ("riccati ground truth", c1_riccati(&report)),
        ("ground state from the superpotential", c2_ground_state_quadrature(&model)),
        ("spectral splitting", c3_splitting(&report)),
        ("schrodinger residuals", c4_schrodinger(&report)),
        ("isospectrality", c5_isospectral(&report)),
        ("lambda-family identities", c6_lambda_family(&model)),
        ("singularity side rule", c7_side_rule(&model)),
        ("large-lambda recovery", c8_large_lambda(&model)),
        ("morse bias and minima", c9_morse()),
        ("kink dynamics", c10_kink()),
        ("documented discrepancies", c11_printed(&report)),
        ("figure data", c12_figures()),
    ];
    let mut all = true;
    for (i, (name, (ok, detail))) in results.iter().enumerate() {
        all &= ok;
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if *ok { "PASS" } else { "FAIL" });
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
