//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails.

use std::process::{Command, ExitCode};

use falva_core::action::{action_1d, action_1d_cresson, action_2d, action_nd, QdotSource};
use falva_core::euler::{
    direct_minimize, el_residual_1d, el_residual_1d_cresson, el_residual_2d, el_residual_nd, solve_el_bvp,
    BoundaryData1D,
};
use falva_core::exprdsl::{Func, LagrangianExpr};
use falva_core::fracops::{cresson, rl_left, rl_right, OrderSet};
use falva_core::numcore::{observed_order, FieldNd, Grid1D, GridFunction, GridNd};
use falva_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn parse(s: &str) -> LagrangianExpr {
    LagrangianExpr::parse(s).unwrap()
}

fn grid(a: f64, t: f64, n: usize) -> Grid1D {
    Grid1D::new(a, t, n).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);
const PLUS_I: Complex64 = Complex64::new(0.0, 1.0);

/// Gamma(alpha + 1) for the tested orders.
const GAMMA_ALPHA_PLUS_1: [(f64, f64); 5] = [
    (0.1, 0.951350769866873),
    (0.25, 0.9064024770554773),
    (0.5, 0.886226925452758),
    (0.75, 0.9190625268488833),
    (0.9, 0.9617658319073873),
];

fn constant_action() -> Outcome {
    let (a, t, c) = (0.5, 2.0, 2.5);
    let q = GridFunction::zeros(grid(a, t, 64));
    let mut worst: f64 = 0.0;
    for (alpha, g) in GAMMA_ALPHA_PLUS_1 {
        let s = action_1d(&parse("2.5"), &q, alpha, &QdotSource::FiniteDifference).map_err(|e| e.to_string())?;
        let exact = c * (t - a).powf(alpha) / g;
        worst = worst.max((s.value.re - exact).abs() / exact);
    }
    check(worst < 1e-10, format!("max relative error {worst:.2e}"))
}

/// Gamma(mu + 1) / Gamma(mu + 1 - alpha) per (mu, alpha).
const RL_POWER_COEFF: [(f64, f64, f64); 9] = [
    (1.0, 0.25, 1.0880652521310172),
    (1.0, 0.5, std::f64::consts::FRAC_2_SQRT_PI),
    (1.0, 0.75, 1.103262651320837),
    (1.5, 0.25, 1.173289280936309),
    (1.5, 0.5, 1.3293403881791372),
    (1.5, 0.75, 1.4464090846320772),
    (2.0, 0.25, 1.243503145292591),
    (2.0, 0.5, 1.50450555612735),
    (2.0, 0.75, 1.7652202421133398),
];

fn rl_power_law() -> Outcome {
    let (a, t) = (0.0f64, 1.0f64);
    let mut report = Vec::new();
    let mut ok = true;
    for (mu, alpha, coeff) in RL_POWER_COEFF {
        let exact = coeff * (t - a).powf(mu - alpha);
        let mut samples = Vec::new();
        for n in [64, 128, 256, 512] {
            let f = GridFunction::from_fn(grid(a, t, n), |x| (x - a).powf(mu)).unwrap();
            let d = rl_left(&f, alpha).map_err(|e| e.to_string())?;
            samples.push(((t - a) / n as f64, (d.value(n).re - exact).abs() / exact));
        }
        let last = samples[3].1;
        if mu == 1.0 {
            // the piecewise-linear scheme is exact for linear f
            ok &= last < 1e-12;
            report.push(format!("mu=1 a={alpha}: err {last:.1e}"));
        } else {
            let p = observed_order(&samples).map_err(|e| e.to_string())?;
            ok &= p >= 1.0 && last < 1e-3;
            report.push(format!("mu={mu} a={alpha}: order {p:.2} err {last:.1e}"));
        }
    }
    check(ok, report.join("; "))
}

fn cresson_identities() -> Outcome {
    let f = GridFunction::from_fn(grid(0.0, 1.0, 256), |x| x.sin() + x * x + 0.3).unwrap();
    let (alpha, beta) = (0.4, 0.7);
    let left = rl_left(&f, alpha).map_err(|e| e.to_string())?;
    let right = rl_right(&f, beta).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut compare = |gamma: Complex64, expected: &dyn Fn(usize) -> (Complex64, f64)| -> Result<(), String> {
        let d = cresson(&f, &OrderSet::one_d(alpha, beta, gamma).unwrap()).map_err(|e| e.to_string())?;
        for j in 0..d.values().len() {
            if d.is_singular(j) {
                continue;
            }
            let (e, scale) = expected(j);
            worst = worst.max((d.value(j) - e).norm() / scale);
        }
        Ok(())
    };
    compare(MINUS_I, &|j| (left.value(j), left.value(j).norm()))?;
    compare(PLUS_I, &|j| (-right.value(j), right.value(j).norm()))?;
    let g = Complex64::new(0.3, 0.8);
    let (cl, cr) = (0.5 * (1.0 + PLUS_I * g), 0.5 * (PLUS_I * g - 1.0));
    compare(g, &|j| {
        let (l, r) = (cl * left.value(j), cr * right.value(j));
        (l + r, (l + r).norm())
    })?;
    check(worst < 1e-13, format!("max node-wise relative deviation {worst:.2e}"))
}

fn classical_limits() -> Outcome {
    let order = 1.0 - 1e-3;
    let n = 1000;
    let g = grid(0.0, 1.0, n);
    let q = GridFunction::from_fn(g, f64::sin).unwrap();
    let v: Vec<f64> = g.nodes().map(f64::cos).collect();
    let l = "qdot^2/2 - q^2/2";
    let s = action_1d(&parse(l), &q, order, &QdotSource::Analytic(v.clone())).map_err(|e| e.to_string())?;
    let h = g.spacing();
    let classical: f64 = g
        .nodes()
        .enumerate()
        .map(|(j, tau)| {
            let w = if j == 0 || j == n { 0.5 * h } else { h };
            w * (v[j] * v[j] / 2.0 - tau.sin().powi(2) / 2.0)
        })
        .sum();
    let action_gap = (s.value.re - classical).abs() / classical.abs();

    let orders = OrderSet::one_d(order, order, MINUS_I).unwrap();
    // the left derivative at tau = a is 0 for every order below 1, so the
    // limit is taken on (a, t] when f'(a) != 0 and on [a, t] otherwise
    let sine = sup_gap(&q, &orders, f64::cos, 1)?;
    let at_a = cresson(&q, &orders).map_err(|e| e.to_string())?.value(0).re;
    let bump = GridFunction::from_fn(g, |x| 1.0 - x.cos()).unwrap();
    let flat = sup_gap(&bump, &orders, f64::sin, 0)?;
    check(
        action_gap < 1e-2 && sine < 5e-2 && flat < 5e-2,
        format!(
            "action gap {action_gap:.2e}; derivative sup gap {sine:.2e} for sin on (a,t] (value {at_a} at a), \
             {flat:.2e} for 1-cos on [a,t]"
        ),
    )
}

/// Relative sup-norm distance between Cresson's derivative and `exact`
/// over the non-singular nodes from `first` on.
fn sup_gap(f: &GridFunction, orders: &OrderSet, exact: fn(f64) -> f64, first: usize) -> Result<f64, String> {
    let d = cresson(f, orders).map_err(|e| e.to_string())?;
    let (mut dev, mut norm) = (0.0f64, 0.0f64);
    for (j, tau) in f.grid().nodes().enumerate().skip(first) {
        if !d.is_singular(j) {
            dev = dev.max((d.value(j) - Complex64::new(exact(tau), 0.0)).norm());
            norm = norm.max(exact(tau).abs());
        }
    }
    Ok(dev / norm)
}

fn free_particle() -> Outcome {
    let (alpha, n) = (0.5, 2000);
    let g = grid(0.0, 1.0, n);
    let p = 2.0 - alpha;
    // q(0) = 0 and q(1) = 1 fix qa = 1, c = -1
    let q = GridFunction::from_fn(g, |x| 1.0 - (1.0 - x).powf(p)).unwrap();
    let v = g.nodes().map(|x| p * (1.0 - x).powf(p - 1.0)).collect();
    let r = el_residual_1d(&parse("qdot^2/2"), &q, alpha, &QdotSource::Analytic(v)).map_err(|e| e.to_string())?;
    let bd = BoundaryData1D::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let s = solve_el_bvp(&parse("qdot^2/2"), &bd, alpha, n).map_err(|e| e.to_string())?;
    let slope_err = (s.slope - p).abs();
    check(
        r.sup_norm < 1e-4 && slope_err < 1e-3,
        format!("residual sup {:.2e}, shooting slope {:.6} (exact {p})", r.sup_norm, s.slope),
    )
}

fn minimizer_vs_shooting() -> Outcome {
    let bd = BoundaryData1D::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let mut report = Vec::new();
    let mut ok = true;
    for (name, l) in [("free", "qdot^2/2"), ("oscillator", "qdot^2/2 - q^2/2")] {
        for alpha in [0.5, 0.75] {
            let m = direct_minimize(&parse(l), &bd, alpha, 200).map_err(|e| e.to_string())?;
            let s = solve_el_bvp(&parse(l), &bd, alpha, 200).map_err(|e| e.to_string())?;
            let limit = 1.0 - 5.0 * s.epsilon;
            let gap =
                s.q.grid()
                    .nodes()
                    .enumerate()
                    .filter(|&(_, x)| x <= limit + 1e-12)
                    .map(|(j, _)| (s.q.value(j).re - m.q.value(j).re).abs())
                    .fold(0.0, f64::max);
            ok &= m.converged && gap < 1e-3;
            report.push(format!("{name} a={alpha}: gap {gap:.1e}"));
        }
    }
    check(ok, report.join("; "))
}

fn two_d_reduction() -> Outcome {
    let square = GridNd::new(vec![grid(0.0, 1.0, 100), grid(0.0, 1.0, 100)]).unwrap();
    let saddle: fn(&[f64]) -> f64 = |x| x[0] * x[0] - x[1] * x[1];
    let product: fn(&[f64]) -> f64 = |x| x[0] * x[1];
    let mut report = Vec::new();
    let mut ok = true;
    for (name, f) in [("x^2-y^2", saddle), ("xy", product)] {
        let q = FieldNd::from_fn(square.clone(), f).unwrap();
        let mut sups = Vec::new();
        for order in [0.9, 0.99, 0.999] {
            let orders = OrderSet::uniform(2, order, MINUS_I).unwrap();
            let r = el_residual_2d(&parse("(qx^2 + qy^2)/2"), &q, &orders).map_err(|e| e.to_string())?;
            sups.push(r.sup_norm_where(|x| x.iter().all(|&c| (0.2..=0.8).contains(&c))));
        }
        ok &= sups[2] < 0.05 && sups[0] > sups[1] && sups[1] > sups[2];
        report.push(format!("{name}: {:.2e} > {:.2e} > {:.2e}", sups[0], sups[1], sups[2]));
    }
    check(ok, report.join("; "))
}

fn dimensional_consistency() -> Outcome {
    let e = |e: falva_core::Error| e.to_string();
    let orders1 = OrderSet::one_d(0.7, 0.4, Complex64::new(0.2, -0.7)).unwrap();
    let q1 = GridFunction::from_fn(grid(0.0, 1.0, 60), |x| x.sin() * x + 0.2).unwrap();
    let f1 = FieldNd::from_grid_function(&q1);
    let r1 = el_residual_1d_cresson(&parse("qdot^2/2 - q^2/2 + tau*q"), &q1, &orders1).map_err(e)?;
    let rn1 = el_residual_nd(&parse("qx1^2/2 - q^2/2 + x1*q"), &f1, &orders1).map_err(e)?;
    // the 1D form is stated with the opposite overall sign
    let same1 = r1.included == rn1.included
        && (0..r1.values.len()).all(|k| !r1.included[k] || r1.values[k] == -rn1.values[k])
        && r1.sup_norm.to_bits() == rn1.sup_norm.to_bits();

    let orders2 = OrderSet::two_d(0.8, 0.6, 0.7, 0.5, Complex64::new(-0.3, 0.4)).unwrap();
    let square = GridNd::new(vec![grid(0.0, 1.0, 24), grid(0.0, 2.0, 20)]).unwrap();
    let q2 = FieldNd::from_fn(square, |x| x[0].exp() * x[1] + x[0] * x[0]).unwrap();
    let r2 = el_residual_2d(&parse("(qx^2 + qy^2)/2 + x*y*q"), &q2, &orders2).map_err(e)?;
    let rn2 = el_residual_nd(&parse("(qx1^2 + qx2^2)/2 + x1*x2*q"), &q2, &orders2).map_err(e)?;
    let same2 = r2.included == rn2.included
        && (0..r2.values.len()).all(|k| !r2.included[k] || r2.values[k] == rn2.values[k])
        && r2.sup_norm.to_bits() == rn2.sup_norm.to_bits();

    let a1 = action_1d_cresson(&parse("qdot^2/2 - q^2/2 + tau*q"), &q1, &orders1).map_err(e)?;
    let an1 = action_nd(&parse("qx1^2/2 - q^2/2 + x1*q"), &f1, &orders1).map_err(e)?;
    let a2 = action_2d(&parse("(qx^2 + qy^2)/2 + x*y*q"), &q2, &orders2).map_err(e)?;
    let an2 = action_nd(&parse("(qx1^2 + qx2^2)/2 + x1*x2*q"), &q2, &orders2).map_err(e)?;
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / x.norm();
    let (d1, d2) = (rel(a1.value, an1.value), rel(a2.value, an2.value));
    check(
        same1 && same2 && d1 < 1e-13 && d2 < 1e-13,
        format!("residual 1D bitwise {same1}, 2D bitwise {same2}; action gaps {d1:.1e}, {d2:.1e}"),
    )
}

const VARS: [&str; 3] = ["qdot", "q", "tau"];

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => format!("{:.2}", rng.gen_range(0.1..2.5)),
            _ => VARS[rng.gen_range(0..3)].to_string(),
        };
    }
    match rng.gen_range(0..7) {
        0..=3 => {
            let op = ["+", "-", "*", "/", "^"][rng.gen_range(0..5)];
            let a = random_expr(rng, depth - 1);
            let b = if op == "^" { rng.gen_range(1..4).to_string() } else { random_expr(rng, depth - 1) };
            format!("({a}) {op} ({b})")
        }
        4 => format!("-({})", random_expr(rng, depth - 1)),
        _ => {
            let f = Func::ALL[rng.gen_range(0..Func::ALL.len())];
            format!("{}({})", f.name(), random_expr(rng, depth - 1))
        }
    }
}

fn ad_vs_differences() -> Outcome {
    const STEP: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(20260);
    let (mut checked, mut worst, mut tries) = (0, 0.0f64, 0);
    while checked < 200 {
        tries += 1;
        if tries > 100_000 {
            return Err(format!("only {checked} usable pairs generated"));
        }
        let src = random_expr(&mut rng, 4);
        let e = parse(&src);
        let Ok(bound) = e.bind_slots(&VARS) else { continue };
        let point = [rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0)];
        let slot = rng.gen_range(0..3);
        let (Ok(value), Ok(ad)) = (bound.value::<f64>(&point), bound.partial::<f64>(&point, slot)) else { continue };
        let (mut up, mut down) = (point, point);
        up[slot] += STEP;
        down[slot] -= STEP;
        let (Ok(fu), Ok(fd)) = (bound.value::<f64>(&up), bound.value::<f64>(&down)) else { continue };
        let diff = (fu - fd) / (2.0 * STEP);
        if ![value, ad, diff].iter().all(|v| v.is_finite() && v.abs() < 1e4) {
            continue;
        }
        worst = worst.max((ad - diff).abs() / (1.0 + ad.abs()));
        checked += 1;
    }
    check(worst < 1e-6, format!("{checked} pairs, worst {worst:.2e}"))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = dir.path().join("sweep.spec");
    std::fs::write(
        &spec,
        "kind = sweep\nof = minimize\nlagrangian = qdot^2/2 - q^2/2\nalpha = 0.3,0.5,0.7,0.9\n\
         domain = 0,1\nn = 200\nboundary = 0,1\n",
    )
    .map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for run in 0..3 {
        let out = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_falva"))
            .args(["sweep", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("run {run} exited with {status}"));
        }
        files.push(std::fs::read(out).map_err(|e| e.to_string())?);
    }
    check(
        files[0] == files[1] && files[1] == files[2] && !files[0].is_empty(),
        format!("3 runs, {} bytes each", files[0].len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("constant-action closed form", constant_action),
        ("RL power-law oracle", rl_power_law),
        ("Cresson identities", cresson_identities),
        ("classical limits", classical_limits),
        ("free-particle extremal", free_particle),
        ("minimizer vs shooting", minimizer_vs_shooting),
        ("2D classical-limit reduction", two_d_reduction),
        ("dimensional consistency", dimensional_consistency),
        ("AD correctness", ad_vs_differences),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
