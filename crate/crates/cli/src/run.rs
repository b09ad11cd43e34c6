//! Dispatch from a validated [`ProblemSpec`] to the numerical core and
//! rendering of the results as CSV.

use std::path::Path;

use falva_core::action::{action_1d, action_1d_cresson, action_2d, action_nd, qdot_samples, ActionValue, QdotSource};
use falva_core::euler::{
    direct_minimize, el_residual_1d, el_residual_1d_cresson, el_residual_2d, el_residual_nd, solve_el_bvp,
    solve_el_ivp, BoundaryData1D, ResidualField,
};
use falva_core::exprdsl::LagrangianExpr;
use falva_core::fracops::{axis_cresson, cresson, OrderSet};
use falva_core::numcore::{FieldNd, Grid1D, GridFunction, GridNd};
use falva_core::Complex64;

use crate::csv_out::{complex_cells, list, num, CsvTable};
use crate::fields::{read_field, SampledField};
use crate::spec::{coordinate_names, Kind, ProblemSpec};
use crate::CliError;

/// Rendered output plus a failure to report after the file is written
/// (a minimizer that ran out of iterations still produces its path).
#[derive(Debug)]
pub struct Outcome {
    pub csv: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(csv: String) -> Self {
        Self { csv, failure: None }
    }
}

pub fn run(spec: &ProblemSpec) -> Result<Outcome, CliError> {
    match spec.kind {
        Kind::Deriv => deriv(spec).map(Outcome::ok),
        Kind::Action => action(spec).map(Outcome::ok),
        Kind::Residual => residual(spec).map(Outcome::ok),
        Kind::SolveIvp => ivp(spec).map(Outcome::ok),
        Kind::SolveBvp => bvp(spec).map(Outcome::ok),
        Kind::Minimize => minimize(spec),
        Kind::Sweep => crate::sweep::sweep(spec).map(Outcome::ok),
    }
}

/// Runs `spec` and writes the CSV to `spec.out` (stdout when unset).
pub fn execute(spec: &ProblemSpec, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let outcome = run(spec)?;
    match &spec.out {
        Some(path) => write_file(path, &outcome.csv)?,
        None => match stdout.write_all(outcome.csv.as_bytes()).and_then(|()| stdout.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(CliError::Io { path: "<stdout>".into(), source: e });
            }
            _ => {}
        },
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn lagrangian(spec: &ProblemSpec) -> Result<&LagrangianExpr, CliError> {
    spec.lagrangian.as_ref().ok_or_else(|| CliError::validation("a lagrangian is required"))
}

fn single_alpha(spec: &ProblemSpec) -> Result<f64, CliError> {
    match spec.alpha.as_slice() {
        [a] => Ok(*a),
        _ => Err(CliError::validation(format!("expected a single alpha, got {}", spec.alpha.len()))),
    }
}

fn cells_per_axis(spec: &ProblemSpec, axis: usize) -> Result<usize, CliError> {
    match spec.n.as_slice() {
        [n] => Ok(*n),
        ns => ns.get(axis).copied().ok_or_else(|| CliError::validation("n is missing for an axis")),
    }
}

/// The path or field the problem is about: the input file, or the path
/// expression (default 0) sampled on the spec's grid.
pub fn problem_field(spec: &ProblemSpec) -> Result<SampledField, CliError> {
    if let Some(input) = &spec.input {
        let field = read_field(input, &spec.domain)?;
        if !spec.n.is_empty() {
            for (i, ax) in field.grid.axes().iter().enumerate() {
                let n = cells_per_axis(spec, i)?;
                if n != ax.intervals() {
                    return Err(CliError::validation(format!(
                        "n = {n} on axis {i} but {} has {} cells",
                        input.display(),
                        ax.intervals()
                    )));
                }
            }
        }
        return Ok(field);
    }
    let axes = spec
        .domain
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| Ok(Grid1D::new(lo, hi, cells_per_axis(spec, i)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let grid = GridNd::new(axes)?;
    let zero = LagrangianExpr::parse("0").expect("literal parses");
    let path = spec.path.as_ref().unwrap_or(&zero);
    let bound =
        path.bind_slots(coordinate_names(grid.dim())).map_err(|e| CliError::validation(format!("path: {e}")))?;
    let values = (0..grid.len())
        .map(|k| {
            let point: Vec<Complex64> = grid.coords(k).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
            bound.value(&point).map_err(|source| CliError::Core(falva_core::Error::Eval { node: k, source }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledField { grid, values })
}

fn as_line(field: &SampledField) -> Result<GridFunction, CliError> {
    Ok(GridFunction::new(*field.grid.axis(0), field.values.clone())?)
}

fn as_field(field: &SampledField) -> Result<FieldNd, CliError> {
    Ok(FieldNd::new(field.grid.clone(), field.values.clone())?)
}

/// Samples of the analytic `qdot` expression, or finite differences.
pub fn qdot_source(spec: &ProblemSpec, grid: &Grid1D) -> Result<QdotSource, CliError> {
    let Some(expr) = &spec.qdot else { return Ok(QdotSource::FiniteDifference) };
    let bound = expr.bind_slots(&["tau"]).map_err(|e| CliError::validation(format!("qdot: {e}")))?;
    let samples = grid
        .nodes()
        .enumerate()
        .map(|(j, tau)| {
            bound.value(&[tau]).map_err(|source| CliError::Core(falva_core::Error::Eval { node: j, source }))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(QdotSource::Analytic(samples))
}

fn header(kind: Kind, orders: Option<&OrderSet>) -> CsvTable {
    let mut extra = Vec::new();
    if let Some(o) = orders {
        extra.push(("order-pair", o.convention().label().to_string()));
    }
    CsvTable::new(kind.name(), &extra)
}

fn order_comments(t: &mut CsvTable, orders: &OrderSet) {
    t.comment("alpha", list(orders.alphas()))
        .comment("delta", list(orders.deltas()))
        .comment("gamma", format!("{};{}", num(orders.gamma().re), num(orders.gamma().im)));
}

fn coordinate_cells(grid: &GridNd, flat: usize) -> Vec<String> {
    grid.coords(flat).into_iter().map(num).collect()
}

fn deriv(spec: &ProblemSpec) -> Result<String, CliError> {
    let field = problem_field(spec)?;
    let dim = field.grid.dim();
    let orders = spec.orders(dim)?;
    let mut t = header(Kind::Deriv, Some(&orders));
    order_comments(&mut t, &orders);
    let names = coordinate_names(dim);
    let mut cols: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    cols.extend(["f_re".into(), "f_im".into()]);
    if dim == 1 {
        cols.extend(["d_re".into(), "d_im".into()]);
    } else {
        for n in names {
            cols.extend([format!("d{n}_re"), format!("d{n}_im")]);
        }
    }
    cols.push("singular".into());
    t.columns(&cols.iter().map(String::as_str).collect::<Vec<_>>());

    let nd = as_field(&field)?;
    let derivs: Vec<FieldNd> = if dim == 1 {
        vec![FieldNd::from_grid_function(&cresson(&as_line(&field)?, &orders)?)]
    } else {
        (0..dim).map(|i| axis_cresson(&nd, i, &orders)).collect::<Result<_, _>>()?
    };
    for k in 0..field.grid.len() {
        let mut row = coordinate_cells(&field.grid, k);
        row.extend(complex_cells(field.values[k]));
        for d in &derivs {
            row.extend(complex_cells(d.values()[k]));
        }
        let singular = derivs.iter().any(|d| d.is_singular(k));
        row.push(u8::from(singular).to_string());
        t.row(&row);
    }
    Ok(t.into_string())
}

/// Action of the spec's Lagrangian along its path or field.
pub fn action_value(spec: &ProblemSpec) -> Result<(ActionValue, Option<OrderSet>), CliError> {
    let l = lagrangian(spec)?;
    let field = problem_field(spec)?;
    let dim = field.grid.dim();
    if !spec.is_cresson(dim) {
        let q = as_line(&field)?;
        let source = qdot_source(spec, q.grid())?;
        return Ok((action_1d(l, &q, single_alpha(spec)?, &source)?, None));
    }
    let orders = spec.orders(dim)?;
    let (_, indexed) = spec.slot_names(dim)?;
    let value = match (dim, indexed) {
        (1, false) => action_1d_cresson(l, &as_line(&field)?, &orders)?,
        (2, false) => action_2d(l, &as_field(&field)?, &orders)?,
        _ => action_nd(l, &as_field(&field)?, &orders)?,
    };
    Ok((value, Some(orders)))
}

fn action(spec: &ProblemSpec) -> Result<String, CliError> {
    let (value, orders) = action_value(spec)?;
    let mut t = header(Kind::Action, orders.as_ref());
    t.comment("observer", list(&value.observer))
        .comment("n", value.n_per_axis.iter().map(usize::to_string).collect::<Vec<_>>().join(";"));
    match &orders {
        Some(o) => order_comments(&mut t, o),
        None => {
            t.comment("alpha", list(&value.alpha));
        }
    }
    t.columns(&["value_re", "value_im", "singular_nodes_excluded", "qdot"]);
    let [re, im] = complex_cells(value.value);
    t.row(&[re, im, value.singular_nodes_excluded.to_string(), value.qdot.label().to_string()]);
    Ok(t.into_string())
}

/// Euler-Lagrange residual of the spec's path or field.
pub fn residual_field(spec: &ProblemSpec) -> Result<(ResidualField, Option<OrderSet>), CliError> {
    let l = lagrangian(spec)?;
    let field = problem_field(spec)?;
    let dim = field.grid.dim();
    if !spec.is_cresson(dim) {
        let q = as_line(&field)?;
        let source = qdot_source(spec, q.grid())?;
        return Ok((el_residual_1d(l, &q, single_alpha(spec)?, &source)?, None));
    }
    let orders = spec.orders(dim)?;
    let (_, indexed) = spec.slot_names(dim)?;
    let r = match (dim, indexed) {
        (1, false) => el_residual_1d_cresson(l, &as_line(&field)?, &orders)?,
        (2, false) => el_residual_2d(l, &as_field(&field)?, &orders)?,
        _ => el_residual_nd(l, &as_field(&field)?, &orders)?,
    };
    Ok((r, Some(orders)))
}

fn residual(spec: &ProblemSpec) -> Result<String, CliError> {
    let (r, orders) = residual_field(spec)?;
    let mut t = header(Kind::Residual, orders.as_ref());
    match &orders {
        Some(o) => order_comments(&mut t, o),
        None => {
            t.comment("alpha", list(&spec.alpha));
        }
    }
    t.comment("sup_norm", num(r.sup_norm))
        .comment("epsilon_margin", list(&r.epsilon_margin))
        .comment("included_nodes", r.included_count().to_string());
    let mut cols: Vec<&str> = coordinate_names(r.grid.dim()).to_vec();
    cols.extend(["residual_re", "residual_im", "included"]);
    t.columns(&cols);
    for k in 0..r.values.len() {
        let mut row = coordinate_cells(&r.grid, k);
        row.extend(complex_cells(r.values[k]));
        row.push(u8::from(r.included[k]).to_string());
        t.row(&row);
    }
    Ok(t.into_string())
}

fn one_axis(spec: &ProblemSpec) -> Result<(f64, f64, usize), CliError> {
    match spec.domain.as_slice() {
        [(a, t)] => Ok((*a, *t, cells_per_axis(spec, 0)?)),
        _ => Err(CliError::validation(format!("{} needs exactly one domain axis", spec.kind))),
    }
}

fn boundary(spec: &ProblemSpec) -> Result<(BoundaryData1D, usize), CliError> {
    let (a, t, n) = one_axis(spec)?;
    let (qa, qb) = spec.boundary.ok_or_else(|| CliError::validation("boundary=QA,QB is required"))?;
    Ok((BoundaryData1D::new(a, t, qa, qb)?, n))
}

fn path_rows(t: &mut CsvTable, q: &GridFunction, qdot: Option<&GridFunction>) {
    for (j, tau) in q.grid().nodes().enumerate() {
        let mut row = vec![num(tau), num(q.value(j).re)];
        if let Some(v) = qdot {
            row.push(num(v.value(j).re));
        }
        t.row(&row);
    }
}

pub fn ivp_solution(spec: &ProblemSpec) -> Result<falva_core::euler::IvpSolution, CliError> {
    let (a, t, n) = one_axis(spec)?;
    let (q0, v0) = match (spec.q0, spec.v0) {
        (Some(q0), Some(v0)) => (q0, v0),
        _ => return Err(CliError::validation("solve-ivp needs q0 and v0")),
    };
    Ok(solve_el_ivp(lagrangian(spec)?, a, t, q0, v0, single_alpha(spec)?, n)?)
}

fn ivp(spec: &ProblemSpec) -> Result<String, CliError> {
    let sol = ivp_solution(spec)?;
    let mut t = header(Kind::SolveIvp, None);
    t.comment("alpha", num(single_alpha(spec)?))
        .comment("observer", num(sol.observer))
        .comment("epsilon", num(sol.epsilon));
    t.columns(&["tau", "q", "qdot"]);
    path_rows(&mut t, &sol.q, Some(&sol.qdot));
    Ok(t.into_string())
}

pub fn bvp_solution(spec: &ProblemSpec) -> Result<falva_core::euler::BvpSolution, CliError> {
    let (bd, n) = boundary(spec)?;
    Ok(solve_el_bvp(lagrangian(spec)?, &bd, single_alpha(spec)?, n)?)
}

fn bvp(spec: &ProblemSpec) -> Result<String, CliError> {
    let sol = bvp_solution(spec)?;
    let mut t = header(Kind::SolveBvp, None);
    t.comment("alpha", num(single_alpha(spec)?))
        .comment("observer", num(sol.observer))
        .comment("epsilon", num(sol.epsilon))
        .comment("shooting_slope", num(sol.slope))
        .comment("endpoint_defect", num(sol.endpoint_defect));
    t.columns(&["tau", "q", "qdot"]);
    path_rows(&mut t, &sol.q, Some(&sol.qdot));
    Ok(t.into_string())
}

pub fn minimizer(spec: &ProblemSpec) -> Result<falva_core::euler::MinimizeResult, CliError> {
    let (bd, n) = boundary(spec)?;
    Ok(direct_minimize(lagrangian(spec)?, &bd, single_alpha(spec)?, n)?)
}

fn minimize(spec: &ProblemSpec) -> Result<Outcome, CliError> {
    let m = minimizer(spec)?;
    let mut t = header(Kind::Minimize, None);
    t.comment("alpha", num(single_alpha(spec)?))
        .comment("action", num(m.action))
        .comment("iterations", m.iterations.to_string())
        .comment("gradient_norm", num(m.gradient_norm))
        .comment("converged", m.converged.to_string());
    t.columns(&["tau", "q"]);
    path_rows(&mut t, &m.q, None);
    let failure =
        (!m.converged).then_some(CliError::NotConverged { iterations: m.iterations, gradient_norm: m.gradient_norm });
    Ok(Outcome { csv: t.into_string(), failure })
}

/// Unweighted trapezoidal action `int_a^t L(qdot, q, tau) dtau` along the
/// spec's 1D path, with the classical derivative.
pub fn classical_action(spec: &ProblemSpec) -> Result<Complex64, CliError> {
    let l = lagrangian(spec)?;
    let field = problem_field(spec)?;
    if field.grid.dim() != 1 {
        return Err(CliError::validation("classical action reference is 1D only"));
    }
    let q = as_line(&field)?;
    let grid = *q.grid();
    let qdot = match qdot_source(spec, &grid)? {
        QdotSource::Analytic(v) => v,
        fd => qdot_samples(&q, &fd)?,
    };
    let bound = l.bind_slots(&falva_core::action::SLOTS_1D).map_err(falva_core::Error::from)?;
    let h = grid.spacing();
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, tau) in grid.nodes().enumerate() {
        let point = [Complex64::new(qdot[j], 0.0), q.value(j), Complex64::new(tau, 0.0)];
        let v = bound.value(&point).map_err(|source| CliError::Core(falva_core::Error::Eval { node: j, source }))?;
        let w = if j == 0 || j == grid.intervals() { 0.5 * h } else { h };
        sum += v * w;
    }
    Ok(sum)
}
