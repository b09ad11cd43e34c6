//! Weighted action functionals.
//!
//! * [`action_1d`]: `1/Gamma(alpha) int_a^t L(qdot, q, tau) (t - tau)^(alpha-1) dtau`
//! * [`action_1d_cresson`]: the same with `qdot` replaced by Cresson's derivative of `q`
//! * [`action_2d`], [`action_nd`]: tensor-product weights
//!   `prod_i (xi_i - x_i)^(alpha_i - 1) / Gamma(alpha_i)` over the box
//!   `[lower, observer]`, derivative slots fed by Cresson's operator along each axis.
//!
//! The observer time (corner) is always the upper end of the sample grid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exprdsl::{LagrangianExpr, SlotLagrangian};
use crate::fracops::{axis_cresson, OrderSet};
use crate::numcore::{check_order, gamma, product_weights, weighted_integral, FieldNd, GridFunction};
use crate::{Error, Result};

pub const SLOTS_1D: [&str; 3] = ["qdot", "q", "tau"];
pub const SLOTS_2D: [&str; 5] = ["qx", "qy", "q", "x", "y"];

/// Slot names `qx1..qxN, q, x1..xN`.
pub fn slots_nd(dim: usize) -> Vec<String> {
    let mut s: Vec<String> = (1..=dim).map(|i| format!("qx{i}")).collect();
    s.push("q".into());
    s.extend((1..=dim).map(|i| format!("x{i}")));
    s
}

/// Where the velocity samples of a 1D path come from.
#[derive(Debug, Clone, PartialEq)]
pub enum QdotSource {
    /// Exact derivative samples, one per node.
    Analytic(Vec<f64>),
    /// Central differences inside, second-order one-sided at the ends.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdotKind {
    Analytic,
    FiniteDifference,
    Cresson,
}

impl QdotKind {
    pub fn label(self) -> &'static str {
        match self {
            QdotKind::Analytic => "analytic",
            QdotKind::FiniteDifference => "finite-difference",
            QdotKind::Cresson => "cresson",
        }
    }
}

impl QdotSource {
    pub fn kind(&self) -> QdotKind {
        match self {
            QdotSource::Analytic(_) => QdotKind::Analytic,
            QdotSource::FiniteDifference => QdotKind::FiniteDifference,
        }
    }
}

/// Value of a weighted action plus how it was computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionValue {
    pub value: Complex64,
    /// Observer time per axis.
    pub observer: Vec<f64>,
    /// Weight orders per axis.
    pub alpha: Vec<f64>,
    /// Full order set for the Cresson variants.
    pub orders: Option<OrderSet>,
    pub n_per_axis: Vec<usize>,
    pub singular_nodes_excluded: usize,
    pub qdot: QdotKind,
}

/// Velocity samples of a real path.
pub fn qdot_samples(q: &GridFunction, source: &QdotSource) -> Result<Vec<f64>> {
    let n = q.grid().intervals();
    match source {
        QdotSource::Analytic(v) => {
            if v.len() != n + 1 {
                return Err(Error::Shape(format!("{} qdot samples for {} nodes", v.len(), n + 1)));
            }
            Ok(v.clone())
        }
        QdotSource::FiniteDifference => {
            let x = q.re();
            let h = q.grid().spacing();
            let mut d = Vec::with_capacity(n + 1);
            d.push((3.0 * (x[1] - x[0]) - (x[2] - x[1])) / (2.0 * h));
            d.extend(x.windows(3).map(|w| (w[2] - w[0]) / (2.0 * h)));
            d.push((3.0 * (x[n] - x[n - 1]) - (x[n - 1] - x[n - 2])) / (2.0 * h));
            Ok(d)
        }
    }
}

pub(crate) fn require_real(q: &GridFunction) -> Result<()> {
    if q.is_real() {
        Ok(())
    } else {
        Err(Error::Shape("this operation needs a real-valued path".into()))
    }
}

/// Fractional action `S^alpha[q](t)` with `t` the grid's upper bound.
pub fn action_1d(l: &LagrangianExpr, q: &GridFunction, alpha: f64, qdot: &QdotSource) -> Result<ActionValue> {
    check_order("alpha", alpha)?;
    require_real(q)?;
    let bound = l.bind_slots(&SLOTS_1D)?;
    let v = qdot_samples(q, qdot)?;
    let grid = *q.grid();
    let integrand = grid
        .nodes()
        .enumerate()
        .map(|(j, tau)| bound.value(&[v[j], q.value(j).re, tau]).map(|g| Complex64::new(g, 0.0)).map_err(Error::at(j)))
        .collect::<Result<Vec<_>>>()?;
    let g = GridFunction::new(grid, integrand)?;
    let value = weighted_integral(&g, alpha)? / gamma(alpha)?;
    Ok(ActionValue {
        value,
        observer: alloc::vec![grid.upper()],
        alpha: alloc::vec![alpha],
        orders: None,
        n_per_axis: alloc::vec![grid.intervals()],
        singular_nodes_excluded: 0,
        qdot: qdot.kind(),
    })
}

/// Action with Cresson's derivative in the velocity slot.
///
/// Nodes where the derivative is singular are dropped by shrinking the
/// integration range by one cell at that end.
pub fn action_1d_cresson(l: &LagrangianExpr, q: &GridFunction, orders: &OrderSet) -> Result<ActionValue> {
    if orders.dim() != 1 {
        return Err(Error::Shape(format!("1D action given a {}-axis order set", orders.dim())));
    }
    action_kernel(l, &SLOTS_1D, &FieldNd::from_grid_function(q), orders)
}

/// Double-weighted action over `[a_x, xi] x [a_y, lambda]`.
pub fn action_2d(l: &LagrangianExpr, q: &FieldNd, orders: &OrderSet) -> Result<ActionValue> {
    if q.grid().dim() != 2 {
        return Err(Error::Shape(format!("2D action given a {}-axis field", q.grid().dim())));
    }
    action_kernel(l, &SLOTS_2D, q, orders)
}

/// N-weighted action for `N <= 3`.
pub fn action_nd(l: &LagrangianExpr, q: &FieldNd, orders: &OrderSet) -> Result<ActionValue> {
    let names = slots_nd(q.grid().dim());
    let slots: Vec<&str> = names.iter().map(String::as_str).collect();
    action_kernel(l, &slots, q, orders)
}

pub(crate) fn check_dim(q: &FieldNd, orders: &OrderSet) -> Result<usize> {
    let dim = q.grid().dim();
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if orders.dim() != dim {
        return Err(Error::Shape(format!("order set has {} axes, field has {dim}", orders.dim())));
    }
    Ok(dim)
}

/// Slot vector `[derivatives..., q, coordinates...]` at one node.
pub(crate) fn slot_point(q: &FieldNd, derivs: &[FieldNd], flat: usize) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = derivs.iter().map(|d| d.values()[flat]).collect();
    p.push(q.values()[flat]);
    p.extend(q.grid().coords(flat).into_iter().map(|x| Complex64::new(x, 0.0)));
    p
}

fn action_kernel(l: &LagrangianExpr, slots: &[&str], q: &FieldNd, orders: &OrderSet) -> Result<ActionValue> {
    let dim = check_dim(q, orders)?;
    let bound: SlotLagrangian<'_> = l.bind_slots(slots)?;
    let grid = q.grid();
    let derivs = (0..dim).map(|i| axis_cresson(q, i, orders)).collect::<Result<Vec<_>>>()?;

    // shrink each axis by one cell at a face carrying singular nodes
    let mut ranges = Vec::with_capacity(dim);
    let mut weights = Vec::with_capacity(dim);
    for (i, d) in derivs.iter().enumerate() {
        let n = grid.axis(i).intervals();
        let face_singular =
            |face: usize| (0..grid.len()).any(|flat| d.is_singular(flat) && grid.index_of(flat)[i] == face);
        let lo = usize::from(face_singular(0));
        let hi = if face_singular(n) { n - 1 } else { n };
        weights.push(product_weights(grid.axis(i), lo, hi, orders.alpha(i))?);
        ranges.push((lo, hi));
    }

    let mut value = Complex64::new(0.0, 0.0);
    let mut included = 0usize;
    for flat in 0..grid.len() {
        let idx = grid.index_of(flat);
        if idx.iter().zip(&ranges).any(|(&j, &(lo, hi))| j < lo || j > hi) {
            continue;
        }
        included += 1;
        let w: f64 = idx.iter().zip(&ranges).zip(&weights).map(|((&j, &(lo, _)), wi)| wi[j - lo]).product();
        let g = bound.value(&slot_point(q, &derivs, flat)).map_err(Error::at(flat))?;
        value += g * w;
    }
    let norm: f64 = orders.alphas().iter().map(|&a| gamma(a)).collect::<Result<Vec<_>, _>>()?.iter().product();

    Ok(ActionValue {
        value: value / norm,
        observer: grid.upper(),
        alpha: orders.alphas().to_vec(),
        orders: Some(orders.clone()),
        n_per_axis: grid.axes().iter().map(|a| a.intervals()).collect(),
        singular_nodes_excluded: grid.len() - included,
        qdot: QdotKind::Cresson,
    })
}
