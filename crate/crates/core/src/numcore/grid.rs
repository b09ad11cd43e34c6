use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::NumError;

/// Uniform grid `tau_j = a + j (t - a) / n`, `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    t: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(a: f64, t: f64, n: usize) -> Result<Self, NumError> {
        if !a.is_finite() || !t.is_finite() {
            return Err(NumError::InvalidGrid(format!("non-finite bounds [{a}, {t}]")));
        }
        if t <= a {
            return Err(NumError::InvalidGrid(format!("upper bound {t} must exceed lower bound {a}")));
        }
        if n < 2 {
            return Err(NumError::InvalidGrid(format!("need at least 2 intervals, got {n}")));
        }
        Ok(Self { a, t, n })
    }

    /// Builds a grid from explicit node coordinates, rejecting non-uniform
    /// spacing (relative tolerance 1e-9 of the mean spacing).
    pub fn from_nodes(nodes: &[f64]) -> Result<Self, NumError> {
        if nodes.len() < 3 {
            return Err(NumError::InvalidGrid(format!("need at least 3 nodes, got {}", nodes.len())));
        }
        let n = nodes.len() - 1;
        let grid = Self::new(nodes[0], nodes[n], n)?;
        let h = grid.spacing();
        for (j, &x) in nodes.iter().enumerate() {
            if (x - grid.node(j)).abs() > 1e-9 * h {
                return Err(NumError::InvalidGrid(format!(
                    "non-uniform grid: node {j} at {x}, expected {}",
                    grid.node(j)
                )));
            }
        }
        Ok(grid)
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.t
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.n
    }

    /// Number of nodes, `intervals() + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.t - self.a) / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.n {
            self.t
        } else {
            self.a + (self.t - self.a) * (j as f64) / (self.n as f64)
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |j| self.node(j))
    }

    /// The sub-grid spanning nodes `lo..=hi`.
    pub fn sub(&self, lo: usize, hi: usize) -> Result<Self, NumError> {
        if hi > self.n || lo >= hi {
            return Err(NumError::InvalidGrid(format!("bad node range {lo}..={hi}")));
        }
        Self::new(self.node(lo), self.node(hi), hi - lo)
    }
}

/// Complex samples of a path on a [`Grid1D`], one per node.
///
/// Values are finite except at an endpoint explicitly flagged singular by
/// the operation that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    singular_lower: bool,
    singular_upper: bool,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self, NumError> {
        if values.len() != grid.len() {
            return Err(NumError::InvalidGrid(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(NumError::Domain(format!("non-finite sample at node {j}")));
        }
        Ok(Self { grid, values, singular_lower: false, singular_upper: false })
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self, NumError> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self, NumError> {
        Self::new(grid, grid.nodes().map(|x| Complex64::new(f(x), 0.0)).collect())
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
            singular_lower: false,
            singular_upper: false,
        }
    }

    /// Wraps operator output whose flagged endpoints hold non-finite placeholders.
    pub(crate) fn with_flags(grid: Grid1D, values: Vec<Complex64>, singular_lower: bool, singular_upper: bool) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, singular_lower, singular_upper }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn value(&self, j: usize) -> Complex64 {
        self.values[j]
    }

    /// Real parts of the samples.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn singular_lower(&self) -> bool {
        self.singular_lower
    }

    pub fn singular_upper(&self) -> bool {
        self.singular_upper
    }

    pub fn is_singular(&self, j: usize) -> bool {
        (j == 0 && self.singular_lower) || (j == self.grid.intervals() && self.singular_upper)
    }

    /// Samples in reverse order on the same interval, i.e. `f(a + t - theta)`.
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { grid: self.grid, values, singular_lower: self.singular_upper, singular_upper: self.singular_lower }
    }
}

/// Rectangular product of uniform grids; the last axis varies fastest in
/// flat storage.
#[derive(Debug, Clone, PartialEq)]
pub struct GridNd {
    axes: Vec<Grid1D>,
}

impl GridNd {
    pub fn new(axes: Vec<Grid1D>) -> Result<Self, NumError> {
        if axes.is_empty() {
            return Err(NumError::InvalidGrid("a grid needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Grid1D {
        &self.axes[i]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Grid1D::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Grid1D::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lower(&self) -> Vec<f64> {
        self.axes.iter().map(Grid1D::lower).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.axes.iter().map(Grid1D::upper).collect()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(Grid1D::len).product()
    }

    /// Multi-index of a flat position.
    pub fn index_of(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = alloc::vec![0; self.dim()];
        for (i, ax) in self.axes.iter().enumerate().rev() {
            idx[i] = flat % ax.len();
            flat /= ax.len();
        }
        idx
    }

    pub fn flat_of(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&j, ax)| acc * ax.len() + j)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.index_of(flat).iter().zip(&self.axes).map(|(&j, ax)| ax.node(j)).collect()
    }

    /// Flat offsets of the first node of every line parallel to `axis`.
    pub fn line_starts(&self, axis: usize) -> Vec<usize> {
        let stride = self.stride(axis);
        let len = self.axes[axis].len();
        (0..self.len()).filter(|&flat| (flat / stride).is_multiple_of(len)).collect()
    }
}

/// Complex field sampled on a [`GridNd`] with a per-node singular flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldNd {
    grid: GridNd,
    values: Vec<Complex64>,
    singular: Vec<bool>,
}

impl FieldNd {
    pub fn new(grid: GridNd, values: Vec<Complex64>) -> Result<Self, NumError> {
        if values.len() != grid.len() {
            return Err(NumError::InvalidGrid(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(NumError::Domain(format!("non-finite sample at flat node {j}")));
        }
        let singular = alloc::vec![false; values.len()];
        Ok(Self { grid, values, singular })
    }

    pub fn from_fn(grid: GridNd, f: impl Fn(&[f64]) -> f64) -> Result<Self, NumError> {
        let values = (0..grid.len()).map(|k| Complex64::new(f(&grid.coords(k)), 0.0)).collect();
        Self::new(grid, values)
    }

    pub(crate) fn with_flags(grid: GridNd, values: Vec<Complex64>, singular: Vec<bool>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        debug_assert_eq!(singular.len(), grid.len());
        Self { grid, values, singular }
    }

    pub fn grid(&self) -> &GridNd {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn singular(&self) -> &[bool] {
        &self.singular
    }

    pub fn is_singular(&self, flat: usize) -> bool {
        self.singular[flat]
    }

    pub fn from_grid_function(f: &GridFunction) -> Self {
        let grid = GridNd { axes: alloc::vec![*f.grid()] };
        let mut singular = alloc::vec![false; f.values.len()];
        singular[0] = f.singular_lower;
        singular[f.values.len() - 1] = f.singular_upper;
        Self { grid, values: f.values.clone(), singular }
    }

    /// Gathers the line through `start` parallel to `axis`.
    pub fn line(&self, axis: usize, start: usize) -> Vec<Complex64> {
        let stride = self.grid.stride(axis);
        (0..self.grid.axis(axis).len()).map(|j| self.values[start + j * stride]).collect()
    }
}
