//! Uniform cell-centered grids and the functions sampled on them.
//!
//! A grid covers the box `[-L, L]^n` (`n ∈ {1, 2}`) with `N = 2L/h` cells per
//! axis, `N` even, so no cell center ever sits at the origin. Values are stored
//! row-major: for `n = 2` the flat index is `row·N + col` where `row` indexes
//! the first coordinate.

mod spec;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig17;

pub use spec::{sample, FunctionSpec, Primitive, SpecDocument, Term, GAUSSIAN_CUTOFF, RANDOM_TILES};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridConfig", into = "GridConfig")]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    spacing: f64,
    cells: usize,
    margin: f64,
}

/// Serialized form of [`GridSpec`]: `{"n": 1, "L": 4.0, "h": 0.25}` with an
/// optional `"margin"`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct GridConfig {
    n: usize,
    #[serde(rename = "L")]
    half_width: f64,
    h: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    margin: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl TryFrom<GridConfig> for GridSpec {
    type Error = Error;

    fn try_from(c: GridConfig) -> Result<Self> {
        GridSpec::new(c.n, c.half_width, c.h)?.with_margin(c.margin)
    }
}

impl From<GridSpec> for GridConfig {
    fn from(g: GridSpec) -> Self {
        GridConfig { n: g.dim, half_width: g.half_width, h: g.spacing, margin: g.margin }
    }
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, spacing: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(half_width > 0.0 && half_width.is_finite() && spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "need positive finite L and h, got L = {half_width}, h = {spacing}"
            )));
        }
        let ratio = 2.0 * half_width / spacing;
        let cells = ratio.round();
        if (ratio - cells).abs() > 1e-9 * ratio.max(1.0) || cells < 2.0 {
            return Err(Error::InvalidGrid(format!(
                "2L/h = {ratio} must be a positive integer"
            )));
        }
        let cells = cells as usize;
        if !cells.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("2L/h = {cells} must be even")));
        }
        Ok(Self { dim, half_width, spacing, cells, margin: 0.0 })
    }

    /// Sets the distance sampled supports must keep from the box boundary.
    pub fn with_margin(mut self, margin: f64) -> Result<Self> {
        if !(margin >= 0.0 && margin < self.half_width) {
            return Err(Error::InvalidGrid(format!(
                "margin {margin} must lie in [0, L = {})",
                self.half_width
            )));
        }
        self.margin = margin;
        Ok(self)
    }

    /// The same spacing with `extra` cells added on every side.
    pub fn enlarged(&self, extra: usize) -> Self {
        Self {
            dim: self.dim,
            half_width: self.half_width + extra as f64 * self.spacing,
            spacing: self.spacing,
            cells: self.cells + 2 * extra,
            margin: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Radius within which sampled supports must stay.
    pub fn usable_radius(&self) -> f64 {
        self.half_width - self.margin
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn rows(&self) -> usize {
        if self.dim == 1 { 1 } else { self.cells }
    }

    pub fn cols(&self) -> usize {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h^n`, the measure of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Coordinate of the center of cell `i` along one axis.
    pub fn coord(&self, i: isize) -> f64 {
        (i as f64 + 0.5) * self.spacing - self.half_width
    }

    pub fn row_col(&self, idx: usize) -> (usize, usize) {
        (idx / self.cols(), idx % self.cols())
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols() + col
    }

    /// Cell center of flat index `idx`; the second component is unused in 1D.
    pub fn center(&self, idx: usize) -> [f64; 2] {
        let (row, col) = self.row_col(idx);
        if self.dim == 1 {
            [self.coord(col as isize), 0.0]
        } else {
            [self.coord(row as isize), self.coord(col as isize)]
        }
    }

    pub fn center_slice(&self, idx: usize) -> Vec<f64> {
        let c = self.center(idx);
        c[..self.dim].to_vec()
    }

    /// `|x|²` at the center of cell `idx`.
    pub fn radius_squared(&self, idx: usize) -> f64 {
        let c = self.center(idx);
        c[0] * c[0] + c[1] * c[1]
    }

    pub fn radius(&self, idx: usize) -> f64 {
        self.radius_squared(idx).sqrt()
    }

    /// Whether `other` is the same lattice (spacing, size, dimension).
    pub fn same_lattice(&self, other: &GridSpec) -> bool {
        self.dim == other.dim && self.cells == other.cells && self.spacing == other.spacing
    }
}

/// Real samples at the cell centers of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at cell {i}")));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    /// Samples a closure at every cell center (`x` has `grid.dim()` entries).
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.center(i)[..grid.dim()])).collect();
        Self::new(grid, values)
    }

    /// Indicator of the cells selected by `pred`.
    pub fn indicator(grid: GridSpec, pred: impl Fn(usize) -> bool) -> Self {
        let values = (0..grid.len()).map(|i| if pred(i) { 1.0 } else { 0.0 }).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Flat indices of the nonzero cells.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i)
    }

    /// Largest `|x|` over the nonzero cells, or `None` for the zero function.
    pub fn support_radius(&self) -> Option<f64> {
        self.support().map(|i| self.grid.radius(i)).reduce(f64::max)
    }

    /// Midpoint quadrature `Σ f·h^n`.
    pub fn integrate(&self) -> f64 {
        let mut acc = crate::compensated::TwoSum::default();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value() * self.grid.cell_volume()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `|f|^s`.
    pub fn abs_pow(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParams(format!("power must be positive, got {s}")));
        }
        Ok(self.map(|v| if s == 1.0 { v.abs() } else { v.abs().powf(s) }))
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    /// Keeps the cells selected by `pred`, zeroing the rest.
    pub fn restrict(&self, pred: impl Fn(usize) -> bool) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| if pred(i) { v } else { 0.0 })
            .collect();
        Self { grid: self.grid, values }
    }

    /// Shifts the samples by whole cells, filling with zeros.
    ///
    /// `offset` has one entry per dimension (row shift first in 2D). Every
    /// shifted nonzero cell must stay in the box and, when the grid carries a
    /// margin, within `|x| ≤ L - margin`.
    pub fn translate(&self, offset: &[i64]) -> Result<Self> {
        if offset.len() != self.grid.dim {
            return Err(Error::InvalidParams(format!(
                "offset has {} components for a {}-dimensional grid",
                offset.len(),
                self.grid.dim
            )));
        }
        let (dr, dc) = if self.grid.dim == 1 { (0, offset[0]) } else { (offset[0], offset[1]) };
        let rows = self.grid.rows() as i64;
        let cols = self.grid.cols() as i64;
        let limit = self.grid.usable_radius();
        let mut values = vec![0.0; self.values.len()];
        for idx in self.support() {
            let (r, c) = self.grid.row_col(idx);
            let (nr, nc) = (r as i64 + dr, c as i64 + dc);
            if nr < 0 || nr >= rows || nc < 0 || nc >= cols {
                return Err(Error::SupportViolation {
                    what: "translated support".into(),
                    radius: f64::INFINITY,
                    limit,
                });
            }
            let target = self.grid.index(nr as usize, nc as usize);
            if self.grid.margin > 0.0 {
                let radius = self.grid.radius(target);
                if radius > limit {
                    return Err(Error::SupportViolation {
                        what: "translated support".into(),
                        radius,
                        limit,
                    });
                }
            }
            values[target] = self.values[idx];
        }
        Ok(Self { grid: self.grid, values })
    }

    /// Writes one CSV row per cell: the center coordinates, then the value.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.grid.dim == 1 {
            w.write_record(["x", "value"])?;
        } else {
            w.write_record(["x1", "x2", "value"])?;
        }
        for (i, &v) in self.values.iter().enumerate() {
            let c = self.grid.center(i);
            if self.grid.dim == 1 {
                w.write_record([sig17(c[0]), sig17(v)])?;
            } else {
                w.write_record([sig17(c[0]), sig17(c[1]), sig17(v)])?;
            }
        }
        w.flush()
    }
}
