//! Local `r`-averages over radius-`t` balls and the slice norm `(E_r^q)_t`.
//!
//! The ball `B(x, t)` is discretized as the set of cell offsets whose centers
//! lie within distance `t` (a [`BallStencil`]), and `|B(x, t)|` is taken as
//! `count · h^n`, so averages of constants are exactly one. The bracket
//!
//! ```text
//! A(x) = ( (1/count) Σ_{y ∈ x + stencil} |f(y)|^r )^{1/r}
//! ```
//!
//! is evaluated on the grid enlarged by `⌈t/h⌉` cells per side, which is where
//! it is supported; `f` is extended by zero outside its box. Because every
//! cell of `f` is covered by exactly `count` stencils, the slice norm with
//! `r = q` equals the `L^q` norm exactly.

pub(crate) mod kernel;
pub(crate) mod level;
pub mod reference;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{GridFunction, GridSpec};
use crate::lebesgue::pow_abs;
use kernel::{ball_means, norm_of_means, Region};
use level::{LevelAccumulator, LevelTable};

/// Relative slack on `|offset|² ≤ (t/h)²` so that radii that are exact
/// multiples of `h` keep their boundary cells despite rounding in `t/h`.
pub(crate) const MEMBERSHIP_SLACK: f64 = 1e-9;

/// `(t, r, q)` with `t > 0`, `1 < r < ∞`, `1 ≤ q ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSliceParams", into = "RawSliceParams")]
pub struct SliceParams {
    t: f64,
    r: f64,
    q: Exponent,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct RawSliceParams {
    t: f64,
    r: f64,
    q: Exponent,
}

impl TryFrom<RawSliceParams> for SliceParams {
    type Error = Error;

    fn try_from(raw: RawSliceParams) -> Result<Self> {
        SliceParams::new(raw.t, raw.r, raw.q)
    }
}

impl From<SliceParams> for RawSliceParams {
    fn from(p: SliceParams) -> Self {
        RawSliceParams { t: p.t, r: p.r, q: p.q }
    }
}

impl SliceParams {
    pub fn new(t: f64, r: f64, q: Exponent) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("ball radius t must be positive, got {t}")));
        }
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::InvalidParams(format!("local exponent r must lie in (1, ∞), got {r}")));
        }
        if q.value() < 1.0 {
            return Err(Error::InvalidParams(format!("global exponent q must be >= 1, got {q}")));
        }
        Ok(Self { t, r, q })
    }

    /// Convenience constructor for finite `q`.
    pub fn finite(t: f64, r: f64, q: f64) -> Result<Self> {
        Self::new(t, r, Exponent::new(q)?)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    /// `(t, r', q')`, the parameters of the Hölder-dual slice space.
    pub fn conjugate(&self) -> Result<Self> {
        let r = Exponent::new(self.r)?.conjugate()?.value();
        Self::new(self.t, r, self.q.conjugate()?)
    }

    /// `(t, s·r, s·q)`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.t, self.r * s, self.q.scaled(s)?)
    }
}

/// Cell offsets of a closed discrete ball, stored as rows `(dy, half_width)`:
/// the row `dy` holds the offsets `(dy, dx)` with `|dx| ≤ half_width`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallStencil {
    dim: usize,
    rows: Vec<(isize, isize)>,
    count: usize,
    reach: usize,
}

impl BallStencil {
    /// The stencil of `B(0, t)` on a lattice of spacing `h`.
    pub fn new(dim: usize, t: f64, h: f64) -> Self {
        let tc = t / h;
        let lim = tc * tc * (1.0 + MEMBERSHIP_SLACK);
        let w0 = lim.sqrt().floor() as isize;
        let rows: Vec<(isize, isize)> = if dim == 1 {
            vec![(0, w0)]
        } else {
            (-w0..=w0)
                .map(|dy| (dy, (lim - (dy * dy) as f64).sqrt().floor() as isize))
                .collect()
        };
        let count = rows.iter().map(|&(_, w)| (2 * w + 1) as usize).sum();
        let reach = ((tc * (1.0 - MEMBERSHIP_SLACK)).ceil().max(0.0) as usize).max(w0 as usize);
        Self { dim, rows, count, reach }
    }

    pub fn for_grid(grid: &GridSpec, t: f64) -> Self {
        Self::new(grid.dim(), t, grid.spacing())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(isize, isize)] {
        &self.rows
    }

    /// Number of cells in the ball; `|B(x, t)| = count · h^n`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// `⌈t/h⌉`, the enlargement applied to every grid the bracket lives on.
    pub fn reach(&self) -> usize {
        self.reach
    }

    /// All offsets as `[row, col]` pairs (row is always 0 in 1D).
    pub fn offsets(&self) -> Vec<[isize; 2]> {
        self.rows
            .iter()
            .flat_map(|&(dy, w)| (-w..=w).map(move |dx| [dy, dx]))
            .collect()
    }
}

fn power_data(f: &GridFunction, region: &Region, cells: impl IntoIterator<Item = usize>, r: f64) -> Vec<f64> {
    let g = f.grid();
    let mut data = vec![0.0; region.len()];
    for idx in cells {
        let (row, col) = g.row_col(idx);
        if let Some(li) = region.local(row as isize, col as isize) {
            data[li] = pow_abs(f.values()[idx], r);
        }
    }
    data
}

/// The local average `A(x)` on the grid enlarged by `⌈t/h⌉` cells per side.
pub fn ball_average_r(f: &GridFunction, sp: &SliceParams) -> GridFunction {
    let g = f.grid();
    let stencil = BallStencil::for_grid(g, sp.t);
    let region = Region::padded_grid(g, stencil.reach());
    let data = power_data(f, &region, f.support(), sp.r);
    let inv_r = 1.0 / sp.r;
    let values = ball_means(&region, &data, &stencil).into_iter().map(|m| m.powf(inv_r)).collect();
    GridFunction::from_raw(g.enlarged(stencil.reach()), values)
}

/// Slice norm of `f` restricted to `cells` (which must be nonzero cells of `f`).
pub(crate) fn slice_norm_of_cells(f: &GridFunction, cells: &[usize], sp: &SliceParams, stencil: &BallStencil) -> f64 {
    let Some(region) = Region::bounding(f.grid(), cells.iter().copied(), stencil.reach()) else {
        return 0.0;
    };
    let data = power_data(f, &region, cells.iter().copied(), sp.r);
    let means = ball_means(&region, &data, stencil);
    norm_of_means(&means, sp.r, sp.q, f.grid().cell_volume())
}

/// `‖f‖_{(E_r^q)_t}`: the `L^q` norm of [`ball_average_r`] over the enlarged
/// grid (the maximum for `q = ∞`).
pub fn slice_norm(f: &GridFunction, sp: &SliceParams) -> f64 {
    let stencil = BallStencil::for_grid(f.grid(), sp.t);
    let cells: Vec<usize> = f.support().collect();
    slice_norm_of_cells(f, &cells, sp, &stencil)
}

/// Nonzero cells of `f` grouped by equal `|f|`, in decreasing order.
pub(crate) fn level_groups(f: &GridFunction, cells: impl IntoIterator<Item = usize>) -> Vec<(f64, Vec<usize>)> {
    let mut sorted: Vec<(f64, usize)> = cells.into_iter().map(|i| (f.values()[i].abs(), i)).filter(|(v, _)| *v > 0.0).collect();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (v, i) in sorted {
        match groups.last_mut() {
            Some((lv, cells)) if *lv == v => cells.push(i),
            _ => groups.push((v, vec![i])),
        }
    }
    groups
}

/// Weak slice norm `sup_λ λ ‖1_{|f| > λ}‖_{(E_r^q)_t}`, realized as
/// `max_v v · ‖1_{|f| ≥ v}‖` over the distinct values of `|f|`.
pub fn weak_slice_norm(f: &GridFunction, sp: &SliceParams) -> f64 {
    let g = f.grid();
    let stencil = BallStencil::for_grid(g, sp.t);
    let Some(region) = Region::bounding(g, f.support(), stencil.reach()) else {
        return 0.0;
    };
    let table = LevelTable::new(&stencil, sp.r, sp.q, g.cell_volume());
    let mut acc = LevelAccumulator::new(&stencil, &table, region);
    let mut best: f64 = 0.0;
    for (v, cells) in level_groups(f, f.support()) {
        for idx in cells {
            let (row, col) = g.row_col(idx);
            acc.insert(row as isize, col as isize);
        }
        best = best.max(v * acc.norm());
    }
    best
}
