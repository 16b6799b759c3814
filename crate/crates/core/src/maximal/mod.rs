//! Centered Hardy–Littlewood maximal operator on the grid.
//!
//! The supremum over radii runs over the ladder `r_j = (j + 1/2) h`. An
//! integer cell offset `d` lies in the ball of index `j` iff
//! `|d|² ≤ j² + j`, so every distinct discrete ball appears once and the
//! `j = 0` ball is the center cell alone. Averages divide by the full
//! lattice count of the ball, with `f` extended by zero outside its box.
//!
//! `Mf` is evaluated on the grid enlarged to half-width about
//! `extension_factor · L + t`, which keeps the annuli just past the support
//! of `f` and the slice stencils of those cells.

mod estimate;
mod oracle;
mod sweep;

pub use estimate::{estimate_operator_norm, weak_type_ratio, OperatorEstimate, WeakMode};
pub use oracle::{hl_maximal_oracle, hl_maximal_oracle_cells, ORACLE_LIMIT_1D, ORACLE_LIMIT_2D};
pub use sweep::{run_sweep, SweepConfig, SweepCorpus, SweepReport, SweepRow, SWEEP_HEADER};

use crate::compensated::{PrefixSums, TwoSum};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

/// Default `extension_factor`.
pub const DEFAULT_EXTENSION: f64 = 2.0;

/// `⌊√v⌋` for integers.
pub(crate) fn isqrt(v: u64) -> u64 {
    let mut s = (v as f64).sqrt() as u64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

/// Radii `r_j = (j + 1/2) h` for `j = 0..=J` with their lattice counts.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusLadder {
    dim: usize,
    spacing: f64,
    counts: Vec<u64>,
}

impl RadiusLadder {
    pub fn new(dim: usize, spacing: f64, max_index: usize) -> Self {
        let counts = (0..=max_index as u64)
            .map(|j| {
                if dim == 1 {
                    2 * j + 1
                } else {
                    let t = j * j + j;
                    (0..=j).map(|dy| 2 * isqrt(t - dy * dy) + 1).sum::<u64>() * 2 - (2 * j + 1)
                }
            })
            .collect();
        Self { dim, spacing, counts }
    }

    /// The ladder whose largest ball centered anywhere in `eval` covers all
    /// of `eval`.
    pub fn for_grid(eval: &GridSpec) -> Self {
        let side = eval.cells_per_axis() as u64 - 1;
        let diam2 = eval.dim() as u64 * side * side;
        let mut j = isqrt(diam2);
        while j > 0 && (j - 1) * j >= diam2 {
            j -= 1;
        }
        while j * j + j < diam2 {
            j += 1;
        }
        Self::new(eval.dim(), eval.spacing(), j as usize)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_index(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.spacing
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.radius(j)).collect()
    }

    /// Number of lattice cells in ball `j`.
    pub fn count(&self, j: usize) -> u64 {
        self.counts[j]
    }

    /// Largest `|d|²` (in cells) inside ball `j`.
    pub fn threshold(j: usize) -> u64 {
        let j = j as u64;
        j * j + j
    }

    /// Smallest `j` whose ball contains offsets with `|d|² = d2`.
    pub fn index_for(d2: u64) -> usize {
        let mut j = ((((4 * d2 + 1) as f64).sqrt() - 1.0) / 2.0).max(0.0) as u64;
        while j * j + j < d2 {
            j += 1;
        }
        while j > 0 && (j - 1) * j >= d2 {
            j -= 1;
        }
        j as usize
    }
}

/// Cells added per side to form the evaluation grid.
pub fn evaluation_padding(grid: &GridSpec, extension_factor: f64, t: f64) -> Result<usize> {
    if !(extension_factor >= 1.0 && extension_factor.is_finite()) {
        return Err(Error::InvalidParams(format!("extension factor must be >= 1, got {extension_factor}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("padding radius must be >= 0, got {t}")));
    }
    let extra = ((extension_factor - 1.0) * grid.half_width() + t) / grid.spacing();
    Ok((extra * (1.0 - 1e-12)).ceil() as usize)
}

/// Grid on which `Mf` is evaluated: half-width `extension_factor · L + t`
/// rounded up to whole cells.
pub fn evaluation_grid(grid: &GridSpec, extension_factor: f64, t: f64) -> Result<GridSpec> {
    Ok(grid.enlarged(evaluation_padding(grid, extension_factor, t)?))
}

/// Nonzero bounding box of `f` in its own (row, col) coordinates, inclusive.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bounds {
    pub r0: i64,
    pub r1: i64,
    pub c0: i64,
    pub c1: i64,
}

pub(crate) fn nonzero_bounds(f: &GridFunction) -> Option<Bounds> {
    let g = f.grid();
    f.support().fold(None, |acc, i| {
        let (r, c) = g.row_col(i);
        let (r, c) = (r as i64, c as i64);
        Some(match acc {
            None => Bounds { r0: r, r1: r, c0: c, c1: c },
            Some(b) => Bounds { r0: b.r0.min(r), r1: b.r1.max(r), c0: b.c0.min(c), c1: b.c1.max(c) },
        })
    })
}

fn axis_gap(x: i64, lo: i64, hi: i64) -> (u64, u64) {
    let near = if x < lo { lo - x } else if x > hi { x - hi } else { 0 };
    let far = (x - lo).abs().max((x - hi).abs());
    (near as u64, far as u64)
}

/// `Mf` on [`evaluation_grid`], using row prefix sums and branch-and-bound
/// over the ladder: on `[a, b]` no average exceeds `S(b) / count(a)`
/// because the sums `S` and the counts both increase with `j`.
pub fn hl_maximal(f: &GridFunction, extension_factor: f64, t: f64) -> Result<GridFunction> {
    let g = f.grid();
    let m = evaluation_padding(g, extension_factor, t)?;
    let eval = g.enlarged(m);
    let ladder = RadiusLadder::for_grid(&eval);
    let mut out = vec![0.0; eval.len()];
    let Some(b) = nonzero_bounds(f) else {
        return Ok(GridFunction::from_raw(eval, out));
    };
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let cols = g.cols();
    let rows: Vec<PrefixSums> =
        (b.r0..=b.r1).map(|r| PrefixSums::new(&abs[r as usize * cols..(r as usize + 1) * cols])).collect();
    let two_d = g.dim() == 2;
    let shift = m as i64;
    let jmax = ladder.max_index();
    let mut stack: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, slot) in out.iter_mut().enumerate() {
        let (er, ec) = eval.row_col(idx);
        let r = if two_d { er as i64 - shift } else { 0 };
        let c = ec as i64 - shift;
        let (cn, cf) = axis_gap(c, b.c0, b.c1);
        let (rn, rf) = if two_d { axis_gap(r, b.r0, b.r1) } else { (0, 0) };
        let jlo = RadiusLadder::index_for(rn * rn + cn * cn);
        let jhi = RadiusLadder::index_for(rf * rf + cf * cf).min(jmax);
        let sum = |j: usize| -> f64 {
            if j == 0 {
                let inside = r >= b.r0 && r <= b.r1 && c >= b.c0 && c <= b.c1;
                return if inside { abs[r as usize * cols + c as usize] } else { 0.0 };
            }
            let tj = RadiusLadder::threshold(j);
            let ji = j as i64;
            let mut acc = TwoSum::default();
            for dy in (-ji).max(b.r0 - r)..=ji.min(b.r1 - r) {
                let w = isqrt(tj - (dy * dy) as u64) as i64;
                let lo = (c - w).max(b.c0);
                let hi = (c + w).min(b.c1);
                if lo <= hi {
                    acc.add(rows[(r + dy - b.r0) as usize].range(lo as isize, hi as isize + 1));
                }
            }
            acc.value()
        };
        let avg = |s: f64, j: usize| s / ladder.count(j) as f64;
        let s_lo = sum(jlo);
        let mut best = avg(s_lo, jlo);
        if jhi > jlo {
            let s_hi = sum(jhi);
            best = best.max(avg(s_hi, jhi));
            stack.clear();
            stack.push((jlo, jhi, s_hi));
            while let Some((a, bb, s_b)) = stack.pop() {
                if bb - a <= 1 || avg(s_b, a + 1) <= best {
                    continue;
                }
                let mid = a + (bb - a) / 2;
                let s_m = sum(mid);
                best = best.max(avg(s_m, mid));
                stack.push((mid, bb, s_b));
                stack.push((a, mid, s_m));
            }
        }
        *slot = best;
    }
    Ok(GridFunction::from_raw(eval, out))
}
