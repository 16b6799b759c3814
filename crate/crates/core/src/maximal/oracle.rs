//! Reference evaluator for the maximal operator.
//!
//! For every output cell the nonzero cells of `f` are binned by the smallest
//! ladder index whose ball reaches them; a running sum over the bins then
//! gives every ball sum at once. Ball counts come from binning all lattice
//! offsets the same way. The cost is `O(N_out · (N_f + J))`.

use super::{evaluation_padding, RadiusLadder};
use crate::compensated::TwoSum;
use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Largest 1D grid the guarded oracle accepts.
pub const ORACLE_LIMIT_1D: usize = 4096;
/// Largest cells-per-axis the guarded oracle accepts in 2D.
pub const ORACLE_LIMIT_2D: usize = 128;

fn ladder_counts(dim: usize, jmax: usize) -> Vec<f64> {
    let reach = jmax as i64 + 1;
    let mut bins = vec![0u64; jmax + 1];
    let rows = if dim == 1 { 0..=0 } else { -reach..=reach };
    for dy in rows {
        for dx in -reach..=reach {
            let j = RadiusLadder::index_for((dy * dy + dx * dx) as u64);
            if j <= jmax {
                bins[j] += 1;
            }
        }
    }
    let mut acc = 0u64;
    bins.iter()
        .map(|b| {
            acc += b;
            acc as f64
        })
        .collect()
}

/// `Mf` at the listed cells of the evaluation grid, with no size guard.
pub fn hl_maximal_oracle_cells(f: &GridFunction, extension_factor: f64, t: f64, cells: &[usize]) -> Result<Vec<f64>> {
    let g = f.grid();
    let m = evaluation_padding(g, extension_factor, t)? as i64;
    let eval = g.enlarged(m as usize);
    let jmax = RadiusLadder::for_grid(&eval).max_index();
    let counts = ladder_counts(g.dim(), jmax);
    let nonzero: Vec<(i64, i64, f64)> = f
        .support()
        .map(|i| {
            let (r, c) = g.row_col(i);
            (r as i64, c as i64, f.values()[i].abs())
        })
        .collect();
    let mut bins = vec![0.0; jmax + 1];
    let mut out = Vec::with_capacity(cells.len());
    for &idx in cells {
        let (er, ec) = eval.row_col(idx);
        let r = if g.dim() == 2 { er as i64 - m } else { 0 };
        let c = ec as i64 - m;
        bins.iter_mut().for_each(|b| *b = 0.0);
        for &(yr, yc, v) in &nonzero {
            let d2 = ((yr - r) * (yr - r) + (yc - c) * (yc - c)) as u64;
            bins[RadiusLadder::index_for(d2)] += v;
        }
        let mut acc = TwoSum::default();
        let mut best: f64 = 0.0;
        for (bin, count) in bins.iter().zip(&counts) {
            acc.add(*bin);
            best = best.max(acc.value() / count);
        }
        out.push(best);
    }
    Ok(out)
}

/// `Mf` on the whole evaluation grid. Refuses grids above
/// [`ORACLE_LIMIT_1D`] cells in 1D or [`ORACLE_LIMIT_2D`] per axis in 2D.
pub fn hl_maximal_oracle(f: &GridFunction, extension_factor: f64, t: f64) -> Result<GridFunction> {
    let g = f.grid();
    let limit = if g.dim() == 1 { ORACLE_LIMIT_1D } else { ORACLE_LIMIT_2D };
    if g.cells_per_axis() > limit {
        return Err(Error::SizeGuard { dim: g.dim(), cells: g.cells_per_axis(), limit });
    }
    let eval = g.enlarged(evaluation_padding(g, extension_factor, t)?);
    let cells: Vec<usize> = (0..eval.len()).collect();
    let values = hl_maximal_oracle_cells(f, extension_factor, t, &cells)?;
    GridFunction::new(eval, values)
}
