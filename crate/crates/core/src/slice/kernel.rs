//! Ball sums over rectangular patches via per-row prefix sums.

use super::BallStencil;
use crate::compensated::{PrefixSums, TwoSum};
use crate::exponent::Exponent;
use crate::grid::GridSpec;

/// A rectangle of cell indices on a grid's index lattice, possibly reaching
/// past the grid itself (cells out there are zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Region {
    pub row0: isize,
    pub col0: isize,
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    /// The whole grid padded by `pad` cells (rows are padded only in 2D).
    pub fn padded_grid(grid: &GridSpec, pad: usize) -> Self {
        let pad = pad as isize;
        let row_pad = if grid.dim() == 1 { 0 } else { pad };
        Self {
            row0: -row_pad,
            col0: -pad,
            rows: (grid.rows() as isize + 2 * row_pad) as usize,
            cols: (grid.cols() as isize + 2 * pad) as usize,
        }
    }

    /// Bounding box of `cells` padded by `pad`, or `None` when `cells` is empty.
    pub fn bounding(grid: &GridSpec, cells: impl IntoIterator<Item = usize>, pad: usize) -> Option<Self> {
        let mut it = cells.into_iter();
        let first = it.next()?;
        let (r, c) = grid.row_col(first);
        let (mut r0, mut r1, mut c0, mut c1) = (r, r, c, c);
        for idx in it {
            let (r, c) = grid.row_col(idx);
            r0 = r0.min(r);
            r1 = r1.max(r);
            c0 = c0.min(c);
            c1 = c1.max(c);
        }
        let pad = pad as isize;
        let row_pad = if grid.dim() == 1 { 0 } else { pad };
        Some(Self {
            row0: r0 as isize - row_pad,
            col0: c0 as isize - pad,
            rows: (r1 - r0) + 1 + 2 * row_pad as usize,
            cols: (c1 - c0) + 1 + 2 * pad as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    #[inline]
    pub fn local(&self, row: isize, col: isize) -> Option<usize> {
        let lr = row - self.row0;
        let lc = col - self.col0;
        if lr < 0 || lc < 0 || lr >= self.rows as isize || lc >= self.cols as isize {
            None
        } else {
            Some(lr as usize * self.cols + lc as usize)
        }
    }
}

/// Stencil means `(1/count) Σ_{offsets} data(x + offset)` at every cell of
/// `region`; `data` is laid out over the same region and is zero outside it.
pub(crate) fn ball_means(region: &Region, data: &[f64], stencil: &BallStencil) -> Vec<f64> {
    debug_assert_eq!(data.len(), region.len());
    let prefixes: Vec<PrefixSums> = data.chunks(region.cols).map(PrefixSums::new).collect();
    let inv = 1.0 / stencil.count() as f64;
    let mut out = Vec::with_capacity(region.len());
    for lr in 0..region.rows as isize {
        for lc in 0..region.cols as isize {
            let mut acc = 0.0;
            for &(dy, w) in stencil.rows() {
                let rr = lr + dy;
                if rr < 0 || rr >= region.rows as isize {
                    continue;
                }
                acc += prefixes[rr as usize].range(lc - w, lc + w + 1);
            }
            out.push(acc * inv);
        }
    }
    out
}

/// `‖mean^{1/r}‖_{L^q}` over the region, given the stencil means of `|f|^r`.
pub(crate) fn norm_of_means(means: &[f64], r: f64, q: Exponent, cell_volume: f64) -> f64 {
    if q.is_infinite() {
        let m = means.iter().fold(0.0f64, |m, &v| m.max(v));
        return m.powf(1.0 / r);
    }
    let q = q.value();
    let e = q / r;
    let mut acc = TwoSum::default();
    for &m in means {
        if m > 0.0 {
            acc.add(if e == 1.0 { m } else { m.powf(e) });
        }
    }
    (acc.value() * cell_volume).powf(1.0 / q)
}
