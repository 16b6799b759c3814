//! Incremental slice norms of growing level sets.
//!
//! The weak norms need `‖1_{|f| ≥ v}‖` for every distinct value `v` of `|f|`.
//! Inserting the cells in decreasing order of `|f|` and tracking, for each
//! output cell, how many level-set cells its stencil covers turns every
//! level into an `O(stencil)` update instead of a full re-evaluation.

use super::kernel::Region;
use super::BallStencil;
use crate::compensated::TwoSum;
use crate::exponent::Exponent;

/// Per-count contributions shared by all accumulators with the same params.
pub(crate) struct LevelTable {
    table: Vec<f64>,
    q: Exponent,
    cell_volume: f64,
}

impl LevelTable {
    pub fn new(stencil: &BallStencil, r: f64, q: Exponent, cell_volume: f64) -> Self {
        let count = stencil.count();
        let e = if q.is_infinite() { 1.0 / r } else { q.value() / r };
        let table = (0..=count).map(|c| (c as f64 / count as f64).powf(e)).collect();
        Self { table, q, cell_volume }
    }
}

pub(crate) struct LevelAccumulator<'a> {
    stencil: &'a BallStencil,
    table: &'a LevelTable,
    region: Region,
    counters: Vec<u32>,
    sum: TwoSum,
    max_count: u32,
}

impl<'a> LevelAccumulator<'a> {
    /// `region` must contain every cell within stencil reach of any cell that
    /// will be inserted.
    pub fn new(stencil: &'a BallStencil, table: &'a LevelTable, region: Region) -> Self {
        Self {
            stencil,
            table,
            region,
            counters: vec![0; region.len()],
            sum: TwoSum::default(),
            max_count: 0,
        }
    }

    pub fn insert(&mut self, row: isize, col: isize) {
        let finite = self.table.q.is_finite();
        for &(dy, w) in self.stencil.rows() {
            for dx in -w..=w {
                let Some(li) = self.region.local(row + dy, col + dx) else {
                    debug_assert!(false, "stencil left the accumulator region");
                    continue;
                };
                let old = self.counters[li];
                let new = old + 1;
                self.counters[li] = new;
                if finite {
                    self.sum.add(self.table.table[new as usize]);
                    self.sum.add(-self.table.table[old as usize]);
                } else if new > self.max_count {
                    self.max_count = new;
                }
            }
        }
    }

    /// Slice norm of the indicator of the inserted cells.
    pub fn norm(&self) -> f64 {
        if self.table.q.is_infinite() {
            self.table.table[self.max_count as usize]
        } else {
            (self.sum.value().max(0.0) * self.table.cell_volume).powf(1.0 / self.table.q.value())
        }
    }
}
