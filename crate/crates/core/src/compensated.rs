//! Double-word accumulation for prefix sums.
//!
//! Range sums taken as differences of plain `f64` prefix sums lose accuracy
//! relative to the running total. Carrying the rounding error of every
//! partial sum in a second word keeps each range sum accurate relative to the
//! range itself.

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct TwoSum {
    hi: f64,
    lo: f64,
}

impl TwoSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Prefix sums `P[i] = x[0] + .. + x[i-1]` stored as (hi, lo) pairs.
#[derive(Clone, Debug)]
pub(crate) struct PrefixSums {
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl PrefixSums {
    pub(crate) fn new(values: &[f64]) -> Self {
        let mut hi = Vec::with_capacity(values.len() + 1);
        let mut lo = Vec::with_capacity(values.len() + 1);
        let mut acc = TwoSum::default();
        hi.push(0.0);
        lo.push(0.0);
        for &v in values {
            acc.add(v);
            hi.push(acc.hi);
            lo.push(acc.lo);
        }
        Self { hi, lo }
    }

    pub(crate) fn len(&self) -> usize {
        self.hi.len() - 1
    }

    /// Sum of `x[a..b]`; bounds are clamped to the stored range.
    #[inline]
    pub(crate) fn range(&self, a: isize, b: isize) -> f64 {
        let n = self.len() as isize;
        let a = a.clamp(0, n) as usize;
        let b = b.clamp(0, n) as usize;
        if b <= a {
            return 0.0;
        }
        (self.hi[b] - self.hi[a]) + (self.lo[b] - self.lo[a])
    }
}
