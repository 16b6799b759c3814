//! Direct evaluation of the slice bracket, used to pin the prefix-sum path.
//!
//! Each output cell enumerates the square of offsets around it and tests
//! membership by distance, with no prefix sums and no shared row structure.

use super::{SliceParams, MEMBERSHIP_SLACK};
use crate::grid::GridFunction;
use crate::lebesgue::lp_norm;

/// `A(x)` by direct summation, on the same enlarged grid as
/// [`super::ball_average_r`].
pub fn ball_average_r_naive(f: &GridFunction, sp: &SliceParams) -> GridFunction {
    let g = f.grid();
    let tc = sp.t() / g.spacing();
    let lim = tc * tc * (1.0 + MEMBERSHIP_SLACK);
    let w = lim.sqrt().floor() as isize;
    let reach = ((tc * (1.0 - MEMBERSHIP_SLACK)).ceil() as isize).max(w);
    let out = g.enlarged(reach as usize);
    let (rows, cols) = (g.rows() as isize, g.cols() as isize);
    let row_span = if g.dim() == 1 { 0 } else { w };
    let mut values = Vec::with_capacity(out.len());
    for oi in 0..out.len() {
        let (orow, ocol) = out.row_col(oi);
        let row = orow as isize - if g.dim() == 1 { 0 } else { reach };
        let col = ocol as isize - reach;
        let mut count = 0usize;
        let mut sum = 0.0;
        for a in -row_span..=row_span {
            for b in -w..=w {
                if ((a * a + b * b) as f64) > lim {
                    continue;
                }
                count += 1;
                let (yr, yc) = (row + a, col + b);
                if yr >= 0 && yr < rows && yc >= 0 && yc < cols {
                    let v = f.values()[g.index(yr as usize, yc as usize)];
                    sum += v.abs().powf(sp.r());
                }
            }
        }
        values.push((sum / count as f64).powf(1.0 / sp.r()));
    }
    GridFunction::new(out, values).expect("finite averages")
}

/// Slice norm through [`ball_average_r_naive`].
pub fn slice_norm_naive(f: &GridFunction, sp: &SliceParams) -> f64 {
    lp_norm(&ball_average_r_naive(f, sp), sp.q())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::slice::{ball_average_r, slice_norm};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn fast_path_matches_naive_1d(v in proptest::collection::vec(-4.0f64..4.0, 64), t in 0.05f64..1.0, r in 1.1f64..4.0) {
            let g = GridSpec::new(1, 2.0, 1.0 / 16.0).unwrap();
            let f = GridFunction::new(g, v).unwrap();
            let p = SliceParams::finite(t, r, 2.0).unwrap();
            let fast = ball_average_r(&f, &p);
            let slow = ball_average_r_naive(&f, &p);
            prop_assert_eq!(fast.grid(), slow.grid());
            for (a, b) in fast.values().iter().zip(slow.values()) {
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
            }
        }

        #[test]
        fn fast_path_matches_naive_2d(v in proptest::collection::vec(-4.0f64..4.0, 256), t in 0.05f64..0.5, r in 1.1f64..4.0, q in 1.0f64..5.0) {
            let g = GridSpec::new(2, 1.0, 0.125).unwrap();
            let f = GridFunction::new(g, v).unwrap();
            let p = SliceParams::finite(t, r, q).unwrap();
            let fast = ball_average_r(&f, &p);
            let slow = ball_average_r_naive(&f, &p);
            for (a, b) in fast.values().iter().zip(slow.values()) {
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
            }
            let (n1, n2) = (slice_norm(&f, &p), slice_norm_naive(&f, &p));
            prop_assert!((n1 - n2).abs() <= 1e-12 * n2);
        }
    }
}
