//! Central blocks and the dyadic block decomposition.
//!
//! A central `(α, q, r)`-block with index `k` is supported in `B(0, 2^k)`
//! and has slice norm at most `2^{-kα}` (normalization constant 1). The
//! canonical decomposition cuts `f` along the annuli `S_k` and normalizes
//! each piece, so `f = Σ λ_k b_k` with `λ_k = 2^{kα} ‖f 1_{S_k}‖`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::herz::{annulus_cells, herz_slice_norm, lp_combine, HerzParams, Variant};
use crate::slice::slice_norm;

/// Relative slack on the block norm bound.
pub const BLOCK_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CentralBlock {
    pub k: i32,
    pub data: GridFunction,
    pub measured_slice_norm: f64,
    pub restrict_type: bool,
}

impl CentralBlock {
    /// Wraps `data` after checking it is a block for index `k`.
    pub fn new(k: i32, data: GridFunction, hp: &HerzParams, restrict_type: bool) -> Result<Self> {
        let (ok, measured) = is_central_block(&data, k, hp, restrict_type);
        if !ok {
            return Err(Error::InvalidBlock {
                k,
                reason: block_failure(&data, k, hp, restrict_type, measured),
            });
        }
        Ok(Self { k, data, measured_slice_norm: measured, restrict_type })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEntry {
    pub k: i32,
    pub lambda: f64,
    pub block: CentralBlock,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub entries: Vec<BlockEntry>,
    pub params: HerzParams,
    /// Grid shared by every block; also the grid of an empty decomposition.
    pub grid: GridSpec,
}

/// Per-entry summary for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockSummary {
    pub k: i32,
    pub lambda: f64,
    pub block_slice_norm: f64,
}

impl BlockDecomposition {
    /// `(Σ |λ_k|^p)^{1/p}`.
    pub fn coefficient_norm(&self) -> f64 {
        lp_combine(self.entries.iter().map(|e| e.lambda), self.params.p)
    }

    pub fn summaries(&self) -> Vec<BlockSummary> {
        self.entries
            .iter()
            .map(|e| BlockSummary { k: e.k, lambda: e.lambda, block_slice_norm: e.block.measured_slice_norm })
            .collect()
    }
}

fn fits_in_ball(g: &GridFunction, k: i32) -> bool {
    let limit = (2.0 * k as f64).exp2();
    g.support().all(|i| g.grid().radius_squared(i) <= limit)
}

fn block_failure(g: &GridFunction, k: i32, hp: &HerzParams, restrict_type: bool, measured: f64) -> String {
    if restrict_type && k < 0 {
        format!("restrict-type blocks need k >= 0, got {k}")
    } else if !fits_in_ball(g, k) {
        format!("support leaves B(0, 2^{k})")
    } else {
        format!("slice norm {measured} exceeds 2^(-k alpha) = {}", (-(k as f64) * hp.alpha).exp2())
    }
}

/// Whether `g` is a central block of index `k` (support in `B(0, 2^k)`,
/// slice norm at most `2^{-kα}`), together with its measured slice norm.
pub fn is_central_block(g: &GridFunction, k: i32, hp: &HerzParams, restrict_type: bool) -> (bool, f64) {
    let measured = slice_norm(g, &hp.slice);
    let bound = (-(k as f64) * hp.alpha).exp2() * (1.0 + BLOCK_SLACK);
    let ok = !(restrict_type && k < 0) && fits_in_ball(g, k) && measured <= bound;
    (ok, measured)
}

/// Canonical decomposition along the annuli. For the non-homogeneous variant
/// the `k = 0` piece is all of `B_0` and the blocks are of restrict type.
pub fn decompose(f: &GridFunction, hp: &HerzParams) -> Result<BlockDecomposition> {
    hp.p.finite("decomposition exponent p")?;
    let restrict_type = hp.variant == Variant::NonHomogeneous;
    let mut entries = Vec::new();
    for (k, cells) in annulus_cells(f, hp.variant) {
        let piece = {
            let mut v = vec![0.0; f.grid().len()];
            for &i in &cells {
                v[i] = f.values()[i];
            }
            GridFunction::from_raw(*f.grid(), v)
        };
        let norm = slice_norm(&piece, &hp.slice);
        if norm == 0.0 {
            continue;
        }
        let lambda = (k as f64 * hp.alpha).exp2() * norm;
        let data = piece.scale(1.0 / lambda);
        let measured = slice_norm(&data, &hp.slice);
        entries.push(BlockEntry {
            k,
            lambda,
            block: CentralBlock { k, data, measured_slice_norm: measured, restrict_type },
        });
    }
    Ok(BlockDecomposition { entries, params: *hp, grid: *f.grid() })
}

/// `Σ λ_k b_k`.
pub fn reconstruct(dec: &BlockDecomposition) -> Result<GridFunction> {
    let mut out = vec![0.0; dec.grid.len()];
    for e in &dec.entries {
        if !e.block.data.grid().same_lattice(&dec.grid) || e.block.data.grid().len() != dec.grid.len() {
            return Err(Error::GridMismatch);
        }
        for i in e.block.data.support() {
            out[i] += e.lambda * e.block.data.values()[i];
        }
    }
    Ok(GridFunction::from_raw(dec.grid, out))
}

/// `(‖Σ λ_k b_k‖, (Σ |λ_k|^p)^{1/p})` for a decomposition made of valid blocks.
pub fn synthesis_bound_probe(dec: &BlockDecomposition) -> Result<(f64, f64)> {
    for e in &dec.entries {
        let (ok, measured) = is_central_block(&e.block.data, e.k, &dec.params, e.block.restrict_type);
        if !ok {
            return Err(Error::InvalidBlock {
                k: e.k,
                reason: block_failure(&e.block.data, e.k, &dec.params, e.block.restrict_type, measured),
            });
        }
    }
    let f = reconstruct(dec)?;
    Ok((herz_slice_norm(&f, &dec.params), dec.coefficient_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;
    use crate::herz::annulus_of;
    use crate::slice::SliceParams;
    use proptest::prelude::*;

    fn grid1() -> GridSpec {
        GridSpec::new(1, 16.0, 0.25).unwrap()
    }

    fn hp(alpha: f64, p: f64, variant: Variant) -> HerzParams {
        HerzParams::new(alpha, Exponent::new(p).unwrap(), SliceParams::finite(0.5, 2.0, 3.0).unwrap(), variant).unwrap()
    }

    fn annulus(g: GridSpec, k: i32) -> GridFunction {
        GridFunction::indicator(g, |i| annulus_of(g.radius_squared(i), Variant::Homogeneous) == k)
    }

    #[test]
    fn zero_function_is_every_block() {
        let z = GridFunction::zeros(grid1());
        let p = hp(0.5, 2.0, Variant::Homogeneous);
        for k in -3..5 {
            assert_eq!(is_central_block(&z, k, &p, false), (true, 0.0));
        }
        assert!(!is_central_block(&z, -1, &p, true).0);
        let dec = decompose(&z, &p).unwrap();
        assert!(dec.entries.is_empty());
        assert!(reconstruct(&dec).unwrap().is_zero());
        assert_eq!(synthesis_bound_probe(&dec).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn normalized_ball_is_a_block() {
        let g = grid1();
        let p = hp(0.7, 2.0, Variant::Homogeneous);
        let k = 2;
        let ball = GridFunction::indicator(g, |i| g.radius_squared(i) <= 16.0);
        let target = (-(k as f64) * 0.7).exp2();
        let b = ball.scale(target / slice_norm(&ball, &p.slice));
        let (ok, measured) = is_central_block(&b, k, &p, false);
        assert!(ok);
        assert!((measured - target).abs() <= 1e-14 * target);
        assert!(!is_central_block(&b.scale(1.01), k, &p, false).0);
        assert!(CentralBlock::new(k, b.scale(1.01), &p, false).is_err());
        assert!(CentralBlock::new(k, b, &p, true).is_ok());
    }

    #[test]
    fn support_violation() {
        let g = grid1();
        let p = hp(0.5, 1.0, Variant::Homogeneous);
        let s = annulus(g, 3).scale(1e-9);
        assert!(is_central_block(&s, 3, &p, false).0);
        assert!(!is_central_block(&s, 2, &p, false).0);
        match CentralBlock::new(2, s, &p, false) {
            Err(Error::InvalidBlock { k: 2, reason }) => assert!(reason.contains("support")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_annulus_decomposition() {
        let g = grid1();
        let alpha = 0.6;
        let p = hp(alpha, 1.5, Variant::Homogeneous);
        let f = annulus(g, 3);
        let dec = decompose(&f, &p).unwrap();
        assert_eq!(dec.entries.len(), 1);
        let e = &dec.entries[0];
        let expected = (3.0 * alpha).exp2() * slice_norm(&f, &p.slice);
        assert_eq!(e.k, 3);
        assert!((e.lambda - expected).abs() <= 1e-14 * expected);
        assert!((e.block.measured_slice_norm - (-3.0 * alpha).exp2()).abs() <= 1e-12 * e.block.measured_slice_norm);
        assert_eq!(reconstruct(&dec).unwrap(), f);
        assert!(decompose(&f, &p.with_p(Exponent::INFINITY)).is_err());
    }

    #[test]
    fn nonhomogeneous_blocks_are_restrict_type() {
        let g = grid1();
        let p = hp(0.5, 2.0, Variant::NonHomogeneous);
        let f = GridFunction::from_fn(g, |x| if x[0].abs() < 6.0 { 1.0 + x[0] } else { 0.0 }).unwrap();
        let dec = decompose(&f, &p).unwrap();
        assert_eq!(dec.entries.iter().map(|e| e.k).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(dec.entries.iter().all(|e| e.block.restrict_type));
        let (lhs, rhs) = synthesis_bound_probe(&dec).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn scaling_coefficients_scales_reconstruction() {
        let g = grid1();
        let p = hp(-0.3, 1.0, Variant::Homogeneous);
        let f = GridFunction::from_fn(g, |x| (x[0] * 0.9).sin()).unwrap();
        let mut dec = decompose(&f, &p).unwrap();
        let once = reconstruct(&dec).unwrap();
        for e in &mut dec.entries {
            e.lambda *= 2.0;
        }
        assert_eq!(reconstruct(&dec).unwrap(), once.scale(2.0));
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let g = grid1();
        let p = hp(0.5, 2.0, Variant::Homogeneous);
        let mut dec = decompose(&annulus(g, 2), &p).unwrap();
        dec.grid = GridSpec::new(1, 8.0, 0.25).unwrap();
        assert_eq!(reconstruct(&dec), Err(Error::GridMismatch));
    }

    #[test]
    fn split_annulus_probe() {
        let g = grid1();
        for (alpha, pv) in [(0.5, 1.0), (0.5, 2.0), (1.0, 2.0), (0.25, 3.0)] {
            let p = hp(alpha, pv, Variant::Homogeneous);
            let k = 2;
            let f = annulus(g, k);
            let norm = slice_norm(&f, &p.slice);
            for theta in [0.1, 0.5, 0.9] {
                let mut entries = Vec::new();
                for (kk, part) in [(k, theta), (k + 1, 1.0 - theta)] {
                    let lambda = (kk as f64 * alpha).exp2() * part * norm;
                    let data = f.scale(part / lambda);
                    entries.push(BlockEntry { k: kk, lambda, block: CentralBlock::new(kk, data, &p, false).unwrap() });
                }
                let dec = BlockDecomposition { entries, params: p, grid: g };
                let (lhs, rhs) = synthesis_bound_probe(&dec).unwrap();
                let ratio = lhs / rhs;
                assert!(ratio <= 1.0 + (-alpha * pv).exp2(), "alpha {alpha} p {pv} theta {theta}: {ratio}");
                let direct = 1.0 / (theta.powf(pv) + (1.0 - theta).powf(pv) * (alpha * pv).exp2()).powf(1.0 / pv);
                assert!((ratio - direct).abs() <= 1e-12 * direct);
            }
        }
    }

    fn arb_function() -> impl Strategy<Value = GridFunction> {
        proptest::collection::vec(prop_oneof![Just(0.0), -5.0f64..5.0, 1e-6f64..1e-3], 128)
            .prop_map(|v| GridFunction::new(grid1(), v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_and_coefficient_identity(f in arb_function(), alpha in -1.0f64..1.5, pv in 0.5f64..4.0, nonhomo in any::<bool>()) {
            let variant = if nonhomo { Variant::NonHomogeneous } else { Variant::Homogeneous };
            let p = hp(alpha, pv, variant);
            let dec = decompose(&f, &p).unwrap();
            let back = reconstruct(&dec).unwrap();
            for (a, b) in back.values().iter().zip(f.values()) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs());
            }
            let norm = herz_slice_norm(&f, &p);
            prop_assert!((dec.coefficient_norm() - norm).abs() <= 1e-12 * norm.max(1e-300));
            for e in &dec.entries {
                let bound = (-(e.k as f64) * alpha).exp2();
                prop_assert!((e.block.measured_slice_norm - bound).abs() <= 1e-12 * bound);
                prop_assert!(is_central_block(&e.block.data, e.k, &p, e.block.restrict_type).0);
            }
            let mut ks: Vec<i32> = dec.entries.iter().map(|e| e.k).collect();
            ks.dedup();
            prop_assert_eq!(ks.len(), dec.entries.len());
        }
    }
}
