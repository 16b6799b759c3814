//! Dyadic annuli, classical Herz norms and Herz-slice norms.
//!
//! `B_k = {|x| ≤ 2^k}` and `S_k = B_k \ B_{k-1}`, so a cell center belongs to
//! the annulus with `2^{k-1} < |x| ≤ 2^k`. In the non-homogeneous variant all
//! cells with `|x| ≤ 1` form the `k = 0` piece and only `k ≥ 0` occurs. Sums
//! over `k ∈ ℤ` run over the annuli that contain a nonzero cell; every other
//! term vanishes on the grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compensated::TwoSum;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{GridFunction, GridSpec};
use crate::lebesgue::{pow_abs, weighted_lp_norm};
use crate::slice::kernel::Region;
use crate::slice::level::{LevelAccumulator, LevelTable};
use crate::slice::{level_groups, slice_norm, slice_norm_of_cells, BallStencil, SliceParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "homo")]
    Homogeneous,
    #[serde(rename = "nonhomo")]
    NonHomogeneous,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "homo" | "homogeneous" => Ok(Variant::Homogeneous),
            "nonhomo" | "nonhomogeneous" | "non-homogeneous" => Ok(Variant::NonHomogeneous),
            _ => Err(Error::InvalidParams(format!("unknown variant {s:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Homogeneous => "homo",
            Variant::NonHomogeneous => "nonhomo",
        })
    }
}

/// `(α, p, (t, r, q), variant)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HerzParams {
    pub alpha: f64,
    pub p: Exponent,
    pub slice: SliceParams,
    pub variant: Variant,
}

impl HerzParams {
    pub fn new(alpha: f64, p: Exponent, slice: SliceParams, variant: Variant) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { alpha, p, slice, variant })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_p(mut self, p: Exponent) -> Self {
        self.p = p;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_slice(mut self, slice: SliceParams) -> Self {
        self.slice = slice;
        self
    }

    /// `(-α, p', (t, r', q'))`, the parameters of the dual space.
    pub fn dual(&self) -> Result<Self> {
        Ok(Self {
            alpha: -self.alpha,
            p: self.p.conjugate()?,
            slice: self.slice.conjugate()?,
            variant: self.variant,
        })
    }
}

/// Annulus index of a point with `|x|² = radius_squared > 0`.
pub fn annulus_of(radius_squared: f64, variant: Variant) -> i32 {
    debug_assert!(radius_squared > 0.0);
    let mut k = (0.5 * radius_squared.log2()).ceil() as i32;
    while radius_squared > (2.0 * k as f64).exp2() {
        k += 1;
    }
    while radius_squared <= (2.0 * (k - 1) as f64).exp2() {
        k -= 1;
    }
    match variant {
        Variant::Homogeneous => k,
        Variant::NonHomogeneous => k.max(0),
    }
}

/// Range of annulus indices in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnulusIndex {
    pub k_min: i32,
    pub k_max: i32,
}

impl AnnulusIndex {
    /// Annuli met by any cell center of `grid`.
    pub fn of_grid(grid: &GridSpec, variant: Variant) -> Self {
        Self::over(grid, 0..grid.len(), variant).expect("grids are nonempty")
    }

    /// Annuli met by the nonzero cells of `f`; `None` for the zero function.
    pub fn of_support(f: &GridFunction, variant: Variant) -> Option<Self> {
        Self::over(f.grid(), f.support(), variant)
    }

    fn over(grid: &GridSpec, cells: impl Iterator<Item = usize>, variant: Variant) -> Option<Self> {
        cells.map(|i| annulus_of(grid.radius_squared(i), variant)).fold(None, |acc, k| match acc {
            None => Some(Self { k_min: k, k_max: k }),
            Some(a) => Some(Self { k_min: a.k_min.min(k), k_max: a.k_max.max(k) }),
        })
    }

    pub fn contains(&self, k: i32) -> bool {
        self.k_min <= k && k <= self.k_max
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.k_min..=self.k_max
    }
}

/// `f · 1_{S_k}`.
pub fn annulus_restrict(f: &GridFunction, k: i32, variant: Variant) -> GridFunction {
    let g = *f.grid();
    f.restrict(|i| annulus_of(g.radius_squared(i), variant) == k)
}

/// Nonzero cells of `f` grouped by annulus.
pub(crate) fn annulus_cells(f: &GridFunction, variant: Variant) -> BTreeMap<i32, Vec<usize>> {
    let g = f.grid();
    let mut map: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in f.support() {
        map.entry(annulus_of(g.radius_squared(i), variant)).or_default().push(i);
    }
    map
}

/// One summand of a Herz-type norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnulusTerm {
    pub k: i32,
    /// The unweighted norm of `f · 1_{S_k}`.
    pub norm: f64,
    /// `2^{kα}` times `norm`.
    pub term: f64,
}

/// `(Σ term^p)^{1/p}`, or the maximum for `p = ∞`.
pub fn lp_combine(terms: impl IntoIterator<Item = f64>, p: Exponent) -> f64 {
    if p.is_infinite() {
        return terms.into_iter().fold(0.0, f64::max);
    }
    let p = p.value();
    let mut acc = TwoSum::default();
    for t in terms {
        if t > 0.0 {
            acc.add(t.powf(p));
        }
    }
    acc.value().powf(1.0 / p)
}

/// Per-annulus slice norms `‖f 1_{S_k}‖_{(E_r^q)_t}` and their weighted terms.
pub fn herz_slice_terms(f: &GridFunction, hp: &HerzParams) -> Vec<AnnulusTerm> {
    let stencil = BallStencil::for_grid(f.grid(), hp.slice.t());
    annulus_cells(f, hp.variant)
        .into_iter()
        .map(|(k, cells)| {
            let norm = slice_norm_of_cells(f, &cells, &hp.slice, &stencil);
            AnnulusTerm { k, norm, term: (k as f64 * hp.alpha).exp2() * norm }
        })
        .collect()
}

/// The (homogeneous or non-homogeneous) Herz-slice norm
/// `(Σ_k 2^{kαp} ‖f 1_{S_k}‖_{(E_r^q)_t}^p)^{1/p}`.
pub fn herz_slice_norm(f: &GridFunction, hp: &HerzParams) -> f64 {
    lp_combine(herz_slice_terms(f, hp).into_iter().map(|t| t.term), hp.p)
}

/// Per-annulus `L^q` norms for the classical Herz norm.
pub fn classical_herz_terms(f: &GridFunction, alpha: f64, q: Exponent, variant: Variant) -> Result<Vec<AnnulusTerm>> {
    let q = q.finite("classical Herz exponent q")?;
    let vol = f.grid().cell_volume();
    Ok(annulus_cells(f, variant)
        .into_iter()
        .map(|(k, cells)| {
            let mut acc = TwoSum::default();
            for i in cells {
                acc.add(pow_abs(f.values()[i], q));
            }
            let norm = (acc.value() * vol).powf(1.0 / q);
            AnnulusTerm { k, norm, term: (k as f64 * alpha).exp2() * norm }
        })
        .collect())
}

/// Classical Herz norm `(Σ_k 2^{kαp} ‖f 1_{S_k}‖_{L^q}^p)^{1/p}`, `q` finite.
pub fn classical_herz_norm(f: &GridFunction, alpha: f64, p: Exponent, q: Exponent, variant: Variant) -> Result<f64> {
    let terms = classical_herz_terms(f, alpha, q, variant)?;
    Ok(lp_combine(terms.into_iter().map(|t| t.term), p))
}

/// Weak Herz-slice norm
/// `sup_λ λ (Σ_k 2^{kαp} ‖1_{x ∈ S_k: |f(x)| > λ}‖_{(E_r^q)_t}^p)^{1/p}`,
/// realized over the distinct values of `|f|` with `≥` level sets.
pub fn weak_herz_slice_norm(f: &GridFunction, hp: &HerzParams) -> Result<f64> {
    let p = hp.p.finite("weak Herz-slice exponent p")?;
    let g = f.grid();
    let stencil = BallStencil::for_grid(g, hp.slice.t());
    let table = LevelTable::new(&stencil, hp.slice.r(), hp.slice.q(), g.cell_volume());
    let by_annulus = annulus_cells(f, hp.variant);
    let mut slot_of = BTreeMap::new();
    let mut accs = Vec::with_capacity(by_annulus.len());
    let mut weights = Vec::with_capacity(by_annulus.len());
    for (slot, (k, cells)) in by_annulus.iter().enumerate() {
        let region = Region::bounding(g, cells.iter().copied(), stencil.reach()).expect("nonempty annulus");
        accs.push(LevelAccumulator::new(&stencil, &table, region));
        weights.push((*k as f64 * hp.alpha).exp2());
        for &i in cells {
            slot_of.insert(i, slot);
        }
    }
    let mut best: f64 = 0.0;
    for (v, cells) in level_groups(f, f.support()) {
        for idx in cells {
            let (row, col) = g.row_col(idx);
            accs[slot_of[&idx]].insert(row as isize, col as isize);
        }
        let mut acc = TwoSum::default();
        for (a, w) in accs.iter().zip(&weights) {
            let n = a.norm();
            if n > 0.0 {
                acc.add((w * n).powf(p));
            }
        }
        best = best.max(v * acc.value().powf(1.0 / p));
    }
    Ok(best)
}

/// Both norms of an inclusion pair; see [`inclusion_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InclusionReport {
    pub first: f64,
    pub second: f64,
}

/// Norms of `f` under `hp1` and `hp2` for a pair covered by the inclusions
/// `p1 ≤ p2 ⟹ ‖f‖_{p2} ≤ ‖f‖_{p1}` (both variants) and, non-homogeneous only,
/// `α2 ≤ α1 ⟹ ‖f‖_{α2} ≤ ‖f‖_{α1}`. The larger space's norm is `second`.
pub fn inclusion_check(f: &GridFunction, hp1: &HerzParams, hp2: &HerzParams) -> Result<InclusionReport> {
    let same_rest = hp1.slice == hp2.slice && hp1.variant == hp2.variant;
    let p_pattern = same_rest && hp1.alpha == hp2.alpha && hp1.p <= hp2.p;
    let alpha_pattern = same_rest
        && hp1.variant == Variant::NonHomogeneous
        && hp1.p == hp2.p
        && hp2.alpha <= hp1.alpha;
    if !(p_pattern || alpha_pattern) {
        return Err(Error::ParameterPair(format!(
            "(alpha, p, variant) = ({}, {}, {}) vs ({}, {}, {})",
            hp1.alpha, hp1.p, hp1.variant, hp2.alpha, hp2.p, hp2.variant
        )));
    }
    Ok(InclusionReport { first: herz_slice_norm(f, hp1), second: herz_slice_norm(f, hp2) })
}

/// The three norms compared by the intersection identity
/// `KE = K̇E ∩ E` for `α > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntersectionReport {
    /// Non-homogeneous Herz-slice norm.
    pub nonhomogeneous: f64,
    /// Homogeneous Herz-slice norm.
    pub homogeneous: f64,
    /// Slice norm.
    pub slice: f64,
}

impl IntersectionReport {
    /// `K^p - (E^p + K̇^p)`, which is never positive.
    pub fn excess(&self, p: f64) -> f64 {
        self.nonhomogeneous.powf(p) - (self.slice.powf(p) + self.homogeneous.powf(p))
    }

    /// `K / (K̇ + E)`.
    pub fn equivalence_ratio(&self) -> f64 {
        let denom = self.homogeneous + self.slice;
        if denom == 0.0 { 0.0 } else { self.nonhomogeneous / denom }
    }
}

pub fn intersection_check(f: &GridFunction, hp: &HerzParams) -> Result<IntersectionReport> {
    if !(hp.alpha > 0.0) {
        return Err(Error::Precondition(format!("intersection identity needs alpha > 0, got {}", hp.alpha)));
    }
    hp.p.finite("Herz exponent p")?;
    Ok(IntersectionReport {
        nonhomogeneous: herz_slice_norm(f, &hp.with_variant(Variant::NonHomogeneous)),
        homogeneous: herz_slice_norm(f, &hp.with_variant(Variant::Homogeneous)),
        slice: slice_norm(f, &hp.slice),
    })
}

/// `(H, W)` with `H` the homogeneous classical Herz norm with `q = p` and
/// `W` the `L^p` norm with weight `|x|^{αp}`. Since `2^{k-1} < |x| ≤ 2^k` on
/// `S_k`, `W ≤ H ≤ 2^α W` for `α ≥ 0` and `2^α W ≤ H ≤ W` for `α < 0`.
pub fn weighted_sandwich_check(f: &GridFunction, alpha: f64, p: Exponent) -> Result<(f64, f64)> {
    let pv = p.finite("weighted sandwich exponent p")?;
    let h = classical_herz_norm(f, alpha, p, p, Variant::Homogeneous)?;
    let w = weighted_lp_norm(f, p, alpha * pv)?;
    Ok((h, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue::lp_norm;
    use crate::slice::weak_slice_norm;
    use proptest::prelude::*;

    fn exp(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn grid1() -> GridSpec {
        GridSpec::new(1, 16.0, 0.25).unwrap()
    }

    fn hp(alpha: f64, p: f64, t: f64, r: f64, q: f64, variant: Variant) -> HerzParams {
        HerzParams::new(alpha, exp(p), SliceParams::finite(t, r, q).unwrap(), variant).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn annulus_boundaries() {
        use Variant::*;
        assert_eq!(annulus_of(4.0, Homogeneous), 1);
        assert_eq!(annulus_of(4.0 + 1e-12, Homogeneous), 2);
        assert_eq!(annulus_of(1.0, Homogeneous), 0);
        assert_eq!(annulus_of(0.99, Homogeneous), 0);
        assert_eq!(annulus_of(0.25, Homogeneous), -1);
        assert_eq!(annulus_of(0.0625 * 0.0625, Homogeneous), -4);
        assert_eq!(annulus_of(0.01, NonHomogeneous), 0);
        assert_eq!(annulus_of(1.0, NonHomogeneous), 0);
        assert_eq!(annulus_of(1.01, NonHomogeneous), 1);
    }

    #[test]
    fn center_on_dyadic_sphere() {
        // h = 4, L = 4: the two cell centers sit at ±2
        let g = GridSpec::new(1, 4.0, 4.0).unwrap();
        assert_eq!(g.center(0)[0], -2.0);
        let f = GridFunction::indicator(g, |_| true);
        assert_eq!(annulus_restrict(&f, 1, Variant::Homogeneous), f);
        assert!(annulus_restrict(&f, 2, Variant::Homogeneous).is_zero());
    }

    #[test]
    fn annulus_below_ball() {
        let g = GridSpec::new(2, 8.0, 0.25).unwrap();
        let p = SliceParams::finite(0.5, 1.5, 2.5).unwrap();
        for k in -1..=3 {
            let s = GridFunction::indicator(g, |i| annulus_of(g.radius_squared(i), Variant::Homogeneous) == k);
            let b = GridFunction::indicator(g, |i| g.radius_squared(i) <= (2.0 * k as f64).exp2());
            assert!(slice_norm(&s, &p) <= slice_norm(&b, &p));
        }
    }

    #[test]
    fn annulus_index_and_partition() {
        let g = grid1();
        let f = GridFunction::from_fn(g, |x| (x[0] * 1.3).sin() * (x[0].abs() < 12.0) as i32 as f64).unwrap();
        let idx = AnnulusIndex::of_support(&f, Variant::Homogeneous).unwrap();
        assert_eq!((idx.k_min, idx.k_max), (-3, 4));
        let gi = AnnulusIndex::of_grid(&g, Variant::NonHomogeneous);
        assert_eq!((gi.k_min, gi.k_max), (0, 4));
        let mut sum = GridFunction::zeros(g);
        for k in idx.iter() {
            sum = sum.add(&annulus_restrict(&f, k, Variant::Homogeneous)).unwrap();
        }
        assert_eq!(sum, f);
        let s3 = GridFunction::indicator(g, |i| annulus_of(g.radius_squared(i), Variant::Homogeneous) == 3);
        assert_eq!(annulus_restrict(&s3, 3, Variant::Homogeneous), s3);
        assert!(annulus_restrict(&s3, 2, Variant::Homogeneous).is_zero());
        assert!(AnnulusIndex::of_support(&GridFunction::zeros(g), Variant::Homogeneous).is_none());
    }

    #[test]
    fn single_annulus_norms() {
        let g = grid1();
        let s3 = GridFunction::indicator(g, |i| annulus_of(g.radius_squared(i), Variant::Homogeneous) == 3);
        let p = hp(0.7, 1.5, 0.5, 2.0, 3.0, Variant::Homogeneous);
        let expected = 2f64.powf(3.0 * 0.7) * slice_norm(&s3, &p.slice);
        assert!(rel(herz_slice_norm(&s3, &p), expected) < 1e-14);
        assert!(rel(weak_herz_slice_norm(&s3.scale(2.0), &p).unwrap(), 2.0 * expected) < 1e-13);
        // 16 cells in S_3 = (4, 8] on both sides
        let classical = classical_herz_norm(&s3, 0.7, exp(1.5), exp(2.0), Variant::Homogeneous).unwrap();
        assert!(rel(classical, 2f64.powf(2.1) * (32.0f64 * 0.25).sqrt()) < 1e-14);
        let inc = inclusion_check(&s3, &p, &p.with_p(exp(4.0))).unwrap();
        assert!(rel(inc.first, inc.second) < 1e-14);
    }

    #[test]
    fn classical_alpha_zero_is_lebesgue() {
        let g = grid1();
        let f = GridFunction::from_fn(g, |x| if x[0].abs() < 10.0 { x[0].cos() + 0.2 } else { 0.0 }).unwrap();
        for q in [1.0, 2.0, 3.5] {
            let h = classical_herz_norm(&f, 0.0, exp(q), exp(q), Variant::Homogeneous).unwrap();
            assert!(rel(h, lp_norm(&f, exp(q))) < 1e-13);
        }
        assert!(classical_herz_norm(&f, 0.0, exp(1.0), Exponent::INFINITY, Variant::Homogeneous).is_err());
    }

    #[test]
    fn classical_power_annulus_by_direct_quadrature() {
        let g = grid1();
        let beta = -0.3;
        let f = GridFunction::from_fn(g, |x| {
            let r = x[0].abs();
            if 1.0 < r && r <= 8.0 { r.powf(beta) } else { 0.0 }
        })
        .unwrap();
        let (alpha, q) = (0.4, 2.0);
        let terms = classical_herz_terms(&f, alpha, exp(q), Variant::Homogeneous).unwrap();
        assert_eq!(terms.iter().map(|t| t.k).collect::<Vec<_>>(), vec![1, 2, 3]);
        for t in &terms {
            let lo = (t.k as f64 - 1.0).exp2();
            let hi = (t.k as f64).exp2();
            // centers 1.125, 1.375, ... on each side
            let mut s = 0.0;
            let mut c = 0.125;
            while c < 16.0 {
                if lo < c && c <= hi {
                    s += 2.0 * c.powf(beta * q) * 0.25;
                }
                c += 0.25;
            }
            assert!(rel(t.norm, s.sqrt()) < 1e-13, "k = {}", t.k);
        }
    }

    #[test]
    fn nonhomogeneous_uses_unit_ball_piece() {
        let g = grid1();
        let b0 = GridFunction::indicator(g, |i| g.radius(i) <= 1.0);
        let p = hp(1.0, 2.0, 0.5, 2.0, 2.0, Variant::NonHomogeneous);
        let terms = herz_slice_terms(&b0, &p);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].k, 0);
        assert!(rel(terms[0].norm, slice_norm(&b0, &p.slice)) < 1e-14);
        let homo = herz_slice_terms(&b0, &p.with_variant(Variant::Homogeneous));
        assert_eq!(homo.iter().map(|t| t.k).collect::<Vec<_>>(), vec![-3, -1, 0]);
    }

    #[test]
    fn parameter_pairs() {
        let g = grid1();
        let f = GridFunction::indicator(g, |i| g.radius(i) <= 3.0);
        let a = hp(0.5, 1.0, 0.5, 2.0, 2.0, Variant::Homogeneous);
        assert!(inclusion_check(&f, &a, &a.with_p(exp(2.0))).is_ok());
        assert!(inclusion_check(&f, &a.with_p(exp(2.0)), &a).is_err());
        assert!(inclusion_check(&f, &a, &a.with_alpha(-0.5)).is_err());
        let n = a.with_variant(Variant::NonHomogeneous);
        let rep = inclusion_check(&f, &n, &n.with_alpha(-0.5)).unwrap();
        assert!(rep.second <= rep.first);
        assert!(inclusion_check(&f, &n, &n.with_alpha(1.0)).is_err());
        assert!(intersection_check(&f, &a.with_alpha(0.0)).is_err());
        assert!(intersection_check(&f, &a.with_p(Exponent::INFINITY)).is_err());
    }

    #[test]
    fn intersection_single_annulus_and_unit_ball() {
        let g = grid1();
        let s4 = GridFunction::indicator(g, |i| annulus_of(g.radius_squared(i), Variant::Homogeneous) == 4);
        let p = hp(0.5, 2.0, 0.5, 2.0, 2.0, Variant::Homogeneous);
        let rep = intersection_check(&s4, &p).unwrap();
        assert!(rel(rep.nonhomogeneous, rep.homogeneous) < 1e-14);
        assert!(rep.excess(2.0) < 0.0);
        let b0 = GridFunction::indicator(g, |i| g.radius(i) <= 1.0);
        let rep = intersection_check(&b0, &p).unwrap();
        assert!(rel(rep.nonhomogeneous, rep.slice) < 1e-14);
        assert!(rep.homogeneous > 0.0 && rep.homogeneous.is_finite());
    }

    #[test]
    fn sandwich_single_impulse() {
        let g = grid1();
        let i0 = (0..g.len()).find(|&i| g.center(i)[0] == 5.125).unwrap();
        let imp = GridFunction::indicator(g, |i| i == i0).scale(3.0);
        for alpha in [-1.0, 0.5, 1.0] {
            let (h, w) = weighted_sandwich_check(&imp, alpha, exp(2.0)).unwrap();
            assert!(rel(h / w, (8.0f64 / 5.125).powf(alpha)) < 1e-13);
        }
        let (h, w) = weighted_sandwich_check(&imp, 0.0, exp(2.0)).unwrap();
        assert!(rel(h, w) < 1e-14);
    }

    fn arb_function() -> impl Strategy<Value = GridFunction> {
        proptest::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0, Just(2.0)], 128)
            .prop_map(|v| GridFunction::new(grid1(), v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn collapse_power_identity_and_weak(f in arb_function(), alpha in -1.0f64..1.0, q in 1.2f64..4.0, p in 0.5f64..4.0) {
            for variant in [Variant::Homogeneous, Variant::NonHomogeneous] {
                let params = hp(alpha, p, 0.6, q, q, variant);
                let hs = herz_slice_norm(&f, &params);
                let cl = classical_herz_norm(&f, alpha, exp(p), exp(q), variant).unwrap();
                prop_assert!((hs - cl).abs() <= 1e-12 * cl.max(1e-300));

                let w = weak_herz_slice_norm(&f, &params).unwrap();
                prop_assert!(w <= hs * (1.0 + 1e-9));
            }
            let s = 2.0;
            let base = hp(alpha, p, 0.6, q, 2.0 * q, Variant::Homogeneous);
            let lhs = herz_slice_norm(&f.abs_pow(s).unwrap(), &base).powf(1.0 / s);
            let scaled = HerzParams::new(alpha / s, exp(p * s), base.slice.scaled(s).unwrap(), Variant::Homogeneous).unwrap();
            let rhs = herz_slice_norm(&f, &scaled);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn weak_alpha_zero_p_eq_q_is_weak_slice(f in arb_function(), r in 1.2f64..4.0, q in 1.0f64..4.0) {
            let params = hp(0.0, q, 0.6, r, q, Variant::Homogeneous);
            let w = weak_herz_slice_norm(&f, &params).unwrap();
            // With α = 0 and p = q the annulus sum of q-th powers of disjoint
            // level sets equals the q-th power of their union only when
            // q = r; in general compare against the definition directly.
            let mut best: f64 = 0.0;
            for &v in f.values() {
                let v = v.abs();
                if v == 0.0 { continue; }
                let set = f.map(|x| if x.abs() >= v { 1.0 } else { 0.0 });
                let total: f64 = herz_slice_terms(&set, &params).iter().map(|t| t.term.powf(q)).sum();
                best = best.max(v * total.powf(1.0 / q));
            }
            prop_assert!((w - best).abs() <= 1e-12 * best.max(1e-300));
            if (r - q).abs() < 1e-12 {
                let ws = weak_slice_norm(&f, &params.slice);
                prop_assert!((w - ws).abs() <= 1e-12 * ws.max(1e-300));
            }
        }

        #[test]
        fn quasi_triangle(f in arb_function(), g in arb_function(), alpha in -1.0f64..1.0, p in 0.3f64..3.0) {
            let params = hp(alpha, p, 0.5, 2.0, 1.5, Variant::Homogeneous);
            let sum = herz_slice_norm(&f.add(&g).unwrap(), &params);
            let (nf, ng) = (herz_slice_norm(&f, &params), herz_slice_norm(&g, &params));
            if p >= 1.0 {
                prop_assert!(sum <= (nf + ng) * (1.0 + 1e-12));
            } else {
                prop_assert!(sum.powf(p) <= (nf.powf(p) + ng.powf(p)) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn q_vs_r_direction(f in arb_function(), r in 1.2f64..4.0, q in 1.0f64..4.0) {
            let params = hp(0.0, q, 0.6, r, q, Variant::Homogeneous);
            let herz = herz_slice_norm(&f, &params);
            let slice = slice_norm(&f, &params.slice);
            if q >= r {
                prop_assert!(herz <= slice * (1.0 + 1e-12));
            } else {
                prop_assert!(herz >= slice * (1.0 - 1e-12));
            }
        }
    }
}
