//! Lebesgue, weak-Lebesgue and power-weighted Lebesgue norms.

use crate::compensated::TwoSum;
use crate::error::Result;
use crate::exponent::Exponent;
use crate::grid::GridFunction;

/// `(Σ |f|^p h^n)^{1/p}`, or `max |f|` for `p = ∞`.
pub fn lp_norm(f: &GridFunction, p: Exponent) -> f64 {
    if p.is_infinite() {
        return f.values().iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let p = p.value();
    let mut acc = TwoSum::default();
    for &v in f.values() {
        if v != 0.0 {
            acc.add(pow_abs(v, p));
        }
    }
    (acc.value() * f.grid().cell_volume()).powf(1.0 / p)
}

#[inline]
pub(crate) fn pow_abs(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// Weak `L^{p,∞}` quasi-norm `sup_λ λ |{|f| > λ}|^{1/p}`.
///
/// For a step function the level-set measure only changes at the sampled
/// values, so the supremum is `max_v v · (h^n #{|f| ≥ v})^{1/p}` over the
/// distinct nonzero values `v` of `|f|`.
pub fn weak_lp_norm(f: &GridFunction, p: Exponent) -> Result<f64> {
    let p = p.finite("weak Lebesgue exponent")?;
    let mut levels: Vec<f64> = f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    let vol = f.grid().cell_volume();
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < levels.len() {
        let v = levels[i];
        while i < levels.len() && levels[i] == v {
            i += 1;
        }
        best = best.max(v * (vol * i as f64).powf(1.0 / p));
    }
    Ok(best)
}

/// `(Σ |f(x)|^p |x|^{weight_exponent} h^n)^{1/p}`, the `L^p_w` norm for the
/// power weight `w = |x|^{weight_exponent}`.
pub fn weighted_lp_norm(f: &GridFunction, p: Exponent, weight_exponent: f64) -> Result<f64> {
    let p = p.finite("weighted Lebesgue exponent")?;
    let g = f.grid();
    let mut acc = TwoSum::default();
    for i in f.support() {
        let w = if weight_exponent == 0.0 { 1.0 } else { g.radius(i).powf(weight_exponent) };
        acc.add(pow_abs(f.values()[i], p) * w);
    }
    Ok((acc.value() * g.cell_volume()).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use proptest::prelude::*;

    fn grid1() -> GridSpec {
        GridSpec::new(1, 4.0, 0.25).unwrap()
    }

    fn exp(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn unit_ball(g: GridSpec) -> GridFunction {
        GridFunction::indicator(g, |i| g.radius(i) <= 1.0)
    }

    #[test]
    fn zero_function() {
        let z = GridFunction::zeros(grid1());
        for p in [0.5, 1.0, 2.0, f64::INFINITY] {
            assert_eq!(lp_norm(&z, exp(p)), 0.0);
        }
        assert_eq!(weak_lp_norm(&z, exp(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn indicator_norms() {
        let b = unit_ball(grid1());
        assert!((lp_norm(&b, exp(2.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(lp_norm(&b, Exponent::INFINITY), 1.0);
        let w = weak_lp_norm(&b.scale(-3.0), exp(2.0)).unwrap();
        assert!((w - 3.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(weak_lp_norm(&b, Exponent::INFINITY).is_err());
    }

    #[test]
    fn two_level_weak_norm() {
        let g = grid1();
        // E1 = 4 cells, E2 = 6 further cells
        let f = GridFunction::from_fn(g, |x| {
            let r = x[0].abs();
            if r < 0.5 { 2.0 } else if r < 1.25 { 1.0 } else { 0.0 }
        })
        .unwrap();
        let p = 1.5;
        let expected = f64::max(2.0 * (4.0 * 0.25f64).powf(1.0 / p), (10.0 * 0.25f64).powf(1.0 / p));
        assert!((weak_lp_norm(&f, exp(p)).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn weighted_norm_examples() {
        let g = grid1();
        let b = unit_ball(g);
        assert_eq!(weighted_lp_norm(&b, exp(2.0), 0.0).unwrap(), lp_norm(&b, exp(2.0)));
        // 2·(0.125 + 0.375 + 0.625 + 0.875)·0.25
        assert!((weighted_lp_norm(&b, exp(1.0), 1.0).unwrap() - 1.0).abs() < 1e-15);
        let imp = GridFunction::indicator(g, |i| i == 20).scale(-2.0);
        let x0 = g.radius(20);
        let expected = 2.0 * x0.powf(1.5) * 0.25f64.powf(1.0 / 3.0);
        assert!((weighted_lp_norm(&imp, exp(3.0), 4.5).unwrap() - expected).abs() < 1e-14);
    }

    fn arb_function() -> impl Strategy<Value = GridFunction> {
        proptest::collection::vec(-5.0f64..5.0, 32)
            .prop_map(|v| GridFunction::new(grid1(), v).unwrap())
    }

    proptest! {
        #[test]
        fn homogeneity(f in arb_function(), c in -4.0f64..4.0, p in 0.3f64..6.0) {
            let n = lp_norm(&f, exp(p));
            let m = lp_norm(&f.scale(c), exp(p));
            prop_assert!((m - c.abs() * n).abs() <= 1e-12 * (1.0 + m));
            let w = weak_lp_norm(&f, exp(p)).unwrap();
            let wm = weak_lp_norm(&f.scale(c), exp(p)).unwrap();
            prop_assert!((wm - c.abs() * w).abs() <= 1e-12 * (1.0 + wm));
        }

        #[test]
        fn chebyshev(f in arb_function(), p in 0.3f64..6.0) {
            let w = weak_lp_norm(&f, exp(p)).unwrap();
            let s = lp_norm(&f, exp(p));
            prop_assert!(w <= s * (1.0 + 1e-12));
        }

        #[test]
        fn power_identity(f in arb_function(), p in 0.5f64..4.0, s in 0.3f64..3.0) {
            let lhs = lp_norm(&f.abs_pow(s).unwrap(), exp(p)).powf(1.0 / s);
            let rhs = lp_norm(&f, exp(s * p));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn monotone(f in arb_function(), p in 0.5f64..4.0) {
            let smaller = f.map(|v| 0.5 * v);
            prop_assert!(lp_norm(&smaller, exp(p)) <= lp_norm(&f, exp(p)));
            prop_assert!(weak_lp_norm(&smaller, exp(p)).unwrap() <= weak_lp_norm(&f, exp(p)).unwrap());
        }
    }
}
