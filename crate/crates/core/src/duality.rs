//! Pairings, Hölder inequalities for slice and Herz-slice norms, and lower
//! bounds for the norm through its dual description.
//!
//! The sup formula is taken with `|∫ f g|` in both variants.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compensated::TwoSum;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{sample, FunctionSpec, GridFunction, Primitive};
use crate::herz::{annulus_cells, herz_slice_norm, herz_slice_terms, HerzParams};
use crate::slice::{slice_norm, slice_norm_of_cells, BallStencil, SliceParams};

/// `(p', q', r')` with `1/s + 1/s' = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjugateTriple {
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
}

impl ConjugateTriple {
    pub fn of(hp: &HerzParams) -> Result<Self> {
        Ok(Self {
            p: hp.p.conjugate()?,
            q: hp.slice.q().conjugate()?,
            r: Exponent::new(hp.slice.r())?.conjugate()?,
        })
    }
}

fn check_grids(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if f.grid().same_lattice(g.grid()) && f.grid().half_width() == g.grid().half_width() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `Σ f g h^n`.
pub fn pairing(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    check_grids(f, g)?;
    let mut acc = TwoSum::default();
    for (a, b) in f.values().iter().zip(g.values()) {
        acc.add(a * b);
    }
    Ok(acc.value() * f.grid().cell_volume())
}

/// `(‖f g‖_1, ‖f‖_{(E_r^q)_t} ‖g‖_{(E_{r'}^{q'})_t})`.
pub fn check_slice_holder(f: &GridFunction, g: &GridFunction, sp: &SliceParams) -> Result<(f64, f64)> {
    check_grids(f, g)?;
    let mut acc = TwoSum::default();
    for (a, b) in f.values().iter().zip(g.values()) {
        acc.add((a * b).abs());
    }
    let lhs = acc.value() * f.grid().cell_volume();
    if lhs == 0.0 && (f.is_zero() || g.is_zero()) {
        return Ok((0.0, 0.0));
    }
    Ok((lhs, slice_norm(f, sp) * slice_norm(g, &sp.conjugate()?)))
}

fn require_open(hp: &HerzParams) -> Result<()> {
    let open = |e: Exponent| e.is_finite() && e.value() > 1.0;
    if !open(hp.p) || !open(hp.slice.q()) {
        return Err(Error::Precondition(format!("need p, q in (1, inf), got p = {}, q = {}", hp.p, hp.slice.q())));
    }
    Ok(())
}

/// `(|∫ f g|, ‖g‖_{(-α, p', q', r')} ‖f‖_{(α, p, q, r)})`.
pub fn check_herz_holder(f: &GridFunction, g: &GridFunction, hp: &HerzParams) -> Result<(f64, f64)> {
    require_open(hp)?;
    let lhs = pairing(f, g)?.abs();
    if f.is_zero() || g.is_zero() {
        return Ok((0.0, 0.0));
    }
    Ok((lhs, herz_slice_norm(g, &hp.dual()?) * herz_slice_norm(f, hp)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualityBound {
    /// Best `|∫ f g|` over the tried `g` with dual norm one.
    pub lower: f64,
    /// `‖f‖` computed directly.
    pub norm: f64,
}

impl DualityBound {
    pub fn ratio(&self) -> f64 {
        if self.norm == 0.0 { 0.0 } else { self.lower / self.norm }
    }
}

/// `Σ_k a_k^{p-1} 2^{kα} u_k / ‖u_k‖'` with `u_k = sign(f)|f|^{q-1} 1_{S_k}`
/// and `a_k = 2^{kα} ‖f 1_{S_k}‖`, which attains the norm when `r = q`.
pub fn analytic_witness(f: &GridFunction, hp: &HerzParams) -> Result<GridFunction> {
    let q = hp.slice.q().finite("slice exponent q")?;
    let p = hp.p.finite("Herz exponent p")?;
    let dual = hp.slice.conjugate()?;
    let stencil = BallStencil::for_grid(f.grid(), dual.t());
    let terms = herz_slice_terms(f, hp);
    let u = f.map(|v| v.signum() * v.abs().powf(q - 1.0));
    let mut out = vec![0.0; f.grid().len()];
    for ((k, cells), term) in annulus_cells(f, hp.variant).into_iter().zip(terms) {
        debug_assert_eq!(k, term.k);
        let un = slice_norm_of_cells(&u, &cells, &dual, &stencil);
        if un == 0.0 || term.term == 0.0 {
            continue;
        }
        let c = term.term.powf(p - 1.0) * (k as f64 * hp.alpha).exp2() / un;
        for i in cells {
            out[i] = c * u.values()[i];
        }
    }
    GridFunction::new(*f.grid(), out)
}

fn random_witness(f: &GridFunction, hp: &HerzParams, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let grid = *f.grid();
    let radius = f.support_radius().unwrap_or(grid.spacing()).max(grid.spacing()).min(grid.half_width());
    let spec = FunctionSpec::single(
        1.0,
        Primitive::PiecewiseRandom { seed: rng.gen(), levels: rng.gen_range(1..=6), support_radius: radius },
    );
    let base = sample(&spec, &grid)?;
    let follow_sign = rng.gen_bool(0.5);
    let mut out = vec![0.0; grid.len()];
    for (_, cells) in annulus_cells(f, hp.variant) {
        let weight: f64 = rng.gen_range(0.0..=1.0);
        for i in cells {
            let s = if follow_sign { f.values()[i].signum() } else { 1.0 };
            out[i] = weight * s * base.values()[i];
        }
    }
    GridFunction::new(grid, out)
}

/// `max |∫ f g|` over `trials` random `g` on the annuli of `f` plus the
/// analytic witness, each normalized to dual norm one, next to `‖f‖`.
/// Trial `i` draws from stream `i` of the ChaCha generator keyed by `seed`.
pub fn norm_by_duality_lower_bound(f: &GridFunction, hp: &HerzParams, trials: usize, seed: u64) -> Result<DualityBound> {
    require_open(hp)?;
    if f.is_zero() {
        return Ok(DualityBound { lower: 0.0, norm: 0.0 });
    }
    let dual = hp.dual()?;
    let norm = herz_slice_norm(f, hp);
    let score = |g: &GridFunction| -> Result<f64> {
        let d = herz_slice_norm(g, &dual);
        Ok(if d > 0.0 { pairing(f, g)?.abs() / d } else { 0.0 })
    };
    let mut lower = score(&analytic_witness(f, hp)?)?;
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        lower = lower.max(score(&random_witness(f, hp, &mut rng)?)?);
    }
    Ok(DualityBound { lower, norm })
}
