//! Empirical operator-norm estimates for the maximal operator.

use super::hl_maximal;
use crate::error::{Error, Result};
use crate::grid::{sample, FunctionSpec, GridFunction, GridSpec};
use crate::herz::{herz_slice_norm, weak_herz_slice_norm, HerzParams};
use crate::slice::{slice_norm, weak_slice_norm};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorEstimate {
    /// Largest observed `‖Mf‖ / ‖f‖`.
    pub constant: f64,
    /// Functions with a defined ratio.
    pub evaluated: usize,
    /// Functions skipped because `‖f‖ = 0`.
    pub skipped: usize,
}

pub(crate) fn ratio_of(f: &GridFunction, mf: &GridFunction, hp: &HerzParams) -> Option<f64> {
    let denom = herz_slice_norm(f, hp);
    (denom > 0.0).then(|| herz_slice_norm(mf, hp) / denom)
}

pub(crate) fn fold_ratios(ratios: impl IntoIterator<Item = Option<f64>>) -> OperatorEstimate {
    let mut est = OperatorEstimate { constant: 0.0, evaluated: 0, skipped: 0 };
    for r in ratios {
        match r {
            Some(r) => {
                est.constant = est.constant.max(r);
                est.evaluated += 1;
            }
            None => est.skipped += 1,
        }
    }
    est
}

pub(crate) fn require_finite_q(hp: &HerzParams) -> Result<()> {
    hp.slice.q().finite("slice exponent q").map(|_| ())
}

/// `max_f ‖Mf‖ / ‖f‖` in the Herz-slice norm over a corpus sampled on `grid`,
/// with `Mf` truncated to the evaluation grid of `extension_factor`. The
/// truncation only drops annuli, so the result is a lower bound for the
/// untruncated ratio.
pub fn estimate_operator_norm(
    corpus: &[FunctionSpec],
    grid: &GridSpec,
    hp: &HerzParams,
    extension_factor: f64,
) -> Result<OperatorEstimate> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    require_finite_q(hp)?;
    let mut ratios = Vec::with_capacity(corpus.len());
    for spec in corpus {
        let f = sample(spec, grid)?;
        let mf = hl_maximal(&f, extension_factor, hp.slice.t())?;
        ratios.push(ratio_of(&f, &mf, hp));
    }
    Ok(fold_ratios(ratios))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakMode {
    /// `‖Mf‖_{weak Herz-slice} / ‖f‖_{Herz-slice}`.
    Herz,
    /// `‖Mf‖_{weak slice} / ‖f‖_{slice}`.
    Slice,
}

/// Weak-type ratio for `q = 1`; `None` when `f` has zero norm.
pub fn weak_type_ratio(f: &GridFunction, hp: &HerzParams, extension_factor: f64, mode: WeakMode) -> Result<Option<f64>> {
    if hp.slice.q().value() != 1.0 {
        return Err(Error::Precondition(format!("weak-type ratio needs q = 1, got {}", hp.slice.q())));
    }
    let denom = match mode {
        WeakMode::Herz => herz_slice_norm(f, hp),
        WeakMode::Slice => slice_norm(f, &hp.slice),
    };
    if denom == 0.0 {
        return Ok(None);
    }
    let mf = hl_maximal(f, extension_factor, hp.slice.t())?;
    let num = match mode {
        WeakMode::Herz => weak_herz_slice_norm(&mf, hp)?,
        WeakMode::Slice => weak_slice_norm(&mf, &hp.slice),
    };
    Ok(Some(num / denom))
}
