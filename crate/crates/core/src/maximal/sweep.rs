//! Parameter sweeps of the empirical maximal-operator constant.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::estimate::{fold_ratios, ratio_of};
use super::{hl_maximal, DEFAULT_EXTENSION};
use crate::corpus::{CorpusConfig, KindMix};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::format::sig17;
use crate::grid::{sample, GridSpec};
use crate::herz::{HerzParams, Variant};
use crate::slice::SliceParams;

pub const SWEEP_HEADER: [&str; 10] = ["alpha", "p", "q", "r", "t", "L", "h", "constant", "corpus", "seed"];

fn default_dim() -> usize {
    1
}

fn default_extension() -> f64 {
    DEFAULT_EXTENSION
}

fn default_variant() -> Variant {
    Variant::Homogeneous
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCorpus {
    pub seed: u64,
    pub size: usize,
    #[serde(default)]
    pub mix: KindMix,
}

/// Cartesian product of parameters. The corpus is drawn once on the grid of
/// the smallest `L` and resampled on every larger grid, so each row measures
/// the same functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub alpha: Vec<f64>,
    pub p: Vec<Exponent>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    #[serde(rename = "L")]
    pub half_widths: Vec<f64>,
    pub h: f64,
    #[serde(default = "default_extension")]
    pub extension_factor: f64,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    pub corpus: SweepCorpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub p: Exponent,
    pub q: f64,
    pub r: f64,
    pub t: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub h: f64,
    pub constant: f64,
    pub corpus: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_HEADER)?;
        for row in &self.rows {
            w.write_record([
                sig17(row.alpha),
                sig17(row.p.value()),
                sig17(row.q),
                sig17(row.r),
                sig17(row.t),
                sig17(row.half_width),
                sig17(row.h),
                sig17(row.constant),
                row.corpus.to_string(),
                row.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows matching `alpha`, ordered by `L`.
    pub fn constants_for_alpha(&self, alpha: f64) -> Vec<(f64, f64)> {
        self.rows.iter().filter(|r| r.alpha == alpha).map(|r| (r.half_width, r.constant)).collect()
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(Error::Config(format!("sweep list {name:?} is empty")))
    } else {
        Ok(())
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    nonempty("alpha", &cfg.alpha)?;
    nonempty("p", &cfg.p)?;
    nonempty("q", &cfg.q)?;
    nonempty("r", &cfg.r)?;
    nonempty("t", &cfg.t)?;
    nonempty("L", &cfg.half_widths)?;
    let l_min = cfg.half_widths.iter().copied().fold(f64::INFINITY, f64::min);
    let base = GridSpec::new(cfg.dim, l_min, cfg.h)?;
    let specs = CorpusConfig { seed: cfg.corpus.seed, size: cfg.corpus.size, grid: base, mix: cfg.corpus.mix }.generate()?;
    // validate every parameter set before the expensive part
    let mut params = Vec::new();
    for &alpha in &cfg.alpha {
        for &p in &cfg.p {
            for &q in &cfg.q {
                for &r in &cfg.r {
                    for &t in &cfg.t {
                        let slice = SliceParams::finite(t, r, q)?;
                        params.push(HerzParams::new(alpha, p, slice, cfg.variant)?);
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(params.len() * cfg.half_widths.len());
    for &l in &cfg.half_widths {
        let grid = GridSpec::new(cfg.dim, l, cfg.h)?;
        let fs = specs.iter().map(|s| sample(s, &grid)).collect::<Result<Vec<_>>>()?;
        for &t in &cfg.t {
            let mfs = fs.iter().map(|f| hl_maximal(f, cfg.extension_factor, t)).collect::<Result<Vec<_>>>()?;
            for hp in params.iter().filter(|hp| hp.slice.t() == t) {
                let est = fold_ratios(fs.iter().zip(&mfs).map(|(f, mf)| ratio_of(f, mf, hp)));
                rows.push(SweepRow {
                    alpha: hp.alpha,
                    p: hp.p,
                    q: hp.slice.q().value(),
                    r: hp.slice.r(),
                    t,
                    half_width: l,
                    h: cfg.h,
                    constant: est.constant,
                    corpus: specs.len(),
                    seed: cfg.corpus.seed,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        let key = |r: &SweepRow| [r.alpha, r.p.value(), r.q, r.r, r.t, r.half_width, r.h];
        key(a).iter().zip(key(b).iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SweepReport { rows })
}
