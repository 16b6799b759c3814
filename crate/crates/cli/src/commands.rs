//! Subcommands other than `verify`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use herzslice::blocks::{decompose as decompose_blocks, reconstruct, synthesis_bound_probe};
use herzslice::format::sig17;
use herzslice::herz::{classical_herz_terms, herz_slice_terms, lp_combine, weak_herz_slice_norm, AnnulusTerm};
use herzslice::lebesgue::{lp_norm, weak_lp_norm, weighted_lp_norm};
use herzslice::maximal::{hl_maximal, hl_maximal_oracle, run_sweep, DEFAULT_EXTENSION};
use herzslice::slice::{slice_norm, weak_slice_norm};
use herzslice::{
    CorpusConfig, FunctionSpec, GridFunction, GridSpec, HerzParams, KindMix, Primitive, SliceParams, SpecDocument,
    SweepConfig, Term,
};
use serde::Serialize;

use crate::output::{print_json, to_json};
use crate::{BenchArgs, DecomposeArgs, GenArgs, MaximalArgs, NormArgs, ParamArgs, Space, SweepArgs};

pub fn read_spec(path: &Path) -> Result<(SpecDocument, GridFunction)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = SpecDocument::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let f = doc.sample().with_context(|| format!("sampling {}", path.display()))?;
    Ok((doc, f))
}

fn herz_params(a: &ParamArgs) -> Result<HerzParams> {
    let slice = SliceParams::new(a.t, a.r, a.q)?;
    Ok(HerzParams::new(a.alpha, a.p, slice, a.variant)?)
}

fn parse_mix(text: &str) -> Result<KindMix> {
    let mut mix = KindMix { power_annulus: 0.0, ball_indicator: 0.0, gaussian: 0.0, piecewise_random: 0.0 };
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, weight) = part.split_once('=').unwrap_or((part, "1"));
        let weight: f64 = weight.trim().parse().with_context(|| format!("bad mix weight in {part:?}"))?;
        let slot = match name.trim() {
            "power_annulus" => &mut mix.power_annulus,
            "ball_indicator" => &mut mix.ball_indicator,
            "gaussian" => &mut mix.gaussian,
            "piecewise_random" => &mut mix.piecewise_random,
            other => bail!("unknown primitive kind {other:?} in --mix"),
        };
        *slot = weight;
    }
    Ok(mix)
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<CorpusConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => {
            let grid = GridSpec::new(a.dim, a.half_width, a.spacing)?.with_margin(a.margin)?;
            let mut cfg = CorpusConfig::new(a.seed, a.size, grid);
            if let Some(mix) = &a.mix {
                cfg = cfg.with_mix(parse_mix(mix)?);
            }
            cfg
        }
    };
    let specs = cfg.generate()?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for (i, spec) in specs.into_iter().enumerate() {
        let path = a.out.join(format!("corpus_{}_{}.json", cfg.seed, i));
        let text = to_json(&SpecDocument::new(cfg.grid, spec))?;
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ParamsOut {
    alpha: f64,
    p: herzslice::Exponent,
    q: herzslice::Exponent,
    r: f64,
    t: f64,
    variant: herzslice::Variant,
}

impl From<&ParamArgs> for ParamsOut {
    fn from(a: &ParamArgs) -> Self {
        Self { alpha: a.alpha, p: a.p, q: a.q, r: a.r, t: a.t, variant: a.variant }
    }
}

#[derive(Serialize)]
struct NormOut {
    space: &'static str,
    params: ParamsOut,
    weak: bool,
    norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_annulus: Option<Vec<AnnulusTerm>>,
}

pub fn norm(a: &NormArgs) -> Result<()> {
    let (_, f) = read_spec(&a.spec)?;
    let p = &a.params;
    let (space, norm, per_annulus) = match (a.space, a.weak) {
        (Space::Lp, false) => ("lp", lp_norm(&f, p.p), None),
        (Space::Lp, true) => ("lp", weak_lp_norm(&f, p.p)?, None),
        (Space::Slice, weak) => {
            let sp = SliceParams::new(p.t, p.r, p.q)?;
            ("slice", if weak { weak_slice_norm(&f, &sp) } else { slice_norm(&f, &sp) }, None)
        }
        (Space::Herz, false) => {
            let hp = herz_params(p)?;
            let terms = herz_slice_terms(&f, &hp);
            ("herz", lp_combine(terms.iter().map(|t| t.term), hp.p), Some(terms))
        }
        (Space::Herz, true) => ("herz", weak_herz_slice_norm(&f, &herz_params(p)?)?, None),
        (Space::Classical, false) => {
            let terms = classical_herz_terms(&f, p.alpha, p.q, p.variant)?;
            ("classical", lp_combine(terms.iter().map(|t| t.term), p.p), Some(terms))
        }
        (Space::Weighted, false) => {
            let pv = p.p.finite("weighted exponent p")?;
            ("weighted", weighted_lp_norm(&f, p.p, p.alpha * pv)?, None)
        }
        (space @ (Space::Classical | Space::Weighted), true) => {
            bail!("--weak is not available for --space {}", format!("{space:?}").to_lowercase())
        }
    };
    print_json(&NormOut { space, params: p.into(), weak: a.weak, norm, per_annulus })
}

#[derive(Serialize)]
struct DecomposeOut {
    params: ParamsOut,
    blocks: Vec<herzslice::blocks::BlockSummary>,
    round_trip_error: f64,
    coefficient_norm: f64,
    norm: f64,
    coefficient_ratio: f64,
    synthesis_norm: f64,
}

pub fn decompose(a: &DecomposeArgs) -> Result<()> {
    let (_, f) = read_spec(&a.spec)?;
    let hp = herz_params(&a.params)?;
    let dec = decompose_blocks(&f, &hp)?;
    let back = reconstruct(&dec)?;
    let scale = f.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let round_trip_error = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(x, y)| if scale > 0.0 { (x - y).abs() / scale } else { (x - y).abs() })
        .fold(0.0, f64::max);
    let (synthesis_norm, coefficient_norm) = synthesis_bound_probe(&dec)?;
    let norm = herzslice::herz::herz_slice_norm(&f, &hp);
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for e in &dec.entries {
            let path = dir.join(format!("block_k{}.csv", e.k));
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            e.block.data.write_csv(io::BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    print_json(&DecomposeOut {
        params: (&a.params).into(),
        blocks: dec.summaries(),
        round_trip_error,
        coefficient_norm,
        norm,
        coefficient_ratio: if norm > 0.0 { coefficient_norm / norm } else { 0.0 },
        synthesis_norm,
    })
}

fn write_to(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = io::BufWriter::new(file);
            write(&mut w).with_context(|| format!("writing {}", path.display()))?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn maximal(a: &MaximalArgs) -> Result<()> {
    let (_, f) = read_spec(&a.spec)?;
    let mf = if a.oracle {
        hl_maximal_oracle(&f, a.extension_factor, a.t)?
    } else {
        hl_maximal(&f, a.extension_factor, a.t)?
    };
    write_to(a.out.as_deref(), |w| Ok(mf.write_csv(w)?))
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let cfg: SweepConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    let report = run_sweep(&cfg)?;
    write_to(a.out.as_deref(), |w| Ok(report.write_csv(w)?))
}

const BENCH_SPACING: f64 = 1.0 / 16.0;

fn bench_function(n: usize, dim: usize) -> Result<GridFunction> {
    let half_width = n as f64 * BENCH_SPACING / 2.0;
    let grid = GridSpec::new(dim, half_width, BENCH_SPACING)?;
    let rad = grid.usable_radius();
    let spec = FunctionSpec::new(vec![
        Term::new(1.0, Primitive::BallIndicator { center: vec![0.0; dim], radius: 0.5 * rad }),
        Term::new(-0.5, Primitive::Gaussian { center: vec![0.1 * rad; dim], width: rad / 16.0 }),
    ]);
    Ok(herzslice::grid::sample(&spec, &grid)?)
}

fn median_secs(repeats: usize, mut run: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            run();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    if a.sizes.is_empty() {
        bail!("--sizes is empty");
    }
    let sp = SliceParams::finite(1.0, 2.0, 2.0)?;
    let hp = HerzParams::new(0.25, herzslice::Exponent::new(2.0)?, sp, herzslice::Variant::Homogeneous)?;
    println!("{:<16} {:>8} {:>10} {:>14}", "kernel", "n", "cells", "median_s");
    for &n in &a.sizes {
        let f = bench_function(n, a.dim)?;
        let cells = f.grid().len();
        let rows: [(&str, f64); 3] = [
            ("slice_norm", median_secs(a.repeats, || {
                std::hint::black_box(slice_norm(&f, &sp));
            })),
            ("hl_maximal", median_secs(a.repeats, || {
                std::hint::black_box(hl_maximal(&f, DEFAULT_EXTENSION, sp.t()).expect("valid extension"));
            })),
            ("herz_slice_norm", median_secs(a.repeats, || {
                std::hint::black_box(herzslice::herz::herz_slice_norm(&f, &hp));
            })),
        ];
        for (name, secs) in rows {
            println!("{:<16} {:>8} {:>10} {:>14}", name, n, cells, sig17(secs));
        }
    }
    Ok(())
}
