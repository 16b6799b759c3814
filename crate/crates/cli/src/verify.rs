//! `verify`: every module's invariants run as checks over small seeded corpora.

use herzslice::blocks::{decompose, is_central_block, reconstruct, synthesis_bound_probe};
use herzslice::duality::{check_herz_holder, check_slice_holder, norm_by_duality_lower_bound, pairing};
use herzslice::format::sig17;
use herzslice::herz::{
    classical_herz_norm, herz_slice_norm, inclusion_check, intersection_check, weak_herz_slice_norm,
    weighted_sandwich_check,
};
use herzslice::lebesgue::{lp_norm, weak_lp_norm, weighted_lp_norm};
use herzslice::maximal::{estimate_operator_norm, evaluation_grid, evaluation_padding, hl_maximal, hl_maximal_oracle};
use herzslice::slice::{slice_norm, weak_slice_norm};
use herzslice::{
    CorpusConfig, Exponent, FunctionSpec, GridFunction, GridSpec, HerzParams, Primitive, SliceParams, SpecDocument,
    Variant,
};
use serde::Serialize;

use crate::output::print_json;
use crate::{Suite, VerifyArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub status: Status,
    /// Largest normalized violation seen; a check passes while this stays at
    /// or below its tolerance.
    pub worst_slack: f64,
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

/// Running maximum of normalized violations.
struct Tally {
    worst: f64,
    cases: usize,
}

impl Tally {
    fn new() -> Self {
        Self { worst: f64::NEG_INFINITY, cases: 0 }
    }

    fn push(&mut self, slack: f64) {
        self.cases += 1;
        self.worst = if slack.is_nan() { f64::INFINITY } else { self.worst.max(slack) };
    }

    /// `lhs ≤ rhs`, measured relative to the larger side.
    fn le(&mut self, lhs: f64, rhs: f64) {
        let scale = lhs.abs().max(rhs.abs());
        self.push(if scale == 0.0 { 0.0 } else { (lhs - rhs) / scale });
    }

    /// `a = b` in relative error.
    fn eq(&mut self, a: f64, b: f64) {
        let scale = a.abs().max(b.abs());
        self.push(if scale == 0.0 { 0.0 } else { (a - b).abs() / scale });
    }

    fn holds(&mut self, ok: bool) {
        self.push(if ok { 0.0 } else { 1.0 });
    }
}

type CheckFn<'a> = Box<dyn Fn() -> herzslice::Result<Tally> + 'a>;

struct Runner {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, name: &'static str, tol: f64, body: CheckFn<'_>) {
        let check = match body() {
            Ok(t) if t.cases == 0 => Check {
                suite: self.suite,
                name,
                status: Status::Skip,
                worst_slack: 0.0,
                details: "no applicable cases".into(),
            },
            Ok(t) => Check {
                suite: self.suite,
                name,
                status: if t.worst <= tol { Status::Pass } else { Status::Fail },
                worst_slack: t.worst,
                details: format!("{} cases, tolerance {tol:e}", t.cases),
            },
            Err(e) => Check { suite: self.suite, name, status: Status::Fail, worst_slack: f64::INFINITY, details: e.to_string() },
        };
        self.checks.push(check);
    }
}

struct Corpus {
    specs: Vec<FunctionSpec>,
    grid: GridSpec,
    functions: Vec<GridFunction>,
}

impl Corpus {
    fn new(seed: u64, size: usize, grid: GridSpec) -> herzslice::Result<Self> {
        let cfg = CorpusConfig::new(seed, size, grid);
        let specs = cfg.generate()?;
        let functions = cfg.sample_all()?;
        Ok(Self { specs, grid, functions })
    }
}

fn exp(p: f64) -> Exponent {
    Exponent::new(p).expect("positive exponent")
}

fn hp(alpha: f64, p: f64, t: f64, r: f64, q: f64, variant: Variant) -> HerzParams {
    HerzParams::new(alpha, exp(p), SliceParams::finite(t, r, q).expect("valid slice params"), variant)
        .expect("finite alpha")
}

fn grid_suite(r: &mut Runner, corpora: &[Corpus]) {
    r.run("samples_finite_inside_usable_radius", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            for f in &c.functions {
                t.holds(f.values().iter().all(|v| v.is_finite()));
                let reach = f.support_radius().unwrap_or(0.0);
                t.push((reach - c.grid.usable_radius()).max(0.0));
            }
        }
        Ok(t)
    }));
    r.run("add_negation_is_zero", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            t.holds(f.add(&f.scale(-1.0))?.is_zero());
        }
        Ok(t)
    }));
    r.run("translate_by_zero_is_identity", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            let zero = vec![0; c.grid.dim()];
            for f in &c.functions {
                t.holds(f.translate(&zero)? == *f);
            }
        }
        Ok(t)
    }));
    r.run("integral_is_linear", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            t.eq(f.scale(-2.5).integrate(), -2.5 * f.integrate());
        }
        Ok(t)
    }));
    r.run("spec_json_round_trip", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            for spec in &c.specs {
                let doc = SpecDocument::new(c.grid, spec.clone());
                let text = crate::output::to_json(&doc).map_err(|e| herzslice::Error::Config(e.to_string()))?;
                t.holds(SpecDocument::from_json(&text)? == doc);
            }
        }
        Ok(t)
    }));
}

fn lebesgue_suite(r: &mut Runner, corpora: &[Corpus]) {
    let ps = [1.0, 2.0, 3.5, f64::INFINITY];
    r.run("lp_homogeneous", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            for p in ps {
                t.eq(lp_norm(&f.scale(-3.0), exp(p)), 3.0 * lp_norm(f, exp(p)));
            }
        }
        Ok(t)
    }));
    r.run("weak_lp_below_lp", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            for p in [1.0, 2.0, 3.5] {
                t.le(weak_lp_norm(f, exp(p))?, lp_norm(f, exp(p)));
            }
        }
        Ok(t)
    }));
    r.run("weighted_zero_exponent_is_lp", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            for p in [1.0, 2.0, 3.5] {
                t.eq(weighted_lp_norm(f, exp(p), 0.0)?, lp_norm(f, exp(p)));
            }
        }
        Ok(t)
    }));
}

fn slice_suite(r: &mut Runner, corpora: &[Corpus]) {
    let sp = SliceParams::finite(0.5, 1.5, 3.0).expect("valid");
    r.run("r_equals_q_collapses_to_lq", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            for q in [1.5, 2.0, 3.0] {
                t.eq(slice_norm(f, &SliceParams::finite(0.5, q, q)?), lp_norm(f, exp(q)));
            }
        }
        Ok(t)
    }));
    r.run("weak_slice_below_slice", 1e-9, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            t.le(weak_slice_norm(f, &sp), slice_norm(f, &sp));
        }
        Ok(t)
    }));
    r.run("translation_invariant", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            // same lattice without the margin, so shifted supports stay legal
            let open = GridSpec::new(c.grid.dim(), c.grid.half_width(), c.grid.spacing())?;
            let shift: Vec<i64> = (0..c.grid.dim() as i64).map(|d| 3 - 5 * d).collect();
            for f in &c.functions {
                let f = GridFunction::new(open, f.values().to_vec())?;
                t.eq(slice_norm(&f.translate(&shift)?, &sp), slice_norm(&f, &sp));
            }
        }
        Ok(t)
    }));
    r.run("homogeneous", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            t.eq(slice_norm(&f.scale(0.75), &sp), 0.75 * slice_norm(f, &sp));
        }
        Ok(t)
    }));
}

fn herz_suite(r: &mut Runner, corpora: &[Corpus]) {
    let fs = || corpora.iter().flat_map(|c| &c.functions);
    r.run("r_equals_q_matches_classical", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            for variant in [Variant::Homogeneous, Variant::NonHomogeneous] {
                let p = hp(0.3, 1.5, 0.5, 2.0, 2.0, variant);
                t.eq(herz_slice_norm(f, &p), classical_herz_norm(f, 0.3, exp(1.5), exp(2.0), variant)?);
            }
        }
        Ok(t)
    }));
    r.run("power_identity", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        let s = 2.0;
        for f in fs() {
            let base = hp(0.4, 1.0, 0.5, 1.25, 1.5, Variant::Homogeneous);
            let scaled = hp(0.4 / s, s, 0.5, 1.25 * s, 1.5 * s, Variant::Homogeneous);
            t.eq(herz_slice_norm(&f.abs_pow(s)?, &base).powf(1.0 / s), herz_slice_norm(f, &scaled));
        }
        Ok(t)
    }));
    r.run("weak_herz_below_herz", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            for variant in [Variant::Homogeneous, Variant::NonHomogeneous] {
                let p = hp(0.3, 2.0, 0.5, 1.5, 3.0, variant);
                t.le(weak_herz_slice_norm(f, &p)?, herz_slice_norm(f, &p));
            }
        }
        Ok(t)
    }));
    r.run("inclusion_in_p", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            for variant in [Variant::Homogeneous, Variant::NonHomogeneous] {
                let p1 = hp(0.2, 1.0, 0.5, 1.5, 2.0, variant);
                let rep = inclusion_check(f, &p1, &p1.with_p(exp(2.0)))?;
                t.le(rep.second, rep.first);
            }
        }
        Ok(t)
    }));
    r.run("inclusion_in_alpha_nonhomogeneous", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            let p1 = hp(0.5, 2.0, 0.5, 1.5, 2.0, Variant::NonHomogeneous);
            let rep = inclusion_check(f, &p1, &p1.with_alpha(-0.5))?;
            t.le(rep.second, rep.first);
        }
        Ok(t)
    }));
    r.run("intersection_excess_nonpositive", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            let p = hp(0.5, 2.0, 0.5, 1.5, 3.0, Variant::Homogeneous);
            let rep = intersection_check(f, &p)?;
            let scale = rep.nonhomogeneous.powi(2).max(rep.slice.powi(2) + rep.homogeneous.powi(2));
            t.push(if scale == 0.0 { 0.0 } else { rep.excess(2.0) / scale });
        }
        Ok(t)
    }));
    r.run("weighted_sandwich", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        for f in fs() {
            for alpha in [-0.5, 1.0] {
                let (h, w) = weighted_sandwich_check(f, alpha, exp(2.0))?;
                let (lo, hi) = if alpha >= 0.0 { (w, alpha.exp2() * w) } else { (alpha.exp2() * w, w) };
                t.le(lo, h);
                t.le(h, hi);
            }
        }
        Ok(t)
    }));
}

fn blocks_suite(r: &mut Runner, corpora: &[Corpus]) {
    let params = [hp(0.3, 2.0, 0.5, 1.5, 3.0, Variant::Homogeneous), hp(-0.4, 1.5, 0.5, 2.0, 1.5, Variant::NonHomogeneous)];
    let params = &params;
    let decs = move || corpora.iter().flat_map(|c| &c.functions).flat_map(move |f| params.iter().map(move |p| (f, p)));
    r.run("round_trip", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for (f, p) in decs() {
            let back = reconstruct(&decompose(f, p)?)?;
            let scale = f.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let err = f.values().iter().zip(back.values()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            t.push(if scale == 0.0 { err } else { err / scale });
        }
        Ok(t)
    }));
    r.run("coefficient_norm_equals_norm", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for (f, p) in decs() {
            t.eq(decompose(f, p)?.coefficient_norm(), herz_slice_norm(f, p));
        }
        Ok(t)
    }));
    r.run("entries_are_central_blocks", 0.0, Box::new(move || {
        let mut t = Tally::new();
        for (f, p) in decs() {
            let dec = decompose(f, p)?;
            for e in &dec.entries {
                t.holds(e.lambda > 0.0 && is_central_block(&e.block.data, e.k, p, e.block.restrict_type).0);
            }
            let ks: std::collections::BTreeSet<_> = dec.entries.iter().map(|e| e.k).collect();
            t.holds(ks.len() == dec.entries.len());
        }
        Ok(t)
    }));
    r.run("canonical_synthesis_is_exact", 1e-12, Box::new(move || {
        let mut t = Tally::new();
        for (f, p) in decs() {
            let (lhs, rhs) = synthesis_bound_probe(&decompose(f, p)?)?;
            t.eq(lhs, rhs);
        }
        Ok(t)
    }));
}

fn maximal_suite(r: &mut Runner, corpora: &[Corpus]) {
    let ext = 2.0;
    r.run("fast_matches_oracle", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            let fast = hl_maximal(f, ext, 0.0)?;
            let oracle = hl_maximal_oracle(f, ext, 0.0)?;
            let scale = f.values().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let err = fast.values().iter().zip(oracle.values()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            t.push(err / scale);
        }
        Ok(t)
    }));
    r.run("dominates_abs", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            let m = evaluation_padding(&c.grid, ext, 0.0)?;
            let eval = evaluation_grid(&c.grid, ext, 0.0)?;
            for f in &c.functions {
                let mf = hl_maximal(f, ext, 0.0)?;
                for idx in 0..c.grid.len() {
                    let (row, col) = c.grid.row_col(idx);
                    let er = if c.grid.dim() == 2 { row + m } else { 0 };
                    let v = f.values()[idx].abs();
                    let scale = v.max(f64::MIN_POSITIVE);
                    t.push(((v - mf.values()[eval.index(er, col + m)]) / scale).max(0.0));
                }
            }
        }
        Ok(t)
    }));
    r.run("homogeneous", 1e-12, Box::new(|| {
        let mut t = Tally::new();
        for f in corpora.iter().flat_map(|c| &c.functions) {
            let a = hl_maximal(&f.scale(-1.5), ext, 0.0)?;
            let b = hl_maximal(f, ext, 0.0)?.scale(1.5);
            let scale = b.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let err = a.values().iter().zip(b.values()).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            t.push(if scale == 0.0 { err } else { err / scale });
        }
        Ok(t)
    }));
    r.run("ball_indicator_constant_at_least_one", 0.0, Box::new(|| {
        let mut t = Tally::new();
        for c in corpora {
            let ball = FunctionSpec::single(1.0, Primitive::BallIndicator { center: vec![0.0; c.grid.dim()], radius: 1.0 });
            let p = hp(0.0, 2.0, 0.5, 1.5, 2.0, Variant::Homogeneous);
            let est = estimate_operator_norm(&[ball], &c.grid, &p, ext)?;
            t.push((1.0 - est.constant).max(0.0));
        }
        Ok(t)
    }));
}

fn duality_suite(r: &mut Runner, corpora: &[Corpus], seed: u64) {
    let mut all_pairs: Vec<(&GridFunction, &GridFunction)> = Vec::new();
    for c in corpora {
        for (i, f) in c.functions.iter().enumerate() {
            for (j, g) in c.functions.iter().enumerate() {
                if i != j {
                    all_pairs.push((f, g));
                }
            }
        }
    }
    let all_pairs = &all_pairs;
    let pairs = move || all_pairs.iter().copied();
    r.run("pairing_symmetric", 0.0, Box::new(move || {
        let mut t = Tally::new();
        for (f, g) in pairs() {
            t.holds(pairing(f, g)? == pairing(g, f)?);
        }
        Ok(t)
    }));
    r.run("slice_holder", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        let sp = SliceParams::finite(0.5, 1.5, 3.0)?;
        for (f, g) in pairs() {
            let (lhs, rhs) = check_slice_holder(f, g, &sp)?;
            t.le(lhs, rhs);
        }
        Ok(t)
    }));
    r.run("herz_holder", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        for alpha in [-0.5, 0.0, 0.5] {
            for variant in [Variant::Homogeneous, Variant::NonHomogeneous] {
                let p = hp(alpha, 2.0, 0.5, 1.5, 3.0, variant);
                for (f, g) in pairs().step_by(3) {
                    let (lhs, rhs) = check_herz_holder(f, g, &p)?;
                    t.le(lhs, rhs);
                }
            }
        }
        Ok(t)
    }));
    r.run("duality_lower_bound_below_norm", 1e-9, Box::new(move || {
        let mut t = Tally::new();
        let p = hp(0.25, 2.0, 0.5, 1.5, 3.0, Variant::Homogeneous);
        for f in corpora.iter().flat_map(|c| &c.functions) {
            let bound = norm_by_duality_lower_bound(f, &p, 8, seed)?;
            t.push(bound.ratio() - 1.0);
        }
        Ok(t)
    }));
}

fn corpora(seed: u64, small: bool) -> herzslice::Result<Vec<Corpus>> {
    let (g1, g2) = if small {
        (GridSpec::new(1, 4.0, 1.0 / 16.0)?.with_margin(0.5)?, GridSpec::new(2, 2.0, 0.125)?.with_margin(0.25)?)
    } else {
        (GridSpec::new(1, 8.0, 1.0 / 16.0)?.with_margin(1.0)?, GridSpec::new(2, 4.0, 0.125)?.with_margin(1.0)?)
    };
    Ok(vec![Corpus::new(seed, 12, g1)?, Corpus::new(seed.wrapping_add(1), 4, g2)?])
}

pub fn outcome(suite: Suite, seed: u64) -> herzslice::Result<VerifyOutcome> {
    let regular = corpora(seed, false)?;
    let small = corpora(seed, true)?;
    let mut checks = Vec::new();
    let mut section = |name: &'static str, body: &dyn Fn(&mut Runner)| {
        let mut r = Runner { suite: name, checks: Vec::new() };
        body(&mut r);
        checks.extend(r.checks);
    };
    let all = suite == Suite::All;
    if all || suite == Suite::Grid {
        section("grid", &|r| grid_suite(r, &regular));
    }
    if all || suite == Suite::Lebesgue {
        section("lebesgue", &|r| lebesgue_suite(r, &regular));
    }
    if all || suite == Suite::Slice {
        section("slice", &|r| slice_suite(r, &regular));
    }
    if all || suite == Suite::Herz {
        section("herz", &|r| herz_suite(r, &regular));
    }
    if all || suite == Suite::Blocks {
        section("blocks", &|r| blocks_suite(r, &regular));
    }
    if all || suite == Suite::Maximal {
        section("maximal", &|r| maximal_suite(r, &small));
    }
    if all || suite == Suite::Duality {
        section("duality", &|r| duality_suite(r, &small, seed));
    }
    let name = format!("{suite:?}").to_lowercase();
    Ok(VerifyOutcome { suite: name, seed, checks })
}

pub fn run(a: &VerifyArgs) -> anyhow::Result<bool> {
    let out = outcome(a.suite, a.seed)?;
    if a.json {
        print_json(&out)?;
    } else {
        for c in &out.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            println!("{status} {}/{} worst_slack={} {}", c.suite, c.name, sig17(c.worst_slack), c.details);
        }
        let failed = out.checks.iter().filter(|c| c.status == Status::Fail).count();
        println!("{} checks, {} failed (suite {}, seed {})", out.checks.len(), failed, out.suite, out.seed);
    }
    Ok(out.passed())
}
