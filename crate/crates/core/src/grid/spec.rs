//! A small symbolic language for test functions and its pointwise sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};

/// Gaussians are cut off at this many widths from their center.
pub const GAUSSIAN_CUTOFF: f64 = 4.0;

/// Tiles per axis of a piecewise-random primitive.
pub const RANDOM_TILES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    /// `|x|^beta · 1{a < |x| ≤ b}`.
    PowerAnnulus { beta: f64, a: f64, b: f64 },
    /// Indicator of the closed ball `|x - center| ≤ radius`.
    BallIndicator { center: Vec<f64>, radius: f64 },
    /// `exp(-|x - center|² / width²)`, cut off at `GAUSSIAN_CUTOFF · width`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// Step function on a `RANDOM_TILES`-per-axis tiling of
    /// `[-support_radius, support_radius]^n`, restricted to the ball of that
    /// radius. Each tile takes a value in `{0, 1/levels, .., 1}` drawn from
    /// `seed`.
    PiecewiseRandom { seed: u64, levels: u32, support_radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    #[serde(flatten)]
    pub primitive: Primitive,
}

/// A finite linear combination of primitives.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub terms: Vec<Term>,
}

/// On-disk form: a grid plus the terms to sample on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub grid: GridSpec,
    pub terms: Vec<Term>,
}

impl SpecDocument {
    pub fn new(grid: GridSpec, spec: FunctionSpec) -> Self {
        Self { grid, terms: spec.terms }
    }

    pub fn spec(&self) -> FunctionSpec {
        FunctionSpec { terms: self.terms.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn sample(&self) -> Result<GridFunction> {
        sample(&self.spec(), &self.grid)
    }
}

impl Term {
    pub fn new(coef: f64, primitive: Primitive) -> Self {
        Self { coef, primitive }
    }
}

impl FunctionSpec {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn single(coef: f64, primitive: Primitive) -> Self {
        Self { terms: vec![Term::new(coef, primitive)] }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Primitive {
    pub fn name(&self) -> &'static str {
        match self {
            Primitive::PowerAnnulus { .. } => "power_annulus",
            Primitive::BallIndicator { .. } => "ball_indicator",
            Primitive::Gaussian { .. } => "gaussian",
            Primitive::PiecewiseRandom { .. } => "piecewise_random",
        }
    }

    /// Radius of the smallest origin-centered ball containing the support.
    pub fn support_radius(&self) -> f64 {
        match self {
            Primitive::PowerAnnulus { b, .. } => *b,
            Primitive::BallIndicator { center, radius } => norm(center) + radius,
            Primitive::Gaussian { center, width } => norm(center) + GAUSSIAN_CUTOFF * width,
            Primitive::PiecewiseRandom { support_radius, .. } => *support_radius,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(format!("{}: {msg}", self.name())));
        match self {
            Primitive::PowerAnnulus { beta, a, b } => {
                if !(beta.is_finite() && *a >= 0.0 && b > a && b.is_finite()) {
                    return bad(format!("need finite beta and 0 <= a < b, got a = {a}, b = {b}"));
                }
                if *a == 0.0 && *beta <= -(dim as f64) {
                    return Err(Error::Domain(format!(
                        "power_annulus with a = 0 and beta = {beta} <= -n is not locally integrable"
                    )));
                }
            }
            Primitive::BallIndicator { center, radius } => {
                if center.len() != dim {
                    return bad(format!("center has {} components, grid has {dim}", center.len()));
                }
                if !(*radius > 0.0) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
            }
            Primitive::Gaussian { center, width } => {
                if center.len() != dim {
                    return bad(format!("center has {} components, grid has {dim}", center.len()));
                }
                if !(*width > 0.0) {
                    return bad(format!("width must be positive, got {width}"));
                }
            }
            Primitive::PiecewiseRandom { levels, support_radius, .. } => {
                if *levels == 0 || !(*support_radius > 0.0) {
                    return bad("need levels >= 1 and a positive support radius".into());
                }
            }
        }
        Ok(())
    }

    fn prepare(&self, dim: usize) -> Prepared<'_> {
        match self {
            Primitive::PiecewiseRandom { seed, levels, support_radius } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let tiles = RANDOM_TILES.pow(dim as u32);
                let table = (0..tiles)
                    .map(|_| rng.gen_range(0..=*levels) as f64 / *levels as f64)
                    .collect();
                Prepared::Tiles { radius: *support_radius, table }
            }
            other => Prepared::Closed(other),
        }
    }
}

enum Prepared<'a> {
    Closed(&'a Primitive),
    Tiles { radius: f64, table: Vec<f64> },
}

impl Prepared<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Prepared::Closed(Primitive::PowerAnnulus { beta, a, b }) => {
                let r = norm(x);
                if *a < r && r <= *b { r.powf(*beta) } else { 0.0 }
            }
            Prepared::Closed(Primitive::BallIndicator { center, radius }) => {
                let d2: f64 = x.iter().zip(center).map(|(u, c)| (u - c) * (u - c)).sum();
                if d2 <= radius * radius { 1.0 } else { 0.0 }
            }
            Prepared::Closed(Primitive::Gaussian { center, width }) => {
                let d2: f64 = x.iter().zip(center).map(|(u, c)| (u - c) * (u - c)).sum();
                let cut = GAUSSIAN_CUTOFF * width;
                if d2 <= cut * cut { (-d2 / (width * width)).exp() } else { 0.0 }
            }
            Prepared::Closed(Primitive::PiecewiseRandom { .. }) => unreachable!(),
            Prepared::Tiles { radius, table } => {
                if norm(x) > *radius {
                    return 0.0;
                }
                let side = 2.0 * radius / RANDOM_TILES as f64;
                let tile = |u: f64| (((u + radius) / side).floor() as isize).clamp(0, RANDOM_TILES as isize - 1) as usize;
                let idx = x.iter().fold(0, |acc, &u| acc * RANDOM_TILES + tile(u));
                table[idx]
            }
        }
    }
}

/// Samples `spec` pointwise at the cell centers of `grid`.
///
/// Every primitive's support must lie within `|x| ≤ L - margin`.
pub fn sample(spec: &FunctionSpec, grid: &GridSpec) -> Result<GridFunction> {
    let dim = grid.dim();
    let limit = grid.usable_radius();
    for term in &spec.terms {
        term.primitive.validate(dim)?;
        let radius = term.primitive.support_radius();
        if radius > limit * (1.0 + 1e-12) {
            return Err(Error::SupportViolation {
                what: term.primitive.name().into(),
                radius,
                limit,
            });
        }
        if !term.coef.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite coefficient {}", term.coef)));
        }
    }
    let prepared: Vec<_> = spec.terms.iter().map(|t| (t.coef, t.primitive.prepare(dim))).collect();
    GridFunction::from_fn(*grid, |x| prepared.iter().map(|(c, p)| c * p.eval(x)).sum())
}
