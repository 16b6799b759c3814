//! Seeded random test-function corpora.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{sample, FunctionSpec, GridFunction, GridSpec, Primitive, Term, GAUSSIAN_CUTOFF};

/// Relative weights of the primitive kinds. Fields missing from a config
/// file count as zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KindMix {
    #[serde(default)]
    pub power_annulus: f64,
    #[serde(default)]
    pub ball_indicator: f64,
    #[serde(default)]
    pub gaussian: f64,
    #[serde(default)]
    pub piecewise_random: f64,
}

impl Default for KindMix {
    fn default() -> Self {
        Self { power_annulus: 1.0, ball_indicator: 1.0, gaussian: 1.0, piecewise_random: 1.0 }
    }
}

impl KindMix {
    pub fn only(kind: &str) -> Result<Self> {
        let mut mix = Self { power_annulus: 0.0, ball_indicator: 0.0, gaussian: 0.0, piecewise_random: 0.0 };
        match kind {
            "power_annulus" => mix.power_annulus = 1.0,
            "ball_indicator" => mix.ball_indicator = 1.0,
            "gaussian" => mix.gaussian = 1.0,
            "piecewise_random" => mix.piecewise_random = 1.0,
            _ => return Err(Error::Config(format!("unknown primitive kind {kind:?}"))),
        }
        Ok(mix)
    }

    fn weights(&self) -> [f64; 4] {
        [self.power_annulus, self.ball_indicator, self.gaussian, self.piecewise_random]
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.weights();
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::Config(format!("mix weights must be finite and nonnegative, got {w:?}")));
        }
        if w.iter().all(|x| *x == 0.0) {
            return Err(Error::Config("mix weights are all zero".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub seed: u64,
    pub size: usize,
    pub grid: GridSpec,
    #[serde(default)]
    pub mix: KindMix,
}

impl CorpusConfig {
    pub fn new(seed: u64, size: usize, grid: GridSpec) -> Self {
        Self { seed, size, grid, mix: KindMix::default() }
    }

    pub fn with_mix(mut self, mix: KindMix) -> Self {
        self.mix = mix;
        self
    }

    /// `size` specs, each a sum of one to three terms with coefficients
    /// `±U[0.5, 2]`, all supported inside the grid's usable radius.
    pub fn generate(&self) -> Result<Vec<FunctionSpec>> {
        if self.size == 0 {
            return Err(Error::Config("corpus size must be at least 1".into()));
        }
        self.mix.validate()?;
        let kinds = WeightedIndex::new(self.mix.weights()).map_err(|e| Error::Config(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = self.grid.dim();
        let rad = self.grid.usable_radius();
        let h = self.grid.spacing();
        Ok((0..self.size)
            .map(|_| {
                let terms = rng.gen_range(1..=3);
                let terms = (0..terms)
                    .map(|_| {
                        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        let coef = sign * rng.gen_range(0.5..=2.0);
                        let primitive = match kinds.sample(&mut rng) {
                            0 => {
                                let b = rng.gen_range(0.3 * rad..=rad);
                                let a = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.5 * b) };
                                let beta = rng.gen_range(-0.9 * n as f64..=1.5);
                                Primitive::PowerAnnulus { beta, a, b }
                            }
                            1 => {
                                let lo = (2.0 * h).max(0.05 * rad).min(0.5 * rad);
                                let radius = rng.gen_range(lo..=0.5 * rad);
                                Primitive::BallIndicator { center: point_in_ball(&mut rng, n, rad - radius), radius }
                            }
                            2 => {
                                let hi = rad / 8.0;
                                let lo = h.max(0.02 * rad).min(hi);
                                let width = rng.gen_range(lo..=hi);
                                let center = point_in_ball(&mut rng, n, rad - GAUSSIAN_CUTOFF * width);
                                Primitive::Gaussian { center, width }
                            }
                            _ => Primitive::PiecewiseRandom {
                                seed: rng.gen(),
                                levels: rng.gen_range(1..=6),
                                support_radius: rng.gen_range(0.3 * rad..=rad),
                            },
                        };
                        Term::new(coef, primitive)
                    })
                    .collect();
                FunctionSpec::new(terms)
            })
            .collect())
    }

    /// The corpus sampled on its own grid.
    pub fn sample_all(&self) -> Result<Vec<GridFunction>> {
        self.generate()?.iter().map(|s| sample(s, &self.grid)).collect()
    }
}

/// Uniform point in the closed ball of radius `rad` (shrunk slightly so
/// supports stay inside the usable radius after rounding).
fn point_in_ball(rng: &mut ChaCha8Rng, n: usize, rad: f64) -> Vec<f64> {
    let rad = rad.max(0.0) * (1.0 - 1e-9);
    if n == 1 {
        vec![rng.gen_range(-rad..=rad)]
    } else {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = rad * rng.gen::<f64>().sqrt();
        vec![d * theta.cos(), d * theta.sin()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        for grid in [GridSpec::new(1, 8.0, 1.0 / 16.0).unwrap(), GridSpec::new(2, 4.0, 0.125).unwrap()] {
            let cfg = CorpusConfig::new(11, 40, grid);
            let a = cfg.generate().unwrap();
            assert_eq!(a, cfg.generate().unwrap());
            assert_ne!(a, CorpusConfig::new(12, 40, grid).generate().unwrap());
            for spec in &a {
                assert!((1..=3).contains(&spec.terms.len()));
                for t in &spec.terms {
                    assert!((0.5..=2.0).contains(&t.coef.abs()));
                    assert!(t.primitive.support_radius() <= grid.usable_radius());
                }
                sample(spec, &grid).unwrap();
            }
            let kinds: std::collections::BTreeSet<_> = a.iter().flat_map(|s| s.terms.iter().map(|t| t.primitive.name())).collect();
            assert_eq!(kinds.len(), 4);
        }
    }

    #[test]
    fn single_kind_mix() {
        let grid = GridSpec::new(1, 8.0, 0.125).unwrap();
        let cfg = CorpusConfig::new(3, 20, grid).with_mix(KindMix::only("ball_indicator").unwrap());
        for spec in cfg.generate().unwrap() {
            assert!(spec.terms.iter().all(|t| t.primitive.name() == "ball_indicator"));
        }
        let json = r#"{"seed": 1, "size": 2, "grid": {"n": 1, "L": 8, "h": 0.125}, "mix": {"gaussian": 2}}"#;
        let cfg: CorpusConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.mix.ball_indicator, 0.0);
        assert!(cfg.generate().unwrap().iter().all(|s| s.terms.iter().all(|t| t.primitive.name() == "gaussian")));
    }

    #[test]
    fn config_errors() {
        let grid = GridSpec::new(1, 8.0, 0.125).unwrap();
        assert!(matches!(CorpusConfig::new(0, 0, grid).generate(), Err(Error::Config(_))));
        let zero = KindMix { power_annulus: 0.0, ball_indicator: 0.0, gaussian: 0.0, piecewise_random: 0.0 };
        assert!(CorpusConfig::new(0, 3, grid).with_mix(zero).generate().is_err());
        let neg = KindMix { gaussian: -1.0, ..KindMix::default() };
        assert!(CorpusConfig::new(0, 3, grid).with_mix(neg).generate().is_err());
        assert!(KindMix::only("sinc").is_err());
    }
}
