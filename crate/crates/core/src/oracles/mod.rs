//! Seeded random instances and the harness that checks every fast routine
//! against its brute-force counterpart.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64`. Its output stream is fixed by the algorithm, so a seed
//! reproduces the same instance on any platform.

mod suite;

pub use suite::{
    check_engine, check_hardness, check_indirect, check_medianoid, rerun, run_equivalence_suite, Check, CheckOutcome,
    Failure, Report, Status,
};

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance};

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    #[default]
    UniformRandom,
    Path,
    Caterpillar,
    Star,
    BalancedBinary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub n: RangeInclusive<usize>,
    pub cost: RangeInclusive<u64>,
    pub penalty: RangeInclusive<u64>,
    pub radius: RangeInclusive<u64>,
    pub shape: Shape,
}

impl Default for GenConfig {
    /// Small values on purpose: they make distance ties, and ties are where
    /// the weak/strict distinction lives.
    fn default() -> Self {
        GenConfig { seed: 0, n: 1..=12, cost: 0..=9, penalty: 0..=9, radius: 0..=15, shape: Shape::UniformRandom }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || *self.n.start() == 0 {
            return Err(Error::InvalidConfig(format!("node range {:?} must be nonempty and positive", self.n)));
        }
        for (name, r) in [("cost", &self.cost), ("penalty", &self.penalty), ("radius", &self.radius)] {
            if r.is_empty() {
                return Err(Error::InvalidConfig(format!("{name} range {r:?} is empty")));
            }
        }
        Ok(())
    }
}

/// Draws one instance. Node `i > 0` gets its father from the shape; for the
/// uniform shape that father is uniform over `0..i`.
pub fn gen_random_tree(cfg: &GenConfig) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    gen_with(cfg, &mut rng)
}

pub(crate) fn gen_with(cfg: &GenConfig, rng: &mut Rng64) -> Result<Instance> {
    let n = rng.gen_range(cfg.n.clone());
    let spine = n.div_ceil(2);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let father = match cfg.shape {
            Shape::UniformRandom => rng.gen_range(0..i),
            Shape::Path => i - 1,
            Shape::Caterpillar if i < spine => i - 1,
            Shape::Caterpillar => rng.gen_range(0..spine),
            Shape::Star => 0,
            Shape::BalancedBinary => (i - 1) / 2,
        };
        edges.push(Edge { a: father, b: i, cost: rng.gen_range(cfg.cost.clone()) });
    }
    let penalty = (0..n).map(|_| rng.gen_range(cfg.penalty.clone())).collect();
    let radius = (0..n).map(|_| rng.gen_range(cfg.radius.clone())).collect();
    Ok(Instance::new(edges, penalty, radius)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::serialize;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig { seed: 42, n: 5..=40, ..GenConfig::default() };
        let a = gen_random_tree(&cfg).unwrap();
        let b = gen_random_tree(&cfg).unwrap();
        assert_eq!(serialize(&a), serialize(&b));
        let c = gen_random_tree(&cfg.with_seed(43)).unwrap();
        assert_ne!(serialize(&a), serialize(&c));
    }

    #[test]
    fn shapes() {
        let path = gen_random_tree(&GenConfig { n: 3..=3, shape: Shape::Path, ..GenConfig::default() }).unwrap();
        assert_eq!(path.edges().iter().map(|e| (e.a, e.b)).collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let star = gen_random_tree(&GenConfig { n: 6..=6, shape: Shape::Star, ..GenConfig::default() }).unwrap();
        assert_eq!(star.degree(0), 5);
        let bin = gen_random_tree(&GenConfig { n: 7..=7, shape: Shape::BalancedBinary, ..GenConfig::default() }).unwrap();
        assert!((0..7).all(|v| bin.degree(v) <= 3));
        let cat = gen_random_tree(&GenConfig { n: 20..=20, shape: Shape::Caterpillar, ..GenConfig::default() }).unwrap();
        assert!((10..20).all(|v| cat.degree(v) == 1));
        let single = gen_random_tree(&GenConfig { n: 1..=1, ..GenConfig::default() }).unwrap();
        assert_eq!(single.n(), 1);
    }

    #[test]
    fn uniform_fathers_precede_children() {
        let t = gen_random_tree(&GenConfig { seed: 9, n: 50..=50, ..GenConfig::default() }).unwrap();
        assert!(t.edges().iter().all(|e| e.a < e.b));
    }

    #[test]
    fn bad_ranges() {
        #[allow(clippy::reversed_empty_ranges)]
        let empty = GenConfig { cost: 5..=4, ..GenConfig::default() };
        assert!(matches!(gen_random_tree(&empty), Err(Error::InvalidConfig(_))));
        let zero = GenConfig { n: 0..=3, ..GenConfig::default() };
        assert!(matches!(gen_random_tree(&zero), Err(Error::InvalidConfig(_))));
    }
}
