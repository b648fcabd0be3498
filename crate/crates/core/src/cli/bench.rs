use std::time::Instant;

use serde::Serialize;

use crate::bitree::{build_descendant, build_father_subdivided, build_symmetric, Bitree, CoverageMode};
use crate::error::Result;
use crate::instance::{normalize_degree, Instance};
use crate::oracles::{gen_random_tree, GenConfig, Shape};
use crate::penalty_engine::{compute_all_penalties_with, EngineOptions};

pub const CSV_HEADER: &str = "n,construction,median_ns,reps,seed";
pub const MIN_REPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Symmetric,
    Descendant,
    Father,
}

impl Construction {
    pub const ALL: [Construction; 3] = [Construction::Symmetric, Construction::Descendant, Construction::Father];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Symmetric => "symmetric",
            Construction::Descendant => "descendant",
            Construction::Father => "father",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub construction: Construction,
    pub median_ns: u128,
    pub reps: usize,
    pub seed: u64,
    /// Merge-and-scan entries read; not part of the CSV.
    pub merge_touches: u64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.n, self.construction.name(), self.median_ns, self.reps, self.seed)
    }
}

/// The benchmark tree for size `n`: uniform random shape, exactly `n` nodes,
/// seeded by `seed + n` so every size is fixed by the seed alone.
pub fn bench_instance(n: usize, seed: u64) -> Result<Instance> {
    gen_random_tree(&GenConfig {
        seed: seed.wrapping_add(n as u64),
        n: n..=n,
        cost: 1..=100,
        penalty: 1..=100,
        radius: 0..=1000,
        shape: Shape::UniformRandom,
    })
}

pub fn bench_bitree(t: &Instance, c: Construction) -> Bitree {
    let nt = normalize_degree(t, 0);
    match c {
        Construction::Symmetric => build_symmetric(&nt),
        Construction::Descendant => build_descendant(&nt),
        Construction::Father => build_father_subdivided(&nt).0,
    }
}

/// Times the engine alone (construction excluded), `reps` sequential runs,
/// and reports the median.
pub fn bench_one(n: usize, c: Construction, reps: usize, seed: u64) -> Result<BenchRecord> {
    let reps = reps.max(MIN_REPS);
    let b = bench_bitree(&bench_instance(n, seed)?, c);
    let mut times = Vec::with_capacity(reps);
    let mut merge_touches = 0;
    for _ in 0..reps {
        let start = Instant::now();
        let run = compute_all_penalties_with(&b, CoverageMode::Weak, EngineOptions::default());
        times.push(start.elapsed().as_nanos().max(1));
        merge_touches = run.stats.merge_touches;
        std::hint::black_box(run);
    }
    times.sort_unstable();
    Ok(BenchRecord { n, construction: c, median_ns: times[reps / 2], reps, seed, merge_touches })
}

pub fn run_bench(sizes: &[usize], constructions: &[Construction], reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &n in sizes {
        for &c in constructions {
            out.push(bench_one(n, c, reps, seed)?);
        }
    }
    Ok(out)
}

/// Mean of `median(2n) / median(n)` over consecutive doubling sizes.
pub fn mean_doubling_ratio(records: &[BenchRecord]) -> Option<f64> {
    let ratios: Vec<f64> = records
        .windows(2)
        .filter(|w| w[1].n == 2 * w[0].n && w[0].construction == w[1].construction)
        .map(|w| w[1].median_ns as f64 / w[0].median_ns as f64)
        .collect();
    (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
}
