//! Instances encoding the set-disjointness language `W_n`: tuples
//! `(x_1..x_n, y_1..y_n)` with `x_1 < .. < x_n` and no `x_i = y_j`. The
//! single maximum coverage optimum of the generated tree is `n` for members
//! and `n - 1` when exactly one `y_j` hits an `x_i`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::bitree::CoverageMode;
use crate::covering_dp::solve_single_maxcov;
use crate::error::{Error, Result};
use crate::instance::{Edge, Instance};
use crate::medianoid::{solve_medianoid, MedianoidInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WnTuple {
    pub xs: Vec<u64>,
    pub ys: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    Member,
    NotMember,
}

/// The generated tree: a path `u - x~_1 - .. - x~_n - v` of length `c(u,v)`
/// with `d(u, x~_i) = x_i`, and pendant leaves `u_i` at `rho - y_i` from `u`
/// and `v_i` at `y_i + rho - c(u,v)` from `v`. Every node has penalty 1 and
/// radius `rho`.
#[derive(Debug, Clone)]
pub struct WnInstance {
    pub instance: Instance,
    pub c_uv: u64,
    pub rho: u64,
    pub u: usize,
    pub v: usize,
    pub path_nodes: Vec<usize>,
    pub u_pendants: Vec<usize>,
    pub v_pendants: Vec<usize>,
}

impl WnTuple {
    pub fn new(xs: Vec<u64>, ys: Vec<u64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidTuple(format!("{} xs but {} ys", xs.len(), ys.len())));
        }
        Ok(WnTuple { xs, ys })
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn xs_sorted(&self) -> bool {
        self.xs.windows(2).all(|w| w[0] < w[1])
    }

    fn check_positive(&self) -> Result<()> {
        if self.xs.iter().chain(&self.ys).any(|&x| x == 0) {
            return Err(Error::InvalidTuple("values must be positive".into()));
        }
        Ok(())
    }
}

/// Builds the coverage instance, or `None` when the xs are not strictly
/// increasing (the tuple is then not a member and no tree is needed).
pub fn build_wn_instance(t: &WnTuple) -> Result<Option<WnInstance>> {
    if !t.xs_sorted() {
        return Ok(None);
    }
    t.check_positive()?;
    let n = t.n();
    let max = t.xs.iter().chain(&t.ys).copied().max().unwrap_or(0);
    let c_uv = max + 1;
    let rho = c_uv + 1;
    let (u, v) = (0, 1);
    let path_nodes: Vec<usize> = (2..2 + n).collect();
    let u_pendants: Vec<usize> = (2 + n..2 + 2 * n).collect();
    let v_pendants: Vec<usize> = (2 + 2 * n..2 + 3 * n).collect();

    let mut edges = Vec::with_capacity(3 * n + 1);
    let mut prev = (u, 0);
    for (i, &x) in t.xs.iter().enumerate() {
        edges.push(Edge { a: prev.0, b: path_nodes[i], cost: x - prev.1 });
        prev = (path_nodes[i], x);
    }
    edges.push(Edge { a: prev.0, b: v, cost: c_uv - prev.1 });
    for (i, &y) in t.ys.iter().enumerate() {
        edges.push(Edge { a: u, b: u_pendants[i], cost: rho - y });
        edges.push(Edge { a: v, b: v_pendants[i], cost: y + rho - c_uv });
    }
    let count = 3 * n + 2;
    let instance = Instance::new(edges, vec![1; count], vec![rho; count])?;
    Ok(Some(WnInstance { instance, c_uv, rho, u, v, path_nodes, u_pendants, v_pendants }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WnDecision {
    pub membership: Membership,
    /// Minimum single-node penalty; `None` when the sortedness check failed.
    pub min_penalty: Option<u64>,
}

/// Decides `W_n` membership through single maximum coverage.
pub fn decide_wn_membership(t: &WnTuple) -> Result<WnDecision> {
    let Some(wn) = build_wn_instance(t)? else {
        return Ok(WnDecision { membership: Membership::NotMember, min_penalty: None });
    };
    let best = solve_single_maxcov(&wn.instance, CoverageMode::Weak);
    let membership = if best.penalty == t.n() as u64 { Membership::Member } else { Membership::NotMember };
    Ok(WnDecision { membership, min_penalty: Some(best.penalty) })
}

/// The definition: sorted xs and no x equal to any y.
pub fn naive_wn_check(t: &WnTuple) -> Membership {
    let disjoint = t.xs.iter().all(|x| !t.ys.contains(x));
    if t.xs_sorted() && disjoint {
        Membership::Member
    } else {
        Membership::NotMember
    }
}

/// Every node `z` of the coverage tree gets a pendant leaf `z'` at distance
/// `rho + 1`; the pendants form `X` and weigh nothing, the original nodes
/// weigh 1. Then `w(y < X) = (3n + 2) - p(y)` for every original node `y`.
pub fn build_medianoid_hardness(t: &WnTuple) -> Result<Option<MedianoidInstance>> {
    let Some(wn) = build_wn_instance(t)? else {
        return Ok(None);
    };
    let base = &wn.instance;
    let count = base.n();
    let mut edges = base.edges().to_vec();
    edges.extend((0..count).map(|z| Edge { a: z, b: count + z, cost: wn.rho + 1 }));
    let mut weight = vec![1; count];
    weight.extend(std::iter::repeat_n(0, count));
    let tree = Instance::new(edges, weight, vec![0; 2 * count])?;
    MedianoidInstance::new(tree, (count..2 * count).collect()).map(Some)
}

/// Decides membership through the medianoid optimum.
pub fn decide_wn_via_medianoid(t: &WnTuple) -> Result<Membership> {
    let Some(mi) = build_medianoid_hardness(t)? else {
        return Ok(Membership::NotMember);
    };
    let customers = 3 * t.n() as u64 + 2;
    let best = solve_medianoid(&mi)?;
    Ok(if best.captured == customers - t.n() as u64 { Membership::Member } else { Membership::NotMember })
}

/// A member tuple `x_1 < y_{p(1)} < x_2 < .. < x_n < y_{p(n)}` with random
/// gaps and a random permutation `p` of the ys.
pub fn random_interleaved(n: usize, rng: &mut impl Rng) -> WnTuple {
    let mut values = Vec::with_capacity(2 * n);
    let mut cur = 0;
    for _ in 0..2 * n {
        cur += rng.gen_range(1..=5);
        values.push(cur);
    }
    let xs = values.iter().step_by(2).copied().collect();
    let mut ys: Vec<u64> = values.iter().skip(1).step_by(2).copied().collect();
    ys.shuffle(rng);
    WnTuple { xs, ys }
}

/// Sets one random y equal to one random x.
pub fn collide_one(t: &WnTuple, rng: &mut impl Rng) -> WnTuple {
    let mut out = t.clone();
    if t.n() > 0 {
        let j = rng.gen_range(0..t.n());
        let i = rng.gen_range(0..t.n());
        out.ys[j] = t.xs[i];
    }
    out
}
