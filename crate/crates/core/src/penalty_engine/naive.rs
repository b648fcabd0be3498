use crate::bitree::{Bitree, CoverageMode, ExtScalar, Finite};
use crate::error::{Error, Result};

use super::PenaltyVector;

pub const DEFAULT_ORACLE_CAP: usize = 5000;

/// `p'(v)` for every `v` straight from the definition: one traversal per
/// source, charging `pi(u)` to every target the mode says it fails to cover.
pub fn naive_penalties(b: &Bitree, mode: CoverageMode) -> Result<PenaltyVector> {
    naive_penalties_capped(b, mode, DEFAULT_ORACLE_CAP)
}

pub fn naive_penalties_capped(b: &Bitree, mode: CoverageMode, cap: usize) -> Result<PenaltyVector> {
    let n = b.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = vec![0u64; n];
    let mut dist = vec![ExtScalar::ZERO; n];
    let mut visited = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for u in 0..n {
        let pi = b.penalty(u);
        if pi == 0 {
            continue;
        }
        let radius = Finite(b.radius(u));
        dist[u] = ExtScalar::ZERO;
        visited[u] = u;
        stack.push(u);
        while let Some(x) = stack.pop() {
            if mode.charges(dist[x], radius) {
                out[x] += pi;
            }
            for a in b.arcs(x) {
                if visited[a.to] != u {
                    visited[a.to] = u;
                    dist[a.to] = dist[x] + a.out;
                    stack.push(a.to);
                }
            }
        }
    }
    Ok(PenaltyVector(out))
}
