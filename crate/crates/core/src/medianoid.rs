//! Discrete `(1,X)`-medianoid: the best new node `y` against an existing node
//! set `X`, capturing every customer strictly closer to `y` than to `X`.
//! Reduced to maximum coverage with radius `d(u, X)` in strict mode.

use serde::Serialize;

use crate::bitree::CoverageMode;
use crate::covering_dp::node_penalties;
use crate::error::{Error, Result};
use crate::instance::{distances_from, Instance};

/// A tree with node weights in the penalty slot and a competitor set `X`.
#[derive(Debug, Clone)]
pub struct MedianoidInstance {
    tree: Instance,
    competitors: Vec<usize>,
}

impl MedianoidInstance {
    pub fn new(tree: Instance, mut competitors: Vec<usize>) -> Result<Self> {
        if competitors.is_empty() {
            return Err(Error::EmptyCompetitorSet);
        }
        if let Some(&x) = competitors.iter().find(|&&x| x >= tree.n()) {
            return Err(Error::UnknownNode(x));
        }
        competitors.sort_unstable();
        competitors.dedup();
        Ok(MedianoidInstance { tree, competitors })
    }

    pub fn tree(&self) -> &Instance {
        &self.tree
    }

    pub fn competitors(&self) -> &[usize] {
        &self.competitors
    }

    pub fn weight(&self, u: usize) -> u64 {
        self.tree.penalty(u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedianoidResult {
    pub node: usize,
    pub captured: u64,
    /// `w(y < X)` for every candidate `y`.
    pub capture: Vec<u64>,
}

/// `d(u, X)` for every node: a bottom-up pass toward an arbitrary root,
/// then a top-down pass.
pub fn distances_to_set(t: &Instance, set: &[usize]) -> Result<Vec<u64>> {
    if set.is_empty() {
        return Err(Error::EmptyCompetitorSet);
    }
    let tree = t.rooted(0)?;
    let mut best = vec![u64::MAX; t.n()];
    for &x in set {
        *best.get_mut(x).ok_or(Error::UnknownNode(x))? = 0;
    }
    for &v in tree.preorder().iter().rev() {
        if v != tree.root() {
            let f = tree.father(v);
            let via = best[v].saturating_add(tree.father_cost(v));
            best[f] = best[f].min(via);
        }
    }
    for &v in tree.preorder() {
        if v != tree.root() {
            let via = best[tree.father(v)].saturating_add(tree.father_cost(v));
            best[v] = best[v].min(via);
        }
    }
    Ok(best)
}

fn pick(capture: Vec<u64>) -> MedianoidResult {
    let node = (0..capture.len()).max_by_key(|&y| (capture[y], std::cmp::Reverse(y))).expect("nonempty");
    MedianoidResult { node, captured: capture[node], capture }
}

pub fn solve_medianoid(mi: &MedianoidInstance) -> Result<MedianoidResult> {
    let t = mi.tree();
    let radius = distances_to_set(t, mi.competitors())?;
    let reduced = t.with_node_data(t.penalties().to_vec(), radius)?;
    let total = reduced.total_penalty();
    let p = node_penalties(&reduced, CoverageMode::Strict);
    Ok(pick(p.into_iter().map(|pen| total - pen).collect()))
}

pub const MEDIANOID_ORACLE_CAP: usize = 5000;

/// `w(y < X)` for each candidate straight from the definition.
pub fn naive_medianoid(mi: &MedianoidInstance) -> Result<MedianoidResult> {
    let t = mi.tree();
    let n = t.n();
    if n > MEDIANOID_ORACLE_CAP {
        return Err(Error::CapExceeded { n, cap: MEDIANOID_ORACLE_CAP });
    }
    let mut to_x = vec![u64::MAX; n];
    for &x in mi.competitors() {
        for (best, d) in to_x.iter_mut().zip(distances_from(t, x)?) {
            *best = (*best).min(d);
        }
    }
    let capture = (0..n)
        .map(|y| {
            let dy = distances_from(t, y).expect("node exists");
            (0..n).filter(|&u| dy[u] < to_x[u]).map(|u| mi.weight(u)).sum()
        })
        .collect();
    Ok(pick(capture))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    fn unit_path() -> Instance {
        parse_instance("3\n1 2 1\n2 3 1\n1 0\n1 0\n1 0\n").unwrap()
    }

    #[test]
    fn set_distances() {
        let t = unit_path();
        assert_eq!(distances_to_set(&t, &[1]).unwrap(), vec![1, 0, 1]);
        assert_eq!(distances_to_set(&t, &[0, 1, 2]).unwrap(), vec![0, 0, 0]);
        assert_eq!(distances_to_set(&t, &[]), Err(Error::EmptyCompetitorSet));
    }

    #[test]
    fn path_with_middle_competitor() {
        let mi = MedianoidInstance::new(unit_path(), vec![1]).unwrap();
        let fast = solve_medianoid(&mi).unwrap();
        assert_eq!((fast.node, fast.captured), (0, 1));
        assert_eq!(fast, naive_medianoid(&mi).unwrap());
    }

    #[test]
    fn competitors_everywhere_capture_nothing() {
        let mi = MedianoidInstance::new(unit_path(), vec![0, 1, 2]).unwrap();
        let r = solve_medianoid(&mi).unwrap();
        assert!(r.capture.iter().all(|&c| c == 0));
        assert_eq!(r.node, 0);
    }

    #[test]
    fn heavy_far_node() {
        // X = {1}; node 5 is heavy and far away along a path
        let t = parse_instance("5\n1 2 1\n2 3 4\n3 4 4\n4 5 4\n0 0\n1 0\n1 0\n1 0\n100 0\n").unwrap();
        let mi = MedianoidInstance::new(t, vec![0]).unwrap();
        let fast = solve_medianoid(&mi).unwrap();
        let slow = naive_medianoid(&mi).unwrap();
        assert_eq!(fast, slow);
        // the neighbour of X is already strictly closer to everything behind it
        assert_eq!((fast.node, fast.captured), (1, 103));
    }

    #[test]
    fn zero_weights() {
        let t = parse_instance("3\n1 2 1\n2 3 1\n0 0\n0 0\n0 0\n").unwrap();
        let mi = MedianoidInstance::new(t, vec![2]).unwrap();
        let r = naive_medianoid(&mi).unwrap();
        assert_eq!((r.node, r.captured), (0, 0));
        assert_eq!(solve_medianoid(&mi).unwrap(), r);
    }

    #[test]
    fn bad_competitors() {
        assert!(matches!(MedianoidInstance::new(unit_path(), vec![]), Err(Error::EmptyCompetitorSet)));
        assert!(matches!(MedianoidInstance::new(unit_path(), vec![7]), Err(Error::UnknownNode(7))));
    }
}
