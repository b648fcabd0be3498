//! Indirect covering subtree via the bottom-up `C`/`C+` dynamic program, fed
//! by three penalty-engine passes; plus single maximum coverage and an
//! exhaustive oracle.

use serde::Serialize;

use crate::bitree::{build_descendant, build_father_subdivided, build_symmetric, CoverageMode, ExtScalar, Finite};
use crate::error::{Error, Result};
use crate::instance::{distances_from, normalize_degree, Instance, RootedTree};
use crate::penalty_engine::{compute_all_penalties_with, EngineOptions, EngineStats};

/// Per original node `v`: `p(v)`, `p(T_v, v)` and `p(T_v, f(v))`. At the root
/// `f(s) = s`, so the last two agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTriples {
    pub p: Vec<u64>,
    pub p_subtree: Vec<u64>,
    pub p_subtree_father: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Choice {
    TookEdge,
    PaidPenalty,
}

/// `C(v)`, `C+(v)` and the `C+` minimizer. `C+` and the choice are `None`
/// at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTables {
    pub c: Vec<u64>,
    pub c_plus: Vec<Option<u64>>,
    pub choice: Vec<Option<Choice>>,
}

/// An optimal subtree `Y` with its cost split. Node ids are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub total: u64,
    pub setup: u64,
    pub penalty: u64,
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Everything computed on the way to an indirect covering solution.
#[derive(Debug, Clone)]
pub struct IndirectRun {
    pub solution: Solution,
    pub tree: RootedTree,
    pub triples: PTriples,
    pub tables: DpTables,
    pub stats: [EngineStats; 3],
}

/// Root used for the DP and the descendant constructions.
pub const DP_ROOT: usize = 0;

pub fn compute_p_triples(t: &Instance, root: usize, mode: CoverageMode) -> PTriples {
    compute_p_triples_with(t, root, mode, EngineOptions::default()).0
}

pub fn compute_p_triples_with(t: &Instance, root: usize, mode: CoverageMode, opts: EngineOptions) -> (PTriples, [EngineStats; 3]) {
    let nt = normalize_degree(t, root);
    let sym = compute_all_penalties_with(&build_symmetric(&nt), mode, opts);
    let desc = compute_all_penalties_with(&build_descendant(&nt), mode, opts);
    let (fb, fprime) = build_father_subdivided(&nt);
    let fath = compute_all_penalties_with(&fb, mode, opts);

    let n = t.n();
    let mut triples = PTriples { p: vec![0; n], p_subtree: vec![0; n], p_subtree_father: vec![0; n] };
    for v in 0..n {
        let c = nt.canonical(v);
        triples.p[v] = sym.penalties[c];
        triples.p_subtree[v] = desc.penalties[c];
        triples.p_subtree_father[v] = match fprime[c] {
            Some(x) => fath.penalties[x],
            None => desc.penalties[c],
        };
    }
    (triples, [sym.stats, desc.stats, fath.stats])
}

/// Penalty `v` imposes on a subtree containing it.
fn self_penalty(t: &Instance, v: usize, mode: CoverageMode) -> u64 {
    if mode.charges(ExtScalar::ZERO, Finite(t.radius(v) as i64)) {
        t.penalty(v)
    } else {
        0
    }
}

/// Bottom-up `C(v) = p(v,v) + sum over sons C+(u)` and
/// `C+(v) = min{C(v) + c(v,f(v)), p(T_v, f(v))}`. The `p(v,v)` term is zero
/// in weak mode; in strict mode a zero-radius node charges itself.
pub fn dp_tables(t: &Instance, tree: &RootedTree, triples: &PTriples, mode: CoverageMode) -> DpTables {
    let n = t.n();
    let mut tables = DpTables { c: vec![0; n], c_plus: vec![None; n], choice: vec![None; n] };
    for &v in tree.preorder().iter().rev() {
        let c = self_penalty(t, v, mode) + tree.children(v).iter().map(|&u| tables.c_plus[u].expect("son computed")).sum::<u64>();
        tables.c[v] = c;
        if v != tree.root() {
            let took = c + tree.father_cost(v);
            let paid = triples.p_subtree_father[v];
            // ties exclude the edge: smallest witness
            let (value, choice) = if took < paid { (took, Choice::TookEdge) } else { (paid, Choice::PaidPenalty) };
            tables.c_plus[v] = Some(value);
            tables.choice[v] = Some(choice);
        }
    }
    tables
}

pub fn solve_indirect(t: &Instance, mode: CoverageMode) -> Solution {
    solve_indirect_with(t, mode, EngineOptions::default()).solution
}

pub fn solve_indirect_with(t: &Instance, mode: CoverageMode, opts: EngineOptions) -> IndirectRun {
    let tree = t.rooted(DP_ROOT).expect("instances are nonempty");
    let (triples, stats) = compute_p_triples_with(t, DP_ROOT, mode, opts);
    let tables = dp_tables(t, &tree, &triples, mode);

    let value = |v: usize| tables.c[v] + triples.p[v] - triples.p_subtree[v];
    let best = (0..t.n()).min_by_key(|&v| (value(v), v)).expect("nonempty");
    let total = value(best);

    let mut nodes = vec![best];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let v = nodes[i];
        i += 1;
        for &u in tree.children(v) {
            if tables.choice[u] == Some(Choice::TookEdge) {
                nodes.push(u);
                edges.push((v, u));
            }
        }
    }
    let setup = edges.iter().map(|&(_, u)| tree.father_cost(u)).sum::<u64>();
    nodes.sort_unstable();
    let solution = Solution { total, setup, penalty: total - setup, nodes, edges };
    IndirectRun { solution, tree, triples, tables, stats }
}

/// Recomputes `c(Y)` and `p(Y)` for a node set from the definitions, using
/// fresh distance computations.
pub fn evaluate_subtree(t: &Instance, nodes: &[usize], mode: CoverageMode) -> (u64, u64) {
    let inside = |x: usize| nodes.contains(&x);
    let setup = t.edges().iter().filter(|e| inside(e.a) && inside(e.b)).map(|e| e.cost).sum();
    let mut nearest = vec![u64::MAX; t.n()];
    for &y in nodes {
        let d = distances_from(t, y).expect("witness node exists");
        for (best, dy) in nearest.iter_mut().zip(d) {
            *best = (*best).min(dy);
        }
    }
    let penalty = (0..t.n())
        .filter(|&u| mode.charges(Finite(nearest[u] as i64), Finite(t.radius(u) as i64)))
        .map(|u| t.penalty(u))
        .sum();
    (setup, penalty)
}

/// Re-derives every `C`/`C+` entry from its sons and checks equality.
pub fn audit_dp(t: &Instance, run: &IndirectRun, mode: CoverageMode) -> std::result::Result<(), String> {
    let (tree, tables, triples) = (&run.tree, &run.tables, &run.triples);
    for v in 0..t.n() {
        let sons: u64 = tree.children(v).iter().map(|&u| tables.c_plus[u].unwrap_or(u64::MAX)).sum();
        let expect_c = self_penalty(t, v, mode) + sons;
        if tables.c[v] != expect_c {
            return Err(format!("C({v}) = {} but sons give {expect_c}", tables.c[v]));
        }
        if tree.is_leaf(v) && mode == CoverageMode::Weak && tables.c[v] != 0 {
            return Err(format!("leaf {v} has C = {}", tables.c[v]));
        }
        if v == tree.root() {
            continue;
        }
        let expect_plus = (tables.c[v] + tree.father_cost(v)).min(triples.p_subtree_father[v]);
        if tables.c_plus[v] != Some(expect_plus) {
            return Err(format!("C+({v}) = {:?}, recurrence gives {expect_plus}", tables.c_plus[v]));
        }
    }
    Ok(())
}

/// Best single node for maximum coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaxCoverage {
    pub node: usize,
    pub penalty: u64,
    pub covered: u64,
}

/// `argmin_v p(v)` with ties to the smallest id.
pub fn solve_single_maxcov(t: &Instance, mode: CoverageMode) -> MaxCoverage {
    let p = node_penalties(t, mode);
    let node = (0..t.n()).min_by_key(|&v| (p[v], v)).expect("nonempty");
    MaxCoverage { node, penalty: p[node], covered: t.total_penalty() - p[node] }
}

/// `p(v)` for every original node through the symmetric construction.
pub fn node_penalties(t: &Instance, mode: CoverageMode) -> Vec<u64> {
    let nt = normalize_degree(t, DP_ROOT);
    let pv = compute_all_penalties_with(&build_symmetric(&nt), mode, EngineOptions::default()).penalties;
    (0..t.n()).map(|v| pv[nt.canonical(v)]).collect()
}

pub const ENUMERATION_CAP: usize = 14;

/// Minimum of `c(Y) + p(Y)` over every nonempty connected node set, by
/// enumeration. Ties go to the set with the smallest bitmask.
pub fn oracle_enumerate(t: &Instance, mode: CoverageMode) -> Result<Solution> {
    let n = t.n();
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded { n, cap: ENUMERATION_CAP });
    }
    let dist: Vec<Vec<u64>> = (0..n).map(|v| distances_from(t, v).expect("node exists")).collect();
    let mut best: Option<(u64, u64, u32)> = None;
    for mask in 1u32..(1 << n) {
        let inside = |x: usize| mask >> x & 1 == 1;
        let mut inner_edges = 0;
        let mut setup = 0;
        for e in t.edges() {
            if inside(e.a) && inside(e.b) {
                inner_edges += 1;
                setup += e.cost;
            }
        }
        // an induced subforest of a tree is connected iff |E| = |V| - 1
        if inner_edges + 1 != mask.count_ones() {
            continue;
        }
        let mut penalty = 0;
        for u in 0..n {
            let d = (0..n).filter(|&y| inside(y)).map(|y| dist[u][y]).min().expect("nonempty");
            if mode.charges(Finite(d as i64), Finite(t.radius(u) as i64)) {
                penalty += t.penalty(u);
            }
        }
        if best.is_none_or(|(total, _, _)| setup + penalty < total) {
            best = Some((setup + penalty, setup, mask));
        }
    }
    let (total, setup, mask) = best.expect("single nodes are connected");
    let nodes: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
    let edges = t.edges().iter().filter(|e| nodes.contains(&e.a) && nodes.contains(&e.b)).map(|e| (e.a, e.b)).collect();
    Ok(Solution { total, setup, penalty: total - setup, nodes, edges })
}

/// Direct covering: a node is covered only by lying in `Y`. Realized as
/// indirect covering with all radii zero, which needs positive edge costs.
pub fn solve_direct(t: &Instance) -> Result<Solution> {
    if let Some(e) = t.edges().iter().find(|e| e.cost == 0) {
        return Err(Error::ZeroCostEdge { a: e.a, b: e.b });
    }
    let zeroed = t.with_node_data(t.penalties().to_vec(), vec![0; t.n()])?;
    Ok(solve_indirect(&zeroed, CoverageMode::Weak))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::instance_a;
    use crate::instance::{parse_instance, Edge};

    #[test]
    fn triples_on_instance_a() {
        let tr = compute_p_triples(&instance_a(), 0, CoverageMode::Weak);
        assert_eq!(tr.p, vec![5, 9, 6]);
        assert_eq!(tr.p_subtree, vec![5, 4, 0]);
        assert_eq!(tr.p_subtree_father, vec![5, 5, 4]);
    }

    #[test]
    fn triples_trivial_cases() {
        let single = parse_instance("1\n3 0\n").unwrap();
        let tr = compute_p_triples(&single, 0, CoverageMode::Weak);
        assert_eq!((tr.p[0], tr.p_subtree[0], tr.p_subtree_father[0]), (0, 0, 0));
        let free = instance_a().with_node_data(vec![0; 3], vec![0; 3]).unwrap();
        let tr = compute_p_triples(&free, 0, CoverageMode::Strict);
        assert!(tr.p.iter().chain(&tr.p_subtree).chain(&tr.p_subtree_father).all(|&x| x == 0));
    }

    #[test]
    fn instance_a_optimum() {
        let t = instance_a();
        let run = solve_indirect_with(&t, CoverageMode::Weak, EngineOptions::default());
        assert_eq!(run.solution.total, 5);
        assert_eq!(run.solution.nodes, vec![0]);
        assert_eq!(run.solution.setup, 0);
        audit_dp(&t, &run, CoverageMode::Weak).unwrap();
        assert_eq!(oracle_enumerate(&t, CoverageMode::Weak).unwrap().total, 5);
    }

    #[test]
    fn zero_penalties_pick_one_node() {
        let t = instance_a().with_node_data(vec![0; 3], vec![0; 3]).unwrap();
        let s = solve_indirect(&t, CoverageMode::Weak);
        assert_eq!(s.total, 0);
        assert_eq!(s.nodes.len(), 1);
        assert_eq!(oracle_enumerate(&t, CoverageMode::Strict).unwrap().total, 0);
    }

    #[test]
    fn wide_radii_cost_nothing() {
        let t = instance_a().with_node_data(vec![5, 1, 4], vec![5; 3]).unwrap();
        assert_eq!(solve_indirect(&t, CoverageMode::Weak).total, 0);
    }

    #[test]
    fn single_edge_oracle() {
        let t = Instance::new(vec![Edge { a: 0, b: 1, cost: 1 }], vec![1, 1], vec![0, 0]).unwrap();
        // {1}: penalty 1; {2}: 1; {1,2}: setup 1
        assert_eq!(oracle_enumerate(&t, CoverageMode::Weak).unwrap().total, 1);
        assert_eq!(solve_indirect(&t, CoverageMode::Weak).total, 1);
    }

    #[test]
    fn maxcov_on_instance_a() {
        let m = solve_single_maxcov(&instance_a(), CoverageMode::Weak);
        assert_eq!(m, MaxCoverage { node: 0, penalty: 5, covered: 5 });
        let single = parse_instance("1\n4 0\n").unwrap();
        assert_eq!(solve_single_maxcov(&single, CoverageMode::Weak).penalty, 0);
    }

    #[test]
    fn maxcov_heavy_zero_radius_node_wins() {
        let t = parse_instance("4\n1 2 1\n2 3 1\n3 4 1\n1 0\n1 0\n50 0\n1 0\n").unwrap();
        assert_eq!(solve_single_maxcov(&t, CoverageMode::Weak).node, 2);
    }

    #[test]
    fn direct_covering() {
        let t = instance_a();
        let d = solve_direct(&t).unwrap();
        let zeroed = t.with_node_data(vec![5, 1, 4], vec![0; 3]).unwrap();
        assert_eq!(d.total, oracle_enumerate(&zeroed, CoverageMode::Weak).unwrap().total);
        // huge penalties: the whole tree
        let heavy = t.with_node_data(vec![1000; 3], vec![0; 3]).unwrap();
        let d = solve_direct(&heavy).unwrap();
        assert_eq!(d.nodes, vec![0, 1, 2]);
        assert_eq!(d.total, 5);
        let free = t.with_node_data(vec![0; 3], vec![0; 3]).unwrap();
        assert_eq!(solve_direct(&free).unwrap().total, 0);
        let zero_edge = parse_instance("2\n1 2 0\n1 0\n1 0\n").unwrap();
        assert!(matches!(solve_direct(&zero_edge), Err(Error::ZeroCostEdge { .. })));
    }

    #[test]
    fn strict_self_penalty_enters_dp() {
        // zero radius nodes charge themselves in strict mode, wherever Y is
        let t = parse_instance("3\n1 2 1\n2 3 1\n2 0\n2 0\n2 0\n").unwrap();
        let run = solve_indirect_with(&t, CoverageMode::Strict, EngineOptions::default());
        assert_eq!(run.solution.total, oracle_enumerate(&t, CoverageMode::Strict).unwrap().total);
        assert_eq!(run.solution.total, 6);
        audit_dp(&t, &run, CoverageMode::Strict).unwrap();
    }

    #[test]
    fn oracle_cap() {
        let edges = (1..15).map(|i| Edge { a: i - 1, b: i, cost: 1 }).collect();
        let t = Instance::new(edges, vec![1; 15], vec![0; 15]).unwrap();
        assert!(matches!(oracle_enumerate(&t, CoverageMode::Weak), Err(Error::CapExceeded { .. })));
    }
}
