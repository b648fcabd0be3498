//! Edge-weighted trees with per-node penalty and radius.
//!
//! Node ids are 0-based in the library; the text formats and the CLI use
//! 1-based ids.

mod format;
mod normalize;

pub use format::{parse_instance, parse_structured, serialize, serialize_structured, Format, DECIMAL_SCALE};
pub use normalize::{normalize_degree, NodeOrigin, NormalizedTree};

use crate::error::{Error, ParseError};

/// Largest admissible `n * max_value`. Path sums, penalty totals and the
/// engine's keys (`radius - distance - offset`) then stay inside `i64`.
pub const MAGNITUDE_LIMIT: u128 = 1 << 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub cost: u64,
}

/// A tree `T=(V,E)` with edge costs, penalties `pi(u)` and radii `rho(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    edges: Vec<Edge>,
    penalty: Vec<u64>,
    radius: Vec<u64>,
    scale: u64,
    adj: Vec<Vec<(usize, u64)>>,
}

impl Instance {
    /// Validates and builds an instance. Errors carry line 0; the parsers
    /// report real line numbers before reaching this point.
    pub fn new(edges: Vec<Edge>, penalty: Vec<u64>, radius: Vec<u64>) -> Result<Self, ParseError> {
        let n = penalty.len();
        if n == 0 {
            return Err(ParseError::Malformed { line: 0, msg: "instance needs at least one node".into() });
        }
        if radius.len() != n {
            return Err(ParseError::Malformed {
                line: 0,
                msg: format!("{} penalties but {} radii", n, radius.len()),
            });
        }
        if edges.len() != n - 1 {
            return Err(ParseError::NotATree {
                line: 0,
                msg: format!("{} nodes need {} edges, got {}", n, n - 1, edges.len()),
            });
        }
        let mut dsu = Dsu::new(n);
        for e in &edges {
            if e.a >= n || e.b >= n {
                return Err(ParseError::Malformed {
                    line: 0,
                    msg: format!("edge {}-{} references a node outside 1..{}", e.a + 1, e.b + 1, n),
                });
            }
            if !dsu.union(e.a, e.b) {
                return Err(ParseError::NotATree { line: 0, msg: format!("edge {}-{} closes a cycle", e.a + 1, e.b + 1) });
            }
        }
        // costs and penalties are summed over up to n terms; radii are only compared
        check_magnitude(n, edges.iter().map(|e| e.cost).chain(penalty.iter().copied()))?;
        check_magnitude(1, radius.iter().copied())?;

        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.a].push((e.b, e.cost));
            adj[e.b].push((e.a, e.cost));
        }
        Ok(Instance { edges, penalty, radius, scale: 1, adj })
    }

    pub(crate) fn with_scale(mut self, scale: u64) -> Self {
        self.scale = scale;
        self
    }

    pub fn n(&self) -> usize {
        self.penalty.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn penalty(&self, u: usize) -> u64 {
        self.penalty[u]
    }

    pub fn radius(&self, u: usize) -> u64 {
        self.radius[u]
    }

    pub fn penalties(&self) -> &[u64] {
        &self.penalty
    }

    pub fn radii(&self) -> &[u64] {
        &self.radius
    }

    /// Fixed-point scale applied at parse time (1 for integer input).
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, u64)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn total_penalty(&self) -> u64 {
        self.penalty.iter().sum()
    }

    /// Same tree with penalties and radii replaced.
    pub fn with_node_data(&self, penalty: Vec<u64>, radius: Vec<u64>) -> Result<Self, ParseError> {
        Instance::new(self.edges.clone(), penalty, radius).map(|i| i.with_scale(self.scale))
    }

    /// Same tree with every edge cost and radius multiplied by `factor`.
    pub fn scaled_lengths(&self, factor: u64) -> Result<Self, ParseError> {
        let edges = self.edges.iter().map(|e| Edge { cost: e.cost * factor, ..*e }).collect();
        let radius = self.radius.iter().map(|r| r * factor).collect();
        Instance::new(edges, self.penalty.clone(), radius).map(|i| i.with_scale(self.scale))
    }

    pub fn rooted(&self, root: usize) -> Result<RootedTree, Error> {
        RootedTree::new(self, root)
    }
}

pub(crate) fn check_magnitude(n: usize, values: impl Iterator<Item = u64>) -> Result<(), ParseError> {
    let max = values.max().unwrap_or(0).max(1) as u128;
    let product = n.max(1) as u128 * max;
    if product > MAGNITUDE_LIMIT {
        return Err(ParseError::Overflow { product, limit: MAGNITUDE_LIMIT });
    }
    Ok(())
}

/// Rooted view of an instance. The root is its own father.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: usize,
    father: Vec<usize>,
    father_cost: Vec<u64>,
    children: Vec<Vec<usize>>,
    preorder: Vec<usize>,
}

impl RootedTree {
    pub fn new(t: &Instance, root: usize) -> Result<Self, Error> {
        let n = t.n();
        if root >= n {
            return Err(Error::UnknownNode(root));
        }
        let mut father = vec![usize::MAX; n];
        let mut father_cost = vec![0; n];
        let mut children = vec![Vec::new(); n];
        let mut preorder = Vec::with_capacity(n);
        father[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            // reversed so children are visited in adjacency order
            for &(w, c) in t.neighbors(v).iter().rev() {
                if father[w] == usize::MAX {
                    father[w] = v;
                    father_cost[w] = c;
                    stack.push(w);
                }
            }
        }
        for &v in &preorder {
            if v != root {
                children[father[v]].push(v);
            }
        }
        Ok(RootedTree { root, father, father_cost, children, preorder })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn father(&self, v: usize) -> usize {
        self.father[v]
    }

    /// `c(v, f(v))`; zero at the root.
    pub fn father_cost(&self, v: usize) -> u64 {
        self.father_cost[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn n(&self) -> usize {
        self.father.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Descendant set `T_v` (including `v`).
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }
}

/// `d(v, u)` for every `u`.
pub fn distances_from(t: &Instance, v: usize) -> Result<Vec<u64>, Error> {
    if v >= t.n() {
        return Err(Error::UnknownNode(v));
    }
    let mut dist = vec![u64::MAX; t.n()];
    dist[v] = 0;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &(y, c) in t.neighbors(x) {
            if dist[y] == u64::MAX {
                dist[y] = dist[x] + c;
                stack.push(y);
            }
        }
    }
    Ok(dist)
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
