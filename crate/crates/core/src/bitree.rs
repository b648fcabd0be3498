//! Directed double-arc trees with extended arc costs.
//!
//! Each tree edge becomes two anti-parallel arcs whose costs may differ and
//! may be `-inf`. Three constructions over a degree-normalized tree turn the
//! quantities `p(v)`, `p(T_v, v)` and `p(T_v, f(v))` into a single per-node
//! penalty `p'(v)` computed by the penalty engine.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::instance::NormalizedTree;

/// Integer extended with symbolic infinities.
///
/// Variant order gives the total order `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtScalar {
    NegInf,
    Finite(i64),
    PosInf,
}

pub use ExtScalar::{Finite, NegInf, PosInf};

impl ExtScalar {
    pub const ZERO: ExtScalar = Finite(0);

    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl Add for ExtScalar {
    type Output = ExtScalar;

    /// # Panics
    /// On `NegInf + PosInf`, which has no meaning in any construction.
    fn add(self, rhs: ExtScalar) -> ExtScalar {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (NegInf, PosInf) | (PosInf, NegInf) => panic!("undefined sum -inf + +inf"),
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;

    fn neg(self) -> ExtScalar {
        match self {
            NegInf => PosInf,
            Finite(x) => Finite(-x),
            PosInf => NegInf,
        }
    }
}

impl Sub for ExtScalar {
    type Output = ExtScalar;

    fn sub(self, rhs: ExtScalar) -> ExtScalar {
        self + (-rhs)
    }
}

impl From<i64> for ExtScalar {
    fn from(x: i64) -> Self {
        Finite(x)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            Finite(x) => write!(f, "{x}"),
            PosInf => f.write_str("+inf"),
        }
    }
}

/// Whether a source at distance `d` with radius `r` charges its penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoverageMode {
    /// Covered iff `d <= r`.
    #[default]
    Weak,
    /// Covered iff `d < r`.
    Strict,
}

impl CoverageMode {
    pub fn charges(self, distance: ExtScalar, radius: ExtScalar) -> bool {
        match self {
            CoverageMode::Weak => distance > radius,
            CoverageMode::Strict => distance >= radius,
        }
    }

    /// Whether a source whose merge key compares to a target key as `ord`
    /// (source key vs. target key) charges that target.
    pub fn charges_by_key(self, ord: Ordering) -> bool {
        match self {
            CoverageMode::Weak => ord == Ordering::Less,
            CoverageMode::Strict => ord != Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub to: usize,
    /// `c(this, to)`
    pub out: ExtScalar,
    /// `c(to, this)`
    pub back: ExtScalar,
}

/// A bitree of maximum degree three.
#[derive(Debug, Clone)]
pub struct Bitree {
    start: Vec<usize>,
    arcs: Vec<Arc>,
    penalty: Vec<u64>,
    radius: Vec<i64>,
}

impl Bitree {
    /// `links` holds `(a, b, c(a,b), c(b,a))` once per undirected edge.
    pub(crate) fn from_links(links: &[(usize, usize, ExtScalar, ExtScalar)], penalty: Vec<u64>, radius: Vec<i64>) -> Self {
        let n = penalty.len();
        assert_eq!(radius.len(), n);
        assert_eq!(links.len() + 1, n.max(1), "a bitree over n nodes has n-1 links");
        let mut degree = vec![0usize; n + 1];
        for &(a, b, ab, ba) in links {
            assert!(ab != PosInf && ba != PosInf, "+inf arc cost");
            degree[a + 1] += 1;
            degree[b + 1] += 1;
        }
        for i in 0..n {
            assert!(degree[i + 1] <= 3, "node {i} has degree {}", degree[i + 1]);
            degree[i + 1] += degree[i];
        }
        let start = degree;
        let mut fill = start.clone();
        let mut arcs = vec![Arc { to: 0, out: NegInf, back: NegInf }; 2 * links.len()];
        for &(a, b, ab, ba) in links {
            arcs[fill[a]] = Arc { to: b, out: ab, back: ba };
            fill[a] += 1;
            arcs[fill[b]] = Arc { to: a, out: ba, back: ab };
            fill[b] += 1;
        }
        Bitree { start, arcs, penalty, radius }
    }

    pub fn n(&self) -> usize {
        self.penalty.len()
    }

    pub fn arcs(&self, u: usize) -> &[Arc] {
        &self.arcs[self.start[u]..self.start[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.start[u + 1] - self.start[u]
    }

    /// `c(u, v)` for adjacent `u`, `v`.
    pub fn arc_cost(&self, u: usize, v: usize) -> Option<ExtScalar> {
        self.arcs(u).iter().find(|a| a.to == v).map(|a| a.out)
    }

    pub fn penalty(&self, u: usize) -> u64 {
        self.penalty[u]
    }

    pub fn radius(&self, u: usize) -> i64 {
        self.radius[u]
    }

    pub fn total_penalty(&self) -> u64 {
        self.penalty.iter().sum()
    }

    /// Leaves in index order; a single node counts as a leaf.
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(|&u| self.degree(u) <= 1)
    }
}

fn node_data(t: &NormalizedTree) -> (Vec<u64>, Vec<i64>) {
    let inst = t.instance();
    let radius = inst.radii().iter().map(|&r| r as i64).collect();
    (inst.penalties().to_vec(), radius)
}

/// Both arc directions carry the edge cost; then `p'(v) = p(v)`.
pub fn build_symmetric(t: &NormalizedTree) -> Bitree {
    let links: Vec<_> = t
        .instance()
        .edges()
        .iter()
        .map(|e| (e.a, e.b, Finite(e.cost as i64), Finite(e.cost as i64)))
        .collect();
    let (penalty, radius) = node_data(t);
    Bitree::from_links(&links, penalty, radius)
}

/// Upward arcs keep their cost, downward arcs are `-inf`; then
/// `p'(v) = p(T_v, v)`.
pub fn build_descendant(t: &NormalizedTree) -> Bitree {
    let r = t.rooted();
    let links: Vec<_> = (0..t.n())
        .filter(|&v| v != r.root())
        .map(|v| (v, r.father(v), Finite(r.father_cost(v) as i64), NegInf))
        .collect();
    let (penalty, radius) = node_data(t);
    Bitree::from_links(&links, penalty, radius)
}

/// Subdivides every father edge `(v, f(v))` by a node `f'(v)` with
/// `c(v, f'(v)) = c(v, f(v))`, `c(f'(v), f(v)) = 0` and zero penalty and
/// radius, then orients arcs as in [`build_descendant`]. `p'(f'(v))` equals
/// `p(T_v, f(v))` on the original tree. The returned map sends `v` to
/// `f'(v)` (`None` at the root).
pub fn build_father_subdivided(t: &NormalizedTree) -> (Bitree, Vec<Option<usize>>) {
    let r = t.rooted();
    let n = t.n();
    let (mut penalty, mut radius) = node_data(t);
    let mut fprime = vec![None; n];
    let mut links = Vec::with_capacity(2 * n);
    for v in 0..n {
        if v == r.root() {
            continue;
        }
        let x = penalty.len();
        penalty.push(0);
        radius.push(0);
        fprime[v] = Some(x);
        links.push((v, x, Finite(r.father_cost(v) as i64), NegInf));
        links.push((x, r.father(v), ExtScalar::ZERO, NegInf));
    }
    (Bitree::from_links(&links, penalty, radius), fprime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::normalize_degree;
    use crate::instance::tests::instance_a;

    #[test]
    fn ext_order_and_arithmetic() {
        assert!(NegInf < Finite(i64::MIN));
        assert!(Finite(i64::MAX) < PosInf);
        assert!(Finite(-3) < Finite(2));
        assert_eq!(Finite(2) + NegInf, NegInf);
        assert_eq!(PosInf + Finite(-7), PosInf);
        assert_eq!(Finite(5) - NegInf, PosInf);
        assert_eq!(Finite(5) - Finite(7), Finite(-2));
    }

    #[test]
    #[should_panic]
    fn neg_plus_pos_infinity_panics() {
        let _ = NegInf + PosInf;
    }

    #[test]
    fn symmetric_copies_costs() {
        let b = build_symmetric(&normalize_degree(&instance_a(), 0));
        assert_eq!(b.arc_cost(0, 1), Some(Finite(2)));
        assert_eq!(b.arc_cost(1, 0), Some(Finite(2)));
        assert_eq!(b.arc_cost(1, 2), Some(Finite(3)));
        assert_eq!(b.arc_cost(2, 1), Some(Finite(3)));
    }

    #[test]
    fn descendant_orients_downward_arcs() {
        let b = build_descendant(&normalize_degree(&instance_a(), 0));
        assert_eq!(b.arc_cost(1, 0), Some(Finite(2)));
        assert_eq!(b.arc_cost(0, 1), Some(NegInf));
        assert_eq!(b.arc_cost(2, 1), Some(Finite(3)));
        assert_eq!(b.arc_cost(1, 2), Some(NegInf));
    }

    #[test]
    fn father_subdivision_shape() {
        let nt = normalize_degree(&instance_a(), 0);
        let (b, fp) = build_father_subdivided(&nt);
        assert_eq!(b.n(), 5);
        assert_eq!(fp[0], None);
        let f1 = fp[1].unwrap();
        assert_eq!(b.arc_cost(1, f1), Some(Finite(2)));
        assert_eq!(b.arc_cost(f1, 0), Some(Finite(0)));
        assert_eq!(b.arc_cost(0, f1), Some(NegInf));
        assert_eq!(b.penalty(f1), 0);
        assert_eq!(b.radius(f1), 0);
    }

    #[test]
    fn single_node_constructions() {
        let t = crate::instance::parse_instance("1\n7 3\n").unwrap();
        let nt = normalize_degree(&t, 0);
        assert_eq!(build_symmetric(&nt).n(), 1);
        assert_eq!(build_descendant(&nt).n(), 1);
        let (b, fp) = build_father_subdivided(&nt);
        assert_eq!(b.n(), 1);
        assert_eq!(fp, vec![None]);
    }
}
