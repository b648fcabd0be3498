use super::{Edge, Instance, RootedTree};

/// Where a node of the degree-normalized tree came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeOrigin {
    /// Canonical copy of an original node; carries its penalty and radius.
    Original(usize),
    /// Auxiliary chain copy of an original node, joined by zero-cost edges.
    /// Penalty and radius are zero.
    Copy(usize),
}

impl NodeOrigin {
    pub fn original(self) -> usize {
        match self {
            NodeOrigin::Original(v) | NodeOrigin::Copy(v) => v,
        }
    }

    pub fn is_aux(self) -> bool {
        matches!(self, NodeOrigin::Copy(_))
    }
}

/// A rooted tree of maximum degree three obtained by splitting high-degree
/// nodes into chains of copies. Node 0 is the canonical copy of the root.
#[derive(Debug, Clone)]
pub struct NormalizedTree {
    tree: Instance,
    rooted: RootedTree,
    origin: Vec<NodeOrigin>,
    copies_of: Vec<Vec<usize>>,
}

impl NormalizedTree {
    pub fn instance(&self) -> &Instance {
        &self.tree
    }

    pub fn rooted(&self) -> &RootedTree {
        &self.rooted
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn origin(&self, x: usize) -> NodeOrigin {
        self.origin[x]
    }

    /// All copies of original node `v`; the first is canonical and is the
    /// copy closest to the root.
    pub fn copies_of(&self, v: usize) -> &[usize] {
        &self.copies_of[v]
    }

    pub fn canonical(&self, v: usize) -> usize {
        self.copies_of[v][0]
    }

    pub fn original_count(&self) -> usize {
        self.copies_of.len()
    }
}

/// Splits every node of degree `D > 3` into a chain of `D - 2` copies. The
/// first copy keeps the father edge and one child edge (two child edges at
/// the root), middle copies keep one child edge each and the last keeps two.
pub fn normalize_degree(t: &Instance, root: usize) -> NormalizedTree {
    let orig = RootedTree::new(t, root).expect("root is a node of the instance");
    let n = t.n();
    let mut origin = Vec::with_capacity(n);
    let mut copies_of = vec![Vec::new(); n];
    let mut penalty = Vec::with_capacity(n);
    let mut radius = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    // copy of f(v) that v's father edge attaches to
    let mut attach = vec![usize::MAX; n];

    for &v in orig.preorder() {
        let kids = orig.children(v);
        let is_root = v == root;
        let degree = kids.len() + usize::from(!is_root);
        let copies = if degree <= 3 { 1 } else { degree - 2 };
        let first = origin.len();
        for i in 0..copies {
            let x = first + i;
            copies_of[v].push(x);
            if i == 0 {
                origin.push(NodeOrigin::Original(v));
                penalty.push(t.penalty(v));
                radius.push(t.radius(v));
                if !is_root {
                    edges.push(Edge { a: attach[v], b: x, cost: orig.father_cost(v) });
                }
            } else {
                origin.push(NodeOrigin::Copy(v));
                penalty.push(0);
                radius.push(0);
                edges.push(Edge { a: x - 1, b: x, cost: 0 });
            }
        }
        if copies == 1 {
            for &c in kids {
                attach[c] = first;
            }
            continue;
        }
        let mut slots = Vec::with_capacity(kids.len());
        slots.push(first);
        if is_root {
            slots.push(first);
        }
        slots.extend(first + 1..first + copies);
        slots.push(first + copies - 1);
        debug_assert_eq!(slots.len(), kids.len());
        for (&c, &slot) in kids.iter().zip(&slots) {
            attach[c] = slot;
        }
    }

    let tree = Instance { edges, penalty, radius, scale: t.scale(), adj: Vec::new() };
    let tree = tree.rebuild_adjacency();
    let rooted = RootedTree::new(&tree, 0).expect("node 0 exists");
    NormalizedTree { tree, rooted, origin, copies_of }
}

impl Instance {
    /// Internal constructor for derived trees that are valid by construction
    /// and may exceed the parse-time magnitude bound by a constant factor.
    fn rebuild_adjacency(mut self) -> Self {
        let mut adj = vec![Vec::new(); self.penalty.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.cost));
            adj[e.b].push((e.a, e.cost));
        }
        self.adj = adj;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::distances_from;
    use crate::instance::tests::instance_a;

    fn star(leaves: usize) -> Instance {
        let edges = (1..=leaves).map(|i| Edge { a: 0, b: i, cost: i as u64 }).collect();
        Instance::new(edges, vec![1; leaves + 1], vec![2; leaves + 1]).unwrap()
    }

    fn assert_distances_preserved(t: &Instance, nt: &NormalizedTree) {
        for u in 0..t.n() {
            let orig = distances_from(t, u).unwrap();
            for &cu in nt.copies_of(u) {
                let norm = distances_from(nt.instance(), cu).unwrap();
                for v in 0..t.n() {
                    for &cv in nt.copies_of(v) {
                        assert_eq!(norm[cv], orig[v], "d({u},{v}) via copies {cu},{cv}");
                    }
                }
            }
        }
    }

    #[test]
    fn path_is_unchanged() {
        let t = instance_a();
        let nt = normalize_degree(&t, 0);
        assert_eq!(nt.n(), 3);
        assert!((0..3).all(|x| nt.origin(x) == NodeOrigin::Original(x)));
        assert_eq!(nt.instance().penalties(), t.penalties());
    }

    #[test]
    fn star_with_four_leaves() {
        let t = star(4);
        let nt = normalize_degree(&t, 0);
        assert_eq!(nt.n(), 6);
        assert_eq!(nt.copies_of(0).len(), 2);
        assert!((0..nt.n()).all(|x| nt.instance().degree(x) <= 3));
        assert_distances_preserved(&t, &nt);
    }

    #[test]
    fn star_with_five_leaves() {
        let t = star(5);
        let nt = normalize_degree(&t, 0);
        assert_eq!(nt.n(), 8);
        assert!((0..nt.n()).all(|x| nt.instance().degree(x) <= 3));
        assert_distances_preserved(&t, &nt);
        // rooting at a leaf puts the father edge on the first copy
        let nt = normalize_degree(&t, 3);
        assert_eq!(nt.n(), 8);
        assert_distances_preserved(&t, &nt);
    }

    #[test]
    fn aux_nodes_carry_nothing() {
        let nt = normalize_degree(&star(7), 0);
        for x in 0..nt.n() {
            if nt.origin(x).is_aux() {
                assert_eq!(nt.instance().penalty(x), 0);
                assert_eq!(nt.instance().radius(x), 0);
            }
        }
        assert!(nt.n() <= 2 * 8);
    }

    #[test]
    fn canonical_copy_heads_the_subtree() {
        let t = star(6);
        let nt = normalize_degree(&t, 2);
        let r = nt.rooted();
        for v in 0..t.n() {
            let c = nt.canonical(v);
            let sub = r.subtree(c);
            for &x in nt.copies_of(v) {
                assert!(sub.contains(&x));
            }
            if c != 0 {
                assert_ne!(nt.origin(r.father(c)).original(), v);
            }
        }
    }
}
