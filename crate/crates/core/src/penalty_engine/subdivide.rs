//! Splitting a TTSB into at most five edge-disjoint child TTSBs around its
//! unweighted median.

use crate::bitree::{Bitree, ExtScalar};

/// A two-terminal sub-bitree: a connected node set of the bitree whose two
/// terminals are leaves of it (a single node for `n = 1`).
///
/// `source[k]` says whether terminal `k` charges its penalty inside this TTSB
/// (false makes it a ghost). `home[k]` says whether this copy of terminal `k`
/// is the one its parent counts for cross increments and list entries.
/// Non-terminal nodes are never shared, so they are always sources and home.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ttsb {
    pub nodes: Vec<usize>,
    pub terminals: [usize; 2],
    pub source: [bool; 2],
    pub home: [bool; 2],
}

impl Ttsb {
    /// The whole bitree, spanned by its first two leaves.
    pub fn whole(b: &Bitree) -> Ttsb {
        let mut leaves = b.leaves();
        let s = leaves.next().unwrap_or(0);
        let t = leaves.next().unwrap_or(s);
        Ttsb { nodes: (0..b.n()).collect(), terminals: [s, t], source: [true; 2], home: [true; 2] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn terminal_index(&self, x: usize) -> Option<usize> {
        self.terminals.iter().position(|&t| t == x)
    }

    pub fn is_source(&self, x: usize) -> bool {
        self.terminal_index(x).is_none_or(|k| self.source[k])
    }

    pub fn is_home(&self, x: usize) -> bool {
        self.terminal_index(x).is_none_or(|k| self.home[k])
    }
}

/// Result of splitting one TTSB.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub children: Vec<Ttsb>,
    pub median: usize,
    /// The path node closest to the median when the median is off the
    /// terminal path.
    pub path_cut: Option<usize>,
    /// Per child, the terminal through which it is entered from each parent
    /// terminal.
    pub(crate) gates: Vec<[usize; 2]>,
    hubs: Vec<usize>,
    dists: Vec<(usize, usize, ExtScalar)>,
}

impl Subdivision {
    /// Terminals `(g, h)` through which paths from child `j` into child `i`
    /// leave `j` (at `h`) and enter `i` (at `g`).
    pub(crate) fn cross_gates(&self, i: usize, j: usize) -> (usize, usize) {
        let (ci, cj) = (&self.children[i], &self.children[j]);
        match ci.terminals.iter().find(|x| cj.terminals.contains(x)) {
            Some(&shared) => (shared, shared),
            None => (self.hubs[i], self.hubs[j]),
        }
    }

    /// Directed distance between two of the parent terminals, the median and
    /// the path cut.
    pub(crate) fn dist(&self, a: usize, b: usize) -> ExtScalar {
        if a == b {
            return ExtScalar::ZERO;
        }
        self.dists
            .iter()
            .find(|&&(x, y, _)| x == a && y == b)
            .map(|&(_, _, d)| d)
            .unwrap_or_else(|| panic!("distance {a}->{b} not recorded"))
    }
}

/// Reusable per-run buffers indexed by bitree node.
pub(crate) struct Scratch {
    stamp: Vec<u32>,
    seen: Vec<u32>,
    on_path: Vec<u32>,
    epoch: u32,
    parent: Vec<usize>,
    depth: Vec<u32>,
    up: Vec<ExtScalar>,
    down: Vec<ExtScalar>,
    from_root: Vec<ExtScalar>,
    to_root: Vec<ExtScalar>,
    size: Vec<usize>,
    order: Vec<usize>,
    stack: Vec<usize>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch {
            stamp: vec![0; n],
            seen: vec![0; n],
            on_path: vec![0; n],
            epoch: 0,
            parent: vec![0; n],
            depth: vec![0; n],
            up: vec![ExtScalar::ZERO; n],
            down: vec![ExtScalar::ZERO; n],
            from_root: vec![ExtScalar::ZERO; n],
            to_root: vec![ExtScalar::ZERO; n],
            size: vec![0; n],
            order: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn enter(&mut self, nodes: &[usize]) {
        self.epoch += 1;
        for &x in nodes {
            self.stamp[x] = self.epoch;
        }
    }

    fn inside(&self, x: usize) -> bool {
        self.stamp[x] == self.epoch
    }

    /// Preorder DFS from `root` over the marked nodes, visiting neighbors in
    /// adjacency order. Fills parents, depths, arc costs and root distances.
    fn dfs(&mut self, b: &Bitree, root: usize) {
        self.order.clear();
        self.stack.clear();
        self.stack.push(root);
        self.parent[root] = root;
        self.depth[root] = 0;
        self.from_root[root] = ExtScalar::ZERO;
        self.to_root[root] = ExtScalar::ZERO;
        while let Some(x) = self.stack.pop() {
            self.order.push(x);
            for a in b.arcs(x).iter().rev() {
                let y = a.to;
                if y != self.parent[x] && self.inside(y) {
                    self.parent[y] = x;
                    self.depth[y] = self.depth[x] + 1;
                    self.up[y] = a.back;
                    self.down[y] = a.out;
                    self.from_root[y] = self.from_root[x] + a.out;
                    self.to_root[y] = a.back + self.to_root[x];
                    self.stack.push(y);
                }
            }
        }
    }

    fn subtree_sizes(&mut self) {
        for &x in &self.order {
            self.size[x] = 1;
        }
        for &x in self.order[1..].iter().rev() {
            self.size[self.parent[x]] += self.size[x];
        }
    }

    /// First node in preorder whose removal leaves no component larger than
    /// `total / 2`.
    fn median(&self, b: &Bitree) -> usize {
        let total = self.order.len();
        let root = self.order[0];
        for &x in &self.order {
            let mut largest = if x == root { 0 } else { total - self.size[x] };
            for a in b.arcs(x) {
                if self.inside(a.to) && a.to != self.parent[x] {
                    largest = largest.max(self.size[a.to]);
                }
            }
            if largest <= total / 2 {
                return x;
            }
        }
        unreachable!("every tree has a median")
    }

    /// Directed distance between two marked nodes after [`Scratch::dfs`].
    fn tree_dist(&self, mut a: usize, mut b: usize) -> ExtScalar {
        let root = self.order[0];
        if a == root {
            return self.from_root[b];
        }
        if b == root {
            return self.to_root[a];
        }
        let (mut upward, mut downward) = (ExtScalar::ZERO, ExtScalar::ZERO);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                upward = upward + self.up[a];
                a = self.parent[a];
            } else {
                downward = self.down[b] + downward;
                b = self.parent[b];
            }
        }
        upward + downward
    }

    /// Nodes reachable from `start` without entering `cut`, in BFS order.
    /// Also returns the first of them that has degree one in the TTSB.
    fn component(&mut self, b: &Bitree, start: usize, cut: &[usize]) -> (Vec<usize>, Option<usize>) {
        let mut comp = vec![start];
        self.seen[start] = self.epoch;
        let mut leaf = None;
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            let mut degree = 0;
            for a in b.arcs(x) {
                let y = a.to;
                if !self.inside(y) {
                    continue;
                }
                degree += 1;
                if self.seen[y] != self.epoch && !cut.contains(&y) {
                    self.seen[y] = self.epoch;
                    comp.push(y);
                }
            }
            if degree == 1 && leaf.is_none() {
                leaf = Some(x);
            }
        }
        (comp, leaf)
    }

    fn neighbors_in<'a>(&'a self, b: &'a Bitree, x: usize) -> impl Iterator<Item = usize> + 'a {
        b.arcs(x).iter().map(|a| a.to).filter(move |&y| self.stamp[y] == self.epoch)
    }
}

/// Unweighted median of the subtree induced by `nodes`: every component left
/// by its removal has at most `|nodes| / 2` nodes. Ties go to the smallest
/// preorder index of a DFS from `root` in adjacency order.
pub fn find_unweighted_median(b: &Bitree, nodes: &[usize], root: usize) -> usize {
    let mut sc = Scratch::new(b.n());
    sc.enter(nodes);
    sc.dfs(b, root);
    assert_eq!(sc.order.len(), nodes.len(), "node set is not connected");
    sc.subtree_sizes();
    sc.median(b)
}

/// Splits `s` (at least three nodes, max degree three) around its median.
pub fn subdivide_ttsb(b: &Bitree, s: &Ttsb) -> Subdivision {
    subdivide_in(b, s, &mut Scratch::new(b.n()), None)
}

/// Splits `s` around the given node, which must be a valid median. Exposed so
/// a specific median can be chosen when several are valid.
pub fn subdivide_at(b: &Bitree, s: &Ttsb, median: usize) -> Subdivision {
    subdivide_in(b, s, &mut Scratch::new(b.n()), Some(median))
}

pub(crate) fn subdivide_in(b: &Bitree, s: &Ttsb, sc: &mut Scratch, forced: Option<usize>) -> Subdivision {
    assert!(s.len() >= 3, "subdivision needs at least three nodes");
    let [u, v] = s.terminals;
    sc.enter(&s.nodes);
    sc.dfs(b, u);
    debug_assert_eq!(sc.order.len(), s.len(), "TTSB is not connected");
    sc.subtree_sizes();
    let m = forced.unwrap_or_else(|| sc.median(b));

    let epoch = sc.epoch;
    let mut x = v;
    loop {
        sc.on_path[x] = epoch;
        if x == u {
            break;
        }
        x = sc.parent[x];
    }
    let on_path = |sc: &Scratch, x: usize| sc.on_path[x] == epoch;

    // parent-side flags of a node that may be one of s's terminals
    let parent_source = |x: usize| s.is_source(x);

    let mut children = Vec::with_capacity(5);
    let mut gates = Vec::with_capacity(5);
    let mut hubs = Vec::with_capacity(5);
    let mut homes: Vec<usize> = Vec::new();

    // children get terminal pair (a, c); `a` or `c` may be cut nodes shared
    // with earlier children, which then keep the home copy
    let mut push_child = |children: &mut Vec<Ttsb>, mut nodes: Vec<usize>, a: usize, c: usize, cuts: &[usize]| {
        for &k in cuts {
            nodes.push(k);
        }
        let mut home = [true; 2];
        let mut source = [true; 2];
        for (k, &term) in [a, c].iter().enumerate() {
            if cuts.contains(&term) {
                home[k] = !homes.contains(&term);
                if home[k] {
                    homes.push(term);
                }
            }
            source[k] = home[k] && parent_source(term);
        }
        children.push(Ttsb { nodes, terminals: [a, c], source, home });
    };

    let path_cut;
    if on_path(sc, m) {
        // median on the terminal path: S - m has at most three components
        path_cut = None;
        let toward_u = sc.parent[m];
        let toward_v = sc.neighbors_in(b, m).find(|&y| y != toward_u && on_path(sc, y)).expect("median is interior to the path");
        let branch = sc.neighbors_in(b, m).find(|&y| y != toward_u && y != toward_v);

        let (comp, _) = sc.component(b, toward_u, &[m]);
        push_child(&mut children, comp, u, m, &[m]);
        gates.push([u, m]);
        hubs.push(m);
        let (comp, _) = sc.component(b, toward_v, &[m]);
        push_child(&mut children, comp, m, v, &[m]);
        gates.push([m, v]);
        hubs.push(m);
        if let Some(y) = branch {
            let (comp, leaf) = sc.component(b, y, &[m]);
            push_child(&mut children, comp, m, leaf.expect("pendant component has a leaf"), &[m]);
            gates.push([m, m]);
            hubs.push(m);
        }
    } else {
        // median off the path: cut at the median and its closest path node
        let mut mp = m;
        while !on_path(sc, mp) {
            mp = sc.parent[mp];
        }
        path_cut = Some(mp);
        let cut = [m, mp];
        let toward_u = sc.parent[mp];
        let toward_v = sc.neighbors_in(b, mp).find(|&y| y != toward_u && on_path(sc, y)).expect("path cut is interior to the path");
        let toward_m = sc.neighbors_in(b, mp).find(|&y| y != toward_u && y != toward_v).expect("path cut branches toward the median");

        let (comp, _) = sc.component(b, toward_u, &cut);
        push_child(&mut children, comp, u, mp, &[mp]);
        gates.push([u, mp]);
        hubs.push(mp);
        let (comp, _) = sc.component(b, toward_v, &cut);
        push_child(&mut children, comp, mp, v, &[mp]);
        gates.push([mp, v]);
        hubs.push(mp);
        let middle = if toward_m == m { Vec::new() } else { sc.component(b, toward_m, &cut).0 };
        push_child(&mut children, middle, mp, m, &cut);
        gates.push([mp, mp]);
        hubs.push(mp);
        let m_parent = sc.parent[m];
        let pendants: Vec<usize> = sc.neighbors_in(b, m).filter(|&y| y != m_parent).collect();
        for y in pendants {
            let (comp, leaf) = sc.component(b, y, &cut);
            push_child(&mut children, comp, m, leaf.expect("pendant component has a leaf"), &[m]);
            gates.push([m, m]);
            hubs.push(m);
        }
    }

    let mut points = vec![u, v, m];
    points.extend(path_cut);
    let mut dists = Vec::with_capacity(12);
    for &a in &points {
        for &c in &points {
            if a != c {
                dists.push((a, c, sc.tree_dist(a, c)));
            }
        }
    }

    Subdivision { children, median: m, path_cut, gates, hubs, dists }
}

/// Checks the structural guarantees of one subdivision: at most five
/// children, each with at most `|S|/2 + 1` nodes, an exact edge partition,
/// `sum |S_i| = |S| + k - 1`, terminals that are leaves of their child, and
/// exactly one source copy and one home copy of every node.
pub fn check_subdivision(b: &Bitree, parent: &Ttsb, children: &[Ttsb]) -> Result<(), String> {
    let k = children.len();
    let size = parent.len();
    if k == 0 || k > 5 {
        return Err(format!("{k} children"));
    }
    for (i, c) in children.iter().enumerate() {
        if c.len() > size / 2 + 1 {
            return Err(format!("child {i} has {} nodes, parent {size}", c.len()));
        }
    }
    let total: usize = children.iter().map(Ttsb::len).sum();
    if total != size + k - 1 {
        return Err(format!("sum of child sizes {total} != {size} + {k} - 1"));
    }

    let edges_of = |nodes: &[usize]| {
        let set: std::collections::HashSet<usize> = nodes.iter().copied().collect();
        let mut edges = Vec::new();
        for &x in nodes {
            for a in b.arcs(x) {
                if x < a.to && set.contains(&a.to) {
                    edges.push((x, a.to));
                }
            }
        }
        edges
    };
    let mut parent_edges = edges_of(&parent.nodes);
    if parent_edges.len() + 1 != size {
        return Err("parent node set is not a subtree".into());
    }
    let mut child_edges = Vec::new();
    for (i, c) in children.iter().enumerate() {
        let e = edges_of(&c.nodes);
        if e.len() + 1 != c.len() {
            return Err(format!("child {i} is not connected"));
        }
        for &t in &c.terminals {
            let deg = e.iter().filter(|&&(x, y)| x == t || y == t).count();
            if deg != 1 {
                return Err(format!("terminal {t} of child {i} has degree {deg}"));
            }
        }
        if c.terminals[0] == c.terminals[1] {
            return Err(format!("child {i} has equal terminals"));
        }
        child_edges.extend(e);
    }
    parent_edges.sort_unstable();
    child_edges.sort_unstable();
    if parent_edges != child_edges {
        return Err("child edge sets do not partition the parent's edges".into());
    }

    for &x in &parent.nodes {
        let holders: Vec<&Ttsb> = children.iter().filter(|c| c.nodes.contains(&x)).collect();
        if holders.is_empty() {
            return Err(format!("node {x} lost"));
        }
        let sources = holders.iter().filter(|c| c.is_source(x)).count();
        let expected = usize::from(parent.is_source(x));
        if sources != expected {
            return Err(format!("node {x} is a source in {sources} children, expected {expected}"));
        }
        let homes = holders.iter().filter(|c| c.is_home(x)).count();
        if homes != 1 {
            return Err(format!("node {x} is home in {homes} children"));
        }
        if holders.len() > 1 && holders.iter().any(|c| c.terminal_index(x).is_none()) {
            return Err(format!("shared node {x} is not a terminal of every holder"));
        }
    }
    for (k, &t) in parent.terminals.iter().enumerate() {
        let holder = children.iter().find(|c| c.nodes.contains(&t)).expect("terminal kept");
        if holder.terminal_index(t).is_none() {
            return Err(format!("parent terminal {k} is not a child terminal"));
        }
    }
    Ok(())
}
