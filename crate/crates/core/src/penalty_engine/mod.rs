//! Computes `p'(v)` for every node of a degree-three bitree in
//! `O(n log n)`.
//!
//! The bitree is split recursively into two-terminal sub-bitrees (TTSBs).
//! Every TTSB returns four sorted lists: its nodes keyed by `d(s, v)` and by
//! `rho(v) - d(v, s)` for each terminal `s`. A parent builds its own lists
//! by shifting and merging its children's, and charges penalties between
//! sibling TTSBs with one merge pass per ordered pair of siblings, since
//! every path between siblings runs through their terminals. No list is
//! ever sorted from scratch.
//!
//! Nodes shared by siblings (the cut nodes) are counted once: exactly one
//! sibling holds each shared node as a penalty source and as the target of
//! cross increments; the other copies are ghosts with zero penalty.
//! Contributions that a node receives inside each child holding it are all
//! summed, because each child accounts for a disjoint set of sources.

mod lists;
mod naive;
mod subdivide;

pub use crate::bitree::CoverageMode;
pub use lists::{merge_scan_cross, propagate, Entry, KeyedList};
pub use naive::{naive_penalties, naive_penalties_capped, DEFAULT_ORACLE_CAP};
pub use subdivide::{check_subdivision, find_unweighted_median, subdivide_at, subdivide_ttsb, Subdivision, Ttsb};

use std::ops::Deref;

use crate::bitree::{Bitree, ExtScalar, Finite};
use lists::{merge_offset_into, scan};
use subdivide::{subdivide_in, Scratch};

/// `p'(v)` per bitree node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PenaltyVector(pub Vec<u64>);

impl Deref for PenaltyVector {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EngineOptions {
    /// Keep every subdivision for structural checks.
    pub trace: bool,
    /// Fault injection: use the opposite tie rule in sibling merges. Only
    /// meant to prove that the oracle harness catches tie errors.
    pub flip_ties: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub ttsbs: usize,
    pub base_cases: usize,
    /// List entries read by sibling merge-and-scan passes.
    pub merge_touches: u64,
    /// List entries copied while building parent lists.
    pub propagate_touches: u64,
    pub max_depth: usize,
}

#[derive(Debug, Clone)]
pub struct SubdivisionRecord {
    pub parent: Ttsb,
    pub children: Vec<Ttsb>,
}

#[derive(Debug, Clone)]
pub struct EngineRun {
    pub penalties: PenaltyVector,
    pub stats: EngineStats,
    pub trace: Vec<SubdivisionRecord>,
}

pub fn compute_all_penalties(b: &Bitree, mode: CoverageMode) -> PenaltyVector {
    compute_all_penalties_with(b, mode, EngineOptions::default()).penalties
}

pub fn compute_all_penalties_with(b: &Bitree, mode: CoverageMode, opts: EngineOptions) -> EngineRun {
    let cross_mode = match (opts.flip_ties, mode) {
        (false, m) => m,
        (true, CoverageMode::Weak) => CoverageMode::Strict,
        (true, CoverageMode::Strict) => CoverageMode::Weak,
    };
    let mut engine = Engine {
        b,
        mode,
        cross_mode,
        acc: vec![0; b.n()],
        scratch: Scratch::new(b.n()),
        stats: EngineStats::default(),
        trace: Vec::new(),
        tracing: opts.trace,
    };
    match b.n() {
        0 => {}
        1 => {
            if mode.charges(ExtScalar::ZERO, Finite(b.radius(0))) {
                engine.acc[0] = b.penalty(0);
            }
            engine.stats.ttsbs = 1;
            engine.stats.base_cases = 1;
        }
        _ => {
            engine.solve(&Ttsb::whole(b), 0, false);
        }
    }
    EngineRun { penalties: PenaltyVector(engine.acc), stats: engine.stats, trace: engine.trace }
}

/// Sorted lists of one TTSB, indexed by terminal position.
struct Lists {
    dist: [Vec<Entry>; 2],
    rho: [Vec<Entry>; 2],
}

struct Engine<'a> {
    b: &'a Bitree,
    mode: CoverageMode,
    cross_mode: CoverageMode,
    acc: Vec<u64>,
    scratch: Scratch,
    stats: EngineStats,
    trace: Vec<SubdivisionRecord>,
    tracing: bool,
}

impl Engine<'_> {
    fn solve(&mut self, s: &Ttsb, depth: usize, want_lists: bool) -> Option<Lists> {
        self.stats.ttsbs += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if s.len() == 2 {
            return Some(self.base_case(s));
        }

        let sub = subdivide_in(self.b, s, &mut self.scratch, None);
        if self.tracing {
            self.trace.push(SubdivisionRecord { parent: s.clone(), children: sub.children.clone() });
        }
        let children = &sub.children;
        let child_lists: Vec<Lists> = children
            .iter()
            .map(|c| self.solve(c, depth + 1, true).expect("children return lists"))
            .collect();

        for (i, ci) in children.iter().enumerate() {
            for (j, cj) in children.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (g, h) = sub.cross_gates(i, j);
                let targets = &child_lists[i].dist[ci.terminal_index(g).expect("gate is a terminal")];
                let sources = &child_lists[j].rho[cj.terminal_index(h).expect("gate is a terminal")];
                self.stats.merge_touches += (targets.len() + sources.len()) as u64;
                let acc = &mut self.acc;
                scan(sources, -sub.dist(h, g), targets, self.cross_mode, |t, charged| {
                    let v = t.node as usize;
                    if cj.terminal_index(v).is_none() && ci.is_home(v) {
                        acc[v] += charged;
                    }
                });
            }
        }

        if !want_lists {
            return None;
        }
        let mut out = Lists { dist: [Vec::new(), Vec::new()], rho: [Vec::new(), Vec::new()] };
        for k in 0..2 {
            let p = s.terminals[k];
            out.dist[k].reserve(s.len());
            out.rho[k].reserve(s.len());
            for (i, c) in children.iter().enumerate() {
                let g = sub.gates[i][k];
                let gi = c.terminal_index(g).expect("gate is a terminal");
                let keep = |e: &Entry| c.is_home(e.node as usize);
                merge_offset_into(&mut out.dist[k], &child_lists[i].dist[gi], sub.dist(p, g), keep);
                merge_offset_into(&mut out.rho[k], &child_lists[i].rho[gi], -sub.dist(g, p), keep);
                self.stats.propagate_touches += 2 * child_lists[i].dist[gi].len() as u64;
            }
        }
        Some(out)
    }

    /// A TTSB made of a single edge: both terminals charge each other and
    /// themselves directly.
    fn base_case(&mut self, s: &Ttsb) -> Lists {
        self.stats.base_cases += 1;
        let b = self.b;
        let [a, c] = s.terminals;
        let ac = b.arc_cost(a, c).expect("terminals are adjacent");
        let ca = b.arc_cost(c, a).expect("terminals are adjacent");
        let pi_a = if s.source[0] { b.penalty(a) } else { 0 };
        let pi_c = if s.source[1] { b.penalty(c) } else { 0 };
        let (ra, rc) = (Finite(b.radius(a)), Finite(b.radius(c)));
        let zero = ExtScalar::ZERO;
        let charge = |pi: u64, d: ExtScalar, r: ExtScalar| if self.mode.charges(d, r) { pi } else { 0 };
        self.acc[a] += charge(pi_a, zero, ra) + charge(pi_c, ca, rc);
        self.acc[c] += charge(pi_c, zero, rc) + charge(pi_a, ac, ra);

        let pair = |x: Entry, y: Entry| if y.key < x.key { vec![y, x] } else { vec![x, y] };
        Lists {
            dist: [
                pair(Entry::new(zero, a, pi_a), Entry::new(ac, c, pi_c)),
                pair(Entry::new(zero, c, pi_c), Entry::new(ca, a, pi_a)),
            ],
            rho: [
                pair(Entry::new(ra, a, pi_a), Entry::new(rc - ca, c, pi_c)),
                pair(Entry::new(rc, c, pi_c), Entry::new(ra - ac, a, pi_a)),
            ],
        }
    }
}
