use crate::bitree::{CoverageMode, ExtScalar};

/// One entry of a keyed list. `pi` is the node's effective penalty in the
/// owning TTSB (zero for ghosts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub key: ExtScalar,
    pub node: u32,
    pub pi: u64,
}

impl Entry {
    pub fn new(key: ExtScalar, node: usize, pi: u64) -> Self {
        Entry { key, node: node as u32, pi }
    }
}

/// Entries sorted by key, nondecreasing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyedList(pub Vec<Entry>);

impl KeyedList {
    pub fn from_unsorted(mut entries: Vec<Entry>) -> Self {
        entries.sort_by_key(|e| e.key);
        KeyedList(entries)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0].key <= w[1].key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Entry> {
        self.0.iter()
    }

    pub fn keys(&self) -> Vec<ExtScalar> {
        self.0.iter().map(|e| e.key).collect()
    }
}

/// Appends `src` with `offset` added to every key, merged stably into `acc`
/// (entries already in `acc` go first on equal keys). Entries rejected by
/// `keep` are dropped.
pub(crate) fn merge_offset_into(acc: &mut Vec<Entry>, src: &[Entry], offset: ExtScalar, mut keep: impl FnMut(&Entry) -> bool) {
    let shifted = src.iter().filter(|e| keep(e)).map(|e| Entry { key: e.key + offset, ..*e });
    if acc.is_empty() {
        acc.extend(shifted);
        return;
    }
    let old = std::mem::take(acc);
    acc.reserve(old.len() + src.len());
    let mut left = old.into_iter().peekable();
    for e in shifted {
        while let Some(l) = left.next_if(|l| l.key <= e.key) {
            acc.push(l);
        }
        acc.push(e);
    }
    acc.extend(left);
}

/// Merges sorted lists, each shifted by its own offset, into one sorted list.
/// Used to build a parent's lists from its children's.
pub fn propagate(parts: &[(&KeyedList, ExtScalar)]) -> KeyedList {
    let mut acc = Vec::new();
    for (list, offset) in parts {
        merge_offset_into(&mut acc, &list.0, *offset, |_| true);
    }
    KeyedList(acc)
}

/// Single merge pass over `sources` (keys shifted by `source_offset`) and
/// `targets`. Calls `visit(target, charged)` for every target, where
/// `charged` is the total `pi` of sources whose shifted key is below the
/// target key (`Weak`; ties favor targets) or at most the target key
/// (`Strict`; ties favor sources).
pub(crate) fn scan(sources: &[Entry], source_offset: ExtScalar, targets: &[Entry], mode: CoverageMode, mut visit: impl FnMut(&Entry, u64)) {
    let mut charged = 0u64;
    let mut next = sources.iter().peekable();
    for t in targets {
        while let Some(s) = next.next_if(|s| mode.charges_by_key((s.key + source_offset).cmp(&t.key))) {
            charged += s.pi;
        }
        visit(t, charged);
    }
}

/// Per-target penalty increments imposed by `sources` on `targets`. Source
/// keys are `rho(u) - d(u, s_i)`, target keys `d(s_i, v)`.
pub fn merge_scan_cross(sources: &KeyedList, targets: &KeyedList, mode: CoverageMode) -> Vec<u64> {
    let mut out = Vec::with_capacity(targets.len());
    scan(&sources.0, ExtScalar::ZERO, &targets.0, mode, |_, c| out.push(c));
    out
}
