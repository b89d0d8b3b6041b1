//! Priority queues of (tree, edge) pairs.

use super::tree::TreeId;
use super::PriorityPolicy;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Entry {
    /// Primary order; smaller pops first.
    rank: (u64, u64, u32),
    edge: u32,
    tree: TreeId,
}

impl Entry {
    pub fn new(policy: PriorityPolicy, size: usize, key: u64, root: u32, tree: TreeId, edge: u32) -> Self {
        let rank = match policy {
            PriorityPolicy::SmallestFirst => (size as u64, key, root),
            PriorityPolicy::Shuffled(seed) => (mix(seed ^ key ^ ((edge as u64) << 32 | root as u64)), 0, 0),
        };
        Entry { rank, edge, tree }
    }

    pub fn tree(&self) -> TreeId {
        self.tree
    }

    pub fn edge(&self) -> u32 {
        self.edge
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Either one heap, or one heap per sat value where each pop serves the
/// non-empty heap with the fewest entries (ties: smaller sat).
#[derive(Debug)]
pub(crate) enum PairQueue {
    Single(BinaryHeap<Reverse<Entry>>),
    Multi(BTreeMap<u64, BinaryHeap<Reverse<Entry>>>),
}

impl PairQueue {
    pub fn new(multi: bool) -> Self {
        if multi {
            PairQueue::Multi(BTreeMap::new())
        } else {
            PairQueue::Single(BinaryHeap::new())
        }
    }

    pub fn push(&mut self, sat: u64, e: Entry) {
        match self {
            PairQueue::Single(h) => h.push(Reverse(e)),
            PairQueue::Multi(qs) => qs.entry(sat).or_default().push(Reverse(e)),
        }
    }

    pub fn pop(&mut self) -> Option<Entry> {
        match self {
            PairQueue::Single(h) => h.pop().map(|r| r.0),
            PairQueue::Multi(qs) => {
                let (&sat, _) = qs.iter().min_by_key(|(&s, h)| (h.len(), s))?;
                let h = qs.get_mut(&sat).expect("key just seen");
                let e = h.pop().map(|r| r.0);
                if h.is_empty() {
                    qs.remove(&sat);
                }
                e
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PairQueue::Single(h) => h.len(),
            PairQueue::Multi(qs) => qs.values().map(|h| h.len()).sum(),
        }
    }
}
