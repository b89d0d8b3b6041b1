//! Small random graphs with random seed sets, for comparing algorithms.

use crate::ctp::SeedSets;
use crate::graph::{Edge, Graph, GraphBuilder, Node};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_nodes: usize,
    pub max_edges: usize,
    /// Edge labels are drawn from `l0`, `l1`, ...
    pub labels: usize,
    pub m: usize,
    pub max_set_size: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_nodes: 12,
            max_edges: 20,
            labels: 3,
            m: 3,
            max_set_size: 2,
        }
    }
}

/// A random multigraph (no self-loops) and m pairwise disjoint, non-empty
/// seed sets. At least `m` nodes are always generated.
pub fn random_instance(spec: &RandomSpec, seed: u64) -> (Graph, SeedSets) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = spec.m.max(2);
    let n = rng.gen_range(lo..=spec.max_nodes.max(lo));
    let e = rng.gen_range(1..=spec.max_edges.max(1));
    let mut b = GraphBuilder::new();
    for i in 1..=n as u64 {
        b.add_node(Node::uri(i, format!("v{i}"))).expect("fresh id");
    }
    for id in 1..=e as u64 {
        let s = rng.gen_range(1..=n as u64);
        let mut t = rng.gen_range(1..n as u64);
        if t >= s {
            t += 1;
        }
        let label = format!("l{}", rng.gen_range(0..spec.labels.max(1)));
        b.add_edge(Edge::new(id, s, label, t)).expect("endpoints exist");
    }
    let mut nodes: Vec<u64> = (1..=n as u64).collect();
    nodes.shuffle(&mut rng);
    let mut sizes: Vec<usize> = (0..spec.m).map(|_| rng.gen_range(1..=spec.max_set_size.max(1))).collect();
    // Shrink sets until they fit into the node count.
    while sizes.iter().sum::<usize>() > n {
        let k = sizes.iter().position(|&s| s > 1).expect("n >= m");
        sizes[k] -= 1;
    }
    let mut it = nodes.into_iter();
    let sets: Vec<Vec<u64>> = sizes.iter().map(|&k| it.by_ref().take(k).collect()).collect();
    (b.build(), SeedSets::of_ids(sets))
}
