//! Connected dense forests: a top and a bottom forest of depth-3 binary trees
//! joined by link paths.
//!
//! Top trees: root -a-> x, root -b-> y, x -c-> leaf, x -d-> leaf, y -c->
//! leaf, y -d-> leaf. Bottom trees use e, f, g, h in the same positions.
//! With m = 2 a link is a chain of S_L `link` edges from a `c` leaf to a `g`
//! leaf. With m = 3 it is a Y: a stem of S_L - 2 edges from a `c` leaf to a
//! junction, then one edge to each leaf (`g` and `h`) of one bottom parent.

use super::{Built, Ids, SynthError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Tree {
    /// Leaves as (first label target, second label target) per parent.
    leaves: [(u64, u64); 2],
}

fn tree(ids: &mut Ids, labels: [&str; 4]) -> Tree {
    let [l1, l2, l3, l4] = labels;
    let root = ids.plain();
    let x = ids.plain();
    let y = ids.plain();
    let xs = (ids.plain(), ids.plain());
    let ys = (ids.plain(), ids.plain());
    ids.edge(root, l1, x);
    ids.edge(root, l2, y);
    ids.edge(x, l3, xs.0);
    ids.edge(x, l4, xs.1);
    ids.edge(y, l3, ys.0);
    ids.edge(y, l4, ys.1);
    Tree { leaves: [xs, ys] }
}

/// Half of the candidates (rounded up), chosen by the rng.
fn half<T: Copy>(rng: &mut ChaCha8Rng, mut v: Vec<T>) -> Vec<T> {
    v.shuffle(rng);
    v.truncate(v.len().div_ceil(2));
    v
}

pub(crate) fn cdf(m: u64, nt: u64, nl: u64, sl: u64, seed: u64) -> Result<Built, SynthError> {
    if m != 2 && m != 3 {
        return Err(SynthError::Invalid("cdf needs m = 2 or m = 3".into()));
    }
    if nt == 0 || sl == 0 {
        return Err(SynthError::Invalid("cdf needs NT >= 1 and SL >= 1".into()));
    }
    if m == 3 && sl < 3 {
        return Err(SynthError::Invalid("cdf with m = 3 needs SL >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = Ids::new();
    let top: Vec<Tree> = (0..nt).map(|_| tree(&mut ids, ["a", "b", "c", "d"])).collect();
    let bottom: Vec<Tree> = (0..nt).map(|_| tree(&mut ids, ["e", "f", "g", "h"])).collect();

    let c_leaves: Vec<u64> = top.iter().flat_map(|t| [t.leaves[0].0, t.leaves[1].0]).collect();
    let tops = half(&mut rng, c_leaves);
    if m == 2 {
        let g_leaves: Vec<u64> = bottom.iter().flat_map(|t| [t.leaves[0].0, t.leaves[1].0]).collect();
        let bottoms = half(&mut rng, g_leaves);
        for _ in 0..nl {
            let from = tops[rng.gen_range(0..tops.len())];
            let to = bottoms[rng.gen_range(0..bottoms.len())];
            let mut prev = from;
            for _ in 1..sl {
                let n = ids.plain();
                ids.edge(prev, "link", n);
                prev = n;
            }
            ids.edge(prev, "link", to);
        }
    } else {
        let pairs: Vec<(u64, u64)> = bottom.iter().flat_map(|t| t.leaves).collect();
        let bottoms = half(&mut rng, pairs);
        for _ in 0..nl {
            let from = tops[rng.gen_range(0..tops.len())];
            let (g, h) = bottoms[rng.gen_range(0..bottoms.len())];
            let mut prev = from;
            for _ in 0..sl - 2 {
                let n = ids.plain();
                ids.edge(prev, "link", n);
                prev = n;
            }
            ids.edge(prev, "link", g);
            ids.edge(prev, "link", h);
        }
    }
    Ok(Built {
        graph: ids.build(),
        seed_sets: None,
        query: Some(query(m).to_string()),
        expected: nl,
    })
}

/// The EQL query run on a dense forest with the given m.
pub fn query(m: u64) -> &'static str {
    if m == 2 {
        r#"(?v, ?tl, ?l) :- (?x, "c", ?tl), (?v, "g", ?bl), (?bl, ?tl, TREE ?l)"#
    } else {
        r#"(?v, ?tl, ?l) :- (?x, "c", ?tl), (?v, "g", ?bl1), (?v, "h", ?bl2), (?tl, ?bl1, ?bl2, TREE ?l)"#
    }
}
