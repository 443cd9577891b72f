//! Shared test oracles: exhaustive partition search, canonical partition
//! forms, and random instances.
//!
//! Each test binary compiles this module separately and uses a subset.
#![allow(dead_code)]

use leiden_core::graph::Graph;
use leiden_core::quality::modularity;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
pub fn barbell() -> Graph {
    let edges = [
        (0, 1, 1.0),
        (1, 2, 1.0),
        (0, 2, 1.0),
        (3, 4, 1.0),
        (4, 5, 1.0),
        (3, 5, 1.0),
        (2, 3, 1.0),
    ];
    Graph::build(&edges, 6).unwrap()
}

/// Two 4-cliques joined by the bridge 3-4.
pub fn two_cliques() -> Graph {
    let mut edges = Vec::new();
    for block in [0u32, 4] {
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((block + i, block + j, 1.0));
            }
        }
    }
    edges.push((3, 4, 1.0));
    Graph::build(&edges, 8).unwrap()
}

/// Membership as a sorted list of sorted member lists, for set-of-sets
/// comparison independent of community ids.
pub fn canonical_partition(membership: &[u32]) -> Vec<Vec<u32>> {
    let mut groups: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for (v, &c) in membership.iter().enumerate() {
        groups.entry(c).or_default().push(v as u32);
    }
    let mut parts: Vec<Vec<u32>> = groups.into_values().collect();
    parts.sort();
    parts
}

/// All set partitions of `0..n` as membership vectors, enumerated through
/// restricted growth strings.
pub fn enumerate_partitions(n: usize) -> Vec<Vec<u32>> {
    fn grow(slot: usize, n: usize, used: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == n {
            out.push(current.clone());
            return;
        }
        for value in 0..=used {
            current.push(value);
            grow(slot + 1, n, used.max(value + 1), current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    grow(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Exhaustively maximizes modularity over every partition of the graph's
/// vertices. Returns the optimal score and the canonical forms of every
/// partition within `1e-12` of it.
pub fn best_partition_bruteforce(g: &Graph) -> (f64, Vec<Vec<Vec<u32>>>) {
    let n = g.vertex_count();
    assert!(n <= 10, "exhaustive search is for tiny graphs");
    let mut best = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for membership in enumerate_partitions(n) {
        let q = modularity(g, &membership);
        if q > best + 1e-12 {
            best = q;
            argmax.clear();
            argmax.push(canonical_partition(&membership));
        } else if (q - best).abs() <= 1e-12 {
            argmax.push(canonical_partition(&membership));
        }
    }
    (best, argmax)
}

/// Uniform random membership over at most `max_communities` ids drawn from
/// the valid vertex-id range.
pub fn random_membership(n: usize, max_communities: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = max_communities.clamp(1, n) as u32;
    (0..n).map(|_| rng.random_range(0..bound)).collect()
}

/// Seeded RNG for ad-hoc draws inside tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
