//! Seeded random graphs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Uniform random graph: samples `n * avg_degree / 2` vertex pairs with both
/// endpoints uniform, drops self-pairs, collapses duplicates. Unit weights.
pub fn random_graph(n: usize, avg_degree: f64, seed: u64) -> Graph {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = ((n as f64) * avg_degree / 2.0).round() as usize;
    let mut edges = Vec::with_capacity(target);
    while edges.len() < target {
        let i = rng.random_range(0..n as u32);
        let j = rng.random_range(0..n as u32);
        if i != j {
            edges.push((i, j, 1.0));
        }
    }
    Graph::build(&edges, n).unwrap()
}

/// Planted-partition graph: `communities` equal-sized blocks; every vertex
/// draws about `intra_degree` edge endpoints inside its block and
/// `inter_degree` outside. Unit weights, no self-pairs, duplicates collapse.
pub fn planted_partition(
    n: usize,
    communities: usize,
    intra_degree: f64,
    inter_degree: f64,
    seed: u64,
) -> Graph {
    assert!(communities >= 1 && n >= 2 * communities);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = n / communities;
    let mut edges = Vec::new();
    for v in 0..n {
        let home = (v / block).min(communities - 1);
        let lo = home * block;
        let hi = if home == communities - 1 { n } else { lo + block };
        for _ in 0..(intra_degree / 2.0).round() as usize {
            let j = rng.random_range(lo..hi);
            if j != v {
                edges.push((v as u32, j as u32, 1.0));
            }
        }
        for _ in 0..(inter_degree / 2.0).round() as usize {
            let j = rng.random_range(0..n);
            if j != v && !(lo..hi).contains(&j) {
                edges.push((v as u32, j as u32, 1.0));
            }
        }
    }
    Graph::build(&edges, n).unwrap()
}
