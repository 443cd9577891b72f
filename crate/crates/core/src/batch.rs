//! Seeded random batch-update generation: a mix of unit-weight insertions
//! between currently unconnected vertex pairs and deletions of existing
//! edges, emitted symmetrically.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BatchUpdate, Graph};

/// How much of the graph a batch perturbs.
#[derive(Debug, Clone)]
pub struct BatchSpec {
    /// Batch size as a fraction of the undirected edge count.
    pub edge_fraction: f64,
    /// Share of the batch that is insertions; the rest are deletions.
    pub insertion_share: f64,
    pub seed: u64,
    /// Batches per batch size when sweeping; carried here so sweep tooling
    /// and reports agree on the default.
    pub repetitions: usize,
}

impl Default for BatchSpec {
    fn default() -> Self {
        BatchSpec {
            edge_fraction: 1e-3,
            insertion_share: 0.8,
            seed: 0,
            repetitions: 5,
        }
    }
}

/// Rejection sampling for insertions gives up after this many multiples of
/// the requested count, which bounds the cost on dense graphs.
const SAMPLING_ATTEMPT_FACTOR: usize = 100;

/// Generates a symmetric batch: `round(fraction * |E|)` undirected updates,
/// of which `round(share * B)` are unit-weight insertions between distinct
/// pairs not currently connected, and the rest are deletions drawn uniformly
/// without replacement from the existing non-loop edges. Deterministic for a
/// fixed seed.
pub fn generate_batch(g: &Graph, spec: &BatchSpec) -> Result<BatchUpdate> {
    assert!((0.0..=1.0).contains(&spec.edge_fraction));
    assert!((0.0..=1.0).contains(&spec.insertion_share));
    let edge_count = g.undirected_edge_count();
    let total = (spec.edge_fraction * edge_count as f64).round() as usize;
    if total == 0 {
        return Ok(BatchUpdate::default());
    }
    let n = g.vertex_count();
    let insertions_wanted = (spec.insertion_share * total as f64).round() as usize;
    let deletions_wanted = total - insertions_wanted;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut batch = BatchUpdate::default();

    let candidates: Vec<(u32, u32, f32)> = g
        .undirected_edges()
        .filter(|&(i, j, _)| i != j)
        .collect();
    if deletions_wanted > candidates.len() {
        return Err(Error::NotEnoughEdges {
            requested: deletions_wanted,
            available: candidates.len(),
        });
    }
    if deletions_wanted > 0 {
        for slot in sample_indices(&mut rng, candidates.len(), deletions_wanted) {
            let (i, j, w) = candidates[slot];
            batch.deletions.push((i, j, w));
            batch.deletions.push((j, i, w));
        }
    }

    let mut chosen = std::collections::HashSet::new();
    let mut attempts = 0;
    let attempt_cap = insertions_wanted.saturating_mul(SAMPLING_ATTEMPT_FACTOR);
    while chosen.len() < insertions_wanted {
        if attempts >= attempt_cap {
            return Err(Error::InsertionSamplingExhausted {
                requested: insertions_wanted,
                attempts,
            });
        }
        attempts += 1;
        let i = rng.random_range(0..n as u32);
        let j = rng.random_range(0..n as u32);
        if i == j || g.has_edge(i, j) {
            continue;
        }
        let pair = (i.min(j), i.max(j));
        if chosen.insert(pair) {
            batch.insertions.push((pair.0, pair.1, 1.0));
            batch.insertions.push((pair.1, pair.0, 1.0));
        }
    }
    Ok(batch)
}
