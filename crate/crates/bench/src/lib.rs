//! Shared fixtures for the engine benchmarks.

use leiden_core::batch::{generate_batch, BatchSpec};
use leiden_core::dynamic::DynamicContext;
use leiden_core::graph::{BatchUpdate, Graph};
use leiden_core::leiden::{leiden_static, LeidenParams};
use leiden_core::synthetic::planted_partition;

pub struct Fixture {
    pub updated: Graph,
    pub batch: BatchUpdate,
    pub prior: DynamicContext,
}

/// A planted graph with an applied batch and the pre-update community
/// state, ready for dynamic-variant benchmarking.
pub fn fixture(n: usize, communities: usize, batch_fraction: f64, seed: u64) -> Fixture {
    let base = planted_partition(n, communities, 8.0, 2.0, seed);
    let params = LeidenParams::default();
    let prior = DynamicContext::compute(&base, leiden_static(&base, &params).membership);
    let spec = BatchSpec {
        edge_fraction: batch_fraction,
        insertion_share: 0.8,
        seed: seed + 1,
        repetitions: 1,
    };
    let batch = generate_batch(&base, &spec).expect("batch generation");
    let updated = base.apply_batch(&batch).expect("batch application").graph;
    Fixture {
        updated,
        batch,
        prior,
    }
}
