//! Parallel Leiden community detection with incremental batch-update support.
//!
//! The crate provides:
//!
//! - [`graph`]: immutable CSR graphs and symmetric batch updates;
//! - [`leiden`]: the dynamic-supporting parallel Leiden engine
//!   (local-moving, subset renumbering, constrained refinement,
//!   super-vertex aggregation);
//! - [`dynamic`]: the Naive-dynamic, Delta-screening, and Dynamic Frontier
//!   front-ends that reuse prior community state across snapshots;
//! - [`quality`]: modularity, delta-modularity, and connectivity audits;
//! - [`batch`]: seeded random batch-update generation;
//! - [`io`]: Matrix Market and temporal edge-list loaders plus the batch
//!   replay text format;
//! - [`synthetic`]: seeded graph generators for tests and benchmarks.
//!
//! ```
//! use leiden_core::batch::{generate_batch, BatchSpec};
//! use leiden_core::dynamic::{dynamic_frontier, DynamicContext};
//! use leiden_core::leiden::{leiden_static, LeidenParams};
//! use leiden_core::synthetic::planted_partition;
//!
//! # fn main() -> leiden_core::Result<()> {
//! let params = LeidenParams::default();
//! let g0 = planted_partition(1_000, 20, 8.0, 2.0, 42);
//! let prior = DynamicContext::compute(&g0, leiden_static(&g0, &params).membership);
//!
//! let batch = generate_batch(
//!     &g0,
//!     &BatchSpec { edge_fraction: 1e-2, ..Default::default() },
//! )?;
//! let g1 = g0.apply_batch(&batch)?.graph;
//!
//! let updated = dynamic_frontier(&g1, &batch, &prior, &params);
//! assert!(updated.report.engine.community_count > 1);
//! # Ok(())
//! # }
//! ```

pub mod batch;
pub mod dynamic;
pub mod error;
pub mod graph;
pub mod io;
pub mod leiden;
pub mod parallel;
pub mod quality;
pub mod synthetic;

pub use batch::{generate_batch, BatchSpec};
pub use dynamic::{
    delta_screening, dynamic_frontier, naive_dynamic, update_weights, DynamicContext,
    DynamicOutcome, VariantReport,
};
pub use error::{Error, Result};
pub use graph::{ApplyOutcome, BatchUpdate, Graph};
pub use leiden::{
    changed_communities, leiden, leiden_static, AffectedHooks, EngineReport, LeidenOutcome,
    LeidenParams,
};
pub use quality::{
    audit_connectivity, delta_modularity, modularity, partition_stats, PartitionStats,
};
