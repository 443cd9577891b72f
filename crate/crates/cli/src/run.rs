//! Sweep and temporal-replay orchestration.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use leiden_core::batch::{generate_batch, BatchSpec};
use leiden_core::dynamic::{
    delta_screening, dynamic_frontier, naive_dynamic, DynamicContext, DynamicOutcome,
};
use leiden_core::graph::{BatchUpdate, Graph};
use leiden_core::io::{load_matrix_market, load_temporal, read_batch, write_batch, TemporalEdge};
use leiden_core::leiden::{leiden_static, EngineReport, LeidenParams};
use leiden_core::quality::partition_stats;

use crate::report::ReportRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Static,
    Nd,
    Ds,
    Df,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Static => "static",
            Algorithm::Nd => "nd",
            Algorithm::Ds => "ds",
            Algorithm::Df => "df",
        }
    }

    fn is_dynamic(self) -> bool {
        self != Algorithm::Static
    }
}

/// Engine knobs shared by both subcommands.
#[derive(Debug, Args)]
pub struct EngineOpts {
    /// Worker threads (1 = deterministic)
    #[arg(long, default_value_t = 1, env = "LEIDEN_BENCH_THREADS")]
    pub threads: usize,
    /// Initial per-iteration convergence tolerance
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    /// Tolerance divisor applied after every pass
    #[arg(long, default_value_t = 10.0)]
    pub tolerance_drop: f64,
    /// Local-moving iteration cap per pass
    #[arg(long, default_value_t = 20)]
    pub max_iterations: usize,
    /// Pass cap
    #[arg(long, default_value_t = 10)]
    pub max_passes: usize,
    /// Stop passing when communities exceed this fraction of vertices
    /// (1 disables; default 0.8 for sweeps, 1.0 for temporal replay)
    #[arg(long)]
    pub aggregation_tolerance: Option<f64>,
    /// Scheduling chunk for local-moving and refinement
    #[arg(long, default_value_t = 2048)]
    pub chunk_main: usize,
    /// Scheduling chunk for aggregation
    /// (default 2048 for static runs, 32 for dynamic ones)
    #[arg(long)]
    pub chunk_aggregation: Option<usize>,
}

impl EngineOpts {
    fn params(&self, algorithm: Algorithm, seed: u64, default_agg_tolerance: f64) -> LeidenParams {
        LeidenParams {
            tolerance: self.tolerance,
            tolerance_drop: self.tolerance_drop,
            max_iterations: self.max_iterations,
            max_passes: self.max_passes,
            aggregation_tolerance: self
                .aggregation_tolerance
                .unwrap_or(default_agg_tolerance),
            chunk_size_main: self.chunk_main.max(1),
            chunk_size_aggregation: self.chunk_aggregation.unwrap_or(match algorithm {
                Algorithm::Static => 2048,
                _ => 32,
            }),
            threads: self.threads.max(1),
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.tolerance <= 0.0 {
            bail!("tolerance must be positive");
        }
        if self.tolerance_drop <= 1.0 {
            bail!("tolerance drop must exceed 1");
        }
        if let Some(t) = self.aggregation_tolerance {
            if !(0.0..=1.0).contains(&t) {
                bail!("aggregation tolerance must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Input graph in Matrix Market coordinate format
    #[arg(long)]
    pub graph: PathBuf,
    /// Batch sizes as fractions of the edge count, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1e-3")]
    pub fractions: Vec<f64>,
    /// Insertion share of each batch; the rest are deletions
    #[arg(long, default_value_t = 0.8)]
    pub insertion_share: f64,
    /// Random batches per fraction
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Algorithms to run, comma separated
    #[arg(long, value_delimiter = ',', default_value = "static,nd,ds,df")]
    pub algorithms: Vec<Algorithm>,
    /// Replay one saved batch file instead of generating batches
    #[arg(long, conflicts_with = "fractions")]
    pub batch_file: Option<PathBuf>,
    /// Write every generated batch into this directory for later replay
    #[arg(long)]
    pub dump_batches: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineOpts,
}

#[derive(Debug, Args)]
pub struct TemporalArgs {
    /// Temporal edge list: whitespace-separated `u v t` lines
    #[arg(long)]
    pub graph: PathBuf,
    /// Batch size as a fraction of the total temporal edge count
    #[arg(long, default_value_t = 1e-3)]
    pub batch_fraction: f64,
    /// Number of consecutive insertion batches to replay
    #[arg(long, default_value_t = 100)]
    pub batches: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Algorithms to run, comma separated
    #[arg(long, value_delimiter = ',', default_value = "static,nd,ds,df")]
    pub algorithms: Vec<Algorithm>,
    #[command(flatten)]
    pub engine: EngineOpts,
}

struct RunOutput {
    membership: Vec<u32>,
    engine: EngineReport,
    marking_s: f64,
    affected_fraction: f64,
    changed_community_fraction: f64,
    total_s: f64,
    outcome: Option<DynamicOutcome>,
}

fn execute(
    algorithm: Algorithm,
    g1: &Graph,
    batch: &BatchUpdate,
    ctx: Option<&DynamicContext>,
    params: &LeidenParams,
) -> RunOutput {
    let clock = Instant::now();
    match algorithm {
        Algorithm::Static => {
            let out = leiden_static(g1, params);
            RunOutput {
                membership: out.membership,
                engine: out.report,
                marking_s: 0.0,
                affected_fraction: 1.0,
                changed_community_fraction: 1.0,
                total_s: clock.elapsed().as_secs_f64(),
                outcome: None,
            }
        }
        dynamic => {
            let ctx = ctx.expect("dynamic algorithm without prior context");
            let out = match dynamic {
                Algorithm::Nd => naive_dynamic(g1, batch, ctx, params),
                Algorithm::Ds => delta_screening(g1, batch, ctx, params),
                Algorithm::Df => dynamic_frontier(g1, batch, ctx, params),
                Algorithm::Static => unreachable!(),
            };
            RunOutput {
                membership: out.membership.clone(),
                engine: out.report.engine.clone(),
                marking_s: out.report.marking_seconds,
                affected_fraction: out.report.affected_fraction,
                changed_community_fraction: out.report.changed_community_fraction,
                total_s: clock.elapsed().as_secs_f64(),
                outcome: Some(out),
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_row(
    run: &RunOutput,
    algorithm: Algorithm,
    g1: &Graph,
    graph_name: &str,
    batch: &BatchUpdate,
    fraction: f64,
    batch_index: Option<usize>,
    rep: Option<usize>,
    seed: u64,
    threads: usize,
    skipped: (usize, usize),
) -> ReportRow {
    // quality figures always come from the metrics module, never from
    // engine internals
    let stats = partition_stats(g1, &run.membership);
    let iterations = run
        .engine
        .iterations_per_pass
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(";");
    ReportRow {
        kind: "run".into(),
        algorithm: algorithm.name().into(),
        graph: graph_name.into(),
        batch_fraction: fraction,
        batch_index,
        rep,
        seed,
        threads,
        batch_edges: batch.undirected_len() as f64,
        skipped_deletions: skipped.0 as f64,
        skipped_insertions: skipped.1 as f64,
        passes: run.engine.passes as f64,
        iterations,
        total_moves: run.engine.moves_per_pass.iter().sum::<u64>() as f64,
        modularity: stats.modularity,
        communities: stats.community_count as f64,
        affected_fraction: run.affected_fraction,
        changed_community_fraction: run.changed_community_fraction,
        disconnected_communities: stats.disconnected_count as f64,
        marking_s: run.marking_s,
        move_s: run.engine.move_seconds,
        refine_s: run.engine.refine_seconds,
        aggregate_s: run.engine.aggregate_seconds,
        total_s: run.total_s,
        max_passes_hit: run.engine.max_passes_hit,
    }
}

fn graph_name(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn run_sweep(args: &SweepArgs) -> Result<Vec<ReportRow>> {
    args.engine.check()?;
    for &fraction in &args.fractions {
        if !(0.0..=1.0).contains(&fraction) {
            bail!("batch fraction {fraction} must lie in [0, 1]");
        }
    }
    if !(0.0..=1.0).contains(&args.insertion_share) {
        bail!("insertion share {} must lie in [0, 1]", args.insertion_share);
    }
    let g0 = load_matrix_market(&args.graph)
        .with_context(|| format!("cannot load graph {}", args.graph.display()))?;
    let name = graph_name(&args.graph);
    let needs_context = args.algorithms.iter().any(|a| a.is_dynamic());

    // the dynamic variants pick up from the communities of the pre-update
    // snapshot; static is always rerun from scratch on the updated graph
    let prior = if needs_context {
        let params = args.engine.params(Algorithm::Static, args.seed, 0.8);
        Some(DynamicContext::compute(
            &g0,
            leiden_static(&g0, &params).membership,
        ))
    } else {
        None
    };

    if let Some(dir) = &args.dump_batches {
        std::fs::create_dir_all(dir)?;
    }

    let mut instances: Vec<(f64, usize, BatchUpdate)> = Vec::new();
    if let Some(path) = &args.batch_file {
        let batch = read_batch(path, &g0)
            .with_context(|| format!("cannot load batch {}", path.display()))?;
        let fraction = batch.undirected_len() as f64 / g0.undirected_edge_count().max(1) as f64;
        instances.push((fraction, 0, batch));
    } else {
        for &fraction in &args.fractions {
            for rep in 0..args.reps {
                let spec = BatchSpec {
                    edge_fraction: fraction,
                    insertion_share: args.insertion_share,
                    seed: args.seed.wrapping_add(rep as u64),
                    repetitions: args.reps,
                };
                let batch = generate_batch(&g0, &spec)?;
                if let Some(dir) = &args.dump_batches {
                    let file = dir.join(format!("{name}-f{fraction:e}-r{rep}.batch"));
                    write_batch(&file, &batch)?;
                }
                instances.push((fraction, rep, batch));
            }
        }
    }

    let mut rows = Vec::new();
    for (fraction, rep, batch) in &instances {
        let applied = g0.apply_batch(batch)?;
        let g1 = applied.graph;
        let skipped = (applied.skipped_deletions, applied.skipped_insertions);
        for &algorithm in &args.algorithms {
            let params = args.engine.params(algorithm, args.seed, 0.8);
            let run = execute(algorithm, &g1, batch, prior.as_ref(), &params);
            rows.push(build_row(
                &run,
                algorithm,
                &g1,
                &name,
                batch,
                *fraction,
                None,
                Some(*rep),
                args.seed,
                args.engine.threads,
                skipped,
            ));
        }
    }
    Ok(rows)
}

/// Turns the next slice of the temporal stream into a valid insertion
/// batch against the current snapshot: self-loops, already-present edges,
/// and within-batch duplicates are dropped and counted.
fn temporal_batch(g: &Graph, records: &[TemporalEdge]) -> (BatchUpdate, usize) {
    let mut batch = BatchUpdate::default();
    let mut chosen = std::collections::HashSet::new();
    let mut skipped = 0;
    for r in records {
        if r.source == r.target {
            skipped += 1;
            continue;
        }
        let pair = (r.source.min(r.target), r.source.max(r.target));
        if g.has_edge(pair.0, pair.1) || !chosen.insert(pair) {
            skipped += 1;
            continue;
        }
        batch.insertions.push((pair.0, pair.1, 1.0));
        batch.insertions.push((pair.1, pair.0, 1.0));
    }
    (batch, skipped)
}

pub fn run_temporal(args: &TemporalArgs) -> Result<Vec<ReportRow>> {
    args.engine.check()?;
    if !(0.0..=1.0).contains(&args.batch_fraction) {
        bail!("batch fraction {} must lie in [0, 1]", args.batch_fraction);
    }
    let (records, vertex_count) = load_temporal(&args.graph)
        .with_context(|| format!("cannot load temporal graph {}", args.graph.display()))?;
    if records.is_empty() {
        bail!("temporal file {} holds no edges", args.graph.display());
    }
    let name = graph_name(&args.graph);
    let total = records.len();
    let batch_size = (args.batch_fraction * total as f64).round() as usize;
    if batch_size == 0 {
        bail!("batch fraction {} rounds to zero edges of {total}", args.batch_fraction);
    }

    // build the base snapshot from the first 90% of the stream; duplicates
    // collapse and reverse edges are added
    let base_len = (total as f64 * 0.9).floor() as usize;
    let base: Vec<(u32, u32, f32)> = records[..base_len]
        .iter()
        .map(|r| (r.source, r.target, 1.0))
        .collect();
    let mut current = Graph::build(&base, vertex_count)?;

    let available = total - base_len;
    let wanted = batch_size * args.batches;
    let batch_count = if available < wanted {
        let usable = available.div_ceil(batch_size);
        eprintln!(
            "warning: only {available} temporal edges remain after the 90% load; \
             truncating to {usable} batches of {batch_size}"
        );
        usable
    } else {
        args.batches
    };

    // aggregation tolerance is disabled for slow-aggregating temporal
    // streams unless explicitly overridden
    let default_agg_tolerance = 1.0;
    let mut contexts: HashMap<&'static str, DynamicContext> = HashMap::new();
    if args.algorithms.iter().any(|a| a.is_dynamic()) {
        let params = args
            .engine
            .params(Algorithm::Static, args.seed, default_agg_tolerance);
        let membership = leiden_static(&current, &params).membership;
        for &algorithm in &args.algorithms {
            if algorithm.is_dynamic() {
                contexts.insert(
                    algorithm.name(),
                    DynamicContext::compute(&current, membership.clone()),
                );
            }
        }
    }

    let mut rows = Vec::new();
    let mut cursor = base_len;
    for index in 1..=batch_count {
        let end = (cursor + batch_size).min(total);
        let (batch, skipped) = temporal_batch(&current, &records[cursor..end]);
        cursor = end;
        let applied = current.apply_batch(&batch)?;
        current = applied.graph;
        for &algorithm in &args.algorithms {
            let params = args.engine.params(algorithm, args.seed, default_agg_tolerance);
            let ctx = contexts.get(algorithm.name());
            let run = execute(algorithm, &current, &batch, ctx, &params);
            if let Some(outcome) = run.outcome.clone() {
                contexts.insert(algorithm.name(), outcome.into_context());
            }
            rows.push(build_row(
                &run,
                algorithm,
                &current,
                &name,
                &batch,
                args.batch_fraction,
                Some(index),
                None,
                args.seed,
                args.engine.threads,
                (0, skipped),
            ));
        }
    }
    Ok(rows)
}
