//! Report rows and emission. One flat record per run plus per-group mean
//! rows; CSV column order is fixed by the field order below and pinned by a
//! test.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "kind,algorithm,graph,batch_fraction,batch_index,rep,seed,threads,\
batch_edges,skipped_deletions,skipped_insertions,passes,iterations,total_moves,modularity,\
communities,affected_fraction,changed_community_fraction,disconnected_communities,\
marking_s,move_s,refine_s,aggregate_s,total_s,max_passes_hit";

/// One emitted record. Count-like fields are `f64` so that mean rows can
/// carry fractional averages in the same schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// "run" or "mean".
    pub kind: String,
    pub algorithm: String,
    pub graph: String,
    pub batch_fraction: f64,
    /// 1-based batch number for temporal replay rows.
    pub batch_index: Option<usize>,
    /// Repetition number for sweep rows.
    pub rep: Option<usize>,
    pub seed: u64,
    pub threads: usize,
    /// Undirected updates in the applied batch.
    pub batch_edges: f64,
    pub skipped_deletions: f64,
    pub skipped_insertions: f64,
    pub passes: f64,
    /// Per-pass local-moving iteration counts, semicolon-joined; empty in
    /// mean rows.
    pub iterations: String,
    pub total_moves: f64,
    pub modularity: f64,
    pub communities: f64,
    pub affected_fraction: f64,
    pub changed_community_fraction: f64,
    pub disconnected_communities: f64,
    pub marking_s: f64,
    pub move_s: f64,
    pub refine_s: f64,
    pub aggregate_s: f64,
    pub total_s: f64,
    pub max_passes_hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Arithmetic mean of the numeric fields of `rows`, which must share
/// algorithm and batch fraction. Wall times are averaged like everything
/// else; geometric aggregation only enters when combining across graphs,
/// which is out of scope for a single-graph report.
pub fn mean_row(rows: &[ReportRow]) -> ReportRow {
    assert!(!rows.is_empty());
    let n = rows.len() as f64;
    let avg = |pick: fn(&ReportRow) -> f64| rows.iter().map(pick).sum::<f64>() / n;
    ReportRow {
        kind: "mean".into(),
        algorithm: rows[0].algorithm.clone(),
        graph: rows[0].graph.clone(),
        batch_fraction: rows[0].batch_fraction,
        batch_index: None,
        rep: None,
        seed: rows[0].seed,
        threads: rows[0].threads,
        batch_edges: avg(|r| r.batch_edges),
        skipped_deletions: avg(|r| r.skipped_deletions),
        skipped_insertions: avg(|r| r.skipped_insertions),
        passes: avg(|r| r.passes),
        iterations: String::new(),
        total_moves: avg(|r| r.total_moves),
        modularity: avg(|r| r.modularity),
        communities: avg(|r| r.communities),
        affected_fraction: avg(|r| r.affected_fraction),
        changed_community_fraction: avg(|r| r.changed_community_fraction),
        disconnected_communities: avg(|r| r.disconnected_communities),
        marking_s: avg(|r| r.marking_s),
        move_s: avg(|r| r.move_s),
        refine_s: avg(|r| r.refine_s),
        aggregate_s: avg(|r| r.aggregate_s),
        total_s: avg(|r| r.total_s),
        max_passes_hit: rows.iter().any(|r| r.max_passes_hit),
    }
}

/// Appends one mean row per (algorithm, batch fraction) group, preserving
/// first-appearance order of the groups.
pub fn append_mean_rows(rows: &mut Vec<ReportRow>) {
    let mut groups: Vec<(String, f64)> = Vec::new();
    for row in rows.iter() {
        let key = (row.algorithm.clone(), row.batch_fraction);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut means = Vec::new();
    for (algorithm, fraction) in groups {
        let group: Vec<ReportRow> = rows
            .iter()
            .filter(|r| r.algorithm == algorithm && r.batch_fraction == fraction)
            .cloned()
            .collect();
        means.push(mean_row(&group));
    }
    rows.extend(means);
}

pub fn write_rows(rows: &[ReportRow], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            if rows.is_empty() {
                // header-only output
                writer.write_record(CSV_HEADER.split(','))?;
            }
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn emit(rows: &[ReportRow], format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("cannot write report to {}", path.display()))?;
            write_rows(rows, format, &mut file)
        }
        None => write_rows(rows, format, &mut std::io::stdout().lock()),
    }
}
