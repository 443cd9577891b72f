//! Input formats: Matrix Market coordinate files, SNAP-style temporal edge
//! lists, and the batch replay text format.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BatchUpdate, Graph};

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Loads a `%%MatrixMarket matrix coordinate` file as an undirected graph.
///
/// `pattern` entries get unit weight; `real`/`integer` entries use the given
/// value. Indices are 1-based in the file and converted to 0-based. Both
/// `symmetric` and `general` files produce a symmetrized graph; duplicate
/// entries collapse keeping the last.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let header = header?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() < 5 || !fields[0].starts_with("%%matrixmarket") {
        return Err(parse_err(path, 1, "missing %%MatrixMarket header"));
    }
    if fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(Error::Unsupported(format!(
            "only 'matrix coordinate' files are supported, got '{} {}'",
            fields[1], fields[2]
        )));
    }
    let value_field = fields[3].clone();
    if !matches!(value_field.as_str(), "pattern" | "real" | "integer") {
        return Err(Error::Unsupported(format!(
            "unsupported value field '{value_field}'"
        )));
    }
    match fields[4].as_str() {
        "symmetric" | "general" => {}
        other => {
            return Err(Error::Unsupported(format!(
                "unsupported symmetry '{other}'"
            )))
        }
    }

    let mut size_line = None;
    let mut size_line_no = 0;
    for (no, line) in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some(trimmed.to_string());
        size_line_no = no + 1;
        break;
    }
    let size_line = size_line.ok_or_else(|| parse_err(path, 0, "missing size line"))?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(path, size_line_no, "bad size line")))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(parse_err(path, size_line_no, "size line needs rows cols nnz"));
    }
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
    if rows != cols {
        return Err(Error::Unsupported(format!(
            "adjacency matrix must be square, got {rows}x{cols}"
        )));
    }

    let mut edges = Vec::with_capacity(nnz);
    for (no, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let i: u64 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(path, no + 1, "bad row index"))?;
        let j: u64 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(path, no + 1, "bad column index"))?;
        if i == 0 || j == 0 || i > rows as u64 || j > cols as u64 {
            return Err(parse_err(path, no + 1, format!("index ({i}, {j}) out of bounds")));
        }
        let w = match value_field.as_str() {
            "pattern" => 1.0f32,
            _ => {
                let value: f64 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(path, no + 1, "missing value"))?;
                if value <= 0.0 {
                    return Err(parse_err(
                        path,
                        no + 1,
                        format!("edge weight must be positive, got {value}"),
                    ));
                }
                value as f32
            }
        };
        edges.push((i as u32 - 1, j as u32 - 1, w));
    }
    if edges.len() != nnz {
        return Err(parse_err(
            path,
            0,
            format!("expected {nnz} entries, found {}", edges.len()),
        ));
    }
    Graph::build(&edges, rows)
}

/// One record of a temporal edge stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalEdge {
    pub source: u32,
    pub target: u32,
    pub timestamp: i64,
}

/// Loads a whitespace-separated `u v t` temporal edge list (`#` comments),
/// stably sorted by timestamp so records sharing a timestamp keep file
/// order. The vertex universe is `0..=max_id` over the whole file.
pub fn load_temporal(path: impl AsRef<Path>) -> Result<(Vec<TemporalEdge>, usize)> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    let mut max_id = 0u32;
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_u32 = |what: &str| -> Result<u32> {
            tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(path, no + 1, format!("bad {what}")))
        };
        let source = next_u32("source vertex")?;
        let target = next_u32("target vertex")?;
        let timestamp: i64 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(path, no + 1, "bad timestamp"))?;
        max_id = max_id.max(source).max(target);
        records.push(TemporalEdge {
            source,
            target,
            timestamp,
        });
    }
    records.sort_by_key(|r| r.timestamp); // stable: ties keep file order
    let vertex_count = if records.is_empty() {
        0
    } else {
        max_id as usize + 1
    };
    Ok((records, vertex_count))
}

/// Writes a batch in the replay text format: one directed record per line,
/// `D i j` for deletions and `I i j w` for insertions.
pub fn write_batch(path: impl AsRef<Path>, batch: &BatchUpdate) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for &(i, j, _) in &batch.deletions {
        writeln!(out, "D {i} {j}")?;
    }
    for &(i, j, w) in &batch.insertions {
        writeln!(out, "I {i} {j} {w}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a replay batch, resolving deletion weights against the snapshot the
/// batch applies to.
pub fn read_batch(path: impl AsRef<Path>, g: &Graph) -> Result<BatchUpdate> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut batch = BatchUpdate::default();
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let bad = |msg: &str| parse_err(path, no + 1, msg);
        match tokens.first() {
            Some(&"D") if tokens.len() == 3 => {
                let i: u32 = tokens[1].parse().map_err(|_| bad("bad vertex id"))?;
                let j: u32 = tokens[2].parse().map_err(|_| bad("bad vertex id"))?;
                let w = g.edge_weight(i, j).unwrap_or(1.0);
                batch.deletions.push((i, j, w));
            }
            Some(&"I") if tokens.len() == 4 => {
                let i: u32 = tokens[1].parse().map_err(|_| bad("bad vertex id"))?;
                let j: u32 = tokens[2].parse().map_err(|_| bad("bad vertex id"))?;
                let w: f32 = tokens[3].parse().map_err(|_| bad("bad weight"))?;
                batch.insertions.push((i, j, w));
            }
            _ => return Err(bad("expected 'D i j' or 'I i j w'")),
        }
    }
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("leiden-core-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{}-{name}", std::process::id()));
        let mut f = File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn loads_symmetric_pattern_mtx() {
        let path = write_temp(
            "sym.mtx",
            "%%MatrixMarket matrix coordinate pattern symmetric\n\
             % triangle plus a tail\n\
             4 4 4\n\
             2 1\n\
             3 1\n\
             3 2\n\
             4 3\n",
        );
        let g = load_matrix_market(&path).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.undirected_edge_count(), 4);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert_eq!(g.weighted_degrees(), vec![2.0, 2.0, 3.0, 1.0]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn loads_general_real_mtx_and_symmetrizes() {
        let path = write_temp(
            "gen.mtx",
            "%%MatrixMarket matrix coordinate real general\n\
             3 3 3\n\
             1 2 1.5\n\
             2 3 2.0\n\
             3 1 0.5\n",
        );
        let g = load_matrix_market(&path).unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(1.5));
        assert_eq!(g.edge_weight(1, 0), Some(1.5));
        assert!((g.total_edge_weight() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_mtx_headers() {
        let path = write_temp("bad.mtx", "%%MatrixMarket matrix array real general\n1 1 1\n");
        assert!(matches!(
            load_matrix_market(&path),
            Err(Error::Unsupported(_))
        ));
        let path = write_temp("bad2.mtx", "not a header\n");
        assert!(load_matrix_market(&path).is_err());
    }

    #[test]
    fn rejects_non_square_mtx() {
        let path = write_temp(
            "rect.mtx",
            "%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n",
        );
        assert!(matches!(
            load_matrix_market(&path),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn temporal_sort_is_stable_on_timestamp_ties() {
        let path = write_temp(
            "temporal.txt",
            "# comment line\n\
             5 1 300\n\
             0 1 100\n\
             2 3 200\n\
             4 5 200\n",
        );
        let (records, vertex_count) = load_temporal(&path).unwrap();
        assert_eq!(vertex_count, 6);
        assert_eq!(records[0].timestamp, 100);
        // the two t=200 records keep their file order
        assert_eq!(records[1].source, 2);
        assert_eq!(records[2].source, 4);
        assert_eq!(records[3].timestamp, 300);
    }

    #[test]
    fn duplicate_temporal_records_collapse_when_built() {
        let path = write_temp(
            "dups.txt",
            "0 1 10\n1 0 20\n0 1 30\n2 0 40\n0 1 50\n",
        );
        let (records, vertex_count) = load_temporal(&path).unwrap();
        assert_eq!(records.len(), 5);
        let edges: Vec<(u32, u32, f32)> = records
            .iter()
            .map(|r| (r.source, r.target, 1.0))
            .collect();
        let g = Graph::build(&edges, vertex_count).unwrap();
        // five temporal records, two static edges
        assert_eq!(g.undirected_edge_count(), 2);
    }

    #[test]
    fn batch_file_round_trip() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 2.0)], 3).unwrap();
        let batch = BatchUpdate {
            deletions: vec![(1, 2, 2.0), (2, 1, 2.0)],
            insertions: vec![(0, 2, 1.0), (2, 0, 1.0)],
        };
        let path = write_temp("batch.txt", "");
        write_batch(&path, &batch).unwrap();
        let loaded = read_batch(&path, &g).unwrap();
        assert_eq!(loaded, batch);
    }
}
