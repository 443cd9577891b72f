//! Undirected weighted graphs in compressed adjacency (CSR) form, and batch
//! updates that turn one snapshot into the next.
//!
//! Every undirected edge is stored in both directions; a self-loop is stored
//! once. Adjacency lists are sorted by neighbor id and free of duplicates, so
//! edge lookup is a binary search. Edge weights are kept in 32-bit floats;
//! anything aggregated (weighted degrees, total edge weight) is accumulated
//! in 64-bit.

use crate::error::{Error, Result};

/// Immutable CSR graph. Construct with [`Graph::build`], evolve with
/// [`Graph::apply_batch`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f32>,
}

/// Symmetric sets of edge deletions and insertions between two snapshots.
///
/// Both lists carry one record per direction: for every `(i, j)` the reverse
/// `(j, i)` is present with the same weight. Deletions carry the weight of
/// the edge being removed so that auxiliary weights can be maintained without
/// consulting the previous snapshot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchUpdate {
    pub deletions: Vec<(u32, u32, f32)>,
    pub insertions: Vec<(u32, u32, f32)>,
}

/// Result of applying a batch: the next snapshot plus counters for entries
/// that were skipped (deleting a missing edge, inserting an existing one).
/// Generated batches never trip the counters; loader-fed batches may.
#[derive(Debug)]
pub struct ApplyOutcome {
    pub graph: Graph,
    pub skipped_deletions: usize,
    pub skipped_insertions: usize,
}

impl Graph {
    /// Builds a CSR graph from a directed edge list.
    ///
    /// Missing reverse edges are added, duplicate `(i, j)` pairs collapse
    /// keeping the weight that appears last in the input, and self-loops are
    /// stored once.
    pub fn build(edges: &[(u32, u32, f32)], vertex_count: usize) -> Result<Graph> {
        // (source, target, input order); both directions of each input edge
        // share the input order so last-wins stays symmetric.
        let mut records: Vec<(u32, u32, usize)> = Vec::with_capacity(edges.len() * 2);
        let mut weight_of: Vec<f32> = Vec::with_capacity(edges.len());
        for (seq, &(i, j, w)) in edges.iter().enumerate() {
            for id in [i, j] {
                if id as usize >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        id: id as u64,
                        vertex_count,
                    });
                }
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight {
                    i,
                    j,
                    weight: w as f64,
                });
            }
            weight_of.push(w);
            records.push((i, j, seq));
            if i != j {
                records.push((j, i, seq));
            }
        }
        records.sort_unstable_by_key(|&(i, j, seq)| (i, j, seq));

        let mut offsets = vec![0usize; vertex_count + 1];
        let mut neighbors = Vec::with_capacity(records.len());
        let mut weights = Vec::with_capacity(records.len());
        let mut idx = 0;
        while idx < records.len() {
            let (i, j, _) = records[idx];
            // skip to the last record of this (i, j) run: last weight wins
            let mut last = idx;
            while last + 1 < records.len()
                && records[last + 1].0 == i
                && records[last + 1].1 == j
            {
                last += 1;
            }
            neighbors.push(j);
            weights.push(weight_of[records[last].2]);
            offsets[i as usize + 1] += 1;
            idx = last + 1;
        }
        for v in 0..vertex_count {
            offsets[v + 1] += offsets[v];
        }
        Ok(Graph {
            offsets,
            neighbors,
            weights,
        })
    }

    /// Assembles a graph from already-canonical CSR arrays (sorted rows, no
    /// duplicates, symmetric). Used by aggregation, which builds rows
    /// directly.
    pub(crate) fn from_csr_parts(
        offsets: Vec<usize>,
        neighbors: Vec<u32>,
        weights: Vec<f32>,
    ) -> Graph {
        debug_assert_eq!(*offsets.last().unwrap(), neighbors.len());
        debug_assert_eq!(neighbors.len(), weights.len());
        Graph {
            offsets,
            neighbors,
            weights,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored directed records (2M for a graph with M undirected
    /// non-loop edges; self-loops count once).
    pub fn directed_edge_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Number of undirected edges, counting each self-loop once.
    pub fn undirected_edge_count(&self) -> usize {
        (self.directed_edge_count() + self.self_loop_count()) / 2
    }

    pub fn self_loop_count(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&v| self.edge_weight(v as u32, v as u32).is_some())
            .count()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Neighbors of `v` with their weights, sorted by neighbor id.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = (u32, f32)> + '_ {
        let lo = self.offsets[v as usize];
        let hi = self.offsets[v as usize + 1];
        self.neighbors[lo..hi]
            .iter()
            .copied()
            .zip(self.weights[lo..hi].iter().copied())
    }

    pub fn edge_weight(&self, i: u32, j: u32) -> Option<f32> {
        let lo = self.offsets[i as usize];
        let hi = self.offsets[i as usize + 1];
        let slot = self.neighbors[lo..hi].binary_search(&j).ok()?;
        Some(self.weights[lo + slot])
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.edge_weight(i, j).is_some()
    }

    /// Sum of all stored directed weights divided by two: `m`.
    pub fn total_edge_weight(&self) -> f64 {
        self.weights.iter().map(|&w| w as f64).sum::<f64>() / 2.0
    }

    /// Weighted degree of every vertex, accumulated in f64.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        (0..self.vertex_count())
            .map(|v| self.neighbors(v as u32).map(|(_, w)| w as f64).sum())
            .collect()
    }

    /// All directed records as `(source, target, weight)` triples.
    pub fn directed_edges(&self) -> impl Iterator<Item = (u32, u32, f32)> + '_ {
        (0..self.vertex_count()).flat_map(move |v| {
            self.neighbors(v as u32).map(move |(j, w)| (v as u32, j, w))
        })
    }

    /// Undirected edges, each pair reported once with `i <= j`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (u32, u32, f32)> + '_ {
        self.directed_edges().filter(|&(i, j, _)| i <= j)
    }

    /// Applies a symmetric batch, producing the next snapshot. The vertex
    /// universe is fixed: batches never add or remove vertices. Invalid
    /// entries are skipped and counted rather than failing the whole batch.
    pub fn apply_batch(&self, batch: &BatchUpdate) -> Result<ApplyOutcome> {
        let n = self.vertex_count();
        let check = |records: &[(u32, u32, f32)]| -> Result<()> {
            for &(i, j, _) in records {
                for id in [i, j] {
                    if id as usize >= n {
                        return Err(Error::VertexOutOfRange {
                            id: id as u64,
                            vertex_count: n,
                        });
                    }
                }
            }
            Ok(())
        };
        check(&batch.deletions)?;
        check(&batch.insertions)?;

        let mut deletions: Vec<(u32, u32)> =
            batch.deletions.iter().map(|&(i, j, _)| (i, j)).collect();
        deletions.sort_unstable();
        let mut insertions: Vec<(u32, u32, f32)> = batch.insertions.clone();
        insertions.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut offsets = vec![0usize; n + 1];
        let mut neighbors = Vec::with_capacity(self.neighbors.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        let mut skipped_deletions = 0;
        let mut skipped_insertions = 0;

        let mut del_cursor = 0;
        let mut ins_cursor = 0;
        for v in 0..n as u32 {
            let del_start = del_cursor;
            while del_cursor < deletions.len() && deletions[del_cursor].0 == v {
                del_cursor += 1;
            }
            let dels = &deletions[del_start..del_cursor];

            let ins_start = ins_cursor;
            while ins_cursor < insertions.len() && insertions[ins_cursor].0 == v {
                ins_cursor += 1;
            }
            let inss = &insertions[ins_start..ins_cursor];

            let row_start = neighbors.len();
            let mut deleted_here = vec![false; dels.len()];
            for (j, w) in self.neighbors(v) {
                match dels.binary_search_by_key(&j, |&(_, t)| t) {
                    Ok(slot) => deleted_here[slot] = true,
                    Err(_) => {
                        neighbors.push(j);
                        weights.push(w);
                    }
                }
            }
            skipped_deletions += deleted_here.iter().filter(|&&hit| !hit).count();

            let mut prev_target = None;
            for &(_, j, w) in inss {
                if prev_target == Some(j) {
                    skipped_insertions += 1; // duplicate within the batch
                    continue;
                }
                prev_target = Some(j);
                let row = &neighbors[row_start..];
                match row.binary_search(&j) {
                    Ok(_) => skipped_insertions += 1,
                    Err(slot) => {
                        neighbors.insert(row_start + slot, j);
                        weights.insert(row_start + slot, w);
                    }
                }
            }
            offsets[v as usize + 1] = neighbors.len();
        }
        // sorted inserts above keep each row ordered; deletions preserve order

        Ok(ApplyOutcome {
            graph: Graph {
                offsets,
                neighbors,
                weights,
            },
            skipped_deletions,
            skipped_insertions,
        })
    }

    /// Checks the structural invariants (monotone offsets, symmetry, sorted
    /// duplicate-free rows, positive weights). Intended for tests and loader
    /// debugging; cost is a full adjacency scan.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.vertex_count();
        assert_eq!(self.offsets[n], self.neighbors.len());
        for v in 0..n as u32 {
            let mut prev: Option<u32> = None;
            for (j, w) in self.neighbors(v) {
                if let Some(p) = prev {
                    assert!(p < j, "row {v} not sorted or has duplicates");
                }
                prev = Some(j);
                if !(w > 0.0) {
                    return Err(Error::NonPositiveWeight {
                        i: v,
                        j,
                        weight: w as f64,
                    });
                }
                let back = self.edge_weight(j, v);
                assert_eq!(back, Some(w), "missing or mismatched reverse of ({v}, {j})");
            }
        }
        Ok(())
    }
}

impl BatchUpdate {
    pub fn is_empty(&self) -> bool {
        self.deletions.is_empty() && self.insertions.is_empty()
    }

    /// Total undirected updates described by this batch (directed records
    /// over two).
    pub fn undirected_len(&self) -> usize {
        (self.deletions.len() + self.insertions.len()) / 2
    }

    /// The batch that undoes this one: deletions become insertions at their
    /// recorded weight and vice versa.
    pub fn inverse(&self) -> BatchUpdate {
        BatchUpdate {
            deletions: self.insertions.clone(),
            insertions: self.deletions.clone(),
        }
    }

    /// Verifies the batch invariants: symmetry with equal weights, no
    /// self-pairs, and no overlap between deletion and insertion pairs.
    pub fn check_invariants(&self) {
        let key = |i: u32, j: u32| (i.min(j), i.max(j));
        for records in [&self.deletions, &self.insertions] {
            let mut directed: std::collections::HashMap<(u32, u32), f32> =
                std::collections::HashMap::new();
            for &(i, j, w) in records {
                assert_ne!(i, j, "self-pair ({i}, {j}) in batch");
                directed.insert((i, j), w);
            }
            for (&(i, j), &w) in &directed {
                assert_eq!(
                    directed.get(&(j, i)),
                    Some(&w),
                    "asymmetric record ({i}, {j})"
                );
            }
        }
        let deleted: std::collections::HashSet<(u32, u32)> = self
            .deletions
            .iter()
            .map(|&(i, j, _)| key(i, j))
            .collect();
        for &(i, j, _) in &self.insertions {
            assert!(
                !deleted.contains(&key(i, j)),
                "pair ({i}, {j}) both deleted and inserted"
            );
        }
    }
}
