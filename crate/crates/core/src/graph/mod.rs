//! Undirected weighted graphs, per-node features, and the degree/volume
//! bookkeeping that every entropy computation reads from.

mod io;
mod synth;

pub use io::{
    edge_list_string, features_csv_string, load_edge_list, load_features_csv, parse_edge_list,
    parse_features_csv, write_edge_list, write_features_csv,
};
pub use synth::{make_grid, make_ring, random_graph};

use std::collections::VecDeque;

use crate::error::{Result, SepError};

/// One undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected weighted simple graph in compressed adjacency form.
///
/// Self-loops are dropped and parallel edges are collapsed by summing their
/// weights, so there is at most one weight per unordered pair. Node ids are
/// dense in `0..node_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    degree: Vec<f64>,
    total_volume: f64,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples.
    ///
    /// Self-loops are skipped, duplicates summed in input order. Ids must be
    /// below `node_count` and weights finite and nonnegative.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut raw: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in edges {
            if u >= node_count || v >= node_count {
                return Err(SepError::domain(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(SepError::domain(format!(
                    "edge ({u}, {v}) has invalid weight {w}; weights must be finite and nonnegative"
                )));
            }
            if u == v {
                continue;
            }
            raw.push((u.min(v), u.max(v), w));
        }
        // stable: duplicate weights are summed in the order they were given
        raw.sort_by_key(|&(u, v, _)| (u, v));

        let mut merged: Vec<Edge> = Vec::with_capacity(raw.len());
        for (u, v, w) in raw {
            match merged.last_mut() {
                Some(last) if last.u == u && last.v == v => last.w += w,
                _ => merged.push(Edge { u, v, w }),
            }
        }
        Ok(Self::from_canonical_edges(node_count, merged))
    }

    fn from_canonical_edges(node_count: usize, edges: Vec<Edge>) -> Self {
        let mut counts = vec![0usize; node_count + 1];
        for e in &edges {
            counts[e.u + 1] += 1;
            counts[e.v + 1] += 1;
        }
        for i in 0..node_count {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        let mut weights = vec![0.0f64; 2 * edges.len()];
        let mut degree = vec![0.0f64; node_count];
        for e in &edges {
            neighbors[cursor[e.u]] = e.v;
            weights[cursor[e.u]] = e.w;
            cursor[e.u] += 1;
            neighbors[cursor[e.v]] = e.u;
            weights[cursor[e.v]] = e.w;
            cursor[e.v] += 1;
            degree[e.u] += e.w;
            degree[e.v] += e.w;
        }
        // Edges are sorted by (u, v), so each node's slots hold lower-id
        // neighbours first (visited as `v`) and then higher-id ones (as `u`),
        // both ascending. Neighbour lists therefore come out sorted.
        let total_volume = degree.iter().sum();
        Graph {
            node_count,
            edges,
            offsets,
            neighbors,
            weights,
            degree,
            total_volume,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degree of `node`.
    pub fn degree(&self, node: usize) -> f64 {
        self.degree[node]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    /// `vol(V)`: sum of all weighted degrees, i.e. twice the total edge weight.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Neighbours of `node` with edge weights, ascending by neighbour id.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Weight of the edge between `u` and `v`, or 0 when absent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        if u >= self.node_count || v >= self.node_count {
            return 0.0;
        }
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.neighbors[range.clone()].binary_search(&v) {
            Ok(i) => self.weights[range.start + i],
            Err(_) => 0.0,
        }
    }

    /// Nodes with zero weighted degree.
    pub fn isolated_nodes(&self) -> Vec<usize> {
        (0..self.node_count)
            .filter(|&v| self.offsets[v] == self.offsets[v + 1])
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.node_count];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.node_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for (y, _) in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.node_count)?;
        Graph::from_edges(
            self.node_count,
            self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.w)),
        )
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(SepError::shape(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(SepError::domain("not a permutation"));
        }
    }
    Ok(())
}

/// Dense row-major per-node feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FeatureMatrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(SepError::shape(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(FeatureMatrix { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(SepError::shape(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Ok(FeatureMatrix {
            rows: rows.len(),
            cols,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Errors unless the matrix has one row per node of `graph`.
    pub fn check_rows_for(&self, graph: &Graph) -> Result<()> {
        if self.rows != graph.node_count() {
            return Err(SepError::shape(format!(
                "feature matrix has {} rows but graph has {} nodes",
                self.rows,
                graph.node_count()
            )));
        }
        Ok(())
    }

    /// Mean squared difference over all entries.
    pub fn mse(&self, other: &FeatureMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SepError::shape(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.values.is_empty() {
            return Ok(0.0);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(sum / self.values.len() as f64)
    }
}
