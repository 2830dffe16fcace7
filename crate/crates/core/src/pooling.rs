//! Hard cluster assignments read off a leveled coding tree, and the pooling
//! algebra `A' = S A S^T`, `P' = S H` together with its transpose
//! (unpooling) direction.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};
use crate::graph::{FeatureMatrix, Graph};
use crate::tree::{build_coding_tree, CodingTree, NodeId};

/// A 0/1 matrix with exactly one 1 per column, stored as the row index of
/// that 1 for each column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    level: usize,
    clusters: usize,
    assign: Vec<usize>,
}

impl ClusterAssignment {
    pub fn new(level: usize, clusters: usize, assign: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = assign.iter().find(|&&c| c >= clusters) {
            return Err(SepError::shape(format!(
                "assignment to cluster {bad} but only {clusters} clusters exist"
            )));
        }
        let mut used = vec![false; clusters];
        for &c in &assign {
            used[c] = true;
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(SepError::shape(format!("cluster {empty} has no members")));
        }
        Ok(ClusterAssignment { level, clusters, assign })
    }

    pub fn identity(level: usize, n: usize) -> Self {
        ClusterAssignment {
            level,
            clusters: n,
            assign: (0..n).collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of clusters (matrix rows).
    pub fn rows(&self) -> usize {
        self.clusters
    }

    /// Number of assigned entities (matrix columns).
    pub fn cols(&self) -> usize {
        self.assign.len()
    }

    pub fn cluster_of(&self, col: usize) -> usize {
        self.assign[col]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.clusters];
        for &c in &self.assign {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each cluster, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.clusters];
        for (i, &c) in self.assign.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.cols()]; self.clusters];
        for (j, &c) in self.assign.iter().enumerate() {
            m[c][j] = 1.0;
        }
        m
    }

    /// A uniformly random assignment with the same cluster sizes.
    pub fn shuffled<R: Rng + ?Sized>(&self, rng: &mut R) -> ClusterAssignment {
        let mut assign = self.assign.clone();
        assign.shuffle(rng);
        ClusterAssignment {
            level: self.level,
            clusters: self.clusters,
            assign,
        }
    }

    /// `self` after `lower`: maps `lower`'s columns straight to `self`'s rows.
    pub fn compose(&self, lower: &ClusterAssignment) -> Result<ClusterAssignment> {
        if lower.rows() != self.cols() {
            return Err(SepError::shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows(),
                self.cols(),
                lower.rows(),
                lower.cols()
            )));
        }
        Ok(ClusterAssignment {
            level: self.level,
            clusters: self.clusters,
            assign: lower.assign.iter().map(|&c| self.assign[c]).collect(),
        })
    }
}

/// `S_1 .. S_k` for a leveled tree of height `k`. `S_i` maps the nodes at
/// depth `k - i + 1` to their parents at depth `k - i`; rows and columns
/// follow the breadth-first canonical order of each depth.
pub fn assignments_from_tree(tree: &CodingTree) -> Result<Vec<ClusterAssignment>> {
    if !tree.is_leveled() {
        return Err(SepError::structural(
            "leaves sit at different depths; fill the tree before pooling",
        ));
    }
    let levels = tree.levels();
    let k = tree.height();
    // index of each node within its depth
    let mut position: BTreeMap<NodeId, usize> = BTreeMap::new();
    for nodes in &levels {
        for (i, &v) in nodes.iter().enumerate() {
            position.insert(v, i);
        }
    }
    // leaves are ordered by graph id, not breadth-first order
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let fine = &levels[k - i + 1];
        let coarse = &levels[k - i];
        let mut assign = vec![0; fine.len()];
        for &v in fine {
            let col = if i == 1 { v.0 } else { position[&v] };
            assign[col] = position[&tree.parent(v).expect("nonroot")];
        }
        out.push(ClusterAssignment::new(i, coarse.len(), assign)?);
    }
    Ok(out)
}

/// How pooled feature rows combine cluster members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// `P' = S H`.
    #[default]
    Sum,
    /// Row-normalized `S`, giving cluster centroids.
    Mean,
}

impl FromStr for Aggregation {
    type Err = SepError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Aggregation::Sum),
            "mean" => Ok(Aggregation::Mean),
            other => Err(SepError::domain(format!("unknown aggregation {other:?}; expected sum or mean"))),
        }
    }
}

impl std::fmt::Display for Aggregation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Aggregation::Sum => "sum",
            Aggregation::Mean => "mean",
        })
    }
}

/// Square sparse matrix with entries sorted by `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    size: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    fn from_map(size: usize, map: BTreeMap<(usize, usize), f64>) -> Self {
        SparseMatrix {
            size,
            entries: map.into_iter().map(|((i, j), v)| (i, j, v)).collect(),
        }
    }

    /// Both triangles of the graph's weighted adjacency, zero diagonal.
    pub fn adjacency(graph: &Graph) -> Self {
        let mut map = BTreeMap::new();
        for e in graph.edges() {
            map.insert((e.u, e.v), e.w);
            map.insert((e.v, e.u), e.w);
        }
        SparseMatrix::from_map(graph.node_count(), map)
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut map = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != size {
                return Err(SepError::shape("dense matrix is not square"));
            }
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    map.insert((i, j), v);
                }
            }
        }
        Ok(SparseMatrix::from_map(size, map))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(i, j)))
            .map_or(0.0, |k| self.entries[k].2)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.size]; self.size];
        for &(i, j, v) in &self.entries {
            m[i][j] = v;
        }
        m
    }
}

/// Adjacency and features at one level of the hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolingLevel {
    pub adjacency: SparseMatrix,
    pub features: FeatureMatrix,
}

impl PoolingLevel {
    pub fn new(adjacency: SparseMatrix, features: FeatureMatrix) -> Result<Self> {
        if adjacency.size() != features.rows() {
            return Err(SepError::shape(format!(
                "adjacency is {0}x{0} but features have {1} rows",
                adjacency.size(),
                features.rows()
            )));
        }
        Ok(PoolingLevel { adjacency, features })
    }

    /// Graph adjacency with the given features (or zero-width features).
    pub fn from_graph(graph: &Graph, features: Option<&FeatureMatrix>) -> Result<Self> {
        let features = match features {
            Some(f) => {
                f.check_rows_for(graph)?;
                f.clone()
            }
            None => FeatureMatrix::zeros(graph.node_count(), 0),
        };
        PoolingLevel::new(SparseMatrix::adjacency(graph), features)
    }
}

/// `A' = S A S^T`, `P' = S H` with sum aggregation.
pub fn pool(level: &PoolingLevel, s: &ClusterAssignment) -> Result<PoolingLevel> {
    pool_with(level, s, Aggregation::Sum)
}

/// Pools with the chosen feature aggregation. The adjacency product is the
/// same for both modes, so its entry sum is always conserved.
pub fn pool_with(level: &PoolingLevel, s: &ClusterAssignment, aggregation: Aggregation) -> Result<PoolingLevel> {
    if s.cols() != level.adjacency.size() {
        return Err(SepError::shape(format!(
            "assignment has {} columns but the level has {} nodes",
            s.cols(),
            level.adjacency.size()
        )));
    }
    let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(i, j, v) in level.adjacency.entries() {
        *map.entry((s.cluster_of(i), s.cluster_of(j))).or_insert(0.0) += v;
    }
    let adjacency = SparseMatrix::from_map(s.rows(), map);
    let features = pool_features(&level.features, s, aggregation)?;
    PoolingLevel::new(adjacency, features)
}

pub fn pool_features(h: &FeatureMatrix, s: &ClusterAssignment, aggregation: Aggregation) -> Result<FeatureMatrix> {
    if s.cols() != h.rows() {
        return Err(SepError::shape(format!(
            "assignment has {} columns but features have {} rows",
            s.cols(),
            h.rows()
        )));
    }
    let mut out = FeatureMatrix::zeros(s.rows(), h.cols());
    for i in 0..h.rows() {
        let c = s.cluster_of(i);
        for (o, x) in out.row_mut(c).iter_mut().zip(h.row(i)) {
            *o += x;
        }
    }
    if aggregation == Aggregation::Mean {
        for (c, size) in s.cluster_sizes().into_iter().enumerate() {
            for o in out.row_mut(c) {
                *o /= size as f64;
            }
        }
    }
    Ok(out)
}

/// `A = S^T A' S`, `H = S^T P'`: every fine node receives its cluster's row.
pub fn unpool(level: &PoolingLevel, s: &ClusterAssignment) -> Result<PoolingLevel> {
    if s.rows() != level.adjacency.size() {
        return Err(SepError::shape(format!(
            "assignment has {} rows but the level has {} nodes",
            s.rows(),
            level.adjacency.size()
        )));
    }
    let members = s.members();
    let mut map = BTreeMap::new();
    for &(p, q, v) in level.adjacency.entries() {
        for &i in &members[p] {
            for &j in &members[q] {
                map.insert((i, j), v);
            }
        }
    }
    let adjacency = SparseMatrix::from_map(s.cols(), map);
    let features = unpool_features(&level.features, s)?;
    PoolingLevel::new(adjacency, features)
}

pub fn unpool_features(p: &FeatureMatrix, s: &ClusterAssignment) -> Result<FeatureMatrix> {
    if s.rows() != p.rows() {
        return Err(SepError::shape(format!(
            "assignment has {} rows but features have {} rows",
            s.rows(),
            p.rows()
        )));
    }
    let mut out = FeatureMatrix::zeros(s.cols(), p.cols());
    for i in 0..s.cols() {
        out.row_mut(i).copy_from_slice(p.row(s.cluster_of(i)));
    }
    Ok(out)
}

/// Pools features up through `assignments` in order, then unpools back down.
pub fn round_trip_features(
    features: &FeatureMatrix,
    assignments: &[ClusterAssignment],
    aggregation: Aggregation,
) -> Result<FeatureMatrix> {
    let mut h = features.clone();
    for s in assignments {
        h = pool_features(&h, s, aggregation)?;
    }
    for s in assignments.iter().rev() {
        h = unpool_features(&h, s)?;
    }
    Ok(h)
}

pub fn round_trip_mse(
    features: &FeatureMatrix,
    assignments: &[ClusterAssignment],
    aggregation: Aggregation,
) -> Result<f64> {
    features.mse(&round_trip_features(features, assignments, aggregation)?)
}

/// Reconstruction error of the learning-free hierarchy.
///
/// Builds a tree of height `k`, pools the features through the `k - 1`
/// levels below the root and unpools them back. The root level is skipped:
/// it always collapses everything into one cluster and carries no
/// structure.
pub fn reconstruct_metric(
    graph: &Graph,
    features: &FeatureMatrix,
    k: usize,
    aggregation: Aggregation,
) -> Result<f64> {
    features.check_rows_for(graph)?;
    let tree = build_coding_tree(graph, k)?;
    let s = assignments_from_tree(&tree)?;
    round_trip_mse(features, &s[..k - 1], aggregation)
}

/// Matrix Market coordinate text, 1-based, one `1` per column.
pub fn assignment_to_matrix_market(s: &ClusterAssignment) -> String {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix coordinate integer general\n");
    let _ = writeln!(out, "% cluster assignment level {}", s.level());
    let _ = writeln!(out, "{} {} {}", s.rows(), s.cols(), s.cols());
    for (j, &c) in s.assignment().iter().enumerate() {
        let _ = writeln!(out, "{} {} 1", c + 1, j + 1);
    }
    out
}

/// `level,cluster,node` rows for every assignment, 0-based.
pub fn assignments_to_csv(assignments: &[ClusterAssignment]) -> String {
    let mut out = String::from("level,cluster,node\n");
    for s in assignments {
        for (j, &c) in s.assignment().iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", s.level(), c, j);
        }
    }
    out
}

/// Upper triangle of a pooled adjacency as `i j w` lines, diagonal included
/// as `i i w`.
pub fn pooled_edge_list(adjacency: &SparseMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# nodes: {}", adjacency.size());
    for &(i, j, v) in adjacency.entries() {
        if i <= j {
            let _ = writeln!(out, "{i} {j} {v}");
        }
    }
    out
}
