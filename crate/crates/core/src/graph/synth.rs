use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FeatureMatrix, Graph};
use crate::error::{Result, SepError};

/// Cycle `C_n` with each node placed on the unit circle.
pub fn make_ring(n: usize) -> Result<(Graph, FeatureMatrix)> {
    if n < 3 {
        return Err(SepError::domain(format!("ring needs at least 3 nodes, got {n}")));
    }
    let graph = Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))?;
    let mut features = FeatureMatrix::zeros(n, 2);
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        features.row_mut(i).copy_from_slice(&[theta.cos(), theta.sin()]);
    }
    Ok((graph, features))
}

/// `width x height` 4-neighbour lattice. Node `row * width + col` carries
/// features `(col, row)`.
pub fn make_grid(width: usize, height: usize) -> Result<(Graph, FeatureMatrix)> {
    if width < 2 || height < 2 {
        return Err(SepError::domain(format!(
            "grid dimensions must both be at least 2, got {width}x{height}"
        )));
    }
    let id = |col: usize, row: usize| row * width + col;
    let mut edges = Vec::with_capacity(2 * width * height);
    for row in 0..height {
        for col in 0..width {
            if col + 1 < width {
                edges.push((id(col, row), id(col + 1, row), 1.0));
            }
            if row + 1 < height {
                edges.push((id(col, row), id(col, row + 1), 1.0));
            }
        }
    }
    let n = width * height;
    let graph = Graph::from_edges(n, edges)?;
    let mut features = FeatureMatrix::zeros(n, 2);
    for row in 0..height {
        for col in 0..width {
            features
                .row_mut(id(col, row))
                .copy_from_slice(&[col as f64, row as f64]);
        }
    }
    Ok((graph, features))
}

/// Erdős–Rényi `G(n, p)`, deterministic in `seed`.
///
/// Uses geometric skipping over the lower triangle so the cost is
/// proportional to the number of generated edges rather than `n^2`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(SepError::domain("random graph needs at least one node"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(SepError::domain(format!("edge probability {p} outside (0, 1]")));
    }
    if p == 1.0 {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)));
        return Graph::from_edges(n, edges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize, 1.0));
        }
    }
    Graph::from_edges(n, edges)
}
