//! Build-time scaling on a ladder of sparse random graphs.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Result, SepError};
use crate::graph::{random_graph, Graph};
use crate::tree::build_coding_tree;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    /// Fastest of the repeated builds.
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub average_degree: f64,
    pub height: usize,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln(seconds)` against `ln(m)`.
    pub slope: f64,
}

/// The `G(n, d / (n - 1))` graph used for ladder size `n`.
pub fn ladder_graph(n: usize, average_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(SepError::domain("ladder sizes must be at least 2"));
    }
    let p = (average_degree / (n - 1) as f64).min(1.0);
    random_graph(n, p, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ n as u64)
}

pub fn run_bench(sizes: &[usize], average_degree: f64, seed: u64, height: usize, repeats: usize) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let graph = ladder_graph(n, average_degree, seed)?;
        let mut best = f64::INFINITY;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let tree = build_coding_tree(&graph, height)?;
            best = best.min(start.elapsed().as_secs_f64());
            std::hint::black_box(tree);
        }
        rows.push(BenchRow {
            n,
            m: graph.edge_count(),
            seconds: best,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.m as f64).ln(), r.seconds.max(1e-9).ln()))
        .collect();
    Ok(BenchReport {
        average_degree,
        height,
        rows,
        slope: least_squares_slope(&points),
    })
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
