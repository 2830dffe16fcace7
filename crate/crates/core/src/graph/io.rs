//! Text formats: whitespace-separated edge lists and per-node feature CSV.
//!
//! Edge list: one `u v [w]` triple per line, `#` starts a comment line, blank
//! lines are skipped. A comment of the exact form `# nodes: N` raises the
//! node count to at least `N` so trailing isolated nodes survive a round trip.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{FeatureMatrix, Graph};
use crate::error::{Result, SepError};

const NODES_DIRECTIVE: &str = "# nodes:";

/// Reads an edge-list file. See [`parse_edge_list`].
pub fn load_edge_list(path: impl AsRef<Path>, weighted: bool) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SepError::io(path, e))?;
    parse_edge_list(&text, weighted)
}

/// Parses edge-list text.
///
/// With `weighted == false` a third column is ignored and every edge gets
/// weight 1. With `weighted == true` the third column is optional and
/// defaults to 1. `node_count` is the largest id plus one.
pub fn parse_edge_list(text: &str, weighted: bool) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut node_count = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(NODES_DIRECTIVE) {
            let n: usize = rest.trim().parse().map_err(|_| SepError::Parse {
                line: line_no,
                message: format!("bad node-count directive {line:?}"),
            })?;
            node_count = node_count.max(n);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(SepError::Parse {
                line: line_no,
                message: format!("expected `u v [w]`, got {line:?}"),
            });
        }
        let id = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| SepError::Parse {
                line: line_no,
                message: format!("node id {s:?} is not a nonnegative integer"),
            })
        };
        let u = id(fields[0])?;
        let v = id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) if weighted => {
                let w: f64 = s.parse().map_err(|_| SepError::Parse {
                    line: line_no,
                    message: format!("weight {s:?} is not a number"),
                })?;
                if !w.is_finite() || w < 0.0 {
                    return Err(SepError::domain(format!(
                        "line {line_no}: weight {w} must be finite and nonnegative"
                    )));
                }
                w
            }
            _ => 1.0,
        };
        node_count = node_count.max(u.max(v) + 1);
        edges.push((u, v, w));
    }
    Graph::from_edges(node_count, edges)
}

/// Serializes `graph` as weighted edge-list text that [`parse_edge_list`]
/// reads back (with `weighted = true`) into an identical graph.
pub fn edge_list_string(graph: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{NODES_DIRECTIVE} {}", graph.node_count());
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}

pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, edge_list_string(graph)).map_err(|e| SepError::io(path, e))
}

pub fn load_features_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SepError::io(path, e))?;
    parse_features_csv(&text)
}

/// Parses comma-separated feature rows. A first line with any non-numeric
/// field is taken as a header and skipped.
pub fn parse_features_csv(text: &str) -> Result<FeatureMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if first => {}
            Err(_) => {
                return Err(SepError::Parse {
                    line: idx + 1,
                    message: format!("non-numeric feature row {line:?}"),
                })
            }
        }
        first = false;
    }
    FeatureMatrix::from_rows(&rows)
}

/// Header `f0,f1,...` followed by one row per node.
pub fn features_csv_string(features: &FeatureMatrix) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..features.cols()).map(|j| format!("f{j}")).collect();
    let _ = writeln!(out, "{}", header.join(","));
    for i in 0..features.rows() {
        let row: Vec<String> = features.row(i).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_features_csv(features: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, features_csv_string(features)).map_err(|e| SepError::io(path, e))
}
