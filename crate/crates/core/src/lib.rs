//! Fixed-height coding trees by greedy structural entropy minimization, and
//! the hard-assignment pooling algebra built on top of them.
//!
//! ```
//! use sepool::graph::make_ring;
//! use sepool::tree::build_coding_tree;
//! use sepool::entropy::structural_entropy;
//! use sepool::pooling::assignments_from_tree;
//!
//! let (graph, _coords) = make_ring(16).unwrap();
//! let tree = build_coding_tree(&graph, 3).unwrap();
//! assert_eq!(tree.height(), 3);
//! let h = structural_entropy(&graph, &tree).unwrap().total;
//! assert!(h > 0.0);
//! let levels = assignments_from_tree(&tree).unwrap();
//! assert_eq!(levels.len(), 3);
//! ```

pub mod bench;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod pooling;
pub mod tree;

pub use entropy::{delta_merge, delta_remove, structural_entropy, EntropyReport, LogBase};
pub use error::{Result, SepError};
pub use graph::{FeatureMatrix, Graph};
pub use pooling::{assignments_from_tree, pool, unpool, Aggregation, ClusterAssignment, PoolingLevel};
pub use tree::{brute_force_optimal, build_coding_tree, CodingTree, NodeId, NodeStats};
