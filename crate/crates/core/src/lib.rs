//! Chip-firing games on multi-digraphs with a global sink.
//!
//! Graphs are read in a small text format (see [`graph::parse_graph`]). Vertex
//! labels are 1-based; internally the non-sink vertices occupy positions
//! `0..n` in label order and every configuration or script is indexed by
//! those positions.

pub mod config;
pub mod criticality;
pub mod crosscheck;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod script;
pub mod superstable;

pub use config::{format_vector, parse_vector, stabilize, Configuration, Script, StabilizationResult};
pub use criticality::{critical_rep, enumerate_critical, is_critical, is_critical_min, is_critical_nonstability, Method};
pub use error::{Error, Result};
pub use graph::{parse_graph, reduced_laplacian, scc_levels, Digraph, ReducedLaplacian, SccDecomposition};
pub use script::{a_script, is_g_positive, is_g_strongly_positive, sigma_min, SigmaReport};
pub use superstable::{dual, enumerate_superstable, equivalence_classes, is_superstable, superstable_rep, superstabilize};
