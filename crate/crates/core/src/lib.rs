//! Exact solver for maximum-weight sparse induced subgraph problems on
//! P6-free graphs, driven by carver families and a threshold-automaton
//! dynamic program.
pub mod automata;
pub mod carvers;
pub mod chordal;
pub mod dp;
pub mod cli;
pub mod error;
pub mod forest;
pub mod graph;
pub mod harness;
pub mod separators;
pub mod vset;
pub use error::{Error, Result};
pub use graph::{Graph, WeightMap};
pub use vset::{vset, VertexSet, MAX_VERTICES};
