//! Horoballs, cusped graphs and truncated cusped complexes.

pub mod complex;
pub mod graph;

pub use complex::{build_cusped_complex, cayley_complex, prism_cylinder, ray_complex, ComplexTruncation, CuspedComplex, Strip};
pub use graph::{build_cusped_graph, build_cusped_graph_on, build_horoball, CuspedGraph, DepthMode, DepthVertex, EdgeKind};
