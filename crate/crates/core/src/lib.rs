//! Cusped spaces over relatively hyperbolic group pairs and their compactly
//! supported integer cohomology.

// vertex ids index several parallel arrays at once
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod graph;
pub mod compact;
pub mod cusped;
pub mod experiments;
pub mod group;
pub mod homology;
pub mod metric;
pub mod rips;

pub use error::{Error, Result};
pub use graph::Graph;
pub use group::{GroupSpec, PeripheralSpec, Word};
pub use homology::{AbelianGroup, ChainComplex, InducedMap, SimplicialComplex};
