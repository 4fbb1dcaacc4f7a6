use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("no normal form available for {0}")]
    NoNormalForm(String),
    #[error("unsupported peripheral: {0}")]
    UnsupportedPeripheral(String),
    #[error("unsupported classifying-complex shape: {0}")]
    UnsupportedShape(String),
    #[error("resource limit exceeded: {what} ({count} > cap {cap})")]
    Resource { what: String, count: usize, cap: usize },
    #[error("graph is disconnected: {0}")]
    Disconnected(String),
    #[error("unknown vertex or coset: {0}")]
    Unknown(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("guard violation: requested radius {requested} but maximal safe radius is {safe}")]
    Guard { requested: u32, safe: u32 },
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("contraction stalled: replacement {replacement} for {pushed} is {distance} away from neighbour {neighbor}")]
    Contraction { pushed: String, replacement: String, neighbor: String, distance: u32 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
