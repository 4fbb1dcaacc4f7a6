//! Compactly supported cohomology through exhaustions, and the probes built on it.

pub mod les;
pub mod pro;
pub mod probes;
pub mod regularity;

pub use les::{les_check, LesReport, LesSlot};
pub use pro::{
    cylinder_vanishing_test, hc_pro_system, pro_classify, Classification, ExhaustionSchedule, ProSystem, ProVerdict,
    DEFAULT_WINDOW,
};
pub use probes::{
    boundary_dim_estimate, count_ends, ends_verdict, local_homology_probe, DimEstimate, EndsVerdict, LocalHomologyReport,
};
pub use regularity::{regularity_probe, ProbeMode, RegularityReport};
