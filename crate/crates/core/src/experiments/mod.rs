//! Scenario files, the known-answer registry and the runners behind the CLI.

pub mod registry;
pub mod run;
pub mod scenario;

pub use registry::{builtin, list_examples, registry, resolve, BUILTIN};
pub use run::{
    export_space, local_probe, local_record, regularity_suite, run_delta, run_scenario, Check, ExportFormat, RunOptions, RunReport,
    DEFAULT_DELTA_SAMPLES, DEFAULT_MAX_SIMPLICES,
};
pub use scenario::{BuiltSpace, KnownAnswer, Scenario, SpaceKind};
