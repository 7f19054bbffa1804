//! Batch front end for `pouspec`: configuration parsing, the analysis
//! pipeline, and JSON/CSV/SVG report emission.

pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod svg;

pub use config::{parse_config, AnalysisConfig, OperatorConfig};
pub use emit::{emit_report, to_json, Format};
pub use error::{CliError, ConfigError};
pub use report::{run_analyze, run_many, run_oracle, run_verify, AnalysisReport};
pub use svg::emit_svg;
