//! Pipeline behind the `commchar` command: load a graph, obtain communities,
//! characterize them and write CSV/JSON reports plus a manifest.

pub mod config;
pub mod error;
pub mod pipeline;

pub use config::{OutputFormat, RunConfig, Stage};
pub use error::CliError;
pub use pipeline::{import_gml, load_graph, run, WrittenFile};
