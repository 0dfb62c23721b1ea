//! Command-line front end for `casimir-core`: argument validation, optical
//! table ingestion, sweeps and self-describing CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod table;

pub use config::{parse_and_validate, Command, Grid, ModelKind, PrescriptionKind, RunConfig};
pub use error::CliError;
pub use run::{render, run, Rendered};
pub use table::ingest_optical_table;
