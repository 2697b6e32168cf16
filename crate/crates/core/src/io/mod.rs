//! Exchange formats: series and basis JSON, run configs, character
//! descriptions and CSV tables. Numbers are exact strings throughout.

mod basis;
mod character;
mod config;
mod series_json;
mod tables;

pub use basis::{check_closure, ingest_basis, Basis, BasisFile, BasisHeader, BasisValidation, ClosureCheck, SeriesPayload};
pub use character::parse_character;
pub use config::{LoadedRun, MultiplierSpec, RunConfig};
pub use series_json::{context_for, CoeffEntry, SeriesJson};
pub use tables::{emit_tables, report_tables, small_generator, EigenRow, FrequencyRow, ReportTables};
