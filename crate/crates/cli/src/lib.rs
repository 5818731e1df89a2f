//! Command-line front end for `polytame`: input parsing, job configuration,
//! pipeline orchestration and JSON reports.

pub mod config;
pub mod job;
pub mod parse;
pub mod report;

pub use config::{DeflationMode, InitSpec, InputSource, JobConfig, MapSpec};
pub use job::{run_job, run_polynomial, JobError};
pub use parse::{parse_polynomial, parse_values, ParseError};
pub use report::{JobReport, Status};
