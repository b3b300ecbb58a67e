//! Front end of the `lorcomp` command: configuration files, report
//! rendering and the reproducible scenarios.

pub mod config;
pub mod report;
pub mod reproduce;

use std::path::PathBuf;

use thiserror::Error;

use lorcomp::comparison::ComparisonError;
use lorcomp::generators::GeneratorError;
use lorcomp::verifier::VerifierError;
use lorcomp::{ModelError, SpaceError};

/// Exit code for a run without violations.
pub const EXIT_PASS: u8 = 0;
/// Exit code when a violation was found.
pub const EXIT_VIOLATION: u8 = 1;
/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario '{0}' (expected cylinder, gluing or bonnet)")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
