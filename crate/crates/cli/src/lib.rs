//! File formats, commands and the streaming verifier behind `ols-embed`.

pub mod commands;
pub mod formats;
pub mod verify;

use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const GENERAL: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const NOT_PARTIAL_LATIN: u8 = 3;
    pub const NOT_ORTHOGONAL_PAIR: u8 = 4;
    pub const LATIN: u8 = 5;
    pub const ORTHOGONALITY: u8 = 6;
    pub const CONTAINMENT: u8 = 7;
}

/// A failure carrying the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Self::new(exit::GENERAL, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(exit::PARSE, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::general(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;
