//! Library side of the `frenet` command: recipes, CSV I/O, reports and the
//! four subcommands.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a check failed |
//! | 2 | invalid recipe, invalid parameters or angular function outside the admissible set |
//! | 3 | expression error (syntax, unknown identifier, evaluation domain) |
//! | 4 | unreadable, empty, non-uniform or unordered CSV |
//! | 5 | unknown export format |
//! | 6 | output file could not be written |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod csvio;
pub mod export;
pub mod recipe;
pub mod report;

use frenet_core::families::FamilyError;
use frenet_core::intrinsic::{DomainReport, IntrinsicError};
use frenet_core::numerics::NumericsError;
use frenet_core::ExprError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error("{0}")]
    Recipe(String),
    #[error("angular function outside the admissible set: {0}")]
    Domain(Box<DomainReport>),
    #[error("expression error: {0}")]
    Expr(String),
    #[error("bad CSV: {0}")]
    Csv(String),
    #[error("unknown export format {0:?} (expected obj or gnuplot)")]
    UnknownFormat(String),
    #[error("{0}")]
    Output(String),
    #[error("analysis failed: {0}")]
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) | CliError::Analysis(_) => 1,
            CliError::Recipe(_) | CliError::Domain(_) => 2,
            CliError::Expr(_) => 3,
            CliError::Csv(_) => 4,
            CliError::UnknownFormat(_) => 5,
            CliError::Output(_) => 6,
        }
    }

    pub(crate) fn analysis(e: impl std::fmt::Display) -> Self {
        CliError::Analysis(e.to_string())
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Expr(e.to_string())
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        CliError::Recipe(e.to_string())
    }
}

impl From<IntrinsicError> for CliError {
    fn from(e: IntrinsicError) -> Self {
        match e {
            IntrinsicError::Expr(e) => e.into(),
            IntrinsicError::Numerics(e) => e.into(),
            IntrinsicError::Domain(r) => CliError::Domain(r),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::InvalidParams(m) => CliError::Recipe(m),
            FamilyError::Expr(e) => e.into(),
            FamilyError::Numerics(e) => e.into(),
            FamilyError::Intrinsic(e) => e.into(),
        }
    }
}
