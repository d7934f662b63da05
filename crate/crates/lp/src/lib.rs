//! Sparse linear programming for the dispatch models.
//!
//! * [`LinearProgram`] / [`LpBuilder`]: named, column-major LP container.
//! * [`solve`]: bounded-variable revised simplex with sparse LU factors.
//! * [`check`]: residual and certificate audits independent of the solver.
//! * [`mps`]: fixed-field MPS export/import for cross-checking with other solvers.

use std::path::PathBuf;

pub mod check;
pub mod lu;
pub mod mps;
pub mod program;
pub mod scaling;
pub mod simplex;

pub use check::{check_solution, ResidualReport};
pub use program::{ColId, CscMatrix, LinearProgram, LpBuilder, RowId, RowSense};
pub use simplex::{solve, Certificate, LpSolution, SolverOptions, Status};

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("invalid bounds for {name}: [{lower}, {upper}]")]
    InvalidBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite {what}")]
    NonFinite { what: String },
    #[error("unknown column index {0}")]
    UnknownColumn(usize),
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("too many rows or columns for 8-character MPS names")]
    NameSpace,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("MPS line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
