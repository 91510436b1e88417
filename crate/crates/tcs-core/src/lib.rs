//! Multi-objective test case selection.
//!
//! Given per-test execution costs and statement/branch coverage, this library
//! searches for subsets of a test suite that trade off cost against coverage.
//! Two evolutionary algorithms are provided: a classic elitist non-dominated
//! sorting GA with scattered crossover ([`engine::run_nsga2`]), and a variant
//! that learns a linkage model of the population each other generation and
//! recombines via that model instead ([`linkage::run_l2nsga`]).
//!
//! Supporting modules supply the rest of an experimental pipeline:
//! [`instance`] loads, compacts, and synthesizes coverage data,
//! [`indicators`] computes front-quality metrics (reference fronts, inverted
//! generational distance, hypervolume, cost-effectiveness), and [`stats`]
//! compares metric samples across runs (rank-sum test, effect size).

pub mod bits;
pub mod engine;
pub mod indicators;
pub mod instance;
pub mod linkage;
pub mod objectives;
mod sampling;
pub mod stats;

/// Unified error type for fallible library operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: std::path::PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("indicator error: {0}")]
    Indicator(String),

    #[error("invalid sample: {0}")]
    Sample(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<std::path::PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(
        path: impl Into<std::path::PathBuf>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
