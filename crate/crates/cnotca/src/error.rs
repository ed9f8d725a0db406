use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
///
/// Variants split into two families: bad inputs (lattice sizes, ranges,
/// caps) and numeric-contract violations (phase tracking, Hermiticity,
/// eigenvalue bounds). The CLI maps the former to exit code 1 and the
/// latter to exit code 2.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("site count must be an even number >= 2, got {0}")]
    OddSiteCount(usize),

    #[error("periodic boundary conditions need at least 4 sites, got {0}")]
    PeriodicTooSmall(usize),

    #[error("operation requires open boundary conditions")]
    PeriodicUnsupported,

    #[error("matrix is singular mod 2")]
    SingularMatrix,

    #[error("multiplicative order exceeds cap {0}")]
    OrderNotFound(u64),

    #[error("orbit did not close within {0} steps")]
    OrbitCapExceeded(u64),

    #[error("state is not normalized: |a0|^2 + |a1|^2 = {0}")]
    NotNormalized(f64),

    #[error("phase-tracking contract violated: expectation has imaginary part {0:e}")]
    PhaseContract(f64),

    #[error("density matrix is not Hermitian within tolerance (deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace deviates from 1 by {0:e}")]
    BadTrace(f64),

    #[error("eigenvalue {0:e} outside [-1e-9, 1+1e-9]")]
    EigenvalueRange(f64),

    #[error("Jacobi eigensolver failed to converge")]
    NoConvergence,

    #[error("dense oracle supports at most {cap} qubits, got {n}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("fit window contains no usable points")]
    EmptyFitWindow,
}

pub type Result<T> = std::result::Result<T, Error>;
