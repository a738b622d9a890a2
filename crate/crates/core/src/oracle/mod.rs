//! Finite-difference tensor calculus on coordinate metrics.
//!
//! Nothing here calls the closed-form curvature routines; it only evaluates
//! metric components and differentiates them numerically.

pub mod dd;
mod metric;
mod tensor;

pub use metric::{assemble_metric, BaseChart, MetricGrid, WarpSource, DEFAULT_STEP};
pub use tensor::{
    convergence_ladder, fd_christoffel, fd_scalar_curvature, oracle_report_csv, relative_error,
    ChristoffelTable, ConvergenceLadder, CurvatureTensorSample, OracleRow,
};
