//! Residual matrices, Tracy-Widom calibration and the goodness-of-fit tests.

mod packed;
mod residual;
mod tw;

pub use residual::{
    estimate_block_matrix, fit_blocks, oracle_residual_matrix, residual_matrix, BlockFit,
    ResidualMatrix, DEFAULT_CLAMP_EPS,
};
pub use test::{
    bootstrap_corrected_test, bootstrap_statistic, decide, edge_scale, evaluate, gof_test, plain_statistic,
    resolve_membership, run_test, threshold_for, BootstrapDiagnostics, Evaluation, GofTestResult,
    TestMode, TestOptions, PIPELINE_EIGEN_TOL,
};
pub use tw::{
    tw1_cdf, tw1_moments, tw1_quantile, Tw1Distribution, TW1_TABLE_SHA256, TW1_TABLE_VERSION,
};
