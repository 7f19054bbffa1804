//! Collocation matrix `M[k][j] = a_k(e_j)` and its spectrum.
//!
//! The nonzero eigenvalues of the operator coincide with those of `M`, so
//! the spectral analysis runs entirely on this matrix.

pub mod classify;
pub mod eigen;
pub mod gershgorin;
pub mod matching;
pub mod matrix;
pub mod oracle;

pub use classify::{
    classify_spectrum, group_eigenvalues, Classification, Eigenvalue, SpectrumReport, CONTAINMENT_SLACK,
    DEFAULT_PERIPHERAL_TOL,
};
pub use eigen::eigenvalues;
pub use gershgorin::{gershgorin_disks, in_disk_union, GershgorinDisk};
pub use matching::multiset_distance;
pub use matrix::{
    build_collocation_matrix, check_row_stochastic, iterate_limit, matrix_power, CollocationMatrix,
    IterateOutcome, DEFAULT_STOCHASTIC_TOL,
};
pub use oracle::{char_poly_eigen_oracle, characteristic_polynomial, ORACLE_MAX_DIM};

use crate::error::Result;
use crate::operator::OperatorSpec;

/// Matrix, eigenvalues, disks and classification in one call.
pub fn analyze_operator(
    op: &OperatorSpec,
    tol_peripheral: f64,
) -> Result<(CollocationMatrix, SpectrumReport)> {
    let m = build_collocation_matrix(op)?;
    let eigs = eigenvalues(&m)?;
    let report = classify_spectrum(&eigs, &gershgorin_disks(&m), tol_peripheral);
    Ok((m, report))
}
