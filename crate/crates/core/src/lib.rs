//! Positive finite-rank operators `Tf = sum_k a_k(f) e_k` whose basis
//! functions form a partition of unity.
//!
//! The crate builds such operators from catalog bases (Bernstein,
//! B-spline, hat functions) and positive normalised functionals (point
//! evaluations, interval averages, weighted quadratures), checks their
//! structural properties numerically, and reduces the spectral problem to
//! the row-stochastic collocation matrix `M[k][j] = a_k(e_j)`.
//!
//! ```
//! use pouspec::{catalog, spectrum};
//!
//! let op = catalog::kantorovich(1).unwrap();
//! let (m, report) = spectrum::analyze_operator(&op, 1e-8).unwrap();
//! assert!((m.get(0, 0) - 0.75).abs() < 1e-12);
//! assert_eq!(report.classification, spectrum::Classification::Conforms);
//! ```

pub mod basis;
pub mod catalog;
pub mod check;
pub mod error;
pub mod function;
pub mod functional;
pub mod operator;
pub mod quadrature;
pub mod sampling;
pub mod spectrum;

pub use basis::{check_nonnegativity, check_partition_of_unity, BasisKind, BasisSystem};
pub use check::CheckReport;
pub use error::{Error, Result};
pub use function::{ClosedForm, FunctionHandle, Interval};
pub use functional::{
    apply_functional, check_functional_normalization, make_kantorovich_functionals, Functional,
};
pub use num_complex::Complex64;
pub use operator::{
    apply_adjoint, apply_operator, estimate_operator_norm, kernel_witness, operator_power_apply,
    verify_constant_reproduction, verify_positivity, OperatorSpec,
};
pub use quadrature::{integrate_gauss_legendre, QuadratureRule};
pub use spectrum::{Classification, CollocationMatrix, GershgorinDisk, SpectrumReport};
