//! The analysis pipeline and its report.

use std::time::Instant;

use pouspec::spectrum::{
    self, build_collocation_matrix, char_poly_eigen_oracle, characteristic_polynomial, check_row_stochastic,
    classify_spectrum, gershgorin_disks, group_eigenvalues, iterate_limit, multiset_distance, Eigenvalue,
    IterateOutcome,
};
use pouspec::Complex64;
use pouspec::{
    apply_operator, estimate_operator_norm, kernel_witness, verify_constant_reproduction, verify_positivity,
    CheckReport, Classification, CollocationMatrix, Error, Functional, GershgorinDisk, OperatorSpec,
};
use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::CliError;

pub const POSITIVITY_TRIALS: usize = 100;
pub const NORM_TRIALS: usize = 200;
/// How far below 1 the norm estimate may fall.
pub const NORM_LOWER_SLACK: f64 = 1e-12;
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-10;
pub const KERNEL_MIN_SUP: f64 = 0.5;
pub const ORACLE_TOL: f64 = 1e-7;
/// Eigenvalues closer than this count as one root in `max_multiplicity`.
pub const ORACLE_CLUSTER_TOL: f64 = 1e-6;

const DUAL_NORM_NOTE: &str = "dual norm of integral functionals not independently verified; \
                              only a(1) = 1 and positivity are checked";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorSummary {
    pub name: String,
    pub rank: usize,
    pub domain: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub passed: bool,
    pub lower: f64,
    pub upper: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelResidual {
    pub constructible: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Checks {
    pub partition_of_unity: Option<CheckReport>,
    pub nonnegativity: Option<CheckReport>,
    pub functional_normalization: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional_dual_norm: Option<String>,
    pub positivity: Option<CheckReport>,
    pub constant_reproduction: Option<CheckReport>,
    pub norm_estimate: Option<NormEstimate>,
    pub kernel_residual: Option<KernelResidual>,
}

impl Checks {
    pub fn all_passed(&self) -> bool {
        let reports = [
            &self.partition_of_unity,
            &self.nonnegativity,
            &self.functional_normalization,
            &self.positivity,
            &self.constant_reproduction,
        ];
        reports.iter().all(|r| r.as_ref().is_some_and(|r| r.passed))
            && self.norm_estimate.as_ref().is_some_and(|n| n.passed)
            && self
                .kernel_residual
                .as_ref()
                .is_none_or(|k| k.passed || !k.constructible)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixSection {
    pub entries: Vec<Vec<f64>>,
    pub row_sum_deviations: Vec<f64>,
    pub row_sum_max_dev: f64,
    pub diag_min: f64,
    pub row_stochastic: CheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueEntry {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub in_disk_union: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSection {
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub distinct: Vec<Eigenvalue>,
    pub disks: Vec<GershgorinDisk>,
    pub peripheral: Vec<[f64; 2]>,
    pub zero_diagonal: bool,
    pub classification: Classification,
    pub diagnostics: Vec<String>,
}

impl SpectrumSection {
    pub fn values(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .map(|e| Complex64::new(e.re, e.im))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterateSection {
    pub converged: bool,
    pub rate: Option<f64>,
    pub m_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

/// Wall-clock milliseconds per stage. Not covered by determinism.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub checks_ms: f64,
    pub matrix_ms: f64,
    pub spectrum_ms: f64,
    pub iterates_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub config: AnalysisConfig,
    pub operator: Option<OperatorSummary>,
    pub checks: Checks,
    pub matrix: Option<MatrixSection>,
    pub spectrum: Option<SpectrumSection>,
    pub iterates: Option<IterateSection>,
    /// Errors captured from pipeline stages.
    pub diagnostics: Vec<String>,
    pub timings: Timings,
}

impl AnalysisReport {
    fn empty(config: &AnalysisConfig) -> Self {
        Self {
            config: config.clone(),
            operator: None,
            checks: Checks::default(),
            matrix: None,
            spectrum: None,
            iterates: None,
            diagnostics: Vec::new(),
            timings: Timings::default(),
        }
    }

    pub fn classification(&self) -> Option<Classification> {
        self.spectrum.as_ref().map(|s| s.classification)
    }

    /// Every stage ran, every check passed and, when the spectrum was
    /// computed, it conforms.
    pub fn passed(&self) -> bool {
        self.diagnostics.is_empty()
            && self.operator.is_some()
            && self.checks.all_passed()
            && self.matrix.as_ref().is_none_or(|m| m.row_stochastic.passed)
            && self
                .spectrum
                .as_ref()
                .is_none_or(|s| s.classification == Classification::Conforms)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn run_checks(op: &OperatorSpec, config: &AnalysisConfig, report: &mut AnalysisReport) {
    let tol = config.tolerances;
    let grid = op.grid(config.grid_points);
    let checks = &mut report.checks;
    let diagnostics = &mut report.diagnostics;
    let mut capture = |stage: &str, e: Error| diagnostics.push(format!("{stage}: {e}"));

    match op.validate(&grid, tol.pou) {
        Ok(mut reports) => {
            checks.functional_normalization = reports.pop();
            checks.nonnegativity = reports.pop();
            checks.partition_of_unity = reports.pop();
        }
        Err(e) => capture("validate", e),
    }
    if op
        .functionals()
        .iter()
        .any(|a| matches!(a, Functional::IntervalAverage { .. }))
    {
        checks.functional_dual_norm = Some(DUAL_NORM_NOTE.into());
    }
    match verify_positivity(op, POSITIVITY_TRIALS, tol.pou, config.seed) {
        Ok(r) => checks.positivity = Some(r),
        Err(e) => capture("positivity", e),
    }
    match verify_constant_reproduction(op, &grid, tol.pou) {
        Ok(r) => checks.constant_reproduction = Some(r),
        Err(e) => capture("constant_reproduction", e),
    }
    match estimate_operator_norm(op, NORM_TRIALS, config.seed) {
        Ok(value) => {
            let (lower, upper) = (1.0 - NORM_LOWER_SLACK, 1.0 + tol.norm);
            checks.norm_estimate = Some(NormEstimate {
                value,
                passed: (lower..=upper).contains(&value),
                lower,
                upper,
                trials: NORM_TRIALS,
            });
        }
        Err(e) => capture("norm_estimate", e),
    }
    checks.kernel_residual = Some(kernel_residual(op, &grid));
}

fn kernel_residual(op: &OperatorSpec, grid: &[f64]) -> KernelResidual {
    let measured = kernel_witness(op).and_then(|w| {
        let sup = w.grid_sup(grid)?;
        let residual = apply_operator(op, &w)?.grid_sup(grid)?;
        Ok((sup, residual))
    });
    match measured {
        Ok((sup, residual)) => KernelResidual {
            constructible: true,
            passed: sup >= KERNEL_MIN_SUP && residual <= KERNEL_RESIDUAL_TOL,
            witness_sup: Some(sup),
            residual: Some(residual),
            tolerance: KERNEL_RESIDUAL_TOL,
            detail: None,
        },
        Err(e) => KernelResidual {
            constructible: !matches!(e, Error::NotConstructible(_)),
            passed: false,
            witness_sup: None,
            residual: None,
            tolerance: KERNEL_RESIDUAL_TOL,
            detail: Some(e.to_string()),
        },
    }
}

fn matrix_section(m: &CollocationMatrix, tol: f64) -> MatrixSection {
    MatrixSection {
        entries: m.rows(),
        row_sum_deviations: m.row_sums().into_iter().map(|s| s - 1.0).collect(),
        row_sum_max_dev: m.row_sum_max_deviation(),
        diag_min: m.diag_min(),
        row_stochastic: check_row_stochastic(m, tol),
    }
}

fn spectrum_section(m: &CollocationMatrix, tol: f64) -> pouspec::Result<SpectrumSection> {
    let eigs = spectrum::eigenvalues(m)?;
    let r = classify_spectrum(&eigs, &gershgorin_disks(m), tol);
    Ok(SpectrumSection {
        eigenvalues: eigs
            .iter()
            .zip(&r.in_disk_union)
            .map(|(z, &inside)| EigenvalueEntry {
                re: z.re,
                im: z.im,
                modulus: z.norm(),
                in_disk_union: inside,
            })
            .collect(),
        distinct: group_eigenvalues(&eigs, tol),
        disks: r.disks,
        peripheral: r.peripheral.iter().map(|z| [z.re, z.im]).collect(),
        zero_diagonal: r.zero_diagonal,
        classification: r.classification,
        diagnostics: r.diagnostics,
    })
}

fn iterate_section(m: &CollocationMatrix, config: &AnalysisConfig) -> pouspec::Result<IterateSection> {
    Ok(
        match iterate_limit(m, config.iterate.tol, config.iterate.m_max)? {
            IterateOutcome::Converged { limit, m, rate } => IterateSection {
                converged: true,
                rate,
                m_used: m,
                limit: Some(limit.rows()),
                period: None,
                obstruction: None,
            },
            IterateOutcome::NoConvergence {
                m_reached,
                period,
                obstruction,
            } => IterateSection {
                converged: false,
                rate: None,
                m_used: m_reached,
                limit: None,
                period,
                obstruction: Some(obstruction),
            },
        },
    )
}

fn run_pipeline(config: &AnalysisConfig, full: bool) -> AnalysisReport {
    let total = Instant::now();
    let mut report = AnalysisReport::empty(config);

    let t = Instant::now();
    let op = match config.operator.build() {
        Ok(op) => op,
        Err(e) => {
            report.diagnostics.push(format!("build: {e}"));
            report.timings.total_ms = ms(total);
            return report;
        }
    };
    report.operator = Some(OperatorSummary {
        name: op.name().to_string(),
        rank: op.rank(),
        domain: [op.domain().lo(), op.domain().hi()],
    });
    report.timings.build_ms = ms(t);

    let t = Instant::now();
    run_checks(&op, config, &mut report);
    report.timings.checks_ms = ms(t);

    if full {
        let t = Instant::now();
        match build_collocation_matrix(&op) {
            Ok(m) => {
                report.matrix = Some(matrix_section(&m, config.tolerances.stochastic));
                report.timings.matrix_ms = ms(t);

                let t = Instant::now();
                match spectrum_section(&m, config.tolerances.peripheral) {
                    Ok(s) => report.spectrum = Some(s),
                    Err(e) => report.diagnostics.push(format!("spectrum: {e}")),
                }
                report.timings.spectrum_ms = ms(t);

                let t = Instant::now();
                match iterate_section(&m, config) {
                    Ok(s) => report.iterates = Some(s),
                    Err(e) => report.diagnostics.push(format!("iterates: {e}")),
                }
                report.timings.iterates_ms = ms(t);
            }
            Err(e) => report.diagnostics.push(format!("matrix: {e}")),
        }
    }

    report.timings.total_ms = ms(total);
    report
}

/// Full pipeline: checks, collocation matrix, spectrum, iterates. Module
/// errors are recorded in `diagnostics` instead of aborting.
pub fn run_analyze(config: &AnalysisConfig) -> AnalysisReport {
    run_pipeline(config, true)
}

/// Structural and lemma checks only.
pub fn run_verify(config: &AnalysisConfig) -> AnalysisReport {
    run_pipeline(config, false)
}

/// Independent analyses on scoped threads, returned in input order.
pub fn run_many(configs: &[AnalysisConfig]) -> Vec<AnalysisReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || run_analyze(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub config: AnalysisConfig,
    pub dim: usize,
    /// Low order first, leading coefficient 1.
    pub characteristic_polynomial: Vec<f64>,
    pub qr: Vec<[f64; 2]>,
    pub oracle: Vec<[f64; 2]>,
    /// Largest pair distance under optimal matching.
    pub distance: f64,
    /// Largest multiplicity among the QR eigenvalues.
    pub max_multiplicity: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Cross-checks the QR eigenvalues of the collocation matrix against the
/// characteristic-polynomial roots. Only for rank at most 5.
pub fn run_oracle(config: &AnalysisConfig) -> Result<OracleReport, CliError> {
    let to_pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
    let op = config
        .operator
        .build()
        .map_err(|e| CliError::Unsupported(e.to_string()))?;
    let m = build_collocation_matrix(&op).map_err(|e| CliError::Unsupported(e.to_string()))?;
    let oracle = char_poly_eigen_oracle(&m).map_err(|e| CliError::Unsupported(e.to_string()))?;
    let qr = spectrum::eigenvalues(&m).map_err(|e| CliError::Unsupported(e.to_string()))?;
    let distance = multiset_distance(&qr, &oracle).unwrap_or(f64::INFINITY);
    let max_multiplicity = group_eigenvalues(&qr, ORACLE_CLUSTER_TOL)
        .iter()
        .map(|g| g.multiplicity)
        .max()
        .unwrap_or(1);
    Ok(OracleReport {
        config: config.clone(),
        dim: m.dim(),
        characteristic_polynomial: characteristic_polynomial(&m),
        qr: to_pairs(&qr),
        oracle: to_pairs(&oracle),
        distance,
        max_multiplicity,
        tolerance: ORACLE_TOL,
        passed: distance <= ORACLE_TOL,
    })
}
