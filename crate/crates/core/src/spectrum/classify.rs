//! Classification of a computed spectrum against the peripheral-spectrum
//! statement: every eigenvalue lies in the closed unit disk and the only
//! eigenvalue on the unit circle is 1.

use num_complex::Complex64;
use serde::Serialize;

use super::gershgorin::{in_disk_union, GershgorinDisk};

/// Default tolerance for "on the unit circle" and "equal to 1".
pub const DEFAULT_PERIPHERAL_TOL: f64 = 1e-8;
/// Slack for the Gershgorin containment check.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Conforms,
    ViolatesTheorem,
    /// Spectrum is consistent, but some diagonal entry is (numerically)
    /// zero, so the disk argument alone does not exclude other points of
    /// the unit circle.
    InconclusiveZeroDiagonal,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Conforms => "conforms",
            Classification::ViolatesTheorem => "violates-theorem",
            Classification::InconclusiveZeroDiagonal => "inconclusive-zero-diagonal",
        }
    }
}

/// An eigenvalue cluster with its algebraic multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Greedy clustering of eigenvalues closer than `tol` to a cluster's first
/// member.
pub fn group_eigenvalues(values: &[Complex64], tol: f64) -> Vec<Eigenvalue> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &z in values {
        match groups.iter_mut().find(|(c, _)| (c - z).norm() <= tol) {
            Some(g) => g.1 += 1,
            None => groups.push((z, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(z, m)| Eigenvalue {
            re: z.re,
            im: z.im,
            multiplicity: m,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub disks: Vec<GershgorinDisk>,
    /// Eigenvalues with `|lambda| >= 1 - tol`.
    pub peripheral: Vec<Complex64>,
    /// Per eigenvalue: inside the union of disks within [`CONTAINMENT_SLACK`].
    pub in_disk_union: Vec<bool>,
    pub zero_diagonal: bool,
    pub classification: Classification,
    pub diagnostics: Vec<String>,
}

pub fn classify_spectrum(
    eigs: &[Complex64],
    disks: &[GershgorinDisk],
    tol_peripheral: f64,
) -> SpectrumReport {
    let mut diagnostics = Vec::new();
    let tol = tol_peripheral;

    let outside: Vec<_> = eigs.iter().filter(|z| z.norm() > 1.0 + tol).collect();
    for z in &outside {
        diagnostics.push(format!("eigenvalue {z} has modulus {} > 1", z.norm()));
    }
    let peripheral: Vec<Complex64> = eigs.iter().copied().filter(|z| z.norm() >= 1.0 - tol).collect();
    let foreign: Vec<_> = peripheral.iter().filter(|z| (*z - 1.0).norm() > tol).collect();
    for z in &foreign {
        diagnostics.push(format!("peripheral eigenvalue {z} differs from 1"));
    }
    if !peripheral.iter().any(|z| (z - 1.0).norm() <= tol) {
        diagnostics.push("eigenvalue 1 not found among peripheral eigenvalues".into());
    }

    let in_union: Vec<bool> = eigs
        .iter()
        .map(|&z| in_disk_union(z, disks, CONTAINMENT_SLACK))
        .collect();
    for (z, ok) in eigs.iter().zip(&in_union) {
        if !ok {
            diagnostics.push(format!(
                "eigenvalue {z} lies outside the union of Gershgorin disks"
            ));
        }
    }

    let zero_rows: Vec<usize> = disks
        .iter()
        .enumerate()
        .filter(|(_, d)| d.center <= tol)
        .map(|(k, _)| k)
        .collect();
    let zero_diagonal = !zero_rows.is_empty();
    if zero_diagonal {
        diagnostics.push(format!(
            "zero-diagonal: rows {zero_rows:?} have diagonal entry <= {tol:e}; their disks reach the unit circle away from 1"
        ));
    }

    let classification = if !outside.is_empty() || !foreign.is_empty() {
        Classification::ViolatesTheorem
    } else if zero_diagonal {
        Classification::InconclusiveZeroDiagonal
    } else {
        Classification::Conforms
    };

    SpectrumReport {
        eigenvalues: eigs.to_vec(),
        disks: disks.to_vec(),
        peripheral,
        in_disk_union: in_union,
        zero_diagonal,
        classification,
        diagnostics,
    }
}
