//! Artifact writers.

use std::fmt::Write as _;

use serde::Serialize;
use spectral_forge::verify::AuditReport;
use spectral_forge::{DenseMatrix, Spectrum};

use crate::args::Format;
use crate::CliError;

pub struct Artifact {
    pub command: &'static str,
    pub matrix: Option<DenseMatrix>,
    pub small: Option<DenseMatrix>,
    pub spectrum: Spectrum,
    pub energy: Option<f64>,
    pub audit: Option<AuditReport>,
}

#[derive(Serialize)]
struct JsonArtifact<'a> {
    command: &'a str,
    spectrum: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<&'a AuditReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    small: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
}

/// Canonical order, negative zeros cleared.
fn spectrum_rows(s: &Spectrum) -> Vec<[f64; 2]> {
    s.sorted().values().iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect()
}

pub fn render(a: &Artifact, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let out = JsonArtifact {
                command: a.command,
                spectrum: spectrum_rows(&a.spectrum),
                energy: a.energy,
                audit: a.audit.as_ref(),
                small: a.small.as_ref().map(DenseMatrix::to_rows),
                matrix: a.matrix.as_ref().map(DenseMatrix::to_rows),
            };
            let mut s = serde_json::to_string_pretty(&out).expect("artifact serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::from("re,im\n");
            for [re, im] in spectrum_rows(&a.spectrum) {
                let _ = writeln!(s, "{re:.16e},{im:.16e}");
            }
            Ok(s)
        }
        Format::Mtx => match &a.matrix {
            Some(m) => Ok(matrix_market(m)),
            None => Err(CliError::Input(format!("{} produces no matrix to write as mtx", a.command))),
        },
    }
}

/// Coordinate format, nonzero entries in row-major order, 1-based.
pub fn matrix_market(m: &DenseMatrix) -> String {
    let entries: Vec<(usize, usize, f64)> = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m[(i, j)]))
        .filter(|&(_, _, x)| x != 0.0)
        .collect();
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", m.rows(), m.cols(), entries.len());
    for (i, j, x) in entries {
        let _ = writeln!(s, "{} {} {x:.16e}", i + 1, j + 1);
    }
    s
}

pub fn audit_summary(report: &AuditReport) -> String {
    if report.passed() {
        format!("audit {}: pass ({} checks)\n", report.label, report.checks.len())
    } else {
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        format!("audit {}: FAIL ({})\n", report.label, failed.join(", "))
    }
}
