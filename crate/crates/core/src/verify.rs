//! Independent checks of predicted spectra.
//!
//! Symmetric matrices are eigensolved with Jacobi and matched against the
//! prediction. Nonsymmetric matrices are never fully eigensolved: each
//! predicted eigenvalue is certified by a determinant residual, and the
//! first two power sums are compared with `trace(B)` and `trace(B^2)`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::blockforge::{assemble, BlockSystem};
use crate::dstoch::{is_doubly_stochastic, join, DsJoinMode, DsJoinSpec, DS_TOL};
use crate::error::{Error, Result};
use crate::graphspec::{energy, join_graph, JoinResult};
use crate::nonneg::check_nonnegative;
use crate::numkit::{canonical_cmp, jacobi_eigs, lu_det_complex, matmul, DenseMatrix, Spectrum};
use crate::Tolerances;

/// Largest dimension accepted by the determinant path.
pub const DET_DIM_LIMIT: usize = 128;

const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub matched: bool,
    /// Matching mode: largest paired distance. Certification mode: largest
    /// determinant residual.
    pub max_pair_distance: f64,
    /// `(predicted index, oracle index)` in the caller's original order.
    pub pairing: Vec<(usize, usize)>,
    /// Determinant residual per candidate, certification mode only.
    pub residuals: Vec<f64>,
    /// Residual bound, certification mode only.
    pub bound: Option<f64>,
}

fn canonical_order(s: &Spectrum) -> Vec<usize> {
    let v = s.values();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| canonical_cmp(&v[a], &v[b]).then(a.cmp(&b)));
    idx
}

/// Greedy nearest pairing of `from` onto `to`, both in canonical order.
fn greedy(from: &Spectrum, to: &Spectrum) -> (f64, Vec<(usize, usize)>) {
    let fi = canonical_order(from);
    let ti = canonical_order(to);
    let mut used = vec![false; ti.len()];
    let mut worst: f64 = 0.0;
    let mut pairs = Vec::with_capacity(fi.len());
    for &i in &fi {
        let z = from.values()[i];
        let mut best: Option<(usize, f64)> = None;
        for (slot, &j) in ti.iter().enumerate() {
            if used[slot] {
                continue;
            }
            let d = (z - to.values()[j]).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((slot, d));
            }
        }
        let (slot, d) = best.expect("equal lengths");
        used[slot] = true;
        worst = worst.max(d);
        pairs.push((i, ti[slot]));
    }
    (worst, pairs)
}

/// Multiset comparison of two spectra. Greedy pairing is run in both
/// directions and the closer one is reported, so the verdict does not
/// depend on argument order.
pub fn match_spectra(predicted: &Spectrum, oracle: &Spectrum, tol: f64) -> Result<MatchReport> {
    if predicted.len() != oracle.len() {
        return Err(Error::InvalidInput(format!(
            "cannot match {} predicted eigenvalues against {} oracle eigenvalues",
            predicted.len(),
            oracle.len()
        )));
    }
    let (d_fwd, p_fwd) = greedy(predicted, oracle);
    let (d_rev, p_rev) = greedy(oracle, predicted);
    let (dist, mut pairing) = if d_rev < d_fwd {
        (d_rev, p_rev.into_iter().map(|(o, p)| (p, o)).collect::<Vec<_>>())
    } else {
        (d_fwd, p_fwd)
    };
    pairing.sort_unstable();
    Ok(MatchReport {
        matched: dist <= tol,
        max_pair_distance: dist,
        pairing,
        residuals: Vec::new(),
        bound: None,
    })
}

/// Accepts each candidate `g` with `|det(m - g I)| <= tol_scale (1 + |m|_max)^dim`.
pub fn certify_eigenvalues(m: &DenseMatrix, candidates: &Spectrum, tol_scale: f64) -> Result<MatchReport> {
    m.ensure_square()?;
    let n = m.rows();
    let bound = tol_scale * (1.0 + m.max_abs()).powi(n as i32);
    let residuals = candidates
        .values()
        .iter()
        .map(|&g| lu_det_complex(m, g).map(|d| d.norm()))
        .collect::<Result<Vec<_>>>()?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok(MatchReport {
        matched: residuals.iter().all(|&r| r <= bound),
        max_pair_distance: worst,
        pairing: Vec::new(),
        residuals,
        bound: Some(bound),
    })
}

/// What produced the matrix under audit.
#[derive(Debug, Clone, Copy)]
pub enum Construction<'a> {
    Blocks(&'a BlockSystem),
    DsJoin { spec: &'a DsJoinSpec, mode: DsJoinMode },
    GraphJoin(&'a JoinResult),
    /// A bare matrix with a claimed spectrum.
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn at_most(name: &'static str, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: value <= bound,
            value,
            bound,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub label: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `key: value` line per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "audit: {}", self.label);
        let _ = writeln!(out, "passed: {}", self.passed);
        for c in &self.checks {
            let _ = write!(
                out,
                "{}: {} value={:e} bound={:e}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.value,
                c.bound
            );
            if !c.detail.is_empty() {
                let _ = write!(out, " ({})", c.detail);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }
}

/// Runs every check that applies to `construction` on the matrix
/// `assembled` and the claimed spectrum `predicted`. Check errors are
/// recorded as failures rather than returned.
pub fn audit(
    label: &str,
    construction: Construction<'_>,
    assembled: &DenseMatrix,
    predicted: &Spectrum,
    tol: &Tolerances,
) -> AuditReport {
    let mut checks = Vec::new();
    let n = assembled.rows();

    if let Some(expected) = expected_matrix(construction) {
        checks.push(match expected.and_then(|e| assembled.max_abs_diff(&e)) {
            Ok(d) => CheckOutcome::at_most("structure", d, STRUCTURE_TOL, "max entry gap to rebuilt matrix"),
            Err(e) => failed("structure", e),
        });
    }

    let expect_symmetric = match construction {
        Construction::Blocks(sys) => sys.is_symmetric(tol.symmetry),
        Construction::DsJoin { spec, .. } => spec.t1().is_symmetric(tol.symmetry) && spec.t2().is_symmetric(tol.symmetry),
        Construction::GraphJoin(_) => true,
        Construction::Matrix => false,
    };
    let asym = assembled.max_asymmetry().map_or(0.0, |(_, _, g)| g);
    if expect_symmetric {
        checks.push(CheckOutcome::at_most("symmetry", asym, tol.symmetry, "max |b_ij - b_ji|"));
    }

    let expect_nonneg = match construction {
        Construction::Blocks(sys) => sys.is_nonnegative(0.0),
        Construction::DsJoin { .. } | Construction::GraphJoin(_) => true,
        Construction::Matrix => false,
    };
    if expect_nonneg {
        checks.push(match check_nonnegative(assembled, 0.0) {
            Ok(()) => CheckOutcome::at_most("nonnegativity", 0.0, 0.0, ""),
            Err(v) => CheckOutcome::at_most(
                "nonnegativity",
                -v.value,
                0.0,
                format!("entry ({}, {}) = {:e}", v.row, v.col, v.value),
            ),
        });
    }

    if let Construction::DsJoin { .. } = construction {
        let ds = is_doubly_stochastic(assembled, DS_TOL);
        checks.push(CheckOutcome {
            name: "doubly_stochastic",
            passed: ds.ok,
            value: ds.worst_residual,
            bound: DS_TOL,
            detail: format!("min entry {:e}", ds.min_entry),
        });
    }

    if let Construction::GraphJoin(_) = construction {
        let bad = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let x = assembled[(i, j)];
                !(x == 0.0 || x == 1.0) || (i == j && x != 0.0)
            });
        checks.push(match bad {
            None => CheckOutcome::at_most("adjacency_01", 0.0, 0.0, ""),
            Some((i, j)) => CheckOutcome::at_most(
                "adjacency_01",
                1.0,
                0.0,
                format!("entry ({i}, {j}) = {:e}", assembled[(i, j)]),
            ),
        });
    }

    let trace_gap = (predicted.sum() - Complex64::new(assembled.trace(), 0.0)).norm();
    let trace_bound = tol.spectrum_match * (1.0 + n as f64 * assembled.max_abs());
    checks.push(CheckOutcome::at_most("trace", trace_gap, trace_bound, "|sum predicted - trace|"));

    let oracle = spectrum_checks(assembled, predicted, asym <= tol.symmetry, tol, &mut checks);

    if let Construction::DsJoin { .. } = construction {
        let one = Complex64::new(1.0, 0.0);
        let gap = predicted
            .values()
            .iter()
            .map(|z| (z - one).norm())
            .fold(f64::INFINITY, f64::min)
            .max((predicted.spectral_radius() - 1.0).abs());
        checks.push(CheckOutcome::at_most("perron_root", gap, tol.spectrum_match, "spectral radius 1, attained at 1"));
    }

    if let Construction::GraphJoin(res) = construction {
        let e_claim = energy(predicted);
        if let Some(oracle) = &oracle {
            let gap = (e_claim - energy(oracle)).abs();
            checks.push(CheckOutcome::at_most(
                "energy",
                gap,
                tol.spectrum_match * n as f64,
                format!("energy {e_claim}"),
            ));
        }
        checks.push(match res.energy_identity() {
            Ok(e) => CheckOutcome::at_most(
                "energy_identity",
                (e_claim - e).abs(),
                tol.spectrum_match * n as f64,
                "sum of (part energy - degree) plus coupling energy",
            ),
            Err(e) => failed("energy_identity", e),
        });
    }

    AuditReport {
        label: label.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn failed(name: &'static str, e: Error) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: false,
        value: f64::INFINITY,
        bound: 0.0,
        detail: e.to_string(),
    }
}

fn expected_matrix(c: Construction<'_>) -> Option<Result<DenseMatrix>> {
    match c {
        Construction::Blocks(sys) => Some(assemble(sys).map(|a| a.big)),
        Construction::DsJoin { spec, mode } => Some(join(spec, mode).map(|d| d.matrix)),
        Construction::GraphJoin(res) => Some(join_graph(&res.parts, res.kind).map(|g| g.adjacency().clone())),
        Construction::Matrix => None,
    }
}

/// Pushes the spectrum checks; returns the Jacobi spectrum when the
/// symmetric path was taken.
fn spectrum_checks(
    m: &DenseMatrix,
    predicted: &Spectrum,
    symmetric: bool,
    tol: &Tolerances,
    checks: &mut Vec<CheckOutcome>,
) -> Option<Spectrum> {
    if predicted.len() != m.rows() {
        checks.push(CheckOutcome::at_most(
            "spectrum",
            f64::INFINITY,
            tol.spectrum_match,
            format!("{} predicted eigenvalues for order {}", predicted.len(), m.rows()),
        ));
        return None;
    }
    if symmetric {
        let oracle = jacobi_eigs(m, tol.eigen);
        return match oracle.and_then(|o| match_spectra(predicted, &o.spectrum, tol.spectrum_match).map(|r| (o, r))) {
            Ok((o, r)) => {
                checks.push(CheckOutcome::at_most(
                    "spectrum",
                    r.max_pair_distance,
                    tol.spectrum_match,
                    "jacobi multiset match",
                ));
                Some(o.spectrum)
            }
            Err(e) => {
                checks.push(failed("spectrum", e));
                None
            }
        };
    }

    let n = m.rows();
    if n > DET_DIM_LIMIT {
        checks.push(failed(
            "spectrum",
            Error::TooLarge {
                op: "determinant certification",
                dim: n,
                limit: DET_DIM_LIMIT,
            },
        ));
        return None;
    }
    match certify_eigenvalues(m, predicted, tol.det_scale) {
        Ok(r) => checks.push(CheckOutcome {
            name: "spectrum",
            passed: r.matched,
            value: r.max_pair_distance,
            bound: r.bound.unwrap_or(0.0),
            detail: "determinant residual".into(),
        }),
        Err(e) => checks.push(failed("spectrum", e)),
    }
    match matmul(m, m) {
        Ok(m2) => {
            let gap = (predicted.power_sum(2) - Complex64::new(m2.trace(), 0.0)).norm();
            let scale: f64 = predicted.values().iter().map(|z| z.norm_sqr()).sum::<f64>() + m2.max_abs();
            checks.push(CheckOutcome::at_most(
                "power_sum_2",
                gap,
                tol.spectrum_match * (1.0 + scale),
                "|sum predicted^2 - trace(B^2)|",
            ));
        }
        Err(e) => checks.push(failed("power_sum_2", e)),
    }
    None
}
