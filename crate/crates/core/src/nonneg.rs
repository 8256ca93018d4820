//! Nonnegative constructions.
//!
//! With nonnegative blocks, their Perron vectors and nonnegative couplings,
//! every term of the coupled block matrix is nonnegative. Choosing the
//! couplings so that the `k x k` coupling matrix is circulant makes its
//! eigenvalues explicit: `p(w^l)` for the first-row polynomial `p` and
//! `w = exp(2 pi i / k)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blockforge::{assemble, AssembledSystem, BlockSystem};
use crate::error::{Error, Result};
use crate::numkit::{perron_pair, DenseMatrix, EigenPair, Spectrum};

/// First negative entry found by [`check_nonnegative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// `Ok(())` iff every entry is `>= -tol`; otherwise the first violation in
/// row-major order.
pub fn check_nonnegative(m: &DenseMatrix, tol: f64) -> std::result::Result<(), Violation> {
    match m.as_slice().iter().position(|&x| x < -tol) {
        None => Ok(()),
        Some(pos) => Err(Violation {
            row: pos / m.cols(),
            col: pos % m.cols(),
            value: m.as_slice()[pos],
        }),
    }
}

/// A nonnegative block with its full spectrum. The Perron pair is computed
/// by power iteration unless supplied.
#[derive(Debug, Clone)]
pub struct NonnegBlock {
    pub matrix: DenseMatrix,
    pub spectrum: Spectrum,
    pub perron: Option<EigenPair>,
}

impl NonnegBlock {
    pub fn new(matrix: DenseMatrix, spectrum: Spectrum) -> Self {
        Self {
            matrix,
            spectrum,
            perron: None,
        }
    }

    pub fn with_perron(mut self, pair: EigenPair) -> Self {
        self.perron = Some(pair);
        self
    }

    fn perron_pair(&self, index: usize) -> Result<EigenPair> {
        if let Err(v) = check_nonnegative(&self.matrix, 0.0) {
            return Err(Error::InvalidInput(format!(
                "block {index} has negative entry {} at ({}, {})",
                v.value, v.row, v.col
            )));
        }
        let pair = match &self.perron {
            Some(p) => p.clone(),
            None => perron_pair(&self.matrix, 1e-12, 100_000)?,
        };
        if pair.vector.iter().any(|&x| x < -1e-12) {
            return Err(Error::InvalidInput(format!(
                "Perron vector of block {index} has negative entries"
            )));
        }
        Ok(pair)
    }
}

/// Coupling choice that turns the coupling matrix into a circulant.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantPlan {
    /// `(lambda_11 + rho_11, rho_12, ..., rho_1k)`
    pub base_row: Vec<f64>,
    /// Full coupling constants; the coupling matrix is the circulant with
    /// first row `base_row`.
    pub rho_full: DenseMatrix,
    /// Coefficients of `p(x)`, lowest degree first.
    pub poly_coeffs: Vec<f64>,
}

impl CirculantPlan {
    /// Completes `rho_first_row` given the Perron roots of the blocks.
    ///
    /// A circulant has a constant diagonal, so `rho_jj` is forced to
    /// `lambda_11 + rho_11 - lambda_1j`; the plan is infeasible if that is
    /// negative for some `j`.
    pub fn new(perron_roots: &[f64], rho_first_row: &[f64]) -> Result<Self> {
        let k = perron_roots.len();
        if k == 0 {
            return Err(Error::Empty("circulant plan without blocks"));
        }
        if rho_first_row.len() != k {
            return Err(Error::InvalidInput(format!(
                "first coupling row has {} entries, expected {k}",
                rho_first_row.len()
            )));
        }
        if let Some(j) = rho_first_row.iter().position(|&r| r.is_nan() || r < 0.0) {
            return Err(Error::InvalidInput(format!(
                "coupling rho_1{} = {} must be nonnegative",
                j + 1,
                rho_first_row[j]
            )));
        }

        let lead = perron_roots[0] + rho_first_row[0];
        let mut base_row = rho_first_row.to_vec();
        base_row[0] = lead;

        let mut rho_full = DenseMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    rho_full[(i, j)] = base_row[(j + k - i) % k];
                }
            }
            let shift = lead - perron_roots[i];
            if shift < -1e-12 * (1.0 + lead.abs()) {
                return Err(Error::Infeasible(format!(
                    "diagonal consistency needs rho_{0}{0} = {1} - {2} = {shift} >= 0",
                    i + 1,
                    lead,
                    perron_roots[i]
                )));
            }
            rho_full[(i, i)] = shift.max(0.0);
        }
        rho_full[(0, 0)] = rho_first_row[0];

        Ok(Self {
            poly_coeffs: base_row.clone(),
            base_row,
            rho_full,
        })
    }

    pub fn k(&self) -> usize {
        self.base_row.len()
    }

    /// `p(x)` by Horner's rule.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.poly_coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `p(w^l)` for `l = 0..k-1`, `w = exp(2 pi i / k)`.
    pub fn circulant_eigenvalues(&self) -> Vec<Complex64> {
        let k = self.k();
        (0..k)
            .map(|l| {
                let angle = 2.0 * PI * (l as f64) / (k as f64);
                let z = self.eval(Complex64::from_polar(1.0, angle));
                // roots of unity 1 and -1 are real; keep p real there
                if 2 * l % k == 0 {
                    Complex64::new(z.re, 0.0)
                } else {
                    z
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CirculantRealization {
    pub plan: CirculantPlan,
    pub system: BlockSystem,
    pub assembled: AssembledSystem,
    /// `p(w^l)`, `l = 0..k-1`
    pub circulant_eigs: Vec<Complex64>,
    /// `(p(1); block 1 rest, p(w), block 2 rest, ...)` with the Perron
    /// root `p(1)` marked.
    pub realized: Spectrum,
}

/// Realizes the grouped tuple with a nonnegative block matrix whose
/// coupling matrix is circulant.
pub fn circulant_realize(blocks: &[NonnegBlock], rho_first_row: &[f64]) -> Result<CirculantRealization> {
    let pairs = blocks
        .iter()
        .enumerate()
        .map(|(j, b)| b.perron_pair(j))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let plan = CirculantPlan::new(&roots, rho_first_row)?;

    let sys = BlockSystem::new(
        blocks.iter().map(|b| b.matrix.clone()).collect(),
        pairs,
        blocks.iter().map(|b| b.spectrum.clone()).collect(),
        plan.rho_full.clone(),
    )?;
    let assembled = assemble(&sys)?;
    let circulant_eigs = plan.circulant_eigenvalues();

    let mut grouped = Vec::with_capacity(sys.order());
    for (z, rest) in circulant_eigs.iter().zip(&assembled.retained) {
        grouped.push(*z);
        grouped.extend_from_slice(rest.values());
    }
    let realized = Spectrum::new(grouped)?.with_perron(0)?;
    Ok(CirculantRealization {
        plan,
        system: sys,
        assembled,
        circulant_eigs,
        realized,
    })
}
