//! Coupled block matrices.
//!
//! Given blocks `A_1..A_k`, one unit eigenpair `(lambda_1j, u_j)` per block
//! and coupling constants `rho_pq`, the assembled matrix has diagonal
//! blocks `A_j + rho_jj u_j u_j^T` and off-diagonal blocks
//! `rho_pq u_p u_q^T`. Its spectrum is every block eigenvalue except the
//! `lambda_1j`, plus the eigenvalues of the `k x k` coupling matrix with
//! diagonal `lambda_1j + rho_jj` and off-diagonal `rho_pq`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{outer, qr_eigs_small, DenseMatrix, EigenPair, Spectrum, QR_DIM_LIMIT};
use crate::rado::{RadoInput, EIGENPAIR_TOL};

/// Tolerance used to locate `lambda_1j` inside the supplied block spectrum.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct BlockSystem {
    blocks: Vec<DenseMatrix>,
    pairs: Vec<EigenPair>,
    spectra: Vec<Spectrum>,
    rho: DenseMatrix,
}

impl BlockSystem {
    pub fn new(
        blocks: Vec<DenseMatrix>,
        pairs: Vec<EigenPair>,
        spectra: Vec<Spectrum>,
        rho: DenseMatrix,
    ) -> Result<Self> {
        let k = blocks.len();
        if k == 0 {
            return Err(Error::Empty("block system without blocks"));
        }
        if k > QR_DIM_LIMIT {
            return Err(Error::TooLarge {
                op: "block system",
                dim: k,
                limit: QR_DIM_LIMIT,
            });
        }
        if pairs.len() != k || spectra.len() != k {
            return Err(Error::InvalidInput(format!(
                "{} blocks but {} eigenpairs and {} spectra",
                k,
                pairs.len(),
                spectra.len()
            )));
        }
        if rho.shape() != (k, k) {
            return Err(Error::InvalidInput(format!(
                "coupling matrix is {}x{}, expected {k}x{k}",
                rho.rows(),
                rho.cols()
            )));
        }
        for (j, ((block, pair), spectrum)) in blocks.iter().zip(&pairs).zip(&spectra).enumerate() {
            block.ensure_square()?;
            let nj = block.rows();
            if pair.len() != nj {
                return Err(Error::InvalidInput(format!(
                    "eigenvector of block {j} has length {}, block has order {nj}",
                    pair.len()
                )));
            }
            if spectrum.len() != nj {
                return Err(Error::InvalidInput(format!(
                    "spectrum of block {j} has {} entries, block has order {nj}",
                    spectrum.len()
                )));
            }
            pair.check_against(block, EIGENPAIR_TOL, &format!("block {j}"))?;
            let target = Complex64::new(pair.value, 0.0);
            if !spectrum
                .values()
                .iter()
                .any(|z| (z - target).norm() <= SPECTRUM_MATCH_TOL)
            {
                return Err(Error::EigenvalueNotInSpectrum {
                    block: j,
                    value: pair.value,
                    tol: SPECTRUM_MATCH_TOL,
                });
            }
        }
        Ok(Self {
            blocks,
            pairs,
            spectra,
            rho,
        })
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[DenseMatrix] {
        &self.blocks
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn spectra(&self) -> &[Spectrum] {
        &self.spectra
    }

    pub fn rho(&self) -> &DenseMatrix {
        &self.rho
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }

    pub fn order(&self) -> usize {
        self.sizes().iter().sum()
    }

    /// Row offsets of each block inside the assembled matrix.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.rows();
                Some(start)
            })
            .collect()
    }

    /// All blocks symmetric and `rho` symmetric, so the assembled matrix is too.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rho.is_symmetric(tol) && self.blocks.iter().all(|b| b.is_symmetric(tol))
    }

    /// Nonnegative blocks, nonnegative eigenvectors and nonnegative
    /// couplings; the assembled matrix is then nonnegative.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.rho.as_slice().iter().all(|&x| x >= -tol)
            && self.blocks.iter().all(|b| b.as_slice().iter().all(|&x| x >= -tol))
            && self.pairs.iter().all(|p| p.vector.iter().all(|&x| x >= -tol))
    }

    /// Zero diagonal and zero couplings beyond the first off-diagonal.
    pub fn is_chain_pattern(&self) -> bool {
        let k = self.k();
        (0..k).all(|p| (0..k).all(|q| p.abs_diff(q) == 1 || self.rho[(p, q)] == 0.0))
    }

    /// `diag(lambda_1j + rho_jj)` plus off-diagonal `rho_pq`.
    pub fn coupling_matrix(&self) -> DenseMatrix {
        let mut small = self.rho.clone();
        for (j, p) in self.pairs.iter().enumerate() {
            small[(j, j)] += p.value;
        }
        small
    }

    /// The same construction phrased as a single rank-`k` eigenvector
    /// update of the direct sum `A_1 (+) ... (+) A_k`.
    pub fn rado_form(&self) -> Result<RadoInput> {
        let n = self.order();
        let k = self.k();
        let offsets = self.offsets();
        let a = DenseMatrix::direct_sum(&self.blocks)?;

        let mut pairs = Vec::with_capacity(k);
        for (j, p) in self.pairs.iter().enumerate() {
            let mut v = vec![0.0; n];
            v[offsets[j]..offsets[j] + p.len()].copy_from_slice(&p.vector);
            pairs.push(EigenPair {
                value: p.value,
                vector: v,
            });
        }

        let mut c = DenseMatrix::zeros(k, n);
        for p in 0..k {
            for q in 0..k {
                for (i, &u) in self.pairs[q].vector.iter().enumerate() {
                    c[(p, offsets[q] + i)] = self.rho[(p, q)] * u;
                }
            }
        }

        let mut lead: Vec<Complex64> = self.pairs.iter().map(|p| Complex64::new(p.value, 0.0)).collect();
        for rest in self.retained_spectra() {
            lead.extend_from_slice(rest.values());
        }
        Ok(RadoInput {
            a,
            full_spectrum: Spectrum::new(lead)?,
            pairs,
            c,
        })
    }

    /// Each block spectrum with one copy of its lead eigenvalue removed.
    pub fn retained_spectra(&self) -> Vec<Spectrum> {
        self.spectra
            .iter()
            .zip(&self.pairs)
            .map(|(s, p)| {
                let mut rest = s.clone();
                rest.remove_closest(Complex64::new(p.value, 0.0), SPECTRUM_MATCH_TOL)
                    .expect("checked on construction");
                rest
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct AssembledSystem {
    /// The `n x n` coupled block matrix.
    pub big: DenseMatrix,
    /// The `k x k` coupling matrix.
    pub small: DenseMatrix,
    /// Eigenvalues of `small` followed by the retained block eigenvalues.
    pub predicted: Spectrum,
    /// Eigenvalues of `small`, canonical order.
    pub coupled: Spectrum,
    /// Retained eigenvalues of each block, in block order.
    pub retained: Vec<Spectrum>,
}

/// Builds the coupled block matrix and predicts its spectrum.
pub fn assemble(sys: &BlockSystem) -> Result<AssembledSystem> {
    let k = sys.k();
    let offsets = sys.offsets();
    let n = sys.order();
    let mut big = DenseMatrix::zeros(n, n);
    for p in 0..k {
        for q in 0..k {
            let mut block = outer(&sys.pairs[p].vector, &sys.pairs[q].vector, sys.rho[(p, q)])?;
            if p == q {
                block = block.add(&sys.blocks[p])?;
            }
            big.set_block(offsets[p], offsets[q], &block);
        }
    }

    let small = sys.coupling_matrix();
    let coupled = qr_eigs_small(&small)?;
    let retained = sys.retained_spectra();
    let predicted = retained.iter().fold(coupled.clone(), |acc, s| acc.union(s));
    Ok(AssembledSystem {
        big,
        small,
        predicted,
        coupled,
        retained,
    })
}

/// Two symmetric blocks coupled by `rho`, with diagonal shifts `rho11`
/// and `rho22`. With zero shifts this is the classical two-block case.
#[allow(clippy::too_many_arguments)]
pub fn fiedler2(
    a: &DenseMatrix,
    a_spec: &Spectrum,
    u: &EigenPair,
    b: &DenseMatrix,
    b_spec: &Spectrum,
    v: &EigenPair,
    rho: f64,
    rho11: f64,
    rho22: f64,
) -> Result<AssembledSystem> {
    a.ensure_symmetric("a", 1e-12)?;
    b.ensure_symmetric("b", 1e-12)?;
    let sys = BlockSystem::new(
        vec![a.clone(), b.clone()],
        vec![u.clone(), v.clone()],
        vec![a_spec.clone(), b_spec.clone()],
        DenseMatrix::from_rows(&[[rho11, rho], [rho, rho22]])?,
    )?;
    assemble(&sys)
}

/// Tridiagonal-by-blocks coupling: only consecutive blocks interact and
/// the diagonal shifts are zero.
pub fn chain(sys: &BlockSystem) -> Result<AssembledSystem> {
    if !sys.is_chain_pattern() {
        return Err(Error::InvalidInput(
            "chain coupling must have zero diagonal and zero entries beyond the first off-diagonal"
                .into(),
        ));
    }
    assemble(sys)
}

/// Symmetric chain coupling matrix with `couplings[j]` between blocks
/// `j` and `j + 1`.
pub fn chain_rho(couplings: &[f64]) -> DenseMatrix {
    let k = couplings.len() + 1;
    let mut rho = DenseMatrix::zeros(k, k);
    for (j, &c) in couplings.iter().enumerate() {
        rho[(j, j + 1)] = c;
        rho[(j + 1, j)] = c;
    }
    rho
}
