//! Rank-`r` eigenvector updates.
//!
//! If the columns of `X` are eigenvectors of `A` for `lambda_1..lambda_r`,
//! then for any `r x n` matrix `C` the update `A + X C` keeps
//! `lambda_{r+1}..lambda_n` and replaces the first `r` eigenvalues by the
//! eigenvalues of the `r x r` matrix `diag(lambda_1..lambda_r) + C X`.
//! No diagonalizability is needed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{matmul, qr_eigs_small, DenseMatrix, EigenPair, Spectrum, QR_DIM_LIMIT};

/// Residual gate for supplied eigenpairs, relative to `1 + |a|_max`.
pub const EIGENPAIR_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RadoInput {
    pub a: DenseMatrix,
    /// Full spectrum of `a`; the first `r` entries belong to `pairs`.
    pub full_spectrum: Spectrum,
    pub pairs: Vec<EigenPair>,
    /// `r x n` update coefficients.
    pub c: DenseMatrix,
}

#[derive(Debug, Clone)]
pub struct RadoResult {
    /// `a + X c`
    pub updated: DenseMatrix,
    /// Eigenvalues of `small` followed by the retained `lambda_{r+1..n}`.
    pub predicted: Spectrum,
    /// `diag(lambda_1..lambda_r) + c X`
    pub small: DenseMatrix,
}

/// Stacks the pair vectors as the columns of an `n x r` matrix.
pub fn eigenvector_matrix(pairs: &[EigenPair]) -> Result<DenseMatrix> {
    let r = pairs.len();
    if r == 0 {
        return Err(Error::Empty("no eigenpairs"));
    }
    let n = pairs[0].len();
    let mut x = DenseMatrix::zeros(n, r);
    for (j, p) in pairs.iter().enumerate() {
        if p.len() != n {
            return Err(Error::InvalidInput(format!(
                "eigenvector {} has length {}, expected {}",
                j,
                p.len(),
                n
            )));
        }
        for (i, &v) in p.vector.iter().enumerate() {
            x[(i, j)] = v;
        }
    }
    Ok(x)
}

pub fn rado_update(input: &RadoInput) -> Result<RadoResult> {
    let RadoInput {
        a,
        full_spectrum,
        pairs,
        c,
    } = input;
    a.ensure_square()?;
    let n = a.rows();
    let r = pairs.len();
    if r == 0 {
        return Err(Error::Empty("rado_update needs at least one eigenpair"));
    }
    if r > n {
        return Err(Error::InvalidInput(format!("{r} eigenpairs for a {n}x{n} matrix")));
    }
    if r > QR_DIM_LIMIT {
        return Err(Error::TooLarge {
            op: "rado_update",
            dim: r,
            limit: QR_DIM_LIMIT,
        });
    }
    if full_spectrum.len() != n {
        return Err(Error::InvalidInput(format!(
            "full spectrum has {} entries, matrix has order {}",
            full_spectrum.len(),
            n
        )));
    }
    if c.shape() != (r, n) {
        return Err(Error::DimensionMismatch {
            op: "rado_update coefficients",
            left_rows: c.rows(),
            left_cols: c.cols(),
            right_rows: r,
            right_cols: n,
        });
    }
    for (j, p) in pairs.iter().enumerate() {
        if p.len() != n {
            return Err(Error::InvalidInput(format!(
                "eigenvector {j} has length {}, expected {n}",
                p.len()
            )));
        }
        p.check_against(a, EIGENPAIR_TOL, &format!("eigenpair {j}"))?;
        let listed = full_spectrum.values()[j];
        if (listed - Complex64::new(p.value, 0.0)).norm() > EIGENPAIR_TOL * (1.0 + a.max_abs()) {
            return Err(Error::InvalidInput(format!(
                "eigenpair {j} has value {} but spectrum entry {j} is {listed}",
                p.value
            )));
        }
    }

    let x = eigenvector_matrix(pairs)?;
    let updated = a.add(&matmul(&x, c)?)?;
    let lambda = DenseMatrix::from_diag(&pairs.iter().map(|p| p.value).collect::<Vec<_>>());
    let small = lambda.add(&matmul(c, &x)?)?;

    let retained: Spectrum = full_spectrum.values()[r..].iter().copied().collect();
    let predicted = qr_eigs_small(&small)?.union(&retained);
    Ok(RadoResult {
        updated,
        predicted,
        small,
    })
}

/// Symmetric form: `a + X Y X^T` with orthonormal eigenvector columns and
/// symmetric `y`; the small matrix reduces to `diag(lambda) + y`.
pub fn symmetric_rado(
    a: &DenseMatrix,
    full_spectrum: &Spectrum,
    pairs: &[EigenPair],
    y: &DenseMatrix,
) -> Result<RadoResult> {
    const ORTHO_TOL: f64 = 1e-10;
    const SYM_TOL: f64 = 1e-12;

    a.ensure_symmetric("a", SYM_TOL)?;
    y.ensure_symmetric("y", SYM_TOL)?;
    let x = eigenvector_matrix(pairs)?;
    let gram = matmul(&x.transpose(), &x)?;
    let drift = gram.max_abs_diff(&DenseMatrix::identity(pairs.len()))?;
    if drift > ORTHO_TOL {
        return Err(Error::InvalidInput(format!(
            "eigenvectors are not orthonormal: Gram matrix deviates from identity by {drift:e}"
        )));
    }
    rado_update(&RadoInput {
        a: a.clone(),
        full_spectrum: full_spectrum.clone(),
        pairs: pairs.to_vec(),
        c: matmul(y, &x.transpose())?,
    })
}
