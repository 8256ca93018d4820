use num_complex::Complex64;

use super::{DenseMatrix, Spectrum};
use crate::error::{Error, Result};

/// Sweep budget of the cyclic Jacobi iteration.
pub const MAX_JACOBI_SWEEPS: usize = 100;

const SYMMETRY_TOL: f64 = 1e-12;

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Real eigenvalues, descending.
    pub spectrum: Spectrum,
    /// Orthonormal eigenvectors as columns, in the order of `spectrum`.
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn values(&self) -> Vec<f64> {
        self.spectrum.real_parts()
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Rotations are applied sweep by sweep until the off-diagonal Frobenius
/// mass drops to `tol * |m|_max`.
pub fn jacobi_eigs(m: &DenseMatrix, tol: f64) -> Result<SymmetricEigen> {
    m.ensure_symmetric("jacobi input", SYMMETRY_TOL)?;
    let n = m.rows();
    // symmetrize exactly so rotations see a symmetric array
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let target = tol * m.max_abs();

    let mut sweeps = 0;
    loop {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                method: "cyclic Jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values: Vec<Complex64> = order.iter().map(|&i| Complex64::new(a[(i, i)], 0.0)).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(SymmetricEigen {
        spectrum: Spectrum::new(values)?,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the symmetric Schur rotation and
/// accumulates it into `v`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
