//! Block matrices with prescribed spectra.
//!
//! A block matrix whose diagonal blocks `A_j` are coupled only through
//! rank-one terms `rho_pq * u_p * u_q^T` (with `u_j` a unit eigenvector of
//! `A_j`) keeps every eigenvalue of every block except the coupled ones,
//! which are replaced by the eigenvalues of the small `k x k` coupling
//! matrix. This crate builds such matrices, predicts their spectra from the
//! coupling matrix, and checks each prediction against an independent
//! dense eigensolver or determinant residual.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numkit`] | dense matrices, LU determinants, Jacobi / QR eigensolvers, Perron iteration |
//! | [`rado`] | rank-`r` eigenvector updates `A + XC` |
//! | [`blockforge`] | the coupled block matrix and its coupling matrix |
//! | [`nonneg`] | nonnegativity certificates and circulant coupling |
//! | [`dstoch`] | doubly stochastic joins with closed-form spectra |
//! | [`graphspec`] | graph joins, complete multipartite graphs, energies |
//! | [`verify`] | spectrum matching, determinant certification, audits |

pub mod blockforge;
pub mod dstoch;
pub mod error;
pub mod graphspec;
pub mod nonneg;
pub mod numkit;
pub mod rado;
pub mod verify;

pub use error::{Error, Result};
pub use numkit::{DenseMatrix, EigenPair, Spectrum};

/// Complex eigenvalues are carried as `num_complex::Complex64`.
pub use num_complex::Complex64;

/// Default tolerances shared by the constructions and the audit layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise symmetry tolerance.
    pub symmetry: f64,
    /// Jacobi stopping tolerance relative to the largest entry.
    pub eigen: f64,
    /// Maximum distance between a predicted and an oracle eigenvalue.
    pub spectrum_match: f64,
    /// Scale of the determinant residual bound `scale * (1 + |m|_max)^n`.
    pub det_scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-12,
            eigen: 1e-10,
            spectrum_match: 1e-8,
            det_scale: 1e-6,
        }
    }
}
