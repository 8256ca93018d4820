//! Dense real linear algebra and the eigensolver oracles.
//!
//! Symmetric matrices are diagonalized with cyclic Jacobi
//! ([`jacobi_eigs`]). Nonsymmetric matrices are never fully decomposed:
//! small ones (at most 64 rows) go through Hessenberg + shifted QR
//! ([`qr_eigs_small`]), and candidate eigenvalues of larger ones are
//! certified with complex LU determinants ([`lu_det_complex`]).

mod jacobi;
mod lu;
mod matrix;
mod perron;
mod qr;
mod spectrum;

pub use jacobi::{jacobi_eigs, SymmetricEigen, MAX_JACOBI_SWEEPS};
pub use lu::{lu_det_complex, real_det};
pub use matrix::{matmul, outer, DenseMatrix};
pub use perron::perron_pair;
pub use qr::{qr_eigs_small, QR_DIM_LIMIT};
pub use spectrum::{canonical_cmp, EigenPair, Spectrum};

pub use num_complex::Complex64 as ComplexScalar;
