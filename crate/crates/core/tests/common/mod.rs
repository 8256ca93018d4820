//! Shared oracles and seeded generators for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_forge::blockforge::BlockSystem;
use spectral_forge::numkit::qr_eigs_small;
use spectral_forge::{Complex64, DenseMatrix, EigenPair, Spectrum};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `det(m - shift I)` by cofactor expansion. Exponential; `n <= 7` only.
pub fn leibniz_det(m: &DenseMatrix, shift: Complex64) -> Complex64 {
    let n = m.rows();
    assert!(n <= 7, "cofactor oracle is for tiny matrices");
    let a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(m[(i, j)], 0.0) - if i == j { shift } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    cofactor(&a, 0, &cols)
}

fn cofactor(a: &[Vec<Complex64>], row: usize, cols: &[usize]) -> Complex64 {
    if cols.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        total += a[row][c] * sign * cofactor(a, row + 1, &rest);
    }
    total
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
    DenseMatrix::new(rows, cols, data).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let m = uniform_matrix(rng, n, n, -1.0, 1.0);
    m.add(&m.transpose()).unwrap().scaled(0.5)
}

/// Orthogonal matrix from Gram-Schmidt, applied twice, on a random matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let m = uniform_matrix(rng, n, n, -1.0, 1.0);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.col(j);
        for _ in 0..2 {
            for prev in &q {
                let d: f64 = prev.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(prev).for_each(|(x, p)| *x -= d * p);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "degenerate random matrix");
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }
    DenseMatrix::from_rows(&q).unwrap().transpose()
}

/// `Q T Q^T` for orthogonal `Q`.
pub fn conjugate(q: &DenseMatrix, t: &DenseMatrix) -> DenseMatrix {
    spectral_forge::numkit::matmul(&spectral_forge::numkit::matmul(q, t).unwrap(), &q.transpose()).unwrap()
}

/// Symmetric matrix with exactly the given eigenvalues and the matching
/// orthonormal eigenvectors (columns of the returned `Q`).
pub fn symmetric_with_spectrum(rng: &mut ChaCha8Rng, eigs: &[f64]) -> (DenseMatrix, DenseMatrix) {
    let q = random_orthogonal(rng, eigs.len());
    let a = conjugate(&q, &DenseMatrix::from_diag(eigs));
    (a.add(&a.transpose()).unwrap().scaled(0.5), q)
}

pub fn random_symmetric_system(rng: &mut ChaCha8Rng, k: usize, max_n: usize) -> BlockSystem {
    let mut blocks = Vec::new();
    let mut pairs = Vec::new();
    let mut spectra = Vec::new();
    for _ in 0..k {
        let n = rng.gen_range(1..=max_n);
        let eigs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let (a, q) = symmetric_with_spectrum(rng, &eigs);
        let lead = rng.gen_range(0..n);
        pairs.push(EigenPair::new(eigs[lead], q.col(lead)).unwrap());
        blocks.push(a);
        spectra.push(Spectrum::from_real(&eigs).unwrap());
    }
    let mut rho = DenseMatrix::zeros(k, k);
    for p in 0..k {
        for q in p..k {
            let r = rng.gen_range(0.0..2.0);
            rho[(p, q)] = r;
            rho[(q, p)] = r;
        }
    }
    BlockSystem::new(blocks, pairs, spectra, rho).unwrap()
}

/// Nonsymmetric system with independent `rho_pq`, `rho_qp`, one exact
/// Jordan block `[[1, 1], [0, 1]]`, and other blocks orthogonally similar
/// to random upper triangular matrices.
pub fn random_defective_system(rng: &mut ChaCha8Rng, k: usize, max_n: usize) -> BlockSystem {
    let jordan_at = rng.gen_range(0..k);
    let mut blocks = Vec::new();
    let mut pairs = Vec::new();
    let mut spectra = Vec::new();
    for j in 0..k {
        if j == jordan_at {
            blocks.push(DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap());
            pairs.push(EigenPair::new(1.0, vec![1.0, 0.0]).unwrap());
            spectra.push(Spectrum::from_real(&[1.0, 1.0]).unwrap());
            continue;
        }
        let n = rng.gen_range(1..=max_n);
        let mut t = DenseMatrix::zeros(n, n);
        for r in 0..n {
            t[(r, r)] = rng.gen_range(-2.0..2.0);
            for c in (r + 1)..n {
                t[(r, c)] = rng.gen_range(-1.0..1.0);
            }
        }
        let q = random_orthogonal(rng, n);
        blocks.push(conjugate(&q, &t));
        pairs.push(EigenPair::new(t[(0, 0)], q.col(0)).unwrap());
        spectra.push(Spectrum::from_real(&t.diagonal()).unwrap());
    }
    let rho = uniform_matrix(rng, k, k, 0.0, 2.0);
    BlockSystem::new(blocks, pairs, spectra, rho).unwrap()
}

pub fn permutation_matrix(perm: &[usize]) -> DenseMatrix {
    let n = perm.len();
    let mut p = DenseMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = 1.0;
    }
    p
}

/// Convex combination of 1..=4 random permutation matrices, symmetrized
/// as `(P + P^T) / 2` when `symmetric`.
pub fn random_doubly_stochastic(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> DenseMatrix {
    let terms = rng.gen_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut out = DenseMatrix::zeros(n, n);
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut p = permutation_matrix(&perm);
        if symmetric {
            p = p.add(&p.transpose()).unwrap().scaled(0.5);
        }
        out = out.add(&p.scaled(w / total)).unwrap();
    }
    out
}

/// Spectrum from the QR solver with the eigenvalue nearest 1 snapped to 1.
pub fn ds_spectrum(t: &DenseMatrix) -> Spectrum {
    let mut v = qr_eigs_small(t).unwrap().into_values();
    let one = Complex64::new(1.0, 0.0);
    let i = (0..v.len())
        .min_by(|&a, &b| (v[a] - one).norm().total_cmp(&(v[b] - one).norm()))
        .unwrap();
    v[i] = one;
    Spectrum::new(v).unwrap()
}

/// A doubly stochastic matrix with eigenvalues `1, 0, 0` where `0` has a
/// single Jordan block of size two.
pub fn defective_doubly_stochastic() -> (DenseMatrix, Spectrum) {
    let t = DenseMatrix::from_rows(&[
        [1.0 / 2.0, 1.0 / 2.0, 0.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    ])
    .unwrap();
    (t, Spectrum::from_real(&[1.0, 0.0, 0.0]).unwrap())
}

pub fn sorted_reals(s: &Spectrum) -> Vec<f64> {
    s.sorted().real_parts()
}
