use super::{DenseMatrix, EigenPair};
use crate::error::{Error, Result};

/// Perron root and unit Perron vector of an entrywise nonnegative matrix.
///
/// Power iteration runs on `m + c I` with `c = 1 + max diagonal entry`,
/// starting from the all-ones vector, until `|m v - r v|_2 <= tol`.
/// Failure to converge usually means the Perron structure is reducible or
/// defective; callers then have to supply the pair themselves.
pub fn perron_pair(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<EigenPair> {
    m.ensure_square()?;
    if let Some(pos) = m.as_slice().iter().position(|&x| x < 0.0) {
        return Err(Error::InvalidInput(format!(
            "perron_pair needs a nonnegative matrix; entry ({}, {}) is {}",
            pos / m.cols(),
            pos % m.cols(),
            m.as_slice()[pos]
        )));
    }
    let n = m.rows();
    let c = 1.0 + m.diagonal().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];

    for _ in 0..=max_iter {
        let mv = m.matvec(&v)?;
        let r: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        let residual = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - r * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            return EigenPair::new(r.max(0.0), v);
        }
        let mut w: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a + c * b).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
    }
    Err(Error::NoConvergence {
        method: "Perron power iteration",
        iterations: max_iter,
    })
}
