use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::Result;

/// `det(m - shift * I)` through complex LU with partial pivoting.
///
/// An exactly zero pivot column means the shifted matrix is singular and
/// the determinant is reported as zero.
pub fn lu_det_complex(m: &DenseMatrix, shift: Complex64) -> Result<Complex64> {
    m.ensure_square()?;
    let n = m.rows();
    let mut a: Vec<Complex64> = m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for i in 0..n {
        a[i * n + i] -= shift;
    }

    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, a[i * n + k].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let f = a[i * n + k] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in (k + 1)..n {
                let t = a[k * n + j];
                a[i * n + j] -= f * t;
            }
        }
    }
    Ok(det)
}

/// Real determinant through LU with partial pivoting.
pub fn real_det(m: &DenseMatrix) -> Result<f64> {
    m.ensure_square()?;
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap_or(k);
        if a[p * n + k] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let f = a[i * n + k] / pivot;
            for j in (k + 1)..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    Ok(det)
}
