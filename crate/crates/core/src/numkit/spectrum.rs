use std::cmp::Ordering;

use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Canonical eigenvalue order: real part descending, then imaginary part
/// descending.
pub fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Multiset of (possibly complex) eigenvalues, optionally with a
/// distinguished Perron root.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    values: Vec<Complex64>,
    perron_index: Option<usize>,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self {
            values,
            perron_index: None,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Marks `index` as the Perron root. Its modulus must dominate every
    /// other entry up to `1e-9`.
    pub fn with_perron(mut self, index: usize) -> Result<Self> {
        let p = self
            .values
            .get(index)
            .ok_or_else(|| Error::InvalidInput(format!("perron index {index} out of range")))?
            .norm();
        if let Some(z) = self.values.iter().find(|z| p < z.norm() - 1e-9) {
            return Err(Error::InvalidInput(format!(
                "perron root modulus {p} is smaller than |{z}|"
            )));
        }
        self.perron_index = Some(index);
        Ok(self)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn perron_index(&self) -> Option<usize> {
        self.perron_index
    }

    pub fn perron_root(&self) -> Option<Complex64> {
        self.perron_index.map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Real parts, for spectra known to be real.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Sum of `z^p` over the multiset.
    pub fn power_sum(&self, p: i32) -> Complex64 {
        self.values.iter().map(|z| z.powi(p)).sum()
    }

    /// Largest modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Copy in canonical order. The Perron marker follows its value.
    pub fn sorted(&self) -> Self {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| canonical_cmp(&self.values[a], &self.values[b]).then(a.cmp(&b)));
        let perron_index = self
            .perron_index
            .and_then(|p| idx.iter().position(|&i| i == p));
        Self {
            values: idx.iter().map(|&i| self.values[i]).collect(),
            perron_index,
        }
    }

    /// Concatenation; the Perron marker of `self` is kept.
    pub fn union(&self, other: &Spectrum) -> Self {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Self {
            values,
            perron_index: self.perron_index,
        }
    }

    /// Removes one copy of the entry closest to `value`, provided it lies
    /// within `tol`. Returns the removed entry.
    pub fn remove_closest(&mut self, value: Complex64, tol: f64) -> Option<Complex64> {
        let (pos, dist) = self
            .values
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - value).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))?;
        if dist > tol {
            return None;
        }
        self.perron_index = match self.perron_index {
            Some(p) if p == pos => None,
            Some(p) if p > pos => Some(p - 1),
            other => other,
        };
        Some(self.values.remove(pos))
    }

    /// Sets imaginary parts with `|im| <= tol` to zero.
    pub fn snap_real(mut self, tol: f64) -> Self {
        for z in &mut self.values {
            if z.im.abs() <= tol {
                z.im = 0.0;
            }
        }
        self
    }
}

impl FromIterator<Complex64> for Spectrum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
            perron_index: None,
        }
    }
}

/// A real eigenvalue with a unit-norm real eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl EigenPair {
    /// Normalizes `vector` to unit Euclidean length.
    pub fn new(value: f64, vector: Vec<f64>) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::Empty("eigenvector"));
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        if let Some(i) = vector.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero eigenvector".into()));
        }
        Ok(Self {
            value,
            vector: vector.into_iter().map(|x| x / norm).collect(),
        })
    }

    /// `(value, (1, ..., 1) / sqrt(n))`.
    pub fn uniform(value: f64, n: usize) -> Self {
        assert!(n > 0);
        Self {
            value,
            vector: vec![1.0 / (n as f64).sqrt(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }

    /// `|m v - value v|_2`.
    pub fn residual(&self, m: &DenseMatrix) -> Result<f64> {
        let mv = m.matvec(&self.vector)?;
        Ok(mv
            .iter()
            .zip(&self.vector)
            .map(|(a, b)| (a - self.value * b).powi(2))
            .sum::<f64>()
            .sqrt())
    }

    /// Errors if the residual exceeds `rel_tol * (1 + |m|_max)`.
    pub fn check_against(&self, m: &DenseMatrix, rel_tol: f64, context: &str) -> Result<()> {
        m.ensure_square()?;
        let residual = self.residual(m)?;
        let bound = rel_tol * (1.0 + m.max_abs());
        if residual > bound {
            return Err(Error::EigenpairResidual {
                context: context.to_string(),
                residual,
                bound,
            });
        }
        Ok(())
    }
}
