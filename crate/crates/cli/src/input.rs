//! JSON input schema.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use spectral_forge::graphspec::{Graph, RegularGraph};
use spectral_forge::numkit::jacobi_eigs;
use spectral_forge::{Complex64, DenseMatrix, EigenPair, Spectrum};

use crate::CliError;

const SYM_TOL: f64 = 1e-12;
const EIG_TOL: f64 = 1e-14;

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Value> for Complex64 {
    fn from(v: Value) -> Self {
        match v {
            Value::Real(re) => Complex64::new(re, 0.0),
            Value::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub matrix: Vec<Vec<f64>>,
    pub spectrum: Option<Vec<Value>>,
    pub eigenvalue: Option<f64>,
    pub eigenvector: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub blocks: Vec<BlockSpec>,
    pub rho: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsFile {
    pub t1: Vec<Vec<f64>>,
    pub t2: Vec<Vec<f64>>,
    pub spec1: Option<Vec<Value>>,
    pub spec2: Option<Vec<Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<f64>>,
    pub spectrum: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub spectrum: Vec<Value>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> Result<RegularGraph, CliError> {
    let g = Graph::parse_edge_list(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    RegularGraph::new(g).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn matrix(field: &str, rows: &[Vec<f64>]) -> Result<DenseMatrix, CliError> {
    DenseMatrix::from_rows(rows).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

pub fn spectrum(field: &str, values: &[Value]) -> Result<Spectrum, CliError> {
    Spectrum::new(values.iter().map(|&v| v.into()).collect())
        .map_err(|e| CliError::Input(format!("{field}: {e}")))
}

/// Uses `given` if present; symmetric matrices fall back to Jacobi.
pub fn spectrum_or_jacobi(
    field: &str,
    m: &DenseMatrix,
    given: Option<&[Value]>,
) -> Result<Spectrum, CliError> {
    match given {
        Some(v) => spectrum(field, v),
        None if m.is_symmetric(SYM_TOL) => Ok(jacobi_eigs(m, EIG_TOL)?.spectrum),
        None => Err(CliError::Input(format!(
            "{field} is required for a nonsymmetric matrix"
        ))),
    }
}

pub struct Block {
    pub matrix: DenseMatrix,
    pub spectrum: Spectrum,
    /// Only what the input spelled out.
    pub given_pair: Option<EigenPair>,
}

impl Block {
    /// The supplied eigenpair, or for a symmetric block the Jacobi pair
    /// for `eigenvalue` (or the largest eigenvalue), signed so its entries
    /// sum to a nonnegative number.
    pub fn pair(&self, index: usize, spec: &BlockSpec) -> Result<EigenPair, CliError> {
        if let Some(p) = &self.given_pair {
            return Ok(p.clone());
        }
        if !self.matrix.is_symmetric(SYM_TOL) {
            let missing = if spec.eigenvalue.is_none() { "eigenvalue" } else { "eigenvector" };
            return Err(CliError::Input(format!(
                "blocks[{index}].{missing} is required for a nonsymmetric matrix"
            )));
        }
        let eig = jacobi_eigs(&self.matrix, EIG_TOL)?;
        let vals = eig.values();
        let col = match spec.eigenvalue {
            Some(t) => (0..vals.len())
                .min_by(|&a, &b| (vals[a] - t).abs().total_cmp(&(vals[b] - t).abs()))
                .expect("nonempty"),
            None => 0,
        };
        let mut v = eig.vectors.col(col);
        let sum: f64 = v.iter().sum();
        let first = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if sum < -1e-12 || (sum.abs() <= 1e-12 && first < 0.0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(EigenPair::new(spec.eigenvalue.unwrap_or(vals[col]), v)?)
    }
}

pub fn block(index: usize, spec: &BlockSpec) -> Result<Block, CliError> {
    let matrix = matrix(&format!("blocks[{index}].matrix"), &spec.matrix)?;
    let spectrum = spectrum_or_jacobi(
        &format!("blocks[{index}].spectrum"),
        &matrix,
        spec.spectrum.as_deref(),
    )?;
    let given_pair = match (spec.eigenvalue, &spec.eigenvector) {
        (Some(value), Some(v)) => Some(
            EigenPair::new(value, v.clone())
                .map_err(|e| CliError::Input(format!("blocks[{index}].eigenvector: {e}")))?,
        ),
        _ => None,
    };
    Ok(Block {
        matrix,
        spectrum,
        given_pair,
    })
}
