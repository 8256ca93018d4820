//! Doubly stochastic joins.
//!
//! Two doubly stochastic matrices `T1` (m x m) and `T2` (n x n, n >= m)
//! are joined through their common Perron vectors `e_m`, `e_n` (normalized
//! all-ones). Both joins stay doubly stochastic and have closed-form
//! spectra; neither needs `T1` or `T2` to be diagonalizable.

use num_complex::Complex64;

use crate::blockforge::{BlockSystem, SPECTRUM_MATCH_TOL};
use crate::error::{Error, Result};
use crate::numkit::{DenseMatrix, EigenPair, Spectrum};

/// Stochasticity gate applied to join inputs.
pub const DS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsCheck {
    pub ok: bool,
    /// Largest `|row sum - 1|` or `|column sum - 1|`.
    pub worst_residual: f64,
    pub min_entry: f64,
}

/// Entries `>= -tol` and every row and column sum within `tol` of one.
pub fn is_doubly_stochastic(m: &DenseMatrix, tol: f64) -> DsCheck {
    let min_entry = m.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    if !m.is_square() {
        return DsCheck {
            ok: false,
            worst_residual: f64::INFINITY,
            min_entry,
        };
    }
    let n = m.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let row: f64 = m.row(i).iter().sum();
        let col: f64 = (0..n).map(|r| m[(r, i)]).sum();
        worst = worst.max((row - 1.0).abs()).max((col - 1.0).abs());
    }
    DsCheck {
        ok: min_entry >= -tol && worst <= tol,
        worst_residual: worst,
        min_entry,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsJoinMode {
    /// Prefactor `1 / (alpha + rho n / sqrt(mn))`, blocks `alpha T1` and
    /// `(alpha + rho (n - m)/sqrt(mn)) T2`.
    Scaled,
    /// Prefactor `1 / (1 + alpha + rho n / sqrt(mn))`, blocks shifted by
    /// rank-one multiples of `e e^T`.
    Affine,
}

#[derive(Debug, Clone)]
pub struct DsJoinSpec {
    t1: DenseMatrix,
    t2: DenseMatrix,
    spec1: Spectrum,
    spec2: Spectrum,
    alpha: f64,
    rho: f64,
}

impl DsJoinSpec {
    /// `spec1`, `spec2` are the full spectra of `t1`, `t2`; each must
    /// contain the Perron root 1.
    pub fn new(
        t1: DenseMatrix,
        t2: DenseMatrix,
        spec1: Spectrum,
        spec2: Spectrum,
        alpha: f64,
        rho: f64,
    ) -> Result<Self> {
        for (name, t, s) in [("T1", &t1, &spec1), ("T2", &t2, &spec2)] {
            let check = is_doubly_stochastic(t, DS_TOL);
            if !check.ok {
                return Err(Error::InvalidInput(format!(
                    "{name} is not doubly stochastic (worst line-sum residual {:e}, min entry {})",
                    check.worst_residual, check.min_entry
                )));
            }
            if s.len() != t.rows() {
                return Err(Error::InvalidInput(format!(
                    "spectrum of {name} has {} entries, matrix has order {}",
                    s.len(),
                    t.rows()
                )));
            }
            if !s
                .values()
                .iter()
                .any(|z| (z - Complex64::new(1.0, 0.0)).norm() <= SPECTRUM_MATCH_TOL)
            {
                return Err(Error::InvalidInput(format!("spectrum of {name} does not contain 1")));
            }
        }
        if t1.rows() > t2.rows() {
            return Err(Error::InvalidInput(format!(
                "join needs m <= n, got m = {} and n = {}; swap T1 and T2",
                t1.rows(),
                t2.rows()
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite() && rho >= 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "alpha = {alpha} and rho = {rho} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            t1,
            t2,
            spec1,
            spec2,
            alpha,
            rho,
        })
    }

    pub fn t1(&self) -> &DenseMatrix {
        &self.t1
    }

    pub fn t2(&self) -> &DenseMatrix {
        &self.t2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn m(&self) -> usize {
        self.t1.rows()
    }

    pub fn n(&self) -> usize {
        self.t2.rows()
    }

    fn sqrt_mn(&self) -> f64 {
        ((self.m() * self.n()) as f64).sqrt()
    }

    fn retained(&self) -> (Spectrum, Spectrum) {
        let one = Complex64::new(1.0, 0.0);
        let mut a = self.spec1.clone();
        let mut b = self.spec2.clone();
        a.remove_closest(one, SPECTRUM_MATCH_TOL).expect("checked on construction");
        b.remove_closest(one, SPECTRUM_MATCH_TOL).expect("checked on construction");
        (a, b)
    }

    /// Overall prefactor of the join.
    pub fn prefactor(&self, mode: DsJoinMode) -> f64 {
        let base = self.alpha + self.rho * self.n() as f64 / self.sqrt_mn();
        match mode {
            DsJoinMode::Scaled => 1.0 / base,
            DsJoinMode::Affine => 1.0 / (1.0 + base),
        }
    }

    /// The join as a coupled two-block system; the join matrix is the
    /// assembled matrix times [`prefactor`](Self::prefactor).
    pub fn block_system(&self, mode: DsJoinMode) -> Result<BlockSystem> {
        let (m, n) = (self.m(), self.n());
        let beta = self.alpha + self.rho * (n as f64 - m as f64) / self.sqrt_mn();
        let (a1, a2, l1, l2, rho) = match mode {
            DsJoinMode::Scaled => (
                self.t1.scaled(self.alpha),
                self.t2.scaled(beta),
                self.alpha,
                beta,
                DenseMatrix::from_rows(&[[0.0, self.rho], [self.rho, 0.0]])?,
            ),
            DsJoinMode::Affine => (
                self.t1.clone(),
                self.t2.clone(),
                1.0,
                1.0,
                DenseMatrix::from_rows(&[[self.alpha, self.rho], [self.rho, beta]])?,
            ),
        };
        let scale_spec = |s: &Spectrum, f: f64| -> Spectrum { s.values().iter().map(|z| z * f).collect() };
        let (s1, s2) = match mode {
            DsJoinMode::Scaled => (scale_spec(&self.spec1, self.alpha), scale_spec(&self.spec2, beta)),
            DsJoinMode::Affine => (self.spec1.clone(), self.spec2.clone()),
        };
        BlockSystem::new(
            vec![a1, a2],
            vec![EigenPair::uniform(l1, m), EigenPair::uniform(l2, n)],
            vec![s1, s2],
            rho,
        )
    }
}

#[derive(Debug, Clone)]
pub struct DsJoin {
    pub matrix: DenseMatrix,
    /// Closed-form spectrum; entry 0 is the Perron root 1.
    pub predicted: Spectrum,
    pub mode: DsJoinMode,
}

/// Scaled join. Requires `alpha` and `rho` not both zero.
pub fn ds_join(spec: &DsJoinSpec) -> Result<DsJoin> {
    let (alpha, rho) = (spec.alpha, spec.rho);
    if alpha == 0.0 && rho == 0.0 {
        return Err(Error::InvalidInput(
            "scaled join needs alpha and rho not both zero".into(),
        ));
    }
    let (m, n) = (spec.m() as f64, spec.n() as f64);
    let smn = spec.sqrt_mn();
    let pre = spec.prefactor(DsJoinMode::Scaled);
    let beta = alpha + rho * (n - m) / smn;
    let cross = rho / smn;
    let matrix = join_matrix(spec, |t1| t1 * alpha, |t2| t2 * beta, 0.0, 0.0, cross, pre);

    let second = (alpha * smn - rho * m) / (alpha * smn + rho * n);
    let f1 = alpha * pre;
    let f2 = (alpha * smn + rho * (n - m)) / (alpha * smn + rho * n);
    Ok(DsJoin {
        matrix,
        predicted: predicted_list(spec, second, f1, f2)?,
        mode: DsJoinMode::Scaled,
    })
}

/// Affine join; `alpha = rho = 0` is allowed and returns `T1 (+) T2`.
pub fn ds_join_affine(spec: &DsJoinSpec) -> Result<DsJoin> {
    let (alpha, rho) = (spec.alpha, spec.rho);
    let (m, n) = (spec.m() as f64, spec.n() as f64);
    let smn = spec.sqrt_mn();
    let pre = spec.prefactor(DsJoinMode::Affine);
    let beta = alpha + rho * (n - m) / smn;
    let matrix = join_matrix(spec, |t1| t1, |t2| t2, alpha / m, beta / n, rho / smn, pre);

    let second = ((1.0 + alpha) * smn - rho * m) / ((1.0 + alpha) * smn + rho * n);
    Ok(DsJoin {
        matrix,
        predicted: predicted_list(spec, second, pre, pre)?,
        mode: DsJoinMode::Affine,
    })
}

pub fn join(spec: &DsJoinSpec, mode: DsJoinMode) -> Result<DsJoin> {
    match mode {
        DsJoinMode::Scaled => ds_join(spec),
        DsJoinMode::Affine => ds_join_affine(spec),
    }
}

/// `pre * [[f1(T1) + shift1 J, cross J], [cross J, f2(T2) + shift2 J]]`
fn join_matrix(
    spec: &DsJoinSpec,
    f1: impl Fn(f64) -> f64,
    f2: impl Fn(f64) -> f64,
    shift1: f64,
    shift2: f64,
    cross: f64,
    pre: f64,
) -> DenseMatrix {
    let (m, n) = (spec.m(), spec.n());
    let mut d = DenseMatrix::zeros(m + n, m + n);
    for i in 0..m + n {
        for j in 0..m + n {
            d[(i, j)] = pre
                * match (i < m, j < m) {
                    (true, true) => f1(spec.t1[(i, j)]) + shift1,
                    (false, false) => f2(spec.t2[(i - m, j - m)]) + shift2,
                    _ => cross,
                };
        }
    }
    d
}

fn predicted_list(spec: &DsJoinSpec, second: f64, f1: f64, f2: f64) -> Result<Spectrum> {
    let (rest1, rest2) = spec.retained();
    let mut values = vec![Complex64::new(1.0, 0.0), Complex64::new(second, 0.0)];
    values.extend(rest1.values().iter().map(|z| z * f1));
    values.extend(rest2.values().iter().map(|z| z * f2));
    Spectrum::new(values)?.with_perron(0)
}
