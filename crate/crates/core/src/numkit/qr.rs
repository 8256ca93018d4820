use num_complex::Complex64;

use super::{DenseMatrix, Spectrum};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`qr_eigs_small`].
pub const QR_DIM_LIMIT: usize = 64;

/// Eigenvalues of a small real matrix: Householder reduction to upper
/// Hessenberg form, then complex single-shift QR with Wilkinson shifts and
/// deflation. Trailing 2x2 blocks are solved in closed form.
///
/// The total number of QR sweeps is capped at `30 * dim`. Imaginary parts
/// at rounding level are flushed to zero; results are in canonical order.
pub fn qr_eigs_small(m: &DenseMatrix) -> Result<Spectrum> {
    m.ensure_square()?;
    let n = m.rows();
    if n > QR_DIM_LIMIT {
        return Err(Error::TooLarge {
            op: "qr_eigs_small",
            dim: n,
            limit: QR_DIM_LIMIT,
        });
    }

    let hess = hessenberg(m);
    let mut h = ComplexHessenberg::from_real(&hess);
    let mut eigs = h.eigenvalues(30 * n)?;

    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for z in &mut eigs {
        if z.im.abs() <= 64.0 * f64::EPSILON * scale {
            z.im = 0.0;
        }
    }
    pair_conjugates(&mut eigs);
    Ok(Spectrum::new(eigs)?.sorted())
}

/// A real matrix has a spectrum closed under conjugation; make each
/// computed pair exactly conjugate so ordering is stable.
fn pair_conjugates(eigs: &mut [Complex64]) {
    let mut used = vec![false; eigs.len()];
    for i in 0..eigs.len() {
        if used[i] || eigs[i].im <= 0.0 {
            continue;
        }
        let target = eigs[i].conj();
        let partner = (0..eigs.len())
            .filter(|&j| !used[j] && j != i && eigs[j].im < 0.0)
            .min_by(|&a, &b| (eigs[a] - target).norm().total_cmp(&(eigs[b] - target).norm()));
        if let Some(j) = partner {
            let re = 0.5 * (eigs[i].re + eigs[j].re);
            let im = 0.5 * (eigs[i].im - eigs[j].im);
            eigs[i] = Complex64::new(re, im);
            eigs[j] = Complex64::new(re, -im);
            used[i] = true;
            used[j] = true;
        }
    }
}

/// Orthogonal similarity to upper Hessenberg form.
fn hessenberg(m: &DenseMatrix) -> DenseMatrix {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = ((k + 1)..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 >= 0.0 { -alpha_norm } else { alpha_norm };
        let mut v: Vec<f64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- (I - 2vv^T/|v|^2) A
        for j in 0..n {
            let dot: f64 = v.iter().enumerate().map(|(t, vt)| vt * a[(k + 1 + t, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= f * vt;
            }
        }
        // A <- A (I - 2vv^T/|v|^2)
        for i in 0..n {
            let dot: f64 = v.iter().enumerate().map(|(t, vt)| vt * a[(i, k + 1 + t)]).sum();
            let f = 2.0 * dot / vnorm2;
            for (t, vt) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= f * vt;
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
    a
}

struct ComplexHessenberg {
    n: usize,
    h: Vec<Complex64>,
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

impl ComplexHessenberg {
    fn from_real(m: &DenseMatrix) -> Self {
        Self {
            n: m.rows(),
            h: m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.h[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.h[i * self.n + j]
    }

    fn eigenvalues(&mut self, budget: usize) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut eigs = vec![Complex64::new(0.0, 0.0); n];
        let norm = self.h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);

        let mut sweeps = 0usize;
        let mut since_deflation = 0usize;
        // active window is lo..=hi; everything above hi is deflated
        let mut hi = n; // exclusive end
        while hi > 0 {
            let last = hi - 1;
            let lo = self.split_point(last, tiny);

            if lo == last {
                eigs[last] = self.at(last, last);
                hi -= 1;
                since_deflation = 0;
                continue;
            }
            if lo + 1 == last {
                let (a, b) = self.eig2(lo);
                eigs[lo] = a;
                eigs[last] = b;
                hi -= 2;
                since_deflation = 0;
                continue;
            }
            if sweeps >= budget {
                return Err(Error::NoConvergence {
                    method: "shifted QR",
                    iterations: sweeps,
                });
            }
            sweeps += 1;
            since_deflation += 1;

            let shift = if since_deflation.is_multiple_of(11) {
                // exceptional shift to break cycles
                self.at(last, last)
                    + Complex64::new(
                        self.at(last, last - 1).norm() + self.at(last - 1, last - 2).norm(),
                        0.5 * self.at(last, last - 1).norm(),
                    )
            } else {
                self.wilkinson_shift(last)
            };
            self.qr_step(lo, last, shift);
        }
        Ok(eigs)
    }

    /// Start of the unreduced block ending at `last`; negligible
    /// subdiagonal entries are zeroed.
    fn split_point(&mut self, last: usize, tiny: f64) -> usize {
        let mut l = last;
        while l > 0 {
            let sub = l1(self.at(l, l - 1));
            let diag = l1(self.at(l - 1, l - 1)) + l1(self.at(l, l));
            if sub <= f64::EPSILON * diag || sub <= tiny {
                *self.at_mut(l, l - 1) = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        l
    }

    /// Eigenvalues of the 2x2 block with top-left corner at `(k, k)`.
    fn eig2(&self, k: usize) -> (Complex64, Complex64) {
        let (a, b, c, d) = (
            self.at(k, k),
            self.at(k, k + 1),
            self.at(k + 1, k),
            self.at(k + 1, k + 1),
        );
        let half = (a - d) * 0.5;
        let disc = (half * half + b * c).sqrt();
        let mean = (a + d) * 0.5;
        let (e1, e2) = (mean + disc, mean - disc);
        // recover the smaller root from the determinant when it cancels
        let det = a * d - b * c;
        if e1.norm() >= e2.norm() && e1.norm() > 0.0 {
            let alt = det / e1;
            if e2.norm() < 1e-8 * e1.norm() {
                return (e1, alt);
            }
        } else if e2.norm() > 0.0 {
            let alt = det / e2;
            if e1.norm() < 1e-8 * e2.norm() {
                return (alt, e2);
            }
        }
        (e1, e2)
    }

    /// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
    fn wilkinson_shift(&self, last: usize) -> Complex64 {
        let (e1, e2) = self.eig2(last - 1);
        let d = self.at(last, last);
        if (e1 - d).norm() <= (e2 - d).norm() {
            e1
        } else {
            e2
        }
    }

    /// One shifted QR sweep on the window `lo..=hi` using Givens rotations.
    fn qr_step(&mut self, lo: usize, hi: usize, shift: Complex64) {
        for i in lo..=hi {
            *self.at_mut(i, i) -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = self.at(k, k);
            let b = self.at(k + 1, k);
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            // rows k, k+1 <- [[conj c, conj s], [-s, c]] * rows
            for j in k..=hi {
                let x = self.at(k, j);
                let y = self.at(k + 1, j);
                *self.at_mut(k, j) = c.conj() * x + s.conj() * y;
                *self.at_mut(k + 1, j) = -s * x + c * y;
            }
            *self.at_mut(k + 1, k) = Complex64::new(0.0, 0.0);
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            // columns k, k+1 <- columns * [[c, -conj s], [s, conj c]]
            for i in lo..=(k + 1).min(hi) {
                let x = self.at(i, k);
                let y = self.at(i, k + 1);
                *self.at_mut(i, k) = x * c + y * s;
                *self.at_mut(i, k + 1) = -x * s.conj() + y * c.conj();
            }
        }
        for i in lo..=hi {
            *self.at_mut(i, i) += shift;
        }
    }
}
