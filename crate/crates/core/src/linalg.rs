//! Small dense complex linear algebra.
//!
//! Provides the vectors and row-major matrices used throughout the crate, the
//! largest singular value via power iteration on the Gram matrix, and
//! eigenvalues of Hermitian matrices via Householder tridiagonalization
//! followed by implicit-shift QL. Everything here targets the tiny,
//! well-conditioned matrices that arise from few-qubit states.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default convergence tolerance for iterative routines.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap for the power iteration.
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Dense eigendecompositions are capped at this dimension (ten qubits).
pub const MAX_DENSE_DIM: usize = 1024;

fn check_finite(entries: &[Complex64]) -> Result<()> {
    for (index, z) in entries.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFiniteEntry { index });
        }
    }
    Ok(())
}

/// Dense complex vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("vector must not be empty".into()));
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(
                "matrix dimensions must be positive".into(),
            ));
        }
        if rows * cols != entries.len() {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.get(r, c) + a * rhs.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        let out = self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect();
        Ok(out)
    }

    pub fn trace(&self) -> Result<Complex64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Verify A = A† within `tol`; on failure report the worst entry pair.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst = 0.0;
        let mut worst_pair = (0, 0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                if dev > worst {
                    worst = dev;
                    worst_pair = (i, j);
                }
            }
        }
        if worst > tol {
            return Err(Error::NotHermitian {
                row: worst_pair.0,
                col: worst_pair.1,
                deviation: worst,
            });
        }
        Ok(())
    }
}

/// One converged power-iteration run.
#[derive(Debug, Clone)]
pub struct SingularValueRun {
    /// Largest singular value.
    pub value: f64,
    /// Iterations spent in the winning run.
    pub iterations: usize,
    /// Per-iteration singular-value estimates; non-decreasing.
    pub estimates: Vec<f64>,
}

/// Largest singular value of `m` by power iteration on the Gram matrix.
pub fn sigma_max(m: &ComplexMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    Ok(sigma_max_with_history(m, tol, max_iter)?.value)
}

/// Like [`sigma_max`] but keeps the per-iteration estimates of the winning run.
///
/// Runs from the deterministic all-ones start and once more from a perturbed
/// start, which escapes starts that happen to be orthogonal to the leading
/// singular vector; the larger converged estimate wins.
pub fn sigma_max_with_history(
    m: &ComplexMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<SingularValueRun> {
    if tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be positive".into()));
    }
    if m.frobenius_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }

    let gram = gram_smaller_side(m);
    let dim = gram.rows();
    let ones = vec![Complex64::new(1.0, 0.0); dim];
    let first = power_iteration(&gram, &ones, tol, max_iter);
    let second = power_iteration(&gram, &perturbed_start(dim), tol, max_iter);

    match (first, second) {
        (Ok(a), Ok(b)) => Ok(if b.value > a.value { b } else { a }),
        (Ok(a), Err(e)) | (Err(e), Ok(a)) => {
            // A run that stalled below an already-converged estimate cannot
            // have been chasing a larger singular value: estimates only grow.
            if failed_estimate(&e) <= a.value + tol {
                Ok(a)
            } else {
                Err(e)
            }
        }
        (Err(e1), Err(e2)) => {
            if failed_estimate(&e2) > failed_estimate(&e1) {
                Err(e2)
            } else {
                Err(e1)
            }
        }
    }
}

fn failed_estimate(e: &Error) -> f64 {
    match e {
        Error::NonConvergence { estimate, .. } => *estimate,
        _ => f64::INFINITY,
    }
}

/// Gram matrix of the smaller side: M·M† when rows ≤ cols, else M†·M.
fn gram_smaller_side(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    if rows <= cols {
        let mut g = ComplexMatrix::zeros(rows, rows);
        for i in 0..rows {
            for j in 0..=i {
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..cols {
                    sum += m.get(i, k) * m.get(j, k).conj();
                }
                g.set(i, j, sum);
                g.set(j, i, sum.conj());
            }
        }
        g
    } else {
        let mut g = ComplexMatrix::zeros(cols, cols);
        for i in 0..cols {
            for j in 0..=i {
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    sum += m.get(k, i).conj() * m.get(k, j);
                }
                g.set(i, j, sum);
                g.set(j, i, sum.conj());
            }
        }
        g
    }
}

/// All-ones start with deterministic pseudo-random noise mixed in.
fn perturbed_start(dim: usize) -> Vec<Complex64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut unit = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..dim)
        .map(|_| Complex64::new(1.0 + 0.5 * (unit() - 0.5), 0.5 * (unit() - 0.5)))
        .collect()
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration on a Hermitian PSD Gram matrix; returns σ = √λ_max.
///
/// The estimate ‖Gv‖ is monotonically non-decreasing, and the residual
/// ‖Gv − λv‖ bounds the distance of λ from the spectrum, so the stopping
/// criterion delivers the stated accuracy even for clustered eigenvalues.
fn power_iteration(
    gram: &ComplexMatrix,
    start: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<SingularValueRun> {
    let start_norm = vec_norm(start);
    if start_norm == 0.0 {
        return Err(Error::InvalidInput("start vector must be nonzero".into()));
    }
    let mut v: Vec<Complex64> = start.iter().map(|z| z / start_norm).collect();
    let mut estimates = Vec::new();
    let mut last_sigma = 0.0;
    let mut last_residual = f64::INFINITY;

    for it in 1..=max_iter {
        let w = gram.mul_vec(&v)?;
        let lambda = vec_norm(&w);
        let sigma = lambda.sqrt();
        estimates.push(sigma);
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda.max(1.0) {
            return Ok(SingularValueRun {
                value: sigma,
                iterations: it,
                estimates,
            });
        }
        if lambda == 0.0 {
            // start lies in the kernel; the caller's second start takes over
            return Err(Error::NonConvergence {
                iterations: it,
                estimate: 0.0,
                residual,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / lambda;
        }
        last_sigma = sigma;
        last_residual = residual;
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        estimate: last_sigma,
        residual: last_residual,
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `tol` is the Hermiticity validation threshold. Dense input is capped at
/// [`MAX_DENSE_DIM`].
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > MAX_DENSE_DIM {
        return Err(Error::DenseDimensionTooLarge {
            dim: m.rows(),
            max: MAX_DENSE_DIM,
        });
    }
    m.check_hermitian(tol)?;
    let (mut d, mut e) = tridiagonalize(m);
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    let eigs = hermitian_eigenvalues(m, tol)?;
    Ok(eigs[0])
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form; returns the diagonal and the off-diagonal magnitudes (eigenvalues
/// are invariant under the implicit diagonal phase similarity).
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows();
    let mut a = m.entries().to_vec();
    let idx = |r: usize, c: usize| r * n + c;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for j in 0..n.saturating_sub(2) {
        let x_norm_sqr: f64 = (j + 1..n).map(|i| a[idx(i, j)].norm_sqr()).sum();
        if x_norm_sqr == 0.0 {
            e[j] = 0.0;
            continue;
        }
        let x0 = a[idx(j + 1, j)];
        let alpha_mag = x_norm_sqr.sqrt();
        // Reflect the column onto −phase(x0)·‖x‖·e1 to avoid cancellation.
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * alpha_mag;
        e[j] = alpha_mag;

        let block = n - (j + 1);
        let mut u: Vec<Complex64> = (j + 1..n).map(|i| a[idx(i, j)]).collect();
        u[0] -= alpha;
        let u_norm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if u_norm_sqr <= f64::MIN_POSITIVE {
            continue;
        }
        let u_norm = u_norm_sqr.sqrt();
        for z in &mut u {
            *z /= u_norm;
        }

        // Hermitian rank-2 update of the trailing block:
        //   B ← B − v w† − w v†, with p = 2Bv and w = p − (v†p)v.
        let mut p = vec![Complex64::new(0.0, 0.0); block];
        for (r, pr) in p.iter_mut().enumerate() {
            let row = &a[idx(j + 1 + r, j + 1)..idx(j + 1 + r, j + 1) + block];
            *pr = row.iter().zip(&u).map(|(b, v)| b * v).sum::<Complex64>() * 2.0;
        }
        let vp: Complex64 = u.iter().zip(&p).map(|(v, pi)| v.conj() * pi).sum();
        let w: Vec<Complex64> = p.iter().zip(&u).map(|(pi, vi)| pi - vp.re * vi).collect();
        for r in 0..block {
            for c in 0..block {
                a[idx(j + 1 + r, j + 1 + c)] -= u[r] * w[c].conj() + w[r] * u[c].conj();
            }
        }
        a[idx(j + 1, j)] = alpha;
        for i in j + 2..n {
            a[idx(i, j)] = Complex64::new(0.0, 0.0);
        }
    }

    for i in 0..n {
        d[i] = a[idx(i, i)].re;
    }
    if n >= 2 {
        e[n - 2] = a[idx(n - 1, n - 2)].norm();
    }
    (d, e)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix (eigenvalues
/// only). `e[i]` couples `d[i]` and `d[i+1]`; `e[n-1]` is scratch.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = n - 1;
            for i in l..n - 1 {
                let dd = d[i].abs() + d[i + 1].abs();
                if e[i].abs() <= f64::EPSILON * dd {
                    m = i;
                    break;
                }
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonConvergence {
                    iterations: iter,
                    estimate: d[l],
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
