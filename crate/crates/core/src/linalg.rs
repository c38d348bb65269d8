//! Small-matrix numerical kernel: symmetric storage, a cyclic Jacobi
//! eigensolver for dimensions up to 8, PSD tests, and bracketed bisection.
//!
//! Everything here is dependency-free and deterministic; the rest of the
//! crate builds on these primitives.

use crate::error::{Error, Result};

/// A 2×2 real matrix in row-major storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn diag(x: f64, y: f64) -> Self {
        Mat2([[x, 0.0], [0.0, y]])
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Self {
        Mat2([
            [self.0[0][0], self.0[1][0]],
            [self.0[0][1], self.0[1][1]],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Inverse of a unit-determinant matrix (adjugate form).
    pub fn inv_unit_det(&self) -> Self {
        Mat2([
            [self.0[1][1], -self.0[0][1]],
            [-self.0[1][0], self.0[0][0]],
        ])
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

/// Symmetric matrix of dimension 2, 4, or 8 in packed lower-triangular
/// storage, so `get(i, j) == get(j, i)` holds exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 4 || n == 8 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "symmetric matrix dimension must be 2, 4 or 8, got {n}"
        )))
    }
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(d.len())?;
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        Ok(m)
    }

    /// Builds from a dense row-major slice of length n², averaging the two
    /// off-diagonal mirror entries.
    pub fn from_dense(n: usize, rows: &[f64]) -> Result<Self> {
        check_dim(n)?;
        if rows.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                rows.len()
            )));
        }
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, 0.5 * (rows[i * n + j] + rows[j * n + i]));
            }
        }
        Ok(m)
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Max-row-sum norm (equals the max-column-sum norm by symmetry).
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Result of [`sym_eigen`]: eigenvalues ascending, `vectors[k]` the
/// orthonormal eigenvector column paired with `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    /// Entry (i, j) of Q Λ Qᵀ.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(l, q)| l * q[i] * q[j])
            .sum()
    }
}

const MAX_SWEEPS: usize = 50;

/// Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigen(m: &SymMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "matrix has non-finite entries".into(),
        ));
    }
    let n = m.dim();
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for p in 0..n {
        v[p * n + p] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|p| a[p * n + p]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged = false;
    for sweep in 1..=MAX_SWEEPS {
        let mut sm = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                sm += a[p * n + q].abs();
            }
        }
        if sm == 0.0 {
            converged = true;
            break;
        }
        let thresh = if sweep < 4 {
            0.2 * sm / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = 100.0 * a[p * n + q].abs();
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                } else if a[p * n + q].abs() > thresh {
                    let mut h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        a[p * n + q] / h
                    } else {
                        let theta = 0.5 * h / a[p * n + q];
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    h = t * a[p * n + q];
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a[p * n + q] = 0.0;
                    let rot = |a: &mut Vec<f64>, i: usize, j: usize, k: usize, l: usize| {
                        let g = a[i * n + j];
                        let h = a[k * n + l];
                        a[i * n + j] = g - s * (h + g * tau);
                        a[k * n + l] = h + s * (g - h * tau);
                    };
                    for j in 0..p {
                        rot(&mut a, j, p, j, q);
                    }
                    for j in p + 1..q {
                        rot(&mut a, p, j, j, q);
                    }
                    for j in q + 1..n {
                        rot(&mut a, p, j, q, j);
                    }
                    for j in 0..n {
                        rot(&mut v, j, p, j, q);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    if !converged {
        // a final off-diagonal check: tiny residue is acceptable
        let mut sm = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                sm += a[p * n + q].abs();
            }
        }
        if sm > 1e-12 * (1.0 + m.inf_norm()) {
            return Err(Error::InvalidInput(
                "Jacobi iteration did not converge".into(),
            ));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|row| v[row * n + k]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Smallest eigenvalue of a small symmetric matrix.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(sym_eigen(m)?.values[0])
}

/// True iff the smallest eigenvalue is ≥ −tol.
pub fn is_psd(m: &SymMatrix, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    Ok(min_eigenvalue(m)? >= -tol)
}

const MAX_BISECT: usize = 500;

/// Bisection on a bracketed continuous function: returns x with
/// |f(x)| ≤ tol or with the final interval width ≤ tol.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidInput(format!(
            "bad bisection arguments: lo = {lo}, hi = {hi}, tol = {tol}"
        )));
    }
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo.abs() <= tol {
        return Ok(lo);
    }
    if fhi.abs() <= tol {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(Error::Bracket { lo, hi, flo, fhi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECT {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol || (hi - lo) <= tol {
            return Ok(mid);
        }
        if fm * flo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(mid)
}
