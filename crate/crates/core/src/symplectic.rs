//! The local group Sp(2,R)⊗Sp(2,R): generators, a validated covariance-matrix
//! container in (q1, p1, q2, p2) ordering, and the congruence action
//! A → S1 A S1ᵀ, B → S2 B S2ᵀ, C → S1 C S2ᵀ on the 2×2 blocks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// The 2×2 symplectic unit J = [[0, 1], [-1, 0]] and its two-mode
/// block-diagonal extension Omega = J ⊕ J.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticForm {
    pub j: Mat2,
    pub omega: [[f64; 4]; 4],
}

impl SymplecticForm {
    pub fn new() -> Self {
        let j = Mat2([[0.0, 1.0], [-1.0, 0.0]]);
        let mut omega = [[0.0; 4]; 4];
        for (block, base) in [(j, 0), (j, 2)] {
            for i in 0..2 {
                for k in 0..2 {
                    omega[base + i][base + k] = block.0[i][k];
                }
            }
        }
        SymplecticForm { j, omega }
    }
}

impl Default for SymplecticForm {
    fn default() -> Self {
        Self::new()
    }
}

/// 4×4 real symmetric second-moment matrix of a two-mode state, with block
/// decomposition V = [[A, C], [Cᵀ, B]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    m: [[f64; 4]; 4],
}

impl CovarianceMatrix {
    /// Accepts a matrix whose asymmetry is at most 1e-8 relative and stores
    /// the exactly symmetrized average.
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        let mut scale = 0.0_f64;
        for r in &rows {
            for x in r {
                if !x.is_finite() {
                    return Err(Error::InvalidInput(
                        "covariance matrix has non-finite entries".into(),
                    ));
                }
                scale = scale.max(x.abs());
            }
        }
        let tol = 1e-8 * scale.max(1.0);
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if (rows[i][j] - rows[j][i]).abs() > tol {
                    return Err(Error::InvalidInput(format!(
                        "covariance matrix is not symmetric at ({i}, {j})"
                    )));
                }
                m[i][j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        Ok(CovarianceMatrix { m })
    }

    pub fn from_blocks(a: Mat2, b: Mat2, c: Mat2) -> Result<Self> {
        let mut rows = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                rows[i][j] = a.0[i][j];
                rows[2 + i][2 + j] = b.0[i][j];
                rows[i][2 + j] = c.0[i][j];
                rows[2 + j][i] = c.0[i][j];
            }
        }
        Self::new(rows)
    }

    /// Vacuum state, V = I/2.
    pub fn vacuum() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 0.5;
        }
        CovarianceMatrix { m }
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    /// Mode-1 block A.
    pub fn a_block(&self) -> Mat2 {
        Mat2([[self.m[0][0], self.m[0][1]], [self.m[1][0], self.m[1][1]]])
    }

    /// Mode-2 block B.
    pub fn b_block(&self) -> Mat2 {
        Mat2([[self.m[2][2], self.m[2][3]], [self.m[3][2], self.m[3][3]]])
    }

    /// Cross block C.
    pub fn c_block(&self) -> Mat2 {
        Mat2([[self.m[0][2], self.m[0][3]], [self.m[1][2], self.m[1][3]]])
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

/// A pair of unit-determinant 2×2 matrices acting independently per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSymplectic {
    pub s1: Mat2,
    pub s2: Mat2,
}

impl LocalSymplectic {
    pub fn new(s1: Mat2, s2: Mat2) -> Result<Self> {
        for (name, s) in [("S1", &s1), ("S2", &s2)] {
            if !s.is_finite() {
                return Err(Error::InvalidInput(format!("{name} is not finite")));
            }
            if (s.det() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "{name} has determinant {} instead of 1",
                    s.det()
                )));
            }
        }
        Ok(LocalSymplectic { s1, s2 })
    }

    pub fn identity() -> Self {
        LocalSymplectic {
            s1: Mat2::IDENTITY,
            s2: Mat2::IDENTITY,
        }
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &LocalSymplectic) -> Self {
        LocalSymplectic {
            s1: self.s1.mul(&other.s1),
            s2: self.s2.mul(&other.s2),
        }
    }

    pub fn inverse(&self) -> Self {
        LocalSymplectic {
            s1: self.s1.inv_unit_det(),
            s2: self.s2.inv_unit_det(),
        }
    }
}

/// Rotation element of Sp(2,R): [[cos θ, sin θ], [-sin θ, cos θ]].
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2([[c, s], [-s, c]])
}

/// Squeeze element of Sp(2,R): diag(x, 1/x) for x > 0.
pub fn squeeze(x: f64) -> Result<Mat2> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "squeeze factor must be positive and finite, got {x}"
        )));
    }
    Ok(Mat2::diag(x, 1.0 / x))
}

/// Congruence action of a local symplectic pair on a covariance matrix.
pub fn apply(s: &LocalSymplectic, v: &CovarianceMatrix) -> CovarianceMatrix {
    let a = s.s1.mul(&v.a_block()).mul(&s.s1.transpose());
    let b = s.s2.mul(&v.b_block()).mul(&s.s2.transpose());
    let c = s.s1.mul(&v.c_block()).mul(&s.s2.transpose());
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            // A and B are symmetric up to rounding; store the exact average
            m[i][j] = 0.5 * (a.0[i][j] + a.0[j][i]);
            m[2 + i][2 + j] = 0.5 * (b.0[i][j] + b.0[j][i]);
            m[i][2 + j] = c.0[i][j];
            m[2 + j][i] = c.0[i][j];
        }
    }
    CovarianceMatrix { m }
}

/// ‖S J Sᵀ − J‖∞ ≤ tol.
pub fn is_symplectic(s: &Mat2, tol: f64) -> bool {
    let j = SymplecticForm::new().j;
    let r = s.mul(&j).mul(&s.transpose());
    let mut err = 0.0_f64;
    for i in 0..2 {
        for k in 0..2 {
            err = err.max((r.0[i][k] - j.0[i][k]).abs());
        }
    }
    err <= tol
}

/// Deterministic random element of Sp(2,R)⊗Sp(2,R): each factor is
/// rotation·squeeze·rotation with angles uniform in [0, 2π) and the log of
/// the squeeze factor uniform in [-spread, spread].
pub fn random_local_symplectic(seed: u64, spread: f64) -> LocalSymplectic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor = |rng: &mut ChaCha8Rng| {
        let t1 = rng.gen_range(0.0..std::f64::consts::TAU);
        let u = rng.gen_range(-spread..=spread);
        let t2 = rng.gen_range(0.0..std::f64::consts::TAU);
        rotation(t1)
            .mul(&squeeze(u.exp()).expect("exp(u) > 0"))
            .mul(&rotation(t2))
    };
    let s1 = factor(&mut rng);
    let s2 = factor(&mut rng);
    LocalSymplectic { s1, s2 }
}

/// Mirror move on mode 2: B → S3 B S3, C → C S3 with S3 = diag(1, -1).
/// On a standard-form matrix this flips the sign of c2 (and of det C).
pub fn mirror_c2(v: &CovarianceMatrix) -> CovarianceMatrix {
    let s3 = Mat2::diag(1.0, -1.0);
    let b = s3.mul(&v.b_block()).mul(&s3);
    let c = v.c_block().mul(&s3);
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = v.m[i][j];
            m[2 + i][2 + j] = 0.5 * (b.0[i][j] + b.0[j][i]);
            m[i][2 + j] = c.0[i][j];
            m[2 + j][i] = c.0[i][j];
        }
    }
    CovarianceMatrix { m }
}
