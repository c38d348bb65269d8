//! Reduction of a covariance matrix to the four-parameter standard form
//! diag-block(aI, bI) with C = diag(c1, c2), by per-mode rotations, squeezes,
//! and a final pair of rotations that diagonalizes the cross block.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::symplectic::{apply, rotation, squeeze, CovarianceMatrix, LocalSymplectic};

/// The standard form (a, b, c1, c2): A = aI, B = bI, C = diag(c1, c2).
///
/// Canonical gauge: c1 ≥ |c2| ≥ 0; c2 carries the sign of det C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl StandardForm {
    pub fn new(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        StandardForm { a, b, c1, c2 }
    }

    pub fn vacuum() -> Self {
        StandardForm::new(0.5, 0.5, 0.0, 0.0)
    }

    /// Two-mode squeezed vacuum with squeezing parameter r:
    /// a = b = cosh(2r)/2, c1 = -c2 = sinh(2r)/2.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        StandardForm::new(0.5 * ch, 0.5 * ch, 0.5 * sh, -0.5 * sh)
    }

    pub fn is_canonical(&self) -> bool {
        self.c1 >= self.c2.abs()
    }

    /// The same state in the canonical gauge: |c1| ≥ |c2| (swap both modes by
    /// a π/2 rotation if needed) and c1 ≥ 0 (rotate mode 2 by π if needed).
    pub fn canonicalized(&self) -> StandardForm {
        let (mut c1, mut c2) = (self.c1, self.c2);
        if c1.abs() < c2.abs() {
            std::mem::swap(&mut c1, &mut c2);
        }
        if c1 < 0.0 {
            c1 = -c1;
            c2 = -c2;
        }
        StandardForm::new(self.a, self.b, c1, c2)
    }
}

/// Outcome of [`reduce`]: the standard form and the local symplectic S with
/// S V Sᵀ in standard form.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub form: StandardForm,
    pub transform: LocalSymplectic,
}

/// The doubled-normalization parameters (n, m, c, c′) with M = 2V, parties
/// relabeled so that n ≥ m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgczForm {
    pub n: f64,
    pub m: f64,
    pub c: f64,
    pub cprime: f64,
}

const PD_TOL: f64 = 1e-12;

/// Jacobi rotation angle |θ| ≤ π/4 such that R(θ) M R(θ)ᵀ is diagonal, for
/// symmetric 2×2 M. Returns 0 for an already-diagonal matrix, which keeps the
/// reduction deterministic in the degenerate cases.
fn jacobi_angle(m: &Mat2) -> f64 {
    let m12 = 0.5 * (m.0[0][1] + m.0[1][0]);
    if m12 == 0.0 {
        return 0.0;
    }
    let tau = (m.0[0][0] - m.0[1][1]) / (2.0 * m12);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    t.atan()
}

/// Reduces V to standard form. The sequence follows the classic construction:
/// rotate each mode to diagonalize A and B, squeeze to make them proportional
/// to the identity, rotate both modes to diagonalize C, then fix the gauge.
pub fn reduce(v: &CovarianceMatrix) -> Result<ReductionResult> {
    let mut cur = *v;
    let mut total = LocalSymplectic::identity();
    let step = |s: LocalSymplectic, cur: &mut CovarianceMatrix, total: &mut LocalSymplectic| {
        *cur = apply(&s, cur);
        *total = s.compose(total);
    };

    // 1. rotate each mode so A and B become diagonal
    let r1 = rotation(jacobi_angle(&cur.a_block()));
    let r2 = rotation(jacobi_angle(&cur.b_block()));
    step(LocalSymplectic { s1: r1, s2: r2 }, &mut cur, &mut total);

    // 2. squeeze each mode so A -> sqrt(det A) I, B -> sqrt(det B) I
    let a = cur.a_block();
    let b = cur.b_block();
    let scale = v.max_abs().max(1.0);
    for (name, d1, d2) in [("A", a.0[0][0], a.0[1][1]), ("B", b.0[0][0], b.0[1][1])] {
        if d1 <= PD_TOL * scale || d2 <= PD_TOL * scale {
            return Err(Error::NotAState(format!(
                "block {name} is not positive definite"
            )));
        }
    }
    let x1 = (a.0[1][1] / a.0[0][0]).powf(0.25);
    let x2 = (b.0[1][1] / b.0[0][0]).powf(0.25);
    step(
        LocalSymplectic {
            s1: squeeze(x1)?,
            s2: squeeze(x2)?,
        },
        &mut cur,
        &mut total,
    );

    // 3. diagonalize C by one rotation per mode; A ∝ I and B ∝ I are
    //    invariant under these. Right rotation from CᵀC, left rotation from
    //    the normalized columns of C W ᵀ.
    let c = cur.c_block();
    let ctc = c.transpose().mul(&c);
    let w = rotation(jacobi_angle(&ctc));
    let cp = c.mul(&w.transpose());
    let col = |m: &Mat2, k: usize| [m.0[0][k], m.0[1][k]];
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let (s1c, s2c);
    let c_scale = cp.max_abs();
    if c_scale <= 1e-14 * scale {
        s1c = Mat2::IDENTITY;
        s2c = Mat2::IDENTITY;
    } else {
        let (n0, n1) = (norm(col(&cp, 0)), norm(col(&cp, 1)));
        let u = if n1 <= 1e-14 * c_scale {
            // rank one: complete the first column to a rotation
            let u0 = [cp.0[0][0] / n0, cp.0[1][0] / n0];
            Mat2([[u0[0], -u0[1]], [u0[1], u0[0]]])
        } else if n0 <= 1e-14 * c_scale {
            let u1 = [cp.0[0][1] / n1, cp.0[1][1] / n1];
            Mat2([[u1[1], u1[0]], [-u1[0], u1[1]]])
        } else {
            let mut u = Mat2([
                [cp.0[0][0] / n0, cp.0[0][1] / n1],
                [cp.0[1][0] / n0, cp.0[1][1] / n1],
            ]);
            if u.det() < 0.0 {
                // absorb the reflection into the sign of the second
                // singular value
                u.0[0][1] = -u.0[0][1];
                u.0[1][1] = -u.0[1][1];
            }
            u
        };
        s1c = u.transpose();
        s2c = w;
    }
    step(LocalSymplectic { s1: s1c, s2: s2c }, &mut cur, &mut total);

    // 4. gauge fixing: order |c1| ≥ |c2| by a π/2 rotation of both modes,
    //    then make c1 ≥ 0 by a π rotation of mode 2 (flips both signs)
    if cur.get(0, 2).abs() < cur.get(1, 3).abs() {
        let q = rotation(std::f64::consts::FRAC_PI_2);
        step(LocalSymplectic { s1: q, s2: q }, &mut cur, &mut total);
    }
    if cur.get(0, 2) < 0.0 {
        let half = rotation(std::f64::consts::PI);
        step(
            LocalSymplectic {
                s1: Mat2::IDENTITY,
                s2: half,
            },
            &mut cur,
            &mut total,
        );
    }

    let form = StandardForm::new(
        0.5 * (cur.get(0, 0) + cur.get(1, 1)),
        0.5 * (cur.get(2, 2) + cur.get(3, 3)),
        cur.get(0, 2),
        cur.get(1, 3),
    );
    Ok(ReductionResult {
        form,
        transform: total,
    })
}

/// Materializes the 4×4 standard-form matrix.
pub fn from_standard(form: &StandardForm) -> CovarianceMatrix {
    CovarianceMatrix::from_blocks(
        Mat2::diag(form.a, form.a),
        Mat2::diag(form.b, form.b),
        Mat2::diag(form.c1, form.c2),
    )
    .expect("standard form matrices are symmetric by construction")
}

/// Converts to the doubled normalization M = 2V with n = 2a, m = 2b, parties
/// relabeled so n ≥ m ≥ 1.
pub fn to_dgcz(form: &StandardForm) -> Result<DgczForm> {
    let f = form.canonicalized();
    if f.a < 0.5 - 1e-12 || f.b < 0.5 - 1e-12 {
        return Err(Error::NotPhysical(format!(
            "mode variances a = {}, b = {} below the vacuum floor 1/2",
            f.a, f.b
        )));
    }
    // clamp roundoff below the floor so that n, m >= 1 holds exactly
    let n = (2.0 * f.a.max(f.b)).max(1.0);
    let m = (2.0 * f.a.min(f.b)).max(1.0);
    Ok(DgczForm {
        n,
        m,
        c: 2.0 * f.c1,
        cprime: 2.0 * f.c2,
    })
}
