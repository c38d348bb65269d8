//! Squeezed-frame P-representation analysis: the extremal squeezing
//! parameters (r1, r2) as explicit functions of (a, b, t = |c2|/c1), the
//! four-eigenvalue positivity test, the coincidence identity between the
//! saturated positivity bound and the separability bound, the Gaussian
//! characteristic function, and sampling from the certificate P-function.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::criteria::c1sq_bound;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, SymMatrix};
use crate::standard_form::StandardForm;
use crate::symplectic::CovarianceMatrix;

/// Per-mode squeezing factors together with the ray parameter t they were
/// derived for. Always satisfies 1 ≤ r1 ≤ 2a and 1 ≤ r2 ≤ 2b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r1: f64,
    pub r2: f64,
    pub t: f64,
}

/// Zero-mean Gaussian P-function parameters: `cov` is the classical
/// covariance V' - I/2 of the squeezed-frame state V'.
#[derive(Debug, Clone)]
pub struct PFunctionParams {
    pub mean: [f64; 4],
    pub cov: SymMatrix,
}

/// Constructive separability certificate: squeezing parameters, the Gaussian
/// P-function they induce, and the four closed-form eigenvalues whose
/// nonnegativity is the P-representation condition.
#[derive(Debug, Clone)]
pub struct PrepCertificate {
    pub squeeze: SqueezeParams,
    pub pfun: PFunctionParams,
    pub lambda_eigs: [f64; 4],
}

fn check_ab_t(a: f64, b: f64, t: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() || a < 0.5 || b < 0.5 {
        return Err(Error::InvalidInput(format!(
            "mode variances must satisfy a, b >= 1/2, got a = {a}, b = {b}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!(
            "t must lie in [0, 1], got {t}"
        )));
    }
    Ok(())
}

fn sqrt_disc(a: f64, b: f64, t: f64) -> f64 {
    let g = a * b * (1.0 - t * t);
    (g * g + t * (a + b * t) * (a * t + b)).sqrt()
}

/// Extremal squeezing parameters:
/// r1 = (ab(1-t²) + sqrt(a²b²(1-t²)² + t(a+bt)(at+b))) / (at+b),
/// r2 the same with the denominator a+bt. Endpoints: t=1 gives r1=r2=1,
/// t=0 gives r1=2a, r2=2b.
pub fn squeeze_params(a: f64, b: f64, t: f64) -> Result<SqueezeParams> {
    check_ab_t(a, b, t)?;
    let g = a * b * (1.0 - t * t);
    let d = sqrt_disc(a, b, t);
    Ok(SqueezeParams {
        r1: (g + d) / (a * t + b),
        r2: (g + d) / (a + b * t),
        t,
    })
}

/// The four eigenvalues of the standard-form matrix shifted by
/// -diag(1/r1, r1, 1/r2, r2)/2, in the order [λ1+, λ1-, λ2+, λ2-].
pub fn lambda_eigs(form: &StandardForm, r1: f64, r2: f64) -> [f64; 4] {
    let p = form.a - 0.5 / r1;
    let q = form.b - 0.5 / r2;
    let s = form.a - 0.5 * r1;
    let u = form.b - 0.5 * r2;
    let d1 = ((p - q).powi(2) + 4.0 * form.c1 * form.c1).sqrt();
    let d2 = ((s - u).powi(2) + 4.0 * form.c2 * form.c2).sqrt();
    [
        0.5 * (p + q + d1),
        0.5 * (p + q - d1),
        0.5 * (s + u + d2),
        0.5 * (s + u - d2),
    ]
}

/// The four P-representation margins at squeezing (r1, r2):
/// both product inequalities and both trace conditions.
pub fn prep_margins(form: &StandardForm, r1: f64, r2: f64) -> [f64; 4] {
    let p = form.a - 0.5 / r1;
    let q = form.b - 0.5 / r2;
    let s = form.a - 0.5 * r1;
    let u = form.b - 0.5 * r2;
    [
        p * q - form.c1 * form.c1,
        s * u - form.c2 * form.c2,
        p + q,
        s + u,
    ]
}

/// P-representation test at squeezing (r1, r2): all four margins ≥ -tol,
/// equivalently all four [`lambda_eigs`] ≥ -tol.
pub fn prep_test(form: &StandardForm, r1: f64, r2: f64, tol: f64) -> bool {
    prep_margins(form, r1, r2).iter().all(|m| *m >= -tol)
}

/// Covariance of the squeezed-frame state minus the vacuum floor:
/// S⁻¹ V Sᵀ⁻¹ - I/2 with S Sᵀ = diag(1/r1, r1, 1/r2, r2).
pub fn squeezed_frame_cov(form: &StandardForm, r1: f64, r2: f64) -> SymMatrix {
    let mut m = SymMatrix::zeros(4).expect("4 is a supported dimension");
    m.set(0, 0, form.a * r1 - 0.5);
    m.set(1, 1, form.a / r1 - 0.5);
    m.set(2, 2, form.b * r2 - 0.5);
    m.set(3, 3, form.b / r2 - 0.5);
    m.set(0, 2, form.c1 * (r1 * r2).sqrt());
    m.set(1, 3, form.c2 / (r1 * r2).sqrt());
    m
}

/// Attempts to build the separability certificate for a standard form:
/// t = |c2|/c1 (t = 0 when c1 = 0), the extremal squeezing of that ray, and
/// the positivity test. `None` when no certificate exists at tolerance tol.
pub fn prep_certificate(form: &StandardForm, tol: f64) -> Option<PrepCertificate> {
    let f = form.canonicalized();
    if f.a < 0.5 - tol || f.b < 0.5 - tol {
        return None;
    }
    // roundoff below the vacuum floor is treated as the floor itself
    let a = f.a.max(0.5);
    let b = f.b.max(0.5);
    let t = if f.c1 > 0.0 {
        (f.c2.abs() / f.c1).min(1.0)
    } else {
        0.0
    };
    let sp = squeeze_params(a, b, t).ok()?;
    if !prep_test(&f, sp.r1, sp.r2, tol) {
        return None;
    }
    Some(PrepCertificate {
        squeeze: sp,
        pfun: PFunctionParams {
            mean: [0.0; 4],
            cov: squeezed_frame_cov(&f, sp.r1, sp.r2),
        },
        lambda_eigs: lambda_eigs(&f, sp.r1, sp.r2),
    })
}

/// Both sides of the coincidence identity: the saturated positivity product
/// (a - r1/2)(b - r2/2)/t² at the extremal (r1, r2), and the separability
/// bound on c1². The two sides agree to machine precision for all
/// 0 ≤ t ≤ 1; at t = 0 the left side is evaluated through its regular
/// factored limit.
pub fn boundary_identity(a: f64, b: f64, t: f64) -> Result<(f64, f64)> {
    check_ab_t(a, b, t)?;
    let rhs = c1sq_bound(a, b, t)?;
    let lhs = if t >= 1e-4 {
        let sp = squeeze_params(a, b, t)?;
        (a - 0.5 * sp.r1) * (b - 0.5 * sp.r2) / (t * t)
    } else {
        // factored form of the same product: exact in t, regular at t = 0
        let d = sqrt_disc(a, b, t);
        let d1 = a * b * (1.0 + t * t) + 2.0 * a * a * t + d;
        let d2 = a * b * (1.0 + t * t) + 2.0 * b * b * t + d;
        (4.0 * a * a - 1.0) * (4.0 * b * b - 1.0) * (a + b * t) * (a * t + b)
            / (4.0 * d1 * d2)
    };
    Ok((lhs, rhs))
}

/// Residuals of the two stationarity relations
/// r1 = (a r2 + t/2)/(a t + r2/2) and r2 = (b r1 + t/2)/(b t + r1/2),
/// both zero at the extremal squeezing parameters.
pub fn extremality_conditions(a: f64, b: f64, t: f64, r1: f64, r2: f64) -> (f64, f64) {
    let res1 = r1 - (a * r2 + 0.5 * t) / (a * t + 0.5 * r2);
    let res2 = r2 - (b * r1 + 0.5 * t) / (b * t + 0.5 * r1);
    (res1, res2)
}

/// Gaussian characteristic function exp(-λᵀ V λ / 2) (zero-mean convention).
pub fn chi(v: &CovarianceMatrix, lam: &[f64; 4]) -> f64 {
    let mut q = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            q += lam[i] * v.get(i, j) * lam[j];
        }
    }
    (-0.5 * q).exp()
}

/// Draws n samples from the Gaussian P-function and returns them together
/// with the sample covariance about the known mean. The square root of the
/// covariance is taken through the eigendecomposition, so PSD matrices with
/// zero eigenvalues (boundary states) are handled exactly.
pub fn sample_p(
    pfun: &PFunctionParams,
    n: usize,
    seed: u64,
) -> Result<(Vec<[f64; 4]>, SymMatrix)> {
    if n == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let e = sym_eigen(&pfun.cov)?;
    let scale = pfun.cov.inf_norm().max(1.0);
    if e.values[0] < -1e-9 * scale {
        return Err(Error::InvalidInput(format!(
            "P-function covariance is not PSD (min eigenvalue {})",
            e.values[0]
        )));
    }
    // symmetric square root with tiny negative eigenvalues clamped to zero
    let mut root = [[0.0; 4]; 4];
    for (k, q) in e.vectors.iter().enumerate() {
        let s = e.values[k].max(0.0).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                root[i][j] += s * q[i] * q[j];
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    let mut acc = [[0.0_f64; 4]; 4];
    for _ in 0..n {
        let z: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let mut x = pfun.mean;
        for i in 0..4 {
            for j in 0..4 {
                x[i] += root[i][j] * z[j];
            }
        }
        for i in 0..4 {
            for j in 0..=i {
                acc[i][j] += (x[i] - pfun.mean[i]) * (x[j] - pfun.mean[j]);
            }
        }
        samples.push(x);
    }
    let mut cov_est = SymMatrix::zeros(4)?;
    for i in 0..4 {
        for j in 0..=i {
            cov_est.set(i, j, acc[i][j] / n as f64);
        }
    }
    Ok((samples, cov_est))
}

/// Standard error of the (i, j) sample-covariance entry of a Gaussian with
/// true covariance `cov`, for n samples about a known mean.
pub fn moment_standard_error(cov: &SymMatrix, i: usize, j: usize, n: usize) -> f64 {
    ((cov.get(i, i) * cov.get(j, j) + cov.get(i, j).powi(2)) / n as f64).sqrt()
}

/// Grid oracle for the largest c1² allowed by the positivity conditions on
/// the ray |c2| = t|c1|: maximizes min((a - 1/2r1)(b - 1/2r2),
/// (a - r1/2)(b - r2/2)/t²) over [1, 2a] × [1, 2b] on a `grid`×`grid` mesh
/// followed by local refinement. Returns (value, r1, r2) of the maximizer.
///
/// The refinement slides along the curve where the two surfaces cross (the
/// first is increasing, the second decreasing in r2, so the inner min is
/// maximized at their crossing when one exists); a plain shrinking-window
/// pass cannot localize the maximum along that curve accurately enough.
pub fn grid_max_bound(a: f64, b: f64, t: f64, grid: usize) -> (f64, f64, f64) {
    let objective = |r1: f64, r2: f64| {
        let p1 = (a - 0.5 / r1) * (b - 0.5 / r2);
        if t > 0.0 {
            let p2 = (a - 0.5 * r1) * (b - 0.5 * r2);
            p1.min(p2 / (t * t))
        } else {
            p1
        }
    };
    let (lo1, hi1) = (1.0, 2.0 * a);
    let (lo2, hi2) = (1.0, 2.0 * b);
    let n = grid.max(2);
    let mut best = (f64::NEG_INFINITY, 1.0, 1.0);
    for i in 0..=n {
        let r1 = lo1 + (hi1 - lo1) * i as f64 / n as f64;
        for j in 0..=n {
            let r2 = lo2 + (hi2 - lo2) * j as f64 / n as f64;
            let v = objective(r1, r2);
            if v > best.0 {
                best = (v, r1, r2);
            }
        }
    }
    // best response in r2 for a fixed r1: the crossing of the increasing and
    // decreasing surface (by bisection), or the better end of the interval
    let best_r2 = |r1: f64| -> (f64, f64) {
        if t == 0.0 {
            return (objective(r1, hi2), hi2);
        }
        let gap = |r2: f64| {
            (a - 0.5 * r1) * (b - 0.5 * r2) / (t * t) - (a - 0.5 / r1) * (b - 0.5 / r2)
        };
        let (glo, ghi) = (gap(lo2), gap(hi2));
        if glo <= 0.0 {
            (objective(r1, lo2), lo2)
        } else if ghi >= 0.0 {
            (objective(r1, hi2), hi2)
        } else {
            let mut lo = lo2;
            let mut hi = hi2;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if gap(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r2 = 0.5 * (lo + hi);
            (objective(r1, r2), r2)
        }
    };
    // refine along r1 with the exact best response in r2; the first pass
    // covers the whole interval because the coarse 2-D argmax can sit a few
    // columns away from the continuous maximizer
    let mut lo = lo1;
    let mut hi = hi1;
    for _ in 0..5 {
        let mut local = (f64::NEG_INFINITY, lo, lo2);
        for i in 0..=800 {
            let r1 = lo + (hi - lo) * i as f64 / 800.0;
            let (v, r2) = best_r2(r1);
            if v > local.0 {
                local = (v, r1, r2);
            }
        }
        if local.0 > best.0 {
            best = local;
        }
        let h = (hi - lo) / 800.0;
        lo = (local.1 - 2.0 * h).max(lo1);
        hi = (local.1 + 2.0 * h).min(hi1);
    }
    best
}
