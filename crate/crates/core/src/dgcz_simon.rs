//! Two independent constructions that cross-validate the explicit squeezing
//! solution: the variance-based branch/root-search route in the doubled
//! normalization M = 2V (with the corrected positivity conditions), and the
//! symplectic-diagonalization route through the x⁴ and y⁴ parameters.

use crate::error::{Error, Result};
use crate::linalg::{self, SymMatrix};
use crate::standard_form::{DgczForm, StandardForm};

/// The squeezing-adjusted form of M: diagonal (n1, n2, m1, m2) with cross
/// couplings c1 (on q1 q2) and c2 (on p1 p2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormII {
    pub n1: f64,
    pub n2: f64,
    pub m1: f64,
    pub m2: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Both solutions of the branch quadratic r2 (m r2 - 1) = X (m - r2) at a
/// given r1, together with X(r1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub r1: f64,
    pub x: f64,
    pub r2_plus: f64,
    pub r2_minus: f64,
}

/// X(r1) = r1 (n r1 - 1)/(n - r1), with X(1) = 1 and a pole at r1 = n.
pub fn x_of(r1: f64, n: f64) -> Result<f64> {
    if !(r1 >= 1.0) || !r1.is_finite() {
        return Err(Error::InvalidInput(format!("r1 must be >= 1, got {r1}")));
    }
    if r1 == n {
        return Err(Error::Pole { n });
    }
    Ok(r1 * (n * r1 - 1.0) / (n - r1))
}

/// Solves the branch quadratic in r2. The physically continuous branch is
/// r2_plus on [1, n) and r2_minus on (n, ∞); for n = m the solution is
/// simply r2 = r1.
pub fn r2_branches(r1: f64, n: f64, m: f64) -> Result<BranchPoint> {
    if n == m {
        let x = x_of(r1, n)?;
        return Ok(BranchPoint {
            r1,
            x,
            r2_plus: r1,
            r2_minus: -x / r1,
        });
    }
    let x = x_of(r1, n)?;
    let q = 1.0 - x;
    let disc = q * q + 4.0 * m * m * x;
    if disc < 0.0 {
        return Err(Error::Branch(format!(
            "(1-X)^2 + 4 m^2 X = {disc} < 0 at r1 = {r1} (m = {m} > n = {n})"
        )));
    }
    let d = disc.sqrt();
    // evaluate each root through its cancellation-free expression
    let r2_plus = if q >= 0.0 {
        (q + d) / (2.0 * m)
    } else {
        2.0 * m * x / (d - q)
    };
    let r2_minus = if q <= 0.0 {
        (q - d) / (2.0 * m)
    } else {
        -2.0 * m * x / (q + d)
    };
    Ok(BranchPoint {
        r1,
        x,
        r2_plus,
        r2_minus,
    })
}

/// r2 along the continuous branch: r2_plus up to r1 = n (where it reaches m)
/// and r2_minus beyond.
pub fn r2_continuous(r1: f64, n: f64, m: f64) -> Result<f64> {
    if n == m {
        return Ok(r1);
    }
    if r1 == n {
        return Ok(m);
    }
    let b = r2_branches(r1, n, m)?;
    Ok(if r1 < n { b.r2_plus } else { b.r2_minus })
}

/// Factorization of the branch discriminant:
/// (1-X)² + 4m²X = (X + (m + sqrt(m²-1))²)(X + (m - sqrt(m²-1))²).
pub fn discriminant_factored(x: f64, m: f64) -> Result<(f64, f64)> {
    if !(m >= 1.0) {
        return Err(Error::InvalidInput(format!("m must be >= 1, got {m}")));
    }
    let s = (m * m - 1.0).sqrt();
    Ok((x + (m + s).powi(2), x + (m - s).powi(2)))
}

fn sqrt_clamped(x: f64, tol: f64) -> Result<f64> {
    if x < -tol {
        Err(Error::Domain(format!("square-root argument {x} < -{tol}")))
    } else {
        Ok(x.max(0.0).sqrt())
    }
}

/// The matching function whose zero defines standard form II:
/// f(r1) = sqrt(r1 r2)|c| - |c'|/sqrt(r1 r2)
///         - [sqrt((n r1 - 1)(m r2 - 1)) - sqrt((n/r1 - 1)(m/r2 - 1))],
/// with r2 on the continuous branch.
pub fn f_dgcz(r1: f64, form: &DgczForm) -> Result<f64> {
    let DgczForm { n, m, c, cprime } = *form;
    let r2 = r2_continuous(r1, n, m)?;
    let rr = r1 * r2;
    if rr <= 0.0 {
        return Err(Error::Domain(format!("r1 r2 = {rr} <= 0 at r1 = {r1}")));
    }
    let srr = rr.sqrt();
    let p1 = sqrt_clamped((n * r1 - 1.0) * (m * r2 - 1.0), 1e-12)?;
    let p2 = sqrt_clamped((n / r1 - 1.0) * (m / r2 - 1.0), 1e-12)?;
    Ok(srr * c.abs() - cprime.abs() / srr - (p1 - p2))
}

/// Margin of the bound that guarantees f(n) ≤ 0:
/// sqrt((n²-1)(m²-1)) - (sqrt(nm)|c| + |c'|/sqrt(nm)).
pub fn root_bound_margin(form: &DgczForm) -> f64 {
    let DgczForm { n, m, c, cprime } = *form;
    let lhs = ((n * n - 1.0).max(0.0) * (m * m - 1.0).max(0.0)).sqrt();
    let snm = (n * m).sqrt();
    lhs - (snm * c.abs() + cprime.abs() / snm)
}

/// Finds r1* in [1, n] with f(r1*) = 0. Preconditions: |c| ≥ |c'| (so that
/// f(1) ≥ 0) and the separability-derived bound that forces f(n) ≤ 0; their
/// failure is reported as `NoBracket`.
pub fn find_root(form: &DgczForm, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let f1 = form.c.abs() - form.cprime.abs();
    if f1 < -tol {
        return Err(Error::NoBracket(format!(
            "f(1) = |c| - |c'| = {f1} < 0"
        )));
    }
    let bound = root_bound_margin(form);
    if bound < -tol {
        return Err(Error::NoBracket(format!(
            "separability bound violated by {bound}: f(n) > 0 is possible"
        )));
    }
    if f1.abs() <= tol {
        return Ok(1.0);
    }
    let fn_val = f_dgcz(form.n, form)?;
    if fn_val.abs() <= tol {
        return Ok(form.n);
    }
    if fn_val > tol {
        return Err(Error::NoBracket(format!(
            "f(n) = {fn_val} > 0 despite bound margin {bound}"
        )));
    }
    let f = |r1: f64| f_dgcz(r1, form).unwrap_or(f64::NAN);
    linalg::bisect_root(f, 1.0, form.n, tol.min(1e-12))
}

/// Standard form II at the matched squeezing: n1 = n r1, n2 = n/r1,
/// m1 = m r2, m2 = m/r2, c1 = c sqrt(r1 r2), c2 = c'/sqrt(r1 r2).
pub fn standard_form_ii(form: &DgczForm, r1_star: f64) -> Result<StandardFormII> {
    let r2 = r2_continuous(r1_star, form.n, form.m)?;
    let srr = (r1_star * r2).sqrt();
    Ok(StandardFormII {
        n1: form.n * r1_star,
        n2: form.n / r1_star,
        m1: form.m * r2,
        m2: form.m / r2,
        c1: form.c * srr,
        c2: form.cprime / srr,
    })
}

/// Residual of the defining constraint (n2 - 1)/(n1 - 1) = (m2 - 1)/(m1 - 1)
/// in cross-multiplied form, normalized by the factor scale.
pub fn constraint_residual(sf2: &StandardFormII) -> f64 {
    let lhs = (sf2.n2 - 1.0) * (sf2.m1 - 1.0);
    let rhs = (sf2.m2 - 1.0) * (sf2.n1 - 1.0);
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    (lhs - rhs) / scale
}

/// The four positivity margins of M - I ≥ 0 in standard form II: the two
/// product inequalities and the two trace conditions.
pub fn prep_margins_dgcz(sf2: &StandardFormII) -> [f64; 4] {
    [
        (sf2.n1 - 1.0) * (sf2.m1 - 1.0) - sf2.c1 * sf2.c1,
        (sf2.n2 - 1.0) * (sf2.m2 - 1.0) - sf2.c2 * sf2.c2,
        (sf2.n1 - 1.0) + (sf2.m1 - 1.0),
        (sf2.n2 - 1.0) + (sf2.m2 - 1.0),
    ]
}

/// The matrix M - I of standard form II.
pub fn m_minus_identity(sf2: &StandardFormII) -> SymMatrix {
    let mut m = SymMatrix::zeros(4).expect("4 is a supported dimension");
    m.set(0, 0, sf2.n1 - 1.0);
    m.set(1, 1, sf2.n2 - 1.0);
    m.set(2, 2, sf2.m1 - 1.0);
    m.set(3, 3, sf2.m2 - 1.0);
    m.set(0, 2, sf2.c1);
    m.set(1, 3, sf2.c2);
    m
}

/// Positivity test M - I ≥ 0 through the four margins. Both product
/// inequalities and both trace conditions are required; dropping the trace
/// conditions would wrongly accept n2, m2 < 1 configurations.
pub fn prep_conditions_dgcz(sf2: &StandardFormII, tol: f64) -> bool {
    let by_margins = prep_margins_dgcz(sf2).iter().all(|m| *m >= -tol);
    debug_assert!(
        {
            let psd = linalg::is_psd(&m_minus_identity(sf2), tol).unwrap_or(by_margins);
            let min = prep_margins_dgcz(sf2)
                .iter()
                .fold(f64::INFINITY, |a, m| a.min(*m));
            min.abs() <= 1e3 * tol.max(1e-12) || psd == by_margins
        },
        "margin route and PSD route disagree"
    );
    by_margins
}

/// Both sides of the concavity bound
/// sqrt((n1+n2-2)(m1+m2-2)) ≥ sqrt((n1-1)(m1-1)) + sqrt((n2-1)(m2-1)),
/// with equality exactly on the constraint surface.
pub fn convexity_gap(n1: f64, n2: f64, m1: f64, m2: f64) -> Result<(f64, f64)> {
    let tn = n1 + n2 - 2.0;
    let tm = m1 + m2 - 2.0;
    if tn < -1e-12 || tm < -1e-12 {
        return Err(Error::Domain(format!(
            "need n1+n2 >= 2 and m1+m2 >= 2, got sums {tn}, {tm}"
        )));
    }
    let lhs = (tn.max(0.0) * tm.max(0.0)).sqrt();
    let rhs = sqrt_clamped((n1 - 1.0) * (m1 - 1.0), 1e-12)?
        + sqrt_clamped((n2 - 1.0) * (m2 - 1.0), 1e-12)?;
    Ok((lhs, rhs))
}

/// The diagonalization ratio x⁴ = (|c1| a + |c2| b)/(|c2| a + |c1| b),
/// which equals r1/r2 of the extremal squeezing construction.
pub fn simon_x4(form: &StandardForm) -> Result<f64> {
    let f = form.canonicalized();
    if f.c1 == 0.0 {
        return Err(Error::InvalidInput(
            "x4 is undefined for c1 = 0 (uncorrelated standard form)".into(),
        ));
    }
    let (ca, cb) = (f.c1.abs(), f.c2.abs());
    Ok((ca * f.a + cb * f.b) / (cb * f.a + ca * f.b))
}

/// The scale y⁴ = r1 r2 fixed by the equality of the two smaller
/// diagonalized eigenvalues. Errors when the defining quotient degenerates
/// (state too entangled for the construction).
pub fn simon_y4(form: &StandardForm, x4: f64) -> Result<f64> {
    if !(x4 > 0.0) {
        return Err(Error::InvalidInput(format!("x4 must be positive, got {x4}")));
    }
    let f = form.canonicalized();
    let (ca, cb) = (f.c1.abs(), f.c2.abs());
    let x2 = x4.sqrt();
    let num = f.a / x2 + f.b * x2
        - ((f.a / x2 - f.b * x2).powi(2) + 4.0 * cb * cb).sqrt();
    let den = f.a * x2 + f.b / x2
        - ((f.a * x2 - f.b / x2).powi(2) + 4.0 * ca * ca).sqrt();
    if den <= 0.0 || num <= 0.0 {
        return Err(Error::Domain(format!(
            "degenerate eigenvalue quotient: num = {num}, den = {den}"
        )));
    }
    Ok(num / den)
}

/// The four eigenvalues reachable by the two-parameter diagonalization,
/// in the order [κ+, κ-, κ'+, κ'-].
pub fn kappa_eigs(form: &StandardForm, x: f64, y: f64) -> [f64; 4] {
    let f = form.canonicalized();
    let x2 = x * x;
    let y2 = y * y;
    let d1 = ((f.a * x2 - f.b / x2).powi(2) + 4.0 * f.c1 * f.c1).sqrt();
    let d2 = ((f.a / x2 - f.b * x2).powi(2) + 4.0 * f.c2 * f.c2).sqrt();
    [
        0.5 * y2 * (f.a * x2 + f.b / x2 + d1),
        0.5 * y2 * (f.a * x2 + f.b / x2 - d1),
        0.5 / y2 * (f.a / x2 + f.b * x2 + d2),
        0.5 / y2 * (f.a / x2 + f.b * x2 - d2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{self, Separability};
    use crate::linalg::min_eigenvalue;
    use crate::prep::{prep_test, squeeze_params};
    use crate::standard_form::to_dgcz;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn separable_test_form() -> DgczForm {
        DgczForm {
            n: 2.0,
            m: 1.5,
            c: 0.6,
            cprime: 0.2,
        }
    }

    /// Random canonical standard form, separable with decisive margin.
    fn random_separable_form(rng: &mut impl Rng) -> StandardForm {
        loop {
            let a = rng.gen_range(0.55..2.5);
            let b = rng.gen_range(0.55..2.5);
            let t = rng.gen_range(0.05..=1.0);
            let cap = criteria::c1sq_bound(a, b, t).unwrap().sqrt();
            let c1 = rng.gen_range(0.1..0.9) * cap;
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let f = StandardForm::new(a, b, c1, sign * t * c1);
            let v = criteria::evaluate(&f, 1e-10);
            if v.physical
                && v.separable == Separability::Yes
                && v.separability_margin() > 1e-6
            {
                return f;
            }
        }
    }

    /// Random canonical standard form, physical but inseparable.
    fn random_entangled_form(rng: &mut impl Rng) -> StandardForm {
        loop {
            let a = rng.gen_range(0.55..2.5);
            let b = rng.gen_range(0.55..2.5);
            let t = rng.gen_range(0.1..=1.0);
            let cap = criteria::c1sq_bound(a, b, t).unwrap().sqrt();
            let c1 = rng.gen_range(1.02..1.6) * cap;
            let f = StandardForm::new(a, b, c1, -t * c1);
            let v = criteria::evaluate(&f, 1e-10);
            if v.physical
                && v.separable == Separability::No
                && v.separability_margin() < -1e-6
            {
                return f;
            }
        }
    }

    #[test]
    fn x_of_examples() {
        for n in [1.5, 2.0, 4.0] {
            assert!((x_of(1.0, n).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((x_of(1.5, 2.0).unwrap() - 6.0).abs() < 1e-14);
        // bound of X on (n, ∞), attained at r1 = n + sqrt(n²-1)
        let n = 2.0_f64;
        let r1 = n + (n * n - 1.0).sqrt();
        let want = -(n + (n * n - 1.0).sqrt()).powi(2);
        assert!((x_of(r1, n).unwrap() - want).abs() < 1e-10);
        assert!((want + 13.928203230275509).abs() < 1e-12);
        assert!(matches!(x_of(2.0, 2.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn r2_branch_examples() {
        let b = r2_branches(1.0, 2.0, 1.5).unwrap();
        assert_eq!(b.r2_plus, 1.0);
        assert_eq!(b.r2_minus, -1.0);

        let b = r2_branches(1.5, 2.0, 1.5).unwrap();
        assert!((b.x - 6.0).abs() < 1e-14);
        let want = (-5.0 + 79.0_f64.sqrt()) / 3.0;
        assert!((b.r2_plus - want).abs() < 1e-13, "{} vs {want}", b.r2_plus);

        // quadratic residual on both finite branches
        for (r1, n, m) in [(1.3, 2.0, 1.5), (3.0, 2.0, 1.5), (1.7, 2.2, 1.1)] {
            let b = r2_branches(r1, n, m).unwrap();
            for r2 in [b.r2_plus, b.r2_minus] {
                let res = r2 * (m * r2 - 1.0) - b.x * (m - r2);
                assert!(res.abs() <= 1e-9 * b.x.abs().max(1.0), "residual {res}");
            }
        }
    }

    #[test]
    fn branch_is_continuous_at_n() {
        let (n, m) = (2.0, 1.5);
        for eps in [1e-6, 1e-8, 1e-10] {
            let below = r2_continuous(n - eps, n, m).unwrap();
            let above = r2_continuous(n + eps, n, m).unwrap();
            assert!((below - m).abs() < 50.0 * eps, "below: {below}");
            assert!((above - m).abs() < 50.0 * eps, "above: {above}");
        }
        assert_eq!(r2_continuous(n, n, m).unwrap(), m);
    }

    #[test]
    fn discriminant_factorization() {
        let (f1, f2) = discriminant_factored(0.7, 1.0).unwrap();
        assert_eq!(f1, f2);
        assert!((f1 - 1.7).abs() < 1e-15);

        let (f1, f2) = discriminant_factored(1.0, 1.5).unwrap();
        assert!((f1 * f2 - 9.0).abs() < 1e-12);

        let x = -13.9282032302755;
        let (f1, f2) = discriminant_factored(x, 1.5).unwrap();
        assert!(f1 * f2 > 0.0);
        let direct = (1.0 - x).powi(2) + 4.0 * 1.5 * 1.5 * x;
        assert!((f1 * f2 - direct).abs() <= 1e-10 * direct.abs());
    }

    #[test]
    fn discriminant_positive_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..20 {
            let m = rng.gen_range(1.0..3.0);
            let n = m + rng.gen_range(0.01..2.0);
            for k in 0..500 {
                let r1 = 1.0 + 99.0 * k as f64 / 499.0;
                if (r1 - n).abs() < 1e-9 {
                    continue;
                }
                let x = x_of(r1, n).unwrap();
                let disc = (1.0 - x).powi(2) + 4.0 * m * m * x;
                assert!(disc > 0.0, "disc = {disc} at r1 = {r1}, n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn f_dgcz_examples() {
        let form = separable_test_form();
        let f1 = f_dgcz(1.0, &form).unwrap();
        assert!((f1 - 0.4).abs() < 1e-14);

        let fn_val = f_dgcz(2.0, &form).unwrap();
        let want = 3.0_f64.sqrt() * 0.6 - 0.2 / 3.0_f64.sqrt() - (3.0_f64 * 1.25).sqrt();
        assert!((fn_val - want).abs() < 1e-12);
        assert!(fn_val < 0.0, "root is bracketed in [1, 2]");
    }

    #[test]
    fn find_root_examples() {
        let form = separable_test_form();
        let r1 = find_root(&form, 1e-10).unwrap();
        assert!(r1 > 1.0 && r1 < 2.0);
        assert!(f_dgcz(r1, &form).unwrap().abs() <= 1e-10);

        let trivial = DgczForm { n: 1.8, m: 1.2, c: 0.0, cprime: 0.0 };
        assert_eq!(find_root(&trivial, 1e-10).unwrap(), 1.0);

        let tmsv = to_dgcz(&StandardForm::two_mode_squeezed_vacuum(0.5)).unwrap();
        assert!(matches!(find_root(&tmsv, 1e-10), Err(Error::NoBracket(_))));
    }

    #[test]
    fn standard_form_ii_at_root() {
        let form = separable_test_form();
        // r1* = 1 with c = c' leaves the form unchanged
        let same = DgczForm { n: 2.0, m: 1.5, c: 0.3, cprime: 0.3 };
        let sf2 = standard_form_ii(&same, 1.0).unwrap();
        assert_eq!(
            sf2,
            StandardFormII { n1: 2.0, n2: 2.0, m1: 1.5, m2: 1.5, c1: 0.3, c2: 0.3 }
        );

        let r1 = find_root(&form, 1e-11).unwrap();
        let sf2 = standard_form_ii(&form, r1).unwrap();
        assert!(constraint_residual(&sf2).abs() <= 1e-9);
        let margins = prep_margins_dgcz(&sf2);
        assert!(margins.iter().all(|m| *m >= -1e-9), "{margins:?}");
        assert!(prep_conditions_dgcz(&sf2, 1e-9));
        assert!(min_eigenvalue(&m_minus_identity(&sf2)).unwrap() >= -1e-9);
    }

    #[test]
    fn prep_conditions_counterexample_needs_trace_terms() {
        // both product inequalities hold, but the second trace condition
        // fails, so no positivity: the margin test and the PSD test agree
        let sf2 = StandardFormII {
            n1: 1.2,
            n2: 0.9,
            m1: 1.2,
            m2: 0.9,
            c1: 0.1,
            c2: 0.05,
        };
        let m = prep_margins_dgcz(&sf2);
        assert!(m[0] > 0.0 && m[1] > 0.0, "product margins hold: {m:?}");
        assert!(m[3] < 0.0, "trace margin fails: {m:?}");
        assert!(!prep_conditions_dgcz(&sf2, 1e-10));
        assert!(!linalg::is_psd(&m_minus_identity(&sf2), 1e-10).unwrap());

        // vacuum M = I: all margins zero
        let vac = StandardFormII { n1: 1.0, n2: 1.0, m1: 1.0, m2: 1.0, c1: 0.0, c2: 0.0 };
        assert!(prep_conditions_dgcz(&vac, 1e-10));
        for m in prep_margins_dgcz(&vac) {
            assert_eq!(m, 0.0);
        }
    }

    #[test]
    fn convexity_gap_examples() {
        let (lhs, rhs) = convexity_gap(1.7, 1.7, 1.3, 1.3).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);

        // this tuple satisfies the constraint, so equality holds
        let (lhs, rhs) = convexity_gap(3.0, 1.2, 2.0, 1.1).unwrap();
        assert!(lhs >= rhs - 1e-12);
        assert!((lhs - rhs).abs() <= 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..10000 {
            let n1 = rng.gen_range(1.0..4.0);
            let n2 = rng.gen_range(1.0..4.0);
            let m1 = rng.gen_range(1.0..4.0);
            let m2 = rng.gen_range(1.0..4.0);
            let (lhs, rhs) = convexity_gap(n1, n2, m1, m2).unwrap();
            assert!(lhs >= rhs - 1e-10, "{lhs} < {rhs}");
        }

        // tuples on the constraint surface: equality to 1e-8
        for _ in 0..200 {
            let n1 = rng.gen_range(1.1..4.0);
            let m1 = rng.gen_range(1.1..4.0);
            let lam = rng.gen_range(0.0..1.0);
            let n2 = 1.0 + lam * (n1 - 1.0);
            let m2 = 1.0 + lam * (m1 - 1.0);
            let (lhs, rhs) = convexity_gap(n1, n2, m1, m2).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn constraint_matches_extremality_restatement() {
        // at the extremal squeezing of any (a, b, t), the doubled-normalization
        // constraint holds along (r1, r2)
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..200 {
            let a = rng.gen_range(0.55..3.0);
            let b = rng.gen_range(0.55..3.0);
            let t = rng.gen_range(0.01..=1.0);
            let sp = squeeze_params(a, b, t).unwrap();
            let sf2 = StandardFormII {
                n1: 2.0 * a * sp.r1,
                n2: 2.0 * a / sp.r1,
                m1: 2.0 * b * sp.r2,
                m2: 2.0 * b / sp.r2,
                c1: 0.0,
                c2: 0.0,
            };
            assert!(
                constraint_residual(&sf2).abs() <= 1e-9,
                "constraint fails at a={a} b={b} t={t}"
            );
        }
    }

    #[test]
    fn simon_x4_examples() {
        let sym = StandardForm::new(1.3, 1.3, 0.4, 0.1);
        assert!((simon_x4(&sym).unwrap() - 1.0).abs() < 1e-14);

        let f = StandardForm::new(1.0, 0.8, 0.3, 0.15);
        let x4 = simon_x4(&f).unwrap();
        assert!((x4 - 0.42 / 0.39).abs() < 1e-14);
        let sp = squeeze_params(1.0, 0.8, 0.5).unwrap();
        assert!((x4 - sp.r1 / sp.r2).abs() < 1e-10);

        assert!(simon_x4(&StandardForm::new(1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn simon_x4_matches_squeeze_ratio_on_separable_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let mut done = 0;
        while done < 500 {
            let f = random_separable_form(&mut rng);
            if f.c1 * f.c2 <= 0.0 || f.c1 == 0.0 {
                continue;
            }
            let t = f.c2.abs() / f.c1;
            let sp = squeeze_params(f.a, f.b, t).unwrap();
            let x4 = simon_x4(&f).unwrap();
            assert!(
                (x4 - sp.r1 / sp.r2).abs() <= 1e-10 * (sp.r1 / sp.r2),
                "{f:?}"
            );
            done += 1;
        }
    }

    #[test]
    fn simon_y4_and_kappa() {
        // uncorrelated symmetric case: y4 = 1
        let f = StandardForm::new(1.2, 1.2, 1e-14, 1e-15);
        let y4 = simon_y4(&f, 1.0).unwrap();
        assert!((y4 - 1.0).abs() < 1e-10);

        let f = StandardForm::new(1.0, 0.8, 0.3, 0.15);
        let x4 = simon_x4(&f).unwrap();
        let y4 = simon_y4(&f, x4).unwrap();
        assert!((y4 - 1.2721458095373792).abs() < 1e-12, "{y4}");

        // κ- = κ'- at the defining y
        let k = kappa_eigs(&f, x4.powf(0.25), y4.powf(0.25));
        assert!((k[1] - k[3]).abs() <= 1e-9, "{k:?}");

        // uncorrelated non-squeezed point: eigenvalues {a, a, b, b}
        let f = StandardForm::new(1.4, 0.9, 0.0, 0.0);
        let k = kappa_eigs(&f, 1.0, 1.0);
        assert!((k[0] - 1.4).abs() < 1e-15 && (k[1] - 0.9).abs() < 1e-15);
        assert!((k[2] - 1.4).abs() < 1e-15 && (k[3] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn simon_y4_equals_squeeze_product_on_boundary_states() {
        // On states that saturate the separability bound (c1² equal to the
        // largest admissible value on the ray), the y⁴ fixed by the
        // eigenvalue coincidence equals the product r1 r2 of the extremal
        // squeezing construction. Away from the boundary the two
        // constructions legitimately pick different certifying points.
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..200 {
            let a = rng.gen_range(0.55..3.0);
            let b = rng.gen_range(0.55..3.0);
            let t = rng.gen_range(0.05..=1.0);
            let c1 = criteria::c1sq_bound(a, b, t).unwrap().sqrt();
            let f = StandardForm::new(a, b, c1, t * c1);
            let x4 = simon_x4(&f).unwrap();
            let y4 = simon_y4(&f, x4).unwrap();
            let sp = squeeze_params(a, b, t).unwrap();
            let want = sp.r1 * sp.r2;
            assert!(
                (y4 - want).abs() <= 1e-8 * want,
                "a={a} b={b} t={t}: y4 = {y4} vs r1 r2 = {want}"
            );
            assert!((x4 - sp.r1 / sp.r2).abs() <= 1e-10 * (sp.r1 / sp.r2));
        }
    }

    #[test]
    fn kappa_bound_equivalent_to_prep_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let mut done = 0;
        while done < 200 {
            let f = if done % 2 == 0 {
                random_separable_form(&mut rng)
            } else {
                random_entangled_form(&mut rng)
            };
            if f.c1 == 0.0 {
                continue;
            }
            let x4 = simon_x4(&f).unwrap();
            let y4 = match simon_y4(&f, x4) {
                Ok(v) => v,
                // quotient degenerates only for strongly entangled states
                Err(_) => {
                    assert_eq!(
                        criteria::evaluate(&f, 1e-10).separable,
                        Separability::No
                    );
                    done += 1;
                    continue;
                }
            };
            let (x, y) = (x4.powf(0.25), y4.powf(0.25));
            let k = kappa_eigs(&f, x, y);
            let kappa_ok = k[1].min(k[3]) >= 0.5 - 1e-9;
            let r1 = (x4 * y4).sqrt();
            let r2 = (y4 / x4).sqrt();
            let prep_ok = prep_test(&f.canonicalized(), r1, r2, 1e-9);
            assert_eq!(kappa_ok, prep_ok, "{f:?}: kappas {k:?}");
            done += 1;
        }
    }

    #[test]
    fn dgcz_pipeline_on_separable_and_entangled_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..100 {
            let f = random_separable_form(&mut rng);
            let d = to_dgcz(&f).unwrap();
            let r1 = find_root(&d, 1e-10).expect("separable state must bracket a root");
            assert!((1.0..=d.n).contains(&r1));
            let sf2 = standard_form_ii(&d, r1).unwrap();
            assert!(prep_conditions_dgcz(&sf2, 1e-9), "{f:?}");
        }
        for _ in 0..100 {
            let f = random_entangled_form(&mut rng);
            let d = to_dgcz(&f).unwrap();
            match find_root(&d, 1e-10) {
                Err(Error::NoBracket(_)) => {}
                Err(e) => panic!("unexpected error {e:?}"),
                Ok(r1) => {
                    let sf2 = standard_form_ii(&d, r1).unwrap();
                    assert!(
                        !prep_conditions_dgcz(&sf2, 1e-9),
                        "entangled state certified: {f:?}"
                    );
                }
            }
        }
    }
}
