//! The four subcommands. Exit codes: 0 success, 2 parse/validation failure,
//! 3 domain failure (not a state, unphysical, or no certificate), 4 internal
//! cross-check inconsistency.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gausep::criteria::{self, Separability};
use gausep::dgcz_simon;
use gausep::linalg::min_eigenvalue;
use gausep::prep;
use gausep::standard_form::{from_standard, reduce, to_dgcz, StandardForm};
use gausep::symplectic::{apply, random_local_symplectic, CovarianceMatrix};
use gausep::Error;

use crate::input::{self, Convention, StateFile};
use crate::report::*;

/// Margin band inside which the exact criterion and the constructive
/// certificate may legitimately disagree due to roundoff; decisive
/// disagreement outside it is an internal error.
const CONSISTENCY_BAND: f64 = 1e-6;

pub enum CmdError {
    Parse(String),
    Domain(String),
    Inconsistent(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Parse(_) => 2,
            CmdError::Domain(_) => 3,
            CmdError::Inconsistent(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Parse(m) | CmdError::Domain(m) | CmdError::Inconsistent(m) => m,
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), CmdError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CmdError::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CmdError::Parse(format!("cannot write to stdout: {e}")))
        }
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Half => "half",
        Convention::Dgcz => "dgcz",
    }
}

struct LoadedState {
    v: CovarianceMatrix,
    tol: f64,
}

fn load_state(
    path: &Path,
    convention: Convention,
    tol_flag: Option<f64>,
) -> Result<LoadedState, CmdError> {
    let file = input::load(path).map_err(CmdError::Parse)?;
    let v = file.to_covariance(convention).map_err(CmdError::Parse)?;
    let tol = tol_flag.or(file.tol).unwrap_or(1e-10);
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CmdError::Parse(format!("tolerance must be positive, got {tol}")));
    }
    Ok(LoadedState { v, tol })
}

pub fn analyze(
    path: &Path,
    convention: Convention,
    tol_flag: Option<f64>,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CmdError> {
    let t_total = Instant::now();
    let state = load_state(path, convention, tol_flag)?;
    let (v, tol) = (state.v, state.tol);

    let t_reduce = Instant::now();
    let reduction = match reduce(&v) {
        Ok(r) => r,
        Err(Error::NotAState(m)) => return Err(CmdError::Domain(format!("not a state: {m}"))),
        Err(e) => return Err(CmdError::Parse(e.to_string())),
    };
    let form = reduction.form;
    let t_reduce = t_reduce.elapsed();

    let t_criteria = Instant::now();
    let verdict = criteria::evaluate(&form, tol);
    let phys_margin = criteria::physicality(&form, tol).1;
    let embedding_psd = criteria::physicality_embedding(&v, tol)
        .map_err(|e| CmdError::Parse(e.to_string()))?;
    let t_criteria = t_criteria.elapsed();

    let mut inconsistencies: Vec<String> = Vec::new();
    if verdict.physical != embedding_psd && phys_margin.abs() > CONSISTENCY_BAND {
        inconsistencies.push(format!(
            "margin physicality ({}) disagrees with the PSD embedding ({embedding_psd}) at margin {phys_margin}",
            verdict.physical
        ));
    }

    let t_certificate = Instant::now();
    let certificate = prep::prep_certificate(&form, tol);
    let t_certificate = t_certificate.elapsed();
    let sep_margin = verdict.separability_margin();
    if sep_margin.abs() > CONSISTENCY_BAND {
        let should = verdict.physical && verdict.separable == Separability::Yes;
        if should != certificate.is_some() {
            inconsistencies.push(format!(
                "separability verdict ({:?}) and certificate presence ({}) disagree at margin {sep_margin}",
                verdict.separable,
                certificate.is_some()
            ));
        }
    }

    let witness = if !verdict.physical || verdict.separable == Separability::No {
        criteria::search_witness(&v, seed, 60).map(|w| WitnessOut {
            d: w.d,
            f: w.f,
            g: w.g,
            h: w.h,
            value: criteria::witness_value(&v, &w),
        })
    } else {
        None
    };

    let t_dgcz = Instant::now();
    let dgcz = if verdict.physical {
        match to_dgcz(&form) {
            Err(_) => None,
            Ok(d) => {
                let mut out = DgczOut::empty(&d);
                match dgcz_simon::find_root(&d, tol.max(1e-12)) {
                    Err(Error::NoBracket(_)) => {}
                    Err(e) => return Err(CmdError::Parse(e.to_string())),
                    Ok(r1) => {
                        let sf2 = dgcz_simon::standard_form_ii(&d, r1)
                            .map_err(|e| CmdError::Parse(e.to_string()))?;
                        out.root = Some(r1);
                        out.f_at_root =
                            Some(dgcz_simon::f_dgcz(r1, &d).unwrap_or(f64::NAN));
                        out.constraint_residual =
                            Some(dgcz_simon::constraint_residual(&sf2));
                        out.conditions_pass =
                            Some(dgcz_simon::prep_conditions_dgcz(&sf2, tol.max(1e-9)));
                        out.min_eig_m_minus_i =
                            min_eigenvalue(&dgcz_simon::m_minus_identity(&sf2)).ok();
                    }
                }
                let certifies = out.root.is_some() && out.conditions_pass == Some(true);
                if sep_margin.abs() > CONSISTENCY_BAND {
                    out.consistent = certifies == (verdict.separable == Separability::Yes);
                    if !out.consistent {
                        inconsistencies.push(format!(
                            "route through the doubled normalization ({certifies}) disagrees with the verdict at margin {sep_margin}"
                        ));
                    }
                }
                Some(out)
            }
        }
    } else {
        None
    };
    let t_dgcz = t_dgcz.elapsed();

    let t_simon = Instant::now();
    let simon = if verdict.physical && form.c1 > 0.0 {
        let x4 = dgcz_simon::simon_x4(&form).map_err(|e| CmdError::Parse(e.to_string()))?;
        let t_ray = form.c2.abs() / form.c1;
        let sp = prep::squeeze_params(form.a.max(0.5), form.b.max(0.5), t_ray.min(1.0))
            .map_err(|e| CmdError::Parse(e.to_string()))?;
        let ratio = sp.r1 / sp.r2;
        let x4_dev = (x4 - ratio).abs() / ratio;
        let mut consistent = x4_dev <= 1e-8;
        if !consistent {
            inconsistencies.push(format!(
                "x4 = {x4} deviates from the squeeze ratio {ratio} by {x4_dev}"
            ));
        }
        let (y4, kappa, kres) = match dgcz_simon::simon_y4(&form, x4) {
            Err(_) => (None, None, None),
            Ok(y4) => {
                let k = dgcz_simon::kappa_eigs(&form, x4.powf(0.25), y4.powf(0.25));
                let res = (k[1] - k[3]).abs();
                if res > 1e-6 * (1.0 + k[1].abs()) {
                    consistent = false;
                    inconsistencies.push(format!(
                        "eigenvalue coincidence residual {res} at y4 = {y4}"
                    ));
                }
                (Some(y4), Some(k), Some(res))
            }
        };
        Some(SimonOut {
            x4,
            x4_vs_squeeze_ratio: x4_dev,
            y4,
            kappa,
            kappa_minus_residual: kres,
            consistent,
        })
    } else {
        None
    };
    let t_simon = t_simon.elapsed();

    let report = AnalysisReport {
        input: InputEcho {
            path: path.display().to_string(),
            convention: convention_name(convention),
            tol,
            v: v.rows().iter().map(|r| r.to_vec()).collect(),
        },
        standard_form: FormOut::from(&form),
        transform: TransformOut {
            s1: reduction.transform.s1.0,
            s2: reduction.transform.s2.0,
        },
        verdict: VerdictOut::from(&verdict),
        certificate: certificate.as_ref().map(CertificateOut::from),
        witness,
        dgcz,
        simon,
        consistent: inconsistencies.is_empty(),
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CmdError::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(output, &text)?;

    eprintln!(
        "timings (us): reduce={} criteria={} certificate={} dgcz={} simon={} total={}",
        t_reduce.as_micros(),
        t_criteria.as_micros(),
        t_certificate.as_micros(),
        t_dgcz.as_micros(),
        t_simon.as_micros(),
        t_total.elapsed().as_micros()
    );

    if let Some(first) = inconsistencies.first() {
        return Err(CmdError::Inconsistent(format!(
            "internal cross-check failed: {first}"
        )));
    }
    if !verdict.physical {
        eprintln!("state is unphysical (margin {phys_margin})");
        return Ok(3);
    }
    Ok(0)
}

pub fn region_scan(
    a: f64,
    b: f64,
    t_steps: usize,
    grid: usize,
    output: &Option<PathBuf>,
) -> Result<i32, CmdError> {
    if !(a >= 0.5) || !(b >= 0.5) {
        return Err(CmdError::Parse(format!(
            "mode variances must satisfy a, b >= 1/2, got a = {a}, b = {b}"
        )));
    }
    if t_steps == 0 {
        return Err(CmdError::Parse("--t-steps must be positive".into()));
    }
    let indices: Vec<usize> = (0..=t_steps).collect();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    let mut rows: Vec<(usize, String)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let chunk: Vec<usize> = indices.iter().copied().skip(w).step_by(workers).collect();
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                for i in chunk {
                    let t = i as f64 / t_steps as f64;
                    let bound = criteria::c1sq_bound(a, b, t).expect("validated domain");
                    let (gmax, _, _) = prep::grid_max_bound(a, b, t, grid);
                    let sp = prep::squeeze_params(a, b, t).expect("validated domain");
                    let gap = if bound.abs() > 0.0 {
                        (gmax - bound).abs() / bound.abs()
                    } else {
                        (gmax - bound).abs()
                    };
                    out.push((
                        i,
                        format!(
                            "{},{},{},{},{},{}",
                            fmt17(t),
                            fmt17(bound),
                            fmt17(gmax),
                            fmt17(sp.r1),
                            fmt17(sp.r2),
                            fmt17(gap)
                        ),
                    ));
                }
                out
            }));
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    rows.sort_by_key(|(i, _)| *i);
    let mut text = String::from("t,c1sq_bound,grid_max_bound,r1,r2,rel_gap\n");
    for (_, row) in rows {
        text.push_str(&row);
        text.push('\n');
    }
    write_output(output, &text)?;
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StateKind {
    Separable,
    Entangled,
    Boundary,
}

pub fn random_state(
    kind: StateKind,
    count: usize,
    seed: u64,
    tol: f64,
    output_dir: &Path,
) -> Result<i32, CmdError> {
    std::fs::create_dir_all(output_dir)
        .map_err(|e| CmdError::Parse(format!("cannot create {}: {e}", output_dir.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let form = sample_form(kind, &mut rng, tol);
        let s = random_local_symplectic(seed.wrapping_mul(0x9e37).wrapping_add(i as u64), 1.0);
        let v = apply(&s, &from_standard(&form));
        let file = StateFile::from_covariance(&v, None);
        let mut text = serde_json::to_string_pretty(&file)
            .map_err(|e| CmdError::Parse(format!("serialization failed: {e}")))?;
        text.push('\n');
        let path = output_dir.join(format!("state_{i:03}.json"));
        std::fs::write(&path, text)
            .map_err(|e| CmdError::Parse(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn sample_form(kind: StateKind, rng: &mut ChaCha8Rng, tol: f64) -> StandardForm {
    loop {
        let a: f64 = rng.gen_range(0.55..2.5);
        let b: f64 = rng.gen_range(0.55..2.5);
        let t: f64 = rng.gen_range(0.1..=1.0);
        let cap = criteria::c1sq_bound(a, b, t).expect("domain validated").sqrt();
        let (c1, c2) = match kind {
            StateKind::Separable => {
                let c1 = rng.gen_range(0.2..0.95) * cap;
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (c1, sign * t * c1)
            }
            StateKind::Entangled => {
                let c1 = rng.gen_range(1.02..1.5) * cap;
                (c1, -t * c1)
            }
            // exactly on the exact-criterion boundary; the negative cross
            // sign keeps the physicality margin strictly positive
            StateKind::Boundary => (cap, -t * cap),
        };
        let f = StandardForm::new(a, b, c1, c2);
        let v = criteria::evaluate(&f, tol);
        let ok = match kind {
            StateKind::Separable => {
                v.physical
                    && v.separable == Separability::Yes
                    && v.separability_margin() > 10.0 * tol
            }
            StateKind::Entangled => {
                v.physical
                    && v.separable == Separability::No
                    && v.separability_margin() < -10.0 * tol
            }
            StateKind::Boundary => v.physical && v.separability_margin().abs() <= 1e-9,
        };
        if ok {
            return f;
        }
    }
}

pub fn sample_p(
    path: &Path,
    convention: Convention,
    tol_flag: Option<f64>,
    n: usize,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CmdError> {
    let state = load_state(path, convention, tol_flag)?;
    let (v, tol) = (state.v, state.tol);
    let reduction = match reduce(&v) {
        Ok(r) => r,
        Err(Error::NotAState(m)) => return Err(CmdError::Domain(format!("not a state: {m}"))),
        Err(e) => return Err(CmdError::Parse(e.to_string())),
    };
    let cert = prep::prep_certificate(&reduction.form, tol).ok_or_else(|| {
        CmdError::Domain("state has no P-representation certificate".into())
    })?;
    let (_, est) = prep::sample_p(&cert.pfun, n, seed)
        .map_err(|e| CmdError::Parse(e.to_string()))?;

    let mut z = vec![vec![0.0; 4]; 4];
    let mut max_abs_z = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let se = prep::moment_standard_error(&cert.pfun.cov, i, j, n);
            let diff = est.get(i, j) - cert.pfun.cov.get(i, j);
            if se == 0.0 {
                if diff.abs() > 1e-9 {
                    return Err(CmdError::Inconsistent(format!(
                        "zero-variance entry ({i}, {j}) reconstructed with error {diff}"
                    )));
                }
                z[i][j] = 0.0;
            } else {
                z[i][j] = diff / se;
            }
            max_abs_z = max_abs_z.max(z[i][j].abs());
        }
    }
    let report = SampleReport {
        input: InputEcho {
            path: path.display().to_string(),
            convention: convention_name(convention),
            tol,
            v: v.rows().iter().map(|r| r.to_vec()).collect(),
        },
        n,
        seed,
        r1: cert.squeeze.r1,
        r2: cert.squeeze.r2,
        expected_cov: sym_to_rows(&cert.pfun.cov),
        estimated_cov: sym_to_rows(&est),
        z_scores: z,
        max_abs_z,
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CmdError::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(output, &text)?;
    Ok(0)
}
