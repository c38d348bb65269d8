//! Serialized report types. Field order is fixed by declaration, all maps
//! are avoided, and wall-clock timings stay out of the serialized output,
//! so reports are byte-stable for identical inputs, flags, and seeds.

use gausep::criteria::{Separability, Verdict};
use gausep::linalg::SymMatrix;
use gausep::prep::PrepCertificate;
use gausep::standard_form::{DgczForm, StandardForm};
use serde::Serialize;

pub fn sym_to_rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

#[derive(Serialize)]
pub struct InputEcho {
    pub path: String,
    pub convention: &'static str,
    pub tol: f64,
    /// The analyzed matrix in the half convention, after symmetrization.
    pub v: Vec<Vec<f64>>,
}

#[derive(Serialize)]
pub struct FormOut {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl From<&StandardForm> for FormOut {
    fn from(f: &StandardForm) -> Self {
        FormOut { a: f.a, b: f.b, c1: f.c1, c2: f.c2 }
    }
}

#[derive(Serialize)]
pub struct TransformOut {
    pub s1: [[f64; 2]; 2],
    pub s2: [[f64; 2]; 2],
}

#[derive(Serialize)]
pub struct MarginsOut {
    pub a_floor: f64,
    pub b_floor: f64,
    pub c1_bound: f64,
    pub c2_bound: f64,
    pub delta_floor: f64,
    pub physicality_det: f64,
    pub simon_det: f64,
    pub dgcz_sum: f64,
}

#[derive(Serialize)]
pub struct VerdictOut {
    pub physical: bool,
    pub separable: &'static str,
    pub margins: MarginsOut,
}

impl From<&Verdict> for VerdictOut {
    fn from(v: &Verdict) -> Self {
        let m = |name: &str| v.margin(name).unwrap_or(f64::NAN);
        VerdictOut {
            physical: v.physical,
            separable: match v.separable {
                Separability::Yes => "yes",
                Separability::No => "no",
                Separability::Boundary => "boundary",
            },
            margins: MarginsOut {
                a_floor: m("a_floor"),
                b_floor: m("b_floor"),
                c1_bound: m("c1_bound"),
                c2_bound: m("c2_bound"),
                delta_floor: m("delta_floor"),
                physicality_det: m("physicality_det"),
                simon_det: m("simon_det"),
                dgcz_sum: m("dgcz_sum"),
            },
        }
    }
}

#[derive(Serialize)]
pub struct CertificateOut {
    pub r1: f64,
    pub r2: f64,
    pub t: f64,
    pub lambda_eigs: [f64; 4],
    pub pfun_mean: [f64; 4],
    pub pfun_cov: Vec<Vec<f64>>,
}

impl From<&PrepCertificate> for CertificateOut {
    fn from(c: &PrepCertificate) -> Self {
        CertificateOut {
            r1: c.squeeze.r1,
            r2: c.squeeze.r2,
            t: c.squeeze.t,
            lambda_eigs: c.lambda_eigs,
            pfun_mean: c.pfun.mean,
            pfun_cov: sym_to_rows(&c.pfun.cov),
        }
    }
}

#[derive(Serialize)]
pub struct WitnessOut {
    pub d: [f64; 2],
    pub f: [f64; 2],
    pub g: [f64; 2],
    pub h: [f64; 2],
    pub value: f64,
}

#[derive(Serialize)]
pub struct DgczOut {
    pub n: f64,
    pub m: f64,
    pub c: f64,
    pub cprime: f64,
    /// Matched squeezing r1* in [1, n], when the bracketing bound holds.
    pub root: Option<f64>,
    pub f_at_root: Option<f64>,
    pub constraint_residual: Option<f64>,
    pub conditions_pass: Option<bool>,
    pub min_eig_m_minus_i: Option<f64>,
    pub consistent: bool,
}

impl DgczOut {
    pub fn empty(d: &DgczForm) -> Self {
        DgczOut {
            n: d.n,
            m: d.m,
            c: d.c,
            cprime: d.cprime,
            root: None,
            f_at_root: None,
            constraint_residual: None,
            conditions_pass: None,
            min_eig_m_minus_i: None,
            consistent: true,
        }
    }
}

#[derive(Serialize)]
pub struct SimonOut {
    pub x4: f64,
    /// |x4 - r1/r2| relative to r1/r2 of the extremal construction.
    pub x4_vs_squeeze_ratio: f64,
    pub y4: Option<f64>,
    pub kappa: Option<[f64; 4]>,
    pub kappa_minus_residual: Option<f64>,
    pub consistent: bool,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub standard_form: FormOut,
    pub transform: TransformOut,
    pub verdict: VerdictOut,
    pub certificate: Option<CertificateOut>,
    pub witness: Option<WitnessOut>,
    pub dgcz: Option<DgczOut>,
    pub simon: Option<SimonOut>,
    pub consistent: bool,
}

#[derive(Serialize)]
pub struct SampleReport {
    pub input: InputEcho,
    pub n: usize,
    pub seed: u64,
    pub r1: f64,
    pub r2: f64,
    pub expected_cov: Vec<Vec<f64>>,
    pub estimated_cov: Vec<Vec<f64>>,
    pub z_scores: Vec<Vec<f64>>,
    pub max_abs_z: f64,
}
