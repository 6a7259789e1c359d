//! JSON shapes for the report envelope. Structs serialize in field order, so key order is fixed.

use cupzero_core::padic::{PadicInt, UnramifiedElt};
use cupzero_core::reciprocity::CupProductValue;
use cupzero_core::verify::{Check, SuiteReport};
use serde::Serialize;

#[derive(Serialize)]
pub struct Envelope<A: Serialize, R: Serialize> {
    pub command: &'static str,
    pub args: A,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    pub results: Vec<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<Counters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u128>,
}

#[derive(Serialize, Default, Clone, Copy)]
pub struct Counters {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct ErrorEnvelope {
    pub command: &'static str,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

/// A Z_p value: little-endian base-p digits, `precision` of them.
#[derive(Serialize)]
pub struct PadicJson {
    pub p: u64,
    pub precision: u32,
    pub digits: Vec<u64>,
}

impl From<&PadicInt> for PadicJson {
    fn from(x: &PadicInt) -> Self {
        PadicJson {
            p: x.p(),
            precision: x.precision(),
            digits: x.digits(),
        }
    }
}

/// A value in Z_p[X]/(g): one digit array per coefficient of 1, X, ..., X^{f-1}.
#[derive(Serialize)]
pub struct UnramifiedJson {
    pub p: u64,
    pub precision: u32,
    pub f: usize,
    /// Coefficients of g mod p, constant term first.
    pub poly: Vec<u64>,
    pub digits: Vec<Vec<u64>>,
}

impl From<&UnramifiedElt> for UnramifiedJson {
    fn from(x: &UnramifiedElt) -> Self {
        UnramifiedJson {
            p: x.p(),
            precision: x.precision(),
            f: x.degree(),
            poly: x.ring().defining_polynomial(),
            digits: x.digits(),
        }
    }
}

#[derive(Serialize)]
pub struct ScanRow {
    pub n: u64,
    pub chi: String,
    pub order: u64,
    pub theta: String,
}

#[derive(Serialize)]
pub struct CupJson {
    pub q: u64,
    pub kind: &'static str,
    pub n: u64,
    pub p: u64,
    pub r: u32,
    pub chi: String,
    pub value: UnramifiedJson,
    pub valuation: Option<u32>,
    pub r0: Option<u32>,
    pub working: UnramifiedJson,
    pub theorem_value: UnramifiedJson,
    pub omega_n_value: UnramifiedJson,
    pub adjustment: UnramifiedJson,
    pub omega_n: UnramifiedJson,
    pub log_q: Option<PadicJson>,
    pub l_invariant: Option<UnramifiedJson>,
}

impl CupJson {
    pub fn new(v: &CupProductValue, r0: Option<u32>) -> Self {
        CupJson {
            q: v.q,
            kind: if v.q == v.p { "p" } else { "ell" },
            n: v.n,
            p: v.p,
            r: v.r,
            chi: v.chi.clone(),
            value: (&v.value).into(),
            valuation: v.valuation,
            r0,
            working: (&v.working).into(),
            theorem_value: (&v.theorem_value).into(),
            omega_n_value: (&v.omega_n_value).into(),
            adjustment: (&v.adjustment).into(),
            omega_n: (&v.omega_n).into(),
            log_q: v.log_q.as_ref().map(Into::into),
            l_invariant: v.l_invariant.as_ref().map(Into::into),
        }
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub anchor: &'static str,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl From<&Check> for CheckJson {
    fn from(c: &Check) -> Self {
        CheckJson {
            name: c.name.clone(),
            anchor: c.anchor,
            params: c.params.clone(),
            passed: c.passed,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct SuiteJson {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckJson>,
}

impl From<&SuiteReport> for SuiteJson {
    fn from(s: &SuiteReport) -> Self {
        SuiteJson {
            suite: s.suite.clone(),
            passed: s.passed(),
            failed: s.failed(),
            checks: s.checks.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct EisensteinJson {
    pub weight: u32,
    pub degree: usize,
    pub precision: u32,
    pub kappa: String,
    pub lp_value: UnramifiedJson,
    pub coefficients: Vec<UnramifiedJson>,
}
