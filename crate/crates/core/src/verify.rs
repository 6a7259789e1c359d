//! Named suites of exact and p-adic identity checks, used by `cupzero verify` and the
//! acceptance tests.

use rayon::prelude::*;

use crate::arith::{gcd, is_prime};
use crate::characters::{is_exceptional, teichmuller_char, theta_from_chi, DirichletChar};
use crate::context::PadicContext;
use crate::error::Result;
use crate::lambda::{
    classical_eisenstein_coeff, eisenstein_coeff, specialize, trivial_zero_point, xi_theta,
};
use crate::lvalues::{
    geometric_identity_check, interpolation_value, kubota_leopoldt_at_integer, l_invariant,
    lp_derivative_at_0,
};
use crate::padic::PadicInt;
use crate::reciprocity::{
    adjustment_argument, branch_totals, chain_check, cup_product, embedding_consistency,
    primitive_root_sum, ratio_law, scaling_identity_check, trace_sum_identity,
};

/// The exceptional pairs every suite runs on: (χ label, p, prime ℓ | N).
pub const DESK_PAIRS: [(&str, u64, u64); 3] = [("3:[1]", 7, 3), ("4:[1]", 5, 2), ("7:[3]", 11, 7)];

pub const SUITES: [&str; 4] = ["lemma41", "reciprocity", "lp", "eisenstein"];

/// One identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    /// The identity being checked.
    pub anchor: &'static str,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(
        name: impl Into<String>,
        anchor: &'static str,
        params: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor,
            params: params.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(
        name: impl Into<String>,
        anchor: &'static str,
        params: impl Into<String>,
        r: Result<(bool, String)>,
    ) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, anchor, params, passed, detail),
            Err(e) => Check::new(name, anchor, params, false, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }
}

/// Bounds for the suites; the defaults are the acceptance bounds.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_m: u64,
    pub max_scaling_level: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_m: 30,
            max_scaling_level: 200,
        }
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Option<SuiteReport> {
    let checks = match name {
        "lemma41" => lemma41(opts),
        "reciprocity" => reciprocity(),
        "lp" => lp(),
        "eisenstein" => eisenstein(),
        _ => return None,
    };
    Some(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// `all` expands to every suite, in the fixed order of [`SUITES`].
pub fn run(name: &str, opts: &VerifyOptions) -> Option<Vec<SuiteReport>> {
    if name == "all" {
        Some(
            SUITES
                .iter()
                .map(|s| run_suite(s, opts).expect("known suite"))
                .collect(),
        )
    } else {
        run_suite(name, opts).map(|r| vec![r])
    }
}

fn chi(label: &str) -> DirichletChar {
    DirichletChar::from_label(label).expect("desk label")
}

fn lemma41(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks: Vec<Check> = (1..=opts.max_m)
        .into_par_iter()
        .map(|m| {
            let failures: Result<Vec<u64>> = (1..m)
                .filter_map(|j| match geometric_identity_check(m, j as i64) {
                    Ok(true) => None,
                    Ok(false) => Some(Ok(j)),
                    Err(e) => Some(Err(e)),
                })
                .collect();
            Check::from_result(
                format!("geometric-identity M={m}"),
                "t/(t-1) = -Σ_a ζ_{a (M)}(0) t^a",
                format!("M={m}, j=1..{}", m.saturating_sub(1)),
                failures.map(|f| {
                    (
                        f.is_empty(),
                        if f.is_empty() {
                            format!("{} roots", m.saturating_sub(1))
                        } else {
                            format!("fails at j={f:?}")
                        },
                    )
                }),
            )
        })
        .collect();

    let mut count = 0u64;
    let mut bad = Vec::new();
    for p in (2..=opts.max_scaling_level).filter(|&p| is_prime(p)) {
        for n in 1..=opts.max_scaling_level {
            if gcd(n, p) != 1 {
                continue;
            }
            let mut r = 1;
            while n * p.pow(r) <= opts.max_scaling_level {
                for a in 1..n {
                    count += 1;
                    if !scaling_identity_check(a, n, p, r).unwrap_or(false) {
                        bad.push((a, n, p, r));
                    }
                }
                r += 1;
            }
        }
    }
    checks.push(Check::new(
        "scaling-identity",
        "ζ_{a'p^r (Np^r)}(0) = ζ_{a' (N)}(0)",
        format!("N p^r <= {}", opts.max_scaling_level),
        bad.is_empty(),
        if bad.is_empty() {
            format!("{count} factorizations")
        } else {
            format!("fails at {bad:?}")
        },
    ));

    for p in [5u64, 7, 11] {
        for r in 1..=3u32 {
            let s = primitive_root_sum(p, r);
            let expect = if r == 1 { -1 } else { 0 };
            let passed =
                s.as_rational() == Some(num_rational::BigRational::from_integer(expect.into()));
            checks.push(Check::new(
                format!("primitive-root-sum p={p} r={r}"),
                "Σ_{i ∈ (Z/p^r)^×} ζ_{p^r}^i = -1 (r = 1), 0 (r >= 2)",
                format!("p={p}, r={r}"),
                passed,
                format!("{s:?}"),
            ));
        }
    }
    checks
}

fn reciprocity() -> Vec<Check> {
    let mut checks = Vec::new();
    let cases: Vec<(&str, u64, u32)> = DESK_PAIRS
        .iter()
        .flat_map(|&(l, p, _)| [(l, p, 1), (l, p, 2)])
        .collect();
    let reports: Vec<_> = cases
        .par_iter()
        .map(|&(l, p, r)| trace_sum_identity(&chi(l), p, r))
        .collect();
    for (&(l, p, r), rep) in cases.iter().zip(reports) {
        let params = format!("chi={l}, p={p}, r={r}");
        match rep {
            Ok(rep) => {
                checks.push(Check::new(
                    format!("trace-sum {l} p={p} r={r}"),
                    "S = φ(p^r) τ(χ^{-1}) L(0, χ)",
                    params.clone(),
                    rep.matches_stated,
                    format!("S = {:?}; closed form = {:?}", rep.sum, rep.closed_form),
                ));
                checks.push(Check::new(
                    format!("trace-sum-signed {l} p={p} r={r}"),
                    "S = -φ(p^r) τ(χ^{-1}) L(0, χ)",
                    params,
                    rep.matches_negated,
                    "sign carried through from t/(t-1) = -Σ_a ζ_{a (M)}(0) t^a",
                ));
            }
            Err(e) => checks.push(Check::new(
                format!("trace-sum {l} p={p} r={r}"),
                "S = φ(p^r) τ(χ^{-1}) L(0, χ)",
                params,
                false,
                format!("error: {e}"),
            )),
        }
    }

    checks.push(Check::from_result(
        "trace-chain 3:[1] p=7 r=1",
        "Σ χ(G_N^{-1}) ω(g_p^{-1}) Tr(δg) = Σ Σ_g t/(t-1) = (p-1) S",
        "chi=3:[1], p=7, r=1",
        chain_check(&chi("3:[1]"), 7, 1).map(|c| {
            (
                c.traced_matches_expanded && c.expanded_matches_reindexed,
                format!(
                    "trace = expansion: {}, expansion = (p-1)S: {}",
                    c.traced_matches_expanded, c.expanded_matches_reindexed
                ),
            )
        }),
    ));

    checks.push(Check::from_result(
        "branch-totals 3:[1] p=7 r=2",
        "N | a and p^i | a (i < r) branches vanish; p^r | a gives φ(p^r) τ(χ^{-1}) L(0, χ)",
        "chi=3:[1], p=7, r=2",
        branch_totals(&chi("3:[1]"), 7, 2).map(|b| {
            (
                b.lower_branches_vanish() && b.top_matches && b.expansion_matches,
                format!(
                    "N|a total zero: {}, valuation totals zero: {:?}, termwise unit-root sums zero: {:?}, top: {}, expansion: {}",
                    b.n_divides.is_zero(),
                    b.by_valuation.iter().map(|x| x.is_zero()).collect::<Vec<_>>(),
                    b.termwise_zero,
                    b.top_matches,
                    b.expansion_matches
                ),
            )
        }),
    ));

    let emb = embedding_consistency(3, &chi("3:[1]"), 7, 3);
    checks.push(Check::from_result(
        "embedding-consistency 3:[1] p=7 r=3",
        "(p-1) log_p(ℓ) / (p^r φ(Np)) · S = (p-1) log_p(ℓ) / (p φ(N)) · τ(χ^{-1}) L(0, χ) mod p^{r-1}",
        "chi=3:[1], p=7, ell=3, r=3",
        emb.clone().map(|e| (e.matches, format!("lhs = {:?}; rhs = {:?}", e.from_trace, e.closed_form))),
    ));
    checks.push(Check::from_result(
        "embedding-consistency-signed 3:[1] p=7 r=3",
        "(p-1) log_p(ℓ) / (p^r φ(Np)) · S = -(closed form) mod p^{r-1}",
        "chi=3:[1], p=7, ell=3, r=3",
        emb.map(|e| {
            (
                e.matches_negated,
                format!("lhs = {:?}; rhs = {:?}", e.from_trace, e.closed_form),
            )
        }),
    ));

    for &(l, p, ell) in &DESK_PAIRS {
        let c = chi(l);
        checks.push(Check::from_result(
            format!("ratio-law {l} p={p} ell={ell}"),
            "cup_p · log_p(ℓ) = cup_ℓ · ℒ(χ)",
            format!("chi={l}, p={p}, ell={ell}, r=2"),
            ratio_law(ell, &c, p, 2, 6)
                .map(|x| (x.holds, format!("lhs = {:?}; rhs = {:?}", x.lhs, x.rhs))),
        ));
        for q in [ell, p] {
            let res: Result<(bool, String)> = (|| {
                let vals = (1..=3u32)
                    .map(|r| cup_product(q, &c, p, r, r + 4))
                    .collect::<Result<Vec<_>>>()?;
                let integral = vals.iter().all(|v| v.working.precision() >= v.r);
                let compatible = vals[2].value.reduce(2) == vals[1].value
                    && vals[1].value.reduce(1) == vals[0].value;
                Ok((
                    integral && compatible,
                    format!("integral: {integral}, reduces r=3 -> 2 -> 1: {compatible}, valuation: {:?}", vals[2].valuation),
                ))
            })();
            checks.push(Check::from_result(
                format!("cup-integrality {l} p={p} q={q}"),
                "cup values integral and independent of r",
                format!("chi={l}, p={p}, q={q}, r=1..3"),
                res,
            ));
        }
        let n = c.modulus();
        let passed = (1..=4u32).all(|r| {
            let x = adjustment_argument(n, p, r).expect("coprime");
            x.rem_euclid(n as i64) == 1 && x.rem_euclid(p as i64) == (n % p) as i64
        });
        checks.push(Check::new(
            format!("adjustment-argument N={n} p={p}"),
            "x = p_{r,N} p^r + N: x ≡ 1 mod N, x ≡ N mod p",
            format!("N={n}, p={p}, r=1..4"),
            passed,
            "",
        ));
    }
    checks
}

fn lp() -> Vec<Check> {
    const K: u32 = 8;
    let mut checks = Vec::new();
    for &(l, p, _) in &DESK_PAIRS[..2] {
        let c = chi(l);
        let theta = theta_from_chi(&c, p).expect("theta");
        let omega2 = teichmuller_char(p).expect("omega").pow(2);
        let ctx = PadicContext::for_character(&c, p, K).expect("context");
        for (tag, psi) in [("θ", theta.clone()), ("θω²", theta.mul(&omega2))] {
            for kp in 1..=5u32 {
                let res: Result<(bool, String)> = (|| {
                    let lhs = kubota_leopoldt_at_integer(1 - kp as i64, &psi, &ctx, K)?;
                    let rhs = interpolation_value(kp, &psi, &ctx, K)?;
                    let diff = &lhs - &rhs;
                    let v = diff.valuation();
                    Ok((
                        v.is_none_or(|v| v >= K - 2),
                        format!(
                            "v_p(difference) = {}",
                            v.map_or(format!(">= {}", diff.precision()), |v| v.to_string())
                        ),
                    ))
                })();
                checks.push(Check::from_result(
                    format!("interpolation {l} p={p} psi={tag} k'={kp}"),
                    "L_p(1-k', ψ) = (1 - ψω^{-k'}(p) p^{k'-1}) L(1-k', ψω^{-k'})",
                    format!("chi={l}, p={p}, psi={}, k'={kp}, k={K}", psi.label()),
                    res,
                ));
            }
        }
        checks.push(Check::from_result(
            format!("trivial-zero {l} p={p}"),
            "L_p(0, χω) = 0",
            format!("chi={l}, p={p}, k={K}"),
            kubota_leopoldt_at_integer(0, &theta, &ctx, K).map(|v| {
                let val = v.valuation();
                (
                    val.is_none_or(|x| x >= K - 2),
                    format!(
                        "v_p = {}",
                        val.map_or(format!(">= {}", v.precision()), |x| x.to_string())
                    ),
                )
            }),
        ));
        checks.push(Check::from_result(
            format!("derivative-valuation {l} p={p}"),
            "1 <= v_p(L'_p(0, χω)) < k - 2",
            format!("chi={l}, p={p}, k={K}"),
            lp_derivative_at_0(&c, &ctx, K).map(|d| {
                let v = d.valuation();
                (
                    matches!(v, Some(x) if (1..K - 2).contains(&x)),
                    format!("v_p = {v:?}"),
                )
            }),
        ));
    }
    for &(l, p, _) in &DESK_PAIRS {
        let c = chi(l);
        let res: Result<(bool, String)> = (|| {
            let ctx = PadicContext::for_character(&c, p, 6)?;
            let r = l_invariant(&c, &ctx, 6)?;
            Ok((
                r.nonvanishing && is_exceptional(&c, p).exceptional,
                format!("ℒ = {:?}", r.value),
            ))
        })();
        checks.push(Check::from_result(
            format!("l-invariant-nonzero {l} p={p}"),
            "ℒ(χ) = L'_p(0, χω) / L(0, χ) ≠ 0",
            format!("chi={l}, p={p}, k=6"),
            res,
        ));
    }
    checks
}

fn eisenstein() -> Vec<Check> {
    const K: u32 = 6;
    const D: usize = 5;
    let c = chi("3:[1]");
    let p = 7;
    let theta = theta_from_chi(&c, p).expect("theta");
    let ctx = PadicContext::for_character(&theta, p, K).expect("context");
    let mut checks = Vec::new();
    for kw in 2..=4u32 {
        let failures: Result<Vec<u64>> = (1..=50u64)
            .into_par_iter()
            .map(|n| -> Result<Option<u64>> {
                let v = specialize(&eisenstein_coeff(n, &theta, p, D, K)?, kw)?;
                let w = classical_eisenstein_coeff(n, &theta, kw, &ctx)?;
                Ok((v.precision() < K || v != w).then_some(n))
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().flatten().collect());
        checks.push(Check::from_result(
            format!("specialization kw={kw}"),
            "v_kw(A_n) = Σ_{d|n, p∤d} θω^{2-kw}(d) d^{kw-1}",
            format!("chi=3:[1], p=7, n=1..50, D={D}, k={K}"),
            failures.map(|f| {
                (
                    f.is_empty(),
                    if f.is_empty() {
                        "50 coefficients".to_string()
                    } else {
                        format!("fails at n={f:?}")
                    },
                )
            }),
        ));
    }
    let res: Result<(bool, String)> = (|| {
        let xi = xi_theta(&theta, p, D, K)?;
        let x = trivial_zero_point(p, K);
        let v = xi.evaluate(&x)?;
        let dv = xi.derivative().evaluate(&x)?;
        Ok((
            v.is_zero() && v.precision() >= 4 && !dv.is_zero(),
            format!(
                "ξ(κ-1) = 0 mod p^{}; v_p(ξ'(κ-1)) = {:?}",
                v.precision(),
                dv.valuation()
            ),
        ))
    })();
    checks.push(Check::from_result(
        "trivial-zero-of-xi",
        "ξ_θ(κ(γ) - 1) = 0 and ξ_θ'(κ(γ) - 1) ≠ 0",
        format!("chi=3:[1], p=7, D={D}, k={K}"),
        res,
    ));
    let res: Result<(bool, String)> = (|| {
        let psi = theta.mul(&teichmuller_char(p)?.pow(2));
        let a0 = eisenstein_coeff(0, &theta, p, D, K)?;
        let half = ctx.from_padic(&PadicInt::new(p, K, 2).inverse()?);
        let mut bad = Vec::new();
        for kw in 2..=4u32 {
            let v = specialize(&a0, kw)?;
            let target = &interpolation_value(kw, &psi, &ctx, K)? * &half;
            if !v.agrees_with(&target) {
                bad.push(kw);
            }
        }
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                "kw = 2..4".into()
            } else {
                format!("fails at kw={bad:?}")
            },
        ))
    })();
    checks.push(Check::from_result(
        "constant-term",
        "v_kw(G_θ / 2) = L_p(1-kw, θω²) / 2",
        format!("chi=3:[1], p=7, D={D}, k={K}"),
        res,
    ));
    let res: Result<(bool, String)> = (|| {
        let series = (1..=144u64)
            .map(|n| eisenstein_coeff(n, &theta, p, D, K))
            .collect::<Result<Vec<_>>>()?;
        let mut bad = Vec::new();
        for m in 1..=12u64 {
            for n in 1..=12u64 {
                if gcd(m, n) != 1 {
                    continue;
                }
                let prod = series[m as usize - 1].mul(&series[n as usize - 1]);
                let target = &series[(m * n) as usize - 1];
                if !prod
                    .coeffs()
                    .iter()
                    .zip(target.coeffs())
                    .all(|(a, b)| a.agrees_with(b))
                {
                    bad.push((m, n));
                }
            }
        }
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                "coprime m, n <= 12".into()
            } else {
                format!("fails at {bad:?}")
            },
        ))
    })();
    checks.push(Check::from_result(
        "coefficient-multiplicativity",
        "A_m A_n = A_{mn} for gcd(m, n) = 1",
        format!("chi=3:[1], p=7, D={D}, k={K}"),
        res,
    ));
    checks
}
