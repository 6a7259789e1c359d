//! Coleman power series values, the exact trace sum behind the cup-product formula,
//! and the closed-form cup products (q, 1 - ζ_{Np^r}) for q | Np.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{euler_phi, gcd, is_prime, lcm, mod_inv, valuation};
use crate::characters::{is_exceptional, theta_from_chi, DirichletChar};
use crate::context::{PadicCharacter, PadicContext};
use crate::cyclotomic::{
    gauss_sum, partial_trace_p, phi_at_one, pole_numerator, pole_ratio, root_of_unity, Accumulator,
    CycloElt, TensorAccumulator,
};
use crate::error::{Error, Result};
use crate::lvalues::{dirichlet_l_at_0, l_invariant, lp_derivative_at_0, partial_zeta_0};
use crate::padic::{padic_log_integer, teichmuller, PadicInt, UnramifiedElt};

/// The integer representative of ω(g) mod p^r closest to zero.
pub fn omega_exponent(g: u64, p: u64, r: u32) -> Result<i64> {
    if g.is_multiple_of(p) {
        return Err(Error::UnitRequired {
            value: g.to_string(),
            p,
        });
    }
    let pr = p.pow(r) as i64;
    let w = teichmuller(g as i64, p, r)?.to_u64().expect("fits") as i64;
    Ok(if 2 * w > pr { w - pr } else { w })
}

/// δg_β(ζ_{p^r} - 1) for g_β(T) = ζ_N^{G_N}(1+T)^{ω(g_p)} - 1, with its inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColemanData {
    pub g_n: u64,
    pub g_p: u64,
    pub n: u64,
    pub p: u64,
    pub r: u32,
    /// ω(g_p) as the integer exponent in (-p^r/2, p^r/2].
    pub omega: i64,
    /// The value at level N p^r.
    pub value: CycloElt,
}

/// δg_β(ζ_{p^r} - 1), computed symbolically and in closed form; the two must agree.
pub fn coleman_delta(g_n: u64, g_p: u64, n: u64, p: u64, r: u32) -> Result<CycloElt> {
    Ok(coleman_data(g_n, g_p, n, p, r)?.value)
}

pub fn coleman_data(g_n: u64, g_p: u64, n: u64, p: u64, r: u32) -> Result<ColemanData> {
    let symbolic = coleman_delta_symbolic(g_n, g_p, n, p, r)?;
    let closed = coleman_delta_closed(g_n, g_p, n, p, r)?;
    if symbolic != closed {
        return Err(Error::Domain(format!(
            "Coleman evaluation disagrees for G_N={g_n}, g_p={g_p}, N={n}, p={p}, r={r}"
        )));
    }
    Ok(ColemanData {
        g_n,
        g_p,
        n,
        p,
        r,
        omega: omega_exponent(g_p, p, r)?,
        value: closed,
    })
}

fn check_coleman_args(n: u64, p: u64, r: u32) -> Result<u64> {
    if r == 0 || gcd(n, p) != 1 || n == 0 {
        return Err(Error::Level {
            level: n.saturating_mul(p.saturating_pow(r)),
            p,
            r,
        });
    }
    Ok(n * p.pow(r))
}

/// ω(g_p) · t/(t-1) with t = ζ_N^{G_N} ζ_{p^r}^{ω(g_p)}, by the pole-ratio formula.
pub fn coleman_delta_closed(g_n: u64, g_p: u64, n: u64, p: u64, r: u32) -> Result<CycloElt> {
    let m = check_coleman_args(n, p, r)?;
    let w = omega_exponent(g_p, p, r)?;
    let pr = p.pow(r);
    // t = ζ_M^{G_N p^r + w N}
    let e = ((g_n % n) * pr + (w.rem_euclid(pr as i64) as u64) * n) % m;
    if e == 0 {
        return Err(Error::Pole("t = 1".into()));
    }
    let d = m / gcd(e, m);
    let u = e / (m / d);
    Ok(pole_ratio(m, d, u)?.scale_int(w))
}

/// The same value from g_β written as a Laurent polynomial in U = 1 + T:
/// (1+T) d/dT acts as U d/dU, and the quotient is taken with a general inverse.
pub fn coleman_delta_symbolic(g_n: u64, g_p: u64, n: u64, p: u64, r: u32) -> Result<CycloElt> {
    let m = check_coleman_args(n, p, r)?;
    let w = omega_exponent(g_p, p, r)?;
    let pr = p.pow(r);
    let zeta_n = root_of_unity(m, (pr * (g_n % n)) as i64);
    let g: Vec<(i64, CycloElt)> = vec![(w, zeta_n), (0, CycloElt::from_integer(m, -1))];
    let dg: Vec<(i64, CycloElt)> = g.iter().map(|(e, c)| (*e, c.scale_int(*e))).collect();
    // U = ζ_{p^r} = ζ_M^N
    let eval = |f: &[(i64, CycloElt)]| {
        f.iter().fold(CycloElt::zero(m), |acc, (e, c)| {
            &acc + &(c * &root_of_unity(m, e * n as i64))
        })
    };
    let den = eval(&g);
    if den.is_zero() {
        return Err(Error::Pole("t = 1".into()));
    }
    eval(&dg).checked_div(&den)
}

fn require_trace_args(chi: &DirichletChar, p: u64, r: u32) -> Result<()> {
    if !chi.is_odd() {
        return Err(Error::Parity {
            label: chi.label(),
            context: "the trace sum".into(),
        });
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            label: chi.label(),
            conductor: chi.conductor(),
        });
    }
    if gcd(chi.modulus(), p) != 1 || r == 0 || !is_prime(p) {
        return Err(Error::Domain(format!(
            "need p prime, p ∤ N and r >= 1; got N={}, p={p}, r={r}",
            chi.modulus()
        )));
    }
    Ok(())
}

/// Level of Q(ζ_N, χ), where the trace sum lives.
fn base_level(chi: &DirichletChar) -> u64 {
    lcm(chi.modulus(), chi.order())
}

/// Σ_{G_N} χ(G_N^{-1}) Σ_{m ∈ mults} Σ_{G ∈ (Z/p^r)^×} t/(t-1), t = ζ_N^{G_N} ζ_{p^r}^{mG}.
///
/// The outer sum over G runs in parallel; the partial sums are exact integers, so the
/// result does not depend on scheduling.
fn pole_double_sum(chi: &DirichletChar, p: u64, r: u32, mults: &[u64]) -> Result<CycloElt> {
    let n = chi.modulus();
    let pr = p.pow(r);
    let l1 = base_level(chi);
    let ord = chi.order();
    let d = n * pr;
    let (poly, phi1) = pole_numerator(d);
    debug_assert_eq!(phi1, BigInt::from(phi_at_one(d)));
    let units_n: Vec<(u64, u64)> = (1..n.max(2))
        .filter(|&g| gcd(g, n) == 1)
        .map(|g| {
            let ginv = mod_inv(g as i64, n).expect("unit");
            let shift = chi.exponent(ginv).expect("unit") * (l1 / ord) % l1;
            (g, shift)
        })
        .collect();
    let gs: Vec<u64> = (1..pr).filter(|g| g % p != 0).collect();
    let body = |g: u64| {
        let mut acc = TensorAccumulator::new(l1, pr, phi1.clone());
        for &mlt in mults {
            let gz = (mlt % pr) * g % pr;
            for &(gn, shift) in &units_n {
                // t · P(t) with t^{i+1} = ζ_N^{gn(i+1)} ζ_{p^r}^{gz(i+1)}
                for (i, c) in poly.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let k = i as u64 + 1;
                    let e1 = (gn * k % n) * (l1 / n) + shift;
                    let e2 = gz * k % pr;
                    acc.add(e1, e2, c);
                }
            }
        }
        acc
    };
    let total = gs
        .par_iter()
        .map(|&g| body(g))
        .reduce_with(|mut a, b| {
            a.merge(b);
            a
        })
        .unwrap_or_else(|| TensorAccumulator::new(l1, pr, phi1.clone()));
    total.finish_base()
}

/// S = Σ_{G_N} χ(G_N^{-1}) Σ_{G ∈ (Z/p^r)^×} t/(t-1) with t = ζ_N^{G_N} ζ_{p^r}^{G},
/// by brute force, in Q(ζ_{lcm(N, ord χ)}).
pub fn trace_sum_exact(chi: &DirichletChar, p: u64, r: u32) -> Result<CycloElt> {
    require_trace_args(chi, p, r)?;
    pole_double_sum(chi, p, r, &[1])
}

/// φ(p^r) τ(χ^{-1}) L(0, χ) at level lcm(N, ord χ).
pub fn trace_sum_closed_form(chi: &DirichletChar, p: u64, r: u32) -> Result<CycloElt> {
    let l1 = base_level(chi);
    let tau = gauss_sum(&chi.inv())?.lift(l1)?;
    let l0 = dirichlet_l_at_0(chi)?.lift(l1)?;
    Ok((&tau * &l0).scale_int(euler_phi(p.pow(r))))
}

/// The brute-force trace sum beside the closed form it is claimed to equal.
#[derive(Clone, Debug)]
pub struct TraceSumReport {
    pub chi: String,
    pub p: u64,
    pub r: u32,
    pub sum: CycloElt,
    /// φ(p^r) τ(χ^{-1}) L(0, χ).
    pub closed_form: CycloElt,
    pub matches_stated: bool,
    /// Whether sum = -φ(p^r) τ(χ^{-1}) L(0, χ).
    pub matches_negated: bool,
}

pub fn trace_sum_identity(chi: &DirichletChar, p: u64, r: u32) -> Result<TraceSumReport> {
    let sum = trace_sum_exact(chi, p, r)?;
    let closed_form = trace_sum_closed_form(chi, p, r)?;
    Ok(TraceSumReport {
        chi: chi.label(),
        p,
        r,
        matches_stated: sum == closed_form,
        matches_negated: sum == -closed_form.clone(),
        sum,
        closed_form,
    })
}

/// The three stages of the trace computation, each computed independently.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    /// Σ χ(G_N^{-1}) Tr(δg_β / ω(g_p)) over G_N and g_p.
    pub traced: CycloElt,
    /// Σ χ(G_N^{-1}) Σ_{g} t/(t-1) with t = ζ_N^{G_N} ζ_{p^r}^{ω(g_p) g}.
    pub expanded: CycloElt,
    /// (p - 1) times the re-indexed sum S.
    pub reindexed: CycloElt,
    pub traced_matches_expanded: bool,
    pub expanded_matches_reindexed: bool,
}

/// Follows the trace from Coleman values to the re-indexed double sum.
///
/// The factors ω(g_p^{-1}) and ω(g_p) cancel in Z_p; the check divides each δg_β by
/// its own integer prefactor, which is that cancellation made exact.
pub fn chain_check(chi: &DirichletChar, p: u64, r: u32) -> Result<ChainCheck> {
    require_trace_args(chi, p, r)?;
    let n = chi.modulus();
    let l1 = base_level(chi);
    let mut traced = CycloElt::zero(l1);
    for g_n in (1..n).filter(|&g| gcd(g, n) == 1) {
        let ginv = mod_inv(g_n as i64, n).expect("unit");
        let weight = chi.value(ginv as i64).lift(l1)?;
        let mut inner = CycloElt::zero(n);
        for g_p in 1..p {
            let data = coleman_data(g_n, g_p, n, p, r)?;
            let unscaled = data
                .value
                .scale(&BigRational::new(BigInt::one(), BigInt::from(data.omega)));
            inner = &inner + &partial_trace_p(&unscaled, n, p, r)?;
        }
        traced = &traced + &(&weight * &inner.lift(l1)?);
    }
    let mults: Vec<u64> = (1..p)
        .map(|g| omega_exponent(g, p, r).map(|w| w.rem_euclid(p.pow(r) as i64) as u64))
        .collect::<Result<_>>()?;
    let expanded = pole_double_sum(chi, p, r, &mults)?;
    let reindexed = trace_sum_exact(chi, p, r)?.scale_int(p - 1);
    Ok(ChainCheck {
        traced_matches_expanded: traced == expanded,
        expanded_matches_reindexed: expanded == reindexed,
        traced,
        expanded,
        reindexed,
    })
}

/// Σ_{i ∈ (Z/p^r)^×} ζ_{p^r}^i.
pub fn primitive_root_sum(p: u64, r: u32) -> CycloElt {
    unit_power_sum(p, r, 1)
}

/// Σ_{G ∈ (Z/p^r)^×} ζ_{p^r}^{aG}.
fn unit_power_sum(p: u64, r: u32, a: u64) -> CycloElt {
    let pr = p.pow(r);
    let mut acc = Accumulator::new(pr, BigInt::one());
    let one = BigInt::one();
    for g in (1..pr).filter(|g| g % p != 0) {
        acc.add(a % pr * g % pr, &one);
    }
    acc.finish()
}

/// ζ_{a'p^r (Np^r)}(0) = ζ_{a' (N)}(0), the scaling identity at s = 0.
pub fn scaling_identity_check(a_prime: u64, n: u64, p: u64, r: u32) -> Result<bool> {
    let pr = p.pow(r);
    Ok(partial_zeta_0(a_prime * pr, n * pr)? == partial_zeta_0(a_prime, n)?)
}

/// The expansion of S through partial zeta values, split by the divisibility of a.
#[derive(Clone, Debug)]
pub struct BranchTotals {
    /// Terms with N | a.
    pub n_divides: CycloElt,
    /// Terms with N ∤ a and v_p(a) = i, for i = 0..r-1.
    pub by_valuation: Vec<CycloElt>,
    /// Terms with N ∤ a and p^r | a.
    pub top: CycloElt,
    /// Whether Σ_G ζ_{p^r}^{aG} vanishes for every a with v_p(a) = i.
    pub termwise_zero: Vec<bool>,
    /// top = φ(p^r) τ(χ^{-1}) L(0, χ).
    pub top_matches: bool,
    /// -(sum of all branches) = S.
    pub expansion_matches: bool,
}

impl BranchTotals {
    pub fn lower_branches_vanish(&self) -> bool {
        self.n_divides.is_zero() && self.by_valuation.iter().all(CycloElt::is_zero)
    }
}

/// Σ_{G_N, G} χ(G_N^{-1}) Σ_a ζ_{a (Np^r)}(0) (ζ_N^{G_N} ζ_{p^r}^G)^a, branch by branch.
pub fn branch_totals(chi: &DirichletChar, p: u64, r: u32) -> Result<BranchTotals> {
    require_trace_args(chi, p, r)?;
    let n = chi.modulus();
    let pr = p.pow(r);
    let m = n * pr;
    let l1 = base_level(chi);
    let ord = chi.order();
    let den = BigInt::from(2 * m);
    let units_n: Vec<(u64, u64)> = (1..n)
        .filter(|&g| gcd(g, n) == 1)
        .map(|g| {
            let ginv = mod_inv(g as i64, n).expect("unit");
            (g, chi.exponent(ginv).expect("unit") * (l1 / ord) % l1)
        })
        .collect();
    let gs: Vec<u64> = (1..pr).filter(|g| g % p != 0).collect();
    // branch index: 0 for N | a, 1 + i for v_p(a) = i < r, r + 1 for the top
    let branch_of = |a: u64| -> usize {
        if a.is_multiple_of(n) {
            0
        } else {
            1 + valuation(a, p).min(r) as usize
        }
    };
    let nb = r as usize + 2;
    let accs: Vec<TensorAccumulator> = (1..=m)
        .into_par_iter()
        .fold(
            || {
                (0..nb)
                    .map(|_| TensorAccumulator::new(l1, pr, den.clone()))
                    .collect::<Vec<_>>()
            },
            |mut accs, a| {
                // ζ_{a (M)}(0) = (M - 2a) / 2M
                let c = BigInt::from(m as i64 - 2 * a as i64);
                let b = branch_of(a);
                for &(gn, shift) in &units_n {
                    let e1 = (gn * a % n) * (l1 / n) + shift;
                    for &g in &gs {
                        accs[b].add(e1, g * (a % pr) % pr, &c);
                    }
                }
                accs
            },
        )
        .reduce(
            || {
                (0..nb)
                    .map(|_| TensorAccumulator::new(l1, pr, den.clone()))
                    .collect()
            },
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    a.merge(b);
                }
                x
            },
        );
    let mut parts = accs
        .into_iter()
        .map(TensorAccumulator::finish_base)
        .collect::<Result<Vec<_>>>()?;
    let top = parts.pop().expect("top branch");
    let n_divides = parts.remove(0);
    let by_valuation = parts;
    let termwise_zero = (0..r)
        .map(|i| unit_power_sum(p, r, p.pow(i)).is_zero())
        .collect();
    let total = by_valuation
        .iter()
        .fold(&n_divides + &top, |acc, x| &acc + x);
    let s = trace_sum_exact(chi, p, r)?;
    Ok(BranchTotals {
        top_matches: top == trace_sum_closed_form(chi, p, r)?,
        expansion_matches: -total == s,
        n_divides,
        by_valuation,
        top,
        termwise_zero,
    })
}

/// θ(x)^{-1} for x = p_{r,N} p^r + N, where p_{r,N} p^r ≡ 1 mod N.
pub fn adjustment_factor(
    n: u64,
    p: u64,
    r: u32,
    theta: &DirichletChar,
    ctx: &PadicContext,
) -> Result<UnramifiedElt> {
    let x = adjustment_argument(n, p, r)?;
    let pt = PadicCharacter::new(theta, p)?;
    pt.value(ctx, x)?.inverse()
}

/// x = p_{r,N} p^r + N.
pub fn adjustment_argument(n: u64, p: u64, r: u32) -> Result<i64> {
    if gcd(n, p) != 1 {
        return Err(Error::Domain(format!("gcd({n}, {p}) != 1")));
    }
    let pr = p.pow(r);
    let inv = mod_inv(pr as i64, n).unwrap_or(0);
    Ok((inv * pr + n) as i64)
}

/// A cup product (q, 1 - ζ_{Np^r}) in Z_p[χ]/p^r under the context's embedding.
#[derive(Clone, Debug)]
pub struct CupProductValue {
    pub q: u64,
    pub n: u64,
    pub p: u64,
    pub r: u32,
    pub chi: String,
    /// With the literal adjustment θ(p_{r,N} p^r + N)^{-1}, mod p^r.
    pub value: UnramifiedElt,
    /// v_p(value), read at the working precision; None if all working digits vanish.
    pub valuation: Option<u32>,
    /// The same value at the full precision the inputs allow.
    pub working: UnramifiedElt,
    /// The normalization without any adjustment, for the element 1 - ζ_N^{p^{-r}} ζ_{p^r}.
    pub theorem_value: UnramifiedElt,
    /// The normalization with ω(N) in place of the literal factor.
    pub omega_n_value: UnramifiedElt,
    pub adjustment: UnramifiedElt,
    pub omega_n: UnramifiedElt,
    pub log_q: Option<PadicInt>,
    pub l_invariant: Option<UnramifiedElt>,
    pub convention: String,
}

struct CupInputs {
    n: u64,
    ctx: PadicContext,
    /// (p - 1)/φ(N) τ(χ^{-1}) as an element at working precision.
    prefactor: UnramifiedElt,
    adjustment: UnramifiedElt,
    omega_n: UnramifiedElt,
}

fn cup_inputs(chi: &DirichletChar, p: u64, r: u32, k: u32) -> Result<CupInputs> {
    let ex = is_exceptional(chi, p);
    if !ex.exceptional {
        return Err(Error::Hypothesis(format!(
            "{} is not exceptional at p = {p}: {}",
            chi.label(),
            ex.reason.map(|x| x.code()).unwrap_or("unknown")
        )));
    }
    if r == 0 {
        return Err(Error::Range("r must be positive".into()));
    }
    if k < r + 1 {
        return Err(Error::PrecisionUnderflow {
            requested: r,
            achievable: k.saturating_sub(1),
        });
    }
    let n = chi.modulus();
    let ctx = PadicContext::for_character(chi, p, k)?;
    let theta = theta_from_chi(chi, p)?;
    let tau = ctx.embed(&gauss_sum(&chi.inv())?)?;
    let scalar = PadicInt::new(p, k, p - 1) * PadicInt::new(p, k, euler_phi(n)).inverse()?;
    Ok(CupInputs {
        n,
        adjustment: adjustment_factor(n, p, r, &theta, &ctx)?,
        omega_n: ctx.from_padic(&teichmuller(n as i64, p, k)?),
        prefactor: tau.scale(&scalar),
        ctx,
    })
}

fn assemble(
    q: u64,
    chi: &DirichletChar,
    r: u32,
    inputs: &CupInputs,
    times_p: UnramifiedElt,
    log_q: Option<PadicInt>,
    l_inv: Option<UnramifiedElt>,
) -> Result<CupProductValue> {
    let p = inputs.ctx.p();
    // the closed forms carry 1/p; integrality means the numerator is divisible by p
    let theorem = times_p
        .div_p_power(1)
        .map_err(|_| Error::NonIntegral { p })?;
    let working = &theorem * &inputs.adjustment;
    let omega_n_value = &theorem * &inputs.omega_n;
    Ok(CupProductValue {
        q,
        n: inputs.n,
        p,
        r,
        chi: chi.label(),
        value: working.reduce(r),
        valuation: working.valuation(),
        theorem_value: theorem.reduce(r),
        omega_n_value: omega_n_value.reduce(r),
        adjustment: inputs.adjustment.reduce(r),
        omega_n: inputs.omega_n.reduce(r),
        working,
        log_q,
        l_invariant: l_inv,
        convention: inputs.ctx.convention_tag(),
    })
}

/// (ℓ, 1 - ζ_{Np^r}) = (p-1) log_p(ℓ) / (p φ(N)) · θ(x)^{-1} τ(χ^{-1}) L(0, χ), at working precision k.
pub fn cup_ell(ell: u64, chi: &DirichletChar, p: u64, r: u32, k: u32) -> Result<CupProductValue> {
    let n = chi.modulus();
    if !is_prime(ell) || !n.is_multiple_of(ell) {
        return Err(Error::Domain(format!(
            "{ell} is not a prime divisor of N = {n}"
        )));
    }
    let inputs = cup_inputs(chi, p, r, k)?;
    let log = padic_log_integer(ell as i64, p, k)?;
    let l0 = inputs.ctx.embed(&dirichlet_l_at_0(chi)?)?;
    let times_p = (&inputs.prefactor * &l0).scale(&log);
    assemble(ell, chi, r, &inputs, times_p, Some(log), None)
}

/// (p, 1 - ζ_{Np^r}) = (p-1) / (p φ(N)) · θ(x)^{-1} τ(χ^{-1}) ℒ(χ) L(0, χ), at working precision k.
///
/// ℒ(χ) L(0, χ) is L'_p(0, χω) by definition and is used in that form.
pub fn cup_p(chi: &DirichletChar, p: u64, r: u32, k: u32) -> Result<CupProductValue> {
    let inputs = cup_inputs(chi, p, r, k)?;
    let lr = l_invariant(chi, &inputs.ctx, k)?;
    let deriv = lp_derivative_at_0(chi, &inputs.ctx, k)?;
    let times_p = &inputs.prefactor * &deriv;
    assemble(p, chi, r, &inputs, times_p, None, Some(lr.value))
}

/// Dispatches on q: q = p gives cup_p, a prime q | N gives cup_ell.
pub fn cup_product(q: u64, chi: &DirichletChar, p: u64, r: u32, k: u32) -> Result<CupProductValue> {
    if q == p {
        cup_p(chi, p, r, k)
    } else {
        cup_ell(q, chi, p, r, k)
    }
}

/// r₀ = v_p(value) + 1, the smallest r at which the cup product is nonzero.
pub fn nontriviality_threshold(v: &CupProductValue) -> Result<u32> {
    match v.working.valuation() {
        Some(e) => Ok(e + 1),
        None => Err(Error::Undetermined {
            precision: v.working.precision(),
        }),
    }
}

/// cup_p · log_p(ℓ) against cup_ℓ · ℒ(χ), both mod p^r.
#[derive(Clone, Debug)]
pub struct RatioCheck {
    pub ell: u64,
    pub lhs: UnramifiedElt,
    pub rhs: UnramifiedElt,
    pub holds: bool,
}

pub fn ratio_law(ell: u64, chi: &DirichletChar, p: u64, r: u32, k: u32) -> Result<RatioCheck> {
    let cp = cup_p(chi, p, r, k)?;
    let cl = cup_ell(ell, chi, p, r, k)?;
    let lhs = cp.value.scale(cl.log_q.as_ref().expect("log"));
    let rhs = &cl.value * cp.l_invariant.as_ref().expect("L-invariant");
    let prec = r.min(lhs.precision()).min(rhs.precision());
    let (lhs, rhs) = (lhs.reduce(prec), rhs.reduce(prec));
    Ok(RatioCheck {
        ell,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// The embedded trace sum times (p-1) log_p(ℓ) / (p^r φ(Np)) against the closed form
/// without adjustment, compared mod p^{r-1}.
#[derive(Clone, Debug)]
pub struct EmbeddingConsistency {
    pub precision: u32,
    pub from_trace: UnramifiedElt,
    pub closed_form: UnramifiedElt,
    pub matches: bool,
    pub matches_negated: bool,
}

pub fn embedding_consistency(
    ell: u64,
    chi: &DirichletChar,
    p: u64,
    r: u32,
) -> Result<EmbeddingConsistency> {
    let target = r.saturating_sub(1);
    let k = 2 * r + 2;
    let cl = cup_ell(ell, chi, p, r, k)?;
    let ctx = PadicContext::for_character(chi, p, k)?;
    let s = ctx.embed(&trace_sum_exact(chi, p, r)?)?;
    let log = cl.log_q.clone().expect("log");
    let n = chi.modulus();
    let scalar = PadicInt::new(p, k, p - 1) * PadicInt::new(p, k, euler_phi(n * p)).inverse()?;
    let from_trace = s.scale(&(&log * &scalar)).div_p_power(r)?;
    let achieved = from_trace.precision().min(cl.theorem_value.precision());
    if achieved < target {
        return Err(Error::PrecisionUnderflow {
            requested: target,
            achievable: achieved,
        });
    }
    let lhs = from_trace.reduce(target);
    let rhs = cl.theorem_value.reduce(target);
    Ok(EmbeddingConsistency {
        precision: target,
        matches: lhs == rhs,
        matches_negated: lhs == -rhs.clone(),
        from_trace: lhs,
        closed_form: rhs,
    })
}

#[cfg(test)]
mod tests;
