use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{bernoulli_number, bernoulli_polynomial, dirichlet_l_at_0};
use crate::arith::lcm;
use crate::characters::{is_exceptional, teichmuller_char, theta_from_chi, DirichletChar};
use crate::context::{PadicCharacter, PadicContext};
use crate::error::{Error, Result};
use crate::padic::{angle_part, binomial_power, PadicInt, UnramifiedElt};

/// v_p of a nonzero integer.
fn int_valuation(x: &BigInt, p: u64) -> u32 {
    crate::padic::split_valuation(x, p).0
}

/// L_p(s, ψ) for s ∈ Z_p, to precision k.
///
/// Uses the convergent sum
/// L_p(s, ψ) = 1/(F (s-1)) Σ_{a<=F, p∤a} ψ(a) ⟨a⟩^{1-s} Σ_j C(1-s, j) B_j (F/a)^j
/// with ψ replaced by its primitive character and F = lcm(conductor, p).
/// The answer is known to at most one digit beyond the precision of `s`.
pub fn kubota_leopoldt(
    s: &PadicInt,
    psi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
) -> Result<UnramifiedElt> {
    let achievable = s.precision() + 1;
    if k > achievable {
        return Err(Error::PrecisionUnderflow {
            requested: k,
            achievable,
        });
    }
    lp_core(s.value(), psi, ctx, k)
}

/// L_p(s, ψ) at an exact integer s.
pub fn kubota_leopoldt_at_integer(
    s: i64,
    psi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
) -> Result<UnramifiedElt> {
    lp_core(&BigInt::from(s), psi, ctx, k)
}

pub(crate) fn lp_core(
    s: &BigInt,
    psi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
) -> Result<UnramifiedElt> {
    let p = ctx.p();
    if psi.is_odd() {
        return Err(Error::Parity {
            label: psi.label(),
            context: "the p-adic L-function of an odd character vanishes identically".into(),
        });
    }
    let psi0 = psi.primitive();
    if psi0.is_trivial() {
        return Err(Error::Domain(
            "L_p(s, 1) has a pole at s = 1 and is not evaluated here".into(),
        ));
    }
    let s_minus_1 = s - BigInt::one();
    if s_minus_1.is_zero() {
        return Err(Error::Pole("s = 1".into()));
    }
    let e = int_valuation(&s_minus_1, p);
    let f = psi0.modulus();
    let big_f = lcm(f, p);
    let kk = k + 2 + e;
    let pc = PadicCharacter::new(&psi0, p)?;
    let wctx = ctx.with_precision(kk);

    let pr = BigRational::from_integer(BigInt::from(p));
    let pb: Vec<PadicInt> = (0..kk as usize)
        .map(|j| PadicInt::from_rational(&(bernoulli_number(j) * &pr), p, kk))
        .collect::<Result<_>>()?;
    let exponent = BigInt::one() - s;
    let mut binoms = Vec::with_capacity(kk as usize);
    let mut c = BigInt::one();
    for j in 0..kk as i64 {
        if j > 0 {
            c = c * (&exponent - BigInt::from(j - 1)) / BigInt::from(j);
        }
        binoms.push(PadicInt::new(p, kk, c.clone()));
    }
    let exp_padic = PadicInt::new(p, kk, exponent.clone());
    let f_padic = PadicInt::new(p, kk, big_f);

    let mut total = wctx.zero();
    for a in 1..=big_f {
        if a % p == 0 {
            continue;
        }
        let chi_a = pc.value(&wctx, a as i64)?;
        if chi_a.is_zero() {
            continue;
        }
        let ang = angle_part(a as i64, p, kk)?;
        let power = binomial_power(&ang, &exp_padic, kk)?;
        let ratio = &f_padic * &PadicInt::new(p, kk, a).inverse()?;
        let mut inner = PadicInt::zero(p, kk);
        let mut rj = PadicInt::one(p, kk);
        for j in 0..kk as usize {
            if j > 0 {
                rj = (&rj * &ratio).reduce(kk);
            }
            inner = &inner + &(&(&binoms[j] * &pb[j]) * &rj).reduce(kk);
        }
        let x = (&power * &inner).reduce(kk);
        total = &total + &chi_a.scale(&x);
    }
    // total = p F (s - 1) L_p(s, ψ)
    let t = total.reduce(kk).div_p_power(2 + e)?;
    let unit_f = PadicInt::new(p, k, big_f / p);
    let unit_s = PadicInt::new(
        p,
        k,
        &s_minus_1 / num_traits::pow(BigInt::from(p), e as usize),
    );
    let scale = (&unit_f * &unit_s).inverse()?;
    Ok(t.reduce(k).scale(&scale))
}

/// The interpolation target (1 - φ(p) p^{k'-1}) (-B_{k',φ} / k') for φ the primitive
/// character of ψω^{-k'}, computed in the context's embedding.
pub fn interpolation_value(
    kprime: u32,
    psi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
) -> Result<UnramifiedElt> {
    let p = ctx.p();
    if kprime == 0 {
        return Err(Error::Range("k' must be positive".into()));
    }
    let phi = psi
        .mul(&teichmuller_char(p)?.pow(-(kprime as i64)))
        .primitive();
    let f = phi.modulus();
    let kk = k + 1 + int_valuation(&BigInt::from(kprime), p);
    let wctx = ctx.with_precision(kk);
    let pc = PadicCharacter::new(&phi, p)?;
    let fr = BigRational::from_integer(BigInt::from(f));
    let scale = num_traits::pow(fr.clone(), kprime as usize - 1)
        * BigRational::from_integer(BigInt::from(p));
    let mut sum = wctx.zero();
    for a in 1..=f {
        let v = pc.value(&wctx, a as i64)?;
        if v.is_zero() {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        let term = bernoulli_polynomial(kprime as usize, &x) * &scale;
        sum = &sum + &v.scale(&PadicInt::from_rational(&term, p, kk)?);
    }
    // sum = p B_{k',φ}
    let kp = PadicInt::new(p, kk, kprime);
    let vk = int_valuation(&BigInt::from(kprime), p);
    let b = sum
        .div_p_power(1 + vk)
        .map_err(|_| Error::NonIntegral { p })?;
    let kunit = PadicInt::new(
        p,
        b.precision(),
        kp.value() / num_traits::pow(BigInt::from(p), vk as usize),
    );
    let minus_b_over_k = -b.scale(&kunit.inverse()?);
    let euler = if f.is_multiple_of(p) {
        wctx.one()
    } else {
        let phip = pc.value(&wctx, p as i64)?;
        &wctx.one()
            - &phip.scale(&PadicInt::new(
                p,
                kk,
                num_traits::pow(BigInt::from(p), kprime as usize - 1),
            ))
    };
    Ok((&euler * &minus_b_over_k).reduce(k))
}

fn require_exceptional(chi: &DirichletChar, p: u64) -> Result<()> {
    let ex = is_exceptional(chi, p);
    if !ex.exceptional {
        return Err(Error::Hypothesis(format!(
            "{} is not exceptional at p = {p}: {}",
            chi.label(),
            ex.reason.map(|r| r.code()).unwrap_or("unknown")
        )));
    }
    Ok(())
}

/// L'_p(0, χω) by the symmetric quotient (L_p(h) - L_p(-h)) / 2h with h = p^{⌊k/2⌋}.
pub fn lp_derivative_at_0(
    chi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
) -> Result<UnramifiedElt> {
    lp_derivative_with_step(chi, ctx, k, (k / 2).max(1))
}

/// The symmetric quotient with step h = p^m.
///
/// The result is correct to min(k, 3 + 2m) digits: the quotient differs from the
/// derivative by Σ_{n odd >= 3} c_n h^{n-1} with v(c_n) >= n - v_p(n!).
pub fn lp_derivative_with_step(
    chi: &DirichletChar,
    ctx: &PadicContext,
    k: u32,
    m: u32,
) -> Result<UnramifiedElt> {
    if m == 0 {
        return Err(Error::Range(
            "step p^0 = 1 lands on the pole at s = 1".into(),
        ));
    }
    let p = ctx.p();
    require_exceptional(chi, p)?;
    let psi = theta_from_chi(chi, p)?;
    let h = num_traits::pow(BigInt::from(p), m as usize);
    let kk = k + m;
    let plus = lp_core(&h, &psi, ctx, kk)?;
    let minus = lp_core(&-h.clone(), &psi, ctx, kk)?;
    let diff = (&plus - &minus).div_p_power(m)?;
    let half = PadicInt::new(p, diff.precision(), 2).inverse()?;
    let achieved = k.min(3 + 2 * m);
    Ok(diff.scale(&half).reduce(achieved))
}

/// ℒ(χ) with the two factors of L'_p(0, χω) = ℒ(χ) L(0, χ).
#[derive(Clone, Debug)]
pub struct LInvariantResult {
    pub label: String,
    pub p: u64,
    pub value: UnramifiedElt,
    pub precision: u32,
    pub derivative: UnramifiedElt,
    pub l_at_zero: UnramifiedElt,
    /// Whether ℒ(χ) is certified nonzero at the achieved precision.
    pub nonvanishing: bool,
}

pub fn l_invariant(chi: &DirichletChar, ctx: &PadicContext, k: u32) -> Result<LInvariantResult> {
    let derivative = lp_derivative_at_0(chi, ctx, k)?;
    let l0 = ctx.with_precision(k).embed(&dirichlet_l_at_0(chi)?)?;
    let value = derivative.checked_div(&l0)?;
    let nonvanishing = !value.is_zero();
    Ok(LInvariantResult {
        label: chi.label(),
        p: ctx.p(),
        precision: value.precision(),
        value,
        derivative,
        l_at_zero: l0,
        nonvanishing,
    })
}
