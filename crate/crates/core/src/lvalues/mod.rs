//! Partial zeta values, Dirichlet L-values at 0 and Kubota–Leopoldt values.

mod bernoulli;
mod kubota;

pub use bernoulli::{bernoulli_generalized, bernoulli_number, bernoulli_polynomial};
pub use kubota::{
    interpolation_value, kubota_leopoldt, kubota_leopoldt_at_integer, l_invariant,
    lp_derivative_at_0, lp_derivative_with_step, LInvariantResult,
};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::characters::DirichletChar;
use crate::cyclotomic::{root_of_unity, Accumulator, CycloElt};
use crate::error::{Error, Result};

/// ζ_{a (M)}(0) together with its arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialZetaValue {
    pub a: u64,
    pub modulus: u64,
    pub value: BigRational,
}

/// ζ_{a (M)}(0) = 1/2 - a/M for 1 <= a <= M.
pub fn partial_zeta_0(a: u64, m: u64) -> Result<BigRational> {
    if m == 0 || a == 0 || a > m {
        return Err(Error::Range(format!("need 1 <= a <= M, got a={a}, M={m}")));
    }
    Ok(BigRational::new(BigInt::from(1), BigInt::from(2))
        - BigRational::new(BigInt::from(a), BigInt::from(m)))
}

pub fn partial_zeta_value(a: u64, m: u64) -> Result<PartialZetaValue> {
    Ok(PartialZetaValue {
        a,
        modulus: m,
        value: partial_zeta_0(a, m)?,
    })
}

/// Checks t/(t-1) = -Σ_{a=1}^{M} ζ_{a (M)}(0) t^a exactly for t = ζ_M^j.
///
/// The left side uses a general inverse in Q(ζ_M), not the pole-ratio shortcut.
pub fn geometric_identity_check(m: u64, j: i64) -> Result<bool> {
    let t = root_of_unity(m, j);
    let one = CycloElt::one(m);
    if t == one {
        return Err(Error::Pole(format!("zeta_{m}^{j} = 1")));
    }
    let lhs = &t * &(&t - &one).inverse()?;
    let den = BigInt::from(2 * m);
    let mut acc = Accumulator::new(m, den);
    let jm = j.rem_euclid(m as i64) as u64;
    for a in 1..=m {
        // -(1/2 - a/M) = (2a - M) / 2M
        let c = BigInt::from(2 * a as i64 - m as i64);
        acc.add(a * jm % m, &c);
    }
    Ok(lhs == acc.finish())
}

/// L(0, χ) = Σ_{i=1}^{N-1} χ(i) ζ_{i (N)}(0), cross-checked against -B_{1,χ}.
pub fn dirichlet_l_at_0(chi: &DirichletChar) -> Result<CycloElt> {
    let via_zeta = dirichlet_l_at_0_partial_zeta(chi)?;
    let via_bernoulli = -bernoulli_generalized(1, chi);
    if via_zeta != via_bernoulli {
        return Err(Error::Domain(format!(
            "L(0, {chi}) disagrees between partial zetas and B_1"
        )));
    }
    Ok(via_zeta)
}

/// The partial-zeta path alone.
pub fn dirichlet_l_at_0_partial_zeta(chi: &DirichletChar) -> Result<CycloElt> {
    if chi.is_trivial() {
        return Err(Error::Domain(
            "L(s, χ) for trivial χ has a pole at s = 1; χ must be nontrivial".into(),
        ));
    }
    let n = chi.modulus();
    let den = BigInt::from(2 * n);
    let mut acc = Accumulator::new(chi.order(), den);
    for i in 1..n {
        if let Some(t) = chi.exponent(i) {
            acc.add(t, &BigInt::from(n as i64 - 2 * i as i64));
        }
    }
    Ok(acc.finish())
}
