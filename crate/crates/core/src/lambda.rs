//! Truncated Λ-adic power series: G_θ(T), ξ_θ(T), the coefficients of the Eisenstein
//! family 𝓔(θ, 1) and their weight specializations.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::{divisors, factorial_valuation};
use crate::characters::{teichmuller_char, DirichletChar};
use crate::context::{PadicCharacter, PadicContext};
use crate::error::{Error, Result};
use crate::lvalues::kubota_leopoldt_at_integer;
use crate::padic::{binomial_coefficient, s_exponent, KappaChoice, PadicInt, UnramifiedElt};

/// Working precisions above this are refused as infeasible.
pub const MAX_WORKING_PRECISION: u32 = 160;

/// What is known about the coefficients beyond the truncation degree D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TailModel {
    /// No tail: the series is a polynomial.
    Polynomial,
    /// The dropped coefficients are integral, so evaluation at x loses (D+1)·v(x) digits.
    Integral,
    /// An interpolation polynomial through D+1 nodes in pZ_p: the true series differs
    /// by Π(T - x_j)·H(T) with H integral, so evaluation in pZ_p is good to D+1 digits.
    Interpolated,
}

/// c_0 + c_1 T + ... + c_D T^D with coefficients in Z_p[χ].
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<UnramifiedElt>,
    kappa: KappaChoice,
    tail: TailModel,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<UnramifiedElt>, kappa: KappaChoice, tail: TailModel) -> Self {
        assert!(!coeffs.is_empty(), "a series needs a constant term");
        TruncatedSeries {
            coeffs,
            kappa,
            tail,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn p(&self) -> u64 {
        self.coeffs[0].p()
    }

    pub fn coeffs(&self) -> &[UnramifiedElt] {
        &self.coeffs
    }

    pub fn constant(&self) -> &UnramifiedElt {
        &self.coeffs[0]
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    pub fn kappa(&self) -> &KappaChoice {
        &self.kappa
    }

    pub fn kappa_tag(&self) -> String {
        format!("kappa={}", self.kappa.integer())
    }

    /// The smallest coefficient precision.
    pub fn precision(&self) -> u32 {
        self.coeffs
            .iter()
            .map(UnramifiedElt::precision)
            .min()
            .unwrap()
    }

    pub fn reduce(&self, k: u32) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.reduce(k)).collect(),
            kappa: self.kappa.clone(),
            tail: self.tail,
        }
    }

    pub fn scale(&self, c: &UnramifiedElt) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            kappa: self.kappa.clone(),
            tail: self.tail,
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &TruncatedSeries,
        f: impl Fn(&UnramifiedElt, &UnramifiedElt) -> UnramifiedElt,
    ) -> Self {
        assert_eq!(self.degree(), other.degree(), "truncation degrees differ");
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
            kappa: self.kappa.clone(),
            tail: self.tail.max(other.tail),
        }
    }

    /// The product truncated at degree D.
    pub fn mul(&self, other: &TruncatedSeries) -> Self {
        assert_eq!(self.degree(), other.degree(), "truncation degrees differ");
        let d = self.degree();
        let zero = self.coeffs[0]
            .ring()
            .zero(self.precision().min(other.precision()));
        let mut out = vec![zero; d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        TruncatedSeries {
            coeffs: out,
            kappa: self.kappa.clone(),
            tail: self.tail.max(other.tail),
        }
    }

    /// F((1+T)^{-1} - 1), truncated at degree D.
    pub fn substitute_inverse_shift(&self) -> Self {
        let d = self.degree();
        let ring = self.coeffs[0].ring().clone();
        let k = self.precision();
        // u = Σ_{j>=1} (-T)^j
        let u: Vec<UnramifiedElt> = (0..=d)
            .map(|j| match j {
                0 => ring.zero(k),
                j if j % 2 == 0 => ring.one(k),
                _ => -ring.one(k),
            })
            .collect();
        let u = TruncatedSeries::new(u, self.kappa.clone(), TailModel::Polynomial);
        let mut acc = TruncatedSeries::constant_series(self.coeffs[d].clone(), d, &self.kappa);
        for c in self.coeffs[..d].iter().rev() {
            acc = acc.mul(&u);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        acc.tail = self.tail;
        acc
    }

    fn constant_series(c: UnramifiedElt, d: usize, kappa: &KappaChoice) -> Self {
        let zero = c.ring().zero(c.precision());
        let mut coeffs = vec![zero; d + 1];
        coeffs[0] = c;
        TruncatedSeries::new(coeffs, kappa.clone(), TailModel::Polynomial)
    }

    /// dF/dT, of degree D - 1 (a constant stays a zero constant).
    pub fn derivative(&self) -> Self {
        let d = self.degree();
        let coeffs = if d == 0 {
            vec![self.coeffs[0].ring().zero(self.precision())]
        } else {
            (1..=d)
                .map(|j| {
                    self.coeffs[j].scale(&PadicInt::new(
                        self.p(),
                        self.coeffs[j].precision(),
                        j as u64,
                    ))
                })
                .collect()
        };
        TruncatedSeries::new(coeffs, self.kappa.clone(), self.tail)
    }

    /// Digits of F(x) guaranteed by the tail model, for x ∈ pZ_p.
    pub fn tail_bound(&self, x: &PadicInt) -> u32 {
        let d1 = self.degree() as u32 + 1;
        match (self.tail, x.valuation()) {
            (TailModel::Polynomial, _) | (_, None) => u32::MAX,
            (TailModel::Integral, Some(v)) => d1.saturating_mul(v),
            (TailModel::Interpolated, Some(_)) => d1,
        }
    }

    /// F(x) for x ∈ pZ_p, at the precision the coefficients and the tail allow.
    pub fn evaluate(&self, x: &PadicInt) -> Result<UnramifiedElt> {
        if x.valuation() == Some(0) {
            return Err(Error::Domain(format!(
                "Λ-adic series converge on pZ_{}; got a unit",
                self.p()
            )));
        }
        let mut acc = self.coeffs[self.degree()].clone();
        for c in self.coeffs[..self.degree()].iter().rev() {
            acc = &acc.scale(x) + c;
        }
        let bound = self.tail_bound(x);
        Ok(acc.reduce(bound.min(acc.precision())))
    }
}

fn budget_check(k: u32, d: usize) -> Result<u32> {
    let required = k as u64 + (d as u64 * (d as u64 + 1)) / 2;
    if required > MAX_WORKING_PRECISION as u64 {
        return Err(Error::Budget {
            requested: k,
            degree: d,
            required: required.min(u32::MAX as u64) as u32,
        });
    }
    Ok(required as u32)
}

/// θω², the character whose p-adic L-function G_θ interpolates.
fn shifted(theta: &DirichletChar, p: u64) -> Result<DirichletChar> {
    Ok(theta.mul(&teichmuller_char(p)?.pow(2)))
}

fn require_even(theta: &DirichletChar) -> Result<()> {
    if !theta.is_even() {
        return Err(Error::Parity {
            label: theta.label(),
            context: "the Eisenstein family (θ must be even)".into(),
        });
    }
    Ok(())
}

/// G_θ(T), determined by G_θ(κ^s - 1) = L_p(-s-1, θω²), as the Newton interpolation
/// through T_j = κ^j - 1 for j = 0..D.
///
/// Divided differences of order D lose at most D(D+1)/2 digits, so the values are
/// computed at k + D(D+1)/2 and the coefficients are returned at k.
pub fn g_theta_series(theta: &DirichletChar, p: u64, d: usize, k: u32) -> Result<TruncatedSeries> {
    require_even(theta)?;
    let working = budget_check(k, d)?;
    let ctx = PadicContext::for_character(theta, p, working)?;
    let psi = shifted(theta, p)?;
    let kappa = ctx.kappa().clone();
    let nodes: Vec<PadicInt> = (0..=d)
        .map(|j| PadicInt::new(p, working, kappa.power(j as u32) - BigInt::from(1)))
        .collect();
    let values: Vec<UnramifiedElt> = (0..=d)
        .into_par_iter()
        .map(|j| kubota_leopoldt_at_integer(-(j as i64) - 1, &psi, &ctx, working))
        .collect::<Result<_>>()?;
    // divided differences, in place
    let mut dd = values;
    for m in 1..=d {
        for i in (m..=d).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = ctx.from_padic(&(&nodes[i] - &nodes[i - m]));
            dd[i] = num.checked_div(&den)?;
        }
    }
    // Newton form to monomials: P = a_D; P = P·(T - x_m) + a_m
    let ring = ctx.ring().clone();
    let mut poly: Vec<UnramifiedElt> = vec![dd[d].clone()];
    for m in (0..d).rev() {
        let x = &nodes[m];
        let mut next = vec![ring.zero(working); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &c.scale(x);
        }
        next[0] = &next[0] + &dd[m];
        poly = next;
    }
    let achieved = poly.iter().map(UnramifiedElt::precision).min().unwrap();
    if achieved < k {
        return Err(Error::Budget {
            requested: k,
            degree: d,
            required: working + (k - achieved),
        });
    }
    Ok(TruncatedSeries::new(poly, kappa, TailModel::Interpolated).reduce(k))
}

/// ξ_θ(T) = G_{θ^{-1}}((1+T)^{-1} - 1).
pub fn xi_theta(theta: &DirichletChar, p: u64, d: usize, k: u32) -> Result<TruncatedSeries> {
    Ok(g_theta_series(&theta.inv(), p, d, k)?.substitute_inverse_shift())
}

/// The trivial zero T = κ(γ) - 1.
pub fn trivial_zero_point(p: u64, k: u32) -> PadicInt {
    KappaChoice::new(p).value(k) - PadicInt::one(p, k)
}

/// A_n(T; 𝓔(θ, 1)): Σ_{d|n, p∤d} θ(d)(1+T)^{s(d)} d for n >= 1, and G_θ(T)/2 for n = 0.
pub fn eisenstein_coeff(
    n: u64,
    theta: &DirichletChar,
    p: u64,
    d: usize,
    k: u32,
) -> Result<TruncatedSeries> {
    require_even(theta)?;
    if n == 0 {
        let g = g_theta_series(theta, p, d, k)?;
        let half = PadicInt::new(p, k, 2).inverse()?;
        let half = g.constant().ring().from_padic(&half);
        return Ok(g.scale(&half));
    }
    let ctx = PadicContext::for_character(theta, p, k)?;
    let pt = PadicCharacter::new(theta, p)?;
    let ks = k + factorial_valuation(d as u64, p);
    let mut coeffs = vec![ctx.zero(); d + 1];
    for dv in divisors(n).into_iter().filter(|dv| dv % p != 0) {
        let chi_d = pt.value(&ctx, dv as i64)?;
        if chi_d.is_zero() {
            continue;
        }
        let weight = chi_d.scale(&PadicInt::new(p, k, dv));
        let s = s_exponent(dv as i64, ctx.kappa(), ks)?;
        for (j, c) in coeffs.iter_mut().enumerate() {
            let b = binomial_coefficient(&s, j as u64).reduce(k);
            *c = &*c + &weight.scale(&b);
        }
    }
    Ok(TruncatedSeries::new(
        coeffs,
        ctx.kappa().clone(),
        TailModel::Integral,
    ))
}

/// v_{kw}: T ↦ κ(γ)^{kw-2} - 1, with trivial wild character.
pub fn specialize(f: &TruncatedSeries, kw: u32) -> Result<UnramifiedElt> {
    if kw < 2 {
        return Err(Error::Range(format!("weight must be >= 2, got {kw}")));
    }
    if (kw - 2) as usize > f.degree() {
        return Err(Error::Range(format!(
            "weight {kw} needs truncation degree >= {}, have {}",
            kw - 2,
            f.degree()
        )));
    }
    let k = f.precision();
    let x = PadicInt::new(f.p(), k, f.kappa().power(kw - 2) - BigInt::from(1));
    let bound = f.tail_bound(&x);
    if bound < k {
        return Err(Error::TailBound {
            requested: k,
            degree: f.degree(),
            achievable: bound,
        });
    }
    f.evaluate(&x)
}

/// Σ_{d|n, p∤d} θω^{2-kw}(d) d^{kw-1}, the classical weight-kw coefficient.
pub fn classical_eisenstein_coeff(
    n: u64,
    theta: &DirichletChar,
    kw: u32,
    ctx: &PadicContext,
) -> Result<UnramifiedElt> {
    let p = ctx.p();
    let phi = theta.mul(&teichmuller_char(p)?.pow(2 - kw as i64));
    let pc = PadicCharacter::new(&phi, p)?;
    let k = ctx.precision();
    let mut acc = ctx.zero();
    for dv in divisors(n).into_iter().filter(|dv| dv % p != 0) {
        let pw = PadicInt::new(p, k, num_traits::pow(BigInt::from(dv), kw as usize - 1));
        acc = &acc + &pc.value(ctx, dv as i64)?.scale(&pw);
    }
    Ok(acc)
}

/// The weight-kw member of 𝓔(θ, 1): coefficients 0..=terms and L_p(1 - kw, θω²).
#[derive(Clone, Debug)]
pub struct EisensteinSpecialization {
    pub weight: u32,
    pub degree: usize,
    pub precision: u32,
    /// a_0, a_1, ..., a_terms.
    pub coefficients: Vec<UnramifiedElt>,
    /// L_p(1 - kw, θω²) computed directly.
    pub lp_value: UnramifiedElt,
    pub convention: String,
    pub kappa: String,
}

/// Default truncation degree: enough for the tail bound at precision k and weight kw.
pub fn default_degree(k: u32, kw: u32) -> usize {
    (k.saturating_sub(1).max(kw.saturating_sub(2))) as usize
}

pub fn eisenstein_specialization(
    theta: &DirichletChar,
    p: u64,
    kw: u32,
    terms: u64,
    d: usize,
    k: u32,
) -> Result<EisensteinSpecialization> {
    let coefficients = (0..=terms)
        .into_par_iter()
        .map(|n| specialize(&eisenstein_coeff(n, theta, p, d, k)?, kw))
        .collect::<Result<Vec<_>>>()?;
    let ctx = PadicContext::for_character(theta, p, k)?;
    let lp_value = kubota_leopoldt_at_integer(1 - kw as i64, &shifted(theta, p)?, &ctx, k)?;
    Ok(EisensteinSpecialization {
        weight: kw,
        degree: d,
        precision: k,
        coefficients,
        lp_value,
        convention: ctx.convention_tag(),
        kappa: format!("kappa={}", ctx.kappa().integer()),
    })
}

#[cfg(test)]
mod tests;
