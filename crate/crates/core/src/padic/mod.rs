//! Precision-tracked arithmetic in Z/p^k and its unramified extensions.
//!
//! Every value carries an absolute precision `k`: the stored representative is
//! only meaningful modulo `p^k`. Operations shrink `k` whenever the inputs do
//! not determine more digits, so a reported digit is always a correct digit.

mod functions;
mod unramified;

pub use functions::{
    angle_part, binomial_coefficient, binomial_power, padic_log, padic_log_integer, s_exponent,
    teichmuller, KappaChoice,
};
pub use unramified::{UnramifiedElt, UnramifiedRing};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn p_pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Strips factors of `p` from a nonzero integer, returning (v_p(n), n / p^v).
pub(crate) fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Inverse of a unit modulo `p^k`.
pub(crate) fn inverse_mod(a: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let m = p_pow(p, k);
    let a = a.mod_floor(&m);
    let eg = a.extended_gcd(&m);
    if !eg.gcd.is_one() {
        return None;
    }
    Some(eg.x.mod_floor(&m))
}

/// An element of Z/p^k with tracked absolute precision `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    prec: u32,
    value: BigInt,
}

impl PadicInt {
    pub fn new(p: u64, prec: u32, value: impl Into<BigInt>) -> Self {
        let value = value.into().mod_floor(&p_pow(p, prec));
        PadicInt { p, prec, value }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicInt::new(p, prec, 0)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicInt::new(p, prec, 1)
    }

    /// Image of a rational number whose denominator is prime to `p`.
    pub fn from_rational(q: &BigRational, p: u64, prec: u32) -> Result<Self> {
        let den_inv = inverse_mod(q.denom(), p, prec).ok_or(Error::NonIntegral { p })?;
        Ok(PadicInt::new(p, prec, q.numer() * den_inv))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Canonical representative in `[0, p^k)`.
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        p_pow(self.p, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !(&self.value % BigInt::from(self.p)).is_zero()
    }

    /// Exact valuation, or `None` when the value is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            None
        } else {
            Some(split_valuation(&self.value, self.p).0)
        }
    }

    /// Valuation, capped at the precision for values that read as zero.
    pub fn valuation_capped(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Reduces to a lower precision; never raises it.
    pub fn reduce(&self, k: u32) -> Self {
        let k = k.min(self.prec);
        PadicInt::new(self.p, k, self.value.clone())
    }

    /// Whether the two values agree modulo `p^min(k_self, k_other)`.
    pub fn agrees_with(&self, other: &PadicInt) -> bool {
        assert_eq!(self.p, other.p, "mixed primes");
        let k = self.prec.min(other.prec);
        self.reduce(k) == other.reduce(k)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// Little-endian base-p digits, exactly `k` of them.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        let mut out = Vec::with_capacity(self.prec as usize);
        let mut v = self.value.clone();
        for _ in 0..self.prec {
            let (q, r) = v.div_rem(&pb);
            out.push(r.to_u64().expect("digit fits in u64"));
            v = q;
        }
        out
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        PadicInt {
            p: self.p,
            prec: self.prec,
            value: self.value.modpow(&BigInt::from(e), &m),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv =
            inverse_mod(&self.value, self.p, self.prec).ok_or_else(|| Error::UnitRequired {
                value: self.value.to_string(),
                p: self.p,
            })?;
        Ok(PadicInt {
            p: self.p,
            prec: self.prec,
            value: inv,
        })
    }

    /// Multiplies by `p^e`; the precision grows by `e`.
    pub fn mul_p_power(&self, e: u32) -> Self {
        PadicInt::new(self.p, self.prec + e, &self.value * p_pow(self.p, e))
    }

    /// Divides by `p^e`; the precision shrinks by `e`.
    pub fn div_p_power(&self, e: u32) -> Result<Self> {
        if e > self.prec {
            return Err(Error::PrecisionUnderflow {
                requested: e,
                achievable: self.prec,
            });
        }
        let pe = p_pow(self.p, e);
        let (q, r) = self.value.div_rem(&pe);
        if !r.is_zero() {
            return Err(Error::NotDivisible {
                divisor_valuation: e,
            });
        }
        Ok(PadicInt::new(self.p, self.prec - e, q))
    }

    /// Division by an element of possibly positive valuation.
    ///
    /// With `e = v(y)`, the quotient is known to precision
    /// `min(k_x - e, v(x) + k_y - 2e)`.
    pub fn checked_div(&self, y: &PadicInt) -> Result<Self> {
        assert_eq!(self.p, y.p, "mixed primes");
        let e = y
            .valuation()
            .ok_or(Error::Undetermined { precision: y.prec })?;
        let vx = self.valuation_capped();
        if vx < e {
            if self.valuation().is_some() {
                return Err(Error::NotDivisible {
                    divisor_valuation: e,
                });
            }
            return Err(Error::PrecisionUnderflow {
                requested: e,
                achievable: self.prec,
            });
        }
        let prec = (self.prec - e).min(vx + y.prec - 2 * e);
        let num = self.div_p_power(e)?.reduce(prec);
        let den = y.div_p_power(e)?.reduce(prec);
        Ok(&num * &den.inverse()?)
    }

    fn check_prime(&self, other: &PadicInt) {
        assert_eq!(self.p, other.p, "mixed primes");
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.p, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.check_prime(rhs);
        PadicInt::new(self.p, self.prec.min(rhs.prec), &self.value + &rhs.value)
    }
}

impl<'a> Sub<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.check_prime(rhs);
        PadicInt::new(self.p, self.prec.min(rhs.prec), &self.value - &rhs.value)
    }
}

impl<'a> Mul<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.check_prime(rhs);
        let prec = (self.prec + rhs.valuation_capped()).min(rhs.prec + self.valuation_capped());
        PadicInt::new(self.p, prec, &self.value * &rhs.value)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::new(self.p, self.prec, -&self.value)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $m(self, rhs: PadicInt) -> PadicInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_representative() {
        let x = PadicInt::new(7, 2, -1);
        assert_eq!(x.value(), &BigInt::from(48));
        assert_eq!(x.digits(), vec![6, 6]);
    }

    #[test]
    fn multiplication_gains_precision_from_valuation() {
        let a = PadicInt::new(7, 3, 7);
        let b = PadicInt::new(7, 3, 14);
        let c = &a * &b;
        assert_eq!(c.precision(), 4);
        assert_eq!(c.value(), &BigInt::from(98));
    }

    #[test]
    fn division_by_p_loses_digits() {
        let x = PadicInt::new(5, 4, 50);
        let y = x.div_p_power(1).unwrap();
        assert_eq!(y.precision(), 3);
        assert_eq!(y.value(), &BigInt::from(10));
        assert!(matches!(
            PadicInt::new(5, 4, 51).div_p_power(1),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn checked_division_precision() {
        // 14 / 7 = 2, with both known mod 7^3: quotient known mod 7^2.
        let q = PadicInt::new(7, 3, 14)
            .checked_div(&PadicInt::new(7, 3, 7))
            .unwrap();
        assert_eq!(q.precision(), 2);
        assert_eq!(q.value(), &BigInt::from(2));
    }

    #[test]
    fn from_rational_rejects_p_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            PadicInt::from_rational(&half, 7, 2).unwrap().value(),
            &BigInt::from(25)
        );
        let seventh = BigRational::new(1.into(), 7.into());
        assert_eq!(
            PadicInt::from_rational(&seventh, 7, 2),
            Err(Error::NonIntegral { p: 7 })
        );
    }

    proptest! {
        #[test]
        fn value_stays_canonical(v in -100_000i64..100_000, k in 1u32..6) {
            let x = PadicInt::new(7, k, v);
            prop_assert!(x.value() >= &BigInt::zero());
            prop_assert!(x.value() < &x.modulus());
        }

        #[test]
        fn inverse_roundtrip(v in 1i64..10_000, k in 1u32..6) {
            prop_assume!(v % 11 != 0);
            let x = PadicInt::new(11, k, v);
            let y = x.inverse().unwrap();
            let prod = &x * &y;
            prop_assert_eq!(prod.value(), &BigInt::one());
        }
    }
}
