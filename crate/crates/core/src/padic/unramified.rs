use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{inverse_mod, p_pow, split_valuation, PadicInt};
use crate::arith::mult_order;
use crate::cyclotomic::cyclotomic_polynomial;
use crate::error::{Error, Result};

/// Largest number of candidate factors scanned when choosing the defining polynomial.
const FACTOR_SEARCH_LIMIT: u64 = 1 << 24;

/// Z_p[X]/(g(X)) for a monic g that is irreducible modulo p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnramifiedRing {
    p: u64,
    /// c_0..c_{f-1} of g = X^f + c_{f-1} X^{f-1} + ... + c_0, each in [0, p).
    poly: Vec<u64>,
}

impl UnramifiedRing {
    /// Ring defined by the given monic polynomial; irreducibility mod p is checked.
    pub fn new(p: u64, poly: Vec<u64>) -> Result<Arc<Self>> {
        let mut full: Vec<i64> = poly.iter().map(|&c| (c % p) as i64).collect();
        full.push(1);
        if !fp_is_irreducible(&full, p) {
            return Err(Error::Domain(format!(
                "defining polynomial {full:?} is reducible mod {p}"
            )));
        }
        Ok(Arc::new(UnramifiedRing {
            p,
            poly: poly.iter().map(|c| c % p).collect(),
        }))
    }

    /// Z_p itself (f = 1).
    pub fn prime_field(p: u64) -> Arc<Self> {
        Arc::new(UnramifiedRing { p, poly: vec![0] })
    }

    /// The ring Z_p[μ_m] for p ∤ m, modelled on a canonical irreducible factor
    /// of Φ_m mod p. Returns the ring and the residue of the chosen root, which
    /// is the class of X (for f = 1, the integer root itself).
    ///
    /// Convention: for f = 1 the factor X - a with the smallest root a in [1, p);
    /// for f > 1 the monic factor whose coefficients (c_0, ..., c_{f-1}), read as
    /// the base-p integer Σ c_i p^i, are smallest.
    pub fn for_roots_of_unity(p: u64, m: u64) -> Result<(Arc<Self>, u64)> {
        if m.is_multiple_of(p) {
            return Err(Error::Domain(format!("{p} divides the level {m}")));
        }
        let f = mult_order(p % m.max(1), m.max(1)) as usize;
        let phi: Vec<i64> = cyclotomic_polynomial(m)
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_i64().unwrap())
            .collect();
        if f == 1 {
            let a = (1..p)
                .find(|&a| fp_eval(&phi, a, p) == 0)
                .expect("Φ_m splits mod p when p ≡ 1 mod m");
            return Ok((
                Arc::new(UnramifiedRing {
                    p,
                    poly: vec![(p - a) % p],
                }),
                a,
            ));
        }
        let count = (p as u128).pow(f as u32);
        if count > FACTOR_SEARCH_LIMIT as u128 {
            return Err(Error::ExtensionTooLarge { p, f });
        }
        for n in 0..count as u64 {
            let mut coeffs = Vec::with_capacity(f + 1);
            let mut t = n;
            for _ in 0..f {
                coeffs.push((t % p) as i64);
                t /= p;
            }
            coeffs.push(1);
            if fp_rem(&phi, &coeffs, p).iter().all(|&c| c == 0) {
                let poly = coeffs[..f].iter().map(|&c| c as u64).collect();
                return Ok((Arc::new(UnramifiedRing { p, poly }), 0));
            }
        }
        unreachable!("Φ_m has an irreducible factor of degree ord_m(p)")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.poly.len()
    }

    /// Coefficients c_0..c_{f-1}, 1 of the defining polynomial.
    pub fn defining_polynomial(&self) -> Vec<u64> {
        let mut v = self.poly.clone();
        v.push(1);
        v
    }

    pub fn zero(self: &Arc<Self>, prec: u32) -> UnramifiedElt {
        UnramifiedElt {
            ring: self.clone(),
            prec,
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>, prec: u32) -> UnramifiedElt {
        self.from_integer(1, prec)
    }

    pub fn from_integer(self: &Arc<Self>, v: impl Into<BigInt>, prec: u32) -> UnramifiedElt {
        let mut e = self.zero(prec);
        e.coeffs[0] = v.into();
        e.normalize();
        e
    }

    pub fn from_padic(self: &Arc<Self>, x: &PadicInt) -> UnramifiedElt {
        assert_eq!(x.p(), self.p, "mixed primes");
        self.from_integer(x.value().clone(), x.precision())
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational, prec: u32) -> Result<UnramifiedElt> {
        Ok(self.from_padic(&PadicInt::from_rational(q, self.p, prec)?))
    }

    /// The class of X.
    pub fn generator(self: &Arc<Self>, prec: u32) -> UnramifiedElt {
        if self.degree() == 1 {
            // X ≡ -c_0
            return self.from_integer(-BigInt::from(self.poly[0]), prec);
        }
        let mut e = self.zero(prec);
        e.coeffs[1] = BigInt::one();
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<BigInt>, prec: u32) -> UnramifiedElt {
        assert_eq!(coeffs.len(), self.degree());
        let mut e = UnramifiedElt {
            ring: self.clone(),
            prec,
            coeffs,
        };
        e.normalize();
        e
    }
}

/// An element of Z_{p^f}/p^k.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnramifiedElt {
    ring: Arc<UnramifiedRing>,
    prec: u32,
    coeffs: Vec<BigInt>,
}

impl UnramifiedElt {
    fn normalize(&mut self) {
        let m = p_pow(self.ring.p, self.prec);
        for c in &mut self.coeffs {
            *c = c.mod_floor(&m);
        }
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Exact valuation, or `None` when zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| split_valuation(c, self.ring.p).0)
            .min()
    }

    pub fn valuation_capped(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn reduce(&self, k: u32) -> Self {
        let mut e = self.clone();
        e.prec = k.min(self.prec);
        e.normalize();
        e
    }

    pub fn agrees_with(&self, other: &UnramifiedElt) -> bool {
        self.check_ring(other);
        let k = self.prec.min(other.prec);
        self.reduce(k) == other.reduce(k)
    }

    /// Coefficient 0 as a p-adic integer, if the element lies in Z_p.
    pub fn as_padic(&self) -> Option<PadicInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(PadicInt::new(
                self.ring.p,
                self.prec,
                self.coeffs[0].clone(),
            ))
        } else {
            None
        }
    }

    /// Little-endian base-p digits of each coefficient.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        self.coeffs
            .iter()
            .map(|c| PadicInt::new(self.ring.p, self.prec, c.clone()).digits())
            .collect()
    }

    pub fn scale(&self, x: &PadicInt) -> Self {
        self * &self.ring.from_padic(x)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_big(&BigInt::from(e))
    }

    pub fn pow_big(&self, e: &BigInt) -> Self {
        let mut acc = self.ring.one(self.prec);
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = &acc * &base;
            }
            if i + 1 < bits {
                base = &base * &base;
            }
        }
        acc.reduce(self.prec)
    }

    /// The root of unity congruent to this element (x^{q^{k-1}}, q = p^f).
    pub fn teichmuller_lift(&self) -> Self {
        let q = num_traits::pow(BigInt::from(self.ring.p), self.degree());
        let e = num_traits::pow(q, self.prec.saturating_sub(1) as usize);
        self.pow_big(&e)
    }

    pub fn mul_p_power(&self, e: u32) -> Self {
        let pe = p_pow(self.ring.p, e);
        let mut out = self.clone();
        out.prec += e;
        for c in &mut out.coeffs {
            *c *= &pe;
        }
        out.normalize();
        out
    }

    pub fn div_p_power(&self, e: u32) -> Result<Self> {
        if e > self.prec {
            return Err(Error::PrecisionUnderflow {
                requested: e,
                achievable: self.prec,
            });
        }
        let pe = p_pow(self.ring.p, e);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&pe);
            if !r.is_zero() {
                return Err(Error::NotDivisible {
                    divisor_valuation: e,
                });
            }
            coeffs.push(q);
        }
        Ok(self.ring.from_coeffs(coeffs, self.prec - e))
    }

    /// Inverse of a unit, by Gaussian elimination on the multiplication matrix.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::UnitRequired {
                value: format!("{self:?}"),
                p: self.ring.p,
            });
        }
        let f = self.degree();
        let p = self.ring.p;
        let m = p_pow(p, self.prec);
        // column j = self * X^j
        let mut cols = Vec::with_capacity(f);
        let mut basis = self.ring.one(self.prec);
        let x = self.ring.generator_raw(self.prec);
        for _ in 0..f {
            cols.push((self * &basis).coeffs);
            basis = &basis * &x;
        }
        let mut a: Vec<Vec<BigInt>> = (0..f)
            .map(|i| {
                let mut row: Vec<BigInt> = (0..f).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                });
                row
            })
            .collect();
        for col in 0..f {
            let piv = (col..f)
                .find(|&r| !(&a[r][col] % BigInt::from(p)).is_zero())
                .expect("multiplication by a unit is invertible");
            a.swap(col, piv);
            let inv = inverse_mod(&a[col][col], p, self.prec).expect("unit pivot");
            for v in a[col].iter_mut() {
                *v = (&*v * &inv).mod_floor(&m);
            }
            for r in 0..f {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                        *x = (&*x - y * &factor).mod_floor(&m);
                    }
                }
            }
        }
        let coeffs = (0..f).map(|i| a[i][f].clone()).collect();
        Ok(self.ring.from_coeffs(coeffs, self.prec))
    }

    /// Division by an element of possibly positive valuation; see [`PadicInt::checked_div`].
    pub fn checked_div(&self, y: &UnramifiedElt) -> Result<Self> {
        self.check_ring(y);
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

    fn check_ring(&self, other: &UnramifiedElt) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "elements of different unramified rings"
        );
    }
}

impl UnramifiedRing {
    fn generator_raw(self: &Arc<Self>, prec: u32) -> UnramifiedElt {
        if self.degree() == 1 {
            return self.one(prec);
        }
        self.generator(prec)
    }
}

impl fmt::Debug for UnramifiedElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            return write!(f, "{} + O({}^{})", self.coeffs[0], self.ring.p, self.prec);
        }
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*X^{i}")?;
        }
        write!(f, ") + O({}^{})", self.ring.p, self.prec)
    }
}

impl<'a> Add<&'a UnramifiedElt> for &'a UnramifiedElt {
    type Output = UnramifiedElt;
    fn add(self, rhs: &UnramifiedElt) -> UnramifiedElt {
        self.check_ring(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        self.ring.from_coeffs(coeffs, self.prec.min(rhs.prec))
    }
}

impl<'a> Sub<&'a UnramifiedElt> for &'a UnramifiedElt {
    type Output = UnramifiedElt;
    fn sub(self, rhs: &UnramifiedElt) -> UnramifiedElt {
        self.check_ring(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        self.ring.from_coeffs(coeffs, self.prec.min(rhs.prec))
    }
}

impl Neg for &UnramifiedElt {
    type Output = UnramifiedElt;
    fn neg(self) -> UnramifiedElt {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        self.ring.from_coeffs(coeffs, self.prec)
    }
}

impl<'a> Mul<&'a UnramifiedElt> for &'a UnramifiedElt {
    type Output = UnramifiedElt;
    fn mul(self, rhs: &UnramifiedElt) -> UnramifiedElt {
        self.check_ring(rhs);
        let f = self.degree();
        let prec = (self.prec + rhs.valuation_capped()).min(rhs.prec + self.valuation_capped());
        let m = p_pow(self.ring.p, prec);
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        for i in (f..2 * f - 1).rev() {
            let top = std::mem::take(&mut prod[i]).mod_floor(&m);
            if top.is_zero() {
                continue;
            }
            for (j, c) in self.ring.poly.iter().enumerate() {
                prod[i - f + j] -= &top * BigInt::from(*c);
            }
        }
        prod.truncate(f);
        self.ring.from_coeffs(prod, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<UnramifiedElt> for UnramifiedElt {
            type Output = UnramifiedElt;
            fn $m(self, rhs: UnramifiedElt) -> UnramifiedElt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UnramifiedElt {
    type Output = UnramifiedElt;
    fn neg(self) -> UnramifiedElt {
        -&self
    }
}

// --- polynomials over F_p, coefficient vectors low degree first ---

fn fp_trim(a: &mut Vec<i64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn fp_eval(a: &[i64], x: u64, p: u64) -> i64 {
    let p = p as i128;
    let mut acc: i128 = 0;
    for &c in a.iter().rev() {
        acc = (acc * x as i128 + c as i128).rem_euclid(p);
    }
    acc as i64
}

fn fp_rem(a: &[i64], b: &[i64], p: u64) -> Vec<i64> {
    let p = p as i64;
    let mut r: Vec<i64> = a.iter().map(|c| c.rem_euclid(p)).collect();
    let mut b: Vec<i64> = b.iter().map(|c| c.rem_euclid(p)).collect();
    fp_trim(&mut b);
    let db = b.len() - 1;
    let lead_inv =
        crate::arith::mod_inv(b[db], p as u64).expect("nonzero leading coefficient") as i64;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = (r[dr] as i128 * lead_inv as i128).rem_euclid(p as i128) as i64;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                r[idx] = ((r[idx] as i128 - c as i128 * bj as i128).rem_euclid(p as i128)) as i64;
            }
        }
        r.pop();
        if r.is_empty() {
            r.push(0);
        }
    }
    fp_trim(&mut r);
    r
}

/// Irreducibility over F_p by trial division (small degrees only).
fn fp_is_irreducible(a: &[i64], p: u64) -> bool {
    let n = a.len() - 1;
    if n <= 1 {
        return true;
    }
    for d in 1..=n / 2 {
        let count = (p as u128).pow(d as u32);
        if count > FACTOR_SEARCH_LIMIT as u128 {
            return true;
        }
        for idx in 0..count as u64 {
            let mut cand = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                cand.push((t % p) as i64);
                t /= p;
            }
            cand.push(1);
            if fp_rem(a, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_factor_for_cube_roots_mod_7() {
        let (ring, root) = UnramifiedRing::for_roots_of_unity(7, 3).unwrap();
        assert_eq!(ring.degree(), 1);
        assert_eq!(root, 2);
        let (ring6, root6) = UnramifiedRing::for_roots_of_unity(7, 6).unwrap();
        assert_eq!(root6, 3);
        assert_eq!(ring6.defining_polynomial(), vec![4, 1]);
    }

    #[test]
    fn degree_three_factor_for_level_14_mod_11() {
        let (ring, _) = UnramifiedRing::for_roots_of_unity(11, 14).unwrap();
        assert_eq!(ring.degree(), 3);
        let z = ring.generator(6).teichmuller_lift();
        assert_eq!(z.pow(14), ring.one(6));
        assert_ne!(z.pow(7), ring.one(6));
        assert_ne!(z.pow(2), ring.one(6));
    }

    #[test]
    fn reducible_polynomial_rejected() {
        // X^2 + 3X + 2 = (X + 1)(X + 2)
        assert!(UnramifiedRing::new(7, vec![2, 3]).is_err());
        assert!(UnramifiedRing::new(7, vec![1, 1]).is_err()); // X^2+X+1 splits mod 7
        assert!(UnramifiedRing::new(5, vec![2, 0]).is_ok()); // X^2 + 2
    }

    fn elt(ring: &Arc<UnramifiedRing>, a: i64, b: i64, k: u32) -> UnramifiedElt {
        ring.from_coeffs(vec![BigInt::from(a), BigInt::from(b)], k)
    }

    proptest! {
        #[test]
        fn inverse_in_quadratic_extension(a in 0i64..5000, b in 0i64..5000, k in 1u32..6) {
            let ring = UnramifiedRing::new(5, vec![2, 0]).unwrap();
            let x = elt(&ring, a, b, k);
            prop_assume!(x.is_unit());
            let y = x.inverse().unwrap();
            prop_assert_eq!(&x * &y, ring.one(k));
        }

        #[test]
        fn ring_axioms(a in 0i64..5000, b in 0i64..5000, c in 0i64..5000, d in 0i64..5000) {
            let ring = UnramifiedRing::new(5, vec![2, 0]).unwrap();
            let x = elt(&ring, a, b, 4);
            let y = elt(&ring, c, d, 4);
            let z = elt(&ring, a + c, b * d, 4);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }
    }
}
