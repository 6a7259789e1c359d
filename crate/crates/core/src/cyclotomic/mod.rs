//! Exact arithmetic in Q(ζ_M).
//!
//! Elements are stored in the power basis 1, ζ, ..., ζ^{φ(M)-1} with integer
//! numerators over one positive common denominator.

mod accumulate;
mod embed;

pub use accumulate::{Accumulator, TensorAccumulator};
pub use embed::{embed_unramified, Embedding};

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{euler_phi, gcd, lcm};
use crate::characters::DirichletChar;
use crate::error::{Error, Result};

type PolyCache = RwLock<HashMap<u64, Arc<Vec<BigInt>>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Φ_M, low degree first, by exact division of x^M - 1 by Φ_d for proper divisors d.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic polynomial of level 0");
    if let Some(p) = poly_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in crate::arith::divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &phi_d);
    }
    let out = Arc::new(num);
    poly_cache().write().unwrap().insert(m, out.clone());
    out
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// Reduces a polynomial (any length) modulo Φ_M in place, returning φ(M) coefficients.
pub(crate) fn reduce_mod_phi(m: u64, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    // fold modulo x^M - 1 first
    let mu = m as usize;
    if v.len() > mu {
        for i in mu..v.len() {
            let c = std::mem::take(&mut v[i]);
            if !c.is_zero() {
                v[i % mu] += c;
            }
        }
        v.truncate(mu);
    }
    for i in (deg..v.len()).rev() {
        let c = std::mem::take(&mut v[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi[..deg].iter().enumerate() {
            if !pj.is_zero() {
                v[i - deg + j] -= &c * pj;
            }
        }
    }
    v.resize(deg, BigInt::zero());
    v
}

/// An exact element of Q(ζ_M).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElt {
    level: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElt {
    pub(crate) fn from_parts(level: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut e = CycloElt {
            level,
            num: reduce_mod_phi(level, num),
            den,
        };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn zero(level: u64) -> Self {
        CycloElt {
            level,
            num: vec![BigInt::zero(); euler_phi(level) as usize],
            den: BigInt::one(),
        }
    }

    pub fn one(level: u64) -> Self {
        Self::from_integer(level, 1)
    }

    pub fn from_integer(level: u64, v: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(level);
        e.num[0] = v.into();
        e
    }

    pub fn from_rational(level: u64, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); euler_phi(level) as usize];
        num[0] = q.numer().clone();
        let mut e = CycloElt {
            level,
            num,
            den: q.denom().clone(),
        };
        e.normalize();
        e
    }

    /// Element with the given rational coordinates (length φ(M)).
    pub fn from_coeffs(level: u64, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(level, num, den)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// Rational coordinates in the power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Image in Q(ζ_{M'}) for a multiple M' of M.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::LevelMismatch {
                expected: target,
                found: self.level,
            });
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let step = (target / self.level) as usize;
        let mut v = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::from_parts(target, v, self.den.clone()))
    }

    /// Equality as elements of Q̄, comparing at the lcm of the two levels.
    pub fn same_value(&self, other: &CycloElt) -> bool {
        if self.level == other.level {
            return self == other;
        }
        let l = lcm(self.level, other.level);
        self.lift(l).unwrap() == other.lift(l).unwrap()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        let mut e = CycloElt {
            level: self.level,
            num,
            den: &self.den * q.denom(),
        };
        e.normalize();
        e
    }

    pub fn scale_int(&self, k: impl Into<BigInt>) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Multiplication by ζ_M^j.
    pub fn shift(&self, j: i64) -> Self {
        let m = self.level as i64;
        let mut v = vec![BigInt::zero(); self.level as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i as i64 + j).rem_euclid(m) as usize] = c.clone();
            }
        }
        Self::from_parts(self.level, v, self.den.clone())
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.level);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm over Q[x].
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Pole("inverse of zero".into()));
        }
        let a: Vec<BigRational> = self.coeffs();
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.level)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // invariant: s * a ≡ r (mod Φ)
        let (mut r0, mut r1) = (phi, trim(a));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = qpoly_divmod(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(self.level, num, den))
    }

    pub fn checked_div(&self, other: &CycloElt) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Complex conjugate, σ_{-1}.
    pub fn conjugate(&self) -> Self {
        galois_apply(&GaloisElement::new(self.level, -1).unwrap(), self).unwrap()
    }

    fn align(&self, other: &CycloElt) -> (CycloElt, CycloElt) {
        if self.level == other.level {
            return (self.clone(), other.clone());
        }
        let l = lcm(self.level, other.level);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }
}

fn trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    a
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![BigRational::zero()], trim(r));
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[i + j] -= t;
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*z{}^{i}", self.level)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")/{}", self.den)
    }
}

impl<'a> Add<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn add(self, rhs: &CycloElt) -> CycloElt {
        let (a, b) = self.align(rhs);
        let den = a.den.lcm(&b.den);
        let fa = &den / &a.den;
        let fb = &den / &b.den;
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &fa + y * &fb)
            .collect();
        let mut e = CycloElt {
            level: a.level,
            num,
            den,
        };
        e.normalize();
        e
    }
}

impl<'a> Sub<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn sub(self, rhs: &CycloElt) -> CycloElt {
        self + &(-rhs)
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        CycloElt {
            level: self.level,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn mul(self, rhs: &CycloElt) -> CycloElt {
        let (a, b) = self.align(rhs);
        let n = a.num.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycloElt::from_parts(a.level, prod, &a.den * &b.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloElt> for CycloElt {
            type Output = CycloElt;
            fn $m(self, rhs: CycloElt) -> CycloElt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        -&self
    }
}

/// ζ_M^j.
pub fn root_of_unity(m: u64, j: i64) -> CycloElt {
    let e = j.rem_euclid(m as i64) as usize;
    let mut v = vec![BigInt::zero(); m as usize];
    v[e] = BigInt::one();
    CycloElt::from_parts(m, v, BigInt::one())
}

/// σ_j: ζ_M ↦ ζ_M^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisElement {
    level: u64,
    j: u64,
}

impl GaloisElement {
    pub fn new(level: u64, j: i64) -> Result<Self> {
        let r = j.rem_euclid(level as i64) as u64;
        if gcd(r, level) != 1 {
            return Err(Error::InvalidAutomorphism { j, level });
        }
        Ok(GaloisElement { level, j: r })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponent(&self) -> u64 {
        self.j
    }

    pub fn compose(&self, other: &GaloisElement) -> GaloisElement {
        assert_eq!(self.level, other.level);
        GaloisElement {
            level: self.level,
            j: (self.j as u128 * other.j as u128 % self.level as u128) as u64,
        }
    }
}

pub fn galois_apply(sigma: &GaloisElement, x: &CycloElt) -> Result<CycloElt> {
    if sigma.level != x.level {
        return Err(Error::LevelMismatch {
            expected: sigma.level,
            found: x.level,
        });
    }
    let m = x.level as u128;
    let mut v = vec![BigInt::zero(); x.level as usize];
    for (i, c) in x.num.iter().enumerate() {
        if !c.is_zero() {
            v[(i as u128 * sigma.j as u128 % m) as usize] = c.clone();
        }
    }
    Ok(CycloElt::from_parts(x.level, v, x.den.clone()))
}

/// Splits a level of the form N p^r (p ∤ N, r >= 1).
pub(crate) fn split_level(level: u64, p: u64, r: u32) -> Result<u64> {
    let pr = p.checked_pow(r).ok_or(Error::Level { level, p, r })?;
    if r == 0 || !level.is_multiple_of(pr) || (level / pr).is_multiple_of(p) {
        return Err(Error::Level { level, p, r });
    }
    Ok(level / pr)
}

/// Σ_{g ∈ (Z/p^r)^×} σ_g(x), where σ_g fixes ζ_N and raises ζ_{p^r} to the g-th power.
/// The result lies in Q(ζ_N) and is returned at level N.
pub fn partial_trace_p(x: &CycloElt, n: u64, p: u64, r: u32) -> Result<CycloElt> {
    let big_n = split_level(x.level, p, r)?;
    if big_n != n {
        return Err(Error::Level {
            level: x.level,
            p,
            r,
        });
    }
    let pr = p.pow(r);
    // ζ_{Np^r} = ζ_N^{a} ζ_{p^r}^{b} with a p^r + b N = 1
    let a = crate::arith::mod_inv(pr as i64, n).unwrap_or(0);
    let b = crate::arith::mod_inv(n as i64, pr).expect("coprime");
    let mut acc = TensorAccumulator::new(n, pr, x.den.clone());
    for g in (1..pr).filter(|g| g % p != 0) {
        for (k, c) in x.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k as u128;
            let e1 = (k * a as u128 % n as u128) as u64;
            let e2 = (k * b as u128 % pr as u128 * g as u128 % pr as u128) as u64;
            acc.add(e1, e2, c);
        }
    }
    acc.finish_base()
}

/// τ(χ) = Σ_a χ(a) ζ_N^a for a primitive χ of conductor N, at level lcm(N, ord χ).
pub fn gauss_sum(chi: &DirichletChar) -> Result<CycloElt> {
    let n = chi.modulus();
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            label: chi.label(),
            conductor: chi.conductor(),
        });
    }
    let ord = chi.order();
    let level = lcm(n, ord);
    let mut acc = Accumulator::new(level, BigInt::one());
    let one = BigInt::one();
    for a in 0..n {
        if let Some(e) = chi.exponent(a) {
            let exp = (e * (level / ord) + a * (level / n)) % level;
            acc.add(exp, &one);
        }
    }
    Ok(acc.finish())
}

/// ζ_d^u / (ζ_d^u - 1) at level M (d | M, d > 1, gcd(u, d) = 1), without a general inverse.
///
/// With P(x) = (Φ_d(1) - Φ_d(x)) / (x - 1), one has 1/(ζ_d - 1) = P(ζ_d)/Φ_d(1).
pub fn pole_ratio(m: u64, d: u64, u: u64) -> Result<CycloElt> {
    if d <= 1 {
        return Err(Error::Pole("t = 1".into()));
    }
    let mut acc = Accumulator::new(m, BigInt::from(phi_at_one(d)));
    add_pole_ratio(&mut acc, m / d * u % m, d, &BigInt::one());
    Ok(acc.finish())
}

/// Adds c · t/(t-1) for t = ζ_M^{e}, where t has exact order d > 1.
pub(crate) fn add_pole_ratio(acc: &mut Accumulator, e: u64, d: u64, c: &BigInt) {
    let (p_coeffs, phi1) = pole_numerator(d);
    let m = acc.level();
    let scale = acc.denominator() / &phi1;
    debug_assert!((acc.denominator() % &phi1).is_zero());
    let cs = c * scale;
    for (i, pi) in p_coeffs.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        let exp = ((i as u128 + 1) * e as u128 % m as u128) as u64;
        acc.add(exp, &(&cs * pi));
    }
}

/// P(x) = (Φ_d(1) - Φ_d(x)) / (x - 1) and Φ_d(1).
pub(crate) fn pole_numerator(d: u64) -> (Vec<BigInt>, BigInt) {
    let phi = cyclotomic_polynomial(d);
    let phi1: BigInt = phi.iter().sum();
    let mut top: Vec<BigInt> = phi.iter().map(|c| -c).collect();
    top[0] += &phi1;
    // divide by (x - 1): synthetic division at 1
    let n = top.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (1..=n).rev() {
        carry += &top[i];
        q[i - 1] = carry.clone();
    }
    (q, phi1)
}

/// Φ_d(1): q when d is a power of the prime q, 1 for composite non-prime-powers.
pub fn phi_at_one(d: u64) -> u64 {
    let f = crate::arith::factorize(d);
    if f.len() == 1 {
        f[0].0
    } else {
        1
    }
}

#[cfg(test)]
mod tests;
