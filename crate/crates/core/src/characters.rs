//! Dirichlet characters as exponent tables on a fixed generator set.
//!
//! A character mod M is named `M:[e1,...,er]`: the generators of (Z/MZ)^× are
//! taken per prime power in ascending order (the smallest primitive root for an
//! odd prime power; -1 and 5 for 2^a, a >= 3; -1 for 4), and χ(g_i) = ζ_{o_i}^{e_i}
//! with o_i the order of g_i.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::{crt, factorize, gcd, is_prime, lcm, smallest_primitive_root};
use crate::cyclotomic::{root_of_unity, CycloElt};
use crate::error::{Error, Result};

/// A generator of (Z/MZ)^× with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub value: u64,
    pub order: u64,
}

/// The canonical generators of (Z/MZ)^×.
pub fn unit_group_generators(m: u64) -> Vec<Generator> {
    let parts = factorize(m);
    let mut out = Vec::new();
    for &(q, e) in &parts {
        let qe = q.pow(e);
        let rest = m / qe;
        let embed = |g: u64| -> u64 {
            if rest == 1 {
                g % qe
            } else {
                crt(g % qe, qe, 1, rest)
            }
        };
        if q == 2 {
            if e >= 2 {
                out.push(Generator {
                    value: embed(qe - 1),
                    order: 2,
                });
            }
            if e >= 3 {
                out.push(Generator {
                    value: embed(5),
                    order: 1 << (e - 2),
                });
            }
        } else {
            let g = smallest_primitive_root(q, e);
            out.push(Generator {
                value: embed(g),
                order: qe / q * (q - 1),
            });
        }
    }
    out
}

/// A Dirichlet character mod M with values χ(a) = ζ_n^{table[a]}, n the exact order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    modulus: u64,
    exps: Vec<u64>,
    order: u64,
    table: Vec<Option<u64>>,
    conductor: u64,
    odd: bool,
}

impl DirichletChar {
    /// The character with χ(g_i) = ζ_{o_i}^{e_i} on the canonical generators.
    pub fn new(modulus: u64, exps: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Label("modulus must be positive".into()));
        }
        let gens = unit_group_generators(modulus);
        if gens.len() != exps.len() {
            return Err(Error::Label(format!(
                "modulus {modulus} has {} generators, got {} exponents",
                gens.len(),
                exps.len()
            )));
        }
        let exps: Vec<u64> = exps.iter().zip(&gens).map(|(e, g)| e % g.order).collect();
        let order = exps
            .iter()
            .zip(&gens)
            .fold(1, |acc, (e, g)| lcm(acc, g.order / gcd(*e, g.order)));
        // walk the product of cyclic factors
        let mut table = vec![None; modulus as usize];
        let mut elems: Vec<(u64, u64)> = vec![(1 % modulus, 0)];
        for (g, e) in gens.iter().zip(&exps) {
            let step = e * order / g.order % order;
            let mut next = Vec::with_capacity(elems.len() * g.order as usize);
            for &(a, t) in &elems {
                let mut x = a;
                let mut s = t;
                for _ in 0..g.order {
                    next.push((x, s));
                    x = (x as u128 * g.value as u128 % modulus as u128) as u64;
                    s = (s + step) % order;
                }
            }
            elems = next;
        }
        for (a, t) in elems {
            table[a as usize] = Some(t);
        }
        let mut chi = DirichletChar {
            modulus,
            exps,
            order,
            table,
            conductor: 0,
            odd: false,
        };
        chi.odd = match chi.exponent(modulus - 1) {
            Some(t) => order % 2 == 0 && t == order / 2 && modulus > 2,
            None => false,
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    /// Builds a character from its values ζ_n^{f(a)} on units; `f` must be a homomorphism.
    pub fn from_fn(modulus: u64, n: u64, f: impl Fn(u64) -> u64) -> Result<Self> {
        let gens = unit_group_generators(modulus);
        let mut exps = Vec::with_capacity(gens.len());
        for g in &gens {
            let t = f(g.value) % n;
            // ζ_n^t = ζ_o^{t o / n}
            let num = t as u128 * g.order as u128;
            if !num.is_multiple_of(n as u128) {
                return Err(Error::Domain(format!(
                    "value on generator {} is not an {}-th root of unity",
                    g.value, g.order
                )));
            }
            exps.push((num / n as u128) as u64);
        }
        let chi = DirichletChar::new(modulus, &exps)?;
        debug_assert!((1..modulus).filter(|a| gcd(*a, modulus) == 1).all(|a| {
            let t = chi.exponent(a).unwrap();
            t as u128 * n as u128 == (f(a) % n) as u128 * chi.order as u128
        }));
        Ok(chi)
    }

    pub fn trivial(modulus: u64) -> Self {
        let k = unit_group_generators(modulus).len();
        DirichletChar::new(modulus, &vec![0; k]).unwrap()
    }

    /// Parses `M:[e1,e2,...]`.
    pub fn from_label(label: &str) -> Result<Self> {
        let bad = || Error::Label(label.to_string());
        let (m, rest) = label.split_once(':').ok_or_else(bad)?;
        let modulus: u64 = m.trim().parse().map_err(|_| bad())?;
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let exps = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        let gens = unit_group_generators(modulus);
        if exps.len() != gens.len() || exps.iter().zip(&gens).any(|(e, g)| *e >= g.order) {
            return Err(bad());
        }
        DirichletChar::new(modulus, &exps)
    }

    pub fn label(&self) -> String {
        let e: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        format!("{}:[{}]", self.modulus, e.join(","))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator_exponents(&self) -> &[u64] {
        &self.exps
    }

    /// t with χ(a) = ζ_n^t, or `None` when gcd(a, M) > 1.
    pub fn exponent(&self, a: u64) -> Option<u64> {
        self.table[(a % self.modulus) as usize]
    }

    pub fn exponent_i64(&self, a: i64) -> Option<u64> {
        self.exponent(a.rem_euclid(self.modulus as i64) as u64)
    }

    /// χ(a) as an element of Q(ζ_n), n the order; zero when gcd(a, M) > 1.
    pub fn value(&self, a: i64) -> CycloElt {
        match self.exponent_i64(a) {
            Some(t) => root_of_unity(self.order, t as i64),
            None => CycloElt::zero(self.order),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn is_even(&self) -> bool {
        !self.odd
    }

    fn compute_conductor(&self) -> u64 {
        let m = self.modulus;
        for d in crate::arith::divisors(m) {
            let trivial_on_kernel = (1..m)
                .filter(|a| a % d == 1 % d && gcd(*a, m) == 1)
                .all(|a| self.exponent(a) == Some(0));
            if trivial_on_kernel {
                return d;
            }
        }
        m
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> DirichletChar {
        if self.is_primitive() {
            return self.clone();
        }
        let c = self.conductor;
        let m = self.modulus;
        let lift = |a: u64| -> u64 {
            let mut x = a % c;
            while gcd(x, m) != 1 {
                x += c;
            }
            x
        };
        DirichletChar::from_fn(c, self.order, |a| self.exponent(lift(a)).unwrap()).unwrap()
    }

    /// The character induced to a multiple of the modulus.
    pub fn lift(&self, modulus: u64) -> Result<DirichletChar> {
        if !modulus.is_multiple_of(self.modulus) {
            return Err(Error::LevelMismatch {
                expected: modulus,
                found: self.modulus,
            });
        }
        DirichletChar::from_fn(modulus, self.order, |a| {
            self.exponent(a % self.modulus).unwrap()
        })
    }

    /// Product character, at the lcm of the moduli.
    pub fn mul(&self, other: &DirichletChar) -> DirichletChar {
        let m = lcm(self.modulus, other.modulus);
        let n = lcm(self.order, other.order);
        let (sa, sb) = (n / self.order, n / other.order);
        DirichletChar::from_fn(m, n, |a| {
            (self.exponent(a % self.modulus).unwrap() * sa
                + other.exponent(a % other.modulus).unwrap() * sb)
                % n
        })
        .unwrap()
    }

    pub fn inv(&self) -> DirichletChar {
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(unit_group_generators(self.modulus))
            .map(|(e, g)| (g.order - e) % g.order)
            .collect();
        DirichletChar::new(self.modulus, &exps).unwrap()
    }

    /// χ^k for any integer k.
    pub fn pow(&self, k: i64) -> DirichletChar {
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(unit_group_generators(self.modulus))
            .map(|(e, g)| (*e as i128 * k as i128).rem_euclid(g.order as i128) as u64)
            .collect();
        DirichletChar::new(self.modulus, &exps).unwrap()
    }

    /// Restriction to the factor (Z/dZ)^× of (Z/MZ)^× for a unitary divisor d of M.
    pub fn component(&self, d: u64) -> Result<DirichletChar> {
        let m = self.modulus;
        if !m.is_multiple_of(d) || gcd(d, m / d) != 1 {
            return Err(Error::Domain(format!(
                "{d} is not a unitary divisor of {m}"
            )));
        }
        let rest = m / d;
        DirichletChar::from_fn(d, self.order, |a| {
            let x = if rest == 1 {
                a % d
            } else {
                crt(a % d, d, 1, rest)
            };
            self.exponent(x).unwrap()
        })
    }

    /// Σ_{a ∈ (Z/MZ)^×} χ(a), exactly.
    pub fn character_sum(&self) -> CycloElt {
        let mut acc = crate::cyclotomic::Accumulator::new(self.order, BigInt::from(1));
        let one = BigInt::from(1);
        for t in self.table.iter().flatten() {
            acc.add(*t, &one);
        }
        acc.finish()
    }
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// All characters mod M, ordered by their labels' exponent lists.
pub fn enumerate_characters(m: u64) -> Vec<DirichletChar> {
    let gens = unit_group_generators(m);
    let mut out = Vec::new();
    let mut exps = vec![0u64; gens.len()];
    loop {
        out.push(DirichletChar::new(m, &exps).unwrap());
        // odometer, last index fastest
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < gens[i].order {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// ω mod p: ω(g) = ζ_{p-1} on the smallest primitive root g, i.e. label `p:[1]`.
pub fn teichmuller_char(p: u64) -> Result<DirichletChar> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    DirichletChar::new(p, &[1])
}

/// Why a character fails to be exceptional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExceptionalityFailure {
    PrimeTooSmall,
    NotPrime,
    PDividesN,
    PDividesPhiN,
    NotPrimitive,
    NotOdd,
    ChiOfPNotOne,
}

impl ExceptionalityFailure {
    pub fn code(&self) -> &'static str {
        match self {
            ExceptionalityFailure::PrimeTooSmall => "p_less_than_5",
            ExceptionalityFailure::NotPrime => "p_not_prime",
            ExceptionalityFailure::PDividesN => "p_divides_N",
            ExceptionalityFailure::PDividesPhiN => "p_divides_phi_N",
            ExceptionalityFailure::NotPrimitive => "chi_not_primitive",
            ExceptionalityFailure::NotOdd => "chi_not_odd",
            ExceptionalityFailure::ChiOfPNotOne => "chi_p_not_1",
        }
    }
}

/// Outcome of [`is_exceptional`], with the first failing hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exceptionality {
    pub exceptional: bool,
    pub reason: Option<ExceptionalityFailure>,
}

impl Exceptionality {
    fn fail(r: ExceptionalityFailure) -> Self {
        Exceptionality {
            exceptional: false,
            reason: Some(r),
        }
    }
}

/// Whether θ = χω is exceptional at p, for χ given by its conductor-N presentation.
pub fn is_exceptional(chi: &DirichletChar, p: u64) -> Exceptionality {
    use ExceptionalityFailure::*;
    let n = chi.modulus();
    if !is_prime(p) {
        return Exceptionality::fail(NotPrime);
    }
    if p < 5 {
        return Exceptionality::fail(PrimeTooSmall);
    }
    if n.is_multiple_of(p) {
        return Exceptionality::fail(PDividesN);
    }
    if crate::arith::euler_phi(n).is_multiple_of(p) {
        return Exceptionality::fail(PDividesPhiN);
    }
    if !chi.is_primitive() {
        return Exceptionality::fail(NotPrimitive);
    }
    if !chi.is_odd() {
        return Exceptionality::fail(NotOdd);
    }
    if chi.exponent(p % n) != Some(0) {
        return Exceptionality::fail(ChiOfPNotOne);
    }
    Exceptionality {
        exceptional: true,
        reason: None,
    }
}

/// θ = χω mod Np.
pub fn theta_from_chi(chi: &DirichletChar, p: u64) -> Result<DirichletChar> {
    if !chi.is_odd() {
        return Err(Error::Parity {
            label: chi.label(),
            context: "theta = chi * omega must be even, so chi must be odd".into(),
        });
    }
    Ok(chi.mul(&teichmuller_char(p)?))
}
