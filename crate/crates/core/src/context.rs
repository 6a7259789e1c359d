//! One fixed embedding shared by every Z_p[χ]-valued quantity of a computation.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{gcd, lcm};
use crate::characters::DirichletChar;
use crate::cyclotomic::{CycloElt, Embedding};
use crate::error::{Error, Result};
use crate::padic::{teichmuller, KappaChoice, PadicInt, UnramifiedElt, UnramifiedRing};

/// The prime p, precision k, and the embedding Q(ζ_L) → Z_p[μ_L] in force.
#[derive(Clone, Debug)]
pub struct PadicContext {
    embedding: Embedding,
    powers: Arc<Vec<UnramifiedElt>>,
    kappa: KappaChoice,
}

impl PadicContext {
    pub fn new(p: u64, level: u64, k: u32) -> Result<Self> {
        if p < 5 || !crate::arith::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let embedding = Embedding::new(p, level, k)?;
        Ok(Self::from_embedding(embedding))
    }

    fn from_embedding(embedding: Embedding) -> Self {
        let l = embedding.level();
        let z = embedding.zeta().clone();
        let mut powers = Vec::with_capacity(l as usize);
        let mut acc = embedding.ring().one(embedding.precision());
        for _ in 0..l {
            powers.push(acc.clone());
            acc = &acc * &z;
        }
        PadicContext {
            kappa: KappaChoice::new(embedding.p()),
            embedding,
            powers: Arc::new(powers),
        }
    }

    /// Context for χ and its twists by powers of ω: level lcm(N', ord χ_{N'}) where
    /// χ_{N'} is the prime-to-p component of χ.
    pub fn for_character(chi: &DirichletChar, p: u64, k: u32) -> Result<Self> {
        let tame = PadicCharacter::new(chi, p)?.tame;
        Self::new(p, lcm(tame.modulus(), tame.order()), k)
    }

    pub fn with_precision(&self, k: u32) -> Self {
        if k == self.precision() {
            return self.clone();
        }
        Self::from_embedding(self.embedding.with_precision(k))
    }

    pub fn p(&self) -> u64 {
        self.embedding.p()
    }

    pub fn precision(&self) -> u32 {
        self.embedding.precision()
    }

    pub fn level(&self) -> u64 {
        self.embedding.level()
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        self.embedding.ring()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn kappa(&self) -> &KappaChoice {
        &self.kappa
    }

    pub fn convention_tag(&self) -> String {
        self.embedding.convention_tag()
    }

    pub fn zero(&self) -> UnramifiedElt {
        self.ring().zero(self.precision())
    }

    pub fn one(&self) -> UnramifiedElt {
        self.ring().one(self.precision())
    }

    pub fn from_padic(&self, x: &PadicInt) -> UnramifiedElt {
        self.ring().from_padic(x)
    }

    pub fn from_integer(&self, v: impl Into<BigInt>) -> UnramifiedElt {
        self.ring().from_integer(v, self.precision())
    }

    pub fn embed(&self, x: &CycloElt) -> Result<UnramifiedElt> {
        self.embedding.embed(x)
    }

    /// Image of ζ_m^e, m | L.
    pub fn root_of_unity(&self, m: u64, e: u64) -> Result<UnramifiedElt> {
        let l = self.level();
        if !l.is_multiple_of(m) {
            return Err(Error::LevelMismatch {
                expected: l,
                found: m,
            });
        }
        Ok(self.powers[((e % m) * (l / m)) as usize].clone())
    }

    /// ψ(a) in Z_p[μ_L], zero when gcd(a, modulus) > 1.
    pub fn char_value(&self, psi: &PadicCharacter, a: i64) -> Result<UnramifiedElt> {
        psi.value(self, a)
    }
}

/// A character mod N'p^e (e <= 1, p ∤ N') written as χ_{N'} · ω^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCharacter {
    psi: DirichletChar,
    p: u64,
    tame: DirichletChar,
    omega_power: u64,
}

impl PadicCharacter {
    pub fn new(psi: &DirichletChar, p: u64) -> Result<Self> {
        let m = psi.modulus();
        let (tame, j) = if m.is_multiple_of(p) {
            if (m / p).is_multiple_of(p) {
                return Err(Error::Domain(format!(
                    "{} has modulus divisible by {p}^2",
                    psi.label()
                )));
            }
            let n = m / p;
            let tame = psi.component(n)?;
            let wild = psi.component(p)?;
            // wild = ω^j with ω(g) = ζ_{p-1} on the canonical generator g
            let j = wild.generator_exponents()[0];
            (tame, j)
        } else {
            (psi.clone(), 0)
        };
        Ok(PadicCharacter {
            psi: psi.clone(),
            p,
            tame,
            omega_power: j,
        })
    }

    pub fn character(&self) -> &DirichletChar {
        &self.psi
    }

    pub fn tame(&self) -> &DirichletChar {
        &self.tame
    }

    pub fn omega_power(&self) -> u64 {
        self.omega_power
    }

    pub fn value(&self, ctx: &PadicContext, a: i64) -> Result<UnramifiedElt> {
        let m = self.psi.modulus() as i64;
        if gcd(a.rem_euclid(m) as u64, m as u64) != 1 {
            return Ok(ctx.zero());
        }
        let t = self.tame.exponent_i64(a).expect("unit");
        let mut v = ctx.root_of_unity(self.tame.order(), t)?;
        if self.omega_power != 0 {
            let w = teichmuller(a, self.p, ctx.precision())?.pow(self.omega_power);
            v = v.scale(&w);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{teichmuller_char, theta_from_chi};
    use crate::cyclotomic::gauss_sum;

    #[test]
    fn omega_values_are_teichmuller_lifts() {
        let w = teichmuller_char(7).unwrap();
        let ctx = PadicContext::for_character(&DirichletChar::trivial(1), 7, 4).unwrap();
        let pw = PadicCharacter::new(&w, 7).unwrap();
        assert_eq!(pw.omega_power(), 1);
        for a in 1..7 {
            let v = pw.value(&ctx, a).unwrap().as_padic().unwrap();
            assert_eq!(v, teichmuller(a, 7, 4).unwrap());
        }
    }

    #[test]
    fn omega_matches_level_p_minus_1_embedding() {
        // ω as an exact character at level 6 and through the context agree
        let w = teichmuller_char(7).unwrap();
        let e = Embedding::new(7, 6, 3).unwrap();
        for a in 1..7i64 {
            let exact = e.embed(&w.value(a)).unwrap().as_padic().unwrap();
            assert_eq!(exact, teichmuller(a, 7, 3).unwrap());
        }
    }

    #[test]
    fn theta_is_chi_times_omega() {
        let chi = DirichletChar::from_label("3:[1]").unwrap();
        let theta = theta_from_chi(&chi, 7).unwrap();
        let ctx = PadicContext::for_character(&chi, 7, 3).unwrap();
        let pt = PadicCharacter::new(&theta, 7).unwrap();
        assert_eq!(pt.tame(), &chi);
        assert_eq!(pt.omega_power(), 1);
        for a in [1i64, 2, 4, 5, 8, 10, 20] {
            let lhs = pt.value(&ctx, a).unwrap();
            let chi_a = ctx.embed(&chi.value(a)).unwrap();
            let rhs = chi_a.scale(&teichmuller(a, 7, 3).unwrap());
            assert_eq!(lhs, rhs);
        }
        assert!(pt.value(&ctx, 7).unwrap().is_zero());
    }

    #[test]
    fn degree_three_context_for_level_fourteen() {
        let chi = DirichletChar::from_label("7:[3]").unwrap();
        let ctx = PadicContext::for_character(&chi, 11, 3).unwrap();
        assert_eq!(ctx.level(), 14);
        assert_eq!(ctx.ring().degree(), 3);
        let tau = gauss_sum(&chi.inv()).unwrap();
        assert!(ctx.embed(&tau).unwrap().is_unit());
    }
}
