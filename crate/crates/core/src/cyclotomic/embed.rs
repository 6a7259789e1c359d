use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::CycloElt;
use crate::error::{Error, Result};
use crate::padic::{inverse_mod, UnramifiedElt, UnramifiedRing};

/// A fixed embedding Q(ζ_L) → Q_p(μ_L) for p ∤ L, at precision k.
///
/// ζ_L goes to the Teichmüller lift of the class of X in Z_p[X]/(g), where g is
/// the canonical factor of Φ_L mod p chosen by [`UnramifiedRing::for_roots_of_unity`].
#[derive(Clone, Debug)]
pub struct Embedding {
    p: u64,
    level: u64,
    root: u64,
    ring: Arc<UnramifiedRing>,
    zeta: UnramifiedElt,
}

impl Embedding {
    pub fn new(p: u64, level: u64, k: u32) -> Result<Self> {
        if level.is_multiple_of(p) {
            return Err(Error::Domain(format!(
                "level {level} is divisible by {p}; only prime-to-p levels embed"
            )));
        }
        let (ring, root) = UnramifiedRing::for_roots_of_unity(p, level)?;
        let zeta = ring.generator(k).teichmuller_lift();
        Ok(Embedding {
            p,
            level,
            root,
            ring,
            zeta,
        })
    }

    pub fn with_precision(&self, k: u32) -> Self {
        let zeta = self.ring.generator(k).teichmuller_lift();
        Embedding {
            zeta,
            ring: self.ring.clone(),
            ..*self
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn precision(&self) -> u32 {
        self.zeta.precision()
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    /// Image of ζ_L.
    pub fn zeta(&self) -> &UnramifiedElt {
        &self.zeta
    }

    /// For f = 1, the residue mod p of the image of ζ_L.
    pub fn root_residue(&self) -> Option<u64> {
        (self.ring.degree() == 1).then_some(self.root)
    }

    /// Human-readable record of the convention in force.
    pub fn convention_tag(&self) -> String {
        match self.root_residue() {
            Some(a) => format!("zeta_{} -> teichmuller({a}) in Z_{}", self.level, self.p),
            None => format!(
                "zeta_{} -> teichmuller(X) in Z_{}[X]/({})",
                self.level,
                self.p,
                poly_string(&self.ring.defining_polynomial())
            ),
        }
    }

    /// Image of ζ_m^e for m | L.
    pub fn root_of_unity(&self, m: u64, e: i64) -> Result<UnramifiedElt> {
        if !self.level.is_multiple_of(m) {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: m,
            });
        }
        let exp = (e.rem_euclid(m as i64) as u64) * (self.level / m);
        Ok(self.zeta.pow(exp))
    }

    pub fn embed(&self, x: &CycloElt) -> Result<UnramifiedElt> {
        let m = x.level();
        if !self.level.is_multiple_of(m) {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: m,
            });
        }
        let k = self.precision();
        let den_inv =
            inverse_mod(x.denominator(), self.p, k).ok_or(Error::NonIntegral { p: self.p })?;
        let z = self.zeta.pow(self.level / m);
        let mut acc = self.ring.zero(k);
        let mut zi = self.ring.one(k);
        for (i, c) in x.numerators().iter().enumerate() {
            if i > 0 {
                zi = &zi * &z;
            }
            if !c.is_zero() {
                acc = &acc + &zi.scale_int(c);
            }
        }
        Ok(acc.scale_int(&den_inv))
    }
}

fn poly_string(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let t = match (i, a) {
            (0, a) => a.to_string(),
            (1, 1) => "X".to_string(),
            (1, a) => format!("{a}X"),
            (i, 1) => format!("X^{i}"),
            (i, a) => format!("{a}X^{i}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

/// Image of x under the canonical embedding at its own level.
pub fn embed_unramified(x: &CycloElt, p: u64, k: u32) -> Result<UnramifiedElt> {
    Embedding::new(p, x.level(), k)?.embed(x)
}

impl UnramifiedElt {
    pub(crate) fn scale_int(&self, c: &BigInt) -> UnramifiedElt {
        self.ring().from_integer(c.clone(), self.precision()) * self.clone()
    }
}
