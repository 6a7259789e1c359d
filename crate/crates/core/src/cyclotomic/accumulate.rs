use num_bigint::BigInt;
use num_traits::Zero;

use super::{reduce_mod_phi, CycloElt};
use crate::arith::euler_phi;
use crate::error::{Error, Result};

/// A sum in Q[x]/(x^M - 1) with a fixed denominator; reduced modulo Φ_M once at the end.
#[derive(Clone, Debug)]
pub struct Accumulator {
    level: u64,
    den: BigInt,
    data: Vec<BigInt>,
}

impl Accumulator {
    pub fn new(level: u64, den: BigInt) -> Self {
        Accumulator {
            level,
            den,
            data: vec![BigInt::zero(); level as usize],
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Adds (c / den) · x^e.
    pub fn add(&mut self, e: u64, c: &BigInt) {
        self.data[(e % self.level) as usize] += c;
    }

    /// Adds σ_u(y) · x^shift, for y at this level.
    pub fn add_permuted(&mut self, y: &CycloElt, u: u64, shift: u64) {
        assert_eq!(y.level(), self.level, "level mismatch");
        let m = self.level as u128;
        let scale = &self.den / y.denominator();
        assert!(
            (&scale * y.denominator() - &self.den).is_zero(),
            "accumulator denominator must be a multiple of the summand's"
        );
        for (i, c) in y.numerators().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as u128 * u as u128 + shift as u128) % m) as usize;
            self.data[e] += c * &scale;
        }
    }

    pub fn merge(&mut self, other: Accumulator) {
        assert_eq!(self.level, other.level);
        assert_eq!(self.den, other.den);
        for (a, b) in self.data.iter_mut().zip(other.data) {
            *a += b;
        }
    }

    pub fn finish(self) -> CycloElt {
        CycloElt::from_parts(self.level, self.data, self.den)
    }
}

/// A sum in Q[y]/(y^{M1} - 1) ⊗ Q[z]/(z^{M2} - 1) for coprime M1, M2, modelling
/// Q(ζ_{M1 M2}) = Q(ζ_{M1}) ⊗ Q(ζ_{M2}).
#[derive(Clone, Debug)]
pub struct TensorAccumulator {
    m1: u64,
    m2: u64,
    den: BigInt,
    data: Vec<BigInt>,
}

impl TensorAccumulator {
    pub fn new(m1: u64, m2: u64, den: BigInt) -> Self {
        assert_eq!(
            crate::arith::gcd(m1, m2),
            1,
            "tensor levels must be coprime"
        );
        TensorAccumulator {
            m1,
            m2,
            den,
            data: vec![BigInt::zero(); (m1 * m2) as usize],
        }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Adds (c / den) · y^{e1} z^{e2}.
    pub fn add(&mut self, e1: u64, e2: u64, c: &BigInt) {
        let idx = (e1 % self.m1) * self.m2 + e2 % self.m2;
        self.data[idx as usize] += c;
    }

    pub fn merge(&mut self, other: TensorAccumulator) {
        assert_eq!((self.m1, self.m2), (other.m1, other.m2));
        assert_eq!(self.den, other.den);
        for (a, b) in self.data.iter_mut().zip(other.data) {
            *a += b;
        }
    }

    /// Components along z^0, ..., z^{φ(M2)-1}, each an element of Q(ζ_{M1}).
    pub fn finish(self) -> Vec<CycloElt> {
        let m1 = self.m1 as usize;
        let m2 = self.m2 as usize;
        let phi2 = euler_phi(self.m2) as usize;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m1);
        let mut data = self.data;
        for i in 0..m1 {
            let row: Vec<BigInt> = data[i * m2..(i + 1) * m2]
                .iter_mut()
                .map(std::mem::take)
                .collect();
            rows.push(reduce_mod_phi(self.m2, row));
        }
        (0..phi2)
            .map(|j| {
                let col: Vec<BigInt> = rows.iter_mut().map(|r| std::mem::take(&mut r[j])).collect();
                CycloElt::from_parts(self.m1, col, self.den.clone())
            })
            .collect()
    }

    /// The result, which must lie in Q(ζ_{M1}).
    pub fn finish_base(self) -> Result<CycloElt> {
        let mut parts = self.finish().into_iter();
        let base = parts.next().expect("at least one component");
        if parts.any(|c| !c.is_zero()) {
            return Err(Error::Domain(
                "tensor sum does not lie in the first factor".into(),
            ));
        }
        Ok(base)
    }
}
