use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::DirichletChar;
use crate::cyclotomic::{Accumulator, CycloElt};

fn memo() -> &'static RwLock<Vec<BigRational>> {
    static MEMO: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// B_n with B_1 = -1/2.
pub fn bernoulli_number(n: usize) -> BigRational {
    if let Some(b) = memo().read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = memo().write().unwrap();
    // Σ_{j<=m} C(m+1, j) B_j = 0
    while table.len() <= n {
        let m = table.len() as u64;
        let mut s = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, j as u64)) * b;
        }
        let b = -s / BigRational::from_integer(BigInt::from(m + 1));
        table.push(b);
    }
    table[n].clone()
}

/// B_n(x) = Σ C(n, i) B_i x^{n-i}.
pub fn bernoulli_polynomial(n: usize, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // accumulate from i = n down to 0 so x^{n-i} grows
    for i in (0..=n).rev() {
        acc += BigRational::from_integer(binomial(n as u64, i as u64)) * bernoulli_number(i) * &xp;
        xp *= x;
    }
    acc
}

/// B_{k,χ} = M^{k-1} Σ_{a=1}^{M} χ(a) B_k(a/M), exactly, at level ord χ.
pub fn bernoulli_generalized(k: usize, chi: &DirichletChar) -> CycloElt {
    let m = chi.modulus();
    let n = chi.order();
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(m), k - 1));
    let terms: Vec<(u64, BigRational)> = (1..=m)
        .filter_map(|a| {
            chi.exponent(a).map(|t| {
                let x = BigRational::new(BigInt::from(a), BigInt::from(m));
                (t, bernoulli_polynomial(k, &x) * &scale)
            })
        })
        .collect();
    let den = terms.iter().fold(BigInt::one(), |acc, (_, v)| {
        num_integer::Integer::lcm(&acc, v.denom())
    });
    let mut acc = Accumulator::new(n, den.clone());
    for (t, v) in terms {
        acc.add(t, &(v.numer() * (&den / v.denom())));
    }
    acc.finish()
}
