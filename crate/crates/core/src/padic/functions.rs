use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{inverse_mod, p_pow, split_valuation, PadicInt};
use crate::arith::{factorial_valuation, valuation};
use crate::error::{Error, Result};

/// Teichmüller representative ω(a): the (p-1)-st root of unity congruent to a.
pub fn teichmuller(a: i64, p: u64, k: u32) -> Result<PadicInt> {
    teichmuller_of(&BigInt::from(a), p, k)
}

pub(crate) fn teichmuller_of(a: &BigInt, p: u64, k: u32) -> Result<PadicInt> {
    let r = a.mod_floor(&BigInt::from(p));
    if r.is_zero() {
        return Err(Error::UnitRequired {
            value: a.to_string(),
            p,
        });
    }
    let m = p_pow(p, k);
    let e = p_pow(p, k.saturating_sub(1));
    Ok(PadicInt::new(p, k, r.modpow(&e, &m)))
}

/// ⟨a⟩ = a / ω(a), the principal-unit part of a.
pub fn angle_part(a: i64, p: u64, k: u32) -> Result<PadicInt> {
    angle_of(&PadicInt::new(p, k, a))
}

fn angle_of(u: &PadicInt) -> Result<PadicInt> {
    let w = teichmuller_of(u.value(), u.p(), u.precision())?;
    Ok(u * &w.inverse()?)
}

/// Iwasawa p-adic logarithm of a unit: log of its principal-unit part.
///
/// `k` may not exceed the precision of `u`.
pub fn padic_log(u: &PadicInt, k: u32) -> Result<PadicInt> {
    if k > u.precision() {
        return Err(Error::PrecisionUnderflow {
            requested: k,
            achievable: u.precision(),
        });
    }
    let p = u.p();
    let x = &angle_of(u)?.value().clone() - BigInt::one();
    if x.is_zero() || k == 0 {
        return Ok(PadicInt::zero(p, k));
    }
    // terms have valuation >= n - log_p(n)
    let mut nmax = k as u64 + 1;
    while (nmax as f64).log(p as f64).floor() as u64 + k as u64 >= nmax {
        nmax += 1;
    }
    let mut acc = BigInt::zero();
    let mut xn = BigInt::one();
    for n in 1..=nmax {
        xn *= &x;
        let vn = valuation(n, p);
        let m = p_pow(p, k + vn);
        xn = xn.mod_floor(&m);
        let pv = p_pow(p, vn);
        let unit = BigInt::from(n) / &pv;
        let inv = inverse_mod(&unit, p, k).expect("unit part of n");
        let term = (&xn / &pv) * inv;
        if n % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(PadicInt::new(p, k, acc))
}

/// log_p of a nonzero integer with the convention log_p(p) = 0.
pub fn padic_log_integer(d: i64, p: u64, k: u32) -> Result<PadicInt> {
    if d == 0 {
        return Err(Error::Domain("log_p(0) is undefined".into()));
    }
    let (_, unit) = split_valuation(&BigInt::from(d).abs(), p);
    padic_log(&PadicInt::new(p, k, unit), k)
}

/// The value κ(γ) of the cyclotomic character on the fixed topological generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaChoice {
    p: u64,
    kappa: BigInt,
}

impl KappaChoice {
    /// κ(γ) = 1 + p.
    pub fn new(p: u64) -> Self {
        KappaChoice {
            p,
            kappa: BigInt::from(1 + p),
        }
    }

    /// An integer topological generator: κ ≡ 1 mod p and κ ≢ 1 mod p².
    pub fn from_integer(p: u64, kappa: i64) -> Result<Self> {
        let v = BigInt::from(kappa) - BigInt::one();
        if v.is_zero() || split_valuation(&v, p).0 != 1 {
            return Err(Error::Domain(format!(
                "{kappa} is not a topological generator of 1 + {p}Z_{p}"
            )));
        }
        Ok(KappaChoice {
            p,
            kappa: BigInt::from(kappa),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn integer(&self) -> &BigInt {
        &self.kappa
    }

    pub fn value(&self, k: u32) -> PadicInt {
        PadicInt::new(self.p, k, self.kappa.clone())
    }

    /// κ^j as an exact integer (j >= 0).
    pub fn power(&self, j: u32) -> BigInt {
        num_traits::pow(self.kappa.clone(), j as usize)
    }

    pub fn log(&self, k: u32) -> Result<PadicInt> {
        padic_log(&self.value(k), k)
    }
}

/// s(d) = log_p(d) / log_p(κ(γ)).
pub fn s_exponent(d: i64, kappa: &KappaChoice, k: u32) -> Result<PadicInt> {
    let p = kappa.p();
    if d <= 0 || d % p as i64 == 0 {
        return Err(Error::UnitRequired {
            value: d.to_string(),
            p,
        });
    }
    let num = padic_log_integer(d, p, k + 1)?;
    let den = kappa.log(k + 1)?;
    Ok(num.checked_div(&den)?.reduce(k))
}

/// C(x, j) for x ∈ Z_p; loses v_p(j!) digits.
pub fn binomial_coefficient(x: &PadicInt, j: u64) -> PadicInt {
    let p = x.p();
    let loss = factorial_valuation(j, p);
    let prec = x.precision().saturating_sub(loss);
    let e = x.value();
    let mut c = BigInt::one();
    for i in 0..j {
        c = c * (e - BigInt::from(i)) / BigInt::from(i + 1);
    }
    PadicInt::new(p, prec, c)
}

/// base^exponent for base ≡ 1 mod p via Σ C(exponent, j)(base - 1)^j.
pub fn binomial_power(base: &PadicInt, exponent: &PadicInt, k: u32) -> Result<PadicInt> {
    let p = base.p();
    assert_eq!(p, exponent.p(), "mixed primes");
    let y = base - &PadicInt::one(p, base.precision());
    if !y.is_zero() && y.valuation() == Some(0) {
        return Err(Error::Domain(format!(
            "binomial power needs base ≡ 1 mod {p}"
        )));
    }
    let achievable = base.precision().min(exponent.precision() + 1);
    if k > achievable {
        return Err(Error::PrecisionUnderflow {
            requested: k,
            achievable,
        });
    }
    let m = p_pow(p, k);
    let yv = y.value().clone();
    let e = exponent.value();
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    let mut ypow = BigInt::one();
    for j in 0..k as u64 {
        if j > 0 {
            binom = binom * (e - BigInt::from(j - 1)) / BigInt::from(j);
            ypow = (ypow * &yv).mod_floor(&m);
        }
        acc += &binom * &ypow;
    }
    Ok(PadicInt::new(p, k, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 7, 2).unwrap().value(), &int(1));
        assert_eq!(teichmuller(6, 7, 2).unwrap().value(), &int(48));
        assert_eq!(teichmuller(2, 7, 2).unwrap().value(), &int(30));
        assert!(matches!(
            teichmuller(14, 7, 2),
            Err(Error::UnitRequired { .. })
        ));
    }

    #[test]
    fn teichmuller_matches_naive_iteration() {
        // iterate a -> a^p mod p^k until stable
        for a in 1..7 {
            let m = 7i64.pow(4);
            let mut x = a;
            loop {
                let next = (0..7).fold(1i64, |acc, _| acc * x % m);
                if next == x {
                    break;
                }
                x = next;
            }
            assert_eq!(teichmuller(a, 7, 4).unwrap().value(), &int(x));
        }
    }

    #[test]
    fn angle_part_examples() {
        assert_eq!(angle_part(1, 7, 3).unwrap().value(), &int(1));
        assert_eq!(angle_part(8, 7, 2).unwrap().value(), &int(8));
        let a = angle_part(2, 7, 2).unwrap();
        assert_eq!(a.value(), &int(36));
        assert_eq!((36 * 30) % 49, 2);
    }

    /// Direct series with exact rationals, independent of the digit loop.
    fn log_oracle(u: i64, p: i64, k: u32) -> BigInt {
        let x = BigRational::from_integer(int(u - 1));
        let mut acc = BigRational::from_integer(int(0));
        for n in 1..40i64 {
            let term = num_traits::pow(x.clone(), n as usize) / BigRational::from_integer(int(n));
            if n % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let m = num_traits::pow(int(p), k as usize);
        let den_inv = inverse_mod(acc.denom(), p as u64, k).unwrap();
        (acc.numer() * den_inv).mod_floor(&m)
    }

    #[test]
    fn log_examples() {
        assert!(padic_log(&PadicInt::one(7, 5), 5).unwrap().is_zero());
        let l = padic_log(&PadicInt::new(7, 3, 8), 3).unwrap();
        assert_eq!(l.value(), &int(154));
        assert_eq!(log_oracle(8, 7, 3), int(154));
        assert_eq!(
            padic_log(&PadicInt::new(7, 6, 8), 6).unwrap().value(),
            &log_oracle(8, 7, 6)
        );
        let two = PadicInt::new(7, 4, 2);
        let sum = padic_log(&two, 4).unwrap() + padic_log(&two.inverse().unwrap(), 4).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn log_precision_underflow() {
        let e = padic_log(&PadicInt::new(7, 2, 8), 4).unwrap_err();
        assert_eq!(
            e,
            Error::PrecisionUnderflow {
                requested: 4,
                achievable: 2
            }
        );
    }

    #[test]
    fn s_exponent_examples() {
        let kappa = KappaChoice::new(7);
        assert!(s_exponent(1, &kappa, 4).unwrap().is_zero());
        assert_eq!(s_exponent(8, &kappa, 4).unwrap().value(), &int(1));
        let s2 = s_exponent(2, &kappa, 2).unwrap();
        // ratio of two oracle logs, computed one digit deeper; log 2 = log(2/ω(2))
        let m = 343i64;
        let mut w = 2i64;
        for _ in 0..3 {
            w = (0..7).fold(1i64, |acc, _| acc * w % m);
        }
        let angle2 = (2 * crate::arith::mod_inv(w, 343).unwrap() as i64) % m;
        let l2 = PadicInt::new(7, 3, log_oracle(angle2, 7, 3));
        let l8 = PadicInt::new(7, 3, log_oracle(8, 7, 3));
        assert_eq!(s2, l2.checked_div(&l8).unwrap().reduce(2));
        assert!(KappaChoice::from_integer(7, 50).is_err());
        assert!(KappaChoice::from_integer(7, 15).is_ok());
    }

    #[test]
    fn binomial_power_examples() {
        let b = PadicInt::new(7, 3, 8);
        assert_eq!(
            binomial_power(&b, &PadicInt::zero(7, 3), 3)
                .unwrap()
                .value(),
            &int(1)
        );
        assert_eq!(
            binomial_power(&b, &PadicInt::new(7, 3, 2), 3)
                .unwrap()
                .value(),
            &int(64)
        );
        // κ^{s(d)} = ⟨d⟩
        let kappa = KappaChoice::new(7);
        let s = s_exponent(2, &kappa, 5).unwrap();
        let lhs = binomial_power(&kappa.value(5), &s, 5).unwrap();
        assert_eq!(lhs, angle_part(2, 7, 5).unwrap());
    }

    proptest! {
        #[test]
        fn teichmuller_is_multiplicative(a in 1i64..500, b in 1i64..500, k in 1u32..6) {
            prop_assume!(a % 7 != 0 && b % 7 != 0);
            let lhs = teichmuller(a * b, 7, k).unwrap();
            let rhs = teichmuller(a, 7, k).unwrap() * teichmuller(b, 7, k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn teichmuller_is_root_of_unity(a in 1i64..500, k in 1u32..6) {
            prop_assume!(a % 11 != 0);
            let w = teichmuller(a, 11, k).unwrap();
            prop_assert_eq!(w.pow(10), PadicInt::one(11, k));
            prop_assert!(padic_log(&w, k).unwrap().is_zero());
        }

        #[test]
        fn log_is_additive(u in 1i64..2000, v in 1i64..2000, k in 1u32..7) {
            prop_assume!(u % 5 != 0 && v % 5 != 0);
            let lu = padic_log(&PadicInt::new(5, k, u), k).unwrap();
            let lv = padic_log(&PadicInt::new(5, k, v), k).unwrap();
            let luv = padic_log(&PadicInt::new(5, k, u * v), k).unwrap();
            prop_assert_eq!(luv, lu + lv);
        }

        #[test]
        fn s_exponent_is_a_homomorphism(d1 in 1i64..300, d2 in 1i64..300, k in 1u32..6) {
            prop_assume!(d1 % 7 != 0 && d2 % 7 != 0);
            let kappa = KappaChoice::new(7);
            let lhs = s_exponent(d1 * d2, &kappa, k).unwrap();
            let rhs = s_exponent(d1, &kappa, k).unwrap() + s_exponent(d2, &kappa, k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn binomial_power_matches_repeated_multiplication(b in 0i64..400, m in 0u64..=10, k in 1u32..6) {
            let base = PadicInt::new(7, k, 1 + 7 * b);
            let lhs = binomial_power(&base, &PadicInt::new(7, k, m), k).unwrap();
            prop_assert_eq!(lhs, base.pow(m));
        }
    }
}
