use super::*;
use crate::characters::theta_from_chi;
use crate::lvalues::interpolation_value;
use proptest::prelude::*;

fn theta37() -> DirichletChar {
    theta_from_chi(&DirichletChar::from_label("3:[1]").unwrap(), 7).unwrap()
}

fn theta45() -> DirichletChar {
    theta_from_chi(&DirichletChar::from_label("4:[1]").unwrap(), 5).unwrap()
}

fn lp(s: i64, theta: &DirichletChar, p: u64, k: u32) -> UnramifiedElt {
    let ctx = PadicContext::for_character(theta, p, k).unwrap();
    kubota_leopoldt_at_integer(s, &shifted(theta, p).unwrap(), &ctx, k).unwrap()
}

fn int_point(p: u64, k: u32, v: BigInt) -> PadicInt {
    PadicInt::new(p, k, v)
}

#[test]
fn node_reproduction() {
    let t = theta37();
    let g = g_theta_series(&t, 7, 3, 5).unwrap();
    assert_eq!(g.precision(), 5);
    assert_eq!(g.tail(), TailModel::Interpolated);
    let at0 = g.evaluate(&PadicInt::zero(7, 5)).unwrap();
    assert_eq!(at0, lp(-1, &t, 7, 5));
    // every node T_j = κ^j - 1 reproduces L_p(-j-1, θω²) to the tail bound
    for j in 1..=3u32 {
        let x = int_point(7, 5, g.kappa().power(j) - BigInt::from(1));
        let v = g.evaluate(&x).unwrap();
        assert_eq!(v.precision(), 4);
        assert!(v.agrees_with(&lp(-(j as i64) - 1, &t, 7, 5)), "node {j}");
    }
}

#[test]
fn degree_zero_is_the_constant() {
    let t = theta37();
    let g = g_theta_series(&t, 7, 0, 4).unwrap();
    assert_eq!(g.degree(), 0);
    assert_eq!(g.constant(), &lp(-1, &t, 7, 4));
}

#[test]
fn held_out_node() {
    for (t, p) in [(theta37(), 7u64), (theta45(), 5)] {
        for d in [2usize, 4] {
            let g = g_theta_series(&t, p, d, 5).unwrap();
            let s = d as u32 + 1;
            let x = int_point(p, 5, g.kappa().power(s) - BigInt::from(1));
            let v = g.evaluate(&x).unwrap();
            assert!(v.precision() >= (d as u32 + 1).min(5));
            assert!(v.agrees_with(&lp(-(s as i64) - 1, &t, p, 5)), "p={p} D={d}");
        }
    }
}

#[test]
fn budget_errors() {
    assert!(matches!(
        g_theta_series(&theta37(), 7, 20, 4),
        Err(Error::Budget { degree: 20, .. })
    ));
    let odd = DirichletChar::from_label("3:[1]").unwrap();
    assert!(matches!(
        g_theta_series(&odd, 7, 2, 4),
        Err(Error::Parity { .. })
    ));
}

#[test]
fn trivial_zero_of_xi() {
    let t = theta37();
    let xi = xi_theta(&t, 7, 4, 4).unwrap();
    let x = trivial_zero_point(7, 4);
    let v = xi.evaluate(&x).unwrap();
    assert!(v.precision() >= 4);
    assert!(v.is_zero());
    let dv = xi.derivative().evaluate(&x).unwrap();
    assert!(dv.precision() >= 1);
    assert!(!dv.is_zero());
}

#[test]
fn xi_at_zero_is_g_inverse_at_zero() {
    let t = theta37();
    let xi = xi_theta(&t, 7, 3, 4).unwrap();
    let g = g_theta_series(&t.inv(), 7, 3, 4).unwrap();
    assert_eq!(xi.constant(), g.constant());
}

#[test]
fn substitution_is_an_involution() {
    let g = g_theta_series(&theta37(), 7, 4, 4).unwrap();
    let back = g.substitute_inverse_shift().substitute_inverse_shift();
    for (a, b) in g.coeffs().iter().zip(back.coeffs()) {
        assert!(a.agrees_with(b));
    }
}

#[test]
fn first_coefficients() {
    let t = theta37();
    let one = PadicContext::for_character(&t, 7, 4).unwrap().one();
    let a1 = eisenstein_coeff(1, &t, 7, 3, 4).unwrap();
    assert_eq!(a1.constant(), &one);
    assert!(a1.coeffs()[1..].iter().all(UnramifiedElt::is_zero));
    let a7 = eisenstein_coeff(7, &t, 7, 3, 4).unwrap();
    assert_eq!(a7.constant(), &one);
    assert!(a7.coeffs()[1..].iter().all(UnramifiedElt::is_zero));
}

#[test]
fn a_ell_constant_term() {
    // ℓ = 2 ∤ 21: constant term 1 + θ(2)·2, θ(2) = χ(2)ω(2) = -ω(2)
    let t = theta37();
    let a2 = eisenstein_coeff(2, &t, 7, 3, 5).unwrap();
    let w2 = crate::padic::teichmuller(2, 7, 5).unwrap();
    let expect = &PadicInt::one(7, 5) - &(&w2 * &PadicInt::new(7, 5, 2));
    assert_eq!(a2.constant().as_padic().unwrap(), expect);
}

#[test]
fn weight_two_is_plain_divisor_sum() {
    let t = theta37();
    let ctx = PadicContext::for_character(&t, 7, 5).unwrap();
    let pt = PadicCharacter::new(&t, 7).unwrap();
    for n in [1u64, 2, 6, 12, 14] {
        let v = specialize(&eisenstein_coeff(n, &t, 7, 4, 5).unwrap(), 2).unwrap();
        let mut direct = ctx.zero();
        for d in divisors(n).into_iter().filter(|d| d % 7 != 0) {
            direct = &direct
                + &pt
                    .value(&ctx, d as i64)
                    .unwrap()
                    .scale(&PadicInt::new(7, 5, d));
        }
        assert_eq!(v, direct, "n={n}");
    }
}

#[test]
fn weight_three_at_two() {
    // 1 + θω^{-1}(2)·4 = 1 + χ(2)·4 = -3
    let t = theta37();
    let v = specialize(&eisenstein_coeff(2, &t, 7, 5, 6).unwrap(), 3).unwrap();
    assert_eq!(v.as_padic().unwrap(), PadicInt::new(7, 6, -3));
}

#[test]
fn specialization_matches_classical() {
    let t = theta37();
    let ctx = PadicContext::for_character(&t, 7, 6).unwrap();
    for kw in 2..=4 {
        for n in [1u64, 2, 3, 5, 10, 21, 35, 48] {
            let v = specialize(&eisenstein_coeff(n, &t, 7, 5, 6).unwrap(), kw).unwrap();
            assert_eq!(
                v,
                classical_eisenstein_coeff(n, &t, kw, &ctx).unwrap(),
                "kw={kw} n={n}"
            );
        }
    }
}

#[test]
fn tail_bound_is_enforced() {
    let t = theta37();
    let a = eisenstein_coeff(2, &t, 7, 3, 6).unwrap();
    assert!(matches!(
        specialize(&a, 3),
        Err(Error::TailBound { achievable: 4, .. })
    ));
    assert!(matches!(specialize(&a, 6), Err(Error::Range(_))));
    assert!(matches!(specialize(&a, 1), Err(Error::Range(_))));
}

#[test]
fn constant_term_matches_interpolation() {
    let t = theta37();
    let psi = shifted(&t, 7).unwrap();
    let ctx = PadicContext::for_character(&t, 7, 5).unwrap();
    let half = ctx.from_padic(&PadicInt::new(7, 5, 2).inverse().unwrap());
    let a0 = eisenstein_coeff(0, &t, 7, 4, 5).unwrap();
    for kw in 2..=4 {
        let v = specialize(&a0, kw).unwrap();
        let target = &interpolation_value(kw, &psi, &ctx, 5).unwrap() * &half;
        assert!(v.agrees_with(&target), "kw={kw}");
        assert_eq!(v.precision(), 5);
    }
}

#[test]
fn specialization_of_g_is_lp() {
    let t = theta45();
    let g = g_theta_series(&t, 5, 4, 4).unwrap();
    for kw in 2..=4 {
        let v = specialize(&g, kw).unwrap();
        assert!(v.agrees_with(&lp(1 - kw as i64, &t, 5, 4)), "kw={kw}");
    }
}

#[test]
fn q_expansion_report() {
    let t = theta37();
    let e = eisenstein_specialization(&t, 7, 2, 20, 5, 6).unwrap();
    assert_eq!(e.coefficients.len(), 21);
    let one = PadicContext::for_character(&t, 7, 6).unwrap().one();
    assert_eq!(e.coefficients[1], one);
    assert_eq!(e.coefficients[7], one);
    assert_eq!(default_degree(6, 3), 5);
    assert_eq!(default_degree(2, 6), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficients_are_multiplicative(m in 1u64..=12, n in 1u64..=12) {
        prop_assume!(crate::arith::gcd(m, n) == 1);
        let t = theta37();
        let am = eisenstein_coeff(m, &t, 7, 4, 5).unwrap();
        let an = eisenstein_coeff(n, &t, 7, 4, 5).unwrap();
        let amn = eisenstein_coeff(m * n, &t, 7, 4, 5).unwrap();
        let prod = am.mul(&an);
        for (a, b) in prod.coeffs().iter().zip(amn.coeffs()) {
            prop_assert!(a.agrees_with(b));
        }
    }
}
