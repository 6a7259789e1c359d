use super::*;
use crate::arith::mod_pow;
use proptest::prelude::*;
use serde_json::Value;

fn chi(label: &str) -> DirichletChar {
    DirichletChar::from_label(label).unwrap()
}

fn cup_fixture(label: &str) -> Value {
    let v: Value =
        serde_json::from_str(include_str!("../../tests/fixtures/cup_oracle.json")).unwrap();
    v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["chi"] == label)
        .unwrap()
        .clone()
}

fn fixture_mod(c: &Value, key: &str, p: u64, r: u32) -> u64 {
    c[key].as_u64().unwrap() % p.pow(r)
}

fn as_u64(x: &UnramifiedElt) -> u64 {
    x.as_padic().unwrap().to_u64().unwrap()
}

// ζ_3 - ζ_3^2 at level 6
fn sqrt_minus_3() -> CycloElt {
    &root_of_unity(6, 2) - &root_of_unity(6, 4)
}

#[test]
fn coleman_trivial_case_two_ways() {
    let a = coleman_delta_symbolic(1, 1, 3, 7, 1).unwrap();
    let b = coleman_delta_closed(1, 1, 3, 7, 1).unwrap();
    assert_eq!(a, b);
    // ω(1) = 1: plain t/(t-1) with t = ζ_21^{7 + 3}
    let t = root_of_unity(21, 10);
    let direct = &t * &(&t - &CycloElt::one(21)).inverse().unwrap();
    assert_eq!(a, direct);
}

#[test]
fn coleman_factor_minus_one() {
    let d = coleman_data(1, 6, 3, 7, 1).unwrap();
    assert_eq!(d.omega, -1);
    // -t/(t-1) with t = ζ_3 ζ_7^{-1} = ζ_21^{7 - 3}
    let t = root_of_unity(21, 4);
    let direct = -(&t * &(&t - &CycloElt::one(21)).inverse().unwrap());
    assert_eq!(d.value, direct);
}

#[test]
fn omega_prefactor_is_multiplicative() {
    for r in 1..=2 {
        let m = 7i64.pow(r);
        let w2 = omega_exponent(2, 7, r).unwrap();
        let w3 = omega_exponent(3, 7, r).unwrap();
        let w6 = omega_exponent(6, 7, r).unwrap();
        assert_eq!((w2 * w3 - w6).rem_euclid(m), 0);
    }
    assert!(matches!(
        omega_exponent(7, 7, 1),
        Err(Error::UnitRequired { .. })
    ));
}

#[test]
fn coleman_rejects_bad_level() {
    assert!(matches!(
        coleman_delta(1, 1, 7, 7, 1),
        Err(Error::Level { .. })
    ));
    assert!(matches!(
        coleman_delta(1, 1, 3, 7, 0),
        Err(Error::Level { .. })
    ));
}

// Values frozen from an independent floating-point evaluation of the double sum.
#[test]
fn trace_sum_frozen_values() {
    let s = trace_sum_exact(&chi("3:[1]"), 7, 1).unwrap();
    assert_eq!(s, sqrt_minus_3().scale_int(-2));
    let s = trace_sum_exact(&chi("4:[1]"), 5, 1).unwrap();
    assert_eq!(s, root_of_unity(4, 1).scale_int(-4));
    let s = trace_sum_exact(&chi("3:[1]"), 7, 2).unwrap();
    assert_eq!(s, sqrt_minus_3().scale_int(-14));
}

#[test]
fn trace_sum_is_minus_the_closed_form() {
    for (label, p) in [("3:[1]", 7), ("4:[1]", 5), ("7:[3]", 11)] {
        for r in 1..=2 {
            let rep = trace_sum_identity(&chi(label), p, r).unwrap();
            assert!(rep.matches_negated, "{label} p={p} r={r}");
            assert!(!rep.matches_stated, "{label} p={p} r={r}");
        }
    }
}

#[test]
fn trace_sum_rejects_even_and_imprimitive() {
    assert!(matches!(
        trace_sum_exact(&chi("5:[2]"), 7, 1),
        Err(Error::Parity { .. })
    ));
    let lifted = chi("3:[1]").lift(6).unwrap();
    assert!(matches!(
        trace_sum_exact(&lifted, 7, 1),
        Err(Error::NotPrimitive { .. })
    ));
    assert!(trace_sum_exact(&chi("7:[3]"), 7, 1).is_err());
}

#[test]
fn trace_sum_thread_count_independent() {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap();
    let a = one.install(|| trace_sum_exact(&chi("7:[3]"), 11, 1).unwrap());
    let b = many.install(|| trace_sum_exact(&chi("7:[3]"), 11, 1).unwrap());
    assert_eq!(a, b);
}

#[test]
fn chain_from_coleman_values() {
    let c = chain_check(&chi("3:[1]"), 7, 1).unwrap();
    assert!(c.traced_matches_expanded);
    assert!(c.expanded_matches_reindexed);
    assert_eq!(c.reindexed, sqrt_minus_3().scale_int(-12));
}

#[test]
fn branch_totals_for_3_7_2() {
    let b = branch_totals(&chi("3:[1]"), 7, 2).unwrap();
    assert!(b.n_divides.is_zero());
    assert!(b.top_matches);
    assert!(b.expansion_matches);
    // the unit-root sum vanishes termwise only below p^{r-1}
    assert_eq!(b.termwise_zero, vec![true, false]);
    assert!(b.lower_branches_vanish());
}

#[test]
fn primitive_root_sums() {
    for p in [5u64, 7, 11] {
        assert_eq!(primitive_root_sum(p, 1), CycloElt::from_integer(p, -1));
        for r in 2..=3 {
            assert!(primitive_root_sum(p, r).is_zero());
        }
    }
}

#[test]
fn scaling_identity_examples() {
    assert!(scaling_identity_check(2, 3, 7, 1).unwrap());
    assert!(scaling_identity_check(1, 4, 5, 2).unwrap());
}

#[test]
fn adjustment_argument_residues() {
    for (n, p) in [(3u64, 7u64), (4, 5), (7, 11)] {
        for r in 1..=4 {
            let x = adjustment_argument(n, p, r).unwrap();
            assert_eq!(x.rem_euclid(n as i64), 1);
            assert_eq!(x.rem_euclid(p as i64), n as i64 % p as i64);
        }
    }
    assert_eq!(adjustment_argument(3, 7, 1).unwrap(), 10);
}

#[test]
fn adjustment_is_inverse_omega_of_n() {
    let c = chi("3:[1]");
    let theta = theta_from_chi(&c, 7).unwrap();
    let ctx = PadicContext::for_character(&c, 7, 4).unwrap();
    let adj = adjustment_factor(3, 7, 1, &theta, &ctx).unwrap();
    let w3 = teichmuller(3, 7, 4).unwrap().inverse().unwrap();
    assert_eq!(adj.as_padic().unwrap(), w3);
    // ω(3) has order 6, so ω(3)^{-1} and ω(3) differ
    assert_ne!(w3, teichmuller(3, 7, 4).unwrap());
}

#[test]
fn cup_ell_matches_oracle() {
    for (label, p, ell) in [("3:[1]", 7u64, 3u64), ("4:[1]", 5, 2)] {
        let fx = cup_fixture(label);
        for r in 1..=4 {
            let v = cup_ell(ell, &chi(label), p, r, r + 4).unwrap();
            assert_eq!(
                as_u64(&v.value),
                fixture_mod(&fx, "cup_ell", p, r),
                "{label} r={r}"
            );
            assert_eq!(
                as_u64(&v.theorem_value),
                fixture_mod(&fx, "cup_ell_theorem", p, r)
            );
            assert_eq!(
                as_u64(&v.omega_n_value),
                fixture_mod(&fx, "cup_ell_omega_n", p, r)
            );
            assert_eq!(as_u64(&v.adjustment), fixture_mod(&fx, "adjustment", p, r));
        }
    }
}

#[test]
fn cup_p_matches_oracle() {
    for (label, p) in [("3:[1]", 7u64), ("4:[1]", 5)] {
        let fx = cup_fixture(label);
        for r in 1..=3 {
            let v = cup_p(&chi(label), p, r, r + 4).unwrap();
            assert_eq!(
                as_u64(&v.value),
                fixture_mod(&fx, "cup_p", p, r),
                "{label} r={r}"
            );
            assert_eq!(
                as_u64(&v.theorem_value),
                fixture_mod(&fx, "cup_p_theorem", p, r)
            );
            assert!(v.l_invariant.is_some());
        }
    }
}

#[test]
fn cup_values_reduce_compatibly() {
    for (label, p, ell) in [("3:[1]", 7u64, 3u64), ("4:[1]", 5, 2), ("7:[3]", 11, 7)] {
        let c = chi(label);
        for q in [ell, p] {
            let vals: Vec<UnramifiedElt> = (1..=3)
                .map(|r| cup_product(q, &c, p, r, r + 4).unwrap().value)
                .collect();
            assert_eq!(vals[2].reduce(2), vals[1], "{label} q={q}");
            assert_eq!(vals[1].reduce(1), vals[0], "{label} q={q}");
        }
    }
}

#[test]
fn nontriviality_thresholds() {
    // v_7(log_7 3) = 1 and the other factors are units, so the value is a unit
    let v = cup_ell(3, &chi("3:[1]"), 7, 2, 6).unwrap();
    assert_eq!(v.valuation, Some(0));
    assert_eq!(nontriviality_threshold(&v).unwrap(), 1);
    assert!(!v.value.reduce(1).is_zero());
    let v = cup_p(&chi("3:[1]"), 7, 2, 6).unwrap();
    assert_eq!(nontriviality_threshold(&v).unwrap(), 1);
}

#[test]
fn threshold_from_valuation() {
    let mut v = cup_ell(3, &chi("3:[1]"), 7, 2, 6).unwrap();
    v.working = v.working.mul_p_power(1);
    assert_eq!(nontriviality_threshold(&v).unwrap(), 2);
    v.working = &v.working - &v.working;
    assert!(matches!(
        nontriviality_threshold(&v),
        Err(Error::Undetermined { .. })
    ));
}

#[test]
fn ratio_law_holds() {
    for (label, p, ell) in [("3:[1]", 7u64, 3u64), ("4:[1]", 5, 2), ("7:[3]", 11, 7)] {
        let chk = ratio_law(ell, &chi(label), p, 2, 6).unwrap();
        assert!(chk.holds, "{label}");
        assert_eq!(chk.lhs.precision(), 2);
    }
}

#[test]
fn embedding_consistency_sign() {
    let e = embedding_consistency(3, &chi("3:[1]"), 7, 3).unwrap();
    assert_eq!(e.precision, 2);
    assert!(e.matches_negated);
    assert!(!e.matches);
}

#[test]
fn cup_errors() {
    assert!(matches!(
        cup_ell(5, &chi("3:[1]"), 7, 1, 5),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        cup_ell(4, &chi("4:[1]"), 5, 1, 5),
        Err(Error::Domain(_))
    ));
    // 13 ≢ 1 mod 3 would fail; 5:[1] is not exceptional at 7 (χ(7) ≠ 1)
    assert!(matches!(
        cup_p(&chi("5:[1]"), 7, 1, 5),
        Err(Error::Hypothesis(_))
    ));
    assert!(matches!(
        cup_ell(3, &chi("3:[1]"), 7, 3, 3),
        Err(Error::PrecisionUnderflow { .. })
    ));
}

#[test]
fn integrality_on_desk_pairs() {
    for (label, p, ell) in [("3:[1]", 7u64, 3u64), ("4:[1]", 5, 2), ("7:[3]", 11, 7)] {
        let c = chi(label);
        assert!(cup_ell(ell, &c, p, 2, 6).unwrap().working.precision() >= 2);
        assert!(cup_p(&c, p, 2, 6).unwrap().working.precision() >= 2);
        // p | log_p(ℓ), the divisibility the closed form relies on
        let lg = padic_log_integer(ell as i64, p, 6).unwrap();
        assert!(lg.valuation().unwrap() >= 1);
        assert_eq!(mod_pow(ell, p - 1, p), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coleman_two_ways_agree(g_n in 1u64..4, g_p in 1u64..7, r in 1u32..3) {
        prop_assume!(g_n % 3 != 0);
        let a = coleman_delta_symbolic(g_n, g_p, 3, 7, r).unwrap();
        let b = coleman_delta_closed(g_n, g_p, 3, 7, r).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn coleman_two_ways_agree_mod_4(g_n in prop::sample::select(vec![1u64, 3]), g_p in 1u64..5) {
        let a = coleman_delta_symbolic(g_n, g_p, 4, 5, 1).unwrap();
        let b = coleman_delta_closed(g_n, g_p, 4, 5, 1).unwrap();
        prop_assert_eq!(a, b);
    }
}
