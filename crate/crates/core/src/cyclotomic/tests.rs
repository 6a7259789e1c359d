use super::*;
use crate::characters::{enumerate_characters, DirichletChar};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(*cyclotomic_polynomial(1), ints(&[-1, 1]));
    assert_eq!(*cyclotomic_polynomial(4), ints(&[1, 0, 1]));
    assert_eq!(*cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    // Φ_105 is the first with a coefficient -2
    assert!(cyclotomic_polynomial(105).contains(&BigInt::from(-2)));
    for m in 1..=60u64 {
        assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, euler_phi(m));
    }
}

#[test]
fn roots_of_unity() {
    assert_eq!(root_of_unity(5, 0), CycloElt::one(5));
    assert_eq!(
        &root_of_unity(3, 1) + &root_of_unity(3, 2),
        CycloElt::from_integer(3, -1)
    );
    assert_eq!(root_of_unity(12, 6), CycloElt::from_integer(12, -1));
    assert_eq!(
        &root_of_unity(12, 5) * &root_of_unity(12, 9),
        root_of_unity(12, 14)
    );
}

#[test]
fn galois_action() {
    let z = root_of_unity(12, 1);
    let s1 = GaloisElement::new(12, 1).unwrap();
    assert_eq!(galois_apply(&s1, &z).unwrap(), z);
    let conj = GaloisElement::new(12, 11).unwrap();
    assert_eq!(galois_apply(&conj, &z).unwrap(), root_of_unity(12, -1));
    let s5 = GaloisElement::new(12, 5).unwrap();
    assert_eq!(galois_apply(&s5, &z.pow(4)).unwrap(), root_of_unity(12, 8));
    assert!(matches!(
        GaloisElement::new(12, 4),
        Err(Error::InvalidAutomorphism { .. })
    ));
}

#[test]
fn galois_composition() {
    let x = &(&root_of_unity(15, 2) * &CycloElt::from_integer(15, 3)) + &root_of_unity(15, 7);
    for j in [1i64, 2, 4, 7, 8] {
        for k in [1i64, 11, 13, 14] {
            let sj = GaloisElement::new(15, j).unwrap();
            let sk = GaloisElement::new(15, k).unwrap();
            let lhs = galois_apply(&sj, &galois_apply(&sk, &x).unwrap()).unwrap();
            let rhs = galois_apply(&sj.compose(&sk), &x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn partial_trace_examples() {
    // ζ_3 viewed at level 21
    let z3 = root_of_unity(21, 7);
    let t = partial_trace_p(&z3, 3, 7, 1).unwrap();
    assert_eq!(t, root_of_unity(3, 1).scale_int(6));
    let z7 = root_of_unity(21, 3);
    assert_eq!(
        partial_trace_p(&z7, 3, 7, 1).unwrap(),
        CycloElt::from_integer(3, -1)
    );
    let z49 = root_of_unity(147, 3);
    assert!(partial_trace_p(&z49, 3, 7, 2).unwrap().is_zero());
    assert!(matches!(
        partial_trace_p(&root_of_unity(21, 1), 3, 7, 2),
        Err(Error::Level { .. })
    ));
}

#[test]
fn partial_trace_is_linear_over_base() {
    let x = &root_of_unity(20, 3) + &root_of_unity(20, 7).scale(&q(2, 3));
    let c = &root_of_unity(4, 1) + &CycloElt::from_integer(4, 5);
    let lhs = partial_trace_p(&(&c.lift(20).unwrap() * &x), 4, 5, 1).unwrap();
    let rhs = &c * &partial_trace_p(&x, 4, 5, 1).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn gauss_sums() {
    let q3 = DirichletChar::from_label("3:[1]").unwrap();
    let g = gauss_sum(&q3).unwrap();
    assert!(g.same_value(&(&root_of_unity(3, 1) - &root_of_unity(3, 2))));
    let q4 = DirichletChar::from_label("4:[1]").unwrap();
    let g4 = gauss_sum(&q4).unwrap();
    assert!(g4.same_value(&(&root_of_unity(4, 1) - &root_of_unity(4, 3))));
    let prod = &g * &gauss_sum(&q3.inv()).unwrap();
    assert!(prod.same_value(&CycloElt::from_integer(1, -3)));
    assert!(gauss_sum(&q3.lift(6).unwrap()).is_err());
}

#[test]
fn gauss_sum_absolute_value_law() {
    for m in 1..=30u64 {
        for chi in enumerate_characters(m)
            .into_iter()
            .filter(|c| c.is_primitive())
        {
            let lhs = &gauss_sum(&chi).unwrap() * &gauss_sum(&chi.inv()).unwrap();
            let sign = if chi.is_odd() { -1 } else { 1 };
            assert!(
                lhs.same_value(&CycloElt::from_integer(1, sign * m as i64)),
                "{chi}"
            );
        }
    }
}

#[test]
fn inverse_and_pole_ratio() {
    for m in [3u64, 4, 12, 21] {
        for j in 1..m as i64 {
            let t = root_of_unity(m, j);
            let direct = (&t * &(&t - &CycloElt::one(m)).inverse().unwrap()).clone();
            let d = m / gcd(j as u64, m);
            let u = j as u64 / gcd(j as u64, m);
            assert_eq!(pole_ratio(m, d, u).unwrap(), direct, "m={m} j={j}");
        }
    }
    assert!(pole_ratio(5, 1, 1).is_err());
}

#[test]
fn phi_at_one_values() {
    assert_eq!(phi_at_one(7), 7);
    assert_eq!(phi_at_one(49), 7);
    assert_eq!(phi_at_one(21), 1);
    let (_, v) = pole_numerator(9);
    assert_eq!(v, BigInt::from(3));
}

#[test]
fn lifting_preserves_value() {
    let x = &root_of_unity(6, 1) + &CycloElt::from_rational(6, &q(1, 2));
    let y = x.lift(30).unwrap();
    assert!(x.same_value(&y));
    assert_eq!(y.lift(60).unwrap(), x.lift(60).unwrap());
    assert!(x.lift(9).is_err());
}

#[test]
fn embedding_examples() {
    let one = embed_unramified(&CycloElt::one(3), 7, 3).unwrap();
    assert!(one.as_padic().unwrap().value() == &BigInt::from(1));
    let z3 = embed_unramified(&root_of_unity(3, 1), 7, 1).unwrap();
    assert_eq!(z3.as_padic().unwrap().value(), &BigInt::from(2));
    let tau = &root_of_unity(3, 1) - &root_of_unity(3, 2);
    let e = embed_unramified(&tau, 7, 2).unwrap().as_padic().unwrap();
    let sq = (&e * &e).value().clone();
    assert_eq!(sq, BigInt::from(49 - 3));
    let third = CycloElt::from_rational(3, &q(1, 7));
    assert_eq!(
        embed_unramified(&third, 7, 2).unwrap_err(),
        Error::NonIntegral { p: 7 }
    );
}

#[test]
fn gauss_sum_embeds_to_a_unit() {
    for (label, p) in [("3:[1]", 7u64), ("4:[1]", 5), ("7:[3]", 11)] {
        let chi = DirichletChar::from_label(label).unwrap();
        let g = gauss_sum(&chi.inv()).unwrap();
        let e = Embedding::new(p, g.level(), 4).unwrap();
        assert!(e.embed(&g).unwrap().is_unit(), "{label}");
    }
}

fn arb_elt(m: u64) -> impl Strategy<Value = CycloElt> {
    prop::collection::vec((-20i64..20, 1i64..5), euler_phi(m) as usize).prop_map(move |v| {
        let c: Vec<BigRational> = v.into_iter().map(|(a, b)| q(a, b)).collect();
        CycloElt::from_coeffs(m, &c)
    })
}

proptest! {
    #[test]
    fn two_representations_agree(m in 1u64..=30, a in prop::collection::vec(-9i64..9, 30), b in prop::collection::vec(-9i64..9, 30)) {
        // multiply mod x^M - 1 first, then reduce
        let mu = m as usize;
        let mut raw = vec![BigInt::zero(); mu];
        for i in 0..mu {
            for j in 0..mu {
                raw[(i + j) % mu] += BigInt::from(a[i] * b[j]);
            }
        }
        let direct = CycloElt::from_parts(m, raw, BigInt::one());
        let x = CycloElt::from_parts(m, ints(&a[..mu]), BigInt::one());
        let y = CycloElt::from_parts(m, ints(&b[..mu]), BigInt::one());
        prop_assert_eq!(&x * &y, direct);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(
        mi in 0usize..4, x in prop::collection::vec((-20i64..20, 1i64..5), 4), y in prop::collection::vec((-20i64..20, 1i64..5), 4), k in 1u32..=4
    ) {
        let m = [3u64, 4, 5, 12][mi];
        let p = if m == 5 { 11 } else { 13 };
        let n = euler_phi(m) as usize;
        let mk = |v: &[(i64, i64)]| CycloElt::from_coeffs(m, &v[..n].iter().map(|&(a, b)| q(a, b)).collect::<Vec<_>>());
        let (x, y) = (mk(&x), mk(&y));
        let e = Embedding::new(p, m, k).unwrap();
        let ex = e.embed(&x).unwrap();
        let ey = e.embed(&y).unwrap();
        prop_assert!(e.embed(&(&x * &y)).unwrap().agrees_with(&(&ex * &ey)));
        prop_assert!(e.embed(&(&x + &y)).unwrap().agrees_with(&(&ex + &ey)));
    }

    #[test]
    fn inverse_roundtrip(x in arb_elt(12)) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.inverse().unwrap(), CycloElt::one(12));
    }
}
