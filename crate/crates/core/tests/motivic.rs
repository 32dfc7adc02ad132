use coniveau::motivic::{
    bigraded_scenario, decomposition_ranks, dh_quadric_check, laurent_mul, laurent_q0,
    n1_membership, quadric_etale_ring, rost_etale_ring, tau_quotient_kernel,
    unramified_quotient_quadric, LaurentElement, N1Obstruction, QuadricVerdict, RostBasis,
};
use proptest::prelude::*;

/// Standard monomials `h^a ρ̄_4^b` of the monomial ideal
/// `(h^{2^n}, hρ̄_4^{2^{n-2}}, ρ̄_4h^{2^{n-1}}, ρ̄_4^{2^{n-1}})`, counted per
/// degree with `|h| = 2`, `|ρ̄_4| = 4`. Pure powers of `h` are free.
fn quadric_oracle(n: u32, d: u32) -> (usize, usize) {
    let (mut free, mut tors) = (0, 0);
    let q = if n >= 2 { 1u32 << (n - 2) } else { 1 };
    for a in 0..(1u32 << n) {
        for b in 0..(1u32 << (n - 1)) {
            let killed = (a >= 1 && b >= q) || (b >= 1 && a >= 1 << (n - 1));
            if killed || 2 * a + 4 * b != d {
                continue;
            }
            if b == 0 { free += 1 } else { tors += 1 }
        }
    }
    (free, tors)
}

#[test]
fn quadric_ring_n3_additive_structure() {
    let r = quadric_etale_ring(3).unwrap();
    let expected_torsion = [(4, 1), (6, 1), (8, 2), (10, 1), (12, 1)];
    for d in (0..=14).step_by(2) {
        let t = expected_torsion.iter().find(|(k, _)| *k == d).map_or(0, |(_, v)| *v);
        assert_eq!(r.ranks(d), (1, t), "degree {d}");
        assert_eq!(quadric_oracle(3, d), (1, t));
    }
}

#[test]
fn quadric_ranks_agree_with_decomposition() {
    for n in [2u32, 3, 4] {
        let r = quadric_etale_ring(n).unwrap();
        for d in (0..=r.top_degree()).step_by(2) {
            assert_eq!(r.ranks(d), quadric_oracle(n, d), "n={n} d={d}");
            assert_eq!(decomposition_ranks(n, d).unwrap(), r.ranks(d), "n={n} d={d}");
        }
    }
}

#[test]
fn rost_ring_flags() {
    let r = rost_etale_ring(3).unwrap();
    let tors: Vec<_> = r.classes.iter().filter(|c| c.torsion).map(|c| c.label.as_str()).collect();
    assert_eq!(tors.len(), 3);
    let alg_tors = r.classes.iter().filter(|c| c.torsion && c.algebraic).count();
    assert_eq!(alg_tors, 2);
    assert_eq!(r.ranks(0), (1, 0));
}

#[test]
fn torsion_powers_are_not_in_n1() {
    for n in [2u32, 3] {
        let basis = RostBasis::new(n).unwrap();
        for i in 1..(1u32 << (n - 1)) {
            let v = n1_membership(4 * i, &basis).unwrap();
            assert!(!v.in_n1, "n={n} i={i}");
            assert!(v.obstruction.is_some());
        }
        // s = n + 1: the candidate is a' and Q_0(a') = ρ^{n+2}τ^{-2}.
        let v = n1_membership(n + 1, &basis).unwrap();
        let a_prime = LaurentElement::a_prime(n);
        assert_eq!(v.candidate.as_deref(), Some(a_prime.to_string().as_str()));
        let expected = LaurentElement::monomial(n, n + 2, -2);
        match v.obstruction {
            Some(N1Obstruction::NonIntegral { q0_value, .. }) => assert_eq!(q0_value, expected.to_string()),
            other => panic!("unexpected obstruction {other:?}"),
        }
        for s in 1..=n {
            let v = n1_membership(s, &basis).unwrap();
            assert!(matches!(v.obstruction, Some(N1Obstruction::NoPreimage { .. })));
        }
    }
}

#[test]
fn dh_vanishes_for_quadrics() {
    for n in [2u32, 3] {
        let c = dh_quadric_check(n, &[]).unwrap();
        assert_eq!(c.verdict, QuadricVerdict::DhZero);
        assert!(c.reciprocity_ok);
        let forced = dh_quadric_check(n, &[1]).unwrap();
        assert_eq!(forced.verdict, QuadricVerdict::CannotConclude);
    }
}

#[test]
fn unramified_quotients() {
    let q = unramified_quotient_quadric(3).unwrap();
    assert_eq!((q.free.len(), q.torsion.len()), (1, 3));
    let q = unramified_quotient_quadric(2).unwrap();
    assert_eq!((q.free.len(), q.torsion.len()), (1, 1));
    assert!(unramified_quotient_quadric(1).unwrap().torsion.is_empty());
}

#[test]
fn tau_quotient_of_elementary_abelian_is_exterior() {
    let ring = bigraded_scenario("elementary_abelian", 3, 2).unwrap();
    let total: usize = (0..=2).map(|m| tau_quotient_kernel(ring.as_ref(), m).unwrap().quotient.len()).sum();
    assert_eq!(total, 4);
}

fn laurent(n: u32) -> impl Strategy<Value = LaurentElement> {
    let top = (1u32 << (n + 1)) - 1;
    proptest::collection::vec((0..top, -4i32..4), 0..4).prop_map(move |terms| {
        terms.into_iter().fold(LaurentElement::zero(n), |acc, (a, b)| {
            acc.add(&LaurentElement::monomial(n, a, b)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn q0_is_a_square_zero_derivation(x in laurent(3), y in laurent(3)) {
        let lhs = laurent_q0(&laurent_mul(&x, &y).unwrap());
        let rhs = laurent_mul(&laurent_q0(&x), &y).unwrap().add(&laurent_mul(&x, &laurent_q0(&y)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(laurent_q0(&laurent_q0(&x)).is_zero());
    }

    #[test]
    fn q0_of_tau_multiple(x in laurent(2)) {
        let t = LaurentElement::tau(2);
        let lhs = laurent_q0(&laurent_mul(&t, &x).unwrap());
        let rhs = laurent_mul(&LaurentElement::rho(2), &x).unwrap().add(&laurent_mul(&t, &laurent_q0(&x)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
