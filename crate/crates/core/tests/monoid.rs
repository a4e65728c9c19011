mod common;

use detpol_core::monoid::{
    quotient, syntactic_congruence_of_subset, syntactic_congruence_with_gens, Congruence,
    FiniteMonoid, MonoidError,
};
use proptest::prelude::*;

fn u1() -> FiniteMonoid {
    FiniteMonoid::new(2, vec![0, 1, 1, 1], 0).unwrap()
}

fn z2() -> FiniteMonoid {
    FiniteMonoid::new(2, vec![0, 1, 1, 0], 0).unwrap()
}

#[test]
fn u1_green_and_omega() {
    let m = u1();
    let g = m.green();
    assert_eq!(m.omega(), 1);
    assert!(g.r_lt(1, 0));
    assert!(g.j_lt(1, 0));
    assert!(!g.r_lt(0, 1));
    assert!(g.is_j_trivial());
    assert_eq!(m.idempotents(), vec![0, 1]);
}

#[test]
fn z2_omega_is_two() {
    let m = z2();
    assert_eq!(m.omega(), 2);
    assert_eq!(m.omega_power(1, 2), 0);
    assert!(!m.green().is_j_trivial());
}

#[test]
fn omega_mixes_index_and_period() {
    // Z/2 x (two-step nilpotent with unit): index 2, period 2
    let nil = FiniteMonoid::new(3, vec![0, 1, 2, 1, 2, 2, 2, 2, 2], 0).unwrap();
    assert_eq!(nil.omega(), 2);
    let p = z2().product(&nil);
    assert_eq!(p.omega(), 2);
    let c3 = FiniteMonoid::new(3, vec![0, 1, 2, 1, 2, 0, 2, 0, 1], 0).unwrap();
    // index 2, period 3: least multiple of 3 that is at least 2
    assert_eq!(c3.product(&nil).omega(), 3);
}

#[test]
fn rejects_bad_tables() {
    assert_eq!(FiniteMonoid::new(2, vec![0, 1, 1], 0), Err(MonoidError::BadTable));
    assert!(matches!(
        FiniteMonoid::new(2, vec![0, 1, 1, 1], 1),
        Err(MonoidError::BadUnit(1))
    ));
    // left-zero semigroup {a, b} with a unit adjoined
    assert!(FiniteMonoid::new(3, vec![0, 1, 2, 1, 1, 1, 2, 2, 2], 0).is_ok());
    // break associativity
    let bad = FiniteMonoid::new(3, vec![0, 1, 2, 1, 2, 1, 2, 1, 1], 0);
    assert!(matches!(bad, Err(MonoidError::NotAssociative(..))));
}

#[test]
fn syntactic_monoid_of_ab_star() {
    let alpha = common::syn("ab", "(ab)*");
    let m = alpha.target();
    assert_eq!(m.size(), 6);
    assert_eq!(m.omega(), 2);
    let a = alpha.image_of(b'a').unwrap();
    let ab = alpha.eval(b"ab").unwrap();
    assert!(m.green().j_equiv(a, ab));
    assert!(m.is_idempotent(ab));
    assert!(!m.green().is_j_trivial());
}

#[test]
fn dump_round_trip() {
    let alpha = common::syn("ab", "(ab)*");
    let m = alpha.named_target();
    let text = m.to_dump();
    assert!(text.starts_with("monoid 6"));
    let back = FiniteMonoid::from_dump(&text).unwrap();
    assert_eq!(back, m);
    assert!(FiniteMonoid::from_dump("monoid 2\n0 1\n").is_err());
}

#[test]
fn congruence_checks() {
    let m = common::syn("ab", "(ab)*").target().clone();
    let zero = (0..m.size()).find(|&z| (0..m.size()).all(|x| m.mul(x, z) == z)).unwrap();
    // merging the unit with zero collapses everything, so not compatible alone
    let mut class: Vec<usize> = (0..m.size()).collect();
    class[zero] = m.unit();
    assert!(matches!(
        Congruence::new(&m, class),
        Err(MonoidError::IncompatibleCongruence(..))
    ));
    let gen = Congruence::generated(&m, &[(m.unit(), zero)]);
    assert_eq!(gen.num_classes(), 1);
    let total = Congruence::total(m.size());
    let (q, _) = quotient(&m, &total).unwrap();
    assert_eq!(q.size(), 1);
    assert!(Congruence::identity(m.size()).refines(&total));
    assert!(!total.refines(&Congruence::identity(m.size())));
}

#[test]
fn subset_congruence_recovers_syntactic_monoid() {
    for (al, re) in common::FIXTURES {
        let rl = detpol_core::syntactic::syntactic_morphism(&common::lang(al, re));
        let c = syntactic_congruence_of_subset(rl.morphism.target(), &rl.accept);
        assert!(c.is_identity(), "{re}");
    }
}

#[test]
fn reverse_and_product() {
    let m = common::syn("ab", "(ab)*").target().clone();
    let r = m.reverse();
    for x in m.elements() {
        for y in m.elements() {
            assert_eq!(r.mul(x, y), m.mul(y, x));
        }
    }
    let p = m.product(&u1());
    assert_eq!(p.size(), 12);
    assert_eq!(p.mul(2 * 2 + 1, 3 * 2), m.mul(2, 3) * 2 + 1);
}

fn brute_green(m: &FiniteMonoid) {
    let g = m.green();
    for s in m.elements() {
        for t in m.elements() {
            let r = m.elements().any(|x| m.mul(t, x) == s);
            let l = m.elements().any(|x| m.mul(x, t) == s);
            let j = m.elements().any(|x| m.elements().any(|y| m.mul_all([x, t, y]) == s));
            assert_eq!(g.r_leq(s, t), r);
            assert_eq!(g.l_leq(s, t), l);
            assert_eq!(g.j_leq(s, t), j);
        }
    }
}

#[test]
fn green_matches_definition_on_fixtures() {
    for (al, re) in common::FIXTURES {
        brute_green(common::syn(al, re).target());
    }
}

proptest! {
    #[test]
    fn generator_refinement_agrees(idx in 0usize..18, bits in any::<u64>()) {
        let (al, re) = common::FIXTURES[idx];
        let alpha = common::syn(al, re);
        let m = alpha.target();
        let f: Vec<bool> = (0..m.size()).map(|s| bits >> (s % 64) & 1 == 1).collect();
        let a = syntactic_congruence_of_subset(m, &f);
        let b = syntactic_congruence_with_gens(m, alpha.images(), &f);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn omega_powers_are_idempotent(idx in 0usize..18) {
        let (al, re) = common::FIXTURES[idx];
        let m = common::syn(al, re).target().clone();
        let w = m.omega();
        for s in m.elements() {
            prop_assert!(m.is_idempotent(m.pow(s, w)));
        }
        // minimality
        prop_assert!(w == 1 || (1..w).all(|k| m.elements().any(|s| !m.is_idempotent(m.pow(s, k)))));
    }
}
