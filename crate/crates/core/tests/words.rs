mod common;

use detpol_core::equiv::{canonical_equiv, quotient_c_morphism};
use detpol_core::lang::word::{reversed, words_up_to};
use detpol_core::lang::Dfa;
use detpol_core::membership::{decide_membership, is_class_morphism};
use detpol_core::prevariety::{canonical_morphism, parse_class, Base, ClassExpr};
use detpol_core::syntactic::MonoidMorphism;
use detpol_core::words::{
    class_as_product, class_key, classify_product, equivalent, equivalent_existential,
    find_class_level, marked_positions, snapshot, MarkedProduct, Mode,
};
use detpol_core::Config;
use proptest::prelude::*;

const MODES: [Mode; 3] = [Mode::Left, Mode::Right, Mode::Mixed];

fn some_a() -> MonoidMorphism {
    common::syn("ab", "(a|b)*a(a|b)*")
}

fn at(al: &str) -> MonoidMorphism {
    canonical_morphism(Base::At, &detpol_core::lang::Alphabet::parse(al).unwrap()).unwrap()
}

/// `P◁` through the mirror of `P▷` on the reversed monoid.
fn right_by_mirror(eta: &MonoidMorphism, k: usize, w: &[u8]) -> Vec<usize> {
    let rev = eta.reverse();
    let n = w.len();
    let mut out: Vec<usize> = marked_positions(&rev, k, &reversed(w), Mode::Left)
        .unwrap()
        .into_iter()
        .map(|i| n + 1 - i)
        .collect();
    out.sort();
    out
}

/// Literal transcription of the left recurrence, level by level.
fn left_literal(eta: &MonoidMorphism, k: usize, w: &[u8]) -> Vec<usize> {
    let m = eta.target();
    let g = m.green();
    let img = |i: usize, j: usize| eta.eval(&w[i..j - 1]).unwrap();
    let mut prev: Vec<usize> = Vec::new();
    for _ in 0..k {
        let mut cur = Vec::new();
        for i in 1..=w.len() {
            let anchors = std::iter::once(0).chain(prev.iter().copied());
            if anchors.filter(|&j| j < i).any(|j| g.r_lt(img(j, i + 1), img(j, i))) {
                cur.push(i);
            }
        }
        prev = cur;
    }
    prev
}

#[test]
fn position_examples() {
    let eta = some_a();
    for mode in MODES {
        assert!(marked_positions(&eta, 0, b"abab", mode).unwrap().is_empty());
    }
    assert_eq!(marked_positions(&eta, 1, b"ba", Mode::Left).unwrap(), vec![2]);
    // recorded value, cross-checked by the mirror construction
    let right = marked_positions(&eta, 1, b"ba", Mode::Right).unwrap();
    assert_eq!(right, vec![2]);
    assert_eq!(right, right_by_mirror(&eta, 1, b"ba"));
}

#[test]
fn snapshot_examples() {
    let eta = some_a();
    let one = eta.target().unit();
    let s = snapshot(&eta, b"ba", &[]).unwrap();
    assert_eq!(s.gaps, vec![eta.eval(b"ba").unwrap()]);
    let s = snapshot(&eta, b"ba", &[2]).unwrap();
    assert_eq!((s.gaps, s.letters), (vec![one, one], b"a".to_vec()));
    let s = snapshot(&eta, b"ab", &[1, 2]).unwrap();
    assert_eq!((s.gaps, s.letters), (vec![one, one, one], b"ab".to_vec()));
    assert!(snapshot(&eta, b"ab", &[2, 1]).is_err());
    assert!(snapshot(&eta, b"ab", &[3]).is_err());
}

#[test]
fn equivalence_examples() {
    let eta = at("ab");
    let direct = equivalent(&eta, 1, Mode::Mixed, b"ab", b"ba").unwrap();
    let exist = equivalent_existential(&eta, 1, Mode::Mixed, b"ab", b"ba").unwrap();
    assert_eq!(direct, exist);
    // the first letter of each word is marked from the left
    assert!(!direct);
    let trivial = MonoidMorphism::trivial(eta.alphabet());
    for k in 0..3 {
        for mode in MODES {
            assert!(equivalent(&trivial, k, mode, b"aab", b"b").unwrap());
        }
    }
    assert!(equivalent(&eta, 2, Mode::Left, b"abba", b"abba").unwrap());
}

#[test]
fn class_product_examples() {
    let eta = some_a();
    let p = class_as_product(&eta, 0, Mode::Left, b"bab").unwrap();
    assert_eq!(p.parts().len(), 1);
    assert_eq!(p.to_dfa(), common::lang("ab", "(a|b)*a(a|b)*"));
    let p = class_as_product(&eta, 1, Mode::Left, b"ba").unwrap();
    assert_eq!(p.to_dfa(), common::lang("ab", "b*ab*"));
}

fn product(al: &str, parts: &[&str], letters: &str) -> MarkedProduct {
    MarkedProduct::new(
        parts.iter().map(|r| common::lang(al, r)).collect(),
        letters.bytes().collect(),
    )
    .unwrap()
}

#[test]
fn classification_examples() {
    let p = product("abc", &["(ab)+", "c+", "(ba)+"], "cc");
    let f = classify_product(&p);
    assert!(f.mixed_det && !f.left_det && !f.right_det && f.unambiguous);
    let p = product("abc", &["(ab)+", "(ca)+"], "a");
    let f = classify_product(&p);
    assert!(f.unambiguous && !f.mixed_det);
    let p = product("abc", &["b+", "a+", "(a|b|c)+"], "bc");
    let f = classify_product(&p);
    assert!(!f.mixed_det);
    // A*aA* is ambiguous, (A-a)*aA* is left deterministic
    let f = classify_product(&product("ab", &["(a|b)*", "(a|b)*"], "a"));
    assert!(!f.unambiguous && !f.mixed_det);
    let f = classify_product(&product("ab", &["b*", "(a|b)*"], "a"));
    assert!(f.left_det && f.unambiguous);
    assert!(MarkedProduct::new(vec![common::lang("ab", "a")], b"a".to_vec()).is_err());
}

fn sample_morphisms() -> Vec<MonoidMorphism> {
    let mut out = vec![at("ab"), at("abc")];
    for (al, re) in common::FIXTURES.iter().take(9) {
        out.push(common::syn(al, re));
    }
    out
}

fn sample_words(eta: &MonoidMorphism, len: usize) -> Vec<Vec<u8>> {
    let all = words_up_to(eta.alphabet(), len);
    // keep the set modest for three letters
    all.into_iter().step_by(if eta.alphabet().len() > 2 { 7 } else { 1 }).collect()
}

#[test]
fn recurrences_agree_with_second_implementations() {
    for eta in sample_morphisms() {
        for w in sample_words(&eta, 6) {
            for k in 0..=3 {
                assert_eq!(marked_positions(&eta, k, &w, Mode::Left).unwrap(), left_literal(&eta, k, &w));
                assert_eq!(marked_positions(&eta, k, &w, Mode::Right).unwrap(), right_by_mirror(&eta, k, &w));
            }
        }
    }
}

#[test]
fn index_bound_and_product_flags() {
    for eta in sample_morphisms() {
        let n = eta.size();
        for w in sample_words(&eta, 6) {
            for k in 0..=3usize {
                let p = marked_positions(&eta, k, &w, Mode::Mixed).unwrap();
                assert!(p.len() <= 2 * n.pow(k as u32));
                if k <= 2 && w.len() <= 4 {
                    for mode in MODES {
                        let prod = class_as_product(&eta, k, mode, &w).unwrap();
                        let f = classify_product(&prod);
                        let ok = match mode {
                            Mode::Left => f.left_det,
                            Mode::Right => f.right_det,
                            Mode::Mixed => f.mixed_det,
                        };
                        assert!(ok);
                        assert!(prod.to_dfa().accepts(&w));
                    }
                }
            }
        }
    }
}

#[test]
fn class_products_contain_exactly_the_class() {
    let eta = at("ab");
    for w in words_up_to(eta.alphabet(), 3) {
        for mode in MODES {
            let d: Dfa = class_as_product(&eta, 1, mode, &w).unwrap().to_dfa();
            for v in words_up_to(eta.alphabet(), 7) {
                assert_eq!(d.accepts(&v), equivalent(&eta, 1, mode, &w, &v).unwrap());
            }
        }
    }
}

#[test]
fn existential_form_agrees() {
    for eta in sample_morphisms().into_iter().take(6) {
        let words = words_up_to(eta.alphabet(), 4);
        for u in &words {
            for v in words.iter().step_by(3) {
                for mode in MODES {
                    assert_eq!(
                        equivalent(&eta, 2, mode, u, v).unwrap(),
                        equivalent_existential(&eta, 2, mode, u, v).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn equivalences_are_congruences() {
    let eta = common::syn("ab", "(ab)*");
    let words = words_up_to(eta.alphabet(), 4);
    for mode in MODES {
        let keys: Vec<_> = words.iter().map(|w| class_key(&eta, 1, mode, w).unwrap()).collect();
        for i in 0..words.len() {
            for j in 0..words.len() {
                if keys[i] != keys[j] {
                    continue;
                }
                for x in words.iter().take(7) {
                    let l = [words[i].as_slice(), x].concat();
                    let r = [words[j].as_slice(), x].concat();
                    assert!(equivalent(&eta, 1, mode, &l, &r).unwrap());
                    let l = [x.as_slice(), &words[i]].concat();
                    let r = [x.as_slice(), &words[j]].concat();
                    assert!(equivalent(&eta, 1, mode, &l, &r).unwrap());
                }
            }
        }
    }
}

#[test]
fn positions_transfer_to_the_base_quotient() {
    let cfg = Config::default();
    let upol_at = ClassExpr::upol(ClassExpr::At);
    for (al, re) in common::FIXTURES {
        let alpha = common::syn(al, re);
        if !is_class_morphism(&upol_at, &alpha, &cfg).unwrap() {
            continue;
        }
        let c = canonical_equiv(&ClassExpr::At, &alpha, &cfg).unwrap();
        let eta = quotient_c_morphism(&alpha, &c);
        let m = alpha.size();
        for w in sample_words(&alpha, 6) {
            for k in 1..=2 {
                for mode in [Mode::Left, Mode::Right] {
                    let small = marked_positions(&alpha, k, &w, mode).unwrap();
                    let big = marked_positions(&eta, k * m, &w, mode).unwrap();
                    assert!(small.iter().all(|i| big.contains(i)), "{re}");
                }
            }
        }
    }
}

#[test]
fn mixed_members_are_unions_of_classes() {
    let cfg = Config::default();
    for (al, re) in common::FIXTURES.iter().filter(|(a, _)| *a == "ab") {
        let l = common::lang(al, re);
        for inner in [ClassExpr::St, ClassExpr::At] {
            let e = ClassExpr::mpol(inner.clone());
            if !decide_membership(&e, &l, &cfg).unwrap() {
                continue;
            }
            let alpha = common::syn(al, re);
            let c = canonical_equiv(&inner, &alpha, &cfg).unwrap();
            let eta = quotient_c_morphism(&alpha, &c);
            let level = find_class_level(&eta, Mode::Mixed, &l, 3, 6).unwrap();
            assert!(level.is_some(), "{re} {inner}");
        }
    }
}

#[test]
fn ab_star_mixed_verdict_matches_oracle() {
    let cfg = Config::default();
    let l = common::lang("ab", "(ab)*");
    let alpha = common::syn("ab", "(ab)*");
    let c = canonical_equiv(&ClassExpr::At, &alpha, &cfg).unwrap();
    let eta = quotient_c_morphism(&alpha, &c);
    let verdict = decide_membership(&parse_class("MPOL(AT)").unwrap(), &l, &cfg).unwrap();
    let oracle = find_class_level(&eta, Mode::Mixed, &l, 3, 8).unwrap().is_some();
    assert_eq!(verdict, oracle);
}

proptest! {
    #[test]
    fn mixed_is_union_of_sides(w in "[ab]{0,8}", k in 0usize..4) {
        let eta = common::syn("ab", "(ab)*");
        let w = w.as_bytes();
        let l = marked_positions(&eta, k, w, Mode::Left).unwrap();
        let r = marked_positions(&eta, k, w, Mode::Right).unwrap();
        let mut u: Vec<usize> = l.into_iter().chain(r).collect();
        u.sort();
        u.dedup();
        prop_assert_eq!(marked_positions(&eta, k, w, Mode::Mixed).unwrap(), u);
    }
}
