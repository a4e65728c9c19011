mod common;

use detpol_core::covering::{
    compute_blocks, decide_covering, decide_separation, extract_lrpol_cover, extract_mpol_separator,
    extract_separator, imprint_for_class, saturate_lrpol, saturate_mpol, Certification, CoverVerdict,
    Tower,
};
use detpol_core::lang::{word::words_up_to, Alphabet, Dfa};
use detpol_core::membership::decide_membership;
use detpol_core::prevariety::{canonical_morphism, parse_class, Base, ClassExpr, PolOp};
use detpol_core::rating::{base_imprint_finite, covering_input, rho_of_morphism, Imprint, Semiring};
use detpol_core::syntactic::MonoidMorphism;
use detpol_core::words::Mode;
use detpol_core::Config;

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn sep(class: &str, l1: &str, l2: &str) -> Option<bool> {
    let cfg = Config::default();
    decide_separation(&parse_class(class).unwrap(), &common::lang("ab", l1), &common::lang("ab", l2), &cfg)
        .unwrap()
        .coverable()
}

#[test]
fn separation_examples() {
    assert_eq!(sep("LPOL(AT)", "a(a|b)*", "b(a|b)*"), Some(true));
    assert_eq!(sep("AT", "a(a|b)*", "b(a|b)*"), Some(false));
    assert_eq!(sep("RPOL(AT)", "a(a|b)*", "b(a|b)*"), Some(false));
    assert_eq!(sep("RPOL(AT)", "(a|b)*a", "(a|b)*b"), Some(true));
    // recorded value, matching the bounded product search
    assert_eq!(sep("MPOL(AT)", "(ab)+", "(ba)+"), Some(true));
    for c in ["ST", "AT", "LPOL(AT)", "MPOL(MPOL(AT))", "PTK(2)"] {
        assert_eq!(sep(c, "(a|b)*", "(a|b)*"), Some(false));
        assert_eq!(sep(c, "(a|b)*", "@"), Some(true));
    }
}

#[test]
fn one_letter_collapse() {
    let a = Alphabet::parse("a").unwrap();
    let rho = rho_of_morphism(&MonoidMorphism::trivial(&a));
    let st = canonical_morphism(Base::St, &a).unwrap();
    let p = base_imprint_finite(&st, &rho).unwrap();
    let s = saturate_lrpol(Mode::Left, &p, &st, &rho).unwrap();
    assert_eq!(s.imprint.num_generators(), 1);
    assert!(s.imprint.contains(&rho.semiring, 0, &rho.semiring.one()));
}

#[test]
fn reports_carry_certification() {
    let cfg = Config::default();
    let l = common::lang("ab", "(a|b)*a(a|b)*");
    let rep = decide_separation(&ClassExpr::Bsigma2(2), &l, &l.complement(), &cfg).unwrap();
    assert_eq!(rep.certification, Certification::ApproxSound);
    assert_eq!(rep.ptk, Some(cfg.ptk));
    assert_eq!(rep.verdict, CoverVerdict::Coverable);
    let rep = decide_separation(&ClassExpr::Bsigma2(1), &common::lang("ab", "(ab)*"), &common::lang("ab", "(ab)*").complement(), &cfg).unwrap();
    assert_eq!(rep.verdict, CoverVerdict::Unknown);
    assert!(rep.obstruction.is_some());
    let rep = decide_separation(&ClassExpr::At, &l, &l.complement(), &cfg).unwrap();
    assert_eq!(rep.certification, Certification::Exact);
    assert!(decide_separation(&ClassExpr::upol(ClassExpr::At), &l, &l, &cfg).is_err());
    assert!(decide_separation(&ClassExpr::Pt, &l, &l, &cfg).is_ok());
    assert_eq!(
        Tower::of(&parse_class("LP(2,AT)").unwrap()).unwrap(),
        Tower { base: Base::At, ops: vec![PolOp::R, PolOp::L] }
    );
}

#[test]
fn separation_from_complement_is_membership() {
    let cfg = Config::default();
    let classes = ["ST", "AT", "PTK(1)", "PTK(2)", "LPOL(AT)", "RPOL(AT)", "MPOL(AT)", "MPOL(ST)", "LPOL(RPOL(AT))", "MPOL(MPOL(AT))"];
    for c in classes {
        let e = parse_class(c).unwrap();
        for (al, re) in common::FIXTURES {
            let l = common::lang(al, re);
            let member = decide_membership(&e, &l, &cfg).unwrap();
            let rep = decide_separation(&e, &l, &l.complement(), &cfg).unwrap();
            assert_eq!(rep.coverable(), Some(member), "{c} {re}");
        }
    }
}

fn levels(expr: &str, l0: &Dfa, l1: &Dfa) -> (MonoidMorphism, Imprint<Vec<u64>>, detpol_core::rating::CoveringInput) {
    let input = covering_input(l0, std::slice::from_ref(l1)).unwrap();
    let (eta, p) = imprint_for_class(&parse_class(expr).unwrap(), &input.rating).unwrap();
    (eta, p, input)
}

#[test]
fn larger_classes_give_smaller_imprints() {
    for (x, y) in common::PAIRS.iter().take(12) {
        let (l1, l2) = (common::lang("ab", x), common::lang("ab", y));
        let (_, at, input) = levels("AT", &l1, &l2);
        let sr = &input.rating.semiring;
        let (_, lp, _) = levels("LPOL(AT)", &l1, &l2);
        let (_, rp, _) = levels("RPOL(AT)", &l1, &l2);
        let (_, mp, _) = levels("MPOL(AT)", &l1, &l2);
        let (_, mm, _) = levels("MPOL(MPOL(AT))", &l1, &l2);
        assert!(lp.is_subset(sr, &at) && rp.is_subset(sr, &at));
        assert!(mp.is_subset(sr, &lp) && mp.is_subset(sr, &rp));
        assert!(mm.is_subset(sr, &mp));
    }
}

#[test]
fn outputs_are_closed_under_their_rules() {
    for (x, y) in common::PAIRS.iter().take(8) {
        let input = covering_input(&common::lang("ab", x), &[common::lang("ab", y)]).unwrap();
        let rho = &input.rating;
        let sr = &rho.semiring;
        let eta = canonical_morphism(Base::At, &ab()).unwrap();
        let m = eta.target();
        let g = m.green();
        let p = base_imprint_finite(&eta, rho).unwrap();
        for mode in [Mode::Left, Mode::Right] {
            let s = saturate_lrpol(mode, &p, &eta, rho).unwrap().imprint;
            let gens: Vec<(usize, Vec<u64>)> = s.generators().map(|(a, b)| (a, b.clone())).collect();
            for (t, q) in &gens {
                for (u, r) in &gens {
                    assert!(s.contains(sr, m.mul(*t, *u), &sr.mul(q, r)));
                }
                if m.is_idempotent(*t) {
                    let f = sr.omega(q);
                    for (u, r) in p.generators() {
                        if mode == Mode::Left && g.r_leq(*t, u) {
                            assert!(s.contains(sr, m.mul(*t, u), &sr.mul(&f, r)));
                        }
                        if mode == Mode::Right && g.l_leq(*t, u) {
                            assert!(s.contains(sr, m.mul(u, *t), &sr.mul(r, &f)));
                        }
                    }
                }
            }
            for (w, val) in detpol_core::rating::trivial_pairs(&eta, rho).unwrap() {
                assert!(s.contains(sr, w, &val));
            }
        }
    }
}

#[test]
fn left_and_right_are_mirror_images() {
    let rev = |d: &Dfa| d.reverse();
    for (x, y) in common::PAIRS {
        let (l1, l2) = (common::lang("ab", x), common::lang("ab", y));
        let cfg = Config::default();
        let l = decide_separation(&ClassExpr::lpol(ClassExpr::At), &l1, &l2, &cfg).unwrap();
        let r = decide_separation(&ClassExpr::rpol(ClassExpr::At), &rev(&l1), &rev(&l2), &cfg).unwrap();
        assert_eq!(l.verdict, r.verdict, "{x} {y}");
    }
}

#[test]
fn block_examples() {
    // over the trivial base every product of the three sets is a block
    let rho = rho_of_morphism(&common::syn("ab", "(ab)*"));
    let st = canonical_morphism(Base::St, &ab()).unwrap();
    let p = base_imprint_finite(&st, &rho).unwrap();
    let blocks = compute_blocks(&p, &p, &p, &st, &rho.semiring);
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].left_idem.0, 0);

    let at = canonical_morphism(Base::At, &ab()).unwrap();
    let a = at.eval(b"a").unwrap();
    let p = base_imprint_finite(&at, &rho).unwrap();
    let p1 = saturate_lrpol(Mode::Left, &p, &at, &rho).unwrap().imprint;
    let p2 = saturate_lrpol(Mode::Right, &p, &at, &rho).unwrap().imprint;
    let blocks = compute_blocks(&p1, &p, &p2, &at, &rho.semiring);
    let mpol = saturate_mpol(&p1, &p, &p2, &at, &rho).unwrap().imprint;
    let m = at.target();
    for b in &blocks {
        assert!(mpol.contains(&rho.semiring, b.s, &b.r));
        assert_eq!(m.mul_all([b.left.0, b.left_idem.0, b.middle.0, b.right_idem.0, b.right.0]), b.s);
        assert!(m.is_idempotent(b.left_idem.0) && m.is_idempotent(b.right_idem.0));
        let sr = &rho.semiring;
        assert!(sr.is_idempotent(&b.left_idem.1) && sr.is_idempotent(&b.right_idem.1));
        let r = [&b.left.1, &b.left_idem.1, &b.middle.1, &b.right_idem.1, &b.right.1]
            .into_iter()
            .fold(sr.one(), |x, y| sr.mul(&x, y));
        assert_eq!(r, b.r);
        if b.s == a {
            // the content monoid has singleton J-classes
            assert_eq!((b.left_idem.0, b.right_idem.0), (a, a));
        }
    }
    assert!(blocks.iter().any(|b| b.s == a));
}

#[test]
fn lrpol_cover_extraction() {
    let cfg = Config::default();
    let rho = rho_of_morphism(&common::syn("ab", "(ab)*"));
    let at = canonical_morphism(Base::At, &ab()).unwrap();
    let a = at.eval(b"a").unwrap();
    let cover = extract_lrpol_cover(Mode::Left, Base::At, a, &rho, &cfg).unwrap().expect("cover found");
    assert!(cover.flags_ok());
    let union = cover.to_dfa().unwrap();
    for w in words_up_to(&ab(), 8) {
        assert_eq!(union.accepts(&w), at.eval(&w).unwrap() == a);
    }
    let eps = at.eval(b"").unwrap();
    let cover = extract_lrpol_cover(Mode::Right, Base::At, eps, &rho, &cfg).unwrap().unwrap();
    assert_eq!(cover.products.len(), 1);
    assert_eq!(cover.to_dfa().unwrap(), common::lang("ab", "%"));
    // imprint of the emitted cover stays inside the saturated set
    let p = base_imprint_finite(&at, &rho).unwrap();
    let s = saturate_lrpol(Mode::Left, &p, &at, &rho).unwrap().imprint;
    let ab_elem = at.eval(b"ab").unwrap();
    let cover = extract_lrpol_cover(Mode::Left, Base::At, ab_elem, &rho, &cfg).unwrap().unwrap();
    for prod in &cover.products {
        let r = rho.eval_nice(&prod.to_dfa()).unwrap();
        assert!(s.contains(&rho.semiring, ab_elem, &r));
    }
    assert!(cover.flags_ok());
}

#[test]
fn separator_extraction() {
    let cfg = Config::default();
    let l1 = common::lang("ab", "a(a|b)*");
    let empty = Dfa::empty(&ab());
    let c = extract_mpol_separator(Base::At, &l1, &empty, &cfg).unwrap().unwrap();
    assert_eq!(c.k, 0);
    let l2 = common::lang("ab", "b(a|b)*");
    let c = extract_mpol_separator(Base::At, &l1, &l2, &cfg).unwrap().unwrap();
    assert_eq!(c.k, 1);
    assert!(c.flags_ok());
    let d = c.to_dfa().unwrap();
    assert!(l1.is_subset(&d).unwrap() && d.is_disjoint(&l2).unwrap());
    let c = extract_separator(Mode::Left, Base::At, &l1, &l2, &cfg).unwrap().unwrap();
    assert!(c.flags_ok());
    assert!(!c.regexes().is_empty());
    // not separable, so nothing is found
    let l3 = common::lang("ab", "(a|b)*a");
    let l4 = common::lang("ab", "(a|b)*b");
    assert!(extract_separator(Mode::Left, Base::At, &l3, &l4, &cfg).unwrap().is_none());
}

#[test]
fn brute_force_agreement_on_short_products() {
    let atoms = common::Atoms::new("ab", 2);
    for (class, mode) in [("LPOL(AT)", Mode::Left), ("RPOL(AT)", Mode::Right), ("MPOL(AT)", Mode::Mixed)] {
        for (x, y) in common::PAIRS.iter().step_by(3) {
            let (l1, l2) = (common::lang("ab", x), common::lang("ab", y));
            if let Some(expect) = common::bounded_separator(&atoms, mode, &l1, &l2) {
                assert_eq!(sep(class, x, y), Some(expect), "{class} {x} {y}");
            }
        }
    }
}

#[test]
fn approximation_is_monotone_in_k() {
    let e = ClassExpr::Bsigma2(2);
    for (x, y) in common::PAIRS.iter().take(6) {
        let (l1, l2) = (common::lang("ab", x), common::lang("ab", y));
        let input = covering_input(&l1, std::slice::from_ref(&l2)).unwrap();
        let sr = &input.rating.semiring;
        let mut prev: Option<(Imprint<Vec<u64>>, bool)> = None;
        for k in 1..=3 {
            let (_, p) = imprint_for_class(&e.replace_pt(&ClassExpr::Ptk(k)), &input.rating).unwrap();
            let mut proj = Imprint::new();
            for r in p.project(sr) {
                proj.insert(sr, 0, r);
            }
            let coverable = !proj.generators().any(|(_, r)| input.is_goal(r));
            if let Some((before, was)) = &prev {
                assert!(proj.is_subset(sr, before), "{x} {y} k={k}");
                assert!(!was || coverable);
            }
            prev = Some((proj, coverable));
        }
    }
}

#[test]
fn covering_with_several_languages() {
    let cfg = Config::default();
    let all = Dfa::universal(&ab());
    let ls = [common::lang("ab", "a(a|b)*"), common::lang("ab", "b(a|b)*"), common::lang("ab", "%")];
    // each member of a cover must avoid one of the listed languages
    let rep = decide_covering(&ClassExpr::lpol(ClassExpr::At), &all, &ls[..2], &cfg).unwrap();
    assert_eq!(rep.verdict, CoverVerdict::Coverable);
    let rep = decide_covering(&ClassExpr::At, &all, &ls[..2], &cfg).unwrap();
    assert_eq!(rep.verdict, CoverVerdict::NotCoverable);
    // the full-content class avoids the empty word
    let rep = decide_covering(&ClassExpr::At, &all, &ls, &cfg).unwrap();
    assert_eq!(rep.verdict, CoverVerdict::Coverable);
    let rep = decide_covering(&ClassExpr::St, &all, &ls, &cfg).unwrap();
    assert_eq!(rep.verdict, CoverVerdict::NotCoverable);
}
