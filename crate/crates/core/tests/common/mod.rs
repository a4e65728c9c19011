#![allow(dead_code)]

use detpol_core::lang::{compile_over, parse_regex, Alphabet, Dfa};
use detpol_core::syntactic::{syntactic_morphism, MonoidMorphism};

pub fn lang(alphabet: &str, regex: &str) -> Dfa {
    let a = Alphabet::parse(alphabet).unwrap();
    compile_over(&parse_regex(regex).unwrap(), &a).unwrap()
}

pub fn syn(alphabet: &str, regex: &str) -> MonoidMorphism {
    syntactic_morphism(&lang(alphabet, regex)).morphism
}

/// Small languages used across the test files.
pub const FIXTURES: &[(&str, &str)] = &[
    ("ab", "(ab)*"),
    ("ab", "(a|b)*a(a|b)*"),
    ("ab", "a+"),
    ("ab", "a(a|b)*"),
    ("ab", "(a|b)*a"),
    ("ab", "%"),
    ("ab", "b*ab*"),
    ("ab", "(a|b)*ab(a|b)*"),
    ("ab", "a(a|b)*b"),
    ("ab", "(aa)*"),
    ("ab", "a*b*"),
    ("ab", "(a|b)*a(a|b)*b(a|b)*"),
    ("ab", "b*a(a|b)*"),
    ("ab", "(a|b)*b(a|b)*a"),
    ("abc", "(a|b)*c(a|b|c)*"),
    ("abc", "a*b(a|c)*"),
    ("abc", "(a|b|c)*ab(a|b|c)*"),
    ("abc", "c*a(b|c)*"),
];

use detpol_core::monoid::FiniteMonoid;

fn table_monoid(n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteMonoid {
    let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
    FiniteMonoid::new(n, table, 0).unwrap()
}

/// Monoids with at most four elements; element 0 is the unit.
pub fn small_monoids() -> Vec<FiniteMonoid> {
    let u1 = table_monoid(2, |x, y| x.max(y));
    let nil = table_monoid(3, |x, y| match (x, y) {
        (0, z) | (z, 0) => z,
        _ => 2,
    });
    let left_zero = table_monoid(3, |x, y| if x == 0 { y } else { x });
    vec![
        FiniteMonoid::trivial(),
        u1.clone(),
        table_monoid(2, |x, y| (x + y) % 2),
        table_monoid(3, |x, y| (x + y) % 3),
        nil,
        left_zero,
        table_monoid(4, |x, y| (x + y) % 4),
        u1.product(&u1),
        u1.product(&table_monoid(2, |x, y| (x + y) % 2)),
    ]
}

use detpol_core::prevariety::{canonical_morphism, Base};
use detpol_core::syntactic::image_language;
use detpol_core::words::{classify_product, MarkedProduct, Mode, ProductFlags};

/// Marked products of content classes with at most `max_letters` letters,
/// with their determinism flags. Every product of alphabet testable
/// languages is a union of these.
pub struct Atoms {
    pub items: Vec<(Dfa, ProductFlags)>,
}

impl Atoms {
    pub fn new(alphabet: &str, max_letters: usize) -> Atoms {
        let al = Alphabet::parse(alphabet).unwrap();
        let eta = canonical_morphism(Base::At, &al).unwrap();
        let classes: Vec<Dfa> = eta
            .target()
            .elements()
            .map(|s| image_language(&eta, &(0..eta.size()).map(|t| t == s).collect::<Vec<_>>()))
            .collect();
        let mut items = Vec::new();
        for n in 0..=max_letters {
            let parts = itertools::Itertools::multi_cartesian_product((0..=n).map(|_| 0..classes.len()));
            let parts: Vec<Vec<usize>> = if n == 0 {
                (0..classes.len()).map(|c| vec![c]).collect()
            } else {
                parts.collect()
            };
            let words: Vec<Vec<u8>> = if n == 0 {
                vec![vec![]]
            } else {
                itertools::Itertools::multi_cartesian_product((0..n).map(|_| al.letters().to_vec())).collect()
            };
            for p in &parts {
                for w in &words {
                    let prod = MarkedProduct::new(p.iter().map(|&c| classes[c].clone()).collect(), w.clone()).unwrap();
                    let flags = classify_product(&prod);
                    items.push((prod.to_dfa(), flags));
                }
            }
        }
        Atoms { items }
    }
}

/// Bounded separator search: `Some(true)` when the union of admissible
/// atoms avoiding `l2` contains `l1`, `Some(false)` when `l1` meets `l2`,
/// otherwise inconclusive.
pub fn bounded_separator(atoms: &Atoms, mode: Mode, l1: &Dfa, l2: &Dfa) -> Option<bool> {
    if !l1.is_disjoint(l2).unwrap() {
        return Some(false);
    }
    let mut union = Dfa::empty(l1.alphabet());
    for (d, f) in &atoms.items {
        let ok = match mode {
            Mode::Left => f.left_det,
            Mode::Right => f.right_det,
            Mode::Mixed => f.mixed_det,
        };
        if ok && d.is_disjoint(l2).unwrap() {
            union = union.union(d).unwrap();
        }
    }
    l1.is_subset(&union).unwrap().then_some(true)
}

/// Language pairs over `ab` for separation checks.
pub const PAIRS: &[(&str, &str)] = &[
    ("a(a|b)*", "b(a|b)*"),
    ("(a|b)*a", "(a|b)*b"),
    ("(ab)+", "(ba)+"),
    ("(ab)*", "(a|b)*aa(a|b)*"),
    ("a+", "b+"),
    ("a*", "b(a|b)*"),
    ("(aa)*", "a(aa)*"),
    ("a*b*", "(a|b)*ba(a|b)*"),
    ("b*ab*", "b*ab*ab*"),
    ("(a|b)*ab(a|b)*", "b*a*"),
    ("a(a|b)*b", "b(a|b)*a"),
    ("a(a|b)*b", "a(a|b)*a"),
    ("(a|b)*a(a|b)*", "b*"),
    ("%", "(a|b)+"),
    ("ab", "ba"),
    ("aab", "abb"),
    ("(ab)*", "(ba)*b"),
    ("a(ba)*", "b(ab)*"),
    ("b*a(a|b)*", "a*b(a|b)*"),
    ("(a|b)*bb(a|b)*", "(ab|b)*a"),
    ("a*ba*", "a*"),
    ("(ab)+", "a(a|b)*a"),
    ("(a|b)*a(a|b)*b(a|b)*", "b*a*"),
    ("ba*", "ab*"),
    ("(aab)*", "(abb)*"),
    ("a(a|b)*", "(a|b)*b"),
    ("(a|b)*aa", "(a|b)*bb"),
    ("b(a|b)*b", "a(a|b)*a"),
    ("a*b", "b*a"),
    ("(ab|ba)*", "(a|b)*(aa|bb)(a|b)*"),
];

use detpol_core::rating::{RatingMap, Semiring, TableSemiring};
use detpol_core::syntactic::MonoidMorphism as Morphism;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_rating(rng: &mut ChaCha8Rng, al: &Alphabet) -> RatingMap<TableSemiring> {
    let ms = small_monoids();
    let m = &ms[rng.gen_range(0..ms.len())];
    let sr = TableSemiring::powerset(m).unwrap();
    let letters = (0..al.len()).map(|_| rng.gen_range(0..sr.size())).collect();
    RatingMap::new(sr, al.clone(), letters).unwrap()
}

pub fn downset_mask(sr: &TableSemiring, vals: &[usize]) -> u32 {
    sr.elements()
        .filter(|x| vals.iter().any(|v| sr.leq(x, v)))
        .fold(0, |m, x| m | 1 << x)
}

/// Smallest imprint over every cover of `η⁻¹(s)` by unions of classes.
pub fn exhaustive_optimum(eta: &Morphism, rho: &RatingMap<TableSemiring>, s: usize) -> u32 {
    let n = eta.size();
    let langs: Vec<(u32, usize)> = (0u32..1 << n)
        .map(|mask| {
            let f: Vec<bool> = (0..n).map(|t| mask >> t & 1 == 1).collect();
            (mask, rho.eval_nice(&image_language(eta, &f)).unwrap())
        })
        .collect();
    let mut best: Option<u32> = None;
    let mut all = Vec::new();
    for cover in 0u64..1 << langs.len() {
        let members: Vec<&(u32, usize)> = (0..langs.len())
            .filter(|i| cover >> i & 1 == 1)
            .map(|i| &langs[i])
            .collect();
        if !members.iter().any(|(m, _)| m >> s & 1 == 1) {
            continue;
        }
        let vals: Vec<usize> = members.iter().map(|(_, v)| *v).collect();
        all.push(downset_mask(&rho.semiring, &vals));
    }
    let meet = all.iter().fold(u32::MAX, |a, b| a & b);
    if all.contains(&meet) {
        best = Some(meet);
    }
    best.expect("an optimal cover exists")
}
