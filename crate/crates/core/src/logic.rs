//! Preorders comparing pointed words up to two-variable formulas with `k`
//! quantifier rank and `n` alternations, over infix predicates of a
//! morphism `η`.
//!
//! [`ef_leq`] evaluates the inductive characterization with memoization.
//! [`game::duplicator_wins`] is a separate brute-force game search used to
//! cross-check it.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::word::words_up_to;
use crate::lang::Dfa;
use crate::syntactic::MonoidMorphism;

/// Compares `(left.0, left.1) ≼ (right.0, right.1)` at rank `k` and depth `n`.
#[derive(Debug, Clone, Copy)]
pub struct EfQuery<'a> {
    pub eta: &'a MonoidMorphism,
    pub k: usize,
    pub n: usize,
    pub left: (&'a [u8], usize),
    pub right: (&'a [u8], usize),
}

/// A word with all infix images precomputed.
#[derive(Debug, Clone)]
pub struct Pointed {
    word: Vec<u8>,
    // img[i][j] = η(w(i, j)) for i < j
    img: Vec<Vec<usize>>,
}

impl Pointed {
    pub fn new(eta: &MonoidMorphism, w: &[u8]) -> Result<Self> {
        eta.alphabet().check_word(w)?;
        let m = eta.target();
        let n = w.len() + 2;
        let mut img = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            let mut acc = m.unit();
            for j in i + 1..n {
                img[i][j] = acc;
                if j <= w.len() {
                    acc = m.mul(acc, eta.image_of(w[j - 1])?);
                }
            }
        }
        Ok(Pointed { word: w.to_vec(), img })
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    fn last(&self) -> usize {
        self.word.len() + 1
    }

    fn label(&self, i: usize) -> Option<u8> {
        (1..=self.word.len()).contains(&i).then(|| self.word[i - 1])
    }

    /// `η(w(min(i,j), max(i,j)))`.
    fn between(&self, i: usize, j: usize) -> usize {
        if i < j {
            self.img[i][j]
        } else {
            self.img[j][i]
        }
    }
}

/// The three η-equivalence cases: both at the left endpoint, both at the
/// right endpoint, or both labeled with the same letter and matching
/// prefix and suffix images.
fn eta_equivalent(u: &Pointed, i: usize, v: &Pointed, j: usize) -> bool {
    let whole = u.img[0][u.last()] == v.img[0][v.last()];
    if i == 0 || j == 0 {
        return i == 0 && j == 0 && whole;
    }
    if i == u.last() || j == v.last() {
        return i == u.last() && j == v.last() && whole;
    }
    u.label(i) == v.label(j)
        && u.img[0][i] == v.img[0][j]
        && u.img[i][u.last()] == v.img[j][v.last()]
}

struct Leq<'a> {
    u: &'a Pointed,
    v: &'a Pointed,
    // (swapped, i, j, k, n)
    memo: HashMap<(bool, usize, usize, usize, usize), bool>,
}

impl Leq<'_> {
    fn leq(&mut self, swapped: bool, i: usize, j: usize, k: usize, n: usize) -> bool {
        if let Some(&b) = self.memo.get(&(swapped, i, j, k, n)) {
            return b;
        }
        let (x, y) = if swapped { (self.v, self.u) } else { (self.u, self.v) };
        let mut ok = eta_equivalent(x, i, y, j);
        if ok && n >= 2 {
            ok = self.leq(!swapped, j, i, k, n - 1);
        }
        if ok && k >= 1 {
            'moves: for i2 in 0..=x.last() {
                if i2 == i {
                    continue;
                }
                let s = x.between(i, i2);
                let forward = i2 > i;
                let answers: Vec<usize> = (0..=y.last())
                    .filter(|&j2| (j2 > j) == forward && j2 != j && y.between(j, j2) == s)
                    .collect();
                for j2 in answers {
                    if self.leq(swapped, i2, j2, k - 1, n) {
                        continue 'moves;
                    }
                }
                ok = false;
                break;
            }
        }
        self.memo.insert((swapped, i, j, k, n), ok);
        ok
    }
}

fn check_position(w: &[u8], i: usize) -> Result<()> {
    if i > w.len() + 1 {
        return Err(Error::Invalid(format!("position {i} outside 0..={}", w.len() + 1)));
    }
    Ok(())
}

/// `(w, i) ≼_{η,k,n} (w', i')`. `n` must be at least 1.
pub fn ef_leq(q: &EfQuery) -> Result<bool> {
    if q.n == 0 {
        return Err(Error::Invalid("alternation depth must be at least 1".into()));
    }
    check_position(q.left.0, q.left.1)?;
    check_position(q.right.0, q.right.1)?;
    let u = Pointed::new(q.eta, q.left.0)?;
    let v = Pointed::new(q.eta, q.right.0)?;
    Ok(pointed_leq(&u, q.left.1, &v, q.right.1, q.k, q.n))
}

/// Same as [`ef_leq`] on precomputed words.
pub fn pointed_leq(u: &Pointed, i: usize, v: &Pointed, j: usize, k: usize, n: usize) -> bool {
    Leq { u, v, memo: HashMap::new() }.leq(false, i, j, k, n)
}

/// `w ≅_{η,k,n} w'` on the left endpoints.
pub fn ef_equiv(eta: &MonoidMorphism, k: usize, n: usize, w: &[u8], w2: &[u8]) -> Result<bool> {
    let u = Pointed::new(eta, w)?;
    let v = Pointed::new(eta, w2)?;
    Ok(pointed_equiv(&u, &v, k, n))
}

fn pointed_equiv(u: &Pointed, v: &Pointed, k: usize, n: usize) -> bool {
    pointed_leq(u, 0, v, 0, k, n) && pointed_leq(v, 0, u, 0, k, n)
}

pub mod game {
    //! Unmemoized game search. Spoiler plays on the side currently holding
    //! the "from" word; switching sides spends one alternation. Duplicator
    //! must answer in the same direction with an infix of equal image and
    //! keep the pebbles η-equivalent.

    use crate::syntactic::MonoidMorphism;

    fn image(eta: &MonoidMorphism, w: &[u8], i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        eta.eval(&w[a..b - 1]).expect("letters checked by caller")
    }

    fn same_kind(eta: &MonoidMorphism, w: &[u8], i: usize, v: &[u8], j: usize) -> bool {
        let ends = |x: &[u8], p: usize| {
            if p == 0 {
                0
            } else if p == x.len() + 1 {
                2
            } else {
                1
            }
        };
        if ends(w, i) != ends(v, j) {
            return false;
        }
        if eta.eval(w).unwrap() != eta.eval(v).unwrap() {
            return false;
        }
        if ends(w, i) != 1 {
            return true;
        }
        w[i - 1] == v[j - 1]
            && eta.eval(&w[..i - 1]).unwrap() == eta.eval(&v[..j - 1]).unwrap()
            && eta.eval(&w[i..]).unwrap() == eta.eval(&v[j..]).unwrap()
    }

    /// Duplicator survives `k` rounds with `n` blocks, Spoiler starting on `w`.
    pub fn duplicator_wins(
        eta: &MonoidMorphism,
        w: &[u8],
        i: usize,
        v: &[u8],
        j: usize,
        k: usize,
        n: usize,
    ) -> bool {
        if !same_kind(eta, w, i, v, j) {
            return false;
        }
        if n > 1 && !duplicator_wins(eta, v, j, w, i, k, n - 1) {
            return false;
        }
        if k == 0 {
            return true;
        }
        (0..w.len() + 2).filter(|&p| p != i).all(|p| {
            let s = image(eta, w, i, p);
            (0..v.len() + 2).any(|q| {
                q != j
                    && (q > j) == (p > i)
                    && image(eta, v, j, q) == s
                    && duplicator_wins(eta, w, p, v, q, k - 1, n)
            })
        })
    }
}

/// Outcome of [`ef_class_saturation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub k: usize,
    pub n: usize,
    pub length_bound: usize,
    pub words: usize,
    pub classes: usize,
    /// Two equivalent words on different sides of `L`.
    pub refutation: Option<(String, String)>,
}

impl SaturationReport {
    pub fn saturated(&self) -> bool {
        self.refutation.is_none()
    }
}

/// Scans all words up to `length_bound` for a pair `w ≅_{η,k,n} w'` with
/// `w ∈ L` and `w' ∉ L`.
pub fn ef_class_saturation(
    eta: &MonoidMorphism,
    k: usize,
    n: usize,
    l: &Dfa,
    length_bound: usize,
) -> Result<SaturationReport> {
    if n == 0 {
        return Err(Error::Invalid("alternation depth must be at least 1".into()));
    }
    eta.alphabet().same_as(l.alphabet())?;
    let words = words_up_to(eta.alphabet(), length_bound);
    let mut reps: Vec<(Pointed, bool)> = Vec::new();
    let mut refutation = None;
    for w in &words {
        let p = Pointed::new(eta, w)?;
        let inside = l.accepts(w);
        match reps.iter().find(|(r, _)| pointed_equiv(r, &p, k, n)) {
            Some((r, rin)) => {
                if *rin != inside && refutation.is_none() {
                    refutation = Some((show(r.word()), show(w)));
                }
            }
            None => reps.push((p, inside)),
        }
    }
    Ok(SaturationReport {
        k,
        n,
        length_bound,
        words: words.len(),
        classes: reps.len(),
        refutation,
    })
}

fn show(w: &[u8]) -> String {
    crate::lang::word::show(w)
}

/// Smallest `k ≤ k_max` at which no refutation is found, with the report.
pub fn find_saturating_rank(
    eta: &MonoidMorphism,
    n: usize,
    l: &Dfa,
    k_max: usize,
    length_bound: usize,
) -> Result<(Option<usize>, SaturationReport)> {
    let mut last = None;
    for k in 0..=k_max {
        let rep = ef_class_saturation(eta, k, n, l, length_bound)?;
        if rep.saturated() {
            return Ok((Some(k), rep));
        }
        last = Some(rep);
    }
    Ok((None, last.expect("k ranges over at least one value")))
}
