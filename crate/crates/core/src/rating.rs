//! Idempotent semirings, nice multiplicative rating maps and pointed
//! imprints.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::lang::{Alphabet, Dfa};
use crate::monoid::FiniteMonoid;
use crate::prevariety::{canonical_cayley, canonical_morphism, Base};
use crate::syntactic::{syntactic_morphism, MonoidMorphism};

/// Finite idempotent semiring. `leq` is the canonical order
/// `r ≤ s ⟺ r + s = s`.
pub trait Semiring {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        &self.add(a, b) == b
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// The idempotent power of `a`.
    fn omega(&self, a: &Self::Elem) -> Self::Elem {
        let mut p = a.clone();
        loop {
            let sq = self.mul(&p, &p);
            if sq == p {
                return p;
            }
            p = self.mul(&p, a);
        }
    }

    fn is_idempotent(&self, a: &Self::Elem) -> bool {
        &self.mul(a, a) == a
    }
}

/// Semiring given by its two operation tables over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSemiring {
    n: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

impl TableSemiring {
    /// Checks every semiring law exhaustively.
    pub fn new(n: usize, add: Vec<usize>, mul: Vec<usize>, zero: usize, one: usize) -> Result<TableSemiring> {
        let bad = |m: String| Err(Error::Semiring(m));
        if n == 0 || add.len() != n * n || mul.len() != n * n || zero >= n || one >= n {
            return bad("table sizes do not match".into());
        }
        if add.iter().chain(&mul).any(|&x| x >= n) {
            return bad("table entry out of range".into());
        }
        let s = TableSemiring { n, add, mul, zero, one };
        let (p, m) = (|a, b| s.add[a * n + b], |a, b| s.mul[a * n + b]);
        for a in 0..n {
            if p(a, a) != a {
                return bad(format!("{a} + {a} ≠ {a}"));
            }
            if p(a, zero) != a || m(a, one) != a || m(one, a) != a {
                return bad(format!("neutral elements fail at {a}"));
            }
            if m(a, zero) != zero || m(zero, a) != zero {
                return bad(format!("zero does not annihilate {a}"));
            }
            for b in 0..n {
                if p(a, b) != p(b, a) {
                    return bad(format!("addition not commutative at ({a},{b})"));
                }
                for c in 0..n {
                    if p(p(a, b), c) != p(a, p(b, c)) {
                        return bad(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return bad(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if m(a, p(b, c)) != p(m(a, b), m(a, c)) || m(p(b, c), a) != p(m(b, a), m(c, a)) {
                        return bad(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(s)
    }

    /// `(2^M, ∪, ·)` with subsets encoded as bit masks.
    pub fn powerset(m: &FiniteMonoid) -> Result<TableSemiring> {
        let k = m.size();
        if k > 6 {
            return Err(Error::CapExceeded { size: k, cap: 6 });
        }
        let n = 1usize << k;
        let lift = |x: usize, y: usize| {
            let mut out = 0usize;
            for i in (0..k).filter(|i| x >> i & 1 == 1) {
                for j in (0..k).filter(|j| y >> j & 1 == 1) {
                    out |= 1 << m.mul(i, j);
                }
            }
            out
        };
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                add.push(x | y);
                mul.push(lift(x, y));
            }
        }
        TableSemiring::new(n, add, mul, 0, 1 << m.unit())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }
}

impl Semiring for TableSemiring {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }

    fn one(&self) -> usize {
        self.one
    }

    fn add(&self, a: &usize, b: &usize) -> usize {
        self.add[a * self.n + b]
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[a * self.n + b]
    }
}

/// `2^{M_0} × … × 2^{M_n}` with componentwise union and lifted product.
/// Elements are flat bit vectors, one block of words per component.
#[derive(Debug, Clone)]
pub struct PowerProduct {
    comps: Vec<FiniteMonoid>,
    offsets: Vec<usize>,
    words: usize,
}

pub type SetTuple = Vec<u64>;

impl PowerProduct {
    pub fn new(comps: Vec<FiniteMonoid>) -> PowerProduct {
        let mut offsets = Vec::with_capacity(comps.len());
        let mut words = 0;
        for m in &comps {
            offsets.push(words);
            words += m.size().div_ceil(64);
        }
        PowerProduct { comps, offsets, words }
    }

    pub fn components(&self) -> &[FiniteMonoid] {
        &self.comps
    }

    pub fn from_sets(&self, sets: &[Vec<usize>]) -> SetTuple {
        let mut out = vec![0u64; self.words];
        for (c, set) in sets.iter().enumerate() {
            for &x in set {
                let i = self.offsets[c] * 64 + x;
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub fn singleton(&self, elems: &[usize]) -> SetTuple {
        let sets: Vec<Vec<usize>> = elems.iter().map(|&x| vec![x]).collect();
        self.from_sets(&sets)
    }

    pub fn component(&self, r: &SetTuple, c: usize) -> Vec<usize> {
        let base = self.offsets[c] * 64;
        (0..self.comps[c].size())
            .filter(|&x| {
                let i = base + x;
                r[i / 64] >> (i % 64) & 1 == 1
            })
            .collect()
    }

    pub fn meets(&self, r: &SetTuple, c: usize, f: &[bool]) -> bool {
        self.component(r, c).into_iter().any(|x| f[x])
    }

    /// Text form `({…}, {…})` using the element names of each component.
    pub fn show(&self, r: &SetTuple) -> String {
        let parts: Vec<String> = (0..self.comps.len())
            .map(|c| {
                let names: Vec<String> = self
                    .component(r, c)
                    .into_iter()
                    .map(|x| self.comps[c].name(x))
                    .collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join(", "))
        }
    }
}

impl Semiring for PowerProduct {
    type Elem = SetTuple;

    fn zero(&self) -> SetTuple {
        vec![0; self.words]
    }

    fn one(&self) -> SetTuple {
        let units: Vec<usize> = self.comps.iter().map(|m| m.unit()).collect();
        self.singleton(&units)
    }

    fn add(&self, a: &SetTuple, b: &SetTuple) -> SetTuple {
        a.iter().zip(b).map(|(x, y)| x | y).collect()
    }

    fn mul(&self, a: &SetTuple, b: &SetTuple) -> SetTuple {
        let mut out = vec![0u64; self.words];
        for (c, m) in self.comps.iter().enumerate() {
            let base = self.offsets[c] * 64;
            let xs = self.component(a, c);
            let ys = self.component(b, c);
            for &x in &xs {
                for &y in &ys {
                    let i = base + m.mul(x, y);
                    out[i / 64] |= 1 << (i % 64);
                }
            }
        }
        out
    }

    fn leq(&self, a: &SetTuple, b: &SetTuple) -> bool {
        a.iter().zip(b).all(|(x, y)| x & !y == 0)
    }
}

/// Nice multiplicative rating map, given by the images of the letters.
#[derive(Debug, Clone)]
pub struct RatingMap<S: Semiring> {
    pub semiring: S,
    alphabet: Alphabet,
    letters: Vec<S::Elem>,
}

impl<S: Semiring> RatingMap<S> {
    pub fn new(semiring: S, alphabet: Alphabet, letters: Vec<S::Elem>) -> Result<Self> {
        if letters.len() != alphabet.len() {
            return Err(Error::Invalid("one rating per letter is required".into()));
        }
        Ok(RatingMap {
            semiring,
            alphabet,
            letters,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letter(&self, a: usize) -> &S::Elem {
        &self.letters[a]
    }

    pub fn eval_word(&self, w: &[u8]) -> Result<S::Elem> {
        self.alphabet.check_word(w)?;
        let mut r = self.semiring.one();
        for &c in w {
            let a = self.alphabet.index(c).expect("checked");
            r = self.semiring.mul(&r, &self.letters[a]);
        }
        Ok(r)
    }

    /// `ρ(K)`: the sum of `ρ*(w)` over `w ∈ K`, accumulated over reachable
    /// (state, value) pairs.
    pub fn eval_nice(&self, k: &Dfa) -> Result<S::Elem> {
        self.alphabet.same_as(k.alphabet())?;
        let start = (k.init(), self.semiring.one());
        let mut seen: HashSet<(usize, S::Elem)> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        let mut total = self.semiring.zero();
        while let Some((q, v)) = queue.pop_front() {
            if k.is_accepting(q) {
                total = self.semiring.add(&total, &v);
            }
            for a in 0..self.alphabet.len() {
                let next = (k.step(q, a), self.semiring.mul(&v, &self.letters[a]));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(total)
    }

    /// The values `ρ*(w)`, with a shortest witness word each.
    pub fn realized(&self) -> Vec<(S::Elem, Vec<u8>)> {
        let one = self.semiring.one();
        let mut words: HashMap<S::Elem, Vec<u8>> = HashMap::new();
        let mut order = vec![one.clone()];
        words.insert(one, Vec::new());
        let mut i = 0;
        while i < order.len() {
            let v = order[i].clone();
            for a in 0..self.alphabet.len() {
                let next = self.semiring.mul(&v, &self.letters[a]);
                if !words.contains_key(&next) {
                    let mut w = words[&v].clone();
                    w.push(self.alphabet.letters()[a]);
                    words.insert(next.clone(), w);
                    order.push(next);
                }
            }
            i += 1;
        }
        order
            .into_iter()
            .map(|v| {
                let w = words.remove(&v).expect("recorded");
                (v, w)
            })
            .collect()
    }

    /// Minimal DFA of `ρ*⁻¹(q)`.
    pub fn preimage(&self, q: &S::Elem) -> Dfa {
        let vals: Vec<S::Elem> = self.realized().into_iter().map(|(v, _)| v).collect();
        let index: HashMap<&S::Elem, usize> = vals.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(vals.len() * k);
        for v in &vals {
            for a in 0..k {
                delta.push(index[&self.semiring.mul(v, &self.letters[a])]);
            }
        }
        let accept = vals.iter().map(|v| v == q).collect();
        Dfa::from_parts(self.alphabet.clone(), vals.len(), delta, 0, accept)
            .expect("value automaton is total")
            .minimize()
    }
}

/// `ρ_α`: letters go to singletons `{α(a)}` in `2^M`.
pub fn rho_of_morphism(alpha: &MonoidMorphism) -> RatingMap<PowerProduct> {
    let pp = PowerProduct::new(vec![alpha.named_target()]);
    let letters = alpha.images().iter().map(|&s| pp.singleton(&[s])).collect();
    RatingMap::new(pp, alpha.alphabet().clone(), letters).expect("one image per letter")
}

/// Rating map and goal set of a covering instance `(L0, {L1, …, Ln})`.
#[derive(Debug, Clone)]
pub struct CoveringInput {
    pub rating: RatingMap<PowerProduct>,
    /// Accepting set of each coordinate, `L0` first.
    pub accepting: Vec<Vec<bool>>,
}

impl CoveringInput {
    /// Whether `r` meets the accepting set of every coordinate.
    pub fn is_goal(&self, r: &SetTuple) -> bool {
        let pp = &self.rating.semiring;
        self.accepting
            .iter()
            .enumerate()
            .all(|(c, f)| pp.meets(r, c, f))
    }

    pub fn target(&self) -> Dfa {
        let pp = &self.rating.semiring;
        let alpha = MonoidMorphism::new(
            self.rating.alphabet.clone(),
            pp.comps[0].clone(),
            (0..self.rating.alphabet.len())
                .map(|a| pp.component(&self.rating.letters[a], 0)[0])
                .collect(),
        )
        .expect("syntactic images generate");
        crate::syntactic::image_language(&alpha, &self.accepting[0])
    }
}

pub fn covering_input(l0: &Dfa, ls: &[Dfa]) -> Result<CoveringInput> {
    for l in ls {
        l0.alphabet().same_as(l.alphabet())?;
    }
    let syns: Vec<_> = std::iter::once(l0).chain(ls).map(syntactic_morphism).collect();
    let pp = PowerProduct::new(syns.iter().map(|s| s.morphism.named_target()).collect());
    let letters = (0..l0.alphabet().len())
        .map(|a| {
            let elems: Vec<usize> = syns.iter().map(|s| s.morphism.letter_image(a)).collect();
            pp.singleton(&elems)
        })
        .collect();
    Ok(CoveringInput {
        rating: RatingMap::new(pp, l0.alphabet().clone(), letters)?,
        accepting: syns.into_iter().map(|s| s.accept).collect(),
    })
}

/// Downward closed subset of `N × R`, stored as one antichain of maximal
/// values per element of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Imprint<E> {
    gens: BTreeMap<usize, Vec<E>>,
}

impl<E: Clone + Eq + Ord + Hash + Debug> Default for Imprint<E> {
    fn default() -> Self {
        Imprint { gens: BTreeMap::new() }
    }
}

impl<E: Clone + Eq + Ord + Hash + Debug> Imprint<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains<S: Semiring<Elem = E>>(&self, sr: &S, s: usize, r: &E) -> bool {
        self.gens
            .get(&s)
            .is_some_and(|g| g.iter().any(|x| sr.leq(r, x)))
    }

    /// Adds `(s, r)`; false when it was already below a generator.
    pub fn insert<S: Semiring<Elem = E>>(&mut self, sr: &S, s: usize, r: E) -> bool {
        let g = self.gens.entry(s).or_default();
        if g.iter().any(|x| sr.leq(&r, x)) {
            return false;
        }
        g.retain(|x| !sr.leq(x, &r));
        g.push(r);
        true
    }

    pub fn generators(&self) -> impl Iterator<Item = (usize, &E)> {
        self.gens
            .iter()
            .flat_map(|(&s, g)| g.iter().map(move |r| (s, r)))
    }

    pub fn at(&self, s: usize) -> &[E] {
        self.gens.get(&s).map(|g| g.as_slice()).unwrap_or(&[])
    }

    pub fn num_generators(&self) -> usize {
        self.gens.values().map(|g| g.len()).sum()
    }

    pub fn is_subset<S: Semiring<Elem = E>>(&self, sr: &S, other: &Imprint<E>) -> bool {
        self.generators().all(|(s, r)| other.contains(sr, s, r))
    }

    pub fn same<S: Semiring<Elem = E>>(&self, sr: &S, other: &Imprint<E>) -> bool {
        self.is_subset(sr, other) && other.is_subset(sr, self)
    }

    /// Maximal values of `{r | (s, r) ∈ self for some s}`.
    pub fn project<S: Semiring<Elem = E>>(&self, sr: &S) -> Vec<E> {
        let mut out = Imprint::new();
        for (_, r) in self.generators() {
            out.insert(sr, 0, r.clone());
        }
        let mut v = out.at(0).to_vec();
        v.sort();
        v
    }

    /// Sorted dump lines `(<N element>, <value>)`.
    pub fn dump(&self, name: impl Fn(usize) -> String, show: impl Fn(&E) -> String) -> String {
        let mut lines: Vec<String> = self
            .generators()
            .map(|(s, r)| format!("({}, {})", name(s), show(r)))
            .collect();
        lines.sort();
        lines.join("\n")
    }
}

/// Canonical morphism of a finite base, refused above `cap` elements.
pub fn base_morphism(base: Base, alphabet: &Alphabet, cap: usize) -> Result<MonoidMorphism> {
    if !base.is_finite() {
        return Err(Error::Unsupported(format!("{} is not a finite class", base.expr())));
    }
    let size = canonical_cayley(base, alphabet)?.size();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    canonical_morphism(base, alphabet)
}

/// The pairs `(η(w), ρ*(w))`.
pub fn trivial_pairs<S: Semiring>(eta: &MonoidMorphism, rho: &RatingMap<S>) -> Result<Vec<(usize, S::Elem)>> {
    eta.alphabet().same_as(rho.alphabet())?;
    let m = eta.target();
    let start = (m.unit(), rho.semiring.one());
    let mut seen: HashSet<(usize, S::Elem)> = HashSet::new();
    let mut order = vec![start.clone()];
    seen.insert(start);
    let mut i = 0;
    while i < order.len() {
        let (s, v) = order[i].clone();
        for a in 0..eta.alphabet().len() {
            let next = (m.mul(s, eta.letter_image(a)), rho.semiring.mul(&v, rho.letter(a)));
            if seen.insert(next.clone()) {
                order.push(next);
            }
        }
        i += 1;
    }
    Ok(order)
}

/// `↓{(s, ρ(η⁻¹(s)))}` for the canonical morphism `η` of a finite base.
/// Any base language meeting `η⁻¹(s)` contains it, so `{η⁻¹(s)}` is an
/// optimal cover of itself.
pub fn base_imprint_finite<S: Semiring>(eta: &MonoidMorphism, rho: &RatingMap<S>) -> Result<Imprint<S::Elem>> {
    let mut sums: BTreeMap<usize, S::Elem> = BTreeMap::new();
    for (s, v) in trivial_pairs(eta, rho)? {
        let e = sums.entry(s).or_insert_with(|| rho.semiring.zero());
        *e = rho.semiring.add(e, &v);
    }
    let mut out = Imprint::new();
    for (s, r) in sums {
        out.insert(&rho.semiring, s, r);
    }
    Ok(out)
}

/// Optimal imprint on `l` recovered from a coverability oracle:
/// `↓{Σ Q | (L, {ρ*⁻¹(q) | q ∈ Q}) is not coverable}`. `Q` ranges over
/// sets of realized values only, since an empty `ρ*⁻¹(q)` makes any pair
/// coverable.
pub fn imprint_from_covering<S, F>(oracle: F, l: &Dfa, rho: &RatingMap<S>) -> Result<Vec<S::Elem>>
where
    S: Semiring,
    F: Fn(&Dfa, &[Dfa]) -> Result<bool>,
{
    let vals: Vec<S::Elem> = rho.realized().into_iter().map(|(v, _)| v).collect();
    if vals.len() > 16 {
        return Err(Error::CapExceeded { size: vals.len(), cap: 16 });
    }
    let pre: Vec<Dfa> = vals.iter().map(|q| rho.preimage(q)).collect();
    let mut out = Imprint::new();
    for mask in 0u32..(1 << vals.len()) {
        let idx: Vec<usize> = (0..vals.len()).filter(|i| mask >> i & 1 == 1).collect();
        let langs: Vec<Dfa> = idx.iter().map(|&i| pre[i].clone()).collect();
        if !oracle(l, &langs)? {
            let r = rho.semiring.sum(idx.iter().map(|&i| &vals[i]));
            out.insert(&rho.semiring, 0, r);
        }
    }
    Ok(out.project(&rho.semiring))
}
