//! Least fixpoints computing pointed optimal imprints for towers of
//! LPOL/RPOL/MPOL over a finite base, and the covering decision built on
//! them.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lang::word::words_up_to;
use crate::lang::Dfa;
use crate::monoid::GreenData;
use crate::prevariety::{Base, ClassExpr, PolOp};
use crate::rating::{
    base_imprint_finite, base_morphism, covering_input, trivial_pairs, Imprint, RatingMap, Semiring,
};
use crate::syntactic::{image_language, MonoidMorphism};
use crate::words::{class_as_product, class_key, classify_product, MarkedProduct, Mode, Snapshot};

/// Largest canonical base monoid the engines accept.
pub const BASE_CAP: usize = 1024;

/// How a generator entered a saturated set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Trivial,
    Product,
    LeftRule,
    RightRule,
    Chain,
}

/// A saturated subset of `N × R` with the origin of each generator.
#[derive(Debug, Clone)]
pub struct Saturation<E> {
    pub imprint: Imprint<E>,
    pub origin: HashMap<(usize, E), Origin>,
}

struct Saturator<'a, S: Semiring> {
    eta: &'a MonoidMorphism,
    green: &'a GreenData,
    sr: &'a S,
    set: Imprint<S::Elem>,
    origin: HashMap<(usize, S::Elem), Origin>,
    work: VecDeque<(usize, S::Elem)>,
}

impl<'a, S: Semiring> Saturator<'a, S> {
    fn new(eta: &'a MonoidMorphism, green: &'a GreenData, sr: &'a S) -> Self {
        Saturator {
            eta,
            green,
            sr,
            set: Imprint::new(),
            origin: HashMap::new(),
            work: VecDeque::new(),
        }
    }

    fn add(&mut self, s: usize, r: S::Elem, why: Origin) {
        if self.set.insert(self.sr, s, r.clone()) {
            self.origin.insert((s, r.clone()), why);
            self.work.push_back((s, r));
        }
    }

    fn present(&self, s: usize, r: &S::Elem) -> bool {
        self.set.at(s).contains(r)
    }

    /// Closes under products, and under the one-sided rule over `p` when
    /// given.
    fn close(&mut self, rule: Option<(Mode, &Imprint<S::Elem>)>) {
        let m = self.eta.target();
        while let Some((s, r)) = self.work.pop_front() {
            if !self.present(s, &r) {
                continue;
            }
            let gens: Vec<(usize, S::Elem)> = self.set.generators().map(|(t, q)| (t, q.clone())).collect();
            for (t, q) in gens {
                self.add(m.mul(s, t), self.sr.mul(&r, &q), Origin::Product);
                self.add(m.mul(t, s), self.sr.mul(&q, &r), Origin::Product);
            }
            let Some((mode, p)) = rule else { continue };
            if !m.is_idempotent(s) {
                continue;
            }
            let (e, f) = (s, self.sr.omega(&r));
            let ps: Vec<(usize, S::Elem)> = p.generators().map(|(t, q)| (t, q.clone())).collect();
            for (t, q) in ps {
                match mode {
                    Mode::Left if self.green.r_leq(e, t) => {
                        self.add(m.mul(e, t), self.sr.mul(&f, &q), Origin::LeftRule)
                    }
                    Mode::Right if self.green.l_leq(e, t) => {
                        self.add(m.mul(t, e), self.sr.mul(&q, &f), Origin::RightRule)
                    }
                    _ => {}
                }
            }
        }
    }

    fn finish(self) -> Saturation<S::Elem> {
        let origin = self
            .origin
            .into_iter()
            .filter(|((s, r), _)| self.set.at(*s).contains(r))
            .collect();
        Saturation {
            imprint: self.set,
            origin,
        }
    }
}

fn seed<S: Semiring>(sat: &mut Saturator<'_, S>, rho: &RatingMap<S>) -> Result<()> {
    for (s, r) in trivial_pairs(sat.eta, rho)? {
        sat.add(s, r, Origin::Trivial);
    }
    Ok(())
}

/// Least set containing the trivial elements, closed under downset,
/// products and the left rule (`Mode::Left`) or the right rule
/// (`Mode::Right`) over `p`.
pub fn saturate_lrpol<S: Semiring>(
    mode: Mode,
    p: &Imprint<S::Elem>,
    eta: &MonoidMorphism,
    rho: &RatingMap<S>,
) -> Result<Saturation<S::Elem>> {
    if mode == Mode::Mixed {
        return Err(Error::Invalid("saturate_lrpol takes the left or right mode".into()));
    }
    let green = eta.target().green();
    let mut sat = Saturator::new(eta, &green, &rho.semiring);
    seed(&mut sat, rho)?;
    sat.close(Some((mode, p)));
    Ok(sat.finish())
}

/// A block `(s, r)` with one decomposition
/// `s = s₁e₁s₃e₂s₂`, `r = r₁f₁r₃f₂r₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<E> {
    pub s: usize,
    pub r: E,
    pub left: (usize, E),
    pub left_idem: (usize, E),
    pub middle: (usize, E),
    pub right_idem: (usize, E),
    pub right: (usize, E),
}

/// Idempotent pairs `(e, f^ω)` for the generators `(e, f)` with `e`
/// idempotent. Every idempotent pair of the downset lies below one.
fn idempotent_gens<S: Semiring>(p: &Imprint<S::Elem>, eta: &MonoidMorphism, sr: &S) -> Vec<(usize, S::Elem)> {
    p.generators()
        .filter(|(e, _)| eta.target().is_idempotent(*e))
        .map(|(e, f)| (e, sr.omega(f)))
        .collect()
}

/// All `(P₁, P, P₂)`-blocks, as maximal representatives with a
/// decomposition each.
pub fn compute_blocks<S: Semiring>(
    p1: &Imprint<S::Elem>,
    p: &Imprint<S::Elem>,
    p2: &Imprint<S::Elem>,
    eta: &MonoidMorphism,
    sr: &S,
) -> Vec<Block<S::Elem>> {
    let m = eta.target();
    let green = m.green();
    let jclass: Vec<usize> = {
        let mut c = vec![0; m.size()];
        for (i, cls) in green.j_classes().iter().enumerate() {
            for &x in cls {
                c[x] = i;
            }
        }
        c
    };
    type Half<E> = ((usize, E), (usize, E));
    // left halves s₁e₁ and right halves e₂s₂, grouped by the J-class of e
    let mut lefts: BTreeMap<usize, (Imprint<S::Elem>, HashMap<(usize, S::Elem), Half<S::Elem>>)> = BTreeMap::new();
    for (e, f) in idempotent_gens(p1, eta, sr) {
        for (s1, r1) in p1.generators() {
            let (x, y) = (m.mul(s1, e), sr.mul(r1, &f));
            let slot = lefts.entry(jclass[e]).or_default();
            if slot.0.insert(sr, x, y.clone()) {
                slot.1.insert((x, y), ((s1, r1.clone()), (e, f.clone())));
            }
        }
    }
    let mut rights: BTreeMap<usize, (Imprint<S::Elem>, HashMap<(usize, S::Elem), Half<S::Elem>>)> = BTreeMap::new();
    for (e, f) in idempotent_gens(p2, eta, sr) {
        for (s2, r2) in p2.generators() {
            let (x, y) = (m.mul(e, s2), sr.mul(&f, r2));
            let slot = rights.entry(jclass[e]).or_default();
            if slot.0.insert(sr, x, y.clone()) {
                slot.1.insert((x, y), ((s2, r2.clone()), (e, f.clone())));
            }
        }
    }
    let mut found: Imprint<S::Elem> = Imprint::new();
    let mut blocks: HashMap<(usize, S::Elem), Block<S::Elem>> = HashMap::new();
    for (j, (li, ld)) in &lefts {
        let Some((ri, rd)) = rights.get(j) else { continue };
        for (x, xr) in li.generators() {
            for (t, tr) in p.generators() {
                let xt = m.mul(x, t);
                let xtr = sr.mul(xr, tr);
                for (y, yr) in ri.generators() {
                    let s = m.mul(xt, y);
                    if jclass[s] != *j {
                        continue;
                    }
                    let r = sr.mul(&xtr, yr);
                    if found.insert(sr, s, r.clone()) {
                        let (left, left_idem) = ld[&(x, xr.clone())].clone();
                        let (right, right_idem) = rd[&(y, yr.clone())].clone();
                        blocks.insert(
                            (s, r.clone()),
                            Block {
                                s,
                                r,
                                left,
                                left_idem,
                                middle: (t, tr.clone()),
                                right_idem,
                                right,
                            },
                        );
                    }
                }
            }
        }
    }
    let mut out: Vec<Block<S::Elem>> = found
        .generators()
        .map(|(s, r)| blocks[&(s, r.clone())].clone())
        .collect();
    out.sort_by(|a, b| (a.s, &a.r).cmp(&(b.s, &b.r)));
    out
}

/// Values `s₀s'₁s₁⋯s'ₙsₙ` of the chains of blocks `sᵢ` joined by elements
/// `s'ᵢ` of `P` with `sᵢ₋₁s'ᵢ J sᵢ₋₁` and `s'ᵢsᵢ J sᵢ`. States keep the
/// accumulated pair and the last block's monoid element; they form a
/// finite graph, so the search replaces the unbounded chain length.
pub fn chain_values<S: Semiring>(
    blocks: &[Block<S::Elem>],
    p: &Imprint<S::Elem>,
    eta: &MonoidMorphism,
    sr: &S,
) -> Imprint<S::Elem> {
    let m = eta.target();
    let green = m.green();
    let mids: Vec<(usize, S::Elem)> = p.generators().map(|(s, r)| (s, r.clone())).collect();
    // accumulated values per (acc, last)
    let mut states: HashMap<(usize, usize), Imprint<S::Elem>> = HashMap::new();
    let mut work: VecDeque<(usize, usize, S::Elem)> = VecDeque::new();
    let push = |states: &mut HashMap<(usize, usize), Imprint<S::Elem>>,
                    work: &mut VecDeque<(usize, usize, S::Elem)>,
                    acc: usize,
                    last: usize,
                    r: S::Elem| {
        if states.entry((acc, last)).or_default().insert(sr, 0, r.clone()) {
            work.push_back((acc, last, r));
        }
    };
    for b in blocks {
        push(&mut states, &mut work, b.s, b.s, b.r.clone());
    }
    let mut links: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    while let Some((acc, last, r)) = work.pop_front() {
        if !states[&(acc, last)].at(0).contains(&r) {
            continue;
        }
        let ls = links.entry(last).or_insert_with(|| {
            let mut v = Vec::new();
            for (i, (t, _)) in mids.iter().enumerate() {
                if !green.j_equiv(m.mul(last, *t), last) {
                    continue;
                }
                for (j, b) in blocks.iter().enumerate() {
                    if green.j_equiv(m.mul(*t, b.s), b.s) {
                        v.push((i, j));
                    }
                }
            }
            v
        });
        let ls = ls.clone();
        for (i, j) in ls {
            let (t, tr) = &mids[i];
            let b = &blocks[j];
            let acc2 = m.mul_all([acc, *t, b.s]);
            let r2 = sr.mul(&sr.mul(&r, tr), &b.r);
            push(&mut states, &mut work, acc2, b.s, r2);
        }
    }
    let mut out = Imprint::new();
    for ((acc, _), vals) in states {
        for (_, r) in vals.generators() {
            out.insert(sr, acc, r.clone());
        }
    }
    out
}

/// Least set containing the trivial elements and every chain value,
/// closed under downset and products.
pub fn saturate_mpol<S: Semiring>(
    p1: &Imprint<S::Elem>,
    p: &Imprint<S::Elem>,
    p2: &Imprint<S::Elem>,
    eta: &MonoidMorphism,
    rho: &RatingMap<S>,
) -> Result<Saturation<S::Elem>> {
    let sr = &rho.semiring;
    let blocks = compute_blocks(p1, p, p2, eta, sr);
    let chains = chain_values(&blocks, p, eta, sr);
    let green = eta.target().green();
    let mut sat = Saturator::new(eta, &green, sr);
    seed(&mut sat, rho)?;
    for (s, r) in chains.generators() {
        sat.add(s, r.clone(), Origin::Chain);
    }
    sat.close(None);
    Ok(sat.finish())
}

/// A class as a finite base with operator layers, innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub base: Base,
    pub ops: Vec<PolOp>,
}

impl Tower {
    pub fn of(expr: &ClassExpr) -> Result<Tower> {
        let mut ops = Vec::new();
        let mut cur = expr.expand()?;
        loop {
            if let Some(base) = cur.as_base() {
                ops.reverse();
                return Ok(Tower { base, ops });
            }
            cur = match cur {
                ClassExpr::Lpol(e) => {
                    ops.push(PolOp::L);
                    *e
                }
                ClassExpr::Rpol(e) => {
                    ops.push(PolOp::R);
                    *e
                }
                ClassExpr::Mpol(e) => {
                    ops.push(PolOp::M);
                    *e
                }
                other => {
                    return Err(Error::Unsupported(format!(
                        "covering is only available for LPOL/RPOL/MPOL towers, not {other}"
                    )))
                }
            };
        }
    }
}

/// Pointed imprints of every level of a tower, base first.
pub fn tower_imprints<S: Semiring>(
    ops: &[PolOp],
    eta: &MonoidMorphism,
    rho: &RatingMap<S>,
) -> Result<Vec<Imprint<S::Elem>>> {
    let mut levels = vec![base_imprint_finite(eta, rho)?];
    for op in ops {
        let p = levels.last().expect("base level");
        let next = match op {
            PolOp::L => saturate_lrpol(Mode::Left, p, eta, rho)?.imprint,
            PolOp::R => saturate_lrpol(Mode::Right, p, eta, rho)?.imprint,
            PolOp::M => {
                let p1 = saturate_lrpol(Mode::Left, p, eta, rho)?.imprint;
                let p2 = saturate_lrpol(Mode::Right, p, eta, rho)?.imprint;
                saturate_mpol(&p1, p, &p2, eta, rho)?.imprint
            }
            PolOp::U => return Err(Error::Unsupported("UPOL layers".into())),
        };
        levels.push(next);
    }
    Ok(levels)
}

/// Pointed optimal imprint of `expr` at the canonical morphism of its
/// (finite) base. PT must be replaced by a PTK level beforehand.
pub fn imprint_for_class<S: Semiring>(expr: &ClassExpr, rho: &RatingMap<S>) -> Result<(MonoidMorphism, Imprint<S::Elem>)> {
    let tower = Tower::of(expr)?;
    if tower.base == Base::Pt {
        return Err(Error::Unsupported("exact PT imprints; use a PTK approximation".into()));
    }
    let eta = base_morphism(tower.base, rho.alphabet(), BASE_CAP)?;
    let mut levels = tower_imprints(&tower.ops, &eta, rho)?;
    Ok((eta, levels.pop().expect("nonempty")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverVerdict {
    Coverable,
    NotCoverable,
    /// Not coverable for the approximating class; open for the target.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Exact,
    ApproxSound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub class: String,
    /// The class actually computed (PT replaced by PTK).
    pub computed: String,
    pub verdict: CoverVerdict,
    pub certification: Certification,
    pub ptk: Option<usize>,
    pub base_size: usize,
    pub imprint_generators: usize,
    /// A maximal imprint value meeting every language, when one exists.
    pub obstruction: Option<String>,
}

impl CoveringReport {
    pub fn coverable(&self) -> Option<bool> {
        match self.verdict {
            CoverVerdict::Coverable => Some(true),
            CoverVerdict::NotCoverable => Some(false),
            CoverVerdict::Unknown => None,
        }
    }
}

/// Whether `l0` has a cover in `expr` none of whose members meets all of
/// `ls`.
pub fn decide_covering(expr: &ClassExpr, l0: &Dfa, ls: &[Dfa], cfg: &Config) -> Result<CoveringReport> {
    let approx = expr.contains_pt();
    let computed = if approx {
        expr.replace_pt(&ClassExpr::Ptk(cfg.ptk))
    } else {
        expr.clone()
    };
    let input = covering_input(l0, ls)?;
    let (eta, imprint) = imprint_for_class(&computed, &input.rating)?;
    let pp = &input.rating.semiring;
    let obstruction = imprint
        .generators()
        .map(|(_, r)| r)
        .filter(|r| input.is_goal(r))
        .min()
        .map(|r| pp.show(r));
    let verdict = match (&obstruction, approx) {
        (None, _) => CoverVerdict::Coverable,
        (Some(_), false) => CoverVerdict::NotCoverable,
        (Some(_), true) => CoverVerdict::Unknown,
    };
    Ok(CoveringReport {
        class: expr.to_string(),
        computed: computed.to_string(),
        verdict,
        certification: if approx {
            Certification::ApproxSound
        } else {
            Certification::Exact
        },
        ptk: approx.then_some(cfg.ptk),
        base_size: eta.size(),
        imprint_generators: imprint.num_generators(),
        obstruction,
    })
}

/// Separation of `l1` from `l2` as the covering of `l1` by `{l2}`.
pub fn decide_separation(expr: &ClassExpr, l1: &Dfa, l2: &Dfa, cfg: &Config) -> Result<CoveringReport> {
    decide_covering(expr, l1, std::slice::from_ref(l2), cfg)
}

/// Distinct classes met by words of `l` up to `max_len`, as products.
fn classes_met(
    eta: &MonoidMorphism,
    k: usize,
    mode: Mode,
    l: &Dfa,
    max_len: usize,
) -> Result<Vec<MarkedProduct>> {
    let mut seen: HashSet<Snapshot> = HashSet::new();
    let mut out = Vec::new();
    for w in words_up_to(eta.alphabet(), max_len) {
        if !l.accepts(&w) {
            continue;
        }
        if seen.insert(class_key(eta, k, mode, &w)?) {
            out.push(class_as_product(eta, k, mode, &w)?);
        }
    }
    Ok(out)
}

fn union_all(alphabet: &crate::lang::Alphabet, langs: impl IntoIterator<Item = Dfa>) -> Result<Dfa> {
    let mut acc = Dfa::empty(alphabet);
    for d in langs {
        acc = acc.union(&d)?;
    }
    Ok(acc)
}

/// A cover found by a bounded class search, with the level used.
#[derive(Debug, Clone)]
pub struct ClassCover {
    pub k: usize,
    pub mode: Mode,
    pub products: Vec<MarkedProduct>,
}

/// Cover of `η⁻¹(s)` by ▷/◁ classes of `η` (mode Left/Right) or ⋈ classes
/// (Mixed) whose ratings `ρ(K)` all satisfy `(s, ρ(K)) ∈ sat`. Levels
/// `0..=k_max` are tried in order; classes are collected from words up
/// to `max_len` and the union is checked to cover `η⁻¹(s)` exactly.
pub fn extract_cover<S: Semiring>(
    mode: Mode,
    eta: &MonoidMorphism,
    s: usize,
    sat: &Imprint<S::Elem>,
    rho: &RatingMap<S>,
    k_max: usize,
    max_len: usize,
) -> Result<Option<ClassCover>> {
    let f: Vec<bool> = (0..eta.size()).map(|x| x == s).collect();
    let target = image_language(eta, &f);
    'level: for k in 0..=k_max {
        let products = classes_met(eta, k, mode, &target, max_len)?;
        for p in &products {
            let r = rho.eval_nice(&p.to_dfa())?;
            if !sat.contains(&rho.semiring, s, &r) {
                continue 'level;
            }
        }
        let union = union_all(eta.alphabet(), products.iter().map(|p| p.to_dfa()))?;
        if target.is_subset(&union)? {
            return Ok(Some(ClassCover { k, mode, products }));
        }
    }
    Ok(None)
}

/// Cover of `η_C⁻¹(s)` for LPOL(C) (Left) or RPOL(C) (Right) checked
/// against the saturated set of that class.
pub fn extract_lrpol_cover<S: Semiring>(
    mode: Mode,
    base: Base,
    s: usize,
    rho: &RatingMap<S>,
    cfg: &Config,
) -> Result<Option<ClassCover>> {
    let eta = base_morphism(base, rho.alphabet(), BASE_CAP)?;
    let p = base_imprint_finite(&eta, rho)?;
    let sat = saturate_lrpol(mode, &p, &eta, rho)?;
    extract_cover(mode, &eta, s, &sat.imprint, rho, cfg.k_max, cfg.word_length)
}

/// Separator of `l1` from `l2`: a union of classes of the canonical base
/// morphism at the least level `k ≤ k_max` whose classes meeting `l1`
/// (up to the word-length bound) cover `l1` and avoid `l2`.
pub fn extract_separator(
    mode: Mode,
    base: Base,
    l1: &Dfa,
    l2: &Dfa,
    cfg: &Config,
) -> Result<Option<ClassCover>> {
    l1.alphabet().same_as(l2.alphabet())?;
    let eta = base_morphism(base, l1.alphabet(), BASE_CAP)?;
    'level: for k in 0..=cfg.k_max {
        let products = classes_met(&eta, k, mode, l1, cfg.word_length)?;
        let mut dfas = Vec::with_capacity(products.len());
        for p in &products {
            let d = p.to_dfa();
            if !d.is_disjoint(l2)? {
                continue 'level;
            }
            dfas.push(d);
        }
        let union = union_all(l1.alphabet(), dfas)?;
        if l1.is_subset(&union)? {
            return Ok(Some(ClassCover { k, mode, products }));
        }
    }
    Ok(None)
}

/// MPOL(C) separator built from ⋈ classes.
pub fn extract_mpol_separator(base: Base, l1: &Dfa, l2: &Dfa, cfg: &Config) -> Result<Option<ClassCover>> {
    extract_separator(Mode::Mixed, base, l1, l2, cfg)
}

impl ClassCover {
    pub fn to_dfa(&self) -> Result<Dfa> {
        let alphabet = self
            .products
            .first()
            .map(|p| p.alphabet().clone())
            .ok_or_else(|| Error::Invalid("empty cover".into()))?;
        union_all(&alphabet, self.products.iter().map(|p| p.to_dfa()))
    }

    /// Every product has the determinism required by the mode.
    pub fn flags_ok(&self) -> bool {
        self.products.iter().all(|p| {
            let f = classify_product(p);
            match self.mode {
                Mode::Left => f.left_det,
                Mode::Right => f.right_det,
                Mode::Mixed => f.mixed_det,
            }
        })
    }

    pub fn regexes(&self) -> Vec<String> {
        self.products.iter().map(|p| p.to_regex_string()).collect()
    }
}
