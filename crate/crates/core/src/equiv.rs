//! C-pairs and the canonical equivalence `~C,α`.

use std::collections::HashMap;

use crate::bits::BitSet;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::membership::{check_equation, EquationReport};
use crate::monoid::{quotient_unchecked, syntactic_congruence_with_gens, Congruence, FiniteMonoid};
use crate::prevariety::{canonical_cayley, reachable_pairs, reachable_pairs_cayley, Base, ClassExpr, PolOp};
use crate::syntactic::MonoidMorphism;

/// Binary relation on the elements of a monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRelation {
    rows: Vec<BitSet>,
}

impl PairRelation {
    pub fn new(n: usize) -> PairRelation {
        PairRelation {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, s: usize, t: usize) {
        self.rows[s].insert(t);
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.rows[s].contains(t)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(BitSet::is_empty)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |t| (s, t)))
            .collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|s| self.contains(s, s))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(s, t)| self.contains(t, s))
    }

    /// Closed under `(s, t), (s', t') ↦ (ss', tt')`.
    pub fn is_multiplicative(&self, m: &FiniteMonoid) -> bool {
        let pairs = self.pairs();
        pairs.iter().all(|&(s, t)| {
            pairs
                .iter()
                .all(|&(s2, t2)| self.contains(m.mul(s, s2), m.mul(t, t2)))
        })
    }
}

fn pairs_from_reachable(n: usize, reach: &[(usize, usize)]) -> PairRelation {
    let mut by_eta: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(e, s) in reach {
        by_eta.entry(e).or_default().push(s);
    }
    let mut rel = PairRelation::new(n);
    for group in by_eta.values() {
        for &s in group {
            for &t in group {
                rel.insert(s, t);
            }
        }
    }
    rel
}

/// C-pairs of `alpha` for the finite class with canonical morphism `eta`.
pub fn c_pairs_finite(eta: &MonoidMorphism, alpha: &MonoidMorphism) -> Result<PairRelation> {
    let reach = reachable_pairs(eta, alpha)?;
    Ok(pairs_from_reachable(alpha.size(), &reach))
}

/// Reflexive-transitive closure of a symmetric relation, checked to be a
/// congruence.
pub fn pair_closure(m: &FiniteMonoid, rel: &PairRelation) -> Result<Congruence> {
    let n = m.size();
    let mut class: Vec<usize> = (0..n).collect();
    // naive label propagation; n is small
    let mut changed = true;
    while changed {
        changed = false;
        for (s, t) in rel.pairs() {
            let lo = class[s].min(class[t]);
            if class[s] != lo || class[t] != lo {
                class[s] = lo;
                class[t] = lo;
                changed = true;
            }
        }
    }
    Ok(Congruence::new(m, class)?)
}

/// `[·] ∘ α` for the projection onto `M / c`.
pub fn quotient_c_morphism(alpha: &MonoidMorphism, c: &Congruence) -> MonoidMorphism {
    alpha.project(c)
}

/// Verdict of a class test on a quotient of the engine's morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub report: Option<EquationReport>,
}

impl Verdict {
    fn plain(holds: bool) -> Verdict {
        Verdict {
            holds,
            report: None,
        }
    }
}

/// Class tests and canonical equivalences over one fixed morphism `α`.
///
/// `accepts(C, θ)` decides whether `[·]θ ∘ α` is a C-morphism. For an
/// operator layer over `D`, the equivalence `~D` of the quotient morphism is
/// the projection of `~D,α ∨ θ`, so `~D,α` is computed once per expression.
pub struct EquivEngine<'a> {
    alpha: &'a MonoidMorphism,
    cfg: &'a Config,
    gens: Vec<usize>,
    reach: HashMap<Base, Vec<(usize, usize)>>,
    equivs: HashMap<ClassExpr, Congruence>,
    verdicts: HashMap<(ClassExpr, Congruence), bool>,
}

impl<'a> EquivEngine<'a> {
    pub fn new(alpha: &'a MonoidMorphism, cfg: &'a Config) -> EquivEngine<'a> {
        let mut gens = alpha.images().to_vec();
        gens.sort_unstable();
        gens.dedup();
        EquivEngine {
            alpha,
            cfg,
            gens,
            reach: HashMap::new(),
            equivs: HashMap::new(),
            verdicts: HashMap::new(),
        }
    }

    pub fn morphism(&self) -> &MonoidMorphism {
        self.alpha
    }

    fn reachable(&mut self, base: Base) -> Result<&[(usize, usize)]> {
        if !self.reach.contains_key(&base) {
            let eta = canonical_cayley(base, self.alpha.alphabet())?;
            let r = reachable_pairs_cayley(&eta, self.alpha);
            self.reach.insert(base, r);
        }
        Ok(&self.reach[&base])
    }

    /// C-pairs of `α` for a finite base.
    pub fn c_pairs(&mut self, base: Base) -> Result<PairRelation> {
        let n = self.alpha.size();
        let reach = self.reachable(base)?;
        Ok(pairs_from_reachable(n, reach))
    }

    /// Whether `[·]θ ∘ α` is a morphism of the (expanded) class `e`.
    pub fn accepts(&mut self, e: &ClassExpr, theta: &Congruence) -> Result<Verdict> {
        let m = self.alpha.target();
        match e {
            ClassExpr::Pt => {
                let (q, _) = quotient_unchecked(m, theta);
                Ok(Verdict::plain(q.green().is_j_trivial()))
            }
            ClassExpr::St | ClassExpr::At | ClassExpr::Ptk(_) => {
                let base = e.as_base().expect("base expression");
                let reach = self.reachable(base)?;
                let mut seen: HashMap<usize, usize> = HashMap::new();
                for &(n, s) in reach {
                    let c = theta.class_of(s);
                    if *seen.entry(n).or_insert(c) != c {
                        return Ok(Verdict::plain(false));
                    }
                }
                Ok(Verdict::plain(true))
            }
            ClassExpr::Lpol(d) | ClassExpr::Rpol(d) | ClassExpr::Mpol(d) | ClassExpr::Upol(d) => {
                let op = match e {
                    ClassExpr::Lpol(_) => PolOp::L,
                    ClassExpr::Rpol(_) => PolOp::R,
                    ClassExpr::Mpol(_) => PolOp::M,
                    _ => PolOp::U,
                };
                let inner = self.canonical_equiv(d)?;
                let m = self.alpha.target();
                let joined = inner.join(m, theta);
                let (q, proj) = quotient_unchecked(m, theta);
                let mut class = vec![0; q.size()];
                for s in m.elements() {
                    class[proj[s]] = joined.class_of(s);
                }
                let eq = Congruence::normalized(class);
                let report = check_equation(op, &q, &eq);
                Ok(Verdict {
                    holds: report.holds,
                    report: Some(report),
                })
            }
            ClassExpr::Inter(a, b) => {
                let va = self.accepts(a, theta)?;
                if !va.holds {
                    return Ok(va);
                }
                self.accepts(b, theta)
            }
            ClassExpr::Lp(..) | ClassExpr::Rp(..) | ClassExpr::Bsigma2(_) => {
                let x = e.expand()?;
                self.accepts(&x, theta)
            }
        }
    }

    fn accepts_memo(&mut self, e: &ClassExpr, theta: Congruence) -> Result<bool> {
        let key = (e.clone(), theta);
        if let Some(&v) = self.verdicts.get(&key) {
            return Ok(v);
        }
        let v = self.accepts(e, &key.1)?.holds;
        self.verdicts.insert(key, v);
        Ok(v)
    }

    /// `~C,α`. Finite bases use the closure of their C-pairs; every other
    /// class goes through subset enumeration.
    pub fn canonical_equiv(&mut self, e: &ClassExpr) -> Result<Congruence> {
        if let Some(c) = self.equivs.get(e) {
            return Ok(c.clone());
        }
        let c = match e {
            ClassExpr::St => Congruence::total(self.alpha.size()),
            ClassExpr::At | ClassExpr::Ptk(_) => {
                let rel = self.c_pairs(e.as_base().expect("base"))?;
                pair_closure(self.alpha.target(), &rel)?
            }
            ClassExpr::Lp(..) | ClassExpr::Rp(..) | ClassExpr::Bsigma2(_) => {
                let x = e.expand()?;
                self.canonical_equiv(&x)?
            }
            _ => self.enumerate(e, true)?,
        };
        self.equivs.insert(e.clone(), c.clone());
        Ok(c)
    }

    /// `~C,α` as the atom partition of all `F ⊆ M` with `α⁻¹(F) ∈ C`.
    ///
    /// With `prune`, subsets already saturated by the meet of the accepted
    /// congruences are skipped: they lie in the Boolean algebra anyway.
    pub fn enumerate(&mut self, e: &ClassExpr, prune: bool) -> Result<Congruence> {
        let m = self.alpha.target();
        let n = m.size();
        if n > self.cfg.cap || n > 63 {
            return Err(Error::CapExceeded {
                size: n,
                cap: self.cfg.cap.min(63),
            });
        }
        if prune && self.accepts_memo(e, Congruence::identity(n))? {
            return Ok(Congruence::identity(n));
        }
        let m = m.clone();
        // F and its complement give the same congruence: drop element n-1
        let mut masks: Vec<u64> = (0..1u64 << (n - 1)).collect();
        masks.sort_by_key(|x| (x.count_ones(), *x));
        let mut current = Congruence::total(n);
        let mut accepted: Vec<u64> = Vec::new();
        for mask in masks {
            let f: Vec<bool> = (0..n).map(|s| mask >> s & 1 == 1).collect();
            if prune && saturated(&current, &f) {
                continue;
            }
            let theta = syntactic_congruence_with_gens(&m, &self.gens, &f);
            if self.accepts_memo(e, theta.clone())? {
                if prune {
                    current = meet(&current, &theta);
                } else {
                    accepted.push(mask);
                }
            }
        }
        if prune {
            return Ok(current);
        }
        let vectors: Vec<Vec<bool>> = (0..n)
            .map(|s| accepted.iter().map(|&mask| mask >> s & 1 == 1).collect())
            .collect();
        let mut ids: HashMap<&Vec<bool>, usize> = HashMap::new();
        let labels: Vec<usize> = vectors
            .iter()
            .map(|v| {
                let fresh = ids.len();
                *ids.entry(v).or_insert(fresh)
            })
            .collect();
        Ok(Congruence::new(&m, labels)?)
    }
}

fn saturated(c: &Congruence, f: &[bool]) -> bool {
    let mut val: Vec<Option<bool>> = vec![None; c.num_classes()];
    f.iter().enumerate().all(|(s, &b)| {
        let slot = &mut val[c.class_of(s)];
        *slot.get_or_insert(b) == b
    })
}

/// Intersection of two congruences.
pub fn meet(a: &Congruence, b: &Congruence) -> Congruence {
    let labels = a
        .classes()
        .iter()
        .zip(b.classes())
        .map(|(&x, &y)| x * b.num_classes() + y)
        .collect();
    Congruence::normalized(labels)
}

/// `~C,α` with the default engine.
pub fn canonical_equiv(class: &ClassExpr, alpha: &MonoidMorphism, cfg: &Config) -> Result<Congruence> {
    let class = class.expand()?;
    EquivEngine::new(alpha, cfg).canonical_equiv(&class)
}

/// `~C,α` by unpruned subset enumeration, for any class including finite
/// bases.
pub fn canonical_equiv_enumerated(
    class: &ClassExpr,
    alpha: &MonoidMorphism,
    cfg: &Config,
) -> Result<Congruence> {
    let class = class.expand()?;
    EquivEngine::new(alpha, cfg).enumerate(&class, false)
}
