//! Class expressions, canonical morphisms of the finite bases and base
//! membership tests.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::word::words_up_to;
use crate::lang::Alphabet;
use crate::monoid::{generate, syntactic_congruence_of_subset};
use crate::syntactic::{MonoidMorphism, RecognizedLanguage};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassExpr {
    St,
    At,
    Pt,
    Ptk(usize),
    Lpol(Box<ClassExpr>),
    Rpol(Box<ClassExpr>),
    Mpol(Box<ClassExpr>),
    Upol(Box<ClassExpr>),
    Inter(Box<ClassExpr>, Box<ClassExpr>),
    Lp(usize, Box<ClassExpr>),
    Rp(usize, Box<ClassExpr>),
    Bsigma2(usize),
}

/// Polynomial-closure operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolOp {
    L,
    R,
    M,
    U,
}

impl PolOp {
    pub fn name(self) -> &'static str {
        match self {
            PolOp::L => "LPOL",
            PolOp::R => "RPOL",
            PolOp::M => "MPOL",
            PolOp::U => "UPOL",
        }
    }
}

/// Finite-prevariety bases plus PT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    St,
    At,
    Pt,
    Ptk(usize),
}

impl Base {
    pub fn is_finite(self) -> bool {
        !matches!(self, Base::Pt)
    }

    pub fn expr(self) -> ClassExpr {
        match self {
            Base::St => ClassExpr::St,
            Base::At => ClassExpr::At,
            Base::Pt => ClassExpr::Pt,
            Base::Ptk(k) => ClassExpr::Ptk(k),
        }
    }
}

impl ClassExpr {
    pub fn lpol(e: ClassExpr) -> ClassExpr {
        ClassExpr::Lpol(Box::new(e))
    }

    pub fn rpol(e: ClassExpr) -> ClassExpr {
        ClassExpr::Rpol(Box::new(e))
    }

    pub fn mpol(e: ClassExpr) -> ClassExpr {
        ClassExpr::Mpol(Box::new(e))
    }

    pub fn upol(e: ClassExpr) -> ClassExpr {
        ClassExpr::Upol(Box::new(e))
    }

    pub fn inter(a: ClassExpr, b: ClassExpr) -> ClassExpr {
        ClassExpr::Inter(Box::new(a), Box::new(b))
    }

    pub fn op(op: PolOp, e: ClassExpr) -> ClassExpr {
        match op {
            PolOp::L => ClassExpr::lpol(e),
            PolOp::R => ClassExpr::rpol(e),
            PolOp::M => ClassExpr::mpol(e),
            PolOp::U => ClassExpr::upol(e),
        }
    }

    /// Removes the LP/RP/BSIGMA2 aliases.
    pub fn expand(&self) -> Result<ClassExpr> {
        Ok(match self {
            ClassExpr::St | ClassExpr::At | ClassExpr::Pt => self.clone(),
            ClassExpr::Ptk(k) => {
                if *k < 1 {
                    return Err(Error::Invalid("PTK(k) needs k >= 1".into()));
                }
                self.clone()
            }
            ClassExpr::Lpol(e) => ClassExpr::lpol(e.expand()?),
            ClassExpr::Rpol(e) => ClassExpr::rpol(e.expand()?),
            ClassExpr::Mpol(e) => ClassExpr::mpol(e.expand()?),
            ClassExpr::Upol(e) => ClassExpr::upol(e.expand()?),
            ClassExpr::Inter(a, b) => ClassExpr::inter(a.expand()?, b.expand()?),
            ClassExpr::Lp(n, b) => {
                let mut cur = b.expand()?;
                // LP(n) = LPOL(RP(n-1)): alternate from the innermost layer
                for i in 0..*n {
                    cur = if (n - i) % 2 == 1 {
                        ClassExpr::lpol(cur)
                    } else {
                        ClassExpr::rpol(cur)
                    };
                }
                cur
            }
            ClassExpr::Rp(n, b) => {
                let mut cur = b.expand()?;
                for i in 0..*n {
                    cur = if (n - i) % 2 == 1 {
                        ClassExpr::rpol(cur)
                    } else {
                        ClassExpr::lpol(cur)
                    };
                }
                cur
            }
            ClassExpr::Bsigma2(n) => {
                if *n < 1 {
                    return Err(Error::Invalid("BSIGMA2(n) needs n >= 1".into()));
                }
                let mut cur = ClassExpr::Pt;
                for _ in 1..*n {
                    cur = ClassExpr::mpol(cur);
                }
                cur
            }
        })
    }

    /// The base if this is a base expression.
    pub fn as_base(&self) -> Option<Base> {
        match self {
            ClassExpr::St => Some(Base::St),
            ClassExpr::At => Some(Base::At),
            ClassExpr::Pt => Some(Base::Pt),
            ClassExpr::Ptk(k) => Some(Base::Ptk(*k)),
            _ => None,
        }
    }

    /// Number of operator layers after expansion.
    pub fn depth(&self) -> usize {
        match self {
            ClassExpr::Lpol(e) | ClassExpr::Rpol(e) | ClassExpr::Mpol(e) | ClassExpr::Upol(e) => {
                1 + e.depth()
            }
            ClassExpr::Inter(a, b) => a.depth().max(b.depth()),
            ClassExpr::Lp(n, b) | ClassExpr::Rp(n, b) => n + b.depth(),
            ClassExpr::Bsigma2(n) => n.saturating_sub(1),
            _ => 0,
        }
    }

    /// Same class with every PT base replaced.
    pub fn replace_pt(&self, with: &ClassExpr) -> ClassExpr {
        match self {
            ClassExpr::Pt => with.clone(),
            ClassExpr::Lpol(e) => ClassExpr::lpol(e.replace_pt(with)),
            ClassExpr::Rpol(e) => ClassExpr::rpol(e.replace_pt(with)),
            ClassExpr::Mpol(e) => ClassExpr::mpol(e.replace_pt(with)),
            ClassExpr::Upol(e) => ClassExpr::upol(e.replace_pt(with)),
            ClassExpr::Inter(a, b) => ClassExpr::inter(a.replace_pt(with), b.replace_pt(with)),
            ClassExpr::Lp(n, b) => ClassExpr::Lp(*n, Box::new(b.replace_pt(with))),
            ClassExpr::Rp(n, b) => ClassExpr::Rp(*n, Box::new(b.replace_pt(with))),
            ClassExpr::Bsigma2(n) => {
                let expanded = ClassExpr::Bsigma2(*n).expand().expect("n checked by caller");
                expanded.replace_pt(with)
            }
            other => other.clone(),
        }
    }

    pub fn contains_pt(&self) -> bool {
        match self {
            ClassExpr::Pt | ClassExpr::Bsigma2(_) => true,
            ClassExpr::Lpol(e) | ClassExpr::Rpol(e) | ClassExpr::Mpol(e) | ClassExpr::Upol(e) => {
                e.contains_pt()
            }
            ClassExpr::Lp(_, e) | ClassExpr::Rp(_, e) => e.contains_pt(),
            ClassExpr::Inter(a, b) => a.contains_pt() || b.contains_pt(),
            _ => false,
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::St => write!(f, "ST"),
            ClassExpr::At => write!(f, "AT"),
            ClassExpr::Pt => write!(f, "PT"),
            ClassExpr::Ptk(k) => write!(f, "PTK({k})"),
            ClassExpr::Lpol(e) => write!(f, "LPOL({e})"),
            ClassExpr::Rpol(e) => write!(f, "RPOL({e})"),
            ClassExpr::Mpol(e) => write!(f, "MPOL({e})"),
            ClassExpr::Upol(e) => write!(f, "UPOL({e})"),
            ClassExpr::Inter(a, b) => write!(f, "INTER({a},{b})"),
            ClassExpr::Lp(n, b) => write!(f, "LP({n},{b})"),
            ClassExpr::Rp(n, b) => write!(f, "RP({n},{b})"),
            ClassExpr::Bsigma2(n) => write!(f, "BSIGMA2({n})"),
        }
    }
}

impl FromStr for ClassExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClassExpr> {
        parse_class(s)
    }
}

pub fn parse_class(text: &str) -> Result<ClassExpr> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::ClassSyntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a class name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).to_ascii_uppercase())
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::ClassSyntax {
                offset: start,
                message: "expected a number".into(),
            })
    }

    fn expr(&mut self) -> Result<ClassExpr> {
        let start = self.pos;
        let name = self.ident()?;
        let unary = |p: &mut Self, f: fn(ClassExpr) -> ClassExpr| -> Result<ClassExpr> {
            p.expect(b'(')?;
            let e = p.expr()?;
            p.expect(b')')?;
            Ok(f(e))
        };
        match name.as_str() {
            "ST" => Ok(ClassExpr::St),
            "AT" => Ok(ClassExpr::At),
            "PT" => Ok(ClassExpr::Pt),
            "PTK" => {
                self.expect(b'(')?;
                let k = self.number()?;
                self.expect(b')')?;
                Ok(ClassExpr::Ptk(k))
            }
            "LPOL" => unary(self, ClassExpr::lpol),
            "RPOL" => unary(self, ClassExpr::rpol),
            "MPOL" => unary(self, ClassExpr::mpol),
            "UPOL" => unary(self, ClassExpr::upol),
            "INTER" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(ClassExpr::inter(a, b))
            }
            "LP" | "RP" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(if name == "LP" {
                    ClassExpr::Lp(n, Box::new(b))
                } else {
                    ClassExpr::Rp(n, Box::new(b))
                })
            }
            "BSIGMA2" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                Ok(ClassExpr::Bsigma2(n))
            }
            _ => Err(Error::ClassSyntax {
                offset: start,
                message: format!("unknown class '{name}'"),
            }),
        }
    }
}

/// Words of length at most `k`, indexed, with the concatenation table
/// restricted to results of length at most `k`.
struct Pieces {
    words: Vec<Vec<u8>>,
    cat: Vec<Option<usize>>,
    letter: Vec<usize>,
}

impl Pieces {
    fn new(alphabet: &Alphabet, k: usize) -> Pieces {
        let words = words_up_to(alphabet, k);
        let index: HashMap<&Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let n = words.len();
        let mut cat = vec![None; n * n];
        for (i, x) in words.iter().enumerate() {
            for (j, y) in words.iter().enumerate() {
                if x.len() + y.len() <= k {
                    cat[i * n + j] = Some(index[&[x.as_slice(), y].concat()]);
                }
            }
        }
        let letter = alphabet.letters().iter().map(|&c| index[&vec![c]]).collect();
        Pieces { words, cat, letter }
    }

    fn blocks(&self) -> usize {
        self.words.len().div_ceil(64)
    }

    fn singleton(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.blocks()];
        v[i / 64] |= 1 << (i % 64);
        v
    }

    fn members(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
        s.iter().enumerate().flat_map(|(b, &w)| {
            (0..64).filter(move |i| w >> i & 1 == 1).map(move |i| b * 64 + i)
        })
    }

    fn product(&self, s: &[u64], t: &[u64]) -> Vec<u64> {
        let n = self.words.len();
        let mut out = vec![0u64; self.blocks()];
        for x in Self::members(s) {
            for y in Self::members(t) {
                if let Some(z) = self.cat[x * n + y] {
                    out[z / 64] |= 1 << (z % 64);
                }
            }
        }
        out
    }

    /// `{ε}` and `{ε, a}` for each letter.
    fn unit_and_gens(&self) -> (Vec<u64>, Vec<Vec<u64>>) {
        let unit = self.singleton(0);
        let gens = self
            .letter
            .iter()
            .map(|&a| {
                let mut g = unit.clone();
                g[a / 64] |= 1 << (a % 64);
                g
            })
            .collect();
        (unit, gens)
    }
}

/// Canonical morphism of a finite base over `alphabet`.
pub fn canonical_morphism(base: Base, alphabet: &Alphabet) -> Result<MonoidMorphism> {
    match base {
        Base::St => Ok(MonoidMorphism::trivial(alphabet)),
        Base::At => {
            let gens: Vec<u32> = (0..alphabet.len()).map(|a| 1u32 << a).collect();
            let g = generate(0u32, &gens, |x, y| x | y);
            MonoidMorphism::new(alphabet.clone(), g.monoid, g.gen_images)
        }
        Base::Ptk(k) => {
            if k < 1 {
                return Err(Error::Invalid("PTK(k) needs k >= 1".into()));
            }
            let p = Pieces::new(alphabet, k);
            let (unit, gens) = p.unit_and_gens();
            let g = generate(unit, &gens, |s, t| p.product(s, t));
            MonoidMorphism::new(alphabet.clone(), g.monoid, g.gen_images)
        }
        Base::Pt => Err(Error::Unsupported(
            "PT is not a finite prevariety and has no canonical morphism".into(),
        )),
    }
}

/// Right Cayley graph of a canonical morphism: its elements with the
/// action of the letters. Element 0 is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cayley {
    size: usize,
    letters: usize,
    step: Vec<usize>,
}

impl Cayley {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn step(&self, n: usize, a: usize) -> usize {
        self.step[n * self.letters + a]
    }

    fn build<T: Clone + Eq + Hash>(unit: T, letters: usize, act: impl Fn(&T, usize) -> T) -> Cayley {
        let mut ids: HashMap<T, usize> = HashMap::from([(unit.clone(), 0)]);
        let mut elems = vec![unit];
        let mut step = Vec::new();
        let mut i = 0;
        while i < elems.len() {
            for a in 0..letters {
                let y = act(&elems[i], a);
                let fresh = ids.len();
                let id = *ids.entry(y.clone()).or_insert(fresh);
                if id == fresh {
                    elems.push(y);
                }
                step.push(id);
            }
            i += 1;
        }
        Cayley {
            size: elems.len(),
            letters,
            step,
        }
    }
}

/// Cayley graph of the canonical morphism, without its full table.
pub fn canonical_cayley(base: Base, alphabet: &Alphabet) -> Result<Cayley> {
    let k = alphabet.len();
    match base {
        Base::St => Ok(Cayley::build((), k, |_, _| ())),
        Base::At => Ok(Cayley::build(0u32, k, |x, a| x | 1 << a)),
        Base::Ptk(len) => {
            if len < 1 {
                return Err(Error::Invalid("PTK(k) needs k >= 1".into()));
            }
            let p = Pieces::new(alphabet, len);
            let (unit, gens) = p.unit_and_gens();
            Ok(Cayley::build(unit, k, |s, a| p.product(s, &gens[a])))
        }
        Base::Pt => Err(Error::Unsupported(
            "PT is not a finite prevariety and has no canonical morphism".into(),
        )),
    }
}

/// Reachable pairs `(η(w), α(w))` as a list of `(n, m)`.
pub fn reachable_pairs(eta: &MonoidMorphism, alpha: &MonoidMorphism) -> Result<Vec<(usize, usize)>> {
    eta.alphabet().same_as(alpha.alphabet())?;
    let gens: Vec<(usize, usize)> = (0..eta.alphabet().len())
        .map(|a| (eta.letter_image(a), alpha.letter_image(a)))
        .collect();
    let (ne, na) = (eta.target(), alpha.target());
    let g = generate((ne.unit(), na.unit()), &gens, |x, y| {
        (ne.mul(x.0, y.0), na.mul(x.1, y.1))
    });
    Ok(g.elements)
}

/// Same as [`reachable_pairs`] with `η` given by its Cayley graph.
pub fn reachable_pairs_cayley(eta: &Cayley, alpha: &MonoidMorphism) -> Vec<(usize, usize)> {
    let m = alpha.target();
    let mut seen: HashSet<(usize, usize)> = HashSet::from([(0, m.unit())]);
    let mut out = vec![(0, m.unit())];
    let mut i = 0;
    while i < out.len() {
        let (n, s) = out[i];
        for a in 0..alpha.alphabet().len() {
            let next = (eta.step(n, a), m.mul(s, alpha.letter_image(a)));
            if seen.insert(next) {
                out.push(next);
            }
        }
        i += 1;
    }
    out
}

/// Whether every language recognized by `alpha` belongs to the base.
pub fn is_base_morphism(base: Base, alpha: &MonoidMorphism) -> Result<bool> {
    match base {
        Base::Pt => Ok(alpha.target().green().is_j_trivial()),
        _ => {
            let eta = canonical_cayley(base, alpha.alphabet())?;
            let mut seen = vec![usize::MAX; eta.size()];
            for (n, m) in reachable_pairs_cayley(&eta, alpha) {
                if seen[n] == usize::MAX {
                    seen[n] = m;
                } else if seen[n] != m {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Whether the language `α⁻¹(F)` belongs to the base.
pub fn base_membership(base: Base, rl: &RecognizedLanguage) -> Result<bool> {
    match base {
        Base::St => Ok(rl.accept.iter().all(|&b| b) || rl.accept.iter().all(|&b| !b)),
        Base::Pt => {
            let cong = syntactic_congruence_of_subset(rl.morphism.target(), &rl.accept);
            let syn = rl.morphism.project(&cong);
            Ok(syn.target().green().is_j_trivial())
        }
        Base::At | Base::Ptk(_) => {
            let eta = canonical_cayley(base, rl.morphism.alphabet())?;
            let mut seen: Vec<Option<bool>> = vec![None; eta.size()];
            for (n, m) in reachable_pairs_cayley(&eta, &rl.morphism) {
                match seen[n] {
                    None => seen[n] = Some(rl.accept[m]),
                    Some(b) if b != rl.accept[m] => return Ok(false),
                    Some(_) => {}
                }
            }
            Ok(true)
        }
    }
}
