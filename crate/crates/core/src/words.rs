//! Distinguished positions, snapshots, the equivalences ▷, ◁ and ⋈ of a
//! morphism, and marked products.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::word::words_up_to;
use crate::lang::{compile_over, Alphabet, Dfa, Regex};
use crate::syntactic::{image_language, MonoidMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// ▷
    Left,
    /// ◁
    Right,
    /// ⋈
    Mixed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Left => "left",
            Mode::Right => "right",
            Mode::Mixed => "mixed",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" | ">" | "▷" => Ok(Mode::Left),
            "right" | "r" | "<" | "◁" => Ok(Mode::Right),
            "mixed" | "m" | "x" | "⋈" => Ok(Mode::Mixed),
            _ => Err(Error::Invalid(format!("unknown mode '{s}'"))),
        }
    }
}

/// `η(w(i, j))` for all positions `0 ≤ i < j ≤ |w| + 1`.
pub struct InfixTable {
    width: usize,
    img: Vec<usize>,
}

impl InfixTable {
    pub fn new(eta: &MonoidMorphism, w: &[u8]) -> Result<InfixTable> {
        eta.alphabet().check_word(w)?;
        let m = eta.target();
        let width = w.len() + 2;
        let mut img = vec![m.unit(); width * width];
        for i in 0..width {
            let mut acc = m.unit();
            for j in i + 2..width {
                acc = m.mul(acc, eta.image_of(w[j - 2]).expect("checked word"));
                img[i * width + j] = acc;
            }
        }
        Ok(InfixTable { width, img })
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.width);
        self.img[i * self.width + j]
    }
}

/// Positions of `P▷`, `P◁` or `P⋈` for `(η, k, w)`, sorted, 1-based.
pub fn marked_positions(eta: &MonoidMorphism, k: usize, w: &[u8], mode: Mode) -> Result<Vec<usize>> {
    let table = InfixTable::new(eta, w)?;
    Ok(positions_with(eta, &table, k, w.len(), mode))
}

fn positions_with(eta: &MonoidMorphism, t: &InfixTable, k: usize, len: usize, mode: Mode) -> Vec<usize> {
    let green = eta.target().green();
    let left = || {
        let mut level: Vec<bool> = vec![false; len + 2];
        for _ in 0..k {
            let mut anchors: Vec<usize> = vec![0];
            anchors.extend((1..=len).filter(|&i| level[i]));
            let mut next = vec![false; len + 2];
            for i in 1..=len {
                next[i] = anchors
                    .iter()
                    .any(|&j| j < i && green.r_lt(t.get(j, i + 1), t.get(j, i)));
            }
            if next == level {
                break;
            }
            level = next;
        }
        level
    };
    let right = || {
        let mut level: Vec<bool> = vec![false; len + 2];
        for _ in 0..k {
            let mut anchors: Vec<usize> = vec![len + 1];
            anchors.extend((1..=len).filter(|&i| level[i]));
            let mut next = vec![false; len + 2];
            for i in 1..=len {
                next[i] = anchors
                    .iter()
                    .any(|&j| i < j && green.l_lt(t.get(i - 1, j), t.get(i, j)));
            }
            if next == level {
                break;
            }
            level = next;
        }
        level
    };
    let flags: Vec<bool> = match mode {
        Mode::Left => left(),
        Mode::Right => right(),
        Mode::Mixed => {
            let (l, r) = (left(), right());
            l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
        }
    };
    (1..=len).filter(|&i| flags[i]).collect()
}

/// `(s₀, a₁, s₁, …, a_m, s_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Snapshot {
    pub gaps: Vec<usize>,
    pub letters: Vec<u8>,
}

impl Snapshot {
    pub fn display(&self, names: &[String]) -> String {
        let mut out = names[self.gaps[0]].clone();
        for (a, s) in self.letters.iter().zip(&self.gaps[1..]) {
            out.push_str(&format!(", {}, {}", *a as char, names[*s]));
        }
        format!("({out})")
    }
}

/// η-snapshot of `(w, P)`; `p` holds sorted 1-based positions.
pub fn snapshot(eta: &MonoidMorphism, w: &[u8], p: &[usize]) -> Result<Snapshot> {
    let t = InfixTable::new(eta, w)?;
    snapshot_with(&t, w, p)
}

fn snapshot_with(t: &InfixTable, w: &[u8], p: &[usize]) -> Result<Snapshot> {
    if p.windows(2).any(|x| x[0] >= x[1]) || p.iter().any(|&i| i == 0 || i > w.len()) {
        return Err(Error::Invalid("position set must be sorted labeled positions".into()));
    }
    let mut cuts = vec![0];
    cuts.extend_from_slice(p);
    cuts.push(w.len() + 1);
    Ok(Snapshot {
        gaps: cuts.windows(2).map(|c| t.get(c[0], c[1])).collect(),
        letters: p.iter().map(|&i| w[i - 1]).collect(),
    })
}

/// Snapshot over the canonical position set of `mode`; it names the class
/// of `w`.
pub fn class_key(eta: &MonoidMorphism, k: usize, mode: Mode, w: &[u8]) -> Result<Snapshot> {
    let t = InfixTable::new(eta, w)?;
    let p = positions_with(eta, &t, k, w.len(), mode);
    snapshot_with(&t, w, &p)
}

pub fn equivalent(eta: &MonoidMorphism, k: usize, mode: Mode, u: &[u8], v: &[u8]) -> Result<bool> {
    Ok(class_key(eta, k, mode, u)? == class_key(eta, k, mode, v)?)
}

/// Whether some `P' ⊆ Pc(v)` has `σ(v, P') = σ(u, P_mode(u))`.
pub fn equivalent_existential(
    eta: &MonoidMorphism,
    k: usize,
    mode: Mode,
    u: &[u8],
    v: &[u8],
) -> Result<bool> {
    let target = class_key(eta, k, mode, u)?;
    let t = InfixTable::new(eta, v)?;
    let m = target.letters.len();
    let end = v.len() + 1;
    // reach[h] holds the positions that may carry the h-th marked letter
    let mut reach: Vec<usize> = vec![0];
    for h in 0..m {
        let mut next = Vec::new();
        for i in 1..=v.len() {
            if v[i - 1] == target.letters[h] && reach.iter().any(|&j| j < i && t.get(j, i) == target.gaps[h]) {
                next.push(i);
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        reach = next;
    }
    Ok(reach.iter().any(|&j| j < end && t.get(j, end) == target.gaps[m]))
}

/// `L₀a₁L₁⋯a_nL_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedProduct {
    parts: Vec<Dfa>,
    letters: Vec<u8>,
}

/// Determinism and unambiguity of a marked product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFlags {
    pub left_det: bool,
    pub right_det: bool,
    pub mixed_det: bool,
    pub unambiguous: bool,
}

impl MarkedProduct {
    pub fn new(parts: Vec<Dfa>, letters: Vec<u8>) -> Result<MarkedProduct> {
        if parts.len() != letters.len() + 1 {
            return Err(Error::Invalid("a product of n+1 languages needs n letters".into()));
        }
        let alphabet = parts[0].alphabet().clone();
        for p in &parts {
            alphabet.same_as(p.alphabet())?;
        }
        for &a in &letters {
            if !alphabet.contains(a) {
                return Err(crate::lang::LangError::UnknownLetter {
                    letter: a as char,
                    alphabet: alphabet.to_string(),
                }
                .into());
            }
        }
        Ok(MarkedProduct { parts, letters })
    }

    pub fn parts(&self) -> &[Dfa] {
        &self.parts
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.parts[0].alphabet()
    }

    pub fn to_dfa(&self) -> Dfa {
        Dfa::marked_product(&self.parts, &self.letters).expect("alphabets checked")
    }

    /// `K₀a₁⋯K_{i-1}` for `1 ≤ i ≤ n`.
    fn prefix(&self, i: usize) -> Dfa {
        Dfa::marked_product(&self.parts[..i], &self.letters[..i - 1]).expect("alphabets checked")
    }

    /// `K_i a_{i+1}⋯K_n`.
    fn suffix(&self, i: usize) -> Dfa {
        Dfa::marked_product(&self.parts[i..], &self.letters[i..]).expect("alphabets checked")
    }

    /// Regular expressions of the parts, with the letters between them.
    pub fn to_regex_string(&self) -> String {
        let mut out = format!("({})", self.parts[0].to_regex());
        for (a, p) in self.letters.iter().zip(&self.parts[1..]) {
            out.push_str(&format!(" {} ({})", *a as char, p.to_regex()));
        }
        out
    }
}

fn letter_lang(alphabet: &Alphabet, a: u8) -> Dfa {
    compile_over(&Regex::lit(a), alphabet).expect("letter of the alphabet")
}

/// Decides the determinism flags by emptiness of the defining
/// intersections, and unambiguity by a search for two distinct runs.
pub fn classify_product(p: &MarkedProduct) -> ProductFlags {
    let al = p.alphabet();
    let any = Dfa::universal(al);
    let n = p.letters.len();
    let mut left = vec![false; n + 1];
    let mut right = vec![false; n + 1];
    for i in 1..=n {
        let a = p.letters[i - 1];
        let li = p.prefix(i);
        let lia = li.concat(&letter_lang(al, a)).expect("same alphabet").concat(&any).expect("same alphabet");
        left[i] = li.is_disjoint(&lia).expect("same alphabet");
        let ri = p.suffix(i);
        let ari = any.concat(&letter_lang(al, a)).expect("same alphabet").concat(&ri).expect("same alphabet");
        right[i] = ri.is_disjoint(&ari).expect("same alphabet");
    }
    ProductFlags {
        left_det: (1..=n).all(|i| left[i]),
        right_det: (1..=n).all(|i| right[i]),
        mixed_det: (1..=n).all(|i| left[i] || right[i]),
        unambiguous: unambiguous(p),
    }
}

/// Runs of the layered automaton correspond to decompositions; the
/// product is ambiguous iff two distinct runs accept a common word.
fn unambiguous(p: &MarkedProduct) -> bool {
    let al = p.alphabet();
    let n = p.letters.len();
    let succ = |(h, q): (usize, usize), a: usize| -> Vec<(usize, usize)> {
        let mut out = vec![(h, p.parts[h].step(q, a))];
        if h < n && p.parts[h].is_accepting(q) && al.letters()[a] == p.letters[h] {
            out.push((h + 1, p.parts[h + 1].init()));
        }
        out
    };
    let accepting = |(h, q): (usize, usize)| h == n && p.parts[h].is_accepting(q);
    let start = (0, p.parts[0].init());
    type Joint = ((usize, usize), (usize, usize), bool);
    let mut seen: HashSet<Joint> = HashSet::new();
    let mut queue: VecDeque<Joint> = VecDeque::from([(start, start, false)]);
    seen.insert((start, start, false));
    while let Some((x, y, split)) = queue.pop_front() {
        if split && accepting(x) && accepting(y) {
            return false;
        }
        for a in 0..al.len() {
            for x2 in succ(x, a) {
                for y2 in succ(y, a) {
                    let s = split || x2 != y2;
                    // order the pair once the runs have split
                    let key = if s && y2 < x2 { (y2, x2, s) } else { (x2, y2, s) };
                    if seen.insert(key) {
                        queue.push_back(key);
                    }
                }
            }
        }
    }
    true
}

/// The class of `w` as the product `η⁻¹(s₀)a₁η⁻¹(s₁)⋯a_nη⁻¹(s_n)` read off
/// its snapshot.
pub fn class_as_product(eta: &MonoidMorphism, k: usize, mode: Mode, w: &[u8]) -> Result<MarkedProduct> {
    let key = class_key(eta, k, mode, w)?;
    let n = eta.size();
    let parts = key
        .gaps
        .iter()
        .map(|&s| {
            let f: Vec<bool> = (0..n).map(|x| x == s).collect();
            image_language(eta, &f)
        })
        .collect();
    MarkedProduct::new(parts, key.letters)
}

/// Bounded test that `l` is a union of classes: every class met by a word
/// of length at most `max_len` must lie inside `l` or outside it. Each met
/// class is checked exactly through its product.
pub fn is_union_of_classes(eta: &MonoidMorphism, k: usize, mode: Mode, l: &Dfa, max_len: usize) -> Result<bool> {
    eta.alphabet().same_as(l.alphabet())?;
    let mut done: HashSet<Snapshot> = HashSet::new();
    for w in words_up_to(eta.alphabet(), max_len) {
        let key = class_key(eta, k, mode, &w)?;
        if done.contains(&key) {
            continue;
        }
        let class = class_as_product(eta, k, mode, &w)?.to_dfa();
        let inside = if l.accepts(&w) {
            class.is_subset(l)?
        } else {
            class.is_disjoint(l)?
        };
        if !inside {
            return Ok(false);
        }
        done.insert(key);
    }
    Ok(true)
}

/// Least `k ≤ k_max` for which [`is_union_of_classes`] holds.
pub fn find_class_level(
    eta: &MonoidMorphism,
    mode: Mode,
    l: &Dfa,
    k_max: usize,
    max_len: usize,
) -> Result<Option<usize>> {
    for k in 0..=k_max {
        if is_union_of_classes(eta, k, mode, l, max_len)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
