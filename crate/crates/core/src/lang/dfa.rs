use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::nfa::Nfa;
use super::regex::Regex;
use super::{Alphabet, LangError};

/// Complete deterministic automaton. Values returned by the public
/// operations of this module are minimal and canonically numbered
/// (breadth-first from the initial state, letters in order), so two such
/// automata recognize the same language iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dfa {
    alphabet: Alphabet,
    n: usize,
    delta: Vec<usize>,
    init: usize,
    accept: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Dfa {
    pub fn from_parts(
        alphabet: Alphabet,
        n: usize,
        delta: Vec<usize>,
        init: usize,
        accept: Vec<bool>,
    ) -> Result<Dfa, LangError> {
        let bad = |message: &str| LangError::DfaFormat {
            line: 0,
            message: message.to_string(),
        };
        if n == 0 {
            return Err(bad("a DFA needs at least one state"));
        }
        if delta.len() != n * alphabet.len() || accept.len() != n {
            return Err(bad("table sizes do not match the state count"));
        }
        if init >= n || delta.iter().any(|&q| q >= n) {
            return Err(bad("state index out of range"));
        }
        Ok(Dfa {
            alphabet,
            n,
            delta,
            init,
            accept,
        })
    }

    pub fn empty(alphabet: &Alphabet) -> Dfa {
        Dfa {
            alphabet: alphabet.clone(),
            n: 1,
            delta: vec![0; alphabet.len()],
            init: 0,
            accept: vec![false],
        }
    }

    pub fn universal(alphabet: &Alphabet) -> Dfa {
        let mut d = Dfa::empty(alphabet);
        d.accept[0] = true;
        d
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accept[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.accept[q]).collect()
    }

    /// Transition on the letter with alphabet index `a`.
    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    /// Runs a word from `q`; `None` if it uses a letter outside the alphabet.
    pub fn run_from(&self, mut q: usize, w: &[u8]) -> Option<usize> {
        for &c in w {
            q = self.step(q, self.alphabet.index(c)?);
        }
        Some(q)
    }

    pub fn accepts(&self, w: &[u8]) -> bool {
        self.run_from(self.init, w)
            .is_some_and(|q| self.accept[q])
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = vec![self.init];
        seen[self.init] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..self.alphabet.len() {
                let p = self.step(q, a);
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal complete DFA, canonically numbered.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.reachable();
        // Moore refinement over reachable states
        let mut class: HashMap<usize, usize> = reach
            .iter()
            .map(|&q| (q, usize::from(self.accept[q])))
            .collect();
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = HashMap::new();
            for &q in &reach {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[&q]);
                sig.extend((0..k).map(|a| class[&self.step(q, a)]));
                let fresh = sigs.len();
                let id = *sigs.entry(sig).or_insert(fresh);
                next.insert(q, id);
            }
            let before: BTreeSet<usize> = class.values().copied().collect();
            let stable = sigs.len() == before.len();
            class = next;
            if stable {
                break;
            }
        }
        let nblocks = class.values().copied().collect::<BTreeSet<_>>().len();
        let mut rep = vec![usize::MAX; nblocks];
        for &q in &reach {
            if rep[class[&q]] == usize::MAX {
                rep[class[&q]] = q;
            }
        }
        let delta = (0..nblocks)
            .flat_map(|b| (0..k).map(move |a| (b, a)))
            .map(|(b, a)| class[&self.step(rep[b], a)])
            .collect();
        let accept = (0..nblocks).map(|b| self.accept[rep[b]]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            n: nblocks,
            delta,
            init: class[&self.init],
            accept,
        }
        .renumber()
    }

    /// Breadth-first renumbering from the initial state; assumes every
    /// state is reachable.
    fn renumber(&self) -> Dfa {
        let order = self.reachable();
        let mut id = vec![usize::MAX; self.n];
        for (i, &q) in order.iter().enumerate() {
            id[q] = i;
        }
        let k = self.alphabet.len();
        let mut delta = vec![0; order.len() * k];
        for (i, &q) in order.iter().enumerate() {
            for a in 0..k {
                delta[i * k + a] = id[self.step(q, a)];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            n: order.len(),
            delta,
            init: 0,
            accept: order.iter().map(|&q| self.accept[q]).collect(),
        }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.accept.iter_mut().for_each(|b| *b = !*b);
        d.minimize()
    }

    fn product(&self, other: &Dfa, f: impl Fn(bool, bool) -> bool) -> Dfa {
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.init, other.init)];
        ids.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let nxt = (self.step(p, a), other.step(q, a));
                let fresh = pairs.len();
                let id = *ids.entry(nxt).or_insert_with(|| {
                    pairs.push(nxt);
                    fresh
                });
                delta.push(id);
            }
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(p, q)| f(self.accept[p], other.accept[q]))
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            n: pairs.len(),
            delta,
            init: 0,
            accept,
        }
        .minimize()
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, LangError> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(self.product(other, |a, b| a || b))
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa, LangError> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(self.product(other, |a, b| a && b))
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa, LangError> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(self.product(other, |a, b| a && !b))
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    pub fn is_universal(&self) -> bool {
        self.reachable().iter().all(|&q| self.accept[q])
    }

    pub fn is_disjoint(&self, other: &Dfa) -> Result<bool, LangError> {
        Ok(self.intersection(other)?.is_empty())
    }

    pub fn is_subset(&self, other: &Dfa) -> Result<bool, LangError> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool, LangError> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(self.minimize() == other.minimize())
    }

    /// Shortest accepted word, length-lexicographically least.
    pub fn shortest_word(&self) -> Option<Vec<u8>> {
        let mut prev: Vec<Option<(usize, u8)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[self.init] = true;
        let mut queue = VecDeque::from([self.init]);
        while let Some(q) = queue.pop_front() {
            if self.accept[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, c)) = prev[cur] {
                    w.push(c);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for (a, &c) in self.alphabet.letters().iter().enumerate() {
                let p = self.step(q, a);
                if !seen[p] {
                    seen[p] = true;
                    prev[p] = Some((q, c));
                    queue.push_back(p);
                }
            }
        }
        None
    }

    /// Mirror language.
    pub fn reverse(&self) -> Dfa {
        Nfa::from_dfa(self).reverse().determinize().minimize()
    }

    /// The marked product `L0 a1 L1 ... an Ln`.
    pub fn marked_product(parts: &[Dfa], letters: &[u8]) -> Result<Dfa, LangError> {
        let alphabet = parts[0].alphabet();
        for p in parts {
            alphabet.same_as(p.alphabet())?;
        }
        for &c in letters {
            alphabet.check_word(&[c])?;
        }
        Ok(Nfa::marked_product(parts, letters).determinize().minimize())
    }

    pub fn concat(&self, other: &Dfa) -> Result<Dfa, LangError> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Nfa::concat(&Nfa::from_dfa(self), &Nfa::from_dfa(other))
            .determinize()
            .minimize())
    }

    /// Text form: `dfa <n> <letters>`, transitions, `init`, `final`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dfa {} {}", self.n, self.alphabet).unwrap();
        for q in 0..self.n {
            for (a, &c) in self.alphabet.letters().iter().enumerate() {
                writeln!(s, "{} {} {}", q, c as char, self.step(q, a)).unwrap();
            }
        }
        writeln!(s, "init {}", self.init).unwrap();
        let finals: Vec<String> = self.accepting_states().iter().map(|q| q.to_string()).collect();
        if finals.is_empty() {
            writeln!(s, "final").unwrap();
        } else {
            writeln!(s, "final {}", finals.join(" ")).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Dfa, LangError> {
        let err = |line: usize, message: &str| LangError::DfaFormat {
            line,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.first() != Some(&"dfa") || h.len() < 2 || h.len() > 3 {
            return Err(err(hl, "expected `dfa <nstates> <alphabet>`"));
        }
        let n: usize = h[1].parse().map_err(|_| err(hl, "bad state count"))?;
        let alphabet = Alphabet::parse(h.get(2).copied().unwrap_or(""))?;
        let k = alphabet.len();
        let mut delta = vec![None; n * k];
        let mut init = None;
        let mut accept = vec![false; n];
        let state = |line: usize, s: &str| -> Result<usize, LangError> {
            s.parse::<usize>()
                .ok()
                .filter(|&q| q < n)
                .ok_or_else(|| err(line, "bad state"))
        };
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts[0] {
                "init" => {
                    if parts.len() != 2 {
                        return Err(err(ln, "expected `init <q>`"));
                    }
                    init = Some(state(ln, parts[1])?);
                }
                "final" => {
                    for p in &parts[1..] {
                        accept[state(ln, p)?] = true;
                    }
                }
                _ => {
                    if parts.len() != 3 || parts[1].len() != 1 {
                        return Err(err(ln, "expected `src letter dst`"));
                    }
                    let src = state(ln, parts[0])?;
                    let a = alphabet
                        .index(parts[1].as_bytes()[0])
                        .ok_or_else(|| err(ln, "letter not in alphabet"))?;
                    let dst = state(ln, parts[2])?;
                    delta[src * k + a] = Some(dst);
                }
            }
        }
        let delta: Option<Vec<usize>> = delta.into_iter().collect();
        let delta = delta.ok_or_else(|| err(0, "transition function is not total"))?;
        let init = init.ok_or_else(|| err(0, "missing init line"))?;
        Dfa::from_parts(alphabet, n, delta, init, accept)
    }

    /// Regex for the language, by state elimination. The output is not
    /// minimal but is kept readable by local simplifications.
    pub fn to_regex(&self) -> Regex {
        let d = self.minimize();
        let n = d.n;
        // states 0..n, plus source n and sink n+1
        let src = n;
        let snk = n + 1;
        let mut e: HashMap<(usize, usize), Regex> = HashMap::new();
        let add = |e: &mut HashMap<(usize, usize), Regex>, p: usize, q: usize, r: Regex| {
            let cur = e.remove(&(p, q));
            let v = match cur {
                Some(c) => simp_union(c, r),
                None => r,
            };
            e.insert((p, q), v);
        };
        // drop states that cannot reach acceptance
        let live = d.live_states();
        for q in 0..n {
            if !live[q] {
                continue;
            }
            for (a, &c) in d.alphabet.letters().iter().enumerate() {
                let p = d.step(q, a);
                if live[p] {
                    add(&mut e, q, p, Regex::Lit(c));
                }
            }
            if d.accept[q] {
                add(&mut e, q, snk, Regex::Epsilon);
            }
        }
        if !live[d.init] {
            return Regex::Empty;
        }
        add(&mut e, src, d.init, Regex::Epsilon);
        for k in 0..n {
            if !live[k] {
                continue;
            }
            let loop_r = e.remove(&(k, k));
            let ins: Vec<(usize, Regex)> = e
                .iter()
                .filter(|((_, q), _)| *q == k)
                .map(|((p, _), r)| (*p, r.clone()))
                .collect();
            let outs: Vec<(usize, Regex)> = e
                .iter()
                .filter(|((p, _), _)| *p == k)
                .map(|((_, q), r)| (*q, r.clone()))
                .collect();
            e.retain(|(p, q), _| *p != k && *q != k);
            for (p, rin) in &ins {
                for (q, rout) in &outs {
                    let mid = match &loop_r {
                        Some(l) => simp_concat(simp_concat(rin.clone(), simp_star(l.clone())), rout.clone()),
                        None => simp_concat(rin.clone(), rout.clone()),
                    };
                    add(&mut e, *p, *q, mid);
                }
            }
        }
        e.remove(&(src, snk)).unwrap_or(Regex::Empty)
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let mut live = self.accept.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.n {
                if !live[q] && (0..self.alphabet.len()).any(|a| live[self.step(q, a)]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live
    }
}

fn simp_union(l: Regex, r: Regex) -> Regex {
    match (l, r) {
        (Regex::Empty, x) | (x, Regex::Empty) => x,
        (l, r) if l == r => l,
        (l, r) => Regex::union(l, r),
    }
}

fn simp_concat(l: Regex, r: Regex) -> Regex {
    match (l, r) {
        (Regex::Empty, _) | (_, Regex::Empty) => Regex::Empty,
        (Regex::Epsilon, x) | (x, Regex::Epsilon) => x,
        (l, r) => Regex::concat(l, r),
    }
}

fn simp_star(r: Regex) -> Regex {
    match r {
        Regex::Empty | Regex::Epsilon => Regex::Epsilon,
        Regex::Star(_) => r,
        Regex::Plus(inner) => Regex::Star(inner),
        r => Regex::star(r),
    }
}

/// Minimal DFA for `r` over the letters it uses.
pub fn compile(r: &Regex) -> Dfa {
    let alphabet = Alphabet::new(r.letters());
    compile_over(r, &alphabet).expect("alphabet contains every literal")
}

/// Minimal DFA for `r` over an explicit alphabet.
pub fn compile_over(r: &Regex, alphabet: &Alphabet) -> Result<Dfa, LangError> {
    for c in r.letters() {
        alphabet.check_word(&[c])?;
    }
    Ok(Nfa::from_regex(r, alphabet).determinize().minimize())
}

pub fn combine(op: BoolOp, l: &Dfa, r: Option<&Dfa>) -> Result<Dfa, LangError> {
    let need = |r: Option<&Dfa>| {
        r.cloned().ok_or_else(|| LangError::AlphabetMismatch {
            left: l.alphabet.to_string(),
            right: "<missing operand>".into(),
        })
    };
    match op {
        BoolOp::Complement => Ok(l.complement()),
        BoolOp::Union => l.union(&need(r)?),
        BoolOp::Intersection => l.intersection(&need(r)?),
        BoolOp::Difference => l.difference(&need(r)?),
    }
}

/// Left quotient `u⁻¹L` or right quotient `Lu⁻¹`.
pub fn quotient(l: &Dfa, u: &[u8], side: Side) -> Result<Dfa, LangError> {
    l.alphabet.check_word(u)?;
    let mut d = l.clone();
    match side {
        Side::Left => {
            d.init = l.run_from(l.init, u).expect("checked word");
        }
        Side::Right => {
            d.accept = (0..l.n)
                .map(|q| l.accept[l.run_from(q, u).expect("checked word")])
                .collect();
        }
    }
    Ok(d.minimize())
}

