use std::collections::{BTreeSet, HashMap, VecDeque};

use super::dfa::Dfa;
use super::regex::Regex;
use super::Alphabet;

/// Epsilon-NFA used as an intermediate form for regex compilation,
/// concatenation of marked products and reversal.
#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    pub alphabet: Alphabet,
    pub eps: Vec<Vec<usize>>,
    pub trans: Vec<Vec<(usize, usize)>>,
    pub starts: Vec<usize>,
    pub accepts: BTreeSet<usize>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Nfa {
        Nfa {
            alphabet,
            eps: Vec::new(),
            trans: Vec::new(),
            starts: Vec::new(),
            accepts: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.trans.push(Vec::new());
        self.eps.len() - 1
    }

    /// Thompson fragment for `r`; returns (entry, exit).
    fn fragment(&mut self, r: &Regex) -> (usize, usize) {
        let s = self.add_state();
        let t = self.add_state();
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[s].push(t),
            Regex::Lit(c) => {
                let a = self.alphabet.index(*c).expect("letter checked by caller");
                self.trans[s].push((a, t));
            }
            Regex::Union(l, rr) => {
                let (ls, lt) = self.fragment(l);
                let (rs, rt) = self.fragment(rr);
                self.eps[s].extend([ls, rs]);
                self.eps[lt].push(t);
                self.eps[rt].push(t);
            }
            Regex::Concat(l, rr) => {
                let (ls, lt) = self.fragment(l);
                let (rs, rt) = self.fragment(rr);
                self.eps[s].push(ls);
                self.eps[lt].push(rs);
                self.eps[rt].push(t);
            }
            Regex::Star(inner) => {
                let (is, it) = self.fragment(inner);
                self.eps[s].extend([is, t]);
                self.eps[it].extend([is, t]);
            }
            Regex::Plus(inner) => {
                let (is, it) = self.fragment(inner);
                self.eps[s].push(is);
                self.eps[it].extend([is, t]);
            }
        }
        (s, t)
    }

    pub fn from_regex(r: &Regex, alphabet: &Alphabet) -> Nfa {
        let mut n = Nfa::new(alphabet.clone());
        let (s, t) = n.fragment(r);
        n.starts = vec![s];
        n.accepts.insert(t);
        n
    }

    /// Appends a copy of `d`'s states, returning the offset.
    fn embed(&mut self, d: &Dfa) -> usize {
        let off = self.eps.len();
        for _ in 0..d.num_states() {
            self.add_state();
        }
        for q in 0..d.num_states() {
            for a in 0..d.alphabet().len() {
                self.trans[off + q].push((a, off + d.step(q, a)));
            }
        }
        off
    }

    /// NFA for `L0 a1 L1 ... an Ln`.
    pub fn marked_product(parts: &[Dfa], letters: &[u8]) -> Nfa {
        assert_eq!(parts.len(), letters.len() + 1);
        let alphabet = parts[0].alphabet().clone();
        let mut n = Nfa::new(alphabet.clone());
        let offs: Vec<usize> = parts.iter().map(|d| n.embed(d)).collect();
        n.starts = vec![offs[0] + parts[0].init()];
        for (i, &c) in letters.iter().enumerate() {
            let a = alphabet.index(c).expect("marked letter in alphabet");
            let next = offs[i + 1] + parts[i + 1].init();
            for q in parts[i].accepting_states() {
                n.trans[offs[i] + q].push((a, next));
            }
        }
        let last = parts.len() - 1;
        for q in parts[last].accepting_states() {
            n.accepts.insert(offs[last] + q);
        }
        n
    }

    pub fn from_dfa(d: &Dfa) -> Nfa {
        Nfa::marked_product(std::slice::from_ref(d), &[])
    }

    /// Concatenation by an epsilon splice.
    pub fn concat(first: &Nfa, second: &Nfa) -> Nfa {
        let mut m = first.clone();
        let off = m.eps.len();
        for _ in 0..second.eps.len() {
            m.add_state();
        }
        for (q, es) in second.eps.iter().enumerate() {
            m.eps[off + q].extend(es.iter().map(|p| p + off));
        }
        for (q, ts) in second.trans.iter().enumerate() {
            m.trans[off + q].extend(ts.iter().map(|&(a, p)| (a, p + off)));
        }
        for &q in &first.accepts {
            m.eps[q].extend(second.starts.iter().map(|s| s + off));
        }
        m.accepts = second.accepts.iter().map(|q| q + off).collect();
        m
    }

    pub fn reverse(&self) -> Nfa {
        let mut r = Nfa::new(self.alphabet.clone());
        for _ in 0..self.eps.len() {
            r.add_state();
        }
        for (q, es) in self.eps.iter().enumerate() {
            for &p in es {
                r.eps[p].push(q);
            }
        }
        for (q, ts) in self.trans.iter().enumerate() {
            for &(a, p) in ts {
                r.trans[p].push((a, q));
            }
        }
        r.starts = self.accepts.iter().copied().collect();
        r.accepts = self.starts.iter().copied().collect();
        r
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &p in &self.eps[q] {
                if set.insert(p) {
                    stack.push(p);
                }
            }
        }
    }

    /// Subset construction; the result is complete but not minimized.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut start: BTreeSet<usize> = self.starts.iter().copied().collect();
        self.closure(&mut start);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let cur = sets[i].clone();
            let mut row = vec![0; k];
            for (a, slot) in row.iter_mut().enumerate() {
                let mut next = BTreeSet::new();
                for &q in &cur {
                    for &(b, p) in &self.trans[q] {
                        if b == a {
                            next.insert(p);
                        }
                    }
                }
                self.closure(&mut next);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        ids.insert(next.clone(), id);
                        sets.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                *slot = id;
            }
            if delta.len() < (i + 1) * k {
                delta.resize((i + 1) * k, 0);
            }
            delta[i * k..(i + 1) * k].copy_from_slice(&row);
        }
        delta.resize(sets.len() * k, 0);
        let accept = sets
            .iter()
            .map(|s| s.iter().any(|q| self.accepts.contains(q)))
            .collect();
        Dfa::from_parts(self.alphabet.clone(), sets.len(), delta, 0, accept)
            .expect("subset construction yields a total DFA")
    }
}
