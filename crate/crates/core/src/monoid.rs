//! Finite monoids given by multiplication tables, Green's relations,
//! idempotent powers, congruences and quotients.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("multiplication table has wrong size or out-of-range entries")]
    BadTable,
    #[error("element {0} is not a two-sided unit")]
    BadUnit(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("partition is not a congruence: {0} ~ {1} but multiplying by {2} separates them")]
    IncompatibleCongruence(usize, usize, usize),
    #[error("partition has wrong length")]
    BadPartition,
    #[error("malformed monoid dump at line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Finite monoid on `0..n` with a row-major table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    n: usize,
    table: Vec<usize>,
    unit: usize,
    names: Option<Vec<String>>,
}

const FULL_CHECK_LIMIT: usize = 64;

impl FiniteMonoid {
    pub fn new(n: usize, table: Vec<usize>, unit: usize) -> Result<FiniteMonoid, MonoidError> {
        if n == 0 || table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(MonoidError::BadTable);
        }
        if unit >= n {
            return Err(MonoidError::BadUnit(unit));
        }
        let m = FiniteMonoid {
            n,
            table,
            unit,
            names: None,
        };
        if (0..n).any(|s| m.mul(unit, s) != s || m.mul(s, unit) != s) {
            return Err(MonoidError::BadUnit(unit));
        }
        m.check_associative()?;
        Ok(m)
    }

    /// Skips validation; for tables produced by construction from an
    /// already associative operation.
    pub(crate) fn from_trusted(n: usize, table: Vec<usize>, unit: usize) -> FiniteMonoid {
        debug_assert_eq!(table.len(), n * n);
        FiniteMonoid {
            n,
            table,
            unit,
            names: None,
        }
    }

    fn check_associative(&self) -> Result<(), MonoidError> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(MonoidError::NotAssociative(a, b, c))
            } else {
                Ok(())
            }
        };
        if n <= FULL_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // deterministic sample of triples
            let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
            for _ in 0..(FULL_CHECK_LIMIT * FULL_CHECK_LIMIT * FULL_CHECK_LIMIT) {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                let a = (x % n as u64) as usize;
                let b = ((x >> 20) % n as u64) as usize;
                let c = ((x >> 40) % n as u64) as usize;
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid::from_trusted(1, vec![0], 0)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn mul_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn pow(&self, s: usize, mut k: usize) -> usize {
        let mut base = s;
        let mut acc = self.unit;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&s| self.is_idempotent(s)).collect()
    }

    /// Least `k ≥ 1` such that `s^k` is idempotent for every `s`.
    pub fn omega(&self) -> usize {
        let mut max_index = 1;
        let mut lcm = 1;
        for s in self.elements() {
            // powers s^1, s^2, ... until a repeat
            let mut seen: HashMap<usize, usize> = HashMap::new();
            let mut p = s;
            let mut k = 1;
            while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(p) {
                e.insert(k);
                p = self.mul(p, s);
                k += 1;
            }
            let index = seen[&p];
            let period = k - index;
            max_index = max_index.max(index);
            lcm = lcm_usize(lcm, period);
        }
        max_index.div_ceil(lcm) * lcm
    }

    /// `s^ω` for the global ω.
    pub fn omega_power(&self, s: usize, omega: usize) -> usize {
        self.pow(s, omega)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> FiniteMonoid {
        assert_eq!(names.len(), self.n);
        self.names = Some(names);
        self
    }

    pub fn name(&self, s: usize) -> String {
        match &self.names {
            Some(v) => v[s].clone(),
            None => s.to_string(),
        }
    }

    /// Same elements, multiplication in the opposite order.
    pub fn reverse(&self) -> FiniteMonoid {
        let n = self.n;
        let table = (0..n * n).map(|i| self.mul(i % n, i / n)).collect();
        FiniteMonoid {
            n,
            table,
            unit: self.unit,
            names: self.names.clone(),
        }
    }

    /// Direct product; element `(a, b)` is `a * other.size() + b`.
    pub fn product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] =
                    self.mul(x / n2, y / n2) * n2 + other.mul(x % n2, y % n2);
            }
        }
        FiniteMonoid::from_trusted(n, table, self.unit * n2 + other.unit)
    }

    /// Least submonoid containing `gens`, sorted.
    pub fn generated_submonoid(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BitSet::new(self.n);
        seen.insert(self.unit);
        let mut queue = VecDeque::from([self.unit]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.iter().collect()
    }

    /// Restriction to a subset closed under multiplication and containing the
    /// unit; returns the submonoid and the embedding.
    pub fn restrict(&self, elems: &[usize]) -> (FiniteMonoid, Vec<usize>) {
        let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elems.len();
        let mut table = vec![0; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * m + j] = index[&self.mul(a, b)];
            }
        }
        let sub = FiniteMonoid::from_trusted(m, table, index[&self.unit]);
        (sub, elems.to_vec())
    }

    pub fn green(&self) -> GreenData {
        GreenData::compute(self)
    }

    pub fn to_dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "monoid {}", self.n).unwrap();
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|b| self.mul(a, b).to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        writeln!(s, "unit {}", self.unit).unwrap();
        if let Some(names) = &self.names {
            writeln!(s, "names {}", names.join(" ")).unwrap();
        }
        s
    }

    pub fn from_dump(text: &str) -> Result<FiniteMonoid, MonoidError> {
        let err = |line: usize, message: &str| MonoidError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let n: usize = header
            .strip_prefix("monoid ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| err(hl, "expected `monoid <n>`"))?;
        let mut table = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (ln, row) = lines.next().ok_or_else(|| err(0, "missing table row"))?;
            let vals: Result<Vec<usize>, _> = row.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|_| err(ln, "bad table entry"))?;
            if vals.len() != n {
                return Err(err(ln, "row has wrong length"));
            }
            table.extend(vals);
        }
        let (ul, unit_line) = lines.next().ok_or_else(|| err(0, "missing unit line"))?;
        let unit: usize = unit_line
            .strip_prefix("unit ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| err(ul, "expected `unit <i>`"))?;
        let mut m = FiniteMonoid::new(n, table, unit)?;
        if let Some((nl, names)) = lines.next() {
            let names: Vec<String> = names
                .strip_prefix("names")
                .ok_or_else(|| err(nl, "expected `names ...`"))?
                .split_whitespace()
                .map(String::from)
                .collect();
            if names.len() != n {
                return Err(err(nl, "wrong number of names"));
            }
            m.names = Some(names);
        }
        Ok(m)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm_usize(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Green preorders and their classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenData {
    n: usize,
    r_le: Vec<BitSet>,
    l_le: Vec<BitSet>,
    j_le: Vec<BitSet>,
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub j_class: Vec<usize>,
    pub h_class: Vec<usize>,
}

impl GreenData {
    fn compute(m: &FiniteMonoid) -> GreenData {
        let n = m.size();
        // right ideal tM and left ideal Mt for each t
        let right: Vec<BitSet> = (0..n)
            .map(|t| BitSet::from_iter(n, (0..n).map(|x| m.mul(t, x))))
            .collect();
        let left: Vec<BitSet> = (0..n)
            .map(|t| BitSet::from_iter(n, (0..n).map(|x| m.mul(x, t))))
            .collect();
        let two: Vec<BitSet> = (0..n)
            .map(|t| {
                let mut b = BitSet::new(n);
                for y in right[t].iter() {
                    for x in 0..n {
                        b.insert(m.mul(x, y));
                    }
                }
                b
            })
            .collect();
        // store as "s ≤ t" rows indexed by s
        let transpose = |ideals: &[BitSet]| -> Vec<BitSet> {
            let mut rows = vec![BitSet::new(n); n];
            for (t, ideal) in ideals.iter().enumerate() {
                for s in ideal.iter() {
                    rows[s].insert(t);
                }
            }
            rows
        };
        let r_le = transpose(&right);
        let l_le = transpose(&left);
        let j_le = transpose(&two);
        let classes = |le: &[BitSet]| -> Vec<usize> {
            let mut id = vec![usize::MAX; n];
            let mut next = 0;
            for s in 0..n {
                if id[s] != usize::MAX {
                    continue;
                }
                for t in s..n {
                    if le[s].contains(t) && le[t].contains(s) {
                        id[t] = next;
                    }
                }
                next += 1;
            }
            id
        };
        let r_class = classes(&r_le);
        let l_class = classes(&l_le);
        let j_class = classes(&j_le);
        let mut h_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let h_class = (0..n)
            .map(|s| {
                let fresh = h_ids.len();
                *h_ids.entry((r_class[s], l_class[s])).or_insert(fresh)
            })
            .collect();
        GreenData {
            n,
            r_le,
            l_le,
            j_le,
            r_class,
            l_class,
            j_class,
            h_class,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `s ≤R t`: `s ∈ tM`.
    pub fn r_leq(&self, s: usize, t: usize) -> bool {
        self.r_le[s].contains(t)
    }

    pub fn l_leq(&self, s: usize, t: usize) -> bool {
        self.l_le[s].contains(t)
    }

    pub fn j_leq(&self, s: usize, t: usize) -> bool {
        self.j_le[s].contains(t)
    }

    pub fn r_equiv(&self, s: usize, t: usize) -> bool {
        self.r_class[s] == self.r_class[t]
    }

    pub fn l_equiv(&self, s: usize, t: usize) -> bool {
        self.l_class[s] == self.l_class[t]
    }

    pub fn j_equiv(&self, s: usize, t: usize) -> bool {
        self.j_class[s] == self.j_class[t]
    }

    /// `s <R t`: `s ≤R t` and not `s R t`.
    pub fn r_lt(&self, s: usize, t: usize) -> bool {
        self.r_leq(s, t) && !self.r_equiv(s, t)
    }

    pub fn l_lt(&self, s: usize, t: usize) -> bool {
        self.l_leq(s, t) && !self.l_equiv(s, t)
    }

    pub fn j_lt(&self, s: usize, t: usize) -> bool {
        self.j_leq(s, t) && !self.j_equiv(s, t)
    }

    fn blocks(&self, class: &[usize]) -> Vec<Vec<usize>> {
        let count = class.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (s, &c) in class.iter().enumerate() {
            out[c].push(s);
        }
        out
    }

    pub fn r_classes(&self) -> Vec<Vec<usize>> {
        self.blocks(&self.r_class)
    }

    pub fn l_classes(&self) -> Vec<Vec<usize>> {
        self.blocks(&self.l_class)
    }

    pub fn j_classes(&self) -> Vec<Vec<usize>> {
        self.blocks(&self.j_class)
    }

    pub fn h_classes(&self) -> Vec<Vec<usize>> {
        self.blocks(&self.h_class)
    }

    pub fn is_j_trivial(&self) -> bool {
        self.j_classes().iter().all(|c| c.len() == 1)
    }
}

/// Partition of a monoid's elements compatible with multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Congruence {
    class: Vec<usize>,
    count: usize,
}

impl Congruence {
    /// Normalizes block ids by first occurrence and checks compatibility.
    pub fn new(m: &FiniteMonoid, class: Vec<usize>) -> Result<Congruence, MonoidError> {
        if class.len() != m.size() {
            return Err(MonoidError::BadPartition);
        }
        let c = Congruence::normalized(class);
        c.check(m)?;
        Ok(c)
    }

    pub(crate) fn normalized(class: Vec<usize>) -> Congruence {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let class: Vec<usize> = class
            .into_iter()
            .map(|c| {
                let fresh = ids.len();
                *ids.entry(c).or_insert(fresh)
            })
            .collect();
        Congruence {
            count: ids.len(),
            class,
        }
    }

    fn check(&self, m: &FiniteMonoid) -> Result<(), MonoidError> {
        let reps = self.representatives();
        for s in m.elements() {
            let r = reps[self.class[s]];
            if r == s {
                continue;
            }
            for x in m.elements() {
                if !self.same(m.mul(x, s), m.mul(x, r)) || !self.same(m.mul(s, x), m.mul(r, x)) {
                    return Err(MonoidError::IncompatibleCongruence(r, s, x));
                }
            }
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Congruence {
        Congruence {
            class: (0..n).collect(),
            count: n,
        }
    }

    pub fn total(n: usize) -> Congruence {
        Congruence {
            class: vec![0; n],
            count: 1,
        }
    }

    /// Least congruence containing the given pairs.
    pub fn generated(m: &FiniteMonoid, pairs: &[(usize, usize)]) -> Congruence {
        let n = m.size();
        let mut uf = UnionFind::new(n);
        let mut work: Vec<(usize, usize)> = pairs.to_vec();
        while let Some((s, t)) = work.pop() {
            if uf.union(s, t) {
                for x in 0..n {
                    work.push((m.mul(x, s), m.mul(x, t)));
                    work.push((m.mul(s, x), m.mul(t, x)));
                }
            }
        }
        Congruence::normalized((0..n).map(|s| uf.find(s)).collect())
    }

    /// Least congruence coarser than both.
    pub fn join(&self, m: &FiniteMonoid, other: &Congruence) -> Congruence {
        let mut pairs = Vec::new();
        for c in [self, other] {
            let reps = c.representatives();
            for s in 0..c.class.len() {
                pairs.push((reps[c.class[s]], s));
            }
        }
        Congruence::generated(m, &pairs)
    }

    pub fn class_of(&self, s: usize) -> usize {
        self.class[s]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn num_classes(&self) -> usize {
        self.count
    }

    pub fn same(&self, s: usize, t: usize) -> bool {
        self.class[s] == self.class[t]
    }

    pub fn is_identity(&self) -> bool {
        self.count == self.class.len()
    }

    /// First element of each block.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.count];
        for (s, &c) in self.class.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = s;
            }
        }
        reps
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (s, &c) in self.class.iter().enumerate() {
            out[c].push(s);
        }
        out
    }

    /// All related pairs `(s, t)`, including the diagonal.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let blocks = self.blocks();
        blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&s| b.iter().map(move |&t| (s, t))))
            .collect()
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut map = vec![usize::MAX; self.count];
        for (s, &c) in self.class.iter().enumerate() {
            if map[c] == usize::MAX {
                map[c] = other.class[s];
            } else if map[c] != other.class[s] {
                return false;
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Quotient monoid and the projection onto it.
pub fn quotient(m: &FiniteMonoid, c: &Congruence) -> Result<(FiniteMonoid, Vec<usize>), MonoidError> {
    if c.class.len() != m.size() {
        return Err(MonoidError::BadPartition);
    }
    c.check(m)?;
    Ok(quotient_unchecked(m, c))
}

pub(crate) fn quotient_unchecked(m: &FiniteMonoid, c: &Congruence) -> (FiniteMonoid, Vec<usize>) {
    let reps = c.representatives();
    let k = c.count;
    let mut table = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            table[i * k + j] = c.class[m.mul(reps[i], reps[j])];
        }
    }
    let mut q = FiniteMonoid::from_trusted(k, table, c.class[m.unit()]);
    if let Some(names) = &m.names {
        q.names = Some(reps.iter().map(|&r| names[r].clone()).collect());
    }
    (q, c.class.clone())
}

/// Coarsest congruence saturating `f`: `s ≡ t` iff `xsy ∈ f ⇔ xty ∈ f` for
/// all `x, y`.
pub fn syntactic_congruence_of_subset(m: &FiniteMonoid, f: &[bool]) -> Congruence {
    let n = m.size();
    let mut class: Vec<usize> = (0..n).map(|s| usize::from(f[s])).collect();
    let mut count = class.iter().collect::<std::collections::BTreeSet<_>>().len();
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let mut sig = Vec::with_capacity(2 * n + 1);
                sig.push(class[s]);
                sig.extend((0..n).map(|x| class[m.mul(x, s)]));
                sig.extend((0..n).map(|x| class[m.mul(s, x)]));
                let fresh = ids.len();
                *ids.entry(sig).or_insert(fresh)
            })
            .collect();
        let stable = ids.len() == count;
        count = ids.len();
        class = next;
        if stable {
            break;
        }
    }
    Congruence::normalized(class)
}

/// Same congruence as [`syntactic_congruence_of_subset`], computed by
/// refinement along generators only; `gens` must generate `m`.
pub fn syntactic_congruence_with_gens(m: &FiniteMonoid, gens: &[usize], f: &[bool]) -> Congruence {
    let n = m.size();
    let mut class: Vec<usize> = (0..n).map(|s| usize::from(f[s])).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let mut sig = Vec::with_capacity(2 * gens.len() + 1);
                sig.push(class[s]);
                sig.extend(gens.iter().map(|&g| class[m.mul(g, s)]));
                sig.extend(gens.iter().map(|&g| class[m.mul(s, g)]));
                let fresh = ids.len();
                *ids.entry(sig).or_insert(fresh)
            })
            .collect();
        let stable = ids.len() == count;
        count = ids.len();
        class = next;
        if stable {
            break;
        }
    }
    Congruence::normalized(class)
}

/// Monoid generated by `gens` inside an ambient operation on values of `T`.
pub struct Generated<T> {
    pub monoid: FiniteMonoid,
    pub elements: Vec<T>,
    pub gen_images: Vec<usize>,
    /// Shortest generator-index sequence reaching each element (BFS order,
    /// generators tried in order).
    pub words: Vec<Vec<usize>>,
}

/// Builds the monoid generated by `gens` under `mul` with neutral `unit`.
/// Elements are numbered in BFS order, so element 0 is the unit.
pub fn generate<T, F>(unit: T, gens: &[T], mul: F) -> Generated<T>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![unit.clone()];
    let mut words = vec![Vec::new()];
    index.insert(unit, 0);
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (g, gv) in gens.iter().enumerate() {
            let y = mul(&elements[i], gv);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    index.insert(y.clone(), id);
                    elements.push(y);
                    let mut w = words[i].clone();
                    w.push(g);
                    words.push(w);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        i += 1;
    }
    let n = elements.len();
    // x * y computed by running y's word from x through the right action
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = words[y].iter().fold(x, |acc, &g| right[acc][g]);
        }
    }
    let gen_images = gens.iter().map(|g| index[g]).collect();
    Generated {
        monoid: FiniteMonoid::from_trusted(n, table, 0),
        elements,
        gen_images,
        words,
    }
}
