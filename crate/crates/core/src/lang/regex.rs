use std::collections::BTreeSet;
use std::fmt;

use super::LangError;

/// Regular expression over lowercase ASCII letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Lit(u8),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

impl Regex {
    pub fn lit(c: u8) -> Regex {
        Regex::Lit(c)
    }

    pub fn union(l: Regex, r: Regex) -> Regex {
        Regex::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Regex, r: Regex) -> Regex {
        Regex::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Box::new(r))
    }

    pub fn plus(r: Regex) -> Regex {
        Regex::Plus(Box::new(r))
    }

    /// Left-nested union of all items; `@` when empty.
    pub fn union_all<I: IntoIterator<Item = Regex>>(items: I) -> Regex {
        items
            .into_iter()
            .reduce(Regex::union)
            .unwrap_or(Regex::Empty)
    }

    /// Left-nested concatenation of all items; `%` when empty.
    pub fn concat_all<I: IntoIterator<Item = Regex>>(items: I) -> Regex {
        items
            .into_iter()
            .reduce(Regex::concat)
            .unwrap_or(Regex::Epsilon)
    }

    /// Letters occurring in the expression.
    pub fn letters(&self) -> BTreeSet<u8> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<u8>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Lit(c) => {
                out.insert(*c);
            }
            Regex::Union(l, r) | Regex::Concat(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
            Regex::Star(r) | Regex::Plus(r) => r.collect_letters(out),
        }
    }

    /// Backtracking-free matcher working on sets of end offsets. Used as an
    /// independent reference against compiled automata.
    pub fn matches(&self, word: &[u8]) -> bool {
        self.ends(word, 0).contains(&word.len())
    }

    fn ends(&self, word: &[u8], start: usize) -> BTreeSet<usize> {
        match self {
            Regex::Empty => BTreeSet::new(),
            Regex::Epsilon => BTreeSet::from([start]),
            Regex::Lit(c) => {
                if word.get(start) == Some(c) {
                    BTreeSet::from([start + 1])
                } else {
                    BTreeSet::new()
                }
            }
            Regex::Union(l, r) => {
                let mut out = l.ends(word, start);
                out.extend(r.ends(word, start));
                out
            }
            Regex::Concat(l, r) => l
                .ends(word, start)
                .into_iter()
                .flat_map(|m| r.ends(word, m))
                .collect(),
            Regex::Star(r) => {
                let mut out = BTreeSet::from([start]);
                let mut frontier = vec![start];
                while let Some(p) = frontier.pop() {
                    for e in r.ends(word, p) {
                        if out.insert(e) {
                            frontier.push(e);
                        }
                    }
                }
                out
            }
            Regex::Plus(r) => {
                let mut out = BTreeSet::new();
                let mut frontier: Vec<usize> = r.ends(word, start).into_iter().collect();
                out.extend(frontier.iter().copied());
                while let Some(p) = frontier.pop() {
                    for e in r.ends(word, p) {
                        if out.insert(e) {
                            frontier.push(e);
                        }
                    }
                }
                out
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(_) | Regex::Plus(_) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Regex::Empty => write!(f, "@")?,
            Regex::Epsilon => write!(f, "%")?,
            Regex::Lit(c) => write!(f, "{}", *c as char)?,
            // operators parse left-associatively, so a right operand of the
            // same kind needs brackets to round-trip
            Regex::Union(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, "|")?;
                r.fmt_prec(f, 1)?;
            }
            Regex::Concat(l, r) => {
                l.fmt_prec(f, 1)?;
                r.fmt_prec(f, 2)?;
            }
            Regex::Star(r) => {
                r.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
            Regex::Plus(r) => {
                r.fmt_prec(f, 3)?;
                write!(f, "+")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::str::FromStr for Regex {
    type Err = LangError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_regex(s)
    }
}

/// Parses the regex grammar: letters, `|`, juxtaposition, postfix `*`/`+`,
/// `%` for the empty word, `@` for the empty language. Whitespace is ignored.
pub fn parse_regex(text: &str) -> Result<Regex, LangError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let r = p.union()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> LangError {
        LangError::Syntax {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Regex, LangError> {
        let mut left = self.concat()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let right = self.concat()?;
            left = Regex::union(left, right);
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex, LangError> {
        let mut left = self.postfix()?;
        while let Some(c) = self.peek() {
            if c.is_ascii_lowercase() || c == b'(' || c == b'%' || c == b'@' {
                let right = self.postfix()?;
                left = Regex::concat(left, right);
            } else {
                break;
            }
        }
        Ok(left)
    }

    fn postfix(&mut self) -> Result<Regex, LangError> {
        let mut r = self.atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    r = Regex::star(r);
                }
                Some(b'+') => {
                    self.pos += 1;
                    r = Regex::plus(r);
                }
                _ => return Ok(r),
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, LangError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(Regex::Lit(c))
            }
            Some(b'%') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some(b'@') => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            Some(b'(') => {
                self.pos += 1;
                let r = self.union()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(_) => Err(self.error("expected a letter, '%', '@' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
