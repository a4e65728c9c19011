pub mod dfa;
mod nfa;
pub mod regex;
pub mod word;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dfa::{combine, compile, compile_over, quotient, BoolOp, Dfa, Side};
pub use regex::{parse_regex, Regex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },
    #[error("letter '{letter}' is not in alphabet {alphabet}")]
    UnknownLetter { letter: char, alphabet: String },
    #[error("malformed DFA text at line {line}: {message}")]
    DfaFormat { line: usize, message: String },
}

/// A finite alphabet of lowercase letters, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet(Vec<u8>);

impl Alphabet {
    pub fn new<I: IntoIterator<Item = u8>>(letters: I) -> Alphabet {
        let set: BTreeSet<u8> = letters.into_iter().collect();
        Alphabet(set.into_iter().collect())
    }

    /// Parses a string such as `"abc"`.
    pub fn parse(s: &str) -> Result<Alphabet, LangError> {
        let mut set = BTreeSet::new();
        for (i, c) in s.bytes().enumerate() {
            if c.is_ascii_whitespace() || c == b',' {
                continue;
            }
            if !c.is_ascii_lowercase() {
                return Err(LangError::Syntax {
                    offset: i,
                    message: "alphabet letters must be a-z".into(),
                });
            }
            set.insert(c);
        }
        Ok(Alphabet(set.into_iter().collect()))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, c: u8) -> Option<usize> {
        self.0.binary_search(&c).ok()
    }

    pub fn contains(&self, c: u8) -> bool {
        self.index(c).is_some()
    }

    pub fn check_word(&self, w: &[u8]) -> Result<(), LangError> {
        match w.iter().find(|c| !self.contains(**c)) {
            Some(&c) => Err(LangError::UnknownLetter {
                letter: c as char,
                alphabet: self.to_string(),
            }),
            None => Ok(()),
        }
    }

    pub fn same_as(&self, other: &Alphabet) -> Result<(), LangError> {
        if self == other {
            Ok(())
        } else {
            Err(LangError::AlphabetMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.0))
    }
}
