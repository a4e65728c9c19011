use serde::{Deserialize, Serialize};

/// Caps and search bounds shared by the engines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Largest monoid on which subset enumeration is attempted.
    pub cap: usize,
    /// Largest `k` tried by the bounded ⋈-class searches.
    pub k_max: usize,
    /// Piece length used when PT is approximated by PTK.
    pub ptk: usize,
    /// Word-length bound for sampling oracles.
    pub word_length: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cap: 16,
            k_max: 4,
            ptk: 3,
            word_length: 8,
        }
    }
}
