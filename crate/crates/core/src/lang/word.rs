//! Words as byte strings over the alphabet, with the position model
//! `0..=|w|+1` where `0` and `|w|+1` are unlabeled endpoints.

use super::Alphabet;

/// Label of position `i` (1-based). Panics on endpoints.
pub fn label(w: &[u8], i: usize) -> u8 {
    assert!(i >= 1 && i <= w.len(), "position {i} is not labeled");
    w[i - 1]
}

/// Infix `w(i, j)`: letters strictly between positions `i < j`.
pub fn infix(w: &[u8], i: usize, j: usize) -> &[u8] {
    assert!(i < j && j <= w.len() + 1, "bad infix ({i},{j})");
    &w[i..j - 1]
}

/// All words of length exactly `n`, in length-lexicographic order.
pub fn words_of_len(alphabet: &Alphabet, n: usize) -> Vec<Vec<u8>> {
    let letters = alphabet.letters();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// All words of length at most `n`, shortest first.
pub fn words_up_to(alphabet: &Alphabet, n: usize) -> Vec<Vec<u8>> {
    (0..=n).flat_map(|l| words_of_len(alphabet, l)).collect()
}

pub fn show(w: &[u8]) -> String {
    if w.is_empty() {
        "%".to_string()
    } else {
        String::from_utf8_lossy(w).into_owned()
    }
}

pub fn reversed(w: &[u8]) -> Vec<u8> {
    w.iter().rev().copied().collect()
}
