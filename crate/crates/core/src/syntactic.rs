//! Morphisms from the free monoid onto finite monoids, and syntactic
//! morphisms of regular languages.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::lang::{Alphabet, Dfa};
use crate::monoid::{
    generate, quotient_unchecked, syntactic_congruence_of_subset, Congruence, FiniteMonoid,
};

/// Surjective morphism `A* → M` given by letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMorphism {
    alphabet: Alphabet,
    target: FiniteMonoid,
    images: Vec<usize>,
    words: Vec<Vec<u8>>,
}

impl MonoidMorphism {
    pub fn new(alphabet: Alphabet, target: FiniteMonoid, images: Vec<usize>) -> Result<Self> {
        if images.len() != alphabet.len() || images.iter().any(|&x| x >= target.size()) {
            return Err(Error::Invalid("one image per letter is required".into()));
        }
        let words = shortest_words(&alphabet, &target, &images).ok_or(Error::NotSurjective)?;
        Ok(MonoidMorphism {
            alphabet,
            target,
            images,
            words,
        })
    }

    pub fn trivial(alphabet: &Alphabet) -> MonoidMorphism {
        MonoidMorphism::new(
            alphabet.clone(),
            FiniteMonoid::trivial(),
            vec![0; alphabet.len()],
        )
        .expect("trivial morphism is surjective")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn target(&self) -> &FiniteMonoid {
        &self.target
    }

    pub fn size(&self) -> usize {
        self.target.size()
    }

    /// Image of the letter with alphabet index `a`.
    pub fn letter_image(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the letter `c`.
    pub fn image_of(&self, c: u8) -> Result<usize> {
        let a = self
            .alphabet
            .index(c)
            .ok_or_else(|| Error::Invalid(format!("letter '{}' not in alphabet", c as char)))?;
        Ok(self.images[a])
    }

    pub fn eval(&self, w: &[u8]) -> Result<usize> {
        self.alphabet.check_word(w)?;
        Ok(self.eval_unchecked(w))
    }

    pub(crate) fn eval_unchecked(&self, w: &[u8]) -> usize {
        w.iter().fold(self.target.unit(), |acc, &c| {
            self.target
                .mul(acc, self.images[self.alphabet.index(c).expect("checked letter")])
        })
    }

    /// Shortest word (length-lexicographically least) mapped to `s`.
    pub fn word(&self, s: usize) -> &[u8] {
        &self.words[s]
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    /// `[·] ∘ α` for the projection onto `M / c`.
    pub fn project(&self, c: &Congruence) -> MonoidMorphism {
        let (q, proj) = quotient_unchecked(&self.target, c);
        let images = self.images.iter().map(|&x| proj[x]).collect();
        MonoidMorphism::new(self.alphabet.clone(), q, images)
            .expect("projection of a surjective morphism is surjective")
    }

    /// Morphism into the reversed monoid; it maps `w` to the image of its
    /// mirror.
    pub fn reverse(&self) -> MonoidMorphism {
        MonoidMorphism::new(self.alphabet.clone(), self.target.reverse(), self.images.clone())
            .expect("reversal keeps surjectivity")
    }

    /// Element names: shortest words, `1` for the unit.
    pub fn element_names(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    String::from_utf8_lossy(w).into_owned()
                }
            })
            .collect()
    }

    /// Target monoid carrying element names.
    pub fn named_target(&self) -> FiniteMonoid {
        self.target.clone().with_names(self.element_names())
    }
}

fn shortest_words(alphabet: &Alphabet, m: &FiniteMonoid, images: &[usize]) -> Option<Vec<Vec<u8>>> {
    let mut words: Vec<Option<Vec<u8>>> = vec![None; m.size()];
    words[m.unit()] = Some(Vec::new());
    let mut queue = VecDeque::from([m.unit()]);
    while let Some(x) = queue.pop_front() {
        for (a, &c) in alphabet.letters().iter().enumerate() {
            let y = m.mul(x, images[a]);
            if words[y].is_none() {
                let mut w = words[x].clone().expect("visited");
                w.push(c);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words.into_iter().collect()
}

/// A language given as `α⁻¹(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedLanguage {
    pub morphism: MonoidMorphism,
    pub accept: Vec<bool>,
}

impl RecognizedLanguage {
    pub fn accepts(&self, w: &[u8]) -> bool {
        self.morphism
            .eval(w)
            .is_ok_and(|s| self.accept[s])
    }

    pub fn accepting(&self) -> Vec<usize> {
        (0..self.accept.len()).filter(|&s| self.accept[s]).collect()
    }

    pub fn to_dfa(&self) -> Dfa {
        image_language(&self.morphism, &self.accept)
    }
}

/// Syntactic morphism of the language of `l`: the transition monoid of
/// the minimal automaton, collapsed by the syntactic congruence of the
/// accepting set.
pub fn syntactic_morphism(l: &Dfa) -> RecognizedLanguage {
    let d = l.minimize();
    let k = d.alphabet().len();
    let n = d.num_states();
    let gens: Vec<Vec<u32>> = (0..k)
        .map(|a| (0..n).map(|q| d.step(q, a) as u32).collect())
        .collect();
    let identity: Vec<u32> = (0..n as u32).collect();
    let gen = generate(identity, &gens, |f, g| f.iter().map(|&q| g[q as usize]).collect());
    let accept: Vec<bool> = gen
        .elements
        .iter()
        .map(|f| d.is_accepting(f[d.init()] as usize))
        .collect();
    let cong = syntactic_congruence_of_subset(&gen.monoid, &accept);
    let (q, proj) = quotient_unchecked(&gen.monoid, &cong);
    let mut f = vec![false; q.size()];
    for (s, &acc) in accept.iter().enumerate() {
        if acc {
            f[proj[s]] = true;
        }
    }
    let images = gen.gen_images.iter().map(|&x| proj[x]).collect();
    let morphism = MonoidMorphism::new(d.alphabet().clone(), q, images)
        .expect("transition monoid quotient is generated by letters");
    RecognizedLanguage { morphism, accept: f }
}

/// Minimal DFA of `α⁻¹(F)`.
pub fn image_language(alpha: &MonoidMorphism, f: &[bool]) -> Dfa {
    let m = alpha.target();
    let k = alpha.alphabet().len();
    let n = m.size();
    let delta = (0..n)
        .flat_map(|s| (0..k).map(move |a| (s, a)))
        .map(|(s, a)| m.mul(s, alpha.letter_image(a)))
        .collect();
    Dfa::from_parts(alpha.alphabet().clone(), n, delta, m.unit(), f.to_vec())
        .expect("monoid automaton is total")
        .minimize()
}

/// Surjective restriction of the product of the given morphisms, together
/// with the projections onto each factor.
pub fn joint_morphism(ms: &[MonoidMorphism]) -> Result<(MonoidMorphism, Vec<Vec<usize>>)> {
    let first = ms
        .first()
        .ok_or_else(|| Error::Invalid("joint_morphism needs at least one morphism".into()))?;
    let alphabet = first.alphabet().clone();
    for m in ms {
        alphabet.same_as(m.alphabet())?;
    }
    let unit: Vec<usize> = ms.iter().map(|m| m.target().unit()).collect();
    let gens: Vec<Vec<usize>> = (0..alphabet.len())
        .map(|a| ms.iter().map(|m| m.letter_image(a)).collect())
        .collect();
    let gen = generate(unit, &gens, |x, y| {
        ms.iter()
            .enumerate()
            .map(|(i, m)| m.target().mul(x[i], y[i]))
            .collect()
    });
    let projections = (0..ms.len())
        .map(|i| gen.elements.iter().map(|t| t[i]).collect())
        .collect();
    let morphism = MonoidMorphism::new(alphabet, gen.monoid, gen.gen_images)?;
    Ok((morphism, projections))
}
