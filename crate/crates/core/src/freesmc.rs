//! The free symmetric strict monoidal completion of a finite category.
//!
//! Objects are words of base objects. A morphism `A -> B` is a bijection
//! `perm` on positions together with a family of base morphisms
//! `family[i]: A[i] -> B[perm[i]]`. Composition is diagrammatic.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::fincat::FinCat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn single(c: usize) -> Word {
        Word(vec![c])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn check(&self, base: &FinCat) -> Result<(), SmcError> {
        match self.0.iter().find(|&&c| c >= base.num_objects()) {
            Some(&c) => Err(SmcError::LetterOutOfRange(c)),
            None => Ok(()),
        }
    }

    /// Concatenation, the monoidal product on objects.
    pub fn tensor(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn display<'a>(&'a self, base: &'a FinCat) -> impl fmt::Display + 'a {
        DisplayWord { word: self, base }
    }
}

struct DisplayWord<'a> {
    word: &'a Word,
    base: &'a FinCat,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.word.0.iter().map(|&c| self.base.object_name(c)).join(",")
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmcError {
    #[error("letter {0} is not an object of the base")]
    LetterOutOfRange(usize),
    #[error("words of lengths {0} and {1} cannot be related by a morphism")]
    LengthMismatch(usize, usize),
    #[error("position map is not a bijection")]
    NotPermutation,
    #[error("family member at position {0} has the wrong type")]
    FamilyTyping(usize),
    #[error("codomain of the first morphism differs from the domain of the second")]
    NotComposable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmcMor {
    pub dom: Word,
    pub cod: Word,
    pub perm: Vec<usize>,
    pub family: Vec<usize>,
}

impl SmcMor {
    pub fn new(
        base: &FinCat,
        dom: Word,
        cod: Word,
        perm: Vec<usize>,
        family: Vec<usize>,
    ) -> Result<SmcMor, SmcError> {
        dom.check(base)?;
        cod.check(base)?;
        let k = dom.len();
        if cod.len() != k {
            return Err(SmcError::LengthMismatch(k, cod.len()));
        }
        if perm.len() != k || family.len() != k || !is_permutation(&perm) {
            return Err(SmcError::NotPermutation);
        }
        for i in 0..k {
            let f = family[i];
            if f >= base.num_morphisms() || base.dom(f) != dom.0[i] || base.cod(f) != cod.0[perm[i]] {
                return Err(SmcError::FamilyTyping(i));
            }
        }
        Ok(SmcMor {
            dom,
            cod,
            perm,
            family,
        })
    }

    pub fn identity(base: &FinCat, word: &Word) -> SmcMor {
        SmcMor {
            dom: word.clone(),
            cod: word.clone(),
            perm: (0..word.len()).collect(),
            family: word.0.iter().map(|&c| base.identity(c)).collect(),
        }
    }

    pub fn is_identity(&self, base: &FinCat) -> bool {
        self.dom == self.cod
            && self.perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.family.iter().all(|&f| base.is_identity(f))
    }

    /// Diagrammatic composite `self ; other`.
    pub fn then(&self, base: &FinCat, other: &SmcMor) -> Result<SmcMor, SmcError> {
        if self.cod != other.dom {
            return Err(SmcError::NotComposable);
        }
        Ok(self.then_unchecked(base, other))
    }

    pub(crate) fn then_unchecked(&self, base: &FinCat, other: &SmcMor) -> SmcMor {
        let k = self.perm.len();
        let mut perm = Vec::with_capacity(k);
        let mut family = Vec::with_capacity(k);
        for i in 0..k {
            let j = self.perm[i];
            perm.push(other.perm[j]);
            family.push(base.comp(self.family[i], other.family[j]));
        }
        SmcMor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            perm,
            family,
        }
    }

    /// Block sum of position maps and concatenation of families.
    pub fn tensor(&self, other: &SmcMor) -> SmcMor {
        let k = self.perm.len();
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|&p| p + k));
        let mut family = self.family.clone();
        family.extend_from_slice(&other.family);
        SmcMor {
            dom: self.dom.tensor(&other.dom),
            cod: self.cod.tensor(&other.cod),
            perm,
            family,
        }
    }

    /// The symmetry `a ⊕ b -> b ⊕ a`: block swap with identity components.
    pub fn symmetry(base: &FinCat, a: &Word, b: &Word) -> SmcMor {
        let (ka, kb) = (a.len(), b.len());
        let perm = (0..ka).map(|i| i + kb).chain(0..kb).collect();
        let family = a.0.iter().chain(&b.0).map(|&c| base.identity(c)).collect();
        SmcMor {
            dom: a.tensor(b),
            cod: b.tensor(a),
            perm,
            family,
        }
    }

    /// Inverse, when every family member is invertible in the base.
    pub fn inverse(&self, base: &FinCat) -> Option<SmcMor> {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut family = vec![0; k];
        for i in 0..k {
            let j = self.perm[i];
            perm[j] = i;
            family[j] = base.inverse(self.family[i])?;
        }
        Some(SmcMor {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            perm,
            family,
        })
    }

    pub fn display<'a>(&'a self, base: &'a FinCat) -> impl fmt::Display + 'a {
        DisplayMor { mor: self, base }
    }
}

struct DisplayMor<'a> {
    mor: &'a SmcMor,
    base: &'a FinCat,
}

impl fmt::Display for DisplayMor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} perm({}) fam({})",
            self.mor.dom.display(self.base),
            self.mor.cod.display(self.base),
            self.mor.perm.iter().join(","),
            self.mor.family.iter().map(|&g| &self.base.morphism(g).name).join(",")
        )
    }
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// All permutations of `0..k` in lexicographic one-line order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    (0..k).permutations(k).collect()
}

/// Diagrammatic product: first `p`, then `q`.
pub fn perm_then(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

pub fn perm_inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// All words of length at most `max_len`, graded then lexicographic.
pub fn enumerate_words(base: &FinCat, max_len: usize) -> Vec<Word> {
    let n = base.num_objects();
    let mut out = vec![Word::empty()];
    for len in 1..=max_len {
        if n == 0 {
            break;
        }
        out.extend(
            (0..len)
                .map(|_| 0..n)
                .multi_cartesian_product()
                .map(Word),
        );
    }
    out
}

/// All morphisms `a -> b`, ordered by position map then family.
pub fn enumerate_homs(base: &FinCat, a: &Word, b: &Word) -> Vec<SmcMor> {
    let k = a.len();
    if b.len() != k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for perm in permutations(k) {
        let choices: Vec<&[usize]> = (0..k).map(|i| base.hom(a.0[i], b.0[perm[i]])).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        if k == 0 {
            out.push(SmcMor::identity(base, a));
            continue;
        }
        for family in choices.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
            out.push(SmcMor {
                dom: a.clone(),
                cod: b.clone(),
                perm: perm.clone(),
                family,
            });
        }
    }
    out
}

/// `Σ_π Π_i |hom(a_i, b_{π i})|`.
pub fn count_homs(base: &FinCat, a: &Word, b: &Word) -> usize {
    if a.len() != b.len() {
        return 0;
    }
    permutations(a.len())
        .iter()
        .map(|perm| {
            (0..a.len())
                .map(|i| base.hom(a.0[i], b.0[perm[i]]).len())
                .product::<usize>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_up_to_two_over_terminal() {
        let t = FinCat::terminal();
        let words = enumerate_words(&t, 2);
        assert_eq!(words, vec![Word(vec![]), Word(vec![0]), Word(vec![0, 0])]);
    }

    #[test]
    fn hom_counts() {
        let t = FinCat::terminal();
        let w2 = Word(vec![0, 0]);
        assert_eq!(enumerate_homs(&t, &w2, &w2).len(), 2);
        let z2 = FinCat::cyclic(2);
        let w1 = Word(vec![0]);
        let homs = enumerate_homs(&z2, &w1, &w1);
        assert_eq!(homs.len(), 2);
        assert_eq!(homs[0].family, vec![0]);
        assert_eq!(homs[1].family, vec![1]);
        for n in 0..=4 {
            let w = Word(vec![0; n]);
            let fact: usize = (1..=n).product();
            assert_eq!(enumerate_homs(&t, &w, &w).len(), fact);
            assert_eq!(count_homs(&t, &w, &w), fact);
        }
        assert!(enumerate_homs(&t, &w1, &w2).is_empty());
    }

    #[test]
    fn swap_twice_is_identity() {
        let d = FinCat::discrete(2);
        let w = Word(vec![0, 1]);
        let sw = SmcMor::symmetry(&d, &Word::single(0), &Word::single(1));
        let back = SmcMor::symmetry(&d, &Word::single(1), &Word::single(0));
        let comp = sw.then(&d, &back).unwrap();
        assert_eq!(comp, SmcMor::identity(&d, &w));
        assert_eq!(sw.perm, vec![1, 0]);
        assert!(sw.family.iter().all(|&f| d.is_identity(f)));
    }

    #[test]
    fn symmetry_with_unit_is_identity() {
        let z2 = FinCat::cyclic(2);
        let a = Word(vec![0, 0]);
        assert_eq!(SmcMor::symmetry(&z2, &Word::empty(), &a), SmcMor::identity(&z2, &a));
    }

    #[test]
    fn tensor_is_strict() {
        let a = Word(vec![0, 1]);
        assert_eq!(a.tensor(&Word::empty()), a);
        assert_eq!(Word::single(0).tensor(&Word::single(1)), Word(vec![0, 1]));
    }

    #[test]
    fn composition_mismatch() {
        let t = FinCat::terminal();
        let a = SmcMor::identity(&t, &Word(vec![0]));
        let b = SmcMor::identity(&t, &Word(vec![0, 0]));
        assert_eq!(a.then(&t, &b), Err(SmcError::NotComposable));
    }

    #[test]
    fn constructor_checks_family() {
        let s = FinCat::arrow();
        let ok = SmcMor::new(&s, Word(vec![0]), Word(vec![1]), vec![0], vec![2]);
        assert!(ok.is_ok());
        let bad = SmcMor::new(&s, Word(vec![1]), Word(vec![0]), vec![0], vec![2]);
        assert_eq!(bad, Err(SmcError::FamilyTyping(0)));
    }
}
