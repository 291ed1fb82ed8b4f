//! Freely reduced words over a symmetric generating set.
//!
//! Letters are packed as `index << 1 | inverted`, so the canonical letter
//! order is a < a^-1 < b < b^-1 < ... Words are kept freely reduced at all
//! times; concatenation reduces incrementally at the seam, which keeps
//! products of 10^5-letter words cheap.

use crate::error::{Error, Result};
use std::fmt;

pub type Letter = u8;

#[inline]
pub fn letter(gen: usize, inverted: bool) -> Letter {
    ((gen as u8) << 1) | (inverted as u8)
}

#[inline]
pub fn letter_inverse(l: Letter) -> Letter {
    l ^ 1
}

#[inline]
pub fn letter_gen(l: Letter) -> usize {
    (l >> 1) as usize
}

#[inline]
pub fn letter_is_inverted(l: Letter) -> bool {
    l & 1 == 1
}

pub fn letter_to_char(l: Letter) -> char {
    let base = if letter_is_inverted(l) { b'A' } else { b'a' };
    (base + l / 2) as char
}

/// A freely reduced word in the free group of some rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn single(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    /// Build from raw letters, freely reducing.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut w = Word::identity();
        for l in iter {
            w.push(l);
        }
        w
    }

    /// Parse `a`..`z` as generators, `A`..`Z` as their inverses.
    /// `e` is not special; use the empty string for the identity.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let mut w = Word::identity();
        for ch in s.chars() {
            if ch.is_whitespace() || ch == '.' || ch == '*' {
                continue;
            }
            let (gen, inv) = match ch {
                'a'..='z' => ((ch as u8 - b'a') as usize, false),
                'A'..='Z' => ((ch as u8 - b'A') as usize, true),
                _ => return Err(Error::UnknownGenerator(ch, rank)),
            };
            if gen >= rank {
                return Err(Error::UnknownGenerator(ch, rank));
            }
            w.push(letter(gen, inv));
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Append one letter, cancelling against the current last letter.
    pub fn push(&mut self, l: Letter) {
        if let Some(&last) = self.letters.last() {
            if last == letter_inverse(l) {
                self.letters.pop();
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&l| letter_inverse(l)).collect() }
    }

    /// Reduced product self * other.
    pub fn concat(&self, other: &Word) -> Word {
        // cancel at the seam without touching the untouched bulk
        let mut i = self.letters.len();
        let mut j = 0usize;
        while i > 0 && j < other.letters.len() && self.letters[i - 1] == letter_inverse(other.letters[j]) {
            i -= 1;
            j += 1;
        }
        let mut letters = Vec::with_capacity(i + other.letters.len() - j);
        letters.extend_from_slice(&self.letters[..i]);
        letters.extend_from_slice(&other.letters[j..]);
        Word { letters }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let n = n.unsigned_abs();
        // powers of a reduced word only cancel at the seam between the core copies;
        // going through the cyclic decomposition keeps this linear
        let (u, c) = base.cyclic_decompose();
        if c.is_empty() || n == 0 {
            return Word::identity();
        }
        let mut letters = Vec::with_capacity(u.len() * 2 + c.len() * n as usize);
        letters.extend_from_slice(&u.letters);
        for _ in 0..n {
            letters.extend_from_slice(&c.letters);
        }
        letters.extend_from_slice(&u.inverse().letters);
        // seams between u, c^n, u^-1 may cancel; reduce once
        Word::from_letters(letters)
    }

    /// Length of the common prefix with another reduced word.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Word-metric distance |self^-1 * other| without allocating.
    pub fn tree_distance(&self, other: &Word) -> usize {
        let cp = self.common_prefix_len(other);
        self.len() + other.len() - 2 * cp
    }

    /// Gromov product 2*<self, other>_base as an exact integer
    /// (the product itself may be a half-integer).
    pub fn doubled_gromov_product(&self, other: &Word, base: &Word) -> i64 {
        let dp = base.tree_distance(self) as i64;
        let dq = base.tree_distance(other) as i64;
        let dpq = self.tree_distance(other) as i64;
        dp + dq - dpq
    }

    /// Decompose as u * c * u^-1 with c cyclically reduced.
    pub fn cyclic_decompose(&self) -> (Word, Word) {
        let mut start = 0usize;
        let mut end = self.letters.len();
        while end - start >= 2 && self.letters[start] == letter_inverse(self.letters[end - 1]) {
            start += 1;
            end -= 1;
        }
        let u = Word { letters: self.letters[..start].to_vec() };
        let c = Word { letters: self.letters[start..end].to_vec() };
        (u, c)
    }

    /// Length of the cyclic reduction: the translation length on the tree.
    pub fn cyclic_len(&self) -> usize {
        self.cyclic_decompose().1.len()
    }

    /// Primitive root of the cyclic core: returns (root, k) with core = root^k.
    /// The root is a cyclically reduced word; k = 0 only for the identity.
    pub fn primitive_root(&self) -> (Word, usize) {
        let (_, c) = self.cyclic_decompose();
        let n = c.len();
        if n == 0 {
            return (Word::identity(), 0);
        }
        for p in 1..=n {
            if n % p != 0 {
                continue;
            }
            if (p..n).all(|i| c.letters[i] == c.letters[i % p]) {
                return (Word { letters: c.letters[..p].to_vec() }, n / p);
            }
        }
        unreachable!("p = n always divides");
    }

    /// Is this element a proper power (i.e. not primary)?
    pub fn is_proper_power(&self) -> bool {
        let (_, k) = self.primitive_root();
        k > 1
    }

    /// Conjugacy-class key: lexicographically minimal cyclic rotation of the
    /// cyclically reduced core.
    pub fn canonical_cyclic_key(&self) -> Word {
        let (_, c) = self.cyclic_decompose();
        let n = c.len();
        if n == 0 {
            return c;
        }
        let mut best: Option<Vec<Letter>> = None;
        for r in 0..n {
            let rot: Vec<Letter> = (0..n).map(|i| c.letters[(r + i) % n]).collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
        Word { letters: best.unwrap() }
    }

    /// Is `self` a (positive or negative) power of `root`?
    pub fn is_power_of(&self, root: &Word) -> bool {
        if self.is_empty() {
            return true;
        }
        if root.is_empty() {
            return false;
        }
        for sign in [1i64, -1] {
            let base = root.pow(sign);
            let mut acc = Word::identity();
            while acc.len() <= self.len() {
                if acc == *self {
                    return true;
                }
                acc = acc.concat(&base);
            }
            if acc == *self {
                return true;
            }
        }
        false
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for &l in &self.letters {
            write!(f, "{}", letter_to_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn reduce_cancellation() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("ab"), w("ab"));
        assert!(w("aA").is_empty());
    }

    #[test]
    fn unknown_generator_rejected() {
        assert!(Word::parse("ac", 2).is_err());
        assert!(Word::parse("a?", 2).is_err());
    }

    #[test]
    fn inverse_and_concat() {
        let u = w("abA");
        assert_eq!(u.concat(&u.inverse()), Word::identity());
        assert_eq!(w("ab").concat(&w("ba")), w("abba"));
        assert_eq!(w("ab").concat(&w("BA")), Word::identity());
    }

    #[test]
    fn distances() {
        assert_eq!(w("abab").len(), 4);
        assert_eq!(w("ab").tree_distance(&w("ba")), 4);
        assert_eq!(w("").tree_distance(&w("abab")), 4);
    }

    #[test]
    fn cyclic_reduction() {
        let (u, c) = w("Babab").cyclic_decompose();
        assert_eq!(u, w("B"));
        assert_eq!(c, w("aba"));
        assert_eq!(w("Babab").cyclic_len(), 3);
        assert_eq!(w("abaA").cyclic_len(), 2);
    }

    #[test]
    fn powers() {
        assert_eq!(w("ab").pow(3), w("ababab"));
        assert_eq!(w("ab").pow(-2), w("BABA"));
        assert_eq!(w("aBa").pow(2), w("aBaaBa"));
        assert_eq!(w("abA").pow(3), w("abbbA"));
        assert_eq!(w("ab").pow(0), Word::identity());
    }

    #[test]
    fn primitive_roots() {
        let (r, k) = w("abab").primitive_root();
        assert_eq!(r, w("ab"));
        assert_eq!(k, 2);
        assert!(w("abab").is_proper_power());
        assert!(!w("ab").is_proper_power());
        // conjugate of a power is a proper power
        assert!(w("Baab").is_proper_power());
        let (r, k) = w("Baab").primitive_root();
        assert_eq!(k, 2);
        assert_eq!(r, w("a"));
    }

    #[test]
    fn cyclic_key_conjugation_invariant() {
        let g = w("ab");
        let h = w("bAA");
        let conj = h.concat(&g).concat(&h.inverse());
        assert_eq!(conj.canonical_cyclic_key(), g.canonical_cyclic_key());
    }

    #[test]
    fn power_membership() {
        assert!(w("aaa").is_power_of(&w("a")));
        assert!(w("AAAA").is_power_of(&w("a")));
        assert!(!w("ab").is_power_of(&w("a")));
        assert!(w("").is_power_of(&w("ab")));
    }
}
