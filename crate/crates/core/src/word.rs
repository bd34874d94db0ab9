//! Finite binary words.
//!
//! Words serialize as ASCII `0`/`1` strings; the empty word renders as
//! the empty string. The derived ordering is lexicographic with a
//! prefix sorting before its extensions, which the interval-set
//! normalization relies on.

use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Word {
            bits: bits.into_iter().collect(),
        }
    }

    /// Word of length `len` whose bits spell `index` most significant first.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "index-based words are limited to 64 bits");
        let bits = (0..len)
            .map(|i| (index >> (len - 1 - i)) & 1 == 1)
            .collect();
        Word { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Word { bits }
    }

    pub fn child(&self, b: bool) -> Word {
        let mut bits = self.bits.clone();
        bits.push(b);
        Word { bits }
    }

    /// The word with the last bit flipped, if any.
    pub fn sibling(&self) -> Option<Word> {
        let mut bits = self.bits.clone();
        let last = bits.pop()?;
        bits.push(!last);
        Some(Word { bits })
    }

    pub fn parent(&self) -> Option<Word> {
        if self.bits.is_empty() {
            return None;
        }
        Some(Word {
            bits: self.bits[..self.bits.len() - 1].to_vec(),
        })
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    /// First `n` bits (must be available).
    pub fn truncated(&self, n: usize) -> Word {
        Word {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// Bits from position `k` on (empty when `k` exceeds the length).
    pub fn suffix_from(&self, k: usize) -> Word {
        Word {
            bits: self.bits.get(k..).unwrap_or(&[]).to_vec(),
        }
    }

    /// All 2^len words of the given length, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len <= 63, "exhaustive enumeration is limited to depth 63");
        (0..(1u64 << len)).map(move |i| Word::from_index(i, len))
    }
}

impl FromStr for Word {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(CoreError::InvalidWordChar(other)),
            }
        }
        Ok(Word { bits })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    /// Same `0101` form as Display, with λ for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            write!(f, "\u{3bb}")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn empty_word_has_length_zero() {
        assert_eq!(Word::empty().len(), 0);
        assert_eq!(w(""), Word::empty());
    }

    #[test]
    fn concat_is_associative() {
        let (a, b, c) = (w("01"), w("1"), w("001"));
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(Word::empty().concat(&a), a);
        assert_eq!(a.concat(&Word::empty()), a);
    }

    #[test]
    fn prefix_relation() {
        assert!(w("0").is_prefix_of(&w("01")));
        assert!(w("").is_prefix_of(&w("1")));
        assert!(!w("01").is_prefix_of(&w("0")));
        assert!(!w("1").is_prefix_of(&w("01")));
        assert!(w("01").is_prefix_of(&w("01")));
    }

    #[test]
    fn ordering_puts_prefix_first() {
        let mut v = vec![w("1"), w("01"), w("0"), w("00"), w("")];
        v.sort();
        let rendered: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, vec!["", "0", "00", "01", "1"]);
    }

    #[test]
    fn from_index_counts_in_binary() {
        let all: Vec<String> = Word::all_of_length(2).map(|x| x.to_string()).collect();
        assert_eq!(all, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn rejects_bad_characters() {
        assert!(matches!(
            "01x".parse::<Word>(),
            Err(CoreError::InvalidWordChar('x'))
        ));
    }

    #[test]
    fn suffix_and_truncate() {
        assert_eq!(w("10110").suffix_from(1), w("0110"));
        assert_eq!(w("10110").suffix_from(7), Word::empty());
        assert_eq!(w("10110").truncated(2), w("10"));
    }
}
