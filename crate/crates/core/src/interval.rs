//! Finite prefix-free unions of cylinders Γ_x.
//!
//! An `IntervalSet` denotes the union of the cylinders of its member
//! words. Members are kept sorted and pairwise prefix-incomparable.
//! `normalize` additionally merges full sibling pairs (x0, x1 → x),
//! which makes denoted-set equality decidable by word-set equality.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::rational::{pow2, Rat};
use crate::word::Word;

#[derive(Clone, PartialEq, Eq)]
pub struct IntervalSet {
    words: Vec<Word>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { words: Vec::new() }
    }

    /// The whole space Ω, i.e. {λ}.
    pub fn full() -> Self {
        IntervalSet {
            words: vec![Word::empty()],
        }
    }

    /// Checked constructor: sorts, rejects duplicate or prefix-comparable words.
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        words.sort();
        for pair in words.windows(2) {
            if pair[0].is_prefix_of(&pair[1]) {
                return Err(CoreError::NotPrefixFree {
                    first: pair[0].clone(),
                    second: pair[1].clone(),
                });
            }
        }
        Ok(IntervalSet { words })
    }

    /// Canonicalizes an arbitrary word list into the prefix-free set
    /// denoting the same union: absorbed words (having a prefix in the
    /// list) are dropped, then full sibling pairs are merged bottom-up.
    pub fn normalize<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut sorted: Vec<Word> = words.into_iter().collect();
        sorted.sort();
        sorted.dedup();

        // In sorted order a prefix comes right before everything it absorbs,
        // so tracking the last kept word suffices.
        let mut kept: Vec<Word> = Vec::with_capacity(sorted.len());
        for w in sorted {
            if let Some(last) = kept.last() {
                if last.is_prefix_of(&w) {
                    continue;
                }
            }
            kept.push(w);
        }

        let mut set: BTreeSet<Word> = kept.into_iter().collect();
        // Merge siblings until fixpoint; each merge shortens total length.
        loop {
            let mut merged = None;
            for w in set.iter() {
                if !w.is_empty() && w.bit(w.len() - 1) {
                    let sib = w.sibling().expect("non-empty word has a sibling");
                    if set.contains(&sib) {
                        merged = Some((w.clone(), sib));
                        break;
                    }
                }
            }
            match merged {
                Some((one, zero)) => {
                    let parent = one.parent().expect("non-empty word has a parent");
                    set.remove(&one);
                    set.remove(&zero);
                    set.insert(parent);
                }
                None => break,
            }
        }

        IntervalSet {
            words: set.into_iter().collect(),
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// {ab : a ∈ self, b ∈ other}. For prefix-free inputs the product is
    /// prefix-free again, and its uniform measure is the exact product of
    /// the factors' measures.
    pub fn concat(&self, other: &IntervalSet) -> IntervalSet {
        let mut words = Vec::with_capacity(self.words.len() * other.words.len());
        for a in &self.words {
            for b in &other.words {
                words.push(a.concat(b));
            }
        }
        words.sort();
        IntervalSet { words }
    }

    /// Σ 2^{−l(x)} over members — the exact uniform measure of the union.
    pub fn uniform_measure(&self) -> Rat {
        self.words
            .iter()
            .map(|w| pow2(-(w.len() as i64)))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Some member is a prefix of `w` (so Γ_w lies inside the union).
    pub fn contains_prefix_of(&self, w: &Word) -> bool {
        self.words.iter().any(|m| m.is_prefix_of(w))
    }

    /// Membership of any ω extending `prefix`: `Some(true)` when decided
    /// inside, `Some(false)` when decided outside, `None` when the prefix
    /// is too short to decide.
    pub fn membership_from_prefix(&self, prefix: &Word) -> Option<bool> {
        if self.contains_prefix_of(prefix) {
            return Some(true);
        }
        if self.words.iter().any(|m| prefix.is_prefix_of(m)) {
            return None;
        }
        Some(false)
    }

    /// Denoted-subset test via canonical forms.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        let a = IntervalSet::normalize(self.words.iter().cloned());
        let b = IntervalSet::normalize(other.words.iter().cloned());
        a.words.iter().all(|w| b.contains_prefix_of(w))
    }

    pub fn denotes_same_set_as(&self, other: &IntervalSet) -> bool {
        IntervalSet::normalize(self.words.iter().cloned())
            == IntervalSet::normalize(other.words.iter().cloned())
    }

    /// Union, canonicalized.
    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::normalize(self.words.iter().chain(other.words.iter()).cloned())
    }

    /// A prefix-free cover of the complement Ω ∖ ∪Γ.
    pub fn complement_cover(&self) -> IntervalSet {
        let canon = IntervalSet::normalize(self.words.iter().cloned());
        let mut out = Vec::new();
        let mut stack = vec![Word::empty()];
        while let Some(node) = stack.pop() {
            if canon.words.binary_search(&node).is_ok() {
                continue; // fully inside
            }
            if canon.words.iter().any(|m| node.is_prefix_of(m)) {
                stack.push(node.child(false));
                stack.push(node.child(true));
            } else {
                out.push(node); // fully outside
            }
        }
        out.sort();
        IntervalSet { words: out }
    }

    /// Sorted, newline-separated word list (the serialization format).
    pub fn to_word_list(&self) -> String {
        self.words
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn normalize_absorbs() {
        let set = IntervalSet::normalize(words(&["0", "01"]));
        assert_eq!(set.words(), &[w("0")]);
    }

    #[test]
    fn normalize_empty() {
        assert!(IntervalSet::normalize(Vec::new()).is_empty());
    }

    #[test]
    fn normalize_merges_siblings_to_canonical_form() {
        // {00, 01, 1} denotes Ω, canonically {λ}.
        let set = IntervalSet::normalize(words(&["00", "01", "1"]));
        assert_eq!(set, IntervalSet::full());
    }

    #[test]
    fn normalize_preserves_denoted_set() {
        // Check by depth-3 cylinder enumeration.
        let raw = words(&["00", "01", "1"]);
        let set = IntervalSet::normalize(raw.clone());
        let raw_set = IntervalSet { words: raw };
        for cyl in Word::all_of_length(3) {
            assert_eq!(
                set.contains_prefix_of(&cyl),
                raw_set.words().iter().any(|m| m.is_prefix_of(&cyl)),
                "disagree on {cyl}"
            );
        }
    }

    #[test]
    fn new_rejects_prefix_comparable() {
        assert!(matches!(
            IntervalSet::new(words(&["0", "01"])),
            Err(CoreError::NotPrefixFree { .. })
        ));
    }

    #[test]
    fn concat_singletons() {
        let a = IntervalSet::new(words(&["0"])).unwrap();
        let b = IntervalSet::new(words(&["1"])).unwrap();
        assert_eq!(a.concat(&b).words(), &[w("01")]);
    }

    #[test]
    fn concat_enumerates_all_pairs_prefix_free() {
        let a = IntervalSet::new(words(&["0", "10"])).unwrap();
        let prod = a.concat(&a);
        assert_eq!(prod.words(), words(&["00", "010", "100", "1010"]).as_slice());
        // still prefix-free
        assert!(IntervalSet::new(prod.words().to_vec()).is_ok());
    }

    #[test]
    fn concat_identity_is_lambda() {
        let a = IntervalSet::full();
        let b = IntervalSet::new(words(&["0", "11"])).unwrap();
        assert_eq!(a.concat(&b), b);
        assert_eq!(b.concat(&a), b);
    }

    #[test]
    fn uniform_measure_sums_dyadics() {
        let set = IntervalSet::new(words(&["0", "10"])).unwrap();
        assert_eq!(set.uniform_measure(), rat(3, 4));
        assert_eq!(IntervalSet::full().uniform_measure(), rat(1, 1));
        assert_eq!(IntervalSet::empty().uniform_measure(), Rat::zero());
    }

    #[test]
    fn concat_measure_is_product() {
        let a = IntervalSet::new(words(&["0", "10"])).unwrap();
        let b = IntervalSet::new(words(&["11", "0"])).unwrap();
        assert_eq!(
            a.concat(&b).uniform_measure(),
            a.uniform_measure() * b.uniform_measure()
        );
    }

    #[test]
    fn membership_decisions() {
        let set = IntervalSet::new(words(&["01", "1"])).unwrap();
        assert_eq!(set.membership_from_prefix(&w("011")), Some(true));
        assert_eq!(set.membership_from_prefix(&w("00")), Some(false));
        assert_eq!(set.membership_from_prefix(&w("0")), None);
        assert_eq!(set.membership_from_prefix(&w("1")), Some(true));
    }

    #[test]
    fn complement_cover_partitions() {
        let set = IntervalSet::new(words(&["01", "1"])).unwrap();
        let comp = set.complement_cover();
        assert_eq!(comp.words(), &[w("00")]);
        let total = set.uniform_measure() + comp.uniform_measure();
        assert_eq!(total, rat(1, 1));
    }

    #[test]
    fn complement_of_full_and_empty() {
        assert!(IntervalSet::full().complement_cover().is_empty());
        assert_eq!(IntervalSet::empty().complement_cover(), IntervalSet::full());
    }

    #[test]
    fn subset_handles_split_cylinders() {
        let a = IntervalSet::new(words(&["00", "01"])).unwrap();
        let b = IntervalSet::new(words(&["0"])).unwrap();
        assert!(a.is_subset_of(&b));
        assert!(b.is_subset_of(&a));
        let c = IntervalSet::new(words(&["00"])).unwrap();
        assert!(c.is_subset_of(&a));
        assert!(!a.is_subset_of(&c));
    }
}
