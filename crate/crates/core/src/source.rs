//! Finite descriptions of infinite binary sequences.
//!
//! Genuinely random points are non-computable objects, so the library
//! works with sources that can produce any requested prefix: periodic
//! words, padded explicit prefixes, measure samplers with a fixed seed,
//! and raw bit-supplier callbacks (which may run out).

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::measure::CylinderMeasure;
use crate::word::Word;

type BitSupplier = Arc<dyn Fn(usize) -> Option<bool> + Send + Sync>;

#[derive(Clone)]
pub enum InfiniteSource {
    Periodic { word: Word },
    PaddedPrefix { word: Word, pad: bool },
    Sampled { measure: CylinderMeasure, seed: u64 },
    Stream { supply: BitSupplier },
}

impl InfiniteSource {
    pub fn periodic(word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(CoreError::EmptyPeriod);
        }
        Ok(InfiniteSource::Periodic { word })
    }

    pub fn padded(word: Word, pad: bool) -> Self {
        InfiniteSource::PaddedPrefix { word, pad }
    }

    pub fn sampled(measure: CylinderMeasure, seed: u64) -> Self {
        InfiniteSource::Sampled { measure, seed }
    }

    /// `supply(i)` yields the bit at 0-based index i, or `None` when the
    /// stream cannot go that far.
    pub fn stream<F: Fn(usize) -> Option<bool> + Send + Sync + 'static>(supply: F) -> Self {
        InfiniteSource::Stream {
            supply: Arc::new(supply),
        }
    }

    pub fn all_zero() -> Self {
        InfiniteSource::padded(Word::empty(), false)
    }

    /// The prefix ω^n of length n. Deterministic per description (and
    /// seed); only the stream kind can fail.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        match self {
            InfiniteSource::Periodic { word } => {
                Ok(Word::from_bits((0..n).map(|i| word.bit(i % word.len()))))
            }
            InfiniteSource::PaddedPrefix { word, pad } => Ok(Word::from_bits(
                (0..n).map(|i| if i < word.len() { word.bit(i) } else { *pad }),
            )),
            InfiniteSource::Sampled { measure, seed } => measure.sample_word(n, *seed),
            InfiniteSource::Stream { supply } => {
                let mut bits = Vec::with_capacity(n);
                for i in 0..n {
                    match supply(i) {
                        Some(b) => bits.push(b),
                        None => return Err(CoreError::StreamExhausted { index: i }),
                    }
                }
                Ok(Word::from_bits(bits))
            }
        }
    }

    /// Bit at 0-based index i (the paper's ω_{i+1}).
    pub fn bit(&self, i: usize) -> Result<bool> {
        Ok(self.prefix(i + 1)?.bit(i))
    }
}

impl fmt::Debug for InfiniteSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfiniteSource::Periodic { word } => write!(f, "periodic({word})"),
            InfiniteSource::PaddedPrefix { word, pad } => {
                write!(f, "prefix({word}, pad={})", u8::from(*pad))
            }
            InfiniteSource::Sampled { seed, .. } => write!(f, "sampled(seed={seed})"),
            InfiniteSource::Stream { .. } => write!(f, "stream(..)"),
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
    fn periodic_extension() {
        let src = InfiniteSource::periodic(w("01")).unwrap();
        assert_eq!(src.prefix(5).unwrap(), w("01010"));
        assert_eq!(src.prefix(0).unwrap(), Word::empty());
    }

    #[test]
    fn empty_period_rejected() {
        assert!(matches!(
            InfiniteSource::periodic(Word::empty()),
            Err(CoreError::EmptyPeriod)
        ));
    }

    #[test]
    fn padding_fills_past_the_word() {
        let src = InfiniteSource::padded(w("110"), false);
        assert_eq!(src.prefix(5).unwrap(), w("11000"));
    }

    #[test]
    fn sampled_prefixes_are_deterministic_and_nested() {
        let src = InfiniteSource::sampled(CylinderMeasure::uniform(), 77);
        let p3 = src.prefix(3).unwrap();
        assert_eq!(p3.len(), 3);
        assert_eq!(src.prefix(3).unwrap(), p3);
        let p8 = src.prefix(8).unwrap();
        assert!(p3.is_prefix_of(&p8));
    }

    #[test]
    fn prefixes_nest_for_every_kind() {
        let sources = vec![
            InfiniteSource::periodic(w("011")).unwrap(),
            InfiniteSource::padded(w("10"), true),
            InfiniteSource::sampled(CylinderMeasure::uniform(), 5),
            InfiniteSource::stream(|i| Some(i % 3 == 0)),
        ];
        for src in sources {
            for n in 0..12 {
                let a = src.prefix(n).unwrap();
                let b = src.prefix(n + 1).unwrap();
                assert!(a.is_prefix_of(&b), "{src:?} at n={n}");
            }
        }
    }

    #[test]
    fn stream_exhaustion_is_reported() {
        let src = InfiniteSource::stream(|i| if i < 4 { Some(true) } else { None });
        assert_eq!(src.prefix(4).unwrap(), w("1111"));
        assert!(matches!(
            src.prefix(5),
            Err(CoreError::StreamExhausted { index: 4 })
        ));
    }
}
