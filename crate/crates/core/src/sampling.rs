//! Deterministic bit streams and exact Bernoulli draws.
//!
//! A draw with success probability p = a/b compares a uniform variate
//! against p one 64-bit block at a time, so the outcome distribution is
//! exactly p with no rounding. Thresholds can be cached per probability,
//! which makes the hot Markov-sampling loop a single `u64` compare per
//! step in the common case.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rat;

/// Seeded stream of random bits and 64-bit blocks.
pub struct BitRng {
    rng: ChaCha8Rng,
    buf: u64,
    avail: u32,
}

impl BitRng {
    pub fn from_seed(seed: u64) -> Self {
        BitRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: 0,
            avail: 0,
        }
    }

    /// Independent stream for a trial index under the same root seed.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial.wrapping_add(1));
        BitRng {
            rng,
            buf: 0,
            avail: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// One fair bit (buffered from 64-bit blocks).
    pub fn bit(&mut self) -> bool {
        if self.avail == 0 {
            self.buf = self.rng.next_u64();
            self.avail = 64;
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.avail -= 1;
        b
    }
}

/// True with probability exactly `p` (which must lie in [0, 1]).
pub fn bernoulli_exact(rng: &mut BitRng, p: &Rat) -> bool {
    let mut num = p.numer().clone();
    let den = p.denom().clone();
    debug_assert!(!num.is_negative() && num <= den);
    loop {
        if num.is_zero() {
            return false;
        }
        if num == den {
            return true;
        }
        // p = t/2^64 + rem/(den·2^64); U < p decides on the first block
        // unless the block equals t, in which case recurse on the tail.
        num <<= 64;
        let t: BigInt = &num / &den;
        let rem = num - &t * &den;
        let t64 = t.to_u64().expect("p < 1 keeps the block below 2^64");
        let r = rng.next_u64();
        if r < t64 {
            return true;
        }
        if r > t64 {
            return false;
        }
        num = rem;
    }
}

/// Precomputed first-block threshold for repeated draws of the same p.
#[derive(Clone, Debug)]
pub enum CachedBernoulli {
    Never,
    Always,
    Threshold { t64: u64, tail: Rat },
}

impl CachedBernoulli {
    pub fn new(p: &Rat) -> Self {
        if p.is_zero() {
            return CachedBernoulli::Never;
        }
        if p.is_one() {
            return CachedBernoulli::Always;
        }
        let num: BigInt = p.numer().clone() << 64;
        let den = p.denom().clone();
        let t: BigInt = &num / &den;
        let rem = num - &t * &den;
        CachedBernoulli::Threshold {
            t64: t.to_u64().expect("p < 1 keeps the block below 2^64"),
            tail: Rat::new(rem, den),
        }
    }

    #[inline]
    pub fn draw(&self, rng: &mut BitRng) -> bool {
        match self {
            CachedBernoulli::Never => false,
            CachedBernoulli::Always => true,
            CachedBernoulli::Threshold { t64, tail } => {
                let r = rng.next_u64();
                if r < *t64 {
                    true
                } else if r > *t64 {
                    false
                } else {
                    bernoulli_exact(rng, tail)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn degenerate_probabilities() {
        let mut rng = BitRng::from_seed(1);
        assert!(!bernoulli_exact(&mut rng, &Rat::zero()));
        assert!(bernoulli_exact(&mut rng, &Rat::one()));
        for _ in 0..50 {
            assert!(!CachedBernoulli::new(&Rat::zero()).draw(&mut rng));
            assert!(CachedBernoulli::new(&Rat::one()).draw(&mut rng));
        }
    }

    #[test]
    fn determinism_per_seed() {
        let draw = |seed| {
            let mut rng = BitRng::from_seed(seed);
            (0..64).map(|_| bernoulli_exact(&mut rng, &rat(1, 3))).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn cached_matches_exact_distributionally() {
        // Frequency check at 3σ for p = 5/16 over 4096 draws.
        let p = rat(5, 16);
        let cached = CachedBernoulli::new(&p);
        let mut rng = BitRng::from_seed(42);
        let n = 4096;
        let hits = (0..n).filter(|_| cached.draw(&mut rng)).count() as f64;
        let mean = n as f64 * 5.0 / 16.0;
        let sigma = (n as f64 * (5.0 / 16.0) * (11.0 / 16.0)).sqrt();
        assert!(
            (hits - mean).abs() < 3.0 * sigma,
            "hits {hits} outside 3σ of {mean}"
        );
    }

    #[test]
    fn trial_streams_differ() {
        let a: Vec<u64> = {
            let mut r = BitRng::for_trial(9, 0);
            (0..4).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = BitRng::for_trial(9, 1);
            (0..4).map(|_| r.next_u64()).collect()
        };
        assert_ne!(a, b);
    }
}
