//! Computable probability measures on Ω given by exact cylinder values.
//!
//! Uniform and two-state Markov measures evaluate exactly; countable
//! mixtures with weights 2^{−i} evaluate to rational lower/upper bounds
//! of any requested width. Additivity P(x) = P(x0) + P(x1) and the
//! shift-preimage identity P(x) = P(0x) + P(1x) are checked by
//! depth-bounded cylinder enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::rational::{format_rat, pow2, rat, Rat};
use crate::sampling::{bernoulli_exact, BitRng, CachedBernoulli};
use crate::word::Word;

/// Two-state homogeneous Markov chain on {0, 1}: initial distribution
/// plus a symmetric flip probability for changing state.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSpec {
    pub initial0: Rat,
    pub initial1: Rat,
    pub flip: Rat,
}

impl MarkovSpec {
    pub fn new(initial0: Rat, initial1: Rat, flip: Rat) -> Result<Self> {
        if initial0.is_negative() || initial1.is_negative() {
            return Err(CoreError::InvalidParameter(
                "initial probabilities must be nonnegative".into(),
            ));
        }
        if &initial0 + &initial1 != Rat::one() {
            return Err(CoreError::InvalidParameter(format!(
                "initial probabilities must sum to 1, got {} + {}",
                format_rat(&initial0),
                format_rat(&initial1)
            )));
        }
        if flip.is_negative() || flip > Rat::one() {
            return Err(CoreError::InvalidParameter(format!(
                "flip probability must lie in [0, 1], got {}",
                format_rat(&flip)
            )));
        }
        Ok(MarkovSpec {
            initial0,
            initial1,
            flip,
        })
    }

    /// Initial (1/2, 1/2) with the given flip probability. Flips in
    /// [0, 1/2] are the exercised range; larger values are accepted.
    pub fn symmetric(flip: Rat) -> Result<Self> {
        MarkovSpec::new(rat(1, 2), rat(1, 2), flip)
    }

    /// Frozen chain: never flips, so all mass sits on 0^∞ and 1^∞.
    pub fn frozen() -> Self {
        MarkovSpec {
            initial0: rat(1, 2),
            initial1: rat(1, 2),
            flip: Rat::zero(),
        }
    }

    /// Chain rule over the bits of x.
    pub fn eval(&self, x: &Word) -> Rat {
        if x.is_empty() {
            return Rat::one();
        }
        let stay = Rat::one() - &self.flip;
        let mut p = if x.bit(0) {
            self.initial1.clone()
        } else {
            self.initial0.clone()
        };
        for s in 1..x.len() {
            p *= if x.bit(s) != x.bit(s - 1) {
                &self.flip
            } else {
                &stay
            };
        }
        p
    }

    /// P{next = 1 | current}, the conditional used by exact sampling.
    pub fn transition_to_one(&self, current: bool) -> Rat {
        if current {
            Rat::one() - &self.flip
        } else {
            self.flip.clone()
        }
    }
}

/// Rule producing the i-th mixture component (i ≥ 1).
#[derive(Clone)]
pub enum ComponentRule {
    /// α_i = 2^{−k(i)} where present in the table, else α_i = 0; every
    /// component starts from (1/2, 1/2).
    AlphaTable(BTreeMap<u64, u64>),
    /// Explicit leading components; indices past the end are frozen.
    Explicit(Vec<MarkovSpec>),
}

impl ComponentRule {
    pub fn spec(&self, i: u64) -> MarkovSpec {
        match self {
            ComponentRule::AlphaTable(table) => {
                let flip = match table.get(&i) {
                    Some(&k) => pow2(-(k as i64)),
                    None => Rat::zero(),
                };
                MarkovSpec {
                    initial0: rat(1, 2),
                    initial1: rat(1, 2),
                    flip,
                }
            }
            ComponentRule::Explicit(list) => {
                if i >= 1 && (i as usize) <= list.len() {
                    list[i as usize - 1].clone()
                } else {
                    MarkovSpec::frozen()
                }
            }
        }
    }
}

impl fmt::Debug for ComponentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentRule::AlphaTable(t) => f.debug_tuple("AlphaTable").field(t).finish(),
            ComponentRule::Explicit(l) => f.debug_tuple("Explicit").field(&l.len()).finish(),
        }
    }
}

type CustomEval = Arc<dyn Fn(&Word) -> Rat + Send + Sync>;

/// A computable measure presented through its cylinder values.
#[derive(Clone)]
pub enum CylinderMeasure {
    Uniform,
    Markov(MarkovSpec),
    /// P(x) = Σ_{i≥1} 2^{−i} P_i(x), evaluated to bounds of width ≤ precision.
    Mixture {
        components: ComponentRule,
        precision: Rat,
    },
    /// Arbitrary exact evaluator; used for hand-built and negative-control
    /// measures, with no structural guarantees.
    Custom(CustomEval),
}

impl fmt::Debug for CylinderMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CylinderMeasure::Uniform => write!(f, "Uniform"),
            CylinderMeasure::Markov(s) => f.debug_tuple("Markov").field(s).finish(),
            CylinderMeasure::Mixture {
                components,
                precision,
            } => f
                .debug_struct("Mixture")
                .field("components", components)
                .field("precision", &format_rat(precision))
                .finish(),
            CylinderMeasure::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// L(Γ_x) = 2^{−l(x)}.
pub fn eval_uniform(x: &Word) -> Rat {
    pow2(-(x.len() as i64))
}

/// Truncation rank for a mixture evaluated to width ≤ ε: the first K
/// with 2^{−K} ≤ ε.
pub fn mixture_truncation_rank(eps: &Rat) -> u64 {
    let mut k = 0u64;
    let mut w = Rat::one();
    while &w > eps {
        w /= rat(2, 1);
        k += 1;
    }
    k
}

impl CylinderMeasure {
    pub fn uniform() -> Self {
        CylinderMeasure::Uniform
    }

    pub fn markov(spec: MarkovSpec) -> Self {
        CylinderMeasure::Markov(spec)
    }

    pub fn mixture(components: ComponentRule, precision: Rat) -> Result<Self> {
        if !precision.is_positive() {
            return Err(CoreError::InvalidParameter(
                "mixture precision must be positive".into(),
            ));
        }
        Ok(CylinderMeasure::Mixture {
            components,
            precision,
        })
    }

    pub fn custom<F: Fn(&Word) -> Rat + Send + Sync + 'static>(eval: F) -> Self {
        CylinderMeasure::Custom(Arc::new(eval))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, CylinderMeasure::Mixture { .. })
    }

    /// Exact cylinder value for the exact kinds.
    pub fn eval_exact(&self, x: &Word) -> Result<Rat> {
        match self {
            CylinderMeasure::Uniform => Ok(eval_uniform(x)),
            CylinderMeasure::Markov(spec) => Ok(spec.eval(x)),
            CylinderMeasure::Custom(eval) => Ok(eval(x)),
            CylinderMeasure::Mixture { .. } => Err(CoreError::NotExact),
        }
    }

    /// Rational bounds [lower, upper] containing P(x) with
    /// upper − lower ≤ eps. Exact kinds return a point interval.
    pub fn eval_bounds(&self, x: &Word, eps: &Rat) -> (Rat, Rat) {
        match self {
            CylinderMeasure::Mixture { components, .. } => {
                let k = mixture_truncation_rank(eps);
                let mut lower = Rat::zero();
                for i in 1..=k {
                    lower += pow2(-(i as i64)) * components.spec(i).eval(x);
                }
                let upper = &lower + pow2(-(k as i64));
                (lower, upper)
            }
            _ => {
                let v = self.eval_exact(x).expect("exact kind");
                (v.clone(), v)
            }
        }
    }

    /// Bounds at the measure's own declared precision (exact kinds: point).
    pub fn eval_default_bounds(&self, x: &Word) -> (Rat, Rat) {
        match self {
            CylinderMeasure::Mixture { precision, .. } => {
                let eps = precision.clone();
                self.eval_bounds(x, &eps)
            }
            _ => self.eval_bounds(x, &Rat::one()),
        }
    }

    /// Verifies P(x) = P(x0) + P(x1) for all words up to length `depth`
    /// (exactly for exact kinds, within bounds overlap for mixtures).
    pub fn check_additivity(&self, depth: usize) -> ConsistencyReport {
        self.check_split(depth, SplitKind::Children)
    }

    /// Verifies the shift-preimage identity P(x) = P(0x) + P(1x) for all
    /// words up to length `depth` — stationarity at cylinder level.
    pub fn check_stationarity(&self, depth: usize) -> ConsistencyReport {
        self.check_split(depth, SplitKind::ShiftPreimage)
    }

    fn check_split(&self, depth: usize, kind: SplitKind) -> ConsistencyReport {
        let mut checked = 0usize;
        for len in 0..=depth {
            for x in Word::all_of_length(len) {
                checked += 1;
                let (left, right) = match kind {
                    SplitKind::Children => (x.child(false), x.child(true)),
                    SplitKind::ShiftPreimage => {
                        let mut zero = Word::from_bits([false]);
                        zero = zero.concat(&x);
                        let mut one = Word::from_bits([true]);
                        one = one.concat(&x);
                        (zero, one)
                    }
                };
                if self.is_exact() {
                    let whole = self.eval_exact(&x).expect("exact kind");
                    let parts = self.eval_exact(&left).expect("exact kind")
                        + self.eval_exact(&right).expect("exact kind");
                    if whole != parts {
                        return ConsistencyReport {
                            passed: false,
                            witness: Some(x),
                            checked,
                            detail: format!(
                                "{} vs {}",
                                format_rat(&whole),
                                format_rat(&parts)
                            ),
                        };
                    }
                } else {
                    // Split the precision so the two intervals must overlap
                    // whenever the identity holds.
                    let (wl, wu) = self.eval_default_bounds(&x);
                    let (ll, lu) = self.eval_default_bounds(&left);
                    let (rl, ru) = self.eval_default_bounds(&right);
                    let sum_l = ll + rl;
                    let sum_u = lu + ru;
                    if sum_l > wu || wl > sum_u {
                        return ConsistencyReport {
                            passed: false,
                            witness: Some(x),
                            checked,
                            detail: format!(
                                "[{}, {}] vs [{}, {}]",
                                format_rat(&wl),
                                format_rat(&wu),
                                format_rat(&sum_l),
                                format_rat(&sum_u)
                            ),
                        };
                    }
                }
            }
        }
        ConsistencyReport {
            passed: true,
            witness: None,
            checked,
            detail: String::new(),
        }
    }

    /// Samples a length-n word bit by bit with the exact conditional
    /// probability P(x1)/P(x); mixtures first draw the component index
    /// with weight 2^{−i} and then sample that component.
    pub fn sample_word(&self, n: usize, seed: u64) -> Result<Word> {
        let mut rng = BitRng::from_seed(seed);
        self.sample_word_with(n, &mut rng)
    }

    pub fn sample_word_with(&self, n: usize, rng: &mut BitRng) -> Result<Word> {
        match self {
            CylinderMeasure::Uniform => {
                Ok(Word::from_bits((0..n).map(|_| rng.bit())))
            }
            CylinderMeasure::Markov(spec) => Ok(sample_markov(spec, n, rng)),
            CylinderMeasure::Mixture { components, .. } => {
                // P(component = i) = 2^{−i}: index of the first heads.
                let mut i = 1u64;
                while !rng.bit() {
                    i += 1;
                }
                Ok(sample_markov(&components.spec(i), n, rng))
            }
            CylinderMeasure::Custom(eval) => {
                let mut x = Word::empty();
                for _ in 0..n {
                    let px = eval(&x);
                    if px.is_zero() {
                        return Err(CoreError::ZeroCylinder { prefix: x });
                    }
                    let p1 = eval(&x.child(true)) / px;
                    let b = bernoulli_exact(rng, &p1);
                    x.push(b);
                }
                Ok(x)
            }
        }
    }
}

enum SplitKind {
    Children,
    ShiftPreimage,
}

/// Outcome of an additivity or stationarity sweep.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub witness: Option<Word>,
    pub checked: usize,
    pub detail: String,
}

/// Chain sampling: first bit from the initial law, later bits flip the
/// previous one with probability `flip`. This draws each bit with the
/// exact conditional P(x1)/P(x).
pub fn sample_markov(spec: &MarkovSpec, n: usize, rng: &mut BitRng) -> Word {
    if n == 0 {
        return Word::empty();
    }
    let init1 = CachedBernoulli::new(&spec.initial1);
    let flip = CachedBernoulli::new(&spec.flip);
    let mut bits = Vec::with_capacity(n);
    let mut current = init1.draw(rng);
    bits.push(current);
    for _ in 1..n {
        if flip.draw(rng) {
            current = !current;
        }
        bits.push(current);
    }
    Word::from_bits(bits)
}
