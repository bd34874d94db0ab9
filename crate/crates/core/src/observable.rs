//! Simple observables f: Ω → ℝ and time averages along trajectories.
//!
//! A `SimpleFunction` takes constant rational values on the cylinders of
//! a finite prefix-free cover of Ω (Kraft sum exactly 1). All exact
//! engines work on simple functions; general computable observables are
//! handled through `ApproxSchedule` by fixing an accuracy and taking the
//! corresponding simple lower approximant.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::measure::CylinderMeasure;
use crate::rational::{format_rat, pow2, rat_int, Rat};
use crate::transform::Trajectory;
use crate::word::Word;

#[derive(Clone, PartialEq)]
pub struct SimpleFunction {
    /// Sorted by word; the words are a prefix-free cover of Ω.
    pieces: Vec<(Word, Rat)>,
}

impl SimpleFunction {
    /// Validates that the piece words form a prefix-free cover (Kraft sum
    /// exactly 1) before accepting.
    pub fn new(mut pieces: Vec<(Word, Rat)>) -> Result<Self> {
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in pieces.windows(2) {
            if pair[0].0.is_prefix_of(&pair[1].0) {
                return Err(CoreError::NotPrefixFree {
                    first: pair[0].0.clone(),
                    second: pair[1].0.clone(),
                });
            }
        }
        let kraft = pieces
            .iter()
            .map(|(w, _)| pow2(-(w.len() as i64)))
            .fold(Rat::zero(), |a, b| a + b);
        if kraft != rat_int(1) {
            return Err(CoreError::NotACover {
                kraft_sum: format_rat(&kraft),
            });
        }
        Ok(SimpleFunction { pieces })
    }

    pub fn constant(c: Rat) -> Self {
        SimpleFunction {
            pieces: vec![(Word::empty(), c)],
        }
    }

    /// f(ω) = ω₁.
    pub fn first_bit() -> Self {
        SimpleFunction {
            pieces: vec![
                ("0".parse().unwrap(), Rat::zero()),
                ("1".parse().unwrap(), rat_int(1)),
            ],
        }
    }

    /// Characteristic function of a prefix-free union of cylinders.
    pub fn indicator(set: &crate::interval::IntervalSet) -> Self {
        let comp = set.complement_cover();
        let mut pieces: Vec<(Word, Rat)> = set
            .words()
            .iter()
            .map(|w| (w.clone(), rat_int(1)))
            .chain(comp.words().iter().map(|w| (w.clone(), Rat::zero())))
            .collect();
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        SimpleFunction { pieces }
    }

    pub fn pieces(&self) -> &[(Word, Rat)] {
        &self.pieces
    }

    /// Maximal piece-word length: how many leading bits determine f.
    pub fn depth(&self) -> usize {
        self.pieces.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    /// Value on the unique piece whose word prefixes the given ω-prefix.
    pub fn eval_prefix(&self, prefix: &Word) -> Result<Rat> {
        for (w, r) in &self.pieces {
            if w.is_prefix_of(prefix) {
                return Ok(r.clone());
            }
        }
        Err(CoreError::PrefixTooShort {
            have: prefix.len(),
        })
    }

    pub fn sup_norm(&self) -> Rat {
        self.pieces
            .iter()
            .map(|(_, r)| r.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    pub fn min_value(&self) -> Rat {
        self.pieces
            .iter()
            .map(|(_, r)| r.clone())
            .min()
            .unwrap_or_else(Rat::zero)
    }

    pub fn max_value(&self) -> Rat {
        self.pieces
            .iter()
            .map(|(_, r)| r.clone())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Same cover, transformed values.
    pub fn map<F: Fn(&Rat) -> Rat>(&self, f: F) -> Self {
        SimpleFunction {
            pieces: self.pieces.iter().map(|(w, r)| (w.clone(), f(r))).collect(),
        }
    }

    /// Pointwise combination on the common refinement of the two covers.
    pub fn combine<F: Fn(&Rat, &Rat) -> Rat>(&self, other: &SimpleFunction, op: F) -> Self {
        let mut pieces = Vec::new();
        for (x, r) in &self.pieces {
            for (y, s) in &other.pieces {
                if x.is_prefix_of(y) {
                    pieces.push((y.clone(), op(r, s)));
                } else if y.is_prefix_of(x) && x != y {
                    pieces.push((x.clone(), op(r, s)));
                }
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        SimpleFunction { pieces }
    }

    pub fn add(&self, other: &SimpleFunction) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SimpleFunction) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Subtracts a constant (used to center an observable).
    pub fn centered(&self, c: &Rat) -> Self {
        self.map(|r| r - c)
    }

    /// Every piece expanded to exactly depth d (d ≥ current depth).
    pub fn refine_to_depth(&self, d: usize) -> Self {
        let mut pieces = Vec::new();
        for (w, r) in &self.pieces {
            debug_assert!(w.len() <= d);
            for ext in Word::all_of_length(d - w.len()) {
                pieces.push((w.concat(&ext), r.clone()));
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        SimpleFunction { pieces }
    }

    /// Merges equal-valued sibling pieces until no pair remains.
    pub fn compress(&self) -> Self {
        let mut pieces = self.pieces.clone();
        loop {
            pieces.sort_by(|a, b| a.0.cmp(&b.0));
            let mut merged = false;
            let mut out: Vec<(Word, Rat)> = Vec::with_capacity(pieces.len());
            let mut iter = pieces.into_iter().peekable();
            while let Some((w, r)) = iter.next() {
                let mergeable = iter.peek().is_some_and(|(w2, r2)| {
                    r2 == &r && w.sibling().as_ref() == Some(w2)
                });
                if mergeable {
                    iter.next();
                    out.push((w.parent().expect("sibling implies parent"), r));
                    merged = true;
                } else {
                    out.push((w, r));
                }
            }
            pieces = out;
            if !merged {
                return SimpleFunction { pieces };
            }
        }
    }

    /// The interval set where the value satisfies `keep`.
    pub fn support_where<F: Fn(&Rat) -> bool>(&self, keep: F) -> crate::interval::IntervalSet {
        crate::interval::IntervalSet::normalize(
            self.pieces
                .iter()
                .filter(|(_, r)| keep(r))
                .map(|(w, _)| w.clone()),
        )
    }

    /// E_P[f] = Σ r_i P(x_i), exact for exact measure kinds.
    pub fn expectation(&self, measure: &CylinderMeasure) -> Result<Rat> {
        let mut total = Rat::zero();
        for (w, r) in &self.pieces {
            total += r * measure.eval_exact(w)?;
        }
        Ok(total)
    }

    /// Expectation interval for measures evaluated through bounds.
    pub fn expectation_bounds(&self, measure: &CylinderMeasure, eps: &Rat) -> (Rat, Rat) {
        let per_piece = eps / rat_int(self.pieces.len().max(1) as i64);
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (w, r) in &self.pieces {
            let (pl, pu) = measure.eval_bounds(w, &per_piece);
            if r.is_negative() {
                lo += r * pu;
                hi += r * pl;
            } else {
                lo += r * &pl;
                hi += r * &pu;
            }
        }
        (lo, hi)
    }
}

impl fmt::Debug for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (w, r) in &self.pieces {
            map.entry(&w, &format_rat(r));
        }
        map.finish()
    }
}

/// g = S_p^f as a simple function on the cover refined by p − 1 extra
/// bits. Shift-specific: the k-th term reads f at offset k.
pub fn averaged_observable(f: &SimpleFunction, p: usize) -> Result<SimpleFunction> {
    if p == 0 {
        return Err(CoreError::InvalidParameter(
            "averaging window p must be at least 1".into(),
        ));
    }
    if p == 1 {
        return Ok(f.clone());
    }
    let depth = f.depth() + p - 1;
    if depth > 26 {
        return Err(CoreError::DepthInfeasible {
            depth,
            limit: 26,
        });
    }
    let div = rat_int(p as i64);
    let mut pieces = Vec::with_capacity(1 << depth);
    for w in Word::all_of_length(depth) {
        let mut sum = Rat::zero();
        for k in 0..p {
            sum += f.eval_prefix(&w.suffix_from(k))?;
        }
        pieces.push((w, sum / &div));
    }
    Ok(SimpleFunction { pieces })
}

/// The running averages s_m(ω) = S_{m+1}^f(ω) for m = 0..=horizon,
/// with the convention s_{−1} = 0, plus the raw values f(T^k ω).
#[derive(Clone, Debug)]
pub struct AverageSeries {
    f_values: Vec<Rat>,
    partial_sums: Vec<Rat>,
    averages: Vec<Rat>,
}

impl AverageSeries {
    /// Computes the series along a trajectory up to index `horizon`.
    pub fn compute(tr: &Trajectory, f: &SimpleFunction, horizon: usize) -> Result<Self> {
        let depth = f.depth();
        let values: Result<Vec<Rat>> = (0..=horizon)
            .map(|k| f.eval_prefix(&tr.iterate_prefix(k, depth)?))
            .collect();
        Ok(Self::from_values(values?))
    }

    /// Series for the shift orbit of an explicit word: s_m is defined for
    /// m + depth(f) ≤ len(word).
    pub fn from_word(word: &Word, f: &SimpleFunction) -> Result<Self> {
        let depth = f.depth();
        if word.len() < depth {
            return Err(CoreError::PrefixTooShort { have: word.len() });
        }
        let values: Result<Vec<Rat>> = (0..=(word.len() - depth))
            .map(|k| f.eval_prefix(&word.suffix_from(k)))
            .collect();
        Ok(Self::from_values(values?))
    }

    fn from_values(f_values: Vec<Rat>) -> Self {
        let mut partial_sums = Vec::with_capacity(f_values.len());
        let mut averages = Vec::with_capacity(f_values.len());
        let mut acc = Rat::zero();
        for (m, v) in f_values.iter().enumerate() {
            acc += v;
            partial_sums.push(acc.clone());
            averages.push(&acc / rat_int(m as i64 + 1));
        }
        AverageSeries {
            f_values,
            partial_sums,
            averages,
        }
    }

    /// Largest m with s_m available.
    pub fn horizon(&self) -> usize {
        self.averages.len() - 1
    }

    /// s_m(ω) = S_{m+1}^f(ω); s_{−1} = 0.
    pub fn s(&self, m: i64) -> Rat {
        if m < 0 {
            Rat::zero()
        } else {
            self.averages[m as usize].clone()
        }
    }

    /// f(T^k ω).
    pub fn f_at(&self, k: usize) -> &Rat {
        &self.f_values[k]
    }

    /// Σ_{s=0}^{u} f(T^s ω); zero for u = −1.
    pub fn partial_sum(&self, u: i64) -> Rat {
        if u < 0 {
            Rat::zero()
        } else {
            self.partial_sums[u as usize].clone()
        }
    }
}

/// S_n^f(ω) = (1/n) Σ_{k=0}^{n−1} f(T^k ω), exact.
pub fn time_average(tr: &Trajectory, f: &SimpleFunction, n: usize) -> Result<Rat> {
    if n == 0 {
        return Err(CoreError::InvalidParameter(
            "time average needs n ≥ 1".into(),
        ));
    }
    let series = AverageSeries::compute(tr, f, n - 1)?;
    Ok(series.s(n as i64 - 1))
}

/// Both sides of the three-term decomposition of S_n^g for g = S_p^f.
#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub lhs: Rat,
    pub rhs: Rat,
    pub s_n_f: Rat,
    pub correction: Rat,
    pub holds: bool,
}

/// Verifies, as exact rationals, the identity
/// S_n^g(ω) = S_n^f(ω) + (1/np)[Σ_{k=1}^{p−1}(p−k)f(T^{k+n−1}ω) − Σ_{k=1}^{p−1}(p−k)f(T^{k−1}ω)]
/// where g = S_p^f. Requires the shift machine.
pub fn check_expansion_identity(
    f: &SimpleFunction,
    p: usize,
    n: usize,
    tr: &Trajectory,
) -> Result<ExpansionReport> {
    if !tr.machine().is_shift() {
        return Err(CoreError::MachineMismatch { expected: "shift" });
    }
    if n == 0 || p == 0 {
        return Err(CoreError::InvalidParameter("need n ≥ 1 and p ≥ 1".into()));
    }
    let g = averaged_observable(f, p)?;
    let lhs = time_average(tr, &g, n)?;
    let s_n_f = time_average(tr, f, n)?;

    // f(T^k ω) for k up to (p−1) + (n−1).
    let series = AverageSeries::compute(tr, f, n + p - 2)?;
    let mut late = Rat::zero();
    let mut early = Rat::zero();
    for k in 1..p {
        let weight = rat_int((p - k) as i64);
        late += &weight * series.f_at(k + n - 1);
        early += &weight * series.f_at(k - 1);
    }
    let correction = (late - early) / rat_int((n * p) as i64);
    let rhs = &s_n_f + &correction;
    Ok(ExpansionReport {
        holds: lhs == rhs,
        lhs,
        rhs,
        s_n_f,
        correction,
    })
}

type ScheduleFn = Arc<dyn Fn(usize) -> SimpleFunction + Send + Sync>;
type GapFn = Arc<dyn Fn(usize) -> Rat + Send + Sync>;

/// Monotone two-sided approximation of a computable observable by simple
/// functions: lower_n non-decreasing, upper_n non-increasing, with a gap
/// bound g(n) → 0.
#[derive(Clone)]
pub struct ApproxSchedule {
    lower: ScheduleFn,
    upper: ScheduleFn,
    gap: GapFn,
}

impl ApproxSchedule {
    pub fn new<L, U, G>(lower: L, upper: U, gap: G) -> Self
    where
        L: Fn(usize) -> SimpleFunction + Send + Sync + 'static,
        U: Fn(usize) -> SimpleFunction + Send + Sync + 'static,
        G: Fn(usize) -> Rat + Send + Sync + 'static,
    {
        ApproxSchedule {
            lower: Arc::new(lower),
            upper: Arc::new(upper),
            gap: Arc::new(gap),
        }
    }

    /// A schedule that is already exact at every index.
    pub fn exact(f: SimpleFunction) -> Self {
        let lo = f.clone();
        let hi = f;
        ApproxSchedule::new(
            move |_| lo.clone(),
            move |_| hi.clone(),
            |_| Rat::zero(),
        )
    }

    pub fn lower_at(&self, n: usize) -> SimpleFunction {
        (self.lower)(n)
    }

    pub fn upper_at(&self, n: usize) -> SimpleFunction {
        (self.upper)(n)
    }

    pub fn gap_at(&self, n: usize) -> Rat {
        (self.gap)(n)
    }

    /// First index whose gap bound is ≤ eps, with the corresponding
    /// simple lower approximant. The accuracy used is reported back.
    pub fn simple_at_accuracy(&self, eps: &Rat, cap: usize) -> Result<(usize, SimpleFunction)> {
        for n in 0..=cap {
            if &self.gap_at(n) <= eps {
                return Ok((n, self.lower_at(n)));
            }
        }
        Err(CoreError::InvalidParameter(format!(
            "no schedule index with gap ≤ {} up to {}",
            format_rat(eps),
            cap
        )))
    }

    /// Checks the monotonicity/sandwich invariants pointwise on common
    /// refinements for indices 0..=upto; returns the first violation.
    pub fn check_monotone(&self, upto: usize) -> Option<(usize, Word)> {
        for n in 0..upto {
            let lo_n = self.lower_at(n);
            let lo_next = self.lower_at(n + 1);
            let up_n = self.upper_at(n);
            let up_next = self.upper_at(n + 1);
            // lower non-decreasing: lower_{n+1} − lower_n ≥ 0
            let diff = lo_next.sub(&lo_n);
            if let Some((w, _)) = diff.pieces().iter().find(|(_, r)| r.is_negative()) {
                return Some((n, w.clone()));
            }
            // upper non-increasing
            let diff = up_n.sub(&up_next);
            if let Some((w, _)) = diff.pieces().iter().find(|(_, r)| r.is_negative()) {
                return Some((n, w.clone()));
            }
            // sandwich: lower_n ≤ upper_n
            let diff = up_n.sub(&lo_n);
            if let Some((w, _)) = diff.pieces().iter().find(|(_, r)| r.is_negative()) {
                return Some((n, w.clone()));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IntervalSet;
    use crate::rational::rat;
    use crate::source::InfiniteSource;
    use crate::transform::MonotoneMachine;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn shift_traj(src: InfiniteSource) -> Trajectory {
        Trajectory::new(src, MonotoneMachine::shift())
    }

    #[test]
    fn cover_validation() {
        assert!(SimpleFunction::new(vec![
            (w("0"), Rat::zero()),
            (w("1"), rat_int(1))
        ])
        .is_ok());
        // Kraft sum below 1.
        assert!(matches!(
            SimpleFunction::new(vec![(w("0"), Rat::zero())]),
            Err(CoreError::NotACover { .. })
        ));
        // Overlapping pieces.
        assert!(matches!(
            SimpleFunction::new(vec![
                (w("0"), Rat::zero()),
                (w("01"), rat_int(1)),
                (w("1"), rat_int(1)),
            ]),
            Err(CoreError::NotPrefixFree { .. })
        ));
    }

    #[test]
    fn eval_picks_the_unique_piece() {
        let f = SimpleFunction::first_bit();
        assert_eq!(f.eval_prefix(&w("01")).unwrap(), Rat::zero());
        let c = SimpleFunction::constant(rat(7, 3));
        assert_eq!(c.eval_prefix(&Word::empty()).unwrap(), rat(7, 3));
        let quad = SimpleFunction::new(vec![
            (w("00"), rat_int(0)),
            (w("01"), rat_int(1)),
            (w("10"), rat_int(2)),
            (w("11"), rat_int(3)),
        ])
        .unwrap();
        assert_eq!(quad.eval_prefix(&w("10")).unwrap(), rat_int(2));
        assert!(matches!(
            quad.eval_prefix(&w("1")),
            Err(CoreError::PrefixTooShort { have: 1 })
        ));
    }

    #[test]
    fn expectation_of_first_bit_under_uniform() {
        let f = SimpleFunction::first_bit();
        assert_eq!(
            f.expectation(&CylinderMeasure::uniform()).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn time_average_on_periodic() {
        let f = SimpleFunction::first_bit();
        let tr = shift_traj(InfiniteSource::periodic(w("01")).unwrap());
        assert_eq!(time_average(&tr, &f, 4).unwrap(), rat(1, 2));
        let zero = shift_traj(InfiniteSource::all_zero());
        for n in 1..=6 {
            assert_eq!(time_average(&zero, &f, n).unwrap(), Rat::zero());
        }
        let c = SimpleFunction::constant(rat(5, 7));
        assert_eq!(time_average(&tr, &c, 9).unwrap(), rat(5, 7));
    }

    #[test]
    fn telescoping_recurrence() {
        // n·S_n − (n−1)·S_{n−1} = f(T^{n−1} ω)
        let f = SimpleFunction::first_bit();
        let tr = shift_traj(InfiniteSource::periodic(w("0110100")).unwrap());
        let series = AverageSeries::compute(&tr, &f, 12).unwrap();
        for n in 1..=12i64 {
            let lhs = rat_int(n + 1) * series.s(n) - rat_int(n) * series.s(n - 1);
            assert_eq!(&lhs, series.f_at(n as usize));
        }
    }

    #[test]
    fn averaged_observable_window_two() {
        let f = SimpleFunction::first_bit();
        let g = averaged_observable(&f, 2).unwrap();
        let expect = SimpleFunction::new(vec![
            (w("00"), Rat::zero()),
            (w("01"), rat(1, 2)),
            (w("10"), rat(1, 2)),
            (w("11"), rat_int(1)),
        ])
        .unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn averaged_observable_identity_and_depth() {
        let f = SimpleFunction::first_bit();
        assert_eq!(averaged_observable(&f, 1).unwrap(), f);
        for p in 2..=5 {
            let g = averaged_observable(&f, p).unwrap();
            assert_eq!(g.depth(), f.depth() + p - 1);
        }
    }

    #[test]
    fn expansion_identity_trivial_and_exact() {
        let f = SimpleFunction::first_bit();
        let tr = shift_traj(InfiniteSource::periodic(w("011")).unwrap());
        // p = 1: correction vanishes.
        let rep = check_expansion_identity(&f, 1, 5, &tr).unwrap();
        assert!(rep.holds);
        assert!(rep.correction.is_zero());
        assert_eq!(rep.lhs, rep.s_n_f);
        // p = 3, n = 5: exact equality of both sides.
        let rep = check_expansion_identity(&f, 3, 5, &tr).unwrap();
        assert!(rep.holds, "lhs {} rhs {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn expansion_correction_bound() {
        // |S_n^g − S_n^f| ≤ (p−1)/n · sup|f|
        let f = SimpleFunction::first_bit();
        let tr = shift_traj(InfiniteSource::periodic(w("0110100")).unwrap());
        for p in [2usize, 3, 5] {
            for n in [1usize, 4, 9, 20] {
                let rep = check_expansion_identity(&f, p, n, &tr).unwrap();
                let bound = rat_int((p - 1) as i64) / rat_int(n as i64) * f.sup_norm();
                assert!((rep.lhs - rep.s_n_f).abs() <= bound);
            }
        }
    }

    #[test]
    fn indicator_and_compress() {
        let set = IntervalSet::new(vec![w("00"), w("01")]).unwrap();
        let ind = SimpleFunction::indicator(&set);
        assert_eq!(ind.eval_prefix(&w("00")).unwrap(), rat_int(1));
        assert_eq!(ind.eval_prefix(&w("1")).unwrap(), Rat::zero());
        let refined = ind.refine_to_depth(3);
        assert_eq!(refined.pieces().len(), 8);
        let back = refined.compress();
        // Compression merges all the way down to {0 → 1, 1 → 0}.
        assert_eq!(back.pieces().len(), 2);
        assert_eq!(back.eval_prefix(&w("0")).unwrap(), rat_int(1));
    }

    #[test]
    fn combine_refines_covers() {
        let f = SimpleFunction::first_bit();
        let g = averaged_observable(&f, 2).unwrap();
        let sum = f.add(&g);
        assert_eq!(sum.eval_prefix(&w("11")).unwrap(), rat_int(2));
        assert_eq!(sum.eval_prefix(&w("01")).unwrap(), rat(1, 2));
        assert_eq!(sum.depth(), 2);
    }

    #[test]
    fn schedule_accuracy_pick() {
        // Dyadic lower/upper approximations of the constant 1/3.
        let sched = ApproxSchedule::new(
            |n| {
                let scale = pow2(n as i64);
                let v = (rat(1, 3) * &scale).floor() / scale;
                SimpleFunction::constant(v)
            },
            |n| {
                let scale = pow2(n as i64);
                let v = (rat(1, 3) * &scale).ceil() / scale;
                SimpleFunction::constant(v)
            },
            |n| pow2(-(n as i64)),
        );
        assert!(sched.check_monotone(8).is_none());
        let (idx, lower) = sched.simple_at_accuracy(&rat(1, 16), 32).unwrap();
        assert_eq!(idx, 4);
        assert!(rat(1, 3) - lower.eval_prefix(&Word::empty()).unwrap() <= rat(1, 16));
    }
}
