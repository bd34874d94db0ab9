//! Computable transformations of Ω as monotone word machines.
//!
//! A machine is given by its longest-output step function on finite
//! words; monotonicity (x ⊆ x′ ⟹ step(x) ⊆ step(x′)) is the contract,
//! checked by tests rather than enforced per call. The enumeration view
//! of transformations — a recursively enumerable relation closed under
//! output prefixes with (x, λ) always present — is the semantics these
//! step functions implement, deterministically.
//!
//! Trajectories answer "the first n bits of T^k ω" with an explicit
//! lookahead budget (fuel), so "cannot determine yet" is an error value
//! rather than a wrong answer.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::source::InfiniteSource;
use crate::word::Word;

type StepFn = Arc<dyn Fn(&Word) -> Word + Send + Sync>;

#[derive(Clone)]
enum MachineKind {
    Shift,
    Identity,
    Custom { name: String, step: StepFn },
}

#[derive(Clone)]
pub struct MonotoneMachine {
    kind: MachineKind,
}

impl MonotoneMachine {
    /// The left shift: drops the first input bit.
    pub fn shift() -> Self {
        MonotoneMachine {
            kind: MachineKind::Shift,
        }
    }

    pub fn identity() -> Self {
        MonotoneMachine {
            kind: MachineKind::Identity,
        }
    }

    pub fn custom<F: Fn(&Word) -> Word + Send + Sync + 'static>(name: &str, step: F) -> Self {
        MonotoneMachine {
            kind: MachineKind::Custom {
                name: name.to_string(),
                step: Arc::new(step),
            },
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "shift" => Some(MonotoneMachine::shift()),
            "identity" => Some(MonotoneMachine::identity()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            MachineKind::Shift => "shift",
            MachineKind::Identity => "identity",
            MachineKind::Custom { name, .. } => name,
        }
    }

    /// Longest output determined by the input prefix.
    pub fn step(&self, x: &Word) -> Word {
        match &self.kind {
            MachineKind::Shift => x.suffix_from(1),
            MachineKind::Identity => x.clone(),
            MachineKind::Custom { step, .. } => step(x),
        }
    }

    pub fn is_shift(&self) -> bool {
        matches!(self.kind, MachineKind::Shift)
    }
}

impl fmt::Debug for MonotoneMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "machine({})", self.name())
    }
}

/// Input lookahead allowed per query: `per_step · (k + n) + base` bits.
#[derive(Clone, Copy, Debug)]
pub struct FuelPolicy {
    pub per_step: usize,
    pub base: usize,
}

impl Default for FuelPolicy {
    fn default() -> Self {
        FuelPolicy {
            per_step: 2,
            base: 64,
        }
    }
}

impl FuelPolicy {
    pub fn budget(&self, k: usize, n: usize) -> usize {
        self.per_step * (k + n) + self.base
    }
}

/// The orbit ω, Tω, T²ω, … of a source under a machine.
#[derive(Clone)]
pub struct Trajectory {
    source: InfiniteSource,
    machine: MonotoneMachine,
    fuel: FuelPolicy,
    offset: usize,
}

impl Trajectory {
    pub fn new(source: InfiniteSource, machine: MonotoneMachine) -> Self {
        Trajectory {
            source,
            machine,
            fuel: FuelPolicy::default(),
            offset: 0,
        }
    }

    pub fn with_fuel(mut self, fuel: FuelPolicy) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn source(&self) -> &InfiniteSource {
        &self.source
    }

    pub fn machine(&self) -> &MonotoneMachine {
        &self.machine
    }

    /// The same orbit viewed from T^steps ω.
    pub fn advanced(&self, steps: usize) -> Trajectory {
        let mut t = self.clone();
        t.offset += steps;
        t
    }

    /// First n bits of T^k ω. T^0 ω = ω.
    pub fn iterate_prefix(&self, k: usize, n: usize) -> Result<Word> {
        let k = k + self.offset;
        if self.machine.is_shift() {
            // Fast path: T^k just skips k leading bits.
            return Ok(self.source.prefix(k + n)?.suffix_from(k));
        }
        let budget = self.fuel.budget(k, n);
        let mut w = self.source.prefix(budget)?;
        for _ in 0..k {
            w = self.machine.step(&w);
        }
        if w.len() < n {
            return Err(CoreError::FuelExhausted {
                steps: k,
                needed: n,
                budget,
            });
        }
        Ok(w.truncated(n))
    }
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trajectory({:?}, {:?}, offset={})",
            self.source, self.machine, self.offset
        )
    }
}
