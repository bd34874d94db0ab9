//! Exact computation on the space of infinite binary sequences:
//! cylinder measures, shift dynamics, time averages, upcrossing counts,
//! convergence regulators, and staged randomness tests.

pub mod error;
pub mod interval;
pub mod measure;
pub mod rational;
pub mod sampling;
pub mod source;
pub mod transform;
pub mod word;

pub use error::{CoreError, Result};
pub use interval::IntervalSet;
pub use measure::{ComponentRule, CylinderMeasure, MarkovSpec};
pub use rational::Rat;
pub use source::InfiniteSource;
pub use transform::{FuelPolicy, MonotoneMachine, Trajectory};
pub use word::Word;
