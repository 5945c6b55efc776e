//! Neuronal recurrence equations `x(n) = 1[Σ a_j x(n-j) - θ]`.
//!
//! The crate builds a family of threshold recurrences from a single scale
//! parameter `m`: single-neuron systems whose traces cycle with a prime
//! period, their destabilized variants that collapse to zero, the shuffled
//! composition `y` of all of them, and the perturbed systems `z(·, d)` whose
//! periods form a divisor chain ending in the all-zero fixed point.
//!
//! Modules, bottom-up:
//!
//! * [`numtheory`] derives the prime window and every integer parameter.
//! * [`construction`] turns those parameters into [`RecurrenceSystem`]s.
//! * [`engine`] simulates a system exactly in scaled integer arithmetic.
//! * [`cycles`] measures minimal transients and periods.
//! * [`verify`] checks each structural and dynamical claim on concrete runs.

pub mod construction;
pub mod cycles;
pub mod engine;
mod error;
pub mod numtheory;
pub mod verify;

pub use construction::{
    B0Method, C3Reading, IndexSets, PerturbationPlan, RecurrenceSystem,
};
pub use cycles::{CycleReport, FailedCheck};
pub use engine::{BitState, CompiledSystem};
pub use error::{Error, Result};
pub use numtheory::{CycleLengths, WindowParams};
pub use verify::{ClaimId, ClaimResult, ClaimTask, Counterexample};
