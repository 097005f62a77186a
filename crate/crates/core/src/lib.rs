//! Safety verification for linearly ordered parameterized systems.
//!
//! Sets of configurations are represented by *counted words*: a base word
//! of local states where every position carries a left and a right counter
//! constraining the Parikh images of the prefix and suffix around it. A
//! relaxation operator, parameterized by per-state thresholds, keeps every
//! reachability search finite; spurious traces are analyzed backwards and
//! the thresholds raised until the trace disappears or a real
//! counterexample is found.

pub mod counters;
pub mod engine;
pub mod error;
pub mod frontend;
pub mod meet;
pub mod oracle;
pub mod separation;
pub mod system;
pub mod words;

pub use counters::{Alphabet, Atom, Counter, Multiset, Resolution, StateId};
pub use engine::{Direction, Verdict};
pub use error::{Error, Result};
pub use system::{Guard, ParameterizedSystem, Quantifier, Transition};
pub use words::{Configuration, CountedWord, Tuple};
