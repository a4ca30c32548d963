//! Probabilistic concept learning (PCL) with Tsetlin automata.
//!
//! * [`automata`]: the two-action automaton with `2N` states.
//! * [`logic`]: literals, include masks, samples, target conjunctions.
//! * [`learner`]: the PCL learner.
//! * [`tm`]: a vanilla Tsetlin Machine for comparison.
//! * [`theory`]: literal and sample classes, frequency tables and the
//!   per-literal reinforcement probabilities behind the convergence result.
//! * [`experiment`]: seeded convergence sweeps and their CSV output.
//! * [`snapshot`]: line-oriented machine snapshots.

pub mod automata;
pub mod error;
pub mod experiment;
pub mod logic;
pub mod learner;
pub mod snapshot;
pub mod theory;
pub mod tm;

pub use automata::{Action, Automaton, InitPolicy, DEFAULT_HALF_SIZE};
pub use error::{Error, Result};
pub use logic::{clause_eval, literal_value, IncludeMask, Literal, Sample, TargetConjunction};
pub use learner::{EpochOrder, Feedback, PclClause, PclMachine, TrainStatus};
