//! Doxastic logic toolkit.
//!
//! Belief formulas with per-agent `B[a]` (belief) and `C[a]` (compatibility)
//! operators are decided under four logic profiles:
//!
//! * [`LogicProfile::HStar`]: serial frames where every world sees an
//!   alternative whose own alternatives it also sees. `B p -> C B p` holds,
//!   positive introspection does not.
//! * [`LogicProfile::Hintikka`]: serial and transitive frames.
//! * [`LogicProfile::Kd`]: serial frames.
//! * [`LogicProfile::Kd45`]: serial, transitive and euclidean frames.
//!
//! [`tableau::decide_sat`] builds model systems by tableau expansion and
//! either returns a self-checked countermodel or a closed reductio trace.
//! [`oracle`] enumerates small models by brute force to cross-check it.

pub mod formula;
pub mod generate;
pub mod oracle;
pub mod semantics;
pub mod tableau;

pub use formula::{agents, desugar, parse, render, subformula_closure, Agent, Formula, ParseError};
pub use semantics::{
    check_frame, check_model_set, evaluate, LabeledModelSystem, LogicProfile, ModelSystem,
    Violation, ViolationKind, WorldId,
};
pub use tableau::{decide_sat, decide_valid, ProofStep, Validity, Verdict};
