//! Satisfiability and validity by model-set construction.
//!
//! ```
//! use doxa::{decide_sat, parse, LogicProfile};
//! use doxa::tableau::Outcome;
//!
//! let f = parse("B[a] p & ~B[a] B[a] p").unwrap();
//! let hstar = decide_sat(&f, LogicProfile::HStar).unwrap();
//! assert!(matches!(hstar.outcome, Outcome::Sat { .. }));
//! let hintikka = decide_sat(&f, LogicProfile::Hintikka).unwrap();
//! assert!(matches!(hintikka.outcome, Outcome::Unsat(_)));
//! ```

mod extract;
mod search;
mod trace;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::formula::{desugar, Formula};
use crate::semantics::{
    check_frame, evaluate, model_to_json, LabeledModelSystem, LogicProfile, WorldId,
};

pub use search::Stats;
pub use trace::{
    check_trace, render_trace, trace_to_json, ProofStep, Rule, TraceError, TraceFormat,
};

/// A world of the finished tableau. Blocked worlds are not part of the
/// extracted model; their incoming edge points at `blocked_by` instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauNode {
    pub world: WorldId,
    pub label: BTreeSet<Formula>,
    /// The world and agent this one was created for.
    pub parent: Option<(WorldId, crate::formula::Agent)>,
    pub blocked_by: Option<WorldId>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// The extracted model, labeled with the tableau's model sets, and the
    /// tableau itself. World 0 satisfies the query.
    Sat {
        model: LabeledModelSystem,
        nodes: Vec<TableauNode>,
    },
    /// The closed exploration that was tried last.
    Unsat(Vec<ProofStep>),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.outcome, Outcome::Sat { .. })
    }

    /// `{"verdict": "sat", "model": {...}}` or the trace JSON.
    pub fn to_json(&self) -> Value {
        match &self.outcome {
            Outcome::Sat { model, .. } => json!({
                "verdict": "sat",
                "model": model_to_json(&model.model, Some(model.labels())),
            }),
            Outcome::Unsat(trace) => trace_to_json(trace),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Validity {
    /// The closed tableau for the negation.
    Valid(Vec<ProofStep>),
    /// A model of the negation.
    Invalid(LabeledModelSystem),
}

#[derive(Clone, Debug)]
pub struct ValidityVerdict {
    pub validity: Validity,
    pub stats: Stats,
}

impl ValidityVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self.validity, Validity::Valid(_))
    }

    /// Like [`Verdict::to_json`] with `valid`/`invalid` as the verdict.
    pub fn to_json(&self) -> Value {
        match &self.validity {
            Validity::Invalid(model) => json!({
                "verdict": "invalid",
                "model": model_to_json(&model.model, Some(model.labels())),
            }),
            Validity::Valid(trace) => {
                let mut v = trace_to_json(trace);
                v["verdict"] = json!("valid");
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    /// The extracted model does not pass its own check. Always a bug.
    #[error("internal verification failure: {0}")]
    InternalVerificationFailure(String),
}

/// Decides whether `f` has a model in the frame class of `profile`.
pub fn decide_sat(f: &Formula, profile: LogicProfile) -> Result<Verdict, EngineError> {
    let query = desugar(f);
    let mut search = search::Search::new(&query, profile);
    let open = search.run(&query);
    let stats = search.stats;
    if !open {
        let trace = search.take_trace().ok_or_else(|| {
            EngineError::InternalVerificationFailure("closed without a clash".into())
        })?;
        return Ok(Verdict {
            outcome: Outcome::Unsat(trace),
            stats,
        });
    }

    let model = extract::extract(&search, profile);
    let frame = check_frame(&model.model, profile);
    if let Some(v) = frame.first() {
        return Err(EngineError::InternalVerificationFailure(format!(
            "model of `{f}` fails {profile} frame check: {v}"
        )));
    }
    match evaluate(&model.model, WorldId(0), f) {
        Ok(true) => {}
        Ok(false) => {
            return Err(EngineError::InternalVerificationFailure(format!(
                "model of `{f}` does not satisfy it under {profile}"
            )))
        }
        Err(e) => return Err(EngineError::InternalVerificationFailure(e.to_string())),
    }
    Ok(Verdict {
        outcome: Outcome::Sat {
            model,
            nodes: nodes(&search),
        },
        stats,
    })
}

/// `f` is valid iff `~f` is unsatisfiable.
pub fn decide_valid(f: &Formula, profile: LogicProfile) -> Result<ValidityVerdict, EngineError> {
    let verdict = decide_sat(&Formula::not(f.clone()), profile)?;
    let validity = match verdict.outcome {
        Outcome::Sat { model, .. } => Validity::Invalid(model),
        Outcome::Unsat(trace) => Validity::Valid(trace),
    };
    Ok(ValidityVerdict {
        validity,
        stats: verdict.stats,
    })
}

fn nodes(search: &search::Search) -> Vec<TableauNode> {
    let agent = |ix: usize| search.agents[ix].clone();
    let mut out: Vec<TableauNode> = search
        .nodes
        .iter()
        .enumerate()
        .map(|(w, node)| TableauNode {
            world: WorldId(w),
            label: node.label.iter().cloned().collect(),
            parent: node.parent.map(|(p, a)| (WorldId(p), agent(a))),
            blocked_by: None,
        })
        .collect();
    for b in &search.blocked {
        let label = out[b.by].label.clone();
        out.push(TableauNode {
            world: WorldId(out.len()),
            label,
            parent: Some((WorldId(b.parent), agent(b.agent))),
            blocked_by: Some(WorldId(b.by)),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::check_model_set;

    fn sat(text: &str, profile: LogicProfile) -> bool {
        let f = parse(text).unwrap();
        let v = decide_sat(&f, profile).unwrap();
        match &v.outcome {
            Outcome::Sat { model, .. } => {
                let violations = check_model_set(model, profile);
                assert!(
                    violations.is_empty(),
                    "{text} under {profile}: {violations:?}"
                );
                true
            }
            Outcome::Unsat(trace) => {
                if let Err(e) = check_trace(trace, &f, profile) {
                    panic!(
                        "{text} under {profile}: {e}\n{}",
                        render_trace(trace, TraceFormat::Text)
                    );
                }
                false
            }
        }
    }

    #[test]
    fn propositional() {
        for p in LogicProfile::ALL {
            assert!(!sat("p & ~p", p));
            assert!(sat("p | ~p", p));
            assert!(!sat("(p | q) & ~p & ~q", p));
            assert!(sat("(p -> q) & p", p));
        }
    }

    #[test]
    fn introspection_separates_profiles() {
        let f = "B[a] p & ~B[a] B[a] p";
        assert!(sat(f, LogicProfile::HStar));
        assert!(sat(f, LogicProfile::Kd));
        assert!(!sat(f, LogicProfile::Hintikka));
        assert!(!sat(f, LogicProfile::Kd45));
    }

    #[test]
    fn witness_collects_every_belief() {
        let f = "B[a] p & B[a] q & ~C[a](B[a] p & B[a] q)";
        assert!(!sat(f, LogicProfile::HStar));
        assert!(sat(f, LogicProfile::Kd));
    }

    #[test]
    fn negative_introspection_only_in_kd45() {
        let f = "~B[a] p & ~B[a] ~B[a] p";
        assert!(!sat(f, LogicProfile::Kd45));
        assert!(sat(f, LogicProfile::Hintikka));
        assert!(sat(f, LogicProfile::HStar));
    }

    #[test]
    fn kd45_alternatives_share_beliefs() {
        let f = "C[a]((q <-> B[b] q) -> C[b](p | p)) \
                 & (C[b](p & q) & (~p <-> B[a] q) <-> (q & p <-> B[b] q) -> ~B[a] q)";
        assert!(sat(f, LogicProfile::Kd45));
    }

    #[test]
    fn repeated_demands_reuse_worlds() {
        let f = "(C[a](p | p -> p) <-> C[a] p -> ~B[a] p) & C[a] C[a]((p -> p) -> p & p) \
                 <-> C[a](C[a] ~p -> B[a](p & p) -> (p -> p) | (p -> p))";
        for p in LogicProfile::ALL {
            assert!(sat(f, p));
        }
    }

    #[test]
    fn validity() {
        let f = parse("B[a] p -> C[a] B[a] p").unwrap();
        assert!(decide_valid(&f, LogicProfile::HStar).unwrap().is_valid());
        assert!(!decide_valid(&f, LogicProfile::Kd).unwrap().is_valid());
    }

    #[test]
    fn json_shapes() {
        let f = parse("p & ~p").unwrap();
        let v = decide_sat(&f, LogicProfile::Kd).unwrap().to_json();
        assert_eq!(v["verdict"], "unsat");
        assert_eq!(v["steps"][0]["rule"], "seed");
        let f = parse("B[a] p").unwrap();
        let v = decide_sat(&f, LogicProfile::Kd45).unwrap().to_json();
        assert_eq!(v["verdict"], "sat");
        assert_eq!(v["model"]["designated"], 0);
    }
}
