//! Reductio traces: numbered steps, each placing a formula in a world and
//! citing the condition and earlier steps that justify it.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::formula::{desugar, render, Agent, Formula};
use crate::semantics::LogicProfile;

/// Justification of a [`ProofStep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// The counterassumption placed in `w0`.
    Seed,
    And,
    OrLeft,
    OrRight,
    DoubleNegation,
    NotAndLeft,
    NotAndRight,
    NotOr,
    /// `B p` in a world puts `p` in each of its alternatives.
    BeliefPropagation,
    /// hintikka/kd45: `B p` in a world puts `B p` in each alternative.
    BeliefRetainedEverywhere,
    /// kd45: `~B p` in a world puts `~B p` in each alternative.
    DisbeliefRetainedEverywhere,
    /// `C p` opens an alternative containing `p`.
    Compatibility,
    /// hstar: `B p` opens (or reuses) an alternative retaining `B p`.
    BeliefRetainedSomewhere,
    /// Seriality: a world with beliefs but no alternative gets one.
    BeliefWitness,
    /// `~B p` read as `C ~p`.
    DefinitionRewrite,
    /// kd45 only: case split on `B p` versus `~B p`.
    Cut,
    /// `f` and `~f` in the same world; cites `f` first, the step's
    /// formula is `f & ~f`.
    Clash,
}

impl Rule {
    pub const ALL: [Rule; 17] = [
        Rule::Seed,
        Rule::And,
        Rule::OrLeft,
        Rule::OrRight,
        Rule::DoubleNegation,
        Rule::NotAndLeft,
        Rule::NotAndRight,
        Rule::NotOr,
        Rule::BeliefPropagation,
        Rule::BeliefRetainedEverywhere,
        Rule::DisbeliefRetainedEverywhere,
        Rule::Compatibility,
        Rule::BeliefRetainedSomewhere,
        Rule::BeliefWitness,
        Rule::DefinitionRewrite,
        Rule::Cut,
        Rule::Clash,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Seed => "seed",
            Rule::And => "C.&",
            Rule::OrLeft => "C.v-left",
            Rule::OrRight => "C.v-right",
            Rule::DoubleNegation => "C.~~",
            Rule::NotAndLeft => "C.~&-left",
            Rule::NotAndRight => "C.~&-right",
            Rule::NotOr => "C.~v",
            Rule::BeliefPropagation => "C.B*",
            Rule::BeliefRetainedEverywhere => "C.BB*",
            Rule::DisbeliefRetainedEverywhere => "C.~BB*",
            Rule::Compatibility => "C.C",
            Rule::BeliefRetainedSomewhere => "C.CB",
            Rule::BeliefWitness => "C.B",
            Rule::DefinitionRewrite => "C.BDef-rewrite",
            Rule::Cut => "cut",
            Rule::Clash => "C.~-clash",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.as_str() == name)
    }

    /// Rules that conclude in an alternative of the premise's world.
    fn is_modal(self) -> bool {
        matches!(
            self,
            Rule::BeliefPropagation
                | Rule::BeliefRetainedEverywhere
                | Rule::DisbeliefRetainedEverywhere
                | Rule::Compatibility
                | Rule::BeliefRetainedSomewhere
                | Rule::BeliefWitness
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    /// 1-based position in the trace.
    pub index: usize,
    /// `w0` is the world of the counterassumption.
    pub world: String,
    pub formula: Formula,
    pub rule: Rule,
    /// Indices of earlier steps.
    pub premises: Vec<usize>,
}

/// Text or JSON layout for [`render_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Json,
}

/// One line per step, e.g. `(4) p & ~B[a] p ∈ w1   From (1) by (C.B*)`.
pub fn render_trace(trace: &[ProofStep], format: TraceFormat) -> String {
    match format {
        TraceFormat::Json => trace_to_json(trace).to_string(),
        TraceFormat::Text => {
            let mut out = String::new();
            for step in trace {
                let _ = write!(
                    out,
                    "({}) {} ∈ {}   ",
                    step.index,
                    render(&step.formula),
                    step.world
                );
                if !step.premises.is_empty() {
                    let cited: Vec<String> =
                        step.premises.iter().map(|p| format!("({p})")).collect();
                    let _ = write!(out, "From {} ", cited.join(", "));
                }
                let _ = writeln!(out, "by ({})", step.rule);
            }
            out
        }
    }
}

pub fn trace_to_json(trace: &[ProofStep]) -> Value {
    let steps: Vec<Value> = trace
        .iter()
        .map(|s| {
            json!({
                "i": s.index,
                "world": s.world,
                "formula": render(&s.formula),
                "rule": s.rule.as_str(),
                "from": s.premises,
            })
        })
        .collect();
    json!({ "verdict": "unsat", "steps": steps })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {message}")]
pub struct TraceError {
    pub step: usize,
    pub message: String,
}

/// Replays a trace: every step must follow from its premises by its rule,
/// and the last step must be a clash.
///
/// The alternativeness structure is read off the trace itself: the first
/// modal step concluding in a world fixes that world's parent and agent,
/// and every later modal step into it must agree.
pub fn check_trace(
    trace: &[ProofStep],
    query: &Formula,
    profile: LogicProfile,
) -> Result<(), TraceError> {
    let fail = |step: usize, message: String| Err(TraceError { step, message });
    if trace.is_empty() {
        return fail(0, "empty trace".into());
    }
    let mut parent: BTreeMap<&str, (&str, Agent)> = BTreeMap::new();
    let mut known_worlds: Vec<&str> = Vec::new();
    for (pos, step) in trace.iter().enumerate() {
        let i = step.index;
        if i != pos + 1 {
            return fail(i, format!("expected index {}", pos + 1));
        }
        let mut prem = Vec::new();
        for &p in &step.premises {
            if p == 0 || p >= i {
                return fail(i, format!("premise ({p}) is not an earlier step"));
            }
            prem.push(&trace[p - 1]);
        }
        let same_world = |s: &ProofStep| s.world == step.world;
        let ok = match step.rule {
            Rule::Seed => {
                pos == 0 && step.world == "w0" && step.formula == desugar(query) && prem.is_empty()
            }
            Rule::Cut => {
                profile == LogicProfile::Kd45 && prem.is_empty() && is_belief_literal(&step.formula)
            }
            Rule::Clash => {
                let [a, b] = prem.as_slice() else {
                    return fail(i, "a clash cites two steps".into());
                };
                same_world(a)
                    && same_world(b)
                    && b.formula == a.formula.negated()
                    && step.formula == Formula::and(a.formula.clone(), b.formula.clone())
            }
            Rule::DefinitionRewrite => match prem.as_slice() {
                [src] => match &src.formula {
                    Formula::Not(inner) => match &**inner {
                        Formula::Bel(a, body) => {
                            same_world(src) && step.formula == Formula::comp(a, body.negated())
                        }
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            rule if rule.is_modal() => {
                let [src] = prem.as_slice() else {
                    return fail(i, "a modal step cites one step".into());
                };
                let (agent, ok) = modal_conclusion(rule, &src.formula, &step.formula, profile);
                let Some(agent) = agent else {
                    return fail(i, format!("{} does not apply to `{}`", rule, src.formula));
                };
                if step.world == "w0" || step.world == src.world {
                    return fail(
                        i,
                        "a modal step must conclude in a fresh alternative".into(),
                    );
                }
                match parent.get(step.world.as_str()) {
                    Some((p, a)) if *p != src.world.as_str() || *a != agent => {
                        return fail(
                            i,
                            format!(
                                "{} is not a {agent}-alternative of {}",
                                step.world, src.world
                            ),
                        );
                    }
                    Some(_) => {}
                    None => {
                        if known_worlds.contains(&step.world.as_str()) {
                            return fail(
                                i,
                                format!("{} was used before it was introduced", step.world),
                            );
                        }
                        parent.insert(&step.world, (&src.world, agent));
                    }
                }
                ok
            }
            rule => {
                let [src] = prem.as_slice() else {
                    return fail(i, "a propositional step cites one step".into());
                };
                same_world(src) && propositional_conclusion(rule, &src.formula, &step.formula)
            }
        };
        if !ok {
            return fail(
                i,
                format!("`{}` does not follow by ({})", step.formula, step.rule),
            );
        }
        if !known_worlds.contains(&step.world.as_str()) {
            if step.world != "w0" && !parent.contains_key(step.world.as_str()) {
                return fail(
                    i,
                    format!("{} appears before any step introduces it", step.world),
                );
            }
            known_worlds.push(&step.world);
        }
    }
    let last = trace.last().expect("non-empty");
    if last.rule != Rule::Clash {
        return fail(last.index, "trace does not end in a clash".into());
    }
    Ok(())
}

fn is_belief_literal(f: &Formula) -> bool {
    match f {
        Formula::Bel(..) => true,
        Formula::Not(inner) => matches!(**inner, Formula::Bel(..)),
        _ => false,
    }
}

fn propositional_conclusion(rule: Rule, src: &Formula, out: &Formula) -> bool {
    match (rule, src) {
        (Rule::And, Formula::And(l, r)) => out == &**l || out == &**r,
        (Rule::OrLeft, Formula::Or(l, _)) => out == &**l,
        (Rule::OrRight, Formula::Or(_, r)) => out == &**r,
        (Rule::DoubleNegation, Formula::Not(inner)) => {
            matches!(&**inner, Formula::Not(g) if out == &**g)
        }
        (Rule::NotAndLeft, Formula::Not(inner)) => {
            matches!(&**inner, Formula::And(l, _) if *out == l.negated())
        }
        (Rule::NotAndRight, Formula::Not(inner)) => {
            matches!(&**inner, Formula::And(_, r) if *out == r.negated())
        }
        (Rule::NotOr, Formula::Not(inner)) => {
            matches!(&**inner, Formula::Or(l, r) if *out == l.negated() || *out == r.negated())
        }
        _ => false,
    }
}

/// The agent of a modal step and whether its conclusion matches.
fn modal_conclusion(
    rule: Rule,
    src: &Formula,
    out: &Formula,
    profile: LogicProfile,
) -> (Option<Agent>, bool) {
    match (rule, src) {
        (Rule::BeliefPropagation | Rule::BeliefWitness, Formula::Bel(a, body)) => {
            (Some(a.clone()), out == &**body)
        }
        (Rule::BeliefRetainedSomewhere, Formula::Bel(a, _)) => (
            Some(a.clone()),
            profile == LogicProfile::HStar && out == src,
        ),
        (Rule::BeliefRetainedEverywhere, Formula::Bel(a, _)) => (
            Some(a.clone()),
            matches!(profile, LogicProfile::Hintikka | LogicProfile::Kd45) && out == src,
        ),
        (Rule::DisbeliefRetainedEverywhere, Formula::Not(inner)) => match &**inner {
            Formula::Bel(a, _) => (Some(a.clone()), profile == LogicProfile::Kd45 && out == src),
            _ => (None, false),
        },
        (Rule::Compatibility, Formula::Comp(a, body)) => (Some(a.clone()), out == &**body),
        _ => (None, false),
    }
}
