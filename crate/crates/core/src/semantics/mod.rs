//! Model systems and truth.
//!
//! A [`ModelSystem`] is a finite Kripke model: worlds `0..n`, one
//! alternativeness relation per agent, and a valuation. A
//! [`LabeledModelSystem`] additionally attaches to every world the set of
//! sentences it is meant to describe (its model set), so the syntactic
//! model-set conditions can be checked against the structure.

mod frame;
mod json;
mod model_set;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::formula::{Agent, Formula};

pub use frame::{check_frame, relation_admitted};
pub use json::{model_from_json, model_to_json, Labels, ModelJsonError};
pub use model_set::check_model_set;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldId(pub usize);

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

/// Which logic of belief is in force; selects frame conditions and
/// tableau rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicProfile {
    /// A1-A3: `K`, `B p -> C p`, `B p -> C B p`.
    HStar,
    /// `K`, `B p -> C p` and positive introspection `B p -> B B p`.
    Hintikka,
    Kd,
    Kd45,
}

impl LogicProfile {
    pub const ALL: [LogicProfile; 4] = [
        LogicProfile::HStar,
        LogicProfile::Hintikka,
        LogicProfile::Kd,
        LogicProfile::Kd45,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicProfile::HStar => "hstar",
            LogicProfile::Hintikka => "hintikka",
            LogicProfile::Kd => "kd",
            LogicProfile::Kd45 => "kd45",
        }
    }
}

impl fmt::Display for LogicProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown profile `{0}` (expected hstar, hintikka, kd or kd45)")]
pub struct UnknownProfile(pub String);

impl FromStr for LogicProfile {
    type Err = UnknownProfile;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicProfile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownProfile(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("a model system needs at least one world")]
    NoWorlds,
    #[error("world {world} out of range for a model with {worlds} worlds")]
    WorldOutOfRange { world: usize, worlds: usize },
    #[error("label list has {labels} entries for {worlds} worlds")]
    LabelCount { labels: usize, worlds: usize },
}

/// A finite set of worlds with per-agent alternativeness relations.
///
/// Relations are stored exactly as given; no closure is applied. Atoms not
/// listed in a world's valuation are false there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSystem {
    worlds: usize,
    designated: WorldId,
    valuation: Vec<BTreeSet<String>>,
    alternatives: BTreeMap<Agent, Vec<BTreeSet<WorldId>>>,
}

impl ModelSystem {
    /// A model with `worlds` worlds, nothing true and no agents.
    pub fn new(worlds: usize) -> Result<Self, ModelError> {
        if worlds == 0 {
            return Err(ModelError::NoWorlds);
        }
        Ok(ModelSystem {
            worlds,
            designated: WorldId(0),
            valuation: vec![BTreeSet::new(); worlds],
            alternatives: BTreeMap::new(),
        })
    }

    fn check_world(&self, w: WorldId) -> Result<(), ModelError> {
        if w.0 < self.worlds {
            Ok(())
        } else {
            Err(ModelError::WorldOutOfRange {
                world: w.0,
                worlds: self.worlds,
            })
        }
    }

    pub fn set_designated(&mut self, w: WorldId) -> Result<(), ModelError> {
        self.check_world(w)?;
        self.designated = w;
        Ok(())
    }

    pub fn set_true(&mut self, w: WorldId, atom: &str) -> Result<(), ModelError> {
        self.check_world(w)?;
        self.valuation[w.0].insert(atom.to_string());
        Ok(())
    }

    /// Registers `agent` with an empty relation if it has none yet.
    pub fn add_agent(&mut self, agent: &Agent) {
        let n = self.worlds;
        self.alternatives
            .entry(agent.clone())
            .or_insert_with(|| vec![BTreeSet::new(); n]);
    }

    /// Makes `to` an alternative to `from` with respect to `agent`.
    pub fn add_alternative(
        &mut self,
        agent: &Agent,
        from: WorldId,
        to: WorldId,
    ) -> Result<(), ModelError> {
        self.check_world(from)?;
        self.check_world(to)?;
        self.add_agent(agent);
        self.alternatives.get_mut(agent).expect("just added")[from.0].insert(to);
        Ok(())
    }

    pub fn world_count(&self) -> usize {
        self.worlds
    }

    pub fn worlds(&self) -> impl Iterator<Item = WorldId> {
        (0..self.worlds).map(WorldId)
    }

    pub fn designated(&self) -> WorldId {
        self.designated
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.alternatives.keys()
    }

    pub fn true_atoms(&self, w: WorldId) -> &BTreeSet<String> {
        &self.valuation[w.0]
    }

    pub fn is_true(&self, w: WorldId, atom: &str) -> bool {
        self.valuation[w.0].contains(atom)
    }

    /// Alternatives of `w` for `agent`; empty for agents the model does not mention.
    pub fn successors<'a>(
        &'a self,
        agent: &Agent,
        w: WorldId,
    ) -> impl Iterator<Item = WorldId> + 'a {
        self.alternatives
            .get(agent)
            .map(|rel| rel[w.0].iter().copied())
            .into_iter()
            .flatten()
    }

    pub fn successor_set(&self, agent: &Agent, w: WorldId) -> BTreeSet<WorldId> {
        self.successors(agent, w).collect()
    }

    /// The relation of `agent` as sorted pairs.
    pub fn pairs(&self, agent: &Agent) -> Vec<(WorldId, WorldId)> {
        let mut out = Vec::new();
        if let Some(rel) = self.alternatives.get(agent) {
            for (from, succ) in rel.iter().enumerate() {
                out.extend(succ.iter().map(|&to| (WorldId(from), to)));
            }
        }
        out
    }
}

/// A model system whose worlds carry model sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledModelSystem {
    pub model: ModelSystem,
    labels: Vec<BTreeSet<Formula>>,
}

impl LabeledModelSystem {
    pub fn new(model: ModelSystem, labels: Vec<BTreeSet<Formula>>) -> Result<Self, ModelError> {
        if labels.len() != model.world_count() {
            return Err(ModelError::LabelCount {
                labels: labels.len(),
                worlds: model.world_count(),
            });
        }
        Ok(LabeledModelSystem { model, labels })
    }

    pub fn label(&self, w: WorldId) -> &BTreeSet<Formula> {
        &self.labels[w.0]
    }

    pub fn labels(&self) -> &[BTreeSet<Formula>] {
        &self.labels
    }
}

/// Truth of `f` at world `w`.
///
/// `B[a] p` holds iff `p` holds at every `a`-alternative of `w`; `C[a] p`
/// iff `p` holds at some `a`-alternative.
pub fn evaluate(m: &ModelSystem, w: WorldId, f: &Formula) -> Result<bool, ModelError> {
    m.check_world(w)?;
    Ok(eval(m, w, f))
}

fn eval(m: &ModelSystem, w: WorldId, f: &Formula) -> bool {
    match f {
        Formula::Atom(name) => m.is_true(w, name),
        Formula::Not(g) => !eval(m, w, g),
        Formula::And(l, r) => eval(m, w, l) && eval(m, w, r),
        Formula::Or(l, r) => eval(m, w, l) || eval(m, w, r),
        Formula::Implies(l, r) => !eval(m, w, l) || eval(m, w, r),
        Formula::Iff(l, r) => eval(m, w, l) == eval(m, w, r),
        Formula::Bel(a, g) => m.successors(a, w).all(|v| eval(m, v, g)),
        Formula::Comp(a, g) => m.successors(a, w).any(|v| eval(m, v, g)),
    }
}

/// Closed catalog of condition names a [`Violation`] can report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// `C.~`: a formula and its negation in one model set.
    Consistency,
    /// `C.&`
    Conjunction,
    /// `C.v`
    Disjunction,
    /// `C.~~`
    DoubleNegation,
    /// `C.~&`
    NegatedConjunction,
    /// `C.~v`
    NegatedDisjunction,
    /// `C.B`: some alternative contains the belief's content.
    BeliefWitness,
    /// `C.B*`: every alternative contains the belief's content.
    BeliefPropagation,
    /// `C.C`: some alternative contains the compatible content.
    Compatibility,
    /// `C.CB`: some alternative retains the belief itself.
    BeliefRetainedSomewhere,
    /// `C.BB*`: every alternative retains the belief itself.
    BeliefRetainedEverywhere,
    /// `C.~BB*`: every alternative retains a disbelief (KD45 only).
    DisbeliefRetainedEverywhere,
    /// `C.BDef`
    BeliefDefinition,
    /// `C.CDef`
    CompatibilityDefinition,
    Serial,
    Transitive,
    Euclidean,
    /// Some alternative `v` of `w` with `R[v] ⊆ R[w]` is missing.
    A3Witness,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        use ViolationKind::*;
        match self {
            Consistency => "C.~",
            Conjunction => "C.&",
            Disjunction => "C.v",
            DoubleNegation => "C.~~",
            NegatedConjunction => "C.~&",
            NegatedDisjunction => "C.~v",
            BeliefWitness => "C.B",
            BeliefPropagation => "C.B*",
            Compatibility => "C.C",
            BeliefRetainedSomewhere => "C.CB",
            BeliefRetainedEverywhere => "C.BB*",
            DisbeliefRetainedEverywhere => "C.~BB*",
            BeliefDefinition => "C.BDef",
            CompatibilityDefinition => "C.CDef",
            Serial => "serial",
            Transitive => "transitive",
            Euclidean => "euclidean",
            A3Witness => "a3-witness",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed frame or model-set condition. Violations are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub worlds: Vec<WorldId>,
    pub agent: Option<Agent>,
    pub formula: Option<Formula>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.kind)?;
        for w in &self.worlds {
            write!(f, " {w}")?;
        }
        if let Some(a) = &self.agent {
            write!(f, " agent {a}")?;
        }
        if let Some(g) = &self.formula {
            write!(f, " `{g}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn a() -> Agent {
        Agent::new("a").unwrap()
    }

    fn eval_text(m: &ModelSystem, w: usize, text: &str) -> bool {
        evaluate(m, WorldId(w), &parse(text).unwrap()).unwrap()
    }

    #[test]
    fn single_reflexive_world() {
        let mut m = ModelSystem::new(1).unwrap();
        m.set_true(WorldId(0), "p").unwrap();
        m.add_alternative(&a(), WorldId(0), WorldId(0)).unwrap();
        assert!(eval_text(&m, 0, "B[a] p"));
        assert!(!eval_text(&m, 0, "C[a] ~p"));
    }

    #[test]
    fn successor_falsifies_belief() {
        let mut m = ModelSystem::new(2).unwrap();
        m.set_true(WorldId(0), "p").unwrap();
        m.add_alternative(&a(), WorldId(0), WorldId(1)).unwrap();
        assert!(!eval_text(&m, 0, "B[a] p"));
        assert!(eval_text(&m, 0, "p & ~B[a] p"));
    }

    #[test]
    fn unmentioned_agent_has_no_alternatives() {
        let m = ModelSystem::new(1).unwrap();
        assert!(eval_text(&m, 0, "B[z] p"));
        assert!(!eval_text(&m, 0, "C[z] p"));
    }

    #[test]
    fn bad_world_is_a_usage_error() {
        let m = ModelSystem::new(1).unwrap();
        assert_eq!(
            evaluate(&m, WorldId(3), &parse("p").unwrap()),
            Err(ModelError::WorldOutOfRange {
                world: 3,
                worlds: 1
            })
        );
        assert_eq!(ModelSystem::new(0), Err(ModelError::NoWorlds));
    }

    #[test]
    fn profile_names_round_trip() {
        for p in LogicProfile::ALL {
            assert_eq!(p.name().parse::<LogicProfile>().unwrap(), p);
        }
        assert!("s5".parse::<LogicProfile>().is_err());
    }
}
