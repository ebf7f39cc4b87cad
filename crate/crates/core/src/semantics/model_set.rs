//! Syntactic model-set conditions on labeled model systems.
//!
//! Propositional conditions are checked inside each label; modal ones
//! relate a label to the labels of its alternatives. `C[a]` may appear in
//! labels: `C[a] p` demands an alternative containing `p` and, by definition,
//! the presence of `~B[a] ~p`; `~C[a] ~p` demands `B[a] p`. The converse
//! directions are not imposed, so desugared labels never trip the
//! definitional conditions.

use super::{LabeledModelSystem, LogicProfile, Violation, ViolationKind, WorldId};
use crate::formula::{Agent, Formula};

struct Checker<'a> {
    lm: &'a LabeledModelSystem,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn has(&self, w: WorldId, f: &Formula) -> bool {
        self.lm.label(w).contains(f)
    }

    fn report(
        &mut self,
        kind: ViolationKind,
        worlds: Vec<WorldId>,
        agent: Option<&Agent>,
        f: &Formula,
        message: String,
    ) {
        self.out.push(Violation {
            kind,
            worlds,
            agent: agent.cloned(),
            formula: Some(f.clone()),
            message,
        });
    }

    /// Some `agent`-alternative of `w` contains `needed`.
    fn somewhere(
        &mut self,
        kind: ViolationKind,
        w: WorldId,
        agent: &Agent,
        trigger: &Formula,
        needed: &Formula,
    ) {
        let m = &self.lm.model;
        if !m.successors(agent, w).any(|v| self.has(v, needed)) {
            self.report(
                kind,
                vec![w],
                Some(agent),
                trigger,
                format!("no {agent}-alternative of {w} contains `{needed}`"),
            );
        }
    }

    /// Every `agent`-alternative of `w` contains `needed`.
    fn everywhere(
        &mut self,
        kind: ViolationKind,
        w: WorldId,
        agent: &Agent,
        trigger: &Formula,
        needed: &Formula,
    ) {
        let missing: Vec<WorldId> = self
            .lm
            .model
            .successors(agent, w)
            .filter(|&v| !self.has(v, needed))
            .collect();
        for v in missing {
            self.report(
                kind,
                vec![w, v],
                Some(agent),
                trigger,
                format!("{agent}-alternative {v} of {w} lacks `{needed}`"),
            );
        }
    }

    fn world(&mut self, w: WorldId, profile: LogicProfile) {
        let label = self.lm.label(w).clone();
        for f in &label {
            let neg = f.negated();
            if label.contains(&neg) {
                self.report(
                    ViolationKind::Consistency,
                    vec![w],
                    None,
                    f,
                    format!("both `{f}` and `{neg}` in {w}"),
                );
            }
            match f {
                Formula::And(l, r) => {
                    if !(label.contains(l) && label.contains(r)) {
                        self.report(
                            ViolationKind::Conjunction,
                            vec![w],
                            None,
                            f,
                            "a conjunct is missing".into(),
                        );
                    }
                }
                Formula::Or(l, r) => {
                    if !(label.contains(l) || label.contains(r)) {
                        self.report(
                            ViolationKind::Disjunction,
                            vec![w],
                            None,
                            f,
                            "neither disjunct present".into(),
                        );
                    }
                }
                Formula::Bel(a, p) => {
                    self.somewhere(ViolationKind::BeliefWitness, w, a, f, p);
                    self.everywhere(ViolationKind::BeliefPropagation, w, a, f, p);
                    match profile {
                        LogicProfile::HStar => {
                            self.somewhere(ViolationKind::BeliefRetainedSomewhere, w, a, f, f)
                        }
                        LogicProfile::Hintikka | LogicProfile::Kd45 => {
                            self.everywhere(ViolationKind::BeliefRetainedEverywhere, w, a, f, f)
                        }
                        LogicProfile::Kd => {}
                    }
                }
                Formula::Comp(a, p) => {
                    self.somewhere(ViolationKind::Compatibility, w, a, f, p);
                    let def = Formula::not(Formula::bel(a, p.negated()));
                    if !label.contains(&def) {
                        self.report(
                            ViolationKind::CompatibilityDefinition,
                            vec![w],
                            Some(a),
                            f,
                            format!("`{def}` missing"),
                        );
                    }
                }
                Formula::Not(inner) => self.negated(w, f, inner, &label, profile),
                Formula::Atom(_) | Formula::Implies(..) | Formula::Iff(..) => {}
            }
        }
    }

    fn negated(
        &mut self,
        w: WorldId,
        f: &Formula,
        inner: &Formula,
        label: &std::collections::BTreeSet<Formula>,
        profile: LogicProfile,
    ) {
        match inner {
            Formula::Not(g) => {
                if !label.contains(&**g) {
                    self.report(
                        ViolationKind::DoubleNegation,
                        vec![w],
                        None,
                        f,
                        format!("`{g}` missing"),
                    );
                }
            }
            Formula::And(l, r) => {
                if !(label.contains(&l.negated()) || label.contains(&r.negated())) {
                    self.report(
                        ViolationKind::NegatedConjunction,
                        vec![w],
                        None,
                        f,
                        "neither negated conjunct present".into(),
                    );
                }
            }
            Formula::Or(l, r) => {
                if !(label.contains(&l.negated()) && label.contains(&r.negated())) {
                    self.report(
                        ViolationKind::NegatedDisjunction,
                        vec![w],
                        None,
                        f,
                        "a negated disjunct is missing".into(),
                    );
                }
            }
            Formula::Bel(a, p) => {
                self.somewhere(ViolationKind::Compatibility, w, a, f, &p.negated());
                if profile == LogicProfile::Kd45 {
                    self.everywhere(ViolationKind::DisbeliefRetainedEverywhere, w, a, f, f);
                }
            }
            Formula::Comp(a, p) => {
                if let Formula::Not(body) = &**p {
                    let def = Formula::Bel(a.clone(), body.clone());
                    if !label.contains(&def) {
                        self.report(
                            ViolationKind::BeliefDefinition,
                            vec![w],
                            Some(a),
                            f,
                            format!("`{def}` missing"),
                        );
                    }
                }
            }
            Formula::Atom(_) | Formula::Implies(..) | Formula::Iff(..) => {}
        }
    }
}

/// Every model-set condition of `profile` that some labeled world fails.
///
/// All profiles check the propositional conditions, `C.B`, `C.B*` and `C.C`;
/// hstar adds `C.CB`, hintikka `C.BB*`, kd45 both `C.BB*` and `C.~BB*`.
pub fn check_model_set(lm: &LabeledModelSystem, profile: LogicProfile) -> Vec<Violation> {
    let mut checker = Checker {
        lm,
        out: Vec::new(),
    };
    for w in lm.model.worlds() {
        checker.world(w, profile);
    }
    checker.out
}
