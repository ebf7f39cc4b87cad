//! Depth-first model-set construction.
//!
//! A world is expanded by (1) the non-branching propositional rules to
//! saturation, (2) disjunctive splits, left first, (3) for kd45 a case
//! split on every undecided `B[a] r` inside the scope of the world's own
//! `a`-literals, and finally (4) one
//! alternative per `~B[a] d` (read as `C[a] ~d`), plus a seriality or
//! introspection witness where the profile needs one. Each alternative is
//! seeded with its core formulas and expanded recursively; a failure undoes
//! everything back to the last open choice point.
//!
//! A new alternative whose core is contained in the label of a world on its
//! ancestor path, or of any finished world, is not expanded: the edge goes
//! to that world instead.
//! Cores are subsets of the query's closure, so paths are bounded and the
//! search terminates. Cores that closed once are remembered and fail at
//! once when they recur.
//!
//! Every step records the choices (split branches and introspection
//! witnesses) its derivation rests on. When an alternative closes without
//! using anything chosen since the enclosing choice point, the remaining
//! alternatives at that point would close the same way and are skipped.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::trace::{ProofStep, Rule};
use crate::formula::{Agent, Formula};
use crate::semantics::LogicProfile;

/// Counters for one decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub worlds_created: usize,
    pub rules_fired: usize,
    pub blocks_applied: usize,
}

#[derive(Clone, Debug)]
struct RawStep {
    world: usize,
    formula: Formula,
    rule: Rule,
    premises: Vec<usize>,
    /// Choice steps this one depends on.
    deps: Reason,
}

/// Choice steps a closure depends on.
type Reason = BTreeSet<usize>;

#[derive(Clone, Debug)]
pub(super) struct Node {
    pub label: Vec<Formula>,
    /// Step that introduced each label formula.
    index: HashMap<Formula, usize>,
    pub parent: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug)]
pub(super) struct Edge {
    pub from: usize,
    pub agent: usize,
    pub to: usize,
}

/// An alternative that was not expanded because an ancestor covers it.
#[derive(Clone, Copy, Debug)]
pub(super) struct Blocked {
    pub parent: usize,
    pub agent: usize,
    pub by: usize,
}

struct Checkpoint {
    nodes: usize,
    edges: usize,
    witnesses: usize,
    blocked: usize,
    steps: usize,
    world: usize,
    label: usize,
}

#[derive(Clone, Copy)]
enum Premise {
    Step(usize),
    /// The rewrite of the `~B[a] d` introduced by this step, emitted when
    /// the alternative is actually created.
    RewriteOf(usize),
}

#[derive(Clone)]
struct Seed {
    formula: Formula,
    rule: Rule,
    premise: Premise,
}

#[derive(Clone, Default)]
struct ChildSpec {
    seeds: Vec<Seed>,
    /// hstar: this child serves as the introspection witness.
    witness: bool,
}

impl ChildSpec {
    fn push(&mut self, formula: Formula, rule: Rule, premise: Premise) {
        if !self.seeds.iter().any(|s| s.formula == formula) {
            self.seeds.push(Seed {
                formula,
                rule,
                premise,
            });
        }
    }
}

pub(super) struct Search {
    profile: LogicProfile,
    pub agents: Vec<Agent>,
    /// Cores of alternatives known to close.
    failed: HashSet<Vec<Formula>>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// hstar: (world, agent, witness world).
    pub witnesses: Vec<(usize, usize, usize)>,
    pub blocked: Vec<Blocked>,
    steps: Vec<RawStep>,
    last_clash: Option<Vec<ProofStep>>,
    pub stats: Stats,
}

impl Search {
    pub fn new(query: &Formula, profile: LogicProfile) -> Self {
        let agents: Vec<Agent> = crate::formula::agents(query).into_iter().collect();
        Search {
            profile,
            agents,
            failed: HashSet::new(),
            nodes: Vec::new(),
            edges: Vec::new(),
            witnesses: Vec::new(),
            blocked: Vec::new(),
            steps: Vec::new(),
            last_clash: None,
            stats: Stats::default(),
        }
    }

    /// Expands the desugared `query` from a fresh root; true iff open.
    pub fn run(&mut self, query: &Formula) -> bool {
        self.new_node(None);
        self.add(0, query.clone(), Rule::Seed, Vec::new())
            .and_then(|()| self.expand(0, 0))
            .is_ok()
    }

    /// The clash cone of the last closed exploration.
    pub fn take_trace(&mut self) -> Option<Vec<ProofStep>> {
        self.last_clash.take()
    }

    fn new_node(&mut self, parent: Option<(usize, usize)>) -> usize {
        self.nodes.push(Node {
            label: Vec::new(),
            index: HashMap::new(),
            parent,
        });
        self.stats.worlds_created += 1;
        self.nodes.len() - 1
    }

    fn push_step(
        &mut self,
        world: usize,
        formula: Formula,
        rule: Rule,
        premises: Vec<usize>,
    ) -> usize {
        let id = self.steps.len();
        let mut deps = Reason::new();
        for &p in &premises {
            deps.extend(self.steps[p].deps.iter().copied());
        }
        let choice = matches!(
            rule,
            Rule::OrLeft
                | Rule::OrRight
                | Rule::NotAndLeft
                | Rule::NotAndRight
                | Rule::Cut
                | Rule::BeliefRetainedSomewhere
        );
        if choice {
            deps.insert(id);
        }
        self.steps.push(RawStep {
            world,
            formula,
            rule,
            premises,
            deps,
        });
        self.stats.rules_fired += 1;
        self.steps.len() - 1
    }

    fn has(&self, w: usize, f: &Formula) -> bool {
        self.nodes[w].index.contains_key(f)
    }

    fn step_of(&self, w: usize, f: &Formula) -> usize {
        self.nodes[w].index[f]
    }

    /// Adds `f` to world `w` unless present; reports a clash with its complement.
    fn add(
        &mut self,
        w: usize,
        f: Formula,
        rule: Rule,
        premises: Vec<usize>,
    ) -> Result<(), Reason> {
        if self.has(w, &f) {
            return Ok(());
        }
        let id = self.push_step(w, f.clone(), rule, premises);
        let complement = f.complement();
        let node = &mut self.nodes[w];
        node.label.push(f.clone());
        node.index.insert(f.clone(), id);
        if let Some(&other) = node.index.get(&complement) {
            let (pos, neg, pos_id, neg_id) = match &f {
                Formula::Not(_) => (complement, f, other, id),
                _ => (f, complement, id, other),
            };
            let clash =
                self.push_step(w, Formula::and(pos, neg), Rule::Clash, vec![pos_id, neg_id]);
            self.last_clash = Some(self.cone(clash));
            return Err(self.steps[clash].deps.clone());
        }
        Ok(())
    }

    fn checkpoint(&self, w: usize) -> Checkpoint {
        Checkpoint {
            nodes: self.nodes.len(),
            edges: self.edges.len(),
            witnesses: self.witnesses.len(),
            blocked: self.blocked.len(),
            steps: self.steps.len(),
            world: w,
            label: self.nodes[w].label.len(),
        }
    }

    fn restore(&mut self, cp: Checkpoint) {
        self.nodes.truncate(cp.nodes);
        self.edges.truncate(cp.edges);
        self.witnesses.truncate(cp.witnesses);
        self.blocked.truncate(cp.blocked);
        self.steps.truncate(cp.steps);
        let node = &mut self.nodes[cp.world];
        while node.label.len() > cp.label {
            let f = node.label.pop().expect("longer than checkpoint");
            node.index.remove(&f);
        }
    }

    fn expand(&mut self, w: usize, mut cursor: usize) -> Result<(), Reason> {
        while cursor < self.nodes[w].label.len() {
            let f = self.nodes[w].label[cursor].clone();
            let sid = self.step_of(w, &f);
            let applied = match f {
                Formula::And(l, r) => self
                    .add(w, *l, Rule::And, vec![sid])
                    .and_then(|()| self.add(w, *r, Rule::And, vec![sid])),
                Formula::Not(inner) => match *inner {
                    Formula::Not(g) => self.add(w, *g, Rule::DoubleNegation, vec![sid]),
                    Formula::Or(l, r) => self
                        .add(w, l.negated(), Rule::NotOr, vec![sid])
                        .and_then(|()| self.add(w, r.negated(), Rule::NotOr, vec![sid])),
                    _ => Ok(()),
                },
                _ => Ok(()),
            };
            applied?;
            cursor += 1;
        }

        if let Some(split) = self.open_split(w) {
            return self.branch(w, cursor, split);
        }
        for agent in 0..self.agents.len() {
            self.expand_agent(w, agent)?;
        }
        Ok(())
    }

    /// First disjunctive formula with neither branch present, then (kd45)
    /// the first undecided cut candidate.
    fn open_split(&self, w: usize) -> Option<[(Formula, Rule, Vec<usize>); 2]> {
        for f in &self.nodes[w].label {
            let sid = self.step_of(w, f);
            let split = match f {
                Formula::Or(l, r) => [
                    ((**l).clone(), Rule::OrLeft),
                    ((**r).clone(), Rule::OrRight),
                ],
                Formula::Not(inner) => match &**inner {
                    Formula::And(l, r) => [
                        (l.negated(), Rule::NotAndLeft),
                        (r.negated(), Rule::NotAndRight),
                    ],
                    _ => continue,
                },
                _ => continue,
            };
            if !self.has(w, &split[0].0) && !self.has(w, &split[1].0) {
                let [(l, rl), (r, rr)] = split;
                return Some([(l, rl, vec![sid]), (r, rr, vec![sid])]);
            }
        }
        if self.profile == LogicProfile::Kd45 {
            // Only beliefs an alternative could come to contain need deciding.
            for f in &self.nodes[w].label {
                let (a, body) = match f {
                    Formula::Bel(a, body) => (a, body),
                    Formula::Not(inner) => match &**inner {
                        Formula::Bel(a, body) => (a, body),
                        _ => continue,
                    },
                    _ => continue,
                };
                for g in body.subformulas() {
                    if matches!(g, Formula::Bel(b, _) if b == a) {
                        let dis = g.negated();
                        if !self.has(w, g) && !self.has(w, &dis) {
                            return Some([
                                (g.clone(), Rule::Cut, vec![]),
                                (dis, Rule::Cut, vec![]),
                            ]);
                        }
                    }
                }
            }
        }
        None
    }

    fn branch(
        &mut self,
        w: usize,
        cursor: usize,
        split: [(Formula, Rule, Vec<usize>); 2],
    ) -> Result<(), Reason> {
        let [(left, lrule, lprem), (right, rrule, rprem)] = split;
        let cp = self.checkpoint(w);
        let since = cp.steps;
        let Err(mut reason) = self
            .add(w, left, lrule, lprem)
            .and_then(|()| self.expand(w, cursor))
        else {
            return Ok(());
        };
        self.restore(cp);
        if reason.range(since..).next().is_none() {
            return Err(reason);
        }
        let right = self
            .add(w, right, rrule, rprem)
            .and_then(|()| self.expand(w, cursor));
        if let Err(r) = right {
            reason.extend(r);
            reason.retain(|&id| id < since);
            return Err(reason);
        }
        Ok(())
    }

    /// Creates the `agent`-alternatives of the saturated world `w`.
    fn expand_agent(&mut self, w: usize, agent: usize) -> Result<(), Reason> {
        let a = &self.agents[agent];
        let mut beliefs: Vec<(Formula, usize)> = Vec::new();
        let mut demands: Vec<(Formula, Formula, usize)> = Vec::new();
        for f in &self.nodes[w].label {
            match f {
                Formula::Bel(b, body) if b == a => {
                    beliefs.push(((**body).clone(), self.step_of(w, f)))
                }
                Formula::Not(inner) => {
                    if let Formula::Bel(b, body) = &**inner {
                        if b == a {
                            demands.push((f.clone(), (**body).clone(), self.step_of(w, f)));
                        }
                    }
                }
                _ => {}
            }
        }
        if beliefs.is_empty() && demands.is_empty() {
            // Extraction gives such a world a reflexive alternative.
            return Ok(());
        }
        let a = a.clone();
        let profile = self.profile;
        let retain_beliefs = matches!(profile, LogicProfile::Hintikka | LogicProfile::Kd45);

        let inherited = |spec: &mut ChildSpec, first_rule: Rule| {
            for (i, (body, sid)) in beliefs.iter().enumerate() {
                let rule = if i == 0 {
                    first_rule
                } else {
                    Rule::BeliefPropagation
                };
                spec.push(body.clone(), rule, Premise::Step(*sid));
            }
            if retain_beliefs {
                for (body, sid) in &beliefs {
                    spec.push(
                        Formula::bel(&a, body.clone()),
                        Rule::BeliefRetainedEverywhere,
                        Premise::Step(*sid),
                    );
                }
            }
            if profile == LogicProfile::Kd45 {
                for (f, _, sid) in &demands {
                    spec.push(
                        f.clone(),
                        Rule::DisbeliefRetainedEverywhere,
                        Premise::Step(*sid),
                    );
                }
            }
        };
        let retained = |spec: &mut ChildSpec| {
            for (body, sid) in &beliefs {
                spec.push(
                    Formula::bel(&a, body.clone()),
                    Rule::BeliefRetainedSomewhere,
                    Premise::Step(*sid),
                );
            }
            spec.witness = true;
        };

        let mut demand_specs = Vec::new();
        for (_, body, sid) in &demands {
            let mut spec = ChildSpec::default();
            spec.push(
                body.negated(),
                Rule::Compatibility,
                Premise::RewriteOf(*sid),
            );
            inherited(&mut spec, Rule::BeliefPropagation);
            demand_specs.push(spec);
        }

        let mut options: Vec<Vec<ChildSpec>> = Vec::new();
        if profile == LogicProfile::HStar {
            if beliefs.is_empty() {
                let mut specs = demand_specs;
                specs[0].witness = true;
                options.push(specs);
            } else {
                // Reuse a compatibility alternative as the witness first,
                // fall back to a fresh one.
                for i in 0..demand_specs.len() {
                    let mut specs = demand_specs.clone();
                    retained(&mut specs[i]);
                    options.push(specs);
                }
                let mut fresh = ChildSpec::default();
                inherited(&mut fresh, Rule::BeliefPropagation);
                retained(&mut fresh);
                let mut specs = demand_specs;
                specs.push(fresh);
                options.push(specs);
            }
        } else if demand_specs.is_empty() {
            let mut serial = ChildSpec::default();
            inherited(&mut serial, Rule::BeliefWitness);
            options.push(vec![serial]);
        } else {
            options.push(demand_specs);
        }

        let since = self.steps.len();
        let mut reason = Reason::new();
        for option in options {
            let cp = self.checkpoint(w);
            let mut closed = None;
            for spec in &option {
                match self.spawn(w, agent, spec) {
                    Ok(target) => {
                        if spec.witness {
                            self.witnesses.push((w, agent, target));
                        }
                    }
                    Err(r) => {
                        closed = Some(r);
                        break;
                    }
                }
            }
            let Some(r) = closed else {
                return Ok(());
            };
            self.restore(cp);
            if r.range(since..).next().is_none() {
                return Err(r);
            }
            reason.extend(r);
        }
        reason.retain(|&id| id < since);
        Err(reason)
    }

    /// Creates (or blocks) one alternative; returns the world the edge
    /// points to, or the reason it closes.
    fn spawn(&mut self, w: usize, agent: usize, spec: &ChildSpec) -> Result<usize, Reason> {
        let core: BTreeSet<&Formula> = spec.seeds.iter().map(|s| &s.formula).collect();
        // Ancestors first; every other world is finished and open.
        let mut path = Vec::new();
        let mut ancestor = Some(w);
        while let Some(u) = ancestor {
            path.push(u);
            ancestor = self.nodes[u].parent.map(|(p, _)| p);
        }
        // kd45 alternatives share their beliefs, so the covering world may
        // hold no `a`-literal beyond the core.
        let a = &self.agents[agent];
        let exact = self.profile == LogicProfile::Kd45;
        let covers = |u: usize| {
            core.iter().all(|f| self.has(u, f))
                && (!exact
                    || self.nodes[u]
                        .label
                        .iter()
                        .all(|f| !is_literal_of(f, a) || core.contains(f)))
        };
        let covering = path
            .into_iter()
            .chain(0..self.nodes.len())
            .find(|&u| covers(u));
        if let Some(u) = covering {
            self.edges.push(Edge {
                from: w,
                agent,
                to: u,
            });
            self.blocked.push(Blocked {
                parent: w,
                agent,
                by: u,
            });
            self.stats.blocks_applied += 1;
            return Ok(u);
        }
        // A closed core is unsatisfiable wherever it shows up again.
        let key: Vec<Formula> = core.into_iter().cloned().collect();
        if self.failed.contains(&key) {
            let mut reason = Reason::new();
            for seed in &spec.seeds {
                let (Premise::Step(sid) | Premise::RewriteOf(sid)) = seed.premise;
                reason.extend(self.steps[sid].deps.iter().copied());
                if seed.rule == Rule::BeliefRetainedSomewhere {
                    // Stands for the witness choice made by the caller.
                    reason.insert(self.steps.len());
                }
            }
            return Err(reason);
        }

        let child = self.new_node(Some((w, agent)));
        self.edges.push(Edge {
            from: w,
            agent,
            to: child,
        });
        for seed in &spec.seeds {
            let premise = match seed.premise {
                Premise::Step(sid) => sid,
                Premise::RewriteOf(sid) => {
                    let Formula::Not(inner) = &self.steps[sid].formula else {
                        unreachable!("rewrite of a non-negation")
                    };
                    let Formula::Bel(a, body) = &**inner else {
                        unreachable!("rewrite of a non-belief")
                    };
                    let shown = Formula::comp(a, body.negated());
                    self.push_step(w, shown, Rule::DefinitionRewrite, vec![sid])
                }
            };
            if let Err(r) = self.add(child, seed.formula.clone(), seed.rule, vec![premise]) {
                self.failed.insert(key);
                return Err(r);
            }
        }
        match self.expand(child, 0) {
            Ok(()) => Ok(child),
            Err(r) => {
                self.failed.insert(key);
                Err(r)
            }
        }
    }

    /// The steps the clash at `clash` depends on, renumbered from 1, with
    /// worlds renamed in order of first appearance.
    fn cone(&self, clash: usize) -> Vec<ProofStep> {
        let mut keep = BTreeSet::new();
        let mut stack = vec![clash];
        while let Some(s) = stack.pop() {
            if keep.insert(s) {
                stack.extend(self.steps[s].premises.iter().copied());
            }
        }
        let mut number = HashMap::new();
        let mut world_names: HashMap<usize, String> = HashMap::new();
        let mut out = Vec::with_capacity(keep.len());
        for (pos, &s) in keep.iter().enumerate() {
            number.insert(s, pos + 1);
            let raw = &self.steps[s];
            let next = world_names.len();
            let world = world_names
                .entry(raw.world)
                .or_insert_with(|| format!("w{next}"))
                .clone();
            out.push(ProofStep {
                index: pos + 1,
                world,
                formula: raw.formula.clone(),
                rule: raw.rule,
                premises: raw.premises.iter().map(|p| number[p]).collect(),
            });
        }
        out
    }
}

/// `B[a] p` or `~B[a] p`.
fn is_literal_of(f: &Formula, a: &Agent) -> bool {
    match f {
        Formula::Bel(b, _) => b == a,
        Formula::Not(inner) => matches!(&**inner, Formula::Bel(b, _) if b == a),
        _ => false,
    }
}
