//! Brute-force satisfiability by enumerating small models.
//!
//! Models come in a fixed order: world count ascending, then one relation
//! per agent (first agent outermost) as a bitmask with bit `from * n + to`,
//! then the valuation as a bitmask with bit `world * atoms + atom`. Frame
//! membership is decided by the same checker as [`check_frame`], never by
//! tableau rules.
//!
//! A `not-found` answer only means no model exists up to the budget.
//!
//! [`check_frame`]: crate::semantics::check_frame

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::formula::{agents, Agent, Formula};
use crate::semantics::{relation_admitted, LogicProfile, ModelSystem, WorldId};

pub const MAX_WORLDS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BudgetError {
    #[error("world budget must be between 1 and {MAX_WORLDS}, got {0}")]
    Worlds(usize),
    #[error("atom `{0}` is not in the budget")]
    Atom(String),
    #[error("agent `{0}` is not in the budget")]
    Agent(Agent),
    #[error("at most 63 valuation bits are supported, the budget needs {0}")]
    Valuations(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_worlds: usize,
    atoms: Vec<String>,
    agents: Vec<Agent>,
}

impl EnumerationBudget {
    pub fn new(
        max_worlds: usize,
        atoms: Vec<String>,
        agents: Vec<Agent>,
    ) -> Result<Self, BudgetError> {
        if max_worlds == 0 || max_worlds > MAX_WORLDS {
            return Err(BudgetError::Worlds(max_worlds));
        }
        if max_worlds * atoms.len() > 63 {
            return Err(BudgetError::Valuations(max_worlds * atoms.len()));
        }
        Ok(EnumerationBudget {
            max_worlds,
            atoms,
            agents,
        })
    }

    /// Exactly the atoms and agents of `f`.
    pub fn for_formula(f: &Formula, max_worlds: usize) -> Result<Self, BudgetError> {
        Self::new(
            max_worlds,
            f.atoms().into_iter().collect(),
            agents(f).into_iter().collect(),
        )
    }

    pub fn max_worlds(&self) -> usize {
        self.max_worlds
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    fn covers(&self, f: &Formula) -> Result<(), BudgetError> {
        if let Some(a) = f.atoms().into_iter().find(|a| !self.atoms.contains(a)) {
            return Err(BudgetError::Atom(a));
        }
        if let Some(a) = agents(f).into_iter().find(|a| !self.agents.contains(a)) {
            return Err(BudgetError::Agent(a));
        }
        Ok(())
    }
}

fn row_mask(n: usize) -> u64 {
    (1 << n) - 1
}

fn successor_masks(n: usize, relation: u64) -> Vec<u32> {
    (0..n)
        .map(|w| ((relation >> (w * n)) & row_mask(n)) as u32)
        .collect()
}

fn admitted(n: usize, relation: u64, profile: LogicProfile) -> bool {
    // Cheap seriality test first; most raw relations fail it.
    (0..n).all(|w| (relation >> (w * n)) & row_mask(n) != 0)
        && relation_admitted(&successor_masks(n, relation), profile)
}

const CACHED_WORLDS: usize = 4;

static ADMITTED: [[OnceLock<Vec<u64>>; CACHED_WORLDS]; 4] =
    [const { [const { OnceLock::new() }; CACHED_WORLDS] }; 4];

fn profile_index(profile: LogicProfile) -> usize {
    LogicProfile::ALL
        .iter()
        .position(|&p| p == profile)
        .expect("listed")
}

/// Admitted relations on `n` worlds in ascending order, cached for small `n`.
enum Relations {
    Listed(&'static [u64]),
    Scan { n: usize, profile: LogicProfile },
}

impl Relations {
    fn new(n: usize, profile: LogicProfile) -> Self {
        if n <= CACHED_WORLDS {
            let list = ADMITTED[profile_index(profile)][n - 1].get_or_init(|| {
                (0..1u64 << (n * n))
                    .filter(|&r| admitted(n, r, profile))
                    .collect()
            });
            Relations::Listed(list)
        } else {
            Relations::Scan { n, profile }
        }
    }

    /// Cursor of the first admitted relation at or after `cursor`.
    fn seek(&self, cursor: u64) -> Option<u64> {
        match self {
            Relations::Listed(list) => ((cursor as usize) < list.len()).then_some(cursor),
            Relations::Scan { n, profile } => {
                (cursor..1u64 << (n * n)).find(|&r| admitted(*n, r, *profile))
            }
        }
    }

    fn get(&self, cursor: u64) -> u64 {
        match self {
            Relations::Listed(list) => list[cursor as usize],
            Relations::Scan { .. } => cursor,
        }
    }
}

/// Steps through one admitted relation per agent, last agent fastest.
struct Odometer {
    relations: Relations,
    cursors: Vec<u64>,
    done: bool,
}

impl Odometer {
    fn new(n: usize, agents: usize, profile: LogicProfile) -> Self {
        let relations = Relations::new(n, profile);
        let first = relations.seek(0);
        Odometer {
            relations,
            cursors: vec![first.unwrap_or(0); agents],
            done: first.is_none(),
        }
    }

    /// The current tuple, then advance.
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let current = self
            .cursors
            .iter()
            .map(|&c| self.relations.get(c))
            .collect();
        let mut i = self.cursors.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            match self.relations.seek(self.cursors[i] + 1) {
                Some(c) => {
                    self.cursors[i] = c;
                    break;
                }
                None => self.cursors[i] = self.relations.seek(0).expect("nonempty"),
            }
        }
        Some(current)
    }
}

fn build(n: usize, budget: &EnumerationBudget, relations: &[u64], valuation: u64) -> ModelSystem {
    let mut m = ModelSystem::new(n).expect("n >= 1");
    let k = budget.atoms.len();
    for w in 0..n {
        for (i, atom) in budget.atoms.iter().enumerate() {
            if valuation >> (w * k + i) & 1 == 1 {
                m.set_true(WorldId(w), atom).expect("in range");
            }
        }
    }
    for (agent, &rel) in budget.agents.iter().zip(relations) {
        m.add_agent(agent);
        for from in 0..n {
            for to in 0..n {
                if rel >> (from * n + to) & 1 == 1 {
                    m.add_alternative(agent, WorldId(from), WorldId(to))
                        .expect("in range");
                }
            }
        }
    }
    m
}

/// Every model up to the budget whose relations lie in the frame class.
pub fn enumerate_models(
    budget: &EnumerationBudget,
    profile: LogicProfile,
) -> impl Iterator<Item = ModelSystem> + '_ {
    (1..=budget.max_worlds).flat_map(move |n| {
        let mut odometer = Odometer::new(n, budget.agents.len(), profile);
        let valuations = 1u64 << (n * budget.atoms.len());
        std::iter::from_fn(move || odometer.next())
            .flat_map(move |rels| (0..valuations).map(move |v| build(n, budget, &rels, v)))
    })
}

/// The first enumerated model whose designated world satisfies `f`.
pub fn sat_upto(
    f: &Formula,
    budget: &EnumerationBudget,
    profile: LogicProfile,
) -> Result<Option<ModelSystem>, BudgetError> {
    budget.covers(f)?;
    for n in 1..=budget.max_worlds {
        if let Some((rels, v)) = search_size(f, budget, profile, n) {
            return Ok(Some(build(n, budget, &rels, v)));
        }
    }
    Ok(None)
}

/// Bit-parallel search over one world count: each u64 holds `64 / n`
/// valuations side by side, `n` bits per valuation.
fn search_size(
    f: &Formula,
    budget: &EnumerationBudget,
    profile: LogicProfile,
    n: usize,
) -> Option<(Vec<u64>, u64)> {
    let k = budget.atoms.len();
    let lanes = 64 / n;
    let lane_mask = (0..lanes).fold(0u64, |acc, l| acc | 1 << (l * n));
    let valuations = 1u64 << (n * k);
    let atom_index: BTreeMap<&str, usize> = budget
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let agent_index: BTreeMap<&Agent, usize> = budget
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect();

    let mut odometer = Odometer::new(n, budget.agents.len(), profile);
    while let Some(rels) = odometer.next() {
        let succ: Vec<Vec<u32>> = rels.iter().map(|&r| successor_masks(n, r)).collect();
        let mut base = 0;
        while base < valuations {
            let count = (valuations - base).min(lanes as u64) as usize;
            let mut atoms = vec![0u64; k];
            for l in 0..count {
                let v = base + l as u64;
                for (i, bits) in atoms.iter_mut().enumerate() {
                    for w in 0..n {
                        if v >> (w * k + i) & 1 == 1 {
                            *bits |= 1 << (l * n + w);
                        }
                    }
                }
            }
            let ctx = Lanes {
                n,
                lane_mask,
                full: if lanes * n == 64 {
                    u64::MAX
                } else {
                    (1 << (lanes * n)) - 1
                },
                atoms: &atoms,
                atom_index: &atom_index,
                agent_index: &agent_index,
                succ: &succ,
            };
            let valid = if count == lanes {
                lane_mask
            } else {
                lane_mask & ((1 << (count * n)) - 1)
            };
            let hits = ctx.eval(f) & valid;
            if hits != 0 {
                let lane = hits.trailing_zeros() as usize / n;
                return Some((rels, base + lane as u64));
            }
            base += lanes as u64;
        }
    }
    None
}

struct Lanes<'a> {
    n: usize,
    lane_mask: u64,
    full: u64,
    atoms: &'a [u64],
    atom_index: &'a BTreeMap<&'a str, usize>,
    agent_index: &'a BTreeMap<&'a Agent, usize>,
    succ: &'a [Vec<u32>],
}

impl Lanes<'_> {
    fn eval(&self, f: &Formula) -> u64 {
        match f {
            Formula::Atom(a) => self.atoms[self.atom_index[a.as_str()]],
            Formula::Not(g) => !self.eval(g) & self.full,
            Formula::And(l, r) => self.eval(l) & self.eval(r),
            Formula::Or(l, r) => self.eval(l) | self.eval(r),
            Formula::Implies(l, r) => (!self.eval(l) | self.eval(r)) & self.full,
            Formula::Iff(l, r) => !(self.eval(l) ^ self.eval(r)) & self.full,
            Formula::Bel(a, g) => self.modal(a, self.eval(g), true),
            Formula::Comp(a, g) => self.modal(a, self.eval(g), false),
        }
    }

    /// All (`every`) or some successors satisfy `x`, in every lane at once.
    fn modal(&self, agent: &Agent, x: u64, every: bool) -> u64 {
        let succ = &self.succ[self.agent_index[agent]];
        let mut out = 0;
        for (w, &row) in succ.iter().enumerate() {
            let mut acc = if every { self.lane_mask } else { 0 };
            for u in 0..self.n {
                if row >> u & 1 == 1 {
                    let bit = (x >> u) & self.lane_mask;
                    acc = if every { acc & bit } else { acc | bit };
                }
            }
            out |= acc << w;
        }
        out
    }
}

/// Truth of `f` at the designated world, computed world-by-world from the
/// leaves up. Shares no code with [`crate::semantics::evaluate`].
pub fn evaluate_model(m: &ModelSystem, f: &Formula) -> bool {
    values(m, f)[m.designated().0]
}

fn values(m: &ModelSystem, f: &Formula) -> Vec<bool> {
    let worlds: Vec<WorldId> = m.worlds().collect();
    let modal = |a: &Agent, g: &Formula, every: bool| {
        let inner = values(m, g);
        worlds
            .iter()
            .map(|&w| {
                let mut succ = m.successors(a, w).map(|v| inner[v.0]);
                if every {
                    succ.all(|b| b)
                } else {
                    succ.any(|b| b)
                }
            })
            .collect()
    };
    let zip = |l: &Formula, r: &Formula, op: fn(bool, bool) -> bool| {
        values(m, l)
            .into_iter()
            .zip(values(m, r))
            .map(|(x, y)| op(x, y))
            .collect()
    };
    match f {
        Formula::Atom(a) => worlds.iter().map(|&w| m.is_true(w, a)).collect(),
        Formula::Not(g) => values(m, g).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => zip(l, r, |x, y| x && y),
        Formula::Or(l, r) => zip(l, r, |x, y| x || y),
        Formula::Implies(l, r) => zip(l, r, |x, y| !x || y),
        Formula::Iff(l, r) => zip(l, r, |x, y| x == y),
        Formula::Bel(a, g) => modal(a, g, true),
        Formula::Comp(a, g) => modal(a, g, false),
    }
}
