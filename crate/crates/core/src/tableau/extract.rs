//! Turns an open tableau into a model system.
//!
//! Alternatives found by the search are closed off per profile: hintikka
//! takes the transitive closure, kd45 the transitive-euclidean closure, and
//! hstar gives each world the alternatives of its whole witness chain, so
//! that a witness never sees more than the world it witnesses for. A world
//! with no alternative for some agent gets itself.

use std::collections::{BTreeSet, HashMap};

use super::search::Search;
use crate::formula::Formula;
use crate::semantics::{LabeledModelSystem, LogicProfile, ModelSystem, WorldId};

pub(super) fn extract(search: &Search, profile: LogicProfile) -> LabeledModelSystem {
    let n = search.nodes.len();
    let mut model = ModelSystem::new(n).expect("the root always exists");
    let mut labels = Vec::with_capacity(n);
    for (w, node) in search.nodes.iter().enumerate() {
        for f in &node.label {
            if let Formula::Atom(name) = f {
                model.set_true(WorldId(w), name).expect("world in range");
            }
        }
        labels.push(node.label.iter().cloned().collect::<BTreeSet<_>>());
    }

    for (agent_ix, agent) in search.agents.iter().enumerate() {
        let mut rel: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in search.edges.iter().filter(|e| e.agent == agent_ix) {
            rel[e.from].insert(e.to);
        }
        let mut witness: HashMap<usize, usize> = search
            .witnesses
            .iter()
            .filter(|&&(_, a, _)| a == agent_ix)
            .map(|&(w, _, v)| (w, v))
            .collect();
        for (w, succ) in rel.iter_mut().enumerate() {
            if succ.is_empty() {
                succ.insert(w);
                witness.insert(w, w);
            }
        }
        let rel = match profile {
            LogicProfile::Kd => rel,
            LogicProfile::HStar => chain_closure(&rel, &witness),
            LogicProfile::Hintikka => transitive_closure(rel),
            LogicProfile::Kd45 => euclidean_closure(rel),
        };
        model.add_agent(agent);
        for (w, succ) in rel.iter().enumerate() {
            for &v in succ {
                model
                    .add_alternative(agent, WorldId(w), WorldId(v))
                    .expect("world in range");
            }
        }
    }
    LabeledModelSystem::new(model, labels).expect("one label per world")
}

fn chain_closure(rel: &[BTreeSet<usize>], witness: &HashMap<usize, usize>) -> Vec<BTreeSet<usize>> {
    (0..rel.len())
        .map(|w| {
            let mut out = BTreeSet::new();
            let mut seen = BTreeSet::new();
            let mut cur = w;
            while seen.insert(cur) {
                out.extend(rel[cur].iter().copied());
                match witness.get(&cur) {
                    Some(&next) => cur = next,
                    None => break,
                }
            }
            out
        })
        .collect()
}

fn transitive_closure(mut rel: Vec<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    loop {
        let mut changed = false;
        for w in 0..rel.len() {
            let reach: Vec<usize> = rel[w]
                .iter()
                .flat_map(|&v| rel[v].iter().copied())
                .collect();
            for u in reach {
                changed |= rel[w].insert(u);
            }
        }
        if !changed {
            return rel;
        }
    }
}

fn euclidean_closure(mut rel: Vec<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    loop {
        rel = transitive_closure(rel);
        let mut changed = false;
        for w in 0..rel.len() {
            let succ: Vec<usize> = rel[w].iter().copied().collect();
            for &v in &succ {
                for &u in &succ {
                    changed |= rel[v].insert(u);
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(edges: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        edges.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn closures() {
        let chain = rel(&[&[1], &[2], &[2]]);
        assert_eq!(
            transitive_closure(chain.clone()),
            rel(&[&[1, 2], &[2], &[2]])
        );
        let fork = rel(&[&[1, 2], &[1], &[2]]);
        assert_eq!(euclidean_closure(fork), rel(&[&[1, 2], &[1, 2], &[1, 2]]));
        let witness = HashMap::from([(0, 1), (1, 2), (2, 2)]);
        assert_eq!(chain_closure(&chain, &witness), rel(&[&[1, 2], &[2], &[2]]));
    }
}
