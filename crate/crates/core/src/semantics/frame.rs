//! Frame conditions per profile.
//!
//! | profile  | conditions on each agent's relation R                  |
//! |----------|--------------------------------------------------------|
//! | kd       | serial                                                 |
//! | hstar    | serial, and every w has v with wRv and R[v] ⊆ R[w]     |
//! | hintikka | serial, transitive                                     |
//! | kd45     | serial, transitive, euclidean                          |

use std::collections::BTreeSet;

use super::{LogicProfile, ModelSystem, Violation, ViolationKind, WorldId};
use crate::formula::Agent;

struct Relation {
    succ: Vec<Vec<usize>>,
    matrix: Vec<Vec<bool>>,
}

impl Relation {
    fn from_successors(succ: Vec<Vec<usize>>) -> Self {
        let n = succ.len();
        let mut matrix = vec![vec![false; n]; n];
        for (from, targets) in succ.iter().enumerate() {
            for &to in targets {
                matrix[from][to] = true;
            }
        }
        Relation { succ, matrix }
    }

    fn subset(&self, v: usize, w: usize) -> bool {
        self.succ[v].iter().all(|&u| self.matrix[w][u])
    }
}

fn violations(
    rel: &Relation,
    agent: Option<&Agent>,
    profile: LogicProfile,
    first_only: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, worlds: Vec<usize>, message: String| {
        out.push(Violation {
            kind,
            worlds: worlds.into_iter().map(WorldId).collect(),
            agent: agent.cloned(),
            formula: None,
            message,
        });
        first_only
    };
    let n = rel.succ.len();

    for w in 0..n {
        if rel.succ[w].is_empty()
            && push(
                ViolationKind::Serial,
                vec![w],
                format!("w{w} has no alternative"),
            )
        {
            return out;
        }
    }

    if profile == LogicProfile::HStar {
        for w in 0..n {
            if rel.succ[w].is_empty() {
                continue;
            }
            if !rel.succ[w].iter().any(|&v| rel.subset(v, w))
                && push(
                    ViolationKind::A3Witness,
                    vec![w],
                    format!("no alternative of w{w} has its alternatives among those of w{w}"),
                )
            {
                return out;
            }
        }
    }

    if matches!(profile, LogicProfile::Hintikka | LogicProfile::Kd45) {
        let mut seen = BTreeSet::new();
        for u in 0..n {
            for &v in &rel.succ[u] {
                for &w in &rel.succ[v] {
                    if !rel.matrix[u][w]
                        && seen.insert((u, w))
                        && push(
                            ViolationKind::Transitive,
                            vec![u, w],
                            format!("w{u} -> w{v} -> w{w} but not w{u} -> w{w}"),
                        )
                    {
                        return out;
                    }
                }
            }
        }
    }

    if profile == LogicProfile::Kd45 {
        let mut seen = BTreeSet::new();
        for u in 0..n {
            for &v in &rel.succ[u] {
                for &w in &rel.succ[u] {
                    if !rel.matrix[v][w]
                        && seen.insert((v, w))
                        && push(
                            ViolationKind::Euclidean,
                            vec![v, w],
                            format!("w{u} -> w{v} and w{u} -> w{w} but not w{v} -> w{w}"),
                        )
                    {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Every frame condition of `profile` that some agent's relation in `m` fails.
pub fn check_frame(m: &ModelSystem, profile: LogicProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    for agent in m.agents() {
        let succ = m
            .worlds()
            .map(|w| m.successors(agent, w).map(|v| v.0).collect())
            .collect();
        out.extend(violations(
            &Relation::from_successors(succ),
            Some(agent),
            profile,
            false,
        ));
    }
    out
}

/// Whether a relation on `succ_masks.len()` worlds, given as one successor
/// bitmask per world, belongs to the frame class of `profile`.
pub fn relation_admitted(succ_masks: &[u32], profile: LogicProfile) -> bool {
    let n = succ_masks.len();
    let succ = succ_masks
        .iter()
        .map(|&mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
        .collect();
    violations(&Relation::from_successors(succ), None, profile, true).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Agent {
        Agent::new("a").unwrap()
    }

    fn model(n: usize, edges: &[(usize, usize)]) -> ModelSystem {
        let mut m = ModelSystem::new(n).unwrap();
        m.add_agent(&a());
        for &(u, v) in edges {
            m.add_alternative(&a(), WorldId(u), WorldId(v)).unwrap();
        }
        m
    }

    fn kinds(m: &ModelSystem, p: LogicProfile) -> Vec<(ViolationKind, Vec<usize>)> {
        check_frame(m, p)
            .into_iter()
            .map(|v| (v.kind, v.worlds.iter().map(|w| w.0).collect()))
            .collect()
    }

    #[test]
    fn empty_relation_is_only_a_seriality_failure() {
        let m = model(1, &[]);
        for p in LogicProfile::ALL {
            assert_eq!(kinds(&m, p), vec![(ViolationKind::Serial, vec![0])], "{p}");
        }
    }

    #[test]
    fn reflexive_point_is_in_every_class() {
        let m = model(1, &[(0, 0)]);
        for p in LogicProfile::ALL {
            assert!(check_frame(&m, p).is_empty(), "{p}");
        }
    }

    #[test]
    fn chain_without_shortcut_is_not_transitive() {
        let m = model(3, &[(0, 1), (1, 2), (2, 2)]);
        let found = kinds(&m, LogicProfile::Hintikka);
        assert!(found.contains(&(ViolationKind::Transitive, vec![0, 2])));
        // w1 -> w2 with R[w2] = {w2}: the A3 witness exists everywhere except w0,
        // whose only alternative w1 sees w2, which w0 does not.
        assert_eq!(
            kinds(&m, LogicProfile::HStar),
            vec![(ViolationKind::A3Witness, vec![0])]
        );
    }

    #[test]
    fn euclidean_failure() {
        let m = model(3, &[(0, 1), (0, 2), (1, 1), (2, 2)]);
        let found = kinds(&m, LogicProfile::Kd45);
        assert!(found.contains(&(ViolationKind::Euclidean, vec![1, 2])));
        assert!(check_frame(&m, LogicProfile::Hintikka).is_empty());
    }

    #[test]
    fn bitmask_view_agrees() {
        // w0 -> w1, w1 -> w1
        assert!(relation_admitted(&[0b10, 0b10], LogicProfile::Kd45));
        assert!(!relation_admitted(&[0b10, 0b00], LogicProfile::Kd));
    }
}
