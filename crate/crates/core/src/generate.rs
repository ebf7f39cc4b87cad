//! Random formulas for property tests and cross-checks.

use rand::Rng;

use crate::formula::{Agent, Formula};

/// A formula of depth at most `max_depth` over the given atoms and agents,
/// using every constructor including the sugared ones. Modal operators are
/// skipped when `agents` is empty.
///
/// # Panics
///
/// If `atoms` is empty.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    max_depth: usize,
    atoms: &[&str],
    agents: &[Agent],
) -> Formula {
    assert!(!atoms.is_empty(), "need at least one atom");
    let leaf = |rng: &mut R| Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    if max_depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let kinds = if agents.is_empty() { 5 } else { 7 };
    let d = max_depth - 1;
    let sub = |rng: &mut R| random_formula(rng, d, atoms, agents);
    match rng.gen_range(0..kinds) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => {
            let a = &agents[rng.gen_range(0..agents.len())];
            Formula::bel(a, sub(rng))
        }
        _ => {
            let a = &agents[rng.gen_range(0..agents.len())];
            Formula::comp(a, sub(rng))
        }
    }
}
