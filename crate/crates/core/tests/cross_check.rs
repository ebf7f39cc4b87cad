//! The tableau against brute-force enumeration on random formulas.

use doxa::generate::random_formula;
use doxa::oracle::{evaluate_model, sat_upto, EnumerationBudget};
use doxa::tableau::{check_trace, render_trace, Outcome, TraceFormat};
use doxa::{check_frame, check_model_set, decide_sat, Agent, Formula, LogicProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check(f: &Formula, profile: LogicProfile, budget: &EnumerationBudget) {
    let verdict = decide_sat(f, profile).unwrap_or_else(|e| panic!("`{f}` under {profile}: {e}"));
    match &verdict.outcome {
        Outcome::Sat { model, .. } => {
            assert!(
                evaluate_model(&model.model, f),
                "`{f}` under {profile}: model fails"
            );
            assert!(check_frame(&model.model, profile).is_empty());
            let violations = check_model_set(model, profile);
            assert!(
                violations.is_empty(),
                "`{f}` under {profile}: {violations:?}"
            );
        }
        Outcome::Unsat(trace) => {
            if let Err(e) = check_trace(trace, f, profile) {
                panic!(
                    "`{f}` under {profile}: {e}\n{}",
                    render_trace(trace, TraceFormat::Text)
                );
            }
            let found = sat_upto(f, budget, profile).unwrap();
            assert!(
                found.is_none(),
                "`{f}` under {profile}: engine says unsat, oracle found {found:?}"
            );
        }
    }
}

#[test]
fn one_atom_one_agent_depth_four() {
    let a = Agent::new("a").unwrap();
    let budget = EnumerationBudget::new(4, vec!["p".into()], vec![a.clone()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let f = random_formula(&mut rng, 4, &["p"], std::slice::from_ref(&a));
        for profile in LogicProfile::ALL {
            check(&f, profile, &budget);
        }
    }
}

#[test]
fn two_atoms_two_agents_depth_three() {
    let agents = [Agent::new("a").unwrap(), Agent::new("b").unwrap()];
    let budget = EnumerationBudget::new(2, vec!["p".into(), "q".into()], agents.to_vec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let f = random_formula(&mut rng, 3, &["p", "q"], &agents);
        for profile in LogicProfile::ALL {
            check(&f, profile, &budget);
        }
    }
}
