use doxa::oracle::{enumerate_models, evaluate_model, sat_upto, BudgetError, EnumerationBudget};
use doxa::{check_frame, parse, Agent, LogicProfile};

fn budget(n: usize) -> EnumerationBudget {
    EnumerationBudget::new(n, vec!["p".into()], vec![Agent::new("a").unwrap()]).unwrap()
}

fn exactly(n: usize, profile: LogicProfile) -> usize {
    enumerate_models(&budget(n), profile)
        .filter(|m| m.world_count() == n)
        .count()
}

#[test]
fn model_counts() {
    assert_eq!(exactly(1, LogicProfile::Kd), 2);
    assert_eq!(exactly(1, LogicProfile::HStar), 2);
    assert_eq!(exactly(2, LogicProfile::Kd), 36);
    // Serial relations on 3 worlds: (2^3 - 1)^3.
    assert_eq!(exactly(3, LogicProfile::Kd), 343 * 8);
}

#[test]
fn every_model_is_in_the_frame_class() {
    for profile in LogicProfile::ALL {
        for m in enumerate_models(&budget(3), profile) {
            assert!(check_frame(&m, profile).is_empty());
        }
    }
}

#[test]
fn bounded_search() {
    let found = |text: &str, n, p| sat_upto(&parse(text).unwrap(), &budget(n), p).unwrap();
    assert!(found("p & ~p", 2, LogicProfile::Kd).is_none());
    assert!(found("B[a](p & ~B[a] p)", 4, LogicProfile::HStar).is_none());
    let m = found("B[a] p & C[a] ~B[a] p", 4, LogicProfile::HStar).unwrap();
    assert!(evaluate_model(&m, &parse("B[a] p & C[a] ~B[a] p").unwrap()));
    assert!(found("B[a] p & C[a] ~B[a] p", 4, LogicProfile::Hintikka).is_none());
    let m = found("B[a] p", 1, LogicProfile::Kd45).unwrap();
    assert_eq!(m.world_count(), 1);
}

#[test]
fn budget_is_capped() {
    assert_eq!(
        EnumerationBudget::new(6, vec!["p".into()], vec![]),
        Err(BudgetError::Worlds(6))
    );
    assert_eq!(
        EnumerationBudget::new(0, vec!["p".into()], vec![]),
        Err(BudgetError::Worlds(0))
    );
}
