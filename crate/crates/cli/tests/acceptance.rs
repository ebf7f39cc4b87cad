//! Acceptance gate: every criterion prints one PASS/FAIL line, and the test
//! fails if any criterion does.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use doxa::generate::random_formula;
use doxa::oracle::{enumerate_models, evaluate_model, sat_upto, EnumerationBudget};
use doxa::tableau::{check_trace, Outcome, Rule, Validity, Verdict};
use doxa::{
    check_frame, decide_sat, decide_valid, desugar, evaluate, parse, render, subformula_closure,
    Agent, Formula, LogicProfile, WorldId,
};
use doxa_cli::{parse_corpus, run, CorpusMode, Expected, Io, BUNDLED_CORPUS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type CriterionResult = Result<String, String>;

fn agent() -> Agent {
    Agent::new("a").unwrap()
}

/// The bundled corpus formulas and 500 random ones over `p` and `a`.
fn suite() -> Vec<Formula> {
    let mut formulas: Vec<Formula> = Vec::new();
    for (_, f) in parse_corpus(BUNDLED_CORPUS).unwrap() {
        if !formulas.contains(&f) {
            formulas.push(f);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        formulas.push(random_formula(&mut rng, 4, &["p"], &[agent()]));
    }
    formulas
}

struct Decided {
    formula: Formula,
    verdicts: BTreeMap<LogicProfile, Verdict>,
}

fn decide_all(formulas: Vec<Formula>) -> Result<Vec<Decided>, String> {
    formulas
        .into_iter()
        .map(|formula| {
            let mut verdicts = BTreeMap::new();
            for p in LogicProfile::ALL {
                let v =
                    decide_sat(&formula, p).map_err(|e| format!("`{formula}` under {p}: {e}"))?;
                verdicts.insert(p, v);
            }
            Ok(Decided { formula, verdicts })
        })
        .collect()
}

fn corpus_verdicts() -> CriterionResult {
    let entries = parse_corpus(BUNDLED_CORPUS)?;
    let mut checked = 0;
    for (entry, f) in &entries {
        let actual = match entry.mode {
            CorpusMode::Sat => {
                if decide_sat(f, entry.profile)
                    .map_err(|e| e.to_string())?
                    .is_sat()
                {
                    Expected::Sat
                } else {
                    Expected::Unsat
                }
            }
            CorpusMode::Valid => match decide_valid(f, entry.profile)
                .map_err(|e| e.to_string())?
                .validity
            {
                Validity::Valid(_) => Expected::Valid,
                Validity::Invalid(model) => {
                    if evaluate(&model.model, WorldId(0), f).map_err(|e| e.to_string())? {
                        return Err(format!("{}: countermodel satisfies the formula", entry.id));
                    }
                    Expected::Invalid
                }
            },
        };
        if actual != entry.expected {
            return Err(format!(
                "{}: expected {:?}, got {actual:?}",
                entry.id, entry.expected
            ));
        }
        checked += 1;
    }
    // Rows that must be present.
    let required = [
        ("p & ~B[a] p", LogicProfile::HStar, Expected::Sat),
        ("p & ~B[a] p", LogicProfile::Hintikka, Expected::Sat),
        ("p -> B[a] p", LogicProfile::HStar, Expected::Invalid),
        ("p -> B[a] p", LogicProfile::Hintikka, Expected::Invalid),
        ("B[a](p & ~B[a] p)", LogicProfile::HStar, Expected::Unsat),
        ("B[a](p & ~B[a] p)", LogicProfile::Hintikka, Expected::Unsat),
        (
            "B[a] p & (B[a] p -> B[a] ~B[a] p)",
            LogicProfile::HStar,
            Expected::Unsat,
        ),
        (
            "B[a] p & (B[a] p -> B[a] ~B[a] p)",
            LogicProfile::Hintikka,
            Expected::Unsat,
        ),
        ("B[a] p & ~B[a] B[a] p", LogicProfile::HStar, Expected::Sat),
        (
            "B[a] p & ~B[a] B[a] p",
            LogicProfile::Hintikka,
            Expected::Unsat,
        ),
        (
            "B[a](B[a] p & ~B[a] B[a] p)",
            LogicProfile::HStar,
            Expected::Unsat,
        ),
        (
            "B[a](B[a] p & ~B[a] B[a] p)",
            LogicProfile::Hintikka,
            Expected::Unsat,
        ),
        ("B[a] p & C[a] ~B[a] p", LogicProfile::HStar, Expected::Sat),
        (
            "B[a] p & C[a] ~B[a] p",
            LogicProfile::Hintikka,
            Expected::Unsat,
        ),
        (
            "B[a](p -> q) -> (B[a] p -> B[a] q)",
            LogicProfile::HStar,
            Expected::Valid,
        ),
        ("B[a] p -> C[a] p", LogicProfile::HStar, Expected::Valid),
        (
            "B[a] p -> C[a] B[a] p",
            LogicProfile::HStar,
            Expected::Valid,
        ),
        (
            "B[a] p -> B[a] B[a] p",
            LogicProfile::Hintikka,
            Expected::Valid,
        ),
        (
            "B[a] p -> B[a] B[a] p",
            LogicProfile::HStar,
            Expected::Invalid,
        ),
    ];
    for (text, profile, expected) in required {
        let f = parse(text).unwrap();
        if !entries
            .iter()
            .any(|(e, g)| *g == f && e.profile == profile && e.expected == expected)
        {
            return Err(format!("corpus lacks `{text}` {profile} {expected:?}"));
        }
    }
    Ok(format!("{checked} rows"))
}

fn trace_fidelity() -> CriterionResult {
    let allowed: BTreeSet<Rule> = [
        Rule::Seed,
        Rule::And,
        Rule::BeliefPropagation,
        Rule::BeliefRetainedSomewhere,
        Rule::DefinitionRewrite,
        Rule::Compatibility,
        Rule::Clash,
    ]
    .into();
    let mut details = Vec::new();
    for text in ["B[a](p & ~B[a] p)", "B[a](B[a] p & ~B[a] B[a] p)"] {
        let f = parse(text).unwrap();
        let Outcome::Unsat(trace) = decide_sat(&f, LogicProfile::HStar)
            .map_err(|e| e.to_string())?
            .outcome
        else {
            return Err(format!("`{text}` is not unsatisfiable"));
        };
        check_trace(&trace, &f, LogicProfile::HStar).map_err(|e| format!("`{text}`: {e}"))?;
        let rules: BTreeSet<Rule> = trace.iter().map(|s| s.rule).collect();
        if !rules.is_subset(&allowed) {
            return Err(format!(
                "`{text}` uses {:?}",
                rules.difference(&allowed).collect::<Vec<_>>()
            ));
        }
        let mut depth = BTreeMap::from([("w0", 0usize)]);
        for s in &trace {
            if let Some(&p) = s.premises.first() {
                let src = &trace[p - 1];
                if src.world != s.world && !depth.contains_key(s.world.as_str()) {
                    let d = depth[src.world.as_str()] + 1;
                    depth.insert(&s.world, d);
                }
            }
        }
        let clash = trace.last().unwrap();
        if clash.rule != Rule::Clash || depth.len() < 3 || depth[clash.world.as_str()] != 2 {
            return Err(format!(
                "`{text}`: {} worlds, clash at depth {}",
                depth.len(),
                depth[clash.world.as_str()]
            ));
        }
        details.push(format!("{} steps over {} worlds", trace.len(), depth.len()));
    }
    Ok(details.join("; "))
}

fn self_verification(decided: &[Decided]) -> CriterionResult {
    let mut sat = 0;
    for d in decided {
        let bound = 1usize << subformula_closure(&desugar(&d.formula)).len().min(60);
        for (p, v) in &d.verdicts {
            if let Outcome::Sat { model, .. } = &v.outcome {
                if !check_frame(&model.model, *p).is_empty() {
                    return Err(format!("`{}` under {p}: frame violation", d.formula));
                }
                if !evaluate(&model.model, WorldId(0), &d.formula).unwrap() {
                    return Err(format!(
                        "`{}` under {p}: designated world falsifies",
                        d.formula
                    ));
                }
                if model.model.world_count() > bound {
                    return Err(format!(
                        "`{}` under {p}: model exceeds the label bound",
                        d.formula
                    ));
                }
                sat += 1;
            }
        }
    }
    Ok(format!("{sat} SAT verdicts verified"))
}

fn oracle_agreement(decided: &[Decided]) -> CriterionResult {
    let (mut unsat, mut sat) = (0, 0);
    for d in decided {
        let atoms: Vec<String> = d
            .formula
            .atoms()
            .into_iter()
            .chain(["p".to_string()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let budget = EnumerationBudget::new(4, atoms, vec![agent()]).map_err(|e| e.to_string())?;
        for (p, v) in &d.verdicts {
            match &v.outcome {
                Outcome::Sat { model, .. } => {
                    if !evaluate_model(&model.model, &d.formula) {
                        return Err(format!(
                            "`{}` under {p}: oracle evaluator rejects the model",
                            d.formula
                        ));
                    }
                    sat += 1;
                }
                Outcome::Unsat(_) => {
                    if let Some(m) = sat_upto(&d.formula, &budget, *p).map_err(|e| e.to_string())? {
                        return Err(format!(
                            "`{}` under {p}: engine UNSAT, oracle found {m:?}",
                            d.formula
                        ));
                    }
                    unsat += 1;
                }
            }
        }
    }
    Ok(format!(
        "{sat} SAT models confirmed, {unsat} UNSAT verdicts without a 4-world model"
    ))
}

fn monotonicity(decided: &[Decided]) -> CriterionResult {
    use LogicProfile::{HStar, Hintikka, Kd, Kd45};
    for d in decided {
        let sat = |p| d.verdicts[&p].is_sat();
        for (stronger, weaker) in [(Kd45, Hintikka), (Hintikka, HStar), (HStar, Kd)] {
            if sat(stronger) && !sat(weaker) {
                return Err(format!(
                    "`{}`: SAT under {stronger} but not {weaker}",
                    d.formula
                ));
            }
        }
    }
    Ok(format!("{} formulas", decided.len()))
}

fn round_trip() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let agents = [agent(), Agent::new("b").unwrap()];
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 6, &["p", "q", "r"], &agents);
        let text = render(&f);
        match parse(&text) {
            Ok(g) if g == f => {}
            Ok(g) => return Err(format!("`{text}` parsed as {g:?}")),
            Err(e) => return Err(format!("`{text}`: {e}")),
        }
    }
    Ok("1000 formulas".into())
}

fn enumeration_counts() -> CriterionResult {
    let budget = |n| EnumerationBudget::new(n, vec!["p".into()], vec![agent()]).unwrap();
    let count = |n, p| {
        enumerate_models(&budget(n), p)
            .filter(|m| m.world_count() == n)
            .count()
    };
    let got = [
        count(1, LogicProfile::Kd),
        count(1, LogicProfile::HStar),
        count(2, LogicProfile::Kd),
    ];
    if got == [2, 2, 36] {
        Ok("2, 2, 36".into())
    } else {
        Err(format!("got {got:?}, expected [2, 2, 36]"))
    }
}

fn corpus_json() -> Result<Vec<u8>, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        ["doxa", "--output", "json", "corpus"],
        &mut Io {
            out: &mut out,
            err: &mut err,
            color: false,
        },
    );
    if code != 0 {
        return Err(format!(
            "corpus exited {code}: {}",
            String::from_utf8_lossy(&err)
        ));
    }
    Ok(out)
}

fn determinism() -> CriterionResult {
    let first = corpus_json()?;
    let second = corpus_json()?;
    if first == second {
        Ok(format!("{} identical bytes", first.len()))
    } else {
        Err("corpus JSON differs between runs".into())
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let decided = decide_all(suite());
    let with_suite = |check: fn(&[Decided]) -> CriterionResult| -> CriterionResult {
        match &decided {
            Ok(d) => check(d),
            Err(e) => Err(e.clone()),
        }
    };
    let results: Vec<(&str, CriterionResult)> = vec![
        ("1 corpus verdicts", corpus_verdicts()),
        ("2 trace fidelity", trace_fidelity()),
        (
            "3 countermodel self-verification",
            with_suite(self_verification),
        ),
        ("4 oracle agreement", with_suite(oracle_agreement)),
        ("5 profile monotonicity", with_suite(monotonicity)),
        ("6 parser round-trip", round_trip()),
        ("7 enumeration counts", enumeration_counts()),
        ("8 determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance suite finished in {:.1?}", start.elapsed());
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
