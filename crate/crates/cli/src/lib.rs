//! The `doxa` command line.
//!
//! Exit codes: 0 for SAT/VALID/found/clean, 1 for UNSAT/INVALID/not-found/
//! violations, 2 for usage, parse and input errors, 3 for engine failures.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use doxa::oracle::{sat_upto, EnumerationBudget};
use doxa::semantics::{model_from_json, model_to_json};
use doxa::tableau::{render_trace, EngineError, Outcome, TraceFormat, Validity};
use doxa::{
    check_frame, check_model_set, decide_sat, decide_valid, evaluate, parse, Formula,
    LabeledModelSystem, LogicProfile, ModelSystem, Violation,
};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

pub const BUNDLED_CORPUS: &str = include_str!("../corpus/verdicts.jsonl");

#[derive(Parser, Debug)]
#[command(
    name = "doxa",
    version,
    about = "Decide and check formulas of belief logic"
)]
struct Cli {
    /// Logic of belief: hstar, hintikka, kd or kd45.
    #[arg(long, global = true, default_value = "hstar", value_parser = parse_profile)]
    profile: LogicProfile,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability or validity of a formula.
    Decide {
        formula: String,
        #[arg(long, value_enum, default_value_t = Mode::Sat)]
        mode: Mode,
    },
    /// Check a model file against the frame and model-set conditions.
    CheckModel {
        path: PathBuf,
        /// Evaluated at the designated world.
        formula: Option<String>,
    },
    /// Run a corpus of expected verdicts (the bundled one by default).
    Corpus { path: Option<PathBuf> },
    /// Decide satisfiability under several profiles side by side.
    Compare {
        formula: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_profile)]
        profiles: Vec<LogicProfile>,
    },
    /// Search all models up to a number of worlds.
    Oracle {
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sat,
    Valid,
}

fn parse_profile(s: &str) -> Result<LogicProfile, String> {
    s.parse()
        .map_err(|e: doxa::semantics::UnknownProfile| e.to_string())
}

/// Where a command writes and whether it may use ANSI color.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub color: bool,
}

impl Io<'_> {
    fn paint(&self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

enum Failure {
    Usage(String),
    Engine(EngineError),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Engine(e)
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { io.err } else { io.out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let json = cli.output == OutputFormat::Json;
    let result = match &cli.command {
        Command::Decide { formula, mode } => cmd_decide(io, formula, cli.profile, *mode, json),
        Command::CheckModel { path, formula } => {
            cmd_check_model(io, path, formula.as_deref(), cli.profile, json)
        }
        Command::Corpus { path } => cmd_corpus(io, path.as_deref(), json),
        Command::Compare { formula, profiles } => cmd_compare(io, formula, profiles, json),
        Command::Oracle {
            formula,
            max_worlds,
        } => cmd_oracle(io, formula, cli.profile, *max_worlds, json),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            2
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(io.err, "error: {e}");
            3
        }
    }
}

fn read_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure::Usage(format!("{e}\n{}", e.caret(text))))
}

fn emit(io: &mut Io<'_>, text: &str) {
    let _ = io.out.write_all(text.as_bytes());
}

fn emit_json(io: &mut Io<'_>, value: &Value) {
    let _ = writeln!(
        io.out,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn describe_model(m: &ModelSystem) -> String {
    let mut out = String::new();
    for w in m.worlds() {
        let atoms: Vec<&str> = m.true_atoms(w).iter().map(String::as_str).collect();
        let mark = if w == m.designated() {
            " (designated)"
        } else {
            ""
        };
        let _ = writeln!(out, "{w}{mark}: {{{}}}", atoms.join(", "));
        for agent in m.agents() {
            let succ: Vec<String> = m.successors(agent, w).map(|v| v.to_string()).collect();
            let _ = writeln!(out, "  {agent} -> {}", succ.join(", "));
        }
    }
    out
}

fn cmd_decide(
    io: &mut Io<'_>,
    text: &str,
    profile: LogicProfile,
    mode: Mode,
    json: bool,
) -> CmdResult {
    let f = read_formula(text)?;
    let (positive, value, heading, body, stats) = match mode {
        Mode::Sat => {
            let v = decide_sat(&f, profile)?;
            let body = match &v.outcome {
                Outcome::Sat { model, .. } => describe_model(&model.model),
                Outcome::Unsat(trace) => render_trace(trace, TraceFormat::Text),
            };
            let heading = if v.is_sat() { "SAT" } else { "UNSAT" };
            (v.is_sat(), v.to_json(), heading, body, v.stats)
        }
        Mode::Valid => {
            let v = decide_valid(&f, profile)?;
            let body = match &v.validity {
                Validity::Invalid(model) => {
                    format!("countermodel:\n{}", describe_model(&model.model))
                }
                Validity::Valid(trace) => render_trace(trace, TraceFormat::Text),
            };
            let heading = if v.is_valid() { "VALID" } else { "INVALID" };
            (v.is_valid(), v.to_json(), heading, body, v.stats)
        }
    };
    if json {
        emit_json(io, &value);
    } else {
        let colored = io.paint(heading, if positive { "32" } else { "31" });
        emit(io, &format!("{colored} under {profile}: {f}\n{body}"));
        emit(
            io,
            &format!(
                "worlds created {}, rules fired {}, blocks applied {}\n",
                stats.worlds_created, stats.rules_fired, stats.blocks_applied
            ),
        );
    }
    Ok(if positive { 0 } else { 1 })
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "kind": v.kind.as_str(),
        "worlds": v.worlds.iter().map(|w| w.0).collect::<Vec<_>>(),
        "agent": v.agent.as_ref().map(|a| a.to_string()),
        "formula": v.formula.as_ref().map(|f| f.to_string()),
        "message": v.message,
    })
}

fn cmd_check_model(
    io: &mut Io<'_>,
    path: &Path,
    formula: Option<&str>,
    profile: LogicProfile,
    json: bool,
) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let (model, labels) =
        model_from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let formula = formula.map(read_formula).transpose()?;

    let frame = check_frame(&model, profile);
    let label_violations = match labels {
        Some(labels) => {
            let lm = LabeledModelSystem::new(model.clone(), labels)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            check_model_set(&lm, profile)
        }
        None => Vec::new(),
    };
    let value = match &formula {
        Some(f) => Some(
            evaluate(&model, model.designated(), f).map_err(|e| Failure::Usage(e.to_string()))?,
        ),
        None => None,
    };

    if json {
        let mut report = json!({
            "profile": profile.name(),
            "frame": frame.iter().map(violation_json).collect::<Vec<_>>(),
            "labels": label_violations.iter().map(violation_json).collect::<Vec<_>>(),
        });
        if let (Some(f), Some(v)) = (&formula, value) {
            report["formula"] = json!(f.to_string());
            report["value"] = json!(v);
        }
        emit_json(io, &report);
    } else {
        let mut out = String::new();
        for v in frame.iter().chain(&label_violations) {
            let _ = writeln!(out, "{} {v}", io.paint("violation", "31"));
        }
        if frame.is_empty() && label_violations.is_empty() {
            let _ = writeln!(out, "no violations under {profile}");
        }
        if let (Some(f), Some(v)) = (&formula, value) {
            let _ = writeln!(out, "{f} at {}: {v}", model.designated());
        }
        emit(io, &out);
    }
    Ok(if frame.is_empty() && label_violations.is_empty() {
        0
    } else {
        1
    })
}

/// One line of a corpus file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    pub formula: String,
    #[serde(deserialize_with = "profile_field")]
    pub profile: LogicProfile,
    pub mode: CorpusMode,
    pub expected: Expected,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusMode {
    Sat,
    Valid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Sat,
    Unsat,
    Valid,
    Invalid,
}

impl Expected {
    fn as_str(self) -> &'static str {
        match self {
            Expected::Sat => "sat",
            Expected::Unsat => "unsat",
            Expected::Valid => "valid",
            Expected::Invalid => "invalid",
        }
    }
}

fn profile_field<'de, D: serde::Deserializer<'de>>(d: D) -> Result<LogicProfile, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// Parses a corpus: one JSON object per non-blank line.
pub fn parse_corpus(text: &str) -> Result<Vec<(CorpusEntry, Formula)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: CorpusEntry =
            serde_json::from_str(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        let expected_mode = match entry.expected {
            Expected::Sat | Expected::Unsat => CorpusMode::Sat,
            Expected::Valid | Expected::Invalid => CorpusMode::Valid,
        };
        if entry.mode != expected_mode {
            return Err(format!(
                "line {}: expected `{}` does not fit mode {:?}",
                i + 1,
                entry.expected.as_str(),
                entry.mode
            ));
        }
        let f = parse(&entry.formula).map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push((entry, f));
    }
    Ok(out)
}

fn run_entry(entry: &CorpusEntry, f: &Formula) -> Result<Expected, EngineError> {
    Ok(match entry.mode {
        CorpusMode::Sat => {
            if decide_sat(f, entry.profile)?.is_sat() {
                Expected::Sat
            } else {
                Expected::Unsat
            }
        }
        CorpusMode::Valid => {
            if decide_valid(f, entry.profile)?.is_valid() {
                Expected::Valid
            } else {
                Expected::Invalid
            }
        }
    })
}

fn cmd_corpus(io: &mut Io<'_>, path: Option<&Path>, json: bool) -> CmdResult {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => BUNDLED_CORPUS.to_string(),
    };
    let entries = parse_corpus(&text).map_err(Failure::Usage)?;
    let results: Vec<Result<Expected, EngineError>> = entries
        .par_iter()
        .map(|(entry, f)| run_entry(entry, f))
        .collect();
    let mut rows = Vec::with_capacity(entries.len());
    for ((entry, _), result) in entries.iter().zip(results) {
        rows.push((entry, result?));
    }
    let failed = rows
        .iter()
        .filter(|(e, actual)| e.expected != *actual)
        .count();
    let passed = rows.len() - failed;

    if json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(e, actual)| {
                json!({
                    "id": e.id,
                    "formula": e.formula,
                    "profile": e.profile.name(),
                    "mode": if e.mode == CorpusMode::Sat { "sat" } else { "valid" },
                    "expected": e.expected.as_str(),
                    "actual": actual.as_str(),
                    "pass": e.expected == *actual,
                })
            })
            .collect();
        emit_json(
            io,
            &json!({ "passed": passed, "failed": failed, "rows": rows }),
        );
    } else {
        let id_width = rows
            .iter()
            .map(|(e, _)| e.id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let mut out = format!(
            "{:<id_width$}  {:<8}  {:<8}  {:<8}  result\n",
            "id", "profile", "expected", "actual"
        );
        for (e, actual) in &rows {
            let mark = if e.expected == *actual {
                io.paint("pass", "32")
            } else {
                io.paint("FAIL", "31")
            };
            let _ = writeln!(
                out,
                "{:<id_width$}  {:<8}  {:<8}  {:<8}  {mark}",
                e.id,
                e.profile.name(),
                e.expected.as_str(),
                actual.as_str()
            );
        }
        let _ = writeln!(out, "{passed} passed, {failed} failed");
        emit(io, &out);
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_compare(io: &mut Io<'_>, text: &str, profiles: &[LogicProfile], json: bool) -> CmdResult {
    let f = read_formula(text)?;
    let profiles = if profiles.is_empty() {
        LogicProfile::ALL.to_vec()
    } else {
        profiles.to_vec()
    };
    let verdicts: Vec<(LogicProfile, bool)> = profiles
        .iter()
        .map(|&p| Ok((p, decide_sat(&f, p)?.is_sat())))
        .collect::<Result<_, EngineError>>()?;
    let mut disagreements = Vec::new();
    for (i, &(p, a)) in verdicts.iter().enumerate() {
        for &(q, b) in &verdicts[i + 1..] {
            if a != b {
                disagreements.push((p, q));
            }
        }
    }
    let word = |sat: bool| if sat { "sat" } else { "unsat" };
    if json {
        let mut by_profile = serde_json::Map::new();
        for &(p, sat) in &verdicts {
            by_profile.insert(p.name().into(), json!(word(sat)));
        }
        emit_json(
            io,
            &json!({
                "formula": f.to_string(),
                "verdicts": by_profile,
                "disagreements": disagreements.iter().map(|(p, q)| [p.name(), q.name()]).collect::<Vec<_>>(),
            }),
        );
    } else {
        let mut out = format!("{f}\n");
        for &(p, sat) in &verdicts {
            let _ = writeln!(out, "  {:<8}  {}", p.name(), word(sat).to_uppercase());
        }
        for (p, q) in &disagreements {
            let _ = writeln!(out, "{} {p} and {q} disagree", io.paint("!", "33"));
        }
        emit(io, &out);
    }
    Ok(0)
}

fn cmd_oracle(
    io: &mut Io<'_>,
    text: &str,
    profile: LogicProfile,
    max_worlds: usize,
    json: bool,
) -> CmdResult {
    let f = read_formula(text)?;
    let budget = EnumerationBudget::for_formula(&f, max_worlds)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let found = sat_upto(&f, &budget, profile).map_err(|e| Failure::Usage(e.to_string()))?;
    let caveat = "not-found only means no model within the budget; it does not show the formula unsatisfiable";
    match (&found, json) {
        (Some(m), true) => emit_json(
            io,
            &json!({ "result": "found", "model": model_to_json(m, None) }),
        ),
        (None, true) => emit_json(
            io,
            &json!({ "result": "not-found", "max_worlds": max_worlds, "caveat": caveat }),
        ),
        (Some(m), false) => emit(
            io,
            &format!(
                "found a {profile} model with {} world(s)\n{}\n",
                m.world_count(),
                serde_json::to_string(&model_to_json(m, None)).expect("serializable")
            ),
        ),
        (None, false) => emit(
            io,
            &format!("not-found up to {max_worlds} worlds\n({caveat})\n"),
        ),
    }
    Ok(if found.is_some() { 0 } else { 1 })
}
