//! JSON form of model systems.
//!
//! ```json
//! {"worlds": 2, "designated": 0,
//!  "valuation": {"0": ["p"], "1": []},
//!  "alternatives": {"a": [[0, 1], [1, 1]]},
//!  "labels": {"0": ["B[a] p"], "1": ["p"]}}
//! ```
//!
//! `labels` is optional. Arrays are emitted sorted ascending.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{ModelError, ModelSystem, WorldId};
use crate::formula::{is_identifier, parse, render, Agent, Formula, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ModelJsonError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error("label `{text}` of world {world}: {source}")]
    Label {
        world: usize,
        text: String,
        source: ParseError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    worlds: usize,
    designated: usize,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    alternatives: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default)]
    labels: Option<BTreeMap<String, Vec<String>>>,
}

fn world_key(key: &str, worlds: usize) -> Result<usize, ModelJsonError> {
    let w: usize = key.parse().map_err(|_| {
        ModelJsonError::Schema(format!("world key `{key}` is not a nonnegative integer"))
    })?;
    if w >= worlds {
        return Err(ModelError::WorldOutOfRange { world: w, worlds }.into());
    }
    Ok(w)
}

/// One model set per world.
pub type Labels = Vec<BTreeSet<Formula>>;

/// Parses a model system and its optional labels.
pub fn model_from_json(text: &str) -> Result<(ModelSystem, Option<Labels>), ModelJsonError> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelJsonError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut m = ModelSystem::new(raw.worlds)?;
    m.set_designated(WorldId(raw.designated))?;
    for (key, atoms) in &raw.valuation {
        let w = world_key(key, raw.worlds)?;
        for atom in atoms {
            if !is_identifier(atom) {
                return Err(ModelJsonError::Schema(format!(
                    "`{atom}` is not an atom name"
                )));
            }
            m.set_true(WorldId(w), atom)?;
        }
    }
    for (name, pairs) in &raw.alternatives {
        let agent = Agent::new(name.as_str()).map_err(|e| ModelJsonError::Schema(e.to_string()))?;
        m.add_agent(&agent);
        for [from, to] in pairs {
            m.add_alternative(&agent, WorldId(*from), WorldId(*to))?;
        }
    }
    let labels = match raw.labels {
        None => None,
        Some(raw_labels) => {
            let mut labels = vec![BTreeSet::new(); raw.worlds];
            for (key, texts) in raw_labels {
                let w = world_key(&key, raw.worlds)?;
                for text in texts {
                    let f = parse(&text).map_err(|source| ModelJsonError::Label {
                        world: w,
                        text: text.clone(),
                        source,
                    })?;
                    labels[w].insert(f);
                }
            }
            Some(labels)
        }
    };
    Ok((m, labels))
}

/// Serializes `m` (and labels, if given) with keys in schema order.
pub fn model_to_json(m: &ModelSystem, labels: Option<&[BTreeSet<Formula>]>) -> Value {
    let mut valuation = Map::new();
    for w in m.worlds() {
        let atoms: Vec<&String> = m.true_atoms(w).iter().collect();
        valuation.insert(w.0.to_string(), json!(atoms));
    }
    let mut alternatives = Map::new();
    for agent in m.agents() {
        let pairs: Vec<[usize; 2]> = m
            .pairs(agent)
            .into_iter()
            .map(|(u, v)| [u.0, v.0])
            .collect();
        alternatives.insert(agent.to_string(), json!(pairs));
    }
    let mut out = Map::new();
    out.insert("worlds".into(), json!(m.world_count()));
    out.insert("designated".into(), json!(m.designated().0));
    out.insert("valuation".into(), Value::Object(valuation));
    out.insert("alternatives".into(), Value::Object(alternatives));
    if let Some(labels) = labels {
        let mut obj = Map::new();
        for (w, label) in labels.iter().enumerate() {
            let mut texts: Vec<String> = label.iter().map(render).collect();
            texts.sort();
            obj.insert(w.to_string(), json!(texts));
        }
        out.insert("labels".into(), Value::Object(obj));
    }
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_labels() {
        let text = r#"{"worlds": 2, "designated": 0,
            "valuation": {"0": ["p"], "1": ["p", "q"]},
            "alternatives": {"a": [[0, 1], [1, 1]], "b": []},
            "labels": {"0": ["B[a] p"], "1": ["p", "q"]}}"#;
        let (m, labels) = model_from_json(text).unwrap();
        assert_eq!(m.world_count(), 2);
        let labels = labels.unwrap();
        let value = model_to_json(&m, Some(&labels));
        let (m2, labels2) = model_from_json(&value.to_string()).unwrap();
        assert_eq!(m, m2);
        assert_eq!(Some(labels), labels2);
        assert_eq!(
            value.to_string(),
            r#"{"worlds":2,"designated":0,"valuation":{"0":["p"],"1":["p","q"]},"alternatives":{"a":[[0,1],[1,1]],"b":[]},"labels":{"0":["B[a] p"],"1":["p","q"]}}"#
        );
    }

    #[test]
    fn errors_carry_locations() {
        match model_from_json("{\"worlds\": 1,\n \"designated\": }") {
            Err(ModelJsonError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            model_from_json(r#"{"worlds": 1, "designated": 0, "alternatives": {"a": [[0, 4]]}}"#),
            Err(ModelJsonError::Model(ModelError::WorldOutOfRange {
                world: 4,
                ..
            }))
        ));
        assert!(matches!(
            model_from_json(r#"{"worlds": 1, "designated": 0, "labels": {"0": ["p &"]}}"#),
            Err(ModelJsonError::Label { world: 0, .. })
        ));
        assert!(matches!(
            model_from_json(r#"{"worlds": 1, "designated": 0, "valuation": {"x": []}}"#),
            Err(ModelJsonError::Schema(_))
        ));
    }
}
