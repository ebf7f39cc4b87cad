//! Syntax of the multimodal belief language.
//!
//! Formulas are built from atoms with the classical connectives and two
//! per-agent modal operators: `B[a] p` ("a believes that p") and `C[a] p`
//! ("p is compatible with everything a believes"). The two are duals,
//! `C[a] p` abbreviating `~B[a] ~p`.

mod parser;
mod render;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError, ParseErrorKind, SourceSpan};
pub use render::render;

/// An individual whose beliefs a modal operator talks about.
///
/// Names follow `[a-z][a-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidName> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Agent(name))
        } else {
            Err(InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a valid name (expected [a-z][a-z0-9_]*)")]
pub struct InvalidName(pub String);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `B[a] p`
    Bel(Agent, Box<Formula>),
    /// `C[a] p`
    Comp(Agent, Box<Formula>),
}

impl Formula {
    /// Builds an atom, panicking on a malformed name. Meant for literals in
    /// code; use [`parse`] for untrusted input.
    pub fn atom(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid atom name {name:?}");
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn bel(agent: &Agent, f: Formula) -> Formula {
        Formula::Bel(agent.clone(), Box::new(f))
    }

    pub fn comp(agent: &Agent, f: Formula) -> Formula {
        Formula::Comp(agent.clone(), Box::new(f))
    }

    /// Number of syntax-tree nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Bel(_, f) | Formula::Comp(_, f) => 1 + f.node_count(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Height of the syntax tree; an atom has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Bel(_, f) | Formula::Comp(_, f) => 1 + f.depth(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// True when the formula only uses `Atom`, `Not`, `And`, `Or` and `Bel`.
    pub fn is_desugared(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Bel(_, f) => f.is_desugared(),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_desugared() && r.is_desugared(),
            Formula::Implies(..) | Formula::Iff(..) | Formula::Comp(..) => false,
        }
    }

    /// The formula with one more negation on top.
    pub fn negated(&self) -> Formula {
        Formula::not(self.clone())
    }

    /// `g` for `~g`, and `~f` otherwise: the formula that clashes with `self`.
    pub fn complement(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => other.negated(),
        }
    }

    fn visit<'a>(&'a self, out: &mut dyn FnMut(&'a Formula)) {
        out(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Bel(_, f) | Formula::Comp(_, f) => f.visit(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.visit(out);
                r.visit(out);
            }
        }
    }

    /// All subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<&Formula> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            out.insert(g);
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Atom(name) = g {
                out.insert(name.clone());
            }
        });
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Rewrites `->`, `<->` and `C[a]` into the `~ & | B[a]` core.
///
/// `C[a] p` becomes `~B[a] ~p`; no double negations are simplified, so the
/// result is a literal unfolding of the definitions.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(desugar(g)),
        Formula::And(l, r) => Formula::and(desugar(l), desugar(r)),
        Formula::Or(l, r) => Formula::or(desugar(l), desugar(r)),
        Formula::Implies(l, r) => Formula::or(Formula::not(desugar(l)), desugar(r)),
        Formula::Iff(l, r) => {
            let (l, r) = (desugar(l), desugar(r));
            Formula::and(
                Formula::or(Formula::not(l.clone()), r.clone()),
                Formula::or(Formula::not(r), l),
            )
        }
        Formula::Bel(a, g) => Formula::bel(a, desugar(g)),
        Formula::Comp(a, g) => Formula::not(Formula::bel(a, Formula::not(desugar(g)))),
    }
}

/// Agents occurring under some `B` or `C` operator.
pub fn agents(f: &Formula) -> BTreeSet<Agent> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Bel(a, _) | Formula::Comp(a, _) = g {
            out.insert(a.clone());
        }
    });
    out
}

/// Every subformula of `f` together with its single negation.
///
/// This is the universe tableau labels are drawn from, so its size bounds
/// the number of distinct world labels.
pub fn subformula_closure(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for g in f.subformulas() {
        out.insert(g.clone());
        out.insert(g.negated());
    }
    out
}
