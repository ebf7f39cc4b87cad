//! Recursive-descent parser for the concrete syntax.
//!
//! ```text
//! formula  := iff ;
//! iff      := imp ( "<->" iff )? ;
//! imp      := or ( "->" imp )? ;
//! or       := and ( "|" and )* ;
//! and      := unary ( "&" unary )* ;
//! unary    := "~" unary | "B" "[" agent "]" unary | "C" "[" agent "]" unary
//!           | "(" formula ")" | atom ;
//! atom     := [a-z][a-z0-9_]* ;
//! agent    := [a-z][a-z0-9_]* ;
//! ```
//!
//! `&` and `|` associate to the left, `->` and `<->` to the right.

use std::fmt;

use super::{Agent, Formula};

/// Half-open range of character (not byte) offsets into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken,
    UnbalancedParen,
    MissingOperand,
    MalformedAgent,
    UnexpectedToken,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }

    /// Two-line diagnostic: the input and a caret line under the span.
    pub fn caret(&self, input: &str) -> String {
        let width = (self.span.end - self.span.start).max(1);
        format!(
            "{input}\n{}{}",
            " ".repeat(self.span.start),
            "^".repeat(width)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    BelOp,
    CompOp,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "`{name}`"),
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::DoubleArrow => "`<->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::BelOp => "`B`",
            Tok::CompOp => "`C`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let single = |tok| (tok, SourceSpan::new(start, start + 1));
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '~' => out.push(single(Tok::Tilde)),
            '&' => out.push(single(Tok::Amp)),
            '|' => out.push(single(Tok::Bar)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            '[' => out.push(single(Tok::LBracket)),
            ']' => out.push(single(Tok::RBracket)),
            'B' => out.push(single(Tok::BelOp)),
            'C' => out.push(single(Tok::CompOp)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, SourceSpan::new(start, start + 2)));
                i += 2;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push((Tok::DoubleArrow, SourceSpan::new(start, start + 3)));
                i += 3;
                continue;
            }
            c if c.is_ascii_lowercase() => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_lowercase()
                        || chars[j].is_ascii_digit()
                        || chars[j] == '_')
                {
                    j += 1;
                }
                let name: String = chars[i..j].iter().collect();
                out.push((Tok::Ident(name), SourceSpan::new(start, j)));
                i = j;
                continue;
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownToken,
                    SourceSpan::new(start, start + 1),
                    format!("unknown token `{other}`"),
                ))
            }
        }
        i += 1;
    }
    out.push((Tok::Eof, SourceSpan::new(chars.len(), chars.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Tilde => Ok(Formula::not(self.unary()?)),
            Tok::BelOp => {
                let agent = self.agent_bracket(span)?;
                Ok(Formula::Bel(agent, Box::new(self.unary()?)))
            }
            Tok::CompOp => {
                let agent = self.agent_bracket(span)?;
                Ok(Formula::Comp(agent, Box::new(self.unary()?)))
            }
            Tok::LParen => {
                let inner = self.formula()?;
                match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(inner)
                    }
                    Tok::Eof => Err(ParseError::new(
                        ParseErrorKind::UnbalancedParen,
                        span,
                        "unclosed `(`",
                    )),
                    other => Err(ParseError::new(
                        ParseErrorKind::UnexpectedToken,
                        self.span(),
                        format!("expected `)`, found {other}"),
                    )),
                }
            }
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::RParen => Err(ParseError::new(
                ParseErrorKind::UnbalancedParen,
                span,
                "`)` without matching `(`",
            )),
            Tok::Eof => Err(ParseError::new(
                ParseErrorKind::MissingOperand,
                span,
                "expected an operand, found end of input",
            )),
            other => Err(ParseError::new(
                ParseErrorKind::MissingOperand,
                span,
                format!("expected an operand, found {other}"),
            )),
        }
    }

    /// Parses `[agent]` after a `B` or `C` whose span is `op`.
    fn agent_bracket(&mut self, op: SourceSpan) -> Result<Agent, ParseError> {
        let malformed = |span: SourceSpan, msg: String| {
            ParseError::new(ParseErrorKind::MalformedAgent, span, msg)
        };
        let (tok, open) = self.bump();
        if tok != Tok::LBracket {
            return Err(malformed(
                op,
                format!("expected `[` after modal operator, found {tok}"),
            ));
        }
        let (tok, name_span) = self.bump();
        let name = match tok {
            Tok::Ident(name) => name,
            other => {
                return Err(malformed(
                    open.join(name_span),
                    format!("expected an agent name, found {other}"),
                ))
            }
        };
        let (tok, _) = self.bump();
        if tok != Tok::RBracket {
            // Span stops at the agent name, not at the offending token.
            return Err(malformed(
                open.join(name_span),
                format!("expected `]` after agent name, found {tok}"),
            ));
        }
        // Lexed identifiers always satisfy the agent grammar.
        Ok(Agent(name))
    }
}

/// Parses a formula in the concrete syntax described in the module docs.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    match p.peek() {
        Tok::Eof => Ok(f),
        Tok::RParen => Err(ParseError::new(
            ParseErrorKind::UnbalancedParen,
            p.span(),
            "`)` without matching `(`",
        )),
        other => Err(ParseError::new(
            ParseErrorKind::UnexpectedToken,
            p.span(),
            format!("unexpected {other} after complete formula"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn a() -> Agent {
        Agent::new("a").unwrap()
    }

    #[test]
    fn moore_sentence() {
        assert_eq!(
            parse("p & ~B[a] p").unwrap(),
            Formula::and(p(), Formula::not(Formula::bel(&a(), p())))
        );
    }

    #[test]
    fn unbelievable_moore_sentence() {
        assert_eq!(
            parse("B[a](p & ~B[a] p)").unwrap(),
            Formula::bel(
                &a(),
                Formula::and(p(), Formula::not(Formula::bel(&a(), p())))
            )
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let (q, r) = (Formula::atom("q"), Formula::atom("r"));
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(p(), Formula::implies(q, r))
        );
    }

    #[test]
    fn conjunction_is_left_associative() {
        let (q, r) = (Formula::atom("q"), Formula::atom("r"));
        assert_eq!(
            parse("p & q & r").unwrap(),
            Formula::and(Formula::and(p(), q), r)
        );
    }

    #[test]
    fn precedence_ladder() {
        let f = parse("~p & q | r -> s <-> t").unwrap();
        let want = parse("((((~p) & q) | r) -> s) <-> t").unwrap();
        assert_eq!(f, want);
        // Modal prefixes bind as tightly as negation.
        assert_eq!(
            parse("B[a] p & q").unwrap(),
            Formula::and(Formula::bel(&a(), p()), Formula::atom("q"))
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse(" B [ a ]\n(p\t&~ B[a]p) ").unwrap(),
            parse("B[a](p & ~B[a] p)").unwrap()
        );
    }

    #[test]
    fn unterminated_agent_bracket() {
        let err = parse("B[a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MalformedAgent);
        assert_eq!(err.span, SourceSpan { start: 1, end: 3 });
    }

    #[test]
    fn error_kinds() {
        let kind = |s: &str| parse(s).unwrap_err().kind;
        assert_eq!(kind("p $ q"), ParseErrorKind::UnknownToken);
        assert_eq!(kind("P"), ParseErrorKind::UnknownToken);
        assert_eq!(kind("p & ("), ParseErrorKind::MissingOperand);
        assert_eq!(kind("(p & q"), ParseErrorKind::UnbalancedParen);
        assert_eq!(kind("p & q)"), ParseErrorKind::UnbalancedParen);
        assert_eq!(kind("p &"), ParseErrorKind::MissingOperand);
        assert_eq!(kind("& p"), ParseErrorKind::MissingOperand);
        assert_eq!(kind("B p"), ParseErrorKind::MalformedAgent);
        assert_eq!(kind("B[] p"), ParseErrorKind::MalformedAgent);
        assert_eq!(kind("C[a p"), ParseErrorKind::MalformedAgent);
        assert_eq!(kind("p q"), ParseErrorKind::UnexpectedToken);
        assert_eq!(kind(""), ParseErrorKind::MissingOperand);
    }

    #[test]
    fn spans_count_characters_not_bytes() {
        let err = parse("p & ∀").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownToken);
        assert_eq!(err.span, SourceSpan { start: 4, end: 5 });
        assert_eq!(err.caret("p & ∀").lines().nth(1), Some("    ^"));
    }
}
