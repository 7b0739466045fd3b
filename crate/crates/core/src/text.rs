//! The `.dfl` theory format and the conclusions TSV format.
//!
//! ```text
//! r1: bird(X) => fly(X).      % defeasible rule
//! r3: penguin(X) -> bird(X).  % strict rule
//! d:  broken(X) ~> !fly(X).   % defeater
//! e:  bird(eddie).            % labelled fact
//! penguin(tweety).            % fact, gets label _f1
//! r2 > r1.
//! ```
//!
//! Labels of grounded rule instances carry their bindings, e.g. `r1[tweety]`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::types::{validate, ClosureSet, Literal, Rule, RuleKind, Term, Theory, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Position of every statement in the source, in theory order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub facts: Vec<Span>,
    pub rules: Vec<Span>,
    pub superiority: Vec<((String, String), Span)>,
}

impl SourceMap {
    /// Span of the first statement defining or mentioning `label`.
    pub fn span_of(&self, t: &Theory, label: &str) -> Option<Span> {
        t.facts
            .iter()
            .zip(&self.facts)
            .find(|(f, _)| f.label == label)
            .map(|(_, s)| *s)
            .or_else(|| t.rules.iter().zip(&self.rules).find(|(r, _)| r.label == label).map(|(_, s)| *s))
            .or_else(|| self.superiority.iter().find(|((a, b), _)| a == label || b == label).map(|(_, s)| *s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Gt,
    Bang,
    Arrow(RuleKind),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Colon => f.write_str("':'"),
            Tok::Gt => f.write_str("'>'"),
            Tok::Bang => f.write_str("'!'"),
            Tok::Arrow(k) => write!(f, "'{}'", k.arrow()),
        }
    }
}

fn syntax(span: Span, message: impl Into<String>) -> Error {
    Error::Syntax { span, message: message.into() }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, Error> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);
    while let Some(&c) = chars.peek() {
        let span = Span { line, column: col };
        let mut bump = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                s.push(c);
                bump(&mut chars);
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '>' => Tok::Gt,
            '!' => Tok::Bang,
            '→' => Tok::Arrow(RuleKind::Strict),
            '⇒' => Tok::Arrow(RuleKind::Defeasible),
            '⇝' => Tok::Arrow(RuleKind::Defeater),
            '-' | '=' | '~' => {
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Arrow(match c {
                        '-' => RuleKind::Strict,
                        '=' => RuleKind::Defeasible,
                        _ => RuleKind::Defeater,
                    })
                } else {
                    return Err(syntax(span, format!("expected '>' after '{c}'")));
                }
            }
            other => return Err(syntax(span, format!("unexpected character '{other}'"))),
        };
        out.push((tok, span));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| *s)
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, Error> {
        let span = self.span();
        match self.next() {
            Some((t, s)) if t == want => Ok(s),
            Some((t, _)) => Err(syntax(span, format!("expected {want}, found {t}"))),
            None => Err(syntax(span, format!("expected {want}, found end of input"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), Error> {
        let span = self.span();
        match self.next() {
            Some((Tok::Ident(s), sp)) => Ok((s, sp)),
            Some((t, _)) => Err(syntax(span, format!("expected {what}, found {t}"))),
            None => Err(syntax(span, format!("expected {what}, found end of input"))),
        }
    }

    fn label(&mut self) -> Result<String, Error> {
        let (name, span) = self.ident("label")?;
        if name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(syntax(span, format!("label '{name}' must not start with a digit")));
        }
        if self.peek() != Some(&Tok::LBracket) {
            return Ok(name);
        }
        self.next();
        let mut out = name;
        out.push('[');
        loop {
            let span = self.span();
            match self.term()? {
                Term::Const(c) => out.push_str(&c),
                Term::Var(v) => return Err(syntax(span, format!("label binding '{v}' must be a constant"))),
            }
            match self.next() {
                Some((Tok::Comma, _)) => out.push(','),
                Some((Tok::RBracket, _)) => break,
                Some((t, s)) => return Err(syntax(s, format!("expected ',' or ']', found {t}"))),
                None => return Err(syntax(self.end, "unterminated label binding")),
            }
        }
        out.push(']');
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, Error> {
        let (name, span) = self.ident("term")?;
        let first = name.chars().next().unwrap_or('_');
        if first.is_ascii_uppercase() {
            Ok(Term::Var(name))
        } else if first.is_ascii_lowercase() || first.is_ascii_digit() {
            Ok(Term::Const(name))
        } else {
            Err(syntax(span, format!("term '{name}' must start with a letter or digit")))
        }
    }

    fn literal(&mut self) -> Result<Literal, Error> {
        let negated = if self.peek() == Some(&Tok::Bang) {
            self.next();
            true
        } else {
            false
        };
        let (pred, span) = self.ident("predicate")?;
        let first = pred.chars().next().unwrap_or('A');
        if !(first.is_ascii_lowercase() || first == '_') {
            return Err(syntax(span, format!("predicate '{pred}' must start with a lowercase letter")));
        }
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Some((Tok::Comma, _)) => {}
                    Some((Tok::RParen, _)) => break,
                    Some((t, s)) => return Err(syntax(s, format!("expected ',' or ')', found {t}"))),
                    None => return Err(syntax(self.end, "unterminated argument list")),
                }
            }
        }
        Ok(Literal { negated, predicate: pred, args })
    }

    /// Index of the token after a label starting at the cursor, if one is there.
    fn label_end(&self) -> Option<usize> {
        if !matches!(self.peek(), Some(Tok::Ident(_))) {
            return None;
        }
        if self.peek_at(1) != Some(&Tok::LBracket) {
            return Some(1);
        }
        let mut k = 2;
        while let Some(t) = self.peek_at(k) {
            match t {
                Tok::RBracket => return Some(k + 1),
                Tok::Ident(_) | Tok::Comma => k += 1,
                _ => return None,
            }
        }
        None
    }
}

/// Parses a theory and returns source positions of its statements.
pub fn parse_theory_with_spans(text: &str) -> Result<(Theory, SourceMap), Error> {
    let (t, map) = parse_raw(text)?;
    let report = validate(&t);
    if !report.is_ok() {
        return Err(Error::Invalid(report.violations));
    }
    Ok((t, map))
}

fn parse_raw(text: &str) -> Result<(Theory, SourceMap), Error> {
    let toks = lex(text)?;
    let end = end_span(text);
    let mut p = Parser { toks, pos: 0, end };
    let mut t = Theory::new();
    let mut map = SourceMap::default();
    let mut unlabeled = 0usize;
    while p.peek().is_some() {
        let start = p.span();
        let after_label = p.label_end().and_then(|k| p.peek_at(k).cloned());
        match after_label {
            Some(Tok::Colon) => {
                let label = p.label()?;
                p.expect(Tok::Colon)?;
                let mut body = Vec::new();
                if !matches!(p.peek(), Some(Tok::Arrow(_))) {
                    loop {
                        body.push(p.literal()?);
                        if p.peek() == Some(&Tok::Comma) {
                            p.next();
                        } else {
                            break;
                        }
                    }
                }
                let span = p.span();
                match p.next() {
                    Some((Tok::Arrow(kind), _)) => {
                        let head = p.literal()?;
                        p.expect(Tok::Dot)?;
                        t.rules.push(Rule::new(label, kind, body, head));
                        map.rules.push(start);
                    }
                    Some((Tok::Dot, _)) if body.len() == 1 => {
                        let literal = body.pop().unwrap_or_else(|| Literal::prop(false, "_"));
                        t.add_fact(label, literal);
                        map.facts.push(start);
                    }
                    Some((tok, _)) => return Err(syntax(span, format!("expected an arrow, found {tok}"))),
                    None => return Err(syntax(span, "expected an arrow, found end of input")),
                }
            }
            Some(Tok::Gt) => {
                let a = p.label()?;
                p.expect(Tok::Gt)?;
                let b = p.label()?;
                p.expect(Tok::Dot)?;
                map.superiority.push(((a.clone(), b.clone()), start));
                t.superiority.insert((a, b));
            }
            _ => {
                let literal = p.literal()?;
                if let Some(Tok::Arrow(_)) = p.peek() {
                    return Err(syntax(start, "rules need a label"));
                }
                p.expect(Tok::Dot)?;
                unlabeled += 1;
                t.add_fact(format!("_f{unlabeled}"), literal);
                map.facts.push(start);
            }
        }
    }
    Ok((t, map))
}

fn end_span(text: &str) -> Span {
    let mut s = Span { line: 1, column: 1 };
    for c in text.chars() {
        if c == '\n' {
            s.line += 1;
            s.column = 1;
        } else {
            s.column += 1;
        }
    }
    s
}

pub fn parse_theory(text: &str) -> Result<Theory, Error> {
    parse_theory_with_spans(text).map(|(t, _)| t)
}

/// Describes validation failures with the position of the offending statement.
pub fn describe_violations(text: &str, violations: &[Violation]) -> Vec<String> {
    let located = parse_raw(text).ok();
    violations
        .iter()
        .map(|v| match located.as_ref().and_then(|(t, m)| m.span_of(t, v.label())) {
            Some(span) => format!("{span}: {v}"),
            None => v.to_string(),
        })
        .collect()
}

/// Parses one literal, e.g. `!fly(tweety)`.
pub fn parse_literal(text: &str) -> Result<Literal, Error> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: end_span(text) };
    let l = p.literal()?;
    if p.peek() == Some(&Tok::Dot) {
        p.next();
    }
    if let Some((t, s)) = p.next() {
        return Err(syntax(s, format!("unexpected {t} after literal")));
    }
    Ok(l)
}

/// Parses a list of literals, one per line; trailing dots and `%` comments are allowed.
pub fn parse_literals(text: &str) -> Result<BTreeSet<Literal>, Error> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: end_span(text) };
    let mut out = BTreeSet::new();
    while p.peek().is_some() {
        out.insert(p.literal()?);
        if matches!(p.peek(), Some(Tok::Dot) | Some(Tok::Comma)) {
            p.next();
        }
    }
    Ok(out)
}

pub fn serialize_theory(t: &Theory) -> String {
    let mut out = String::new();
    for f in &t.facts {
        out.push_str(&format!("{}: {}.\n", f.label, f.literal));
    }
    for r in &t.rules {
        out.push_str(&format!("{r}\n"));
    }
    for (a, b) in &t.superiority {
        out.push_str(&format!("{a} > {b}.\n"));
    }
    out
}

/// Writes one `<sign><tag>\t<literal>` line per conclusion, sorted bytewise,
/// LF-terminated.
pub fn write_conclusions<W: fmt::Write>(c: &ClosureSet, sink: &mut W) -> fmt::Result {
    for line in conclusion_lines(c) {
        sink.write_str(&line)?;
        sink.write_char('\n')?;
    }
    Ok(())
}

pub fn conclusion_lines(c: &ClosureSet) -> Vec<String> {
    let mut lines: Vec<String> = c.conclusions.iter().map(|x| x.to_string()).collect();
    lines.sort();
    lines
}

pub fn conclusions_to_string(c: &ClosureSet) -> String {
    let mut s = String::new();
    let _ = write_conclusions(c, &mut s);
    s
}
