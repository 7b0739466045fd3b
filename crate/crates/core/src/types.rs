//! Domain model: terms, literals, rules, theories and tagged conclusions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A signed atom. Identity is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Literal {
    pub negated: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(negated: bool, predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Literal { negated, predicate: predicate.into(), args }
    }

    /// Propositional literal with no arguments.
    pub fn prop(negated: bool, predicate: impl Into<String>) -> Self {
        Self::new(negated, predicate, Vec::new())
    }

    /// Ground literal from constant names.
    pub fn ground(negated: bool, predicate: impl Into<String>, consts: &[&str]) -> Self {
        let args = consts.iter().map(|c| Term::Const((*c).to_string())).collect();
        Self::new(negated, predicate, args)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn complement(&self) -> Literal {
        Literal { negated: !self.negated, ..self.clone() }
    }

    /// The same atom with positive polarity.
    pub fn atom(&self) -> Literal {
        Literal { negated: false, ..self.clone() }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(a.name())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub fn complement(l: &Literal) -> Literal {
    l.complement()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RuleKind {
    Strict,
    Defeasible,
    Defeater,
}

impl RuleKind {
    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }

    /// Strict and defeasible rules can support a conclusion; defeaters only block.
    pub fn supports(self) -> bool {
        self != RuleKind::Defeater
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rule {
    pub label: String,
    pub kind: RuleKind,
    pub body: Vec<Literal>,
    pub head: Literal,
}

impl Rule {
    /// Builds a rule, dropping repeated body literals (the body is a set).
    pub fn new(label: impl Into<String>, kind: RuleKind, body: Vec<Literal>, head: Literal) -> Self {
        let mut seen = BTreeSet::new();
        let body = body.into_iter().filter(|l| seen.insert(l.clone())).collect();
        Rule { label: label.into(), kind, body, head }
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(Literal::is_ground)
    }

    /// Distinct variables in order of first occurrence (body first, then head).
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for l in self.body.iter().chain(core::iter::once(&self.head)) {
            for v in l.variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        if !self.body.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "{} {}.", self.kind.arrow(), self.head)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fact {
    pub label: String,
    pub literal: Literal,
}

/// A defeasible theory (F, R, >). Superiority is kept on labels so that
/// transformations can rewrite rules without losing priorities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theory {
    pub facts: Vec<Fact>,
    pub rules: Vec<Rule>,
    pub superiority: BTreeSet<(String, String)>,
}

impl Theory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_fact(&mut self, label: impl Into<String>, literal: Literal) -> &mut Self {
        self.facts.push(Fact { label: label.into(), literal });
        self
    }

    pub fn add_rule(&mut self, rule: Rule) -> &mut Self {
        self.rules.push(rule);
        self
    }

    pub fn add_superiority(&mut self, sup: impl Into<String>, inf: impl Into<String>) -> &mut Self {
        self.superiority.insert((sup.into(), inf.into()));
        self
    }

    pub fn is_ground(&self) -> bool {
        self.facts.iter().all(|f| f.literal.is_ground()) && self.rules.iter().all(Rule::is_ground)
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.rules.is_empty() && self.superiority.is_empty()
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    /// All labels of facts and rules, Λ(D).
    pub fn labels(&self) -> BTreeSet<&str> {
        self.facts
            .iter()
            .map(|f| f.label.as_str())
            .chain(self.rules.iter().map(|r| r.label.as_str()))
            .collect()
    }

    /// Constants occurring anywhere in the theory.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let lits = self
            .facts
            .iter()
            .map(|f| &f.literal)
            .chain(self.rules.iter().flat_map(|r| r.body.iter().chain(core::iter::once(&r.head))));
        for l in lits {
            for t in &l.args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        }
        out
    }

    /// Componentwise union D1 + D2. Identical elements are merged; clashing
    /// labels are left for [`validate`] to report.
    pub fn add(&self, other: &Theory) -> Theory {
        let mut out = self.clone();
        for f in &other.facts {
            if !out.facts.contains(f) {
                out.facts.push(f.clone());
            }
        }
        for r in &other.rules {
            if !out.rules.contains(r) {
                out.rules.push(r.clone());
            }
        }
        out.superiority.extend(other.superiority.iter().cloned());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    NonGroundFact { label: String },
    NotRangeRestricted { label: String, variable: String },
    EmptyName { label: String },
    DuplicateLabel { label: String },
    UnknownSuperiorityLabel { label: String },
    SuperiorityCycle { labels: Vec<String> },
}

impl Violation {
    /// The label the violation is about (first label for cycles).
    pub fn label(&self) -> &str {
        match self {
            Violation::NonGroundFact { label }
            | Violation::NotRangeRestricted { label, .. }
            | Violation::EmptyName { label }
            | Violation::DuplicateLabel { label }
            | Violation::UnknownSuperiorityLabel { label } => label,
            Violation::SuperiorityCycle { labels } => labels.first().map_or("", |s| s.as_str()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonGroundFact { label } => write!(f, "non-ground fact {label}"),
            Violation::NotRangeRestricted { label, variable } => {
                write!(f, "head variable {variable} of {label} does not occur in its body")
            }
            Violation::EmptyName { label } => write!(f, "empty name in {label}"),
            Violation::DuplicateLabel { label } => write!(f, "duplicate label {label}"),
            Violation::UnknownSuperiorityLabel { label } => {
                write!(f, "superiority mentions unknown rule {label}")
            }
            Violation::SuperiorityCycle { labels } => {
                write!(f, "superiority cycle {}", labels.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), Error> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(self.violations))
        }
    }
}

fn has_empty_name(l: &Literal) -> bool {
    l.predicate.is_empty() || l.args.iter().any(|t| t.name().is_empty())
}

pub fn validate(t: &Theory) -> ValidationReport {
    let mut v = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut reported: BTreeSet<&str> = BTreeSet::new();
    let all_labels = t.facts.iter().map(|f| &f.label).chain(t.rules.iter().map(|r| &r.label));
    for l in all_labels {
        if l.is_empty() {
            v.push(Violation::EmptyName { label: String::new() });
        } else if !seen.insert(l) && reported.insert(l) {
            v.push(Violation::DuplicateLabel { label: l.clone() });
        }
    }
    for f in &t.facts {
        if has_empty_name(&f.literal) {
            v.push(Violation::EmptyName { label: f.label.clone() });
        }
        if !f.literal.is_ground() {
            v.push(Violation::NonGroundFact { label: f.label.clone() });
        }
    }
    for r in &t.rules {
        if has_empty_name(&r.head) || r.body.iter().any(has_empty_name) {
            v.push(Violation::EmptyName { label: r.label.clone() });
        }
        let body_vars: BTreeSet<&str> = r.body.iter().flat_map(|l| l.variables()).collect();
        let mut missing: BTreeSet<&str> = BTreeSet::new();
        for hv in r.head.variables() {
            if !body_vars.contains(hv) && missing.insert(hv) {
                v.push(Violation::NotRangeRestricted { label: r.label.clone(), variable: hv.to_string() });
            }
        }
    }
    let rule_labels: BTreeSet<&str> = t.rules.iter().map(|r| r.label.as_str()).collect();
    let mut unknown = BTreeSet::new();
    for (a, b) in &t.superiority {
        for x in [a, b] {
            if !rule_labels.contains(x.as_str()) && unknown.insert(x.as_str()) {
                v.push(Violation::UnknownSuperiorityLabel { label: x.clone() });
            }
        }
    }
    if let Some(cycle) = find_cycle(&t.superiority) {
        v.push(Violation::SuperiorityCycle { labels: cycle });
    }
    ValidationReport { violations: v }
}

/// Returns one cycle of the relation, listed from its smallest label.
fn find_cycle(rel: &BTreeSet<(String, String)>) -> Option<Vec<String>> {
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in rel {
        succ.entry(a.as_str()).or_default().push(b.as_str());
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    let nodes: Vec<&str> = succ.keys().copied().collect();
    for start in nodes {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut stack: Vec<(&str, usize)> = alloc::vec![(start, 0)];
        state.insert(start, 1);
        path.push(start);
        while let Some((node, idx)) = stack.pop() {
            let next = succ.get(node).and_then(|s| s.get(idx)).copied();
            match next {
                Some(n) => {
                    stack.push((node, idx + 1));
                    match state.get(n).copied().unwrap_or(0) {
                        0 => {
                            state.insert(n, 1);
                            path.push(n);
                            stack.push((n, 0));
                        }
                        1 => {
                            let pos = path.iter().position(|p| *p == n).unwrap_or(0);
                            let mut cyc: Vec<String> = path[pos..].iter().map(|s| s.to_string()).collect();
                            let min = (0..cyc.len()).min_by_key(|&i| &cyc[i]).unwrap_or(0);
                            cyc.rotate_left(min);
                            return Some(cyc);
                        }
                        _ => {}
                    }
                }
                None => {
                    state.insert(node, 2);
                    path.pop();
                }
            }
        }
    }
    None
}

/// Σ(D): every literal of a ground theory together with its complement.
pub fn vocabulary(t: &Theory) -> Result<BTreeSet<Literal>, Error> {
    if !t.is_ground() {
        return Err(Error::NotGround);
    }
    let mut out = BTreeSet::new();
    let lits = t
        .facts
        .iter()
        .map(|f| &f.literal)
        .chain(t.rules.iter().flat_map(|r| r.body.iter().chain(core::iter::once(&r.head))));
    for l in lits {
        if !out.contains(l) {
            out.insert(l.complement());
            out.insert(l.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Tag {
    Delta,
    Lambda,
    DPar,
    DParStar,
    DClassic,
    DClassicStar,
}

impl Tag {
    pub const ALL: [Tag; 6] =
        [Tag::Delta, Tag::Lambda, Tag::DPar, Tag::DParStar, Tag::DClassic, Tag::DClassicStar];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Delta => "delta",
            Tag::Lambda => "lambda",
            Tag::DPar => "dpar",
            Tag::DParStar => "dparstar",
            Tag::DClassic => "dclassic",
            Tag::DClassicStar => "dclassicstar",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaggedConclusion {
    pub sign: Sign,
    pub tag: Tag,
    pub literal: Literal,
}

impl TaggedConclusion {
    pub fn new(sign: Sign, tag: Tag, literal: Literal) -> Self {
        TaggedConclusion { sign, tag, literal }
    }
}

impl fmt::Display for TaggedConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}\t{}", self.sign.symbol(), self.tag, self.literal)
    }
}

/// Answer to a membership query against a closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    /// The literal lies outside the evaluated universe; negative tags hold
    /// trivially there (no fact or rule mentions it).
    TriviallyNegative,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureSet {
    pub conclusions: BTreeSet<TaggedConclusion>,
    pub universe: BTreeSet<Literal>,
}

impl ClosureSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sign: Sign, tag: Tag, literal: Literal) -> bool {
        self.conclusions.insert(TaggedConclusion { sign, tag, literal })
    }

    pub fn contains(&self, sign: Sign, tag: Tag, literal: &Literal) -> bool {
        self.conclusions.contains(&TaggedConclusion { sign, tag, literal: literal.clone() })
    }

    pub fn query(&self, sign: Sign, tag: Tag, literal: &Literal) -> Answer {
        if self.contains(sign, tag, literal) {
            Answer::Yes
        } else if sign == Sign::Minus && !self.universe.contains(literal) {
            Answer::TriviallyNegative
        } else {
            Answer::No
        }
    }

    pub fn literals(&self, sign: Sign, tag: Tag) -> BTreeSet<Literal> {
        self.conclusions
            .iter()
            .filter(|c| c.sign == sign && c.tag == tag)
            .map(|c| c.literal.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.conclusions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conclusions.is_empty()
    }

    pub fn merge(&mut self, other: ClosureSet) {
        self.conclusions.extend(other.conclusions);
        self.universe.extend(other.universe);
    }

    /// Drops conclusions whose literal is outside `vocab`.
    pub fn restrict(&self, vocab: &BTreeSet<Literal>) -> ClosureSet {
        ClosureSet {
            conclusions: self.conclusions.iter().filter(|c| vocab.contains(&c.literal)).cloned().collect(),
            universe: self.universe.intersection(vocab).cloned().collect(),
        }
    }

    /// First (tag, literal) holding with both signs, if any.
    pub fn sign_clash(&self) -> Option<(Tag, Literal)> {
        self.conclusions
            .iter()
            .filter(|c| c.sign == Sign::Plus)
            .find(|c| self.contains(Sign::Minus, c.tag, &c.literal))
            .map(|c| (c.tag, c.literal.clone()))
    }
}
