//! FAERS-style case study: tables, declarative fact extraction, dataset
//! replication and per-case obligation reasoning.
//!
//! A case is identified by its `primaryid`. Extracted facts are unary with the
//! case id as argument, and every case is reasoned about on its own against a
//! shared ruleset and a shared set of obligation templates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::ground::ground;
use crate::parallel::Executor;
use crate::program::Program;
use crate::scalable::{dpar, lambda, delta_with, solve_ground, SolveOptions};
use crate::types::{Literal, Term, Theory};

/// A named table. Empty cells are nulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Checks that every row has one cell per column.
    pub fn new(name: impl Into<String>, columns: Vec<String>, rows: Vec<Vec<String>>) -> Result<Table, Error> {
        let name = name.into();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(Error::Input(alloc::format!(
                    "{name}: row {} has {} fields, expected {}",
                    i + 1,
                    r.len(),
                    columns.len()
                )));
            }
        }
        Ok(Table { name, columns, rows })
    }

    pub fn column(&self, c: &str) -> Option<usize> {
        self.columns.iter().position(|x| x == c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Test {
    NotNull,
    Null,
    Eq(String),
    Ne(String),
}

impl Test {
    fn holds(&self, v: &str) -> bool {
        match self {
            Test::NotNull => !v.is_empty(),
            Test::Null => v.is_empty(),
            Test::Eq(x) => v == x,
            Test::Ne(x) => v != x,
        }
    }
}

/// `predicate | source | key_column | cond[;cond...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionQuery {
    pub predicate: String,
    pub source: String,
    pub key_column: String,
    pub conditions: Vec<(String, Test)>,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn parse_condition(c: &str) -> Result<(String, Test), String> {
    let c = c.trim();
    let (col, rest) = match c.find(|ch: char| ch.is_whitespace() || ch == '=' || ch == '!') {
        Some(i) => (c[..i].trim(), c[i..].trim()),
        None => return Err(alloc::format!("condition `{c}` has no test")),
    };
    let test = if rest == "notnull" {
        Test::NotNull
    } else if rest == "null" {
        Test::Null
    } else if let Some(v) = rest.strip_prefix("!=") {
        Test::Ne(v.trim().into())
    } else if let Some(v) = rest.strip_prefix('=') {
        Test::Eq(v.trim().into())
    } else {
        return Err(alloc::format!("unknown test `{rest}`"));
    };
    if !is_ident(col) {
        return Err(alloc::format!("bad column name `{col}`"));
    }
    Ok((col.into(), test))
}

impl ExtractionQuery {
    pub fn parse(line: &str) -> Result<ExtractionQuery, String> {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 4 && parts.len() != 3 {
            return Err("expected `predicate | source | key_column | conditions`".into());
        }
        let predicate = parts[0];
        if !is_ident(predicate) || !predicate.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(alloc::format!("`{predicate}` is not a predicate name"));
        }
        let conditions = match parts.get(3) {
            Some(c) if !c.is_empty() => c.split(';').map(parse_condition).collect::<Result<_, _>>()?,
            _ => Vec::new(),
        };
        Ok(ExtractionQuery {
            predicate: predicate.into(),
            source: parts[1].into(),
            key_column: parts[2].into(),
            conditions,
        })
    }
}

/// One query per line; blank lines and `#` comments are skipped.
pub fn parse_queries(text: &str) -> Result<Vec<ExtractionQuery>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(ExtractionQuery::parse(line).map_err(|e| Error::Input(alloc::format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

fn case_literal(predicate: &str, id: &str) -> Literal {
    Literal::new(false, predicate, vec![Term::Const(id.into())])
}

/// Facts produced by the queries, with the number produced per source table.
pub fn extract_facts(
    tables: &[Table],
    queries: &[ExtractionQuery],
) -> Result<(BTreeSet<Literal>, BTreeMap<String, usize>), Error> {
    let mut facts = BTreeSet::new();
    let mut per_source: BTreeMap<String, usize> = BTreeMap::new();
    for q in queries {
        let t = tables
            .iter()
            .find(|t| t.name == q.source)
            .ok_or_else(|| Error::Input(alloc::format!("query {}: no table {}", q.predicate, q.source)))?;
        let missing = |c: &str| Error::Input(alloc::format!("query {}: {} has no column {c}", q.predicate, t.name));
        let key = t.column(&q.key_column).ok_or_else(|| missing(&q.key_column))?;
        let conds: Vec<(usize, &Test)> = q
            .conditions
            .iter()
            .map(|(c, test)| t.column(c).map(|i| (i, test)).ok_or_else(|| missing(c)))
            .collect::<Result<_, _>>()?;
        for (i, row) in t.rows.iter().enumerate() {
            if !conds.iter().all(|(c, test)| test.holds(&row[*c])) {
                continue;
            }
            let id = &row[key];
            if !is_ident(id) || id.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
                return Err(Error::Input(alloc::format!("{} row {}: bad case id `{id}`", t.name, i + 1)));
            }
            if facts.insert(case_literal(&q.predicate, id)) {
                *per_source.entry(t.name.clone()).or_default() += 1;
            }
        }
    }
    Ok((facts, per_source))
}

/// Copies every row `k` times, appending the copy number 1..=k to the key column.
pub fn replicate(tables: &[Table], k: usize, key_column: &str) -> Result<Vec<Table>, Error> {
    if k == 0 {
        return Err(Error::Input("replication factor must be at least 1".into()));
    }
    Ok(tables
        .iter()
        .map(|t| {
            let key = t.column(key_column);
            let mut rows = Vec::with_capacity(t.rows.len() * k);
            for r in &t.rows {
                for c in 1..=k {
                    let mut r = r.clone();
                    if let Some(i) = key {
                        r[i] = alloc::format!("{}{c}", r[i]);
                    }
                    rows.push(r);
                }
            }
            Table { name: t.name.clone(), columns: t.columns.clone(), rows }
        })
        .collect())
}

/// Facts grouped by case id (their single argument).
pub fn group_by_case(facts: &BTreeSet<Literal>) -> BTreeMap<String, Vec<Literal>> {
    let mut out: BTreeMap<String, Vec<Literal>> = BTreeMap::new();
    for f in facts {
        if let [Term::Const(id)] = f.args.as_slice() {
            out.entry(id.clone()).or_default().push(f.clone());
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseStudyReport {
    pub cases: usize,
    pub facts: usize,
    pub facts_per_source: BTreeMap<String, usize>,
    /// Sum over cases of the number of +∂_|| conclusions.
    pub conclusions: u64,
    /// Per-case +∂_|| conclusions, when requested.
    pub emitted: Vec<Literal>,
}

impl CaseStudyReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            alloc::format!("cases: {}", self.cases),
            alloc::format!("facts: {}", self.facts),
            alloc::format!("conclusions: {}", self.conclusions),
        ];
        for (s, n) in &self.facts_per_source {
            out.push(alloc::format!("facts.{s}: {n}"));
        }
        out
    }
}

const PLACEHOLDER: &str = "_case";

fn instantiate(l: &Literal, id: &str) -> Literal {
    let args = l.args.iter().map(|t| if t.is_var() { Term::Const(id.into()) } else { t.clone() }).collect();
    Literal { negated: l.negated, predicate: l.predicate.clone(), args }
}

fn rename(l: &Literal, from: &str, to: &str) -> Literal {
    let args = l
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) if c == from => Term::Const(to.into()),
            t => t.clone(),
        })
        .collect();
    Literal { negated: l.negated, predicate: l.predicate.clone(), args }
}

/// Extracts facts and reasons about every case against `ruleset` plus the
/// obligations instantiated with the case id.
///
/// The ruleset is grounded and compiled once for a placeholder case constant;
/// each case then only swaps the fact set. Cases whose id clashes with a
/// constant of the ruleset are solved directly.
pub fn run_case_study<E: Executor>(
    tables: &[Table],
    queries: &[ExtractionQuery],
    ruleset: &Theory,
    obligations: &[Literal],
    emit: bool,
    exec: &E,
) -> Result<CaseStudyReport, Error> {
    let (facts, per_source) = extract_facts(tables, queries)?;
    let cases = group_by_case(&facts);
    crate::types::validate(ruleset).into_result()?;
    let ruleset_consts = ruleset.constants();

    let mut template = ruleset.clone();
    for q in queries {
        template.add_fact(alloc::format!("_q_{}", q.predicate), case_literal(&q.predicate, PLACEHOLDER));
    }
    for (i, o) in obligations.iter().enumerate() {
        template.add_fact(alloc::format!("_o{i}"), instantiate(o, PLACEHOLDER));
    }
    let (g, _) = ground(&template)?;
    let base_len = ruleset.facts.len();
    let p = Program::compile(&g, core::iter::empty());
    let mut base = vec![false; p.num_lits()];
    for f in &g.facts[..base_len] {
        base[p.lookup(&f.literal).expect("compiled") as usize] = true;
    }
    let obligation_ids: Vec<u32> =
        obligations.iter().map(|o| p.lookup(&instantiate(o, PLACEHOLDER)).expect("compiled")).collect();

    let work: Vec<(&String, &Vec<Literal>)> = cases.iter().collect();
    let chunks: Vec<Vec<(&String, &Vec<Literal>)>> = work.chunks(256).map(<[_]>::to_vec).collect();
    let results = exec.map(chunks, |chunk| {
        let mut count = 0u64;
        let mut emitted = Vec::new();
        for (id, fs) in chunk {
            if ruleset_consts.contains(id.as_str()) {
                let mut t = ruleset.clone();
                for f in fs {
                    t.add_fact(alloc::format!("_c_{}", f.predicate), f.clone());
                }
                for (i, o) in obligations.iter().enumerate() {
                    t.add_fact(alloc::format!("_o{i}"), instantiate(o, id));
                }
                let Ok((gt, _)) = ground(&t) else { continue };
                let c = solve_ground(&gt, &SolveOptions { dparstar: false, ..Default::default() });
                let lits = c.dpar.literals(crate::types::Sign::Plus, crate::types::Tag::DPar);
                count += lits.len() as u64;
                if emit {
                    emitted.extend(lits);
                }
                continue;
            }
            let mut fact = base.clone();
            for f in fs {
                let l = p.lookup(&rename(f, id, PLACEHOLDER)).expect("query predicate compiled");
                fact[l as usize] = true;
            }
            for &o in &obligation_ids {
                fact[o as usize] = true;
            }
            let d = delta_with(&p, &fact, false);
            let l = lambda(&p, &d, false);
            let dp = dpar(&p, &d, &l, false, false);
            for (i, b) in dp.plus.iter().enumerate() {
                if *b {
                    count += 1;
                    if emit {
                        emitted.push(rename(&p.literal(i as u32), PLACEHOLDER, id));
                    }
                }
            }
        }
        (count, emitted)
    });
    let mut report = CaseStudyReport {
        cases: cases.len(),
        facts: facts.len(),
        facts_per_source: per_source,
        ..Default::default()
    };
    for (c, e) in results {
        report.conclusions += c;
        report.emitted.extend(e);
    }
    report.emitted.sort();
    Ok(report)
}

/// Parameters of the synthetic FAERS-like dataset.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticConfig {
    /// Target total number of rows over all tables.
    pub rows: usize,
    pub seed: u64,
    /// Probability that an optional cell is empty.
    pub null_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig { rows: 100_000, seed: 42, null_rate: 0.2 }
    }
}

fn pick<'s>(rng: &mut ChaCha8Rng, xs: &[&'s str]) -> &'s str {
    xs[rng.gen_range(0..xs.len())]
}

/// Seeded synthetic tables DEMO, DRUG, OUTC, REAC and RPSR keyed by
/// nine-digit primaryids. The data is invented, not FDA ground truth.
pub fn synthetic_tables(cfg: &SyntheticConfig) -> Vec<Table> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cols = |c: &[&str]| c.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut demo = Table::new("DEMO", cols(&["primaryid", "caseid", "age", "sex", "wt", "occr_country"]), vec![]).unwrap();
    let mut drug = Table::new("DRUG", cols(&["primaryid", "drug_seq", "role_cod", "drugname", "route"]), vec![]).unwrap();
    let mut outc = Table::new("OUTC", cols(&["primaryid", "outc_cod"]), vec![]).unwrap();
    let mut reac = Table::new("REAC", cols(&["primaryid", "pt"]), vec![]).unwrap();
    let mut rpsr = Table::new("RPSR", cols(&["primaryid", "rpsr_cod"]), vec![]).unwrap();
    let mut total = 0;
    let mut case = 0u64;
    while total < cfg.rows {
        let id = alloc::format!("{}", 100_000_000 + case);
        let caseid = alloc::format!("{}", 10_000_000 + case);
        case += 1;
        let opt = |rng: &mut ChaCha8Rng, v: String| if rng.gen_bool(cfg.null_rate) { String::new() } else { v };
        let age = alloc::format!("{}", rng.gen_range(1..95));
        let wt = alloc::format!("{}", rng.gen_range(3..150));
        let sex = pick(&mut rng, &["F", "M"]).to_string();
        let country = pick(&mut rng, &["US", "GB", "DE", "FR", "JP", "CA"]).to_string();
        demo.rows.push(vec![id.clone(), caseid, opt(&mut rng, age), opt(&mut rng, sex), opt(&mut rng, wt), opt(&mut rng, country)]);
        total += 1;
        for seq in 1..=rng.gen_range(1..=3) {
            let role = pick(&mut rng, &["PS", "SS", "C", "I"]).to_string();
            let name = pick(&mut rng, &["ASPIRIN", "IBUPROFEN", "METFORMIN", "WARFARIN", "INSULIN"]).to_string();
            let route = pick(&mut rng, &["ORAL", "INTRAVENOUS", "TOPICAL"]).to_string();
            drug.rows.push(vec![id.clone(), alloc::format!("{seq}"), role, name, opt(&mut rng, route)]);
            total += 1;
        }
        for _ in 0..rng.gen_range(0..=2) {
            let o = pick(&mut rng, &["DE", "HO", "LT", "OT", "DS"]).to_string();
            outc.rows.push(vec![id.clone(), opt(&mut rng, o)]);
            total += 1;
        }
        for _ in 0..rng.gen_range(1..=2) {
            let pt = pick(&mut rng, &["Nausea", "Headache", "Rash", "Dizziness"]).to_string();
            reac.rows.push(vec![id.clone(), opt(&mut rng, pt)]);
            total += 1;
        }
        if rng.gen_bool(0.5) {
            let r = pick(&mut rng, &["FGN", "HP", "CSM", "LIT"]).to_string();
            rpsr.rows.push(vec![id.clone(), opt(&mut rng, r)]);
            total += 1;
        }
    }
    vec![demo, drug, outc, reac, rpsr]
}
