//! Partitioned import-apply-infer evaluation.
//!
//! Conclusions live in key-value partitions. Each round has two passes:
//! `apply` joins rule bodies against the known literals (re-shuffling on the
//! join variables before every pairwise join) and emits one support record per
//! applicable rule instance; `infer` groups supports by atom, so `q` and `!q`
//! meet in one partition, and resolves conflicts there. Rounds repeat until no
//! new conclusion appears. Partitions are processed through an [`Executor`],
//! and results are merged as sets, so the output does not depend on the
//! partition count or on scheduling.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalable::{SolveOptions, StagedClosures};
use crate::types::{validate, ClosureSet, Literal, Rule, RuleKind, Sign, Tag, Term, Theory};
use crate::{HashMap, HashSet};

/// Runs a function over a batch of independent work items.
pub trait Executor: Sync {
    /// Applies `f` to every item; output order follows input order.
    fn map<T: Send, U: Send, F: Fn(T) -> U + Sync>(&self, items: Vec<T>, f: F) -> Vec<U>;
}

/// Runs partitions one after the other on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T: Send, U: Send, F: Fn(T) -> U + Sync>(&self, items: Vec<T>, f: F) -> Vec<U> {
        items.into_iter().map(f).collect()
    }
}

/// Stable assignment of canonical keys to partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionPlan {
    pub partitions: usize,
    pub seed: u64,
}

impl PartitionPlan {
    pub fn new(partitions: usize, seed: u64) -> Result<Self, Error> {
        if partitions == 0 {
            return Err(Error::Input("partition count must be at least 1".into()));
        }
        Ok(PartitionPlan { partitions, seed })
    }

    /// FNV-1a over the key, salted with the seed.
    pub fn partition_of(&self, key: &str) -> usize {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        for b in key.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        (h % self.partitions as u64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Payload {
    /// Knowledge about a literal.
    Known { literal: Literal, tags: Vec<Tag> },
    /// The literal is supported by an applicable instance of the labelled rule.
    Support { literal: Literal, label: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KVRecord {
    pub key: String,
    pub value: Payload,
}

/// Key of the second pass: the atom with polarity stripped.
pub fn atom_key(l: &Literal) -> String {
    l.atom().to_string()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelStats {
    pub rounds: usize,
    pub records_shuffled: usize,
    pub supports_produced: usize,
}

impl ParallelStats {
    pub fn lines(&self) -> Vec<String> {
        vec![
            alloc::format!("rounds: {}", self.rounds),
            alloc::format!("records_shuffled: {}", self.records_shuffled),
            alloc::format!("supports_produced: {}", self.supports_produced),
        ]
    }
}

/// Distributes known literals over partitions by atom key.
pub fn import<I>(known: I, plan: &PartitionPlan) -> Vec<Vec<KVRecord>>
where
    I: IntoIterator<Item = (Literal, Vec<Tag>)>,
{
    let mut parts = vec![Vec::new(); plan.partitions];
    for (literal, tags) in known {
        let key = atom_key(&literal);
        parts[plan.partition_of(&key)].push(KVRecord { key, value: Payload::Known { literal, tags } });
    }
    parts
}

type Row = Vec<Option<String>>;

/// Known literals indexed by predicate, then polarity.
struct Extension<'k> {
    by_pred: HashMap<&'k str, [Vec<&'k Literal>; 2]>,
}

impl<'k> Extension<'k> {
    fn new(known: &'k BTreeSet<Literal>) -> Self {
        let mut by_pred: HashMap<&str, [Vec<&Literal>; 2]> = HashMap::new();
        for l in known {
            by_pred.entry(l.predicate.as_str()).or_default()[l.negated as usize].push(l);
        }
        Extension { by_pred }
    }

    fn get(&self, l: &Literal) -> &[&'k Literal] {
        self.by_pred.get(l.predicate.as_str()).map_or(&[], |v| v[l.negated as usize].as_slice())
    }
}

fn substitute(l: &Literal, vars: &[&str], row: &Row) -> Literal {
    let args = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => {
                let i = vars.iter().position(|x| x == v).expect("range-restricted");
                Term::Const(row[i].clone().expect("bound by body"))
            }
            c => c.clone(),
        })
        .collect();
    Literal { negated: l.negated, predicate: l.predicate.clone(), args }
}

/// Extends `row` with `fact` as an instance of `lit`, if they agree.
fn extend(row: &Row, lit: &Literal, fact: &Literal, vars: &[&str]) -> Option<Row> {
    if lit.args.len() != fact.args.len() {
        return None;
    }
    let mut out = row.clone();
    for (t, f) in lit.args.iter().zip(&fact.args) {
        match t {
            Term::Const(c) => {
                if c != f.name() {
                    return None;
                }
            }
            Term::Var(v) => {
                let i = vars.iter().position(|x| x == v).expect("known variable");
                match &out[i] {
                    Some(x) if x != f.name() => return None,
                    Some(_) => {}
                    None => out[i] = Some(f.name().into()),
                }
            }
        }
    }
    Some(out)
}

fn join_key(values: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = values.collect();
    v.join("\u{1f}")
}

/// Applicable instances of `rule` over `ext`, joining body literals pairwise
/// with a shuffle on the join variables before each join.
fn applicable<E: Executor>(
    rule: &Rule,
    ext: &Extension<'_>,
    plan: &PartitionPlan,
    exec: &E,
    stats: &mut ParallelStats,
) -> Vec<Literal> {
    let vars = rule.variables();
    let mut order: Vec<&Literal> = rule.body.iter().collect();
    order.sort_by_key(|l| ext.get(l).len());
    let mut rows: Vec<Row> = vec![vec![None; vars.len()]];
    let mut bound: Vec<bool> = vec![false; vars.len()];
    for lit in order {
        let join_vars: Vec<usize> = lit
            .args
            .iter()
            .filter_map(|t| match t {
                Term::Var(v) => vars.iter().position(|x| x == v).filter(|&i| bound[i]),
                _ => None,
            })
            .collect();
        let facts = ext.get(lit);
        let mut parts: Vec<(Vec<Row>, Vec<&Literal>)> = vec![(Vec::new(), Vec::new()); plan.partitions];
        for row in rows {
            let key = join_key(join_vars.iter().map(|&i| row[i].clone().unwrap_or_default()));
            parts[plan.partition_of(&key)].0.push(row);
        }
        let positions: Vec<Vec<usize>> = join_vars
            .iter()
            .map(|&i| {
                lit.args
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| matches!(t, Term::Var(v) if *v == vars[i]))
                    .map(|(p, _)| p)
                    .collect()
            })
            .collect();
        for f in facts {
            if f.args.len() != lit.args.len() {
                continue;
            }
            let key = join_key(positions.iter().map(|ps| f.args[ps[0]].name().to_string()));
            parts[plan.partition_of(&key)].1.push(f);
        }
        stats.records_shuffled += parts.iter().map(|(r, f)| r.len() + f.len()).sum::<usize>();
        let vars_ref = &vars;
        let joined = exec.map(parts, |(rows, facts)| {
            let mut index: HashMap<Vec<&str>, Vec<&Literal>> = HashMap::new();
            for f in facts {
                let key = positions.iter().map(|ps| f.args[ps[0]].name()).collect();
                index.entry(key).or_default().push(f);
            }
            let mut out = Vec::new();
            for row in &rows {
                let key: Vec<&str> = join_vars.iter().map(|&i| row[i].as_deref().unwrap_or("")).collect();
                if let Some(fs) = index.get(&key) {
                    out.extend(fs.iter().filter_map(|f| extend(row, lit, f, vars_ref)));
                }
            }
            out
        });
        rows = joined.into_iter().flatten().collect();
        for t in &lit.args {
            if let Term::Var(v) = t {
                bound[vars.iter().position(|x| x == v).expect("known variable")] = true;
            }
        }
        if rows.is_empty() {
            break;
        }
    }
    rows.iter().map(|row| substitute(&rule.head, &vars, row)).collect()
}

/// First pass: one support record per applicable rule instance, partitioned
/// by the atom of its head.
pub fn apply_pass<E: Executor>(
    known: &BTreeSet<Literal>,
    rules: &[&Rule],
    plan: &PartitionPlan,
    exec: &E,
    stats: &mut ParallelStats,
) -> Vec<Vec<KVRecord>> {
    let ext = Extension::new(known);
    let mut parts = vec![Vec::new(); plan.partitions];
    for rule in rules {
        for literal in applicable(rule, &ext, plan, exec, stats) {
            let key = atom_key(&literal);
            stats.supports_produced += 1;
            parts[plan.partition_of(&key)]
                .push(KVRecord { key, value: Payload::Support { literal, label: rule.label.clone() } });
        }
    }
    for p in &mut parts {
        p.sort();
        p.dedup();
    }
    stats.records_shuffled += parts.iter().map(Vec::len).sum::<usize>();
    parts
}

/// Read-only inputs of the second pass.
pub struct InferContext<'c> {
    pub tag: Tag,
    pub delta: &'c HashSet<Literal>,
    /// Live rule instances per atom key (all rules, defeaters included), used by ∂_|| and ∂_||*.
    pub attacks: &'c HashMap<String, Vec<(Literal, String)>>,
    /// Rules each label is superior to.
    pub superiority: &'c HashMap<&'c str, HashSet<&'c str>>,
}

fn stronger(sup: &HashMap<&str, HashSet<&str>>, a: &str, b: &str) -> bool {
    sup.get(a).is_some_and(|s| s.contains(b))
}

/// Second pass: resolves each atom's supports into new conclusions.
pub fn infer_pass<E: Executor>(
    supports: Vec<Vec<KVRecord>>,
    known: &BTreeSet<Literal>,
    ctx: &InferContext<'_>,
    exec: &E,
) -> BTreeSet<Literal> {
    let results = exec.map(supports, |part| {
        let mut by_atom: HashMap<&str, Vec<(&Literal, &str)>> = HashMap::new();
        for r in &part {
            if let Payload::Support { literal, label } = &r.value {
                by_atom.entry(r.key.as_str()).or_default().push((literal, label.as_str()));
            }
        }
        let mut out = BTreeSet::new();
        for (key, sups) in by_atom {
            for (q, _) in &sups {
                if known.contains(*q) || out.contains(*q) {
                    continue;
                }
                if concluded(q, key, &sups, ctx) {
                    out.insert((*q).clone());
                }
            }
        }
        out
    });
    results.into_iter().flatten().collect()
}

fn concluded(q: &Literal, key: &str, sups: &[(&Literal, &str)], ctx: &InferContext<'_>) -> bool {
    let nq = q.complement();
    match ctx.tag {
        Tag::Delta => true,
        Tag::Lambda => !ctx.delta.contains(&nq),
        Tag::DPar | Tag::DParStar => {
            if ctx.delta.contains(&nq) {
                return false;
            }
            let mine: Vec<&str> = sups.iter().filter(|(l, _)| *l == q).map(|(_, r)| *r).collect();
            let live = ctx.attacks.get(key).map_or(&[][..], |v| v.as_slice());
            let mut attackers = live.iter().filter(|(l, _)| *l == nq).map(|(_, s)| s.as_str());
            if ctx.tag == Tag::DPar {
                attackers.all(|s| mine.iter().any(|t| stronger(ctx.superiority, t, s)))
            } else {
                let attackers: Vec<&str> = attackers.collect();
                mine.iter().any(|r| attackers.iter().all(|s| stronger(ctx.superiority, r, s)))
            }
        }
        _ => false,
    }
}

fn stage<E: Executor>(
    start: BTreeSet<Literal>,
    rules: &[&Rule],
    ctx: &InferContext<'_>,
    plan: &PartitionPlan,
    exec: &E,
    stats: &mut ParallelStats,
) -> BTreeSet<Literal> {
    let mut known = start;
    loop {
        stats.rounds += 1;
        let supports = apply_pass(&known, rules, plan, exec, stats);
        let new = infer_pass(supports, &known, ctx, exec);
        if new.is_empty() {
            return known;
        }
        known.extend(new);
    }
}

fn closure(lits: &BTreeSet<Literal>, tag: Tag) -> ClosureSet {
    let mut c = ClosureSet::new();
    for l in lits {
        c.insert(Sign::Plus, tag, l.clone());
    }
    c
}

/// Positive Δ, λ, ∂_|| (and ∂_||*) closures by partitioned rounds.
pub fn parallel_solve<E: Executor>(
    t: &Theory,
    plan: &PartitionPlan,
    opts: &SolveOptions,
    exec: &E,
) -> Result<(StagedClosures, ParallelStats), Error> {
    validate(t).into_result()?;
    let mut stats = ParallelStats::default();
    // Supports of a variable rule carry its own label, so instances share its priorities.
    let mut superiority: HashMap<&str, HashSet<&str>> = HashMap::new();
    for (a, b) in &t.superiority {
        superiority.entry(a.as_str()).or_default().insert(b.as_str());
    }
    let strict: Vec<&Rule> = t.rules.iter().filter(|r| r.kind == RuleKind::Strict).collect();
    let supporting: Vec<&Rule> = t.rules.iter().filter(|r| r.kind.supports()).collect();
    let all: Vec<&Rule> = t.rules.iter().collect();
    let facts: BTreeSet<Literal> = t.facts.iter().map(|f| f.literal.clone()).collect();
    let imported = import(facts.iter().map(|l| (l.clone(), vec![Tag::Delta])), plan);
    stats.records_shuffled += imported.iter().map(Vec::len).sum::<usize>();

    let empty_attacks = HashMap::new();
    let no_delta = HashSet::new();
    let mut ctx = InferContext {
        tag: Tag::Delta,
        delta: &no_delta,
        attacks: &empty_attacks,
        superiority: &superiority,
    };
    let delta = stage(facts, &strict, &ctx, plan, exec, &mut stats);
    let delta_set: HashSet<Literal> = delta.iter().cloned().collect();
    ctx.delta = &delta_set;
    ctx.tag = Tag::Lambda;
    let lambda = stage(delta.clone(), &supporting, &ctx, plan, exec, &mut stats);

    // Live instances of every rule: bodies within +λ.
    let mut attacks: HashMap<String, Vec<(Literal, String)>> = HashMap::new();
    for part in apply_pass(&lambda, &all, plan, exec, &mut stats) {
        for r in part {
            if let Payload::Support { literal, label } = r.value {
                attacks.entry(r.key).or_default().push((literal, label));
            }
        }
    }
    ctx.attacks = &attacks;
    ctx.tag = Tag::DPar;
    let dpar = stage(delta.clone(), &supporting, &ctx, plan, exec, &mut stats);
    let dparstar = opts.dparstar.then(|| {
        ctx.tag = Tag::DParStar;
        stage(delta.clone(), &supporting, &ctx, plan, exec, &mut stats)
    });
    Ok((
        StagedClosures {
            delta: closure(&delta, Tag::Delta),
            lambda: closure(&lambda, Tag::Lambda),
            dpar: closure(&dpar, Tag::DPar),
            dparstar: dparstar.map(|s| closure(&s, Tag::DParStar)),
        },
        stats,
    ))
}
