//! Instantiation of variable theories over their constants.
//!
//! Instance labels are `label[c1,...,cn]` with constants listed in the order
//! the variables first occur in the rule.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::types::{validate, Literal, Rule, RuleKind, Term, Theory};
use crate::HashMap;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundingReport {
    pub constants: BTreeSet<String>,
    pub rule_instance_counts: BTreeMap<String, usize>,
    pub total_instances: usize,
    /// Set when some rule has variables but the theory has no constants.
    pub empty_domain: bool,
}

impl GroundingReport {
    /// `key: value` lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            alloc::format!("constants: {}", self.constants.iter().cloned().collect::<Vec<_>>().join(",")),
            alloc::format!("total_instances: {}", self.total_instances),
            alloc::format!("empty_domain: {}", self.empty_domain),
        ];
        for (l, n) in &self.rule_instance_counts {
            out.push(alloc::format!("instances.{l}: {n}"));
        }
        out
    }
}

pub fn instance_label(label: &str, consts: &[&str]) -> String {
    if consts.is_empty() {
        String::from(label)
    } else {
        alloc::format!("{label}[{}]", consts.join(","))
    }
}

fn substitute(l: &Literal, vars: &[&str], binding: &[u32], consts: &[String]) -> Literal {
    let args = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => {
                let i = vars.iter().position(|x| x == v).expect("range-restricted");
                Term::Const(consts[binding[i] as usize].clone())
            }
            c => c.clone(),
        })
        .collect();
    Literal { negated: l.negated, predicate: l.predicate.clone(), args }
}

fn instantiate(r: &Rule, vars: &[&str], binding: &[u32], consts: &[String]) -> Rule {
    let names: Vec<&str> = binding.iter().map(|&c| consts[c as usize].as_str()).collect();
    Rule::new(
        instance_label(&r.label, &names),
        r.kind,
        r.body.iter().map(|b| substitute(b, vars, binding, consts)).collect(),
        substitute(&r.head, vars, binding, consts),
    )
}

/// Every tuple in `0..c` of length `n`, in lexicographic order.
fn all_bindings(n: usize, c: usize) -> Vec<Vec<u32>> {
    if n > 0 && c == 0 {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|b: Vec<u32>| {
                (0..c as u32).map(move |x| {
                    let mut b = b.clone();
                    b.push(x);
                    b
                })
            })
            .collect();
    }
    out
}

fn finish(t: &Theory, consts: Vec<String>, per_rule: Vec<Vec<Vec<u32>>>) -> (Theory, GroundingReport) {
    let mut out = Theory { facts: t.facts.clone(), rules: Vec::new(), superiority: BTreeSet::new() };
    let mut report = GroundingReport { constants: consts.iter().cloned().collect(), ..Default::default() };
    let mut instances: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (r, bindings) in t.rules.iter().zip(per_rule) {
        let vars = r.variables();
        if !vars.is_empty() && consts.is_empty() {
            report.empty_domain = true;
        }
        report.rule_instance_counts.insert(r.label.clone(), bindings.len());
        report.total_instances += bindings.len();
        let labels = instances.entry(r.label.as_str()).or_default();
        for b in bindings {
            let g = instantiate(r, &vars, &b, &consts);
            labels.push(g.label.clone());
            out.rules.push(g);
        }
    }
    for (a, b) in &t.superiority {
        if let (Some(xs), Some(ys)) = (instances.get(a.as_str()), instances.get(b.as_str())) {
            for x in xs {
                for y in ys {
                    out.superiority.insert((x.clone(), y.clone()));
                }
            }
        }
    }
    (out, report)
}

/// Full instantiation: every rule with `n` variables yields `c^n` instances.
pub fn ground(t: &Theory) -> Result<(Theory, GroundingReport), Error> {
    validate(t).into_result()?;
    let consts: Vec<String> = t.constants().into_iter().collect();
    let per_rule = t.rules.iter().map(|r| all_bindings(r.variables().len(), consts.len())).collect();
    Ok(finish(t, consts, per_rule))
}

type Key = (bool, String);
type Tuple = Vec<u32>;

/// Ground atoms per signed predicate; `None` stands for every tuple.
type Extension = HashMap<Key, Option<BTreeSet<Tuple>>>;

struct Joiner<'a> {
    consts: &'a [String],
    cix: HashMap<&'a str, u32>,
}

impl<'a> Joiner<'a> {
    /// Bindings of `vars` that put every body literal of `r` into `ext`.
    fn join(&self, r: &Rule, vars: &[&str], ext: &Extension) -> Vec<Vec<u32>> {
        let empty = BTreeSet::new();
        let mut sets: Vec<(&Literal, &BTreeSet<Tuple>)> = Vec::new();
        for b in &r.body {
            match ext.get(&(b.negated, b.predicate.clone())) {
                Some(None) => {}
                Some(Some(s)) => sets.push((b, s)),
                None => sets.push((b, &empty)),
            }
        }
        sets.sort_by_key(|(_, s)| s.len());
        const UNBOUND: u32 = u32::MAX;
        let var_ix = |v: &str| vars.iter().position(|x| *x == v).expect("range-restricted");
        let mut bound = vec![false; vars.len()];
        let mut rows: Vec<Vec<u32>> = vec![vec![UNBOUND; vars.len()]];
        for (lit, set) in sets {
            // Argument positions: fixed constant, already bound variable, or new variable.
            enum Pos {
                Fixed(Option<u32>),
                Bound(usize),
                New(usize),
            }
            let mut fresh: Vec<usize> = Vec::new();
            let pos: Vec<Pos> = lit
                .args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => Pos::Fixed(self.cix.get(c.as_str()).copied()),
                    Term::Var(v) => {
                        let i = var_ix(v);
                        if bound[i] || fresh.contains(&i) {
                            Pos::Bound(i)
                        } else {
                            fresh.push(i);
                            Pos::New(i)
                        }
                    }
                })
                .collect();
            let key_of_row = |row: &[u32]| -> Vec<u32> {
                pos.iter()
                    .filter_map(|p| {
                        if let Pos::Bound(i) = p {
                            if bound[*i] {
                                Some(row[*i])
                            } else {
                                None
                            }
                        } else {
                            None
                        }
                    })
                    .collect()
            };
            let mut index: HashMap<Vec<u32>, Vec<&Tuple>> = HashMap::new();
            'tuples: for tup in set {
                if tup.len() != pos.len() {
                    continue;
                }
                let mut seen: Vec<(usize, u32)> = Vec::new();
                let mut key = Vec::new();
                for (p, &v) in pos.iter().zip(tup) {
                    match p {
                        Pos::Fixed(c) => {
                            if *c != Some(v) {
                                continue 'tuples;
                            }
                        }
                        Pos::Bound(i) if bound[*i] => key.push(v),
                        Pos::Bound(i) | Pos::New(i) => {
                            if let Some((_, w)) = seen.iter().find(|(j, _)| j == i) {
                                if *w != v {
                                    continue 'tuples;
                                }
                            } else {
                                seen.push((*i, v));
                            }
                        }
                    }
                }
                index.entry(key).or_default().push(tup);
            }
            let mut next = Vec::new();
            for row in &rows {
                if let Some(ms) = index.get(&key_of_row(row)) {
                    for tup in ms {
                        let mut nr = row.clone();
                        for (p, &v) in pos.iter().zip(tup.iter()) {
                            if let Pos::New(i) = p {
                                nr[*i] = v;
                            }
                        }
                        next.push(nr);
                    }
                }
            }
            rows = next;
            for i in fresh {
                bound[i] = true;
            }
            if rows.is_empty() {
                return rows;
            }
        }
        // Variables only constrained by unrestricted literals range over all constants.
        for i in 0..vars.len() {
            if !bound[i] {
                let c = self.consts.len() as u32;
                rows = rows
                    .into_iter()
                    .flat_map(|row| {
                        (0..c).map(move |x| {
                            let mut r = row.clone();
                            r[i] = x;
                            r
                        })
                    })
                    .collect();
            }
        }
        rows.sort();
        rows.dedup();
        rows
    }

    fn tuple(&self, l: &Literal) -> Tuple {
        l.args.iter().map(|t| self.cix[t.name()]).collect()
    }
}

/// Instantiation restricted to rules whose bodies can possibly hold.
///
/// Keeps the instances whose body lies in the greatest set `N` with
/// `N = F ∪ { head(r) : r a non-defeater instance, body(r) ⊆ N }`. Literals
/// outside `N` are refuted for every tag, so dropping the instances that use
/// them leaves all closures over the remaining vocabulary unchanged.
pub fn ground_relevant(t: &Theory) -> Result<(Theory, GroundingReport), Error> {
    validate(t).into_result()?;
    let consts: Vec<String> = t.constants().into_iter().collect();
    let j = Joiner {
        consts: &consts,
        cix: consts.iter().enumerate().map(|(i, c)| (c.as_str(), i as u32)).collect(),
    };
    let vars: Vec<Vec<&str>> = t.rules.iter().map(|r| r.variables()).collect();
    let mut facts: HashMap<Key, BTreeSet<Tuple>> = HashMap::new();
    for f in &t.facts {
        facts
            .entry((f.literal.negated, f.literal.predicate.clone()))
            .or_default()
            .insert(j.tuple(&f.literal));
    }
    let mut ext: Extension = facts.iter().map(|(k, v)| (k.clone(), Some(v.clone()))).collect();
    for r in t.rules.iter().filter(|r| r.kind != RuleKind::Defeater) {
        ext.insert((r.head.negated, r.head.predicate.clone()), None);
    }
    loop {
        let mut next: Extension = facts.iter().map(|(k, v)| (k.clone(), Some(v.clone()))).collect();
        for (r, vs) in t.rules.iter().zip(&vars) {
            if r.kind == RuleKind::Defeater {
                continue;
            }
            let heads = next
                .entry((r.head.negated, r.head.predicate.clone()))
                .or_insert_with(|| Some(BTreeSet::new()));
            let heads = heads.as_mut().expect("materialised");
            for b in j.join(r, vs, &ext) {
                heads.insert(j.tuple(&substitute(&r.head, vs, &b, &consts)));
            }
        }
        if next == ext {
            break;
        }
        ext = next;
    }
    let per_rule = t.rules.iter().zip(&vars).map(|(r, vs)| j.join(r, vs, &ext)).collect();
    drop(j);
    Ok(finish(t, consts.clone(), per_rule))
}
