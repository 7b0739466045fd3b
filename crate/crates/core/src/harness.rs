//! Verification helpers: a naive reference evaluator, outcome classification,
//! inference-strength checks, the Horn-SAT reduction, consequence comparison
//! and modularity checks, plus seeded random theory generators.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classic::{dclassic_closure, dclassicstar_closure};
use crate::error::Error;
use crate::scalable::{prepare, solve_ground, SolveOptions};
use crate::types::{vocabulary, ClosureSet, Literal, Rule, RuleKind, Sign, Tag, Term, Theory};

/// Largest number of atoms [`oracle_closure`] accepts.
pub const ORACLE_MAX_ATOMS: usize = 64;

struct Naive<'t> {
    lits: Vec<Literal>,
    fact: Vec<bool>,
    rules: Vec<(&'t Rule, usize, Vec<usize>)>,
    sup: &'t BTreeSet<(String, String)>,
}

impl<'t> Naive<'t> {
    fn new(t: &'t Theory, extra: &BTreeSet<Literal>) -> Result<Naive<'t>, Error> {
        let mut voc = vocabulary(t)?;
        for l in extra {
            voc.insert(l.clone());
            voc.insert(l.complement());
        }
        if voc.len() > 2 * ORACLE_MAX_ATOMS {
            return Err(Error::Precondition(format!("oracle limited to {ORACLE_MAX_ATOMS} atoms")));
        }
        let lits: Vec<Literal> = voc.into_iter().collect();
        let pos = |l: &Literal| lits.binary_search(l).expect("in vocabulary");
        let mut fact = vec![false; lits.len()];
        for f in &t.facts {
            fact[pos(&f.literal)] = true;
        }
        let rules = t.rules.iter().map(|r| (r, pos(&r.head), r.body.iter().map(pos).collect())).collect();
        Ok(Naive { lits, fact, rules, sup: &t.superiority })
    }

    fn comp(&self, q: usize) -> usize {
        self.lits.binary_search(&self.lits[q].complement()).expect("closed under complement")
    }

    fn beats(&self, a: &Rule, b: &Rule) -> bool {
        self.sup.contains(&(a.label.clone(), b.label.clone()))
    }

    /// Rules with head `q`, optionally only strict ones or only supporting ones.
    fn rules_for(&self, q: usize, keep: impl Fn(RuleKind) -> bool) -> Vec<&(&'t Rule, usize, Vec<usize>)> {
        self.rules.iter().filter(|(r, h, _)| *h == q && keep(r.kind)).collect()
    }

    /// Rescans every literal until neither set grows.
    fn fixpoint(&self, step: impl Fn(usize, &[bool], &[bool]) -> (bool, bool)) -> (Vec<bool>, Vec<bool>) {
        let n = self.lits.len();
        let (mut plus, mut minus) = (vec![false; n], vec![false; n]);
        loop {
            let mut changed = false;
            for q in 0..n {
                let (p, m) = step(q, &plus, &minus);
                if p && !plus[q] {
                    plus[q] = true;
                    changed = true;
                }
                if m && !minus[q] {
                    minus[q] = true;
                    changed = true;
                }
            }
            if !changed {
                return (plus, minus);
            }
        }
    }

    fn closure(&self, (plus, minus): (Vec<bool>, Vec<bool>), tag: Tag) -> ClosureSet {
        let mut c = ClosureSet::new();
        c.universe = self.lits.iter().cloned().collect();
        for (i, l) in self.lits.iter().enumerate() {
            if plus[i] {
                c.insert(Sign::Plus, tag, l.clone());
            }
            if minus[i] {
                c.insert(Sign::Minus, tag, l.clone());
            }
        }
        c
    }
}

fn all_in(body: &[usize], set: &[bool]) -> bool {
    body.iter().all(|&a| set[a])
}

fn any_in(body: &[usize], set: &[bool]) -> bool {
    body.iter().any(|&a| set[a])
}

/// Reference closure for one tag, with positive and negative conclusions over
/// Σ(t). Deliberately unoptimised: every round rescans every rule.
pub fn oracle_closure(t: &Theory, tag: Tag) -> Result<ClosureSet, Error> {
    oracle_closure_over(t, tag, &BTreeSet::new())
}

/// [`oracle_closure`] over Σ(t) extended with `extra` and its complements.
pub fn oracle_closure_over(t: &Theory, tag: Tag, extra: &BTreeSet<Literal>) -> Result<ClosureSet, Error> {
    let n = Naive::new(t, extra)?;
    let strict = |k: RuleKind| k == RuleKind::Strict;
    let supp = |k: RuleKind| k.supports();
    let any = |_: RuleKind| true;
    let (dp, dm) = n.fixpoint(|q, p, m| {
        let rs = n.rules_for(q, strict);
        (
            n.fact[q] || rs.iter().any(|(_, _, b)| all_in(b, p)),
            !n.fact[q] && rs.iter().all(|(_, _, b)| any_in(b, m)),
        )
    });
    if tag == Tag::Delta {
        return Ok(n.closure((dp, dm), tag));
    }
    let (lp, lm) = n.fixpoint(|q, p, m| {
        let nq = n.comp(q);
        let rs = n.rules_for(q, supp);
        (
            dp[q] || (rs.iter().any(|(_, _, b)| all_in(b, p)) && !dp[nq]),
            dm[q] && (rs.iter().all(|(_, _, b)| any_in(b, m)) || dp[nq]),
        )
    });
    let res = match tag {
        Tag::Delta => unreachable!(),
        Tag::Lambda => (lp, lm),
        Tag::DPar => n.fixpoint(|q, p, m| {
            let nq = n.comp(q);
            let rs = n.rules_for(q, supp);
            let attackers = n.rules_for(nq, any);
            let plus = dp[q]
                || (rs.iter().any(|(_, _, b)| all_in(b, p))
                    && !dp[nq]
                    && attackers.iter().all(|(s, _, sb)| {
                        !all_in(sb, &lp) || rs.iter().any(|(t, _, tb)| all_in(tb, p) && n.beats(t, s))
                    }));
            let minus = dm[q]
                && (rs.iter().all(|(_, _, b)| any_in(b, m))
                    || dp[nq]
                    || attackers.iter().any(|(s, _, sb)| {
                        all_in(sb, &lp) && rs.iter().all(|(t, _, tb)| any_in(tb, m) || !n.beats(t, s))
                    }));
            (plus, minus)
        }),
        Tag::DParStar => n.fixpoint(|q, p, m| {
            let nq = n.comp(q);
            let rs = n.rules_for(q, supp);
            let attackers = n.rules_for(nq, any);
            let plus = dp[q]
                || (!dp[nq]
                    && rs.iter().any(|(r, _, b)| {
                        all_in(b, p) && attackers.iter().all(|(s, _, sb)| !all_in(sb, &lp) || n.beats(r, s))
                    }));
            let minus = dm[q]
                && (dp[nq]
                    || rs.iter().all(|(r, _, b)| {
                        any_in(b, m) || attackers.iter().any(|(s, _, sb)| all_in(sb, &lp) && !n.beats(r, s))
                    }));
            (plus, minus)
        }),
        Tag::DClassic => n.fixpoint(|q, p, m| {
            let nq = n.comp(q);
            let rs = n.rules_for(q, supp);
            let attackers = n.rules_for(nq, any);
            let plus = dp[q]
                || (rs.iter().any(|(_, _, b)| all_in(b, p))
                    && dm[nq]
                    && attackers.iter().all(|(s, _, sb)| {
                        any_in(sb, m) || rs.iter().any(|(t, _, tb)| all_in(tb, p) && n.beats(t, s))
                    }));
            let minus = dm[q]
                && (rs.iter().all(|(_, _, b)| any_in(b, m))
                    || dp[nq]
                    || attackers.iter().any(|(s, _, sb)| {
                        all_in(sb, p) && rs.iter().all(|(t, _, tb)| any_in(tb, m) || !n.beats(t, s))
                    }));
            (plus, minus)
        }),
        Tag::DClassicStar => n.fixpoint(|q, p, m| {
            let nq = n.comp(q);
            let rs = n.rules_for(q, supp);
            let attackers = n.rules_for(nq, any);
            let plus = dp[q]
                || (dm[nq]
                    && rs.iter().any(|(r, _, b)| {
                        all_in(b, p) && attackers.iter().all(|(s, _, sb)| any_in(sb, m) || n.beats(r, s))
                    }));
            let minus = dm[q]
                && (dp[nq]
                    || rs.iter().all(|(r, _, b)| {
                        any_in(b, m) || attackers.iter().any(|(s, _, sb)| all_in(sb, p) && !n.beats(r, s))
                    }));
            (plus, minus)
        }),
    };
    Ok(n.closure(res, tag))
}

/// The six possible outcomes for a single literal in DL(∂_||).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Combinations (outcome of p, outcome of ¬p) that can never occur.
pub const IMPOSSIBLE_PAIRS: [(Outcome, Outcome); 10] = {
    use Outcome::*;
    [(B, B), (B, C), (B, D), (C, B), (C, D), (C, E), (D, B), (D, C), (D, D), (E, C)]
};

/// Letter of `l` given Δ and ∂_|| closures that carry negative conclusions.
pub fn outcome_in(delta: &ClosureSet, dpar: &ClosureSet, l: &Literal) -> Outcome {
    let pd = delta.contains(Sign::Plus, Tag::Delta, l);
    let md = delta.contains(Sign::Minus, Tag::Delta, l);
    let pp = dpar.contains(Sign::Plus, Tag::DPar, l);
    let mp = dpar.contains(Sign::Minus, Tag::DPar, l);
    if pd {
        Outcome::C
    } else if mp {
        Outcome::F
    } else if pp {
        if md {
            Outcome::D
        } else {
            Outcome::B
        }
    } else if md {
        Outcome::E
    } else {
        Outcome::A
    }
}

/// Outcome letter of `l` in `t`, computed with the staged engine.
pub fn classify_outcome(t: &Theory, l: &Literal) -> Result<Outcome, Error> {
    let c = solve_with_negatives(t, [l.clone()].into_iter().collect())?;
    Ok(outcome_in(&c.delta, &c.dpar, l))
}

/// Outcome letters of every literal of Σ(t) ∪ `extra`.
pub fn classify_all(t: &Theory, extra: &BTreeSet<Literal>) -> Result<BTreeMap<Literal, Outcome>, Error> {
    let c = solve_with_negatives(t, extra.clone())?;
    Ok(c.dpar.universe.iter().map(|l| (l.clone(), outcome_in(&c.delta, &c.dpar, l))).collect())
}

/// First literal whose (p, ¬p) outcome pair is impossible.
pub fn impossible_pair(outcomes: &BTreeMap<Literal, Outcome>) -> Option<(Literal, Outcome, Outcome)> {
    outcomes.iter().find_map(|(l, &a)| {
        let b = *outcomes.get(&l.complement())?;
        IMPOSSIBLE_PAIRS.contains(&(a, b)).then(|| (l.clone(), a, b))
    })
}

fn solve_with_negatives(t: &Theory, universe: BTreeSet<Literal>) -> Result<crate::scalable::StagedClosures, Error> {
    let g = prepare(t, false)?;
    Ok(solve_ground(&g, &SolveOptions { negatives: true, universe, ..Default::default() }))
}

/// A failed lattice, consistency or coherence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeViolation {
    /// `+sub l` holds but `+sup l` does not.
    Containment { sub: Tag, sup: Tag, witness: Literal },
    /// `+tag l` and `+tag ¬l` without `+Δ` for both.
    Inconsistent { tag: Tag, literal: Literal },
    /// `+tag l` and `-tag l` together.
    Incoherent { tag: Tag, literal: Literal },
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeViolation::Containment { sub, sup, witness } => {
                write!(f, "{} not contained in {}: {witness}", sub.name(), sup.name())
            }
            LatticeViolation::Inconsistent { tag, literal } => write!(f, "{} inconsistent on {literal}", tag.name()),
            LatticeViolation::Incoherent { tag, literal } => write!(f, "{} incoherent on {literal}", tag.name()),
        }
    }
}

/// Inclusions checked by [`check_containments`], as (smaller, larger).
pub const CONTAINMENTS: [(Tag, Tag); 7] = [
    (Tag::Delta, Tag::DParStar),
    (Tag::DParStar, Tag::DPar),
    (Tag::DPar, Tag::Lambda),
    (Tag::Delta, Tag::DClassicStar),
    (Tag::DClassicStar, Tag::Lambda),
    (Tag::Delta, Tag::DClassic),
    (Tag::DClassic, Tag::Lambda),
];

/// All six closures of `t`, with negatives, keyed by tag.
pub fn all_closures(t: &Theory) -> Result<BTreeMap<Tag, ClosureSet>, Error> {
    let g = prepare(t, false)?;
    let s = solve_ground(&g, &SolveOptions { negatives: true, ..Default::default() });
    let mut out = BTreeMap::new();
    out.insert(Tag::DClassic, dclassic_closure(&g, &BTreeSet::new())?);
    out.insert(Tag::DClassicStar, dclassicstar_closure(&g, &BTreeSet::new())?);
    out.insert(Tag::Delta, s.delta);
    out.insert(Tag::Lambda, s.lambda);
    out.insert(Tag::DPar, s.dpar);
    out.insert(Tag::DParStar, s.dparstar.expect("requested"));
    Ok(out)
}

/// Reports every positive conclusion of a smaller tag missing from a larger one.
pub fn check_containments(t: &Theory) -> Result<Vec<LatticeViolation>, Error> {
    let c = all_closures(t)?;
    let mut out = Vec::new();
    for (sub, sup) in CONTAINMENTS {
        let big = c[&sup].literals(Sign::Plus, sup);
        for l in c[&sub].literals(Sign::Plus, sub) {
            if !big.contains(&l) {
                out.push(LatticeViolation::Containment { sub, sup, witness: l });
            }
        }
    }
    Ok(out)
}

/// Consistency of ∂_|| and ∂_||*, and coherence of every tag.
pub fn check_consistency(t: &Theory) -> Result<Vec<LatticeViolation>, Error> {
    let c = all_closures(t)?;
    let mut out = Vec::new();
    let definite = c[&Tag::Delta].literals(Sign::Plus, Tag::Delta);
    for tag in [Tag::DPar, Tag::DParStar] {
        let plus = c[&tag].literals(Sign::Plus, tag);
        for l in plus.iter().filter(|l| !l.negated) {
            let nl = l.complement();
            if plus.contains(&nl) && !(definite.contains(l) && definite.contains(&nl)) {
                out.push(LatticeViolation::Inconsistent { tag, literal: l.clone() });
            }
        }
    }
    for (tag, cl) in &c {
        if let Some((_, l)) = cl.sign_clash() {
            out.push(LatticeViolation::Incoherent { tag: *tag, literal: l });
        }
    }
    Ok(out)
}

/// A propositional Horn clause `head ← body`; no head means `← body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornClause {
    pub head: Option<String>,
    pub body: Vec<String>,
}

/// Name of the literal that stands for a contradiction.
pub const FALSE: &str = "false";

/// Strict theory in which `+Δ false` holds iff the clauses are unsatisfiable.
pub fn horn_reduce(clauses: &[HornClause]) -> Result<Theory, Error> {
    let mut t = Theory::new();
    for (i, c) in clauses.iter().enumerate() {
        if c.head.iter().chain(&c.body).any(|v| v == FALSE) {
            return Err(Error::Input(format!("clause {}: `{FALSE}` is reserved", i + 1)));
        }
        let head = Literal::prop(false, c.head.as_deref().unwrap_or(FALSE));
        let body = c.body.iter().map(|v| Literal::prop(false, v.as_str())).collect();
        t.add_rule(Rule::new(format!("h{}", i + 1), RuleKind::Strict, body, head));
    }
    Ok(t)
}

/// Decides a Horn clause set through the reduction.
pub fn horn_unsatisfiable(clauses: &[HornClause]) -> Result<bool, Error> {
    let t = horn_reduce(clauses)?;
    let d = solve_ground(&t, &SolveOptions { dparstar: false, ..Default::default() });
    Ok(d.delta.contains(Sign::Plus, Tag::Delta, &Literal::prop(false, FALSE)))
}

/// Parses DIMACS CNF. Variables become `x<n>`; non-Horn clauses are rejected.
pub fn parse_dimacs(text: &str) -> Result<Vec<HornClause>, Error> {
    let mut out = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('p') || line.starts_with('%') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| Error::Input(format!("line {}: bad literal `{tok}`", ln + 1)))?;
            if v != 0 {
                cur.push(v);
                continue;
            }
            let pos: Vec<i64> = cur.iter().copied().filter(|v| *v > 0).collect();
            if pos.len() > 1 {
                return Err(Error::Input(format!("line {}: clause is not Horn", ln + 1)));
            }
            out.push(HornClause {
                head: pos.first().map(|v| format!("x{v}")),
                body: cur.iter().filter(|v| **v < 0).map(|v| format!("x{}", -v)).collect(),
            });
            cur.clear();
        }
    }
    if !cur.is_empty() {
        return Err(Error::Input("last clause is not terminated by 0".into()));
    }
    Ok(out)
}

/// Satisfiability by trying every assignment. Only for small instances.
pub fn brute_force_sat(clauses: &[HornClause]) -> bool {
    let vars: Vec<&str> = clauses
        .iter()
        .flat_map(|c| c.head.iter().chain(&c.body))
        .map(String::as_str)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(vars.len() < 24, "too many variables for enumeration");
    let idx = |v: &str| vars.binary_search(&v).unwrap();
    (0u32..1 << vars.len()).any(|m| {
        let val = |v: &str| m >> idx(v) & 1 == 1;
        clauses.iter().all(|c| c.head.as_deref().is_some_and(val) || c.body.iter().any(|b| !val(b)))
    })
}

/// Positive main-tag literals of `t` under `logic`, restricted to `vocab`.
fn positives(t: &Theory, logic: Tag) -> Result<BTreeSet<Literal>, Error> {
    let g = prepare(t, false)?;
    let c = match logic {
        Tag::DClassic => dclassic_closure(&g, &BTreeSet::new())?,
        Tag::DClassicStar => dclassicstar_closure(&g, &BTreeSet::new())?,
        _ => {
            let s = solve_ground(&g, &SolveOptions::default());
            s.get(logic).cloned().unwrap_or_default()
        }
    };
    Ok(c.literals(Sign::Plus, logic))
}

/// Whether the two theories prove the same literals of `vocab` under their
/// respective logics. On a mismatch the smallest differing literal is returned.
pub fn same_consequences(
    d1: &Theory,
    logic1: Tag,
    d2: &Theory,
    logic2: Tag,
    vocab: &BTreeSet<Literal>,
) -> Result<(bool, Option<Literal>), Error> {
    let a: BTreeSet<Literal> = positives(d1, logic1)?.intersection(vocab).cloned().collect();
    let b: BTreeSet<Literal> = positives(d2, logic2)?.intersection(vocab).cloned().collect();
    let diff = a.symmetric_difference(&b).next().cloned();
    Ok((diff.is_none(), diff))
}

fn signature_of(t: &Theory) -> Result<BTreeSet<Literal>, Error> {
    vocabulary(&prepare(t, false)?)
}

fn rule_labels(t: &Theory) -> BTreeSet<&str> {
    t.labels()
}

/// Whether `a` may be added to `d` and to its simulation `d_sim` without
/// touching the simulation's auxiliary vocabulary or sharing labels.
pub fn check_modular(a: &Theory, d: &Theory, d_sim: &Theory) -> Result<bool, Error> {
    let (sa, sd, ss) = (signature_of(a)?, signature_of(d)?, signature_of(d_sim)?);
    let aux_clean = sa.intersection(&ss).all(|l| sd.contains(l));
    let la = rule_labels(a);
    let disjoint = |o: &Theory| rule_labels(o).is_disjoint(&la);
    Ok(aux_clean && disjoint(d) && disjoint(d_sim))
}

/// Parameters of the random ground theory generator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GenConfig {
    pub atoms: usize,
    pub max_rules: usize,
    pub max_facts: usize,
    pub max_body: usize,
    pub strict_rate: f64,
    pub defeater_rate: f64,
    pub negation_rate: f64,
    /// Probability that a pair of conflicting rules gets a priority.
    pub superiority_density: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 10,
            max_rules: 20,
            max_facts: 3,
            max_body: 3,
            strict_rate: 0.25,
            defeater_rate: 0.15,
            negation_rate: 0.4,
            superiority_density: 0.5,
        }
    }
}

fn random_literal(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Literal {
    let a = rng.gen_range(0..cfg.atoms.max(1));
    Literal::prop(rng.gen_bool(cfg.negation_rate), format!("p{a}"))
}

/// Seeded random ground theory over atoms `p0..p{atoms-1}` with an acyclic
/// superiority relation between rules with complementary heads.
pub fn random_theory(cfg: &GenConfig, seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Theory::new();
    for i in 0..rng.gen_range(0..=cfg.max_facts) {
        t.add_fact(format!("f{i}"), random_literal(&mut rng, cfg));
    }
    for i in 0..rng.gen_range(0..=cfg.max_rules) {
        let x: f64 = rng.gen();
        let kind = if x < cfg.strict_rate {
            RuleKind::Strict
        } else if x < cfg.strict_rate + cfg.defeater_rate {
            RuleKind::Defeater
        } else {
            RuleKind::Defeasible
        };
        let body = (0..rng.gen_range(0..=cfg.max_body)).map(|_| random_literal(&mut rng, cfg)).collect();
        t.add_rule(Rule::new(format!("r{i}"), kind, body, random_literal(&mut rng, cfg)));
    }
    let mut rank: Vec<usize> = (0..t.rules.len()).collect();
    rank.shuffle(&mut rng);
    let mut sup = Vec::new();
    for (i, a) in t.rules.iter().enumerate() {
        for (j, b) in t.rules.iter().enumerate() {
            if rank[i] < rank[j] && a.head == b.head.complement() && rng.gen_bool(cfg.superiority_density) {
                sup.push((a.label.clone(), b.label.clone()));
            }
        }
    }
    for (a, b) in sup {
        t.add_superiority(a, b);
    }
    t
}

/// Seeded random range-restricted theory with variables over up to four
/// constants, for grounding checks.
pub fn random_variable_theory(seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let consts = ["a", "b", "c", "d"];
    let vars = ["X", "Y", "Z"];
    let preds = [("e", 2), ("q", 1), ("s", 2), ("u", 1)];
    let mut t = Theory::new();
    let nc = rng.gen_range(1..=consts.len());
    for i in 0..rng.gen_range(1..=5) {
        let (p, ar) = preds[rng.gen_range(0..preds.len())];
        let args = (0..ar).map(|_| Term::Const(consts[rng.gen_range(0..nc)].to_string())).collect();
        t.add_fact(format!("f{i}"), Literal::new(false, p, args));
    }
    for i in 0..rng.gen_range(1..=4) {
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let (p, ar) = preds[rng.gen_range(0..preds.len())];
            let args = (0..ar).map(|_| Term::Var(vars[rng.gen_range(0..vars.len())].to_string())).collect();
            body.push(Literal::new(rng.gen_bool(0.2), p, args));
        }
        let bound: Vec<String> =
            body.iter().flat_map(|l: &Literal| l.variables().map(String::from)).collect::<BTreeSet<_>>().into_iter().collect();
        let (p, ar) = preds[rng.gen_range(0..preds.len())];
        let args = (0..ar).map(|_| Term::Var(bound[rng.gen_range(0..bound.len())].clone())).collect();
        let kind = [RuleKind::Strict, RuleKind::Defeasible, RuleKind::Defeater][rng.gen_range(0..3)];
        t.add_rule(Rule::new(format!("r{i}"), kind, body, Literal::new(rng.gen_bool(0.3), p, args)));
    }
    t
}
