//! Acceptance suite. Prints one line per criterion and exits non-zero when a
//! criterion fails that is not listed as a known failure.

mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::oracle::{comp, Oracle, Proof};
use dfl_core::classic::{dclassic_closure, dclassicstar_closure};
use dfl_core::faers::{self, extract_facts, replicate, run_case_study, ExtractionQuery, SyntheticConfig, Table};
use dfl_core::ground::{ground, ground_relevant};
use dfl_core::harness::{classify_outcome, horn_reduce, random_theory, random_variable_theory, GenConfig, HornClause, Outcome};
use dfl_core::linear::{chain_theory, linear_dpar_count, linear_solve};
use dfl_core::parallel::{parallel_solve, PartitionPlan, Sequential};
use dfl_core::scalable::{solve, SolveOptions, StagedClosures};
use dfl_core::text::{parse_literal, parse_theory};
use dfl_core::transform::{elim_dft, elim_sup, regular};
use dfl_core::{vocabulary, ClosureSet, Literal, RuleKind, Sign, Tag, Theory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWEETY: &str = "r1: bird(X) => fly(X).  r2: penguin(X) => !fly(X).  r3: penguin(X) -> bird(X).
    e: bird(eddie).  f: penguin(tweety).  r2 > r1.";

const REACH: &str = "r: reachable(X), link(X,Y) -> reachable(Y).
    s: edge(X,Y) => link(X,Y).  t: broken(X,Y) => !link(X,Y).  t > s.
    reachable(a). edge(a,b). edge(b,c). edge(b,e). edge(c,a). edge(c,d). edge(d,e). edge(e,d). edge(f,e).
    broken(c,d). broken(b,e).";

enum Verdict {
    Pass(String),
    Fail(String),
    /// Fails for a reason analysed in the decisions ledger.
    Known(String),
}

type Check = fn() -> Verdict;

fn strs(c: &ClosureSet, sign: Sign, tag: Tag) -> BTreeSet<String> {
    c.literals(sign, tag).iter().map(|l| l.to_string()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn th(s: &str) -> Theory {
    parse_theory(s).expect("theory parses")
}

fn with_negatives() -> SolveOptions {
    SolveOptions { negatives: true, ..Default::default() }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let e = start.elapsed();
    if e > limit {
        Err(format!("took {e:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Verdict::Fail(format!($($fmt)*));
        }
    };
}

fn c1_tweety() -> Verdict {
    let start = Instant::now();
    let t = th(TWEETY);
    let g = ground(&t).unwrap().0;
    let s = solve(&g, &with_negatives()).unwrap();
    let cl = dclassic_closure(&g, &BTreeSet::new()).unwrap();

    let plus_delta = set(&["bird(eddie)", "bird(tweety)", "penguin(tweety)"]);
    ensure!(strs(&s.delta, Sign::Plus, Tag::Delta) == plus_delta, "+delta {:?}", strs(&s.delta, Sign::Plus, Tag::Delta));
    // The worked example lists -Δ for the fly literals and penguin(eddie).
    let listed: BTreeSet<String> = strs(&s.delta, Sign::Minus, Tag::Delta)
        .into_iter()
        .filter(|l| !l.starts_with("!bird") && !l.starts_with("!penguin"))
        .collect();
    let minus_delta = set(&["penguin(eddie)", "fly(eddie)", "!fly(eddie)", "fly(tweety)", "!fly(tweety)"]);
    ensure!(listed == minus_delta, "-delta {listed:?}");
    let mut plus_d = plus_delta.clone();
    plus_d.extend(set(&["fly(eddie)", "!fly(tweety)"]));
    ensure!(strs(&cl, Sign::Plus, Tag::DClassic) == plus_d, "+dclassic {:?}", strs(&cl, Sign::Plus, Tag::DClassic));
    let minus_d = strs(&cl, Sign::Minus, Tag::DClassic);
    for l in ["penguin(eddie)", "!fly(eddie)", "fly(tweety)"] {
        ensure!(minus_d.contains(l), "-dclassic {l} missing");
    }
    ensure!(strs(&s.dpar, Sign::Plus, Tag::DPar) == plus_d, "+dpar differs from +dclassic");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tweety.dfl");
    std::fs::write(&path, TWEETY).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dfl")).args(["solve", "--tags", "dpar"]).arg(&path).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    ensure!(out.status.success() && stdout.lines().any(|l| l == "+dpar\t!fly(tweety)"), "cli output {stdout:?}");
    if let Err(e) = within(Duration::from_secs(1), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("{} +delta, {} -delta listed, +dpar = +dclassic ({} literals)", plus_delta.len(), minus_delta.len(), plus_d.len()))
}

fn c2_reachability() -> Verdict {
    let start = Instant::now();
    let t = th(REACH);
    let s = solve(&t, &SolveOptions::default()).unwrap();
    let dpar = strs(&s.dpar, Sign::Plus, Tag::DPar);

    let facts: Vec<(String, Vec<String>)> = t
        .facts
        .iter()
        .map(|f| (f.literal.predicate.clone(), f.literal.args.iter().map(|a| a.name().to_string()).collect()))
        .collect();
    let broken: BTreeSet<(String, String)> =
        facts.iter().filter(|(p, _)| p == "broken").map(|(_, a)| (a[0].clone(), a[1].clone())).collect();
    let mut adj: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (_, a) in facts.iter().filter(|(p, _)| p == "edge") {
        if !broken.contains(&(a[0].clone(), a[1].clone())) {
            adj.entry(a[0].clone()).or_default().push(a[1].clone());
        }
    }
    let mut seen: BTreeSet<String> = BTreeSet::from(["a".to_string()]);
    let mut queue = VecDeque::from(["a".to_string()]);
    while let Some(x) = queue.pop_front() {
        for y in adj.get(&x).into_iter().flatten() {
            if seen.insert(y.clone()) {
                queue.push_back(y.clone());
            }
        }
    }
    let got: BTreeSet<String> = dpar
        .iter()
        .filter_map(|l| l.strip_prefix("reachable(").and_then(|r| r.strip_suffix(')')).map(String::from))
        .collect();
    ensure!(got == seen, "reachable {got:?}, graph search {seen:?}");
    for l in ["!link(c,d)", "!link(b,e)"] {
        ensure!(dpar.contains(l), "{l} missing");
    }
    ensure!(!dpar.contains("link(c,d)"), "link(c,d) derived");
    if let Err(e) = within(Duration::from_secs(1), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("reachable = {seen:?}"))
}

const SUITE: u64 = 1000;

fn engine_closures(t: &Theory) -> BTreeMap<&'static str, Proof> {
    let s = solve(t, &with_negatives()).unwrap();
    let proof = |c: &ClosureSet, tag: Tag| Proof { plus: strs(c, Sign::Plus, tag), minus: strs(c, Sign::Minus, tag) };
    let mut m = BTreeMap::new();
    m.insert("delta", proof(&s.delta, Tag::Delta));
    m.insert("lambda", proof(&s.lambda, Tag::Lambda));
    m.insert("dpar", proof(&s.dpar, Tag::DPar));
    m.insert("dparstar", proof(s.dparstar.as_ref().unwrap(), Tag::DParStar));
    m.insert("dclassic", proof(&dclassic_closure(t, &BTreeSet::new()).unwrap(), Tag::DClassic));
    m.insert("dclassicstar", proof(&dclassicstar_closure(t, &BTreeSet::new()).unwrap(), Tag::DClassicStar));
    m
}

const CHAINS: [&[&str]; 3] =
    [&["delta", "dparstar", "dpar", "lambda"], &["delta", "dclassic", "lambda"], &["delta", "dclassicstar", "lambda"]];

fn c3_lattice() -> Verdict {
    let start = Instant::now();
    let cfg = GenConfig::default();
    let mut violations = Vec::new();
    for seed in 0..SUITE {
        let c = engine_closures(&random_theory(&cfg, seed));
        for chain in CHAINS {
            for w in chain.windows(2) {
                if let Some(l) = c[w[0]].plus.difference(&c[w[1]].plus).next() {
                    violations.push(format!("seed {seed}: {l} in {} not {}", w[0], w[1]));
                }
            }
        }
    }
    ensure!(violations.is_empty(), "{} violations, first {}", violations.len(), violations[0]);

    // Separations: (theory, literal, in tag, not in tag).
    let witnesses = [
        ("r: => p.", "p", "dparstar", "delta"),
        ("r1: => p. r2: => p. r3: => !p. r4: => !p. r1 > r3. r2 > r4.", "p", "dpar", "dparstar"),
        ("r: => q. s: => !q.", "q", "lambda", "dpar"),
        ("r: => q. s: !q -> !q. r > s.", "q", "dpar", "dclassic"),
        ("r: => q. s: => !q. t: => p. u: q => !p.", "p", "dclassic", "dpar"),
        ("r: => p. s: !p -> !p.", "p", "dpar", "dclassic"),
    ];
    for (text, l, yes, no) in witnesses {
        let c = engine_closures(&th(text));
        ensure!(c[yes].plus.contains(l) && !c[no].plus.contains(l), "witness `{text}`: {l} should be in {yes} only");
    }
    if let Err(e) = within(Duration::from_secs(120), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("{SUITE} theories, 0 violations; {} separation witnesses reproduced", witnesses.len()))
}

fn c4_consistency() -> Verdict {
    let cfg = GenConfig::default();
    for seed in 0..SUITE {
        let c = engine_closures(&random_theory(&cfg, seed));
        for tag in ["dpar", "dparstar"] {
            for l in &c[tag].plus {
                let nl = comp(l);
                let definite = c["delta"].plus.contains(l) && c["delta"].plus.contains(&nl);
                ensure!(!c[tag].plus.contains(&nl) || definite, "seed {seed}: +{tag} {l} and {nl}");
            }
        }
        for (tag, p) in &c {
            ensure!(p.plus.is_disjoint(&p.minus), "seed {seed}: {tag} incoherent");
        }
    }
    Verdict::Pass(format!("{SUITE} theories consistent for dpar/dparstar, coherent for all six tags"))
}

fn letter(c: &BTreeMap<&'static str, Proof>, l: &str) -> char {
    let (d, p) = (&c["delta"], &c["dpar"]);
    match (d.plus.contains(l), d.minus.contains(l), p.plus.contains(l), p.minus.contains(l)) {
        (true, _, _, _) => 'C',
        (_, _, _, true) => 'F',
        (_, true, true, _) => 'D',
        (_, false, true, _) => 'B',
        (_, true, false, _) => 'E',
        (_, false, false, _) => 'A',
    }
}

fn c5_outcomes() -> Verdict {
    let witnesses = [("r: p -> p.", 'A'), ("r: => p. s: p -> p.", 'B'), ("r: -> p.", 'C'), ("r: => p.", 'D'), ("r: p => p.", 'E'), ("", 'F')];
    let lib = [Outcome::A, Outcome::B, Outcome::C, Outcome::D, Outcome::E, Outcome::F];
    for ((text, want), o) in witnesses.iter().zip(lib) {
        let t = th(text);
        let p = parse_literal("p").unwrap();
        ensure!(classify_outcome(&t, &p).unwrap() == o, "`{text}` should classify as {want}");
        // Oracle letters over Σ ∪ {p}.
        let mut with_p = t.clone();
        if text.is_empty() {
            with_p.add_rule(dfl_core::Rule::new("_probe", RuleKind::Defeater, vec![parse_literal("_x").unwrap()], p.clone()));
        }
        ensure!(letter(&Oracle::new(&with_p).all(), "p") == *want, "oracle letter for `{text}`");
    }
    let impossible = ["BB", "BC", "BD", "CB", "CD", "CE", "DB", "DC", "DD", "EC"];
    let cfg = GenConfig::default();
    let mut pairs = BTreeSet::new();
    for seed in 0..SUITE {
        let c = engine_closures(&random_theory(&cfg, seed));
        for l in c["delta"].plus.iter().chain(&c["delta"].minus).chain(&c["dpar"].plus).chain(&c["dpar"].minus) {
            let pair: String = [letter(&c, l), letter(&c, &comp(l))].iter().collect();
            ensure!(!impossible.contains(&pair.as_str()), "seed {seed}: {l} has impossible pair {pair}");
            pairs.insert(pair);
        }
    }
    Verdict::Pass(format!("six witnesses classify A-F; {} distinct pairs seen, none impossible", pairs.len()))
}

fn c6_engines() -> Verdict {
    let start = Instant::now();
    let cfg = GenConfig::default();
    for seed in 0..500u64 {
        let t = random_theory(&cfg, 10_000 + seed);
        let all = Oracle::new(&t).all();
        // Both signs of every tag, staged and classic engines.
        let engines = engine_closures(&t);
        for (tag, p) in &all {
            ensure!(engines[tag] == *p, "seed {seed}: {tag} differs from oracle");
        }
        let oracle = all["dpar"].plus.clone();
        let staged = strs(&solve(&t, &SolveOptions::default()).unwrap().dpar, Sign::Plus, Tag::DPar);
        let linear = strs(&linear_solve(&t, &SolveOptions::default()).unwrap().dpar, Sign::Plus, Tag::DPar);
        ensure!(staged == oracle, "seed {seed}: staged {staged:?} oracle {oracle:?}");
        ensure!(linear == oracle, "seed {seed}: linear {linear:?} oracle {oracle:?}");
        for p in [1, 2, 4, 8] {
            let plan = PartitionPlan::new(p, seed).unwrap();
            let (c, _): (StagedClosures, _) = parallel_solve(&t, &plan, &SolveOptions::default(), &Sequential).unwrap();
            let par = strs(&c.dpar, Sign::Plus, Tag::DPar);
            ensure!(par == oracle, "seed {seed} P={p}: parallel {par:?} oracle {oracle:?}");
        }
    }
    if let Err(e) = within(Duration::from_secs(180), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass("500 theories: staged = linear = parallel(P=1,2,4,8) = oracle on +dpar; all six tags, both signs, match the oracle".into())
}

/// Seeded theories with at least one defeater and one superiority pair.
fn transform_suite(n: usize) -> Vec<Theory> {
    let cfg = GenConfig { defeater_rate: 0.2, superiority_density: 0.7, ..Default::default() };
    let mut out = Vec::new();
    let mut seed = 50_000u64;
    while out.len() < n {
        let t = random_theory(&cfg, seed);
        seed += 1;
        if t.rules.iter().any(|r| r.kind == RuleKind::Defeater) && !t.superiority.is_empty() {
            out.push(t);
        }
    }
    out
}

fn c7_transforms() -> Verdict {
    type Transform = fn(&Theory) -> Result<Theory, dfl_core::Error>;
    let transforms: [(&str, Transform); 3] = [("regular", regular), ("elim_dft", elim_dft), ("elim_sup", elim_sup)];
    let suite = transform_suite(300);
    let mut classic_fail: BTreeMap<&str, usize> = BTreeMap::new();
    let mut dpar_fail: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, t) in suite.iter().enumerate() {
        let vocab: BTreeSet<String> = vocabulary(t).unwrap().iter().map(|l| l.to_string()).collect();
        let before = Oracle::new(t).all();
        for (name, f) in transforms {
            let after = Oracle::new(&f(t).unwrap()).all();
            let same = |tag: &str| {
                let a: BTreeSet<_> = before[tag].plus.intersection(&vocab).collect();
                let b: BTreeSet<_> = after[tag].plus.intersection(&vocab).collect();
                a == b
            };
            if !same("dclassic") {
                *classic_fail.entry(name).or_default() += 1;
            }
            if !same("dpar") {
                dpar_fail.entry(name).or_default().push(i);
            }
        }
    }
    let classic_ok = classic_fail.is_empty();
    let summary: Vec<String> = transforms
        .iter()
        .map(|(n, _)| {
            format!(
                "{n}: dclassic {}/300, dpar {}/300",
                300 - classic_fail.get(n).copied().unwrap_or(0),
                300 - dpar_fail.get(n).map_or(0, Vec::len)
            )
        })
        .collect();
    let summary = summary.join("; ");
    if !classic_ok {
        return Verdict::Fail(format!("classic preservation broken: {summary}"));
    }
    if dpar_fail.keys().any(|n| *n == "regular") {
        return Verdict::Fail(format!("regular form broke dpar: {summary}"));
    }
    if dpar_fail.is_empty() {
        Verdict::Pass(summary)
    } else {
        Verdict::Known(format!("{summary}; dclassic part passes, dpar not preserved by elimination (see ledger)"))
    }
}

fn c8_linear_time() -> Verdict {
    let start = Instant::now();
    let sizes = [250_000usize, 500_000, 1_000_000];
    let mut times = Vec::new();
    for n in sizes {
        let t = chain_theory(n);
        let mut best = Duration::MAX;
        for _ in 0..5 {
            let s = Instant::now();
            let count = linear_dpar_count(&t).unwrap();
            best = best.min(s.elapsed());
            // The chain proves p0..pn and nothing else.
            ensure!(count == n + 1, "chain {n}: {count} conclusions");
        }
        times.push(best);
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let detail = format!("times {times:?}, ratios {ratios:.2?}");
    ensure!(ratios.iter().all(|r| *r <= 2.5), "{detail}");
    if let Err(e) = within(Duration::from_secs(60), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(detail)
}

fn sat_by_enumeration(vars: usize, clauses: &[(Option<usize>, Vec<usize>)]) -> bool {
    (0u32..1 << vars).any(|m| {
        clauses.iter().all(|(h, b)| h.is_some_and(|h| m >> h & 1 == 1) || b.iter().any(|v| m >> v & 1 == 0))
    })
}

fn c9_horn() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..300 {
        let vars = rng.gen_range(1..=12);
        let clauses: Vec<(Option<usize>, Vec<usize>)> = (0..rng.gen_range(1..=20))
            .map(|_| {
                let head = rng.gen_bool(0.7).then(|| rng.gen_range(0..vars));
                let body = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..vars)).collect();
                (head, body)
            })
            .collect();
        let horn: Vec<HornClause> = clauses
            .iter()
            .map(|(h, b)| HornClause { head: h.map(|v| format!("v{v}")), body: b.iter().map(|v| format!("v{v}")).collect() })
            .collect();
        let t = horn_reduce(&horn).unwrap();
        let d = solve(&t, &SolveOptions::default()).unwrap();
        let derives_false = d.delta.contains(Sign::Plus, Tag::Delta, &parse_literal("false").unwrap());
        let is_sat = sat_by_enumeration(vars, &clauses);
        ensure!(derives_false != is_sat, "instance {i}: +delta false = {derives_false}, enumeration sat = {is_sat}");
        if is_sat {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    Verdict::Pass(format!("300 instances ({sat} sat, {unsat} unsat) agree with enumeration"))
}

fn faers_inputs() -> (Vec<ExtractionQuery>, Theory, Vec<Literal>) {
    let queries = faers::parse_queries(dfl::assets::FAERS_QUERIES).unwrap();
    let rules = dfl::io::parse_theory_text(dfl::assets::FAERS_RULES, "rules").unwrap();
    let obl = dfl::io::parse_literal_list(dfl::assets::FAERS_OBLIGATIONS).unwrap().into_iter().collect();
    (queries, rules, obl)
}

/// Per-case count by solving the ruleset plus the case facts directly.
fn direct_count(tables: &[Table], queries: &[ExtractionQuery], rules: &Theory, obl: &[Literal]) -> u64 {
    let (facts, _) = extract_facts(tables, queries).unwrap();
    let mut by_case: BTreeMap<String, Vec<Literal>> = BTreeMap::new();
    for f in facts {
        by_case.entry(f.args[0].name().to_string()).or_default().push(f);
    }
    let mut total = 0;
    for (id, fs) in by_case {
        let mut t = rules.clone();
        for (i, f) in fs.into_iter().enumerate() {
            t.add_fact(format!("x{i}"), f);
        }
        for (i, o) in obl.iter().enumerate() {
            let text = o.to_string().replace("(X)", &format!("({id})"));
            t.add_fact(format!("o{i}"), parse_literal(&text).unwrap());
        }
        total += solve(&t, &SolveOptions { dparstar: false, ..Default::default() }).unwrap().dpar.len() as u64;
    }
    total
}

fn c10_faers() -> Verdict {
    let start = Instant::now();
    let demo = Table::new(
        "DEMO",
        vec!["primaryid".into(), "caseid".into(), "age".into()],
        vec![vec!["100051922".into(), "10005192".into(), "21".into()]],
    )
    .unwrap();
    let age = ExtractionQuery::parse("report_Patient_age_to_FDA | DEMO | primaryid | age notnull").unwrap();
    let (facts, _) = extract_facts(&[demo], &[age]).unwrap();
    let want: BTreeSet<Literal> = [parse_literal("report_Patient_age_to_FDA(100051922)").unwrap()].into();
    ensure!(facts == want, "age query produced {facts:?}");

    let (queries, rules, obl) = faers_inputs();
    let small = faers::synthetic_tables(&SyntheticConfig { rows: 1500, seed: 5, ..Default::default() });
    let fast = run_case_study(&small, &queries, &rules, &obl, false, &Sequential).unwrap().conclusions;
    let slow = direct_count(&small, &queries, &rules, &obl);
    ensure!(fast == slow, "case study {fast} vs direct per-case solving {slow}");

    let tables = faers::synthetic_tables(&SyntheticConfig { rows: 100_000, seed: 42, ..Default::default() });
    let threads = dfl::exec::Threads::new(4);
    let mut counts = Vec::new();
    for k in [1usize, 3, 6, 12] {
        let data = replicate(&tables, k, "primaryid").unwrap();
        counts.push(run_case_study(&data, &queries, &rules, &obl, false, &threads).unwrap().conclusions);
    }
    ensure!(counts[0] > 0, "no conclusions");
    ensure!(
        counts[1] == 3 * counts[0] && counts[2] == 6 * counts[0] && counts[3] == 12 * counts[0],
        "counts {counts:?}"
    );
    if let Err(e) = within(Duration::from_secs(60), start) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("age example exact; counts {counts:?} = 1:3:6:12"))
}

fn c11_grounding() -> Verdict {
    let mut bigger = 0;
    for seed in 0..50 {
        let t = random_variable_theory(seed);
        let mut consts = BTreeSet::new();
        for f in &t.facts {
            consts.extend(f.literal.args.iter().map(|a| a.name().to_string()));
        }
        let c = consts.len();
        let (g, report) = ground(&t).unwrap();
        let mut total = 0;
        for r in &t.rules {
            let vars: BTreeSet<String> =
                r.body.iter().chain([&r.head]).flat_map(|l| l.variables().map(String::from)).collect();
            let want = c.pow(vars.len() as u32);
            ensure!(report.rule_instance_counts[&r.label] == want, "seed {seed} {}: {} vs {want}", r.label, report.rule_instance_counts[&r.label]);
            ensure!(g.rules.iter().filter(|x| x.label.starts_with(&format!("{}[", r.label)) || x.label == r.label).count() == want, "seed {seed}: instance list size");
            total += want;
        }
        ensure!(report.total_instances == total, "seed {seed}: total {} vs {total}", report.total_instances);
        let (rg, rr) = ground_relevant(&t).unwrap();
        ensure!(rr.total_instances <= total, "seed {seed}: relevant grounding larger");
        for (l, n) in &rr.rule_instance_counts {
            ensure!(*n <= report.rule_instance_counts[l], "seed {seed}: {l} larger");
        }
        if rr.total_instances < total {
            bigger += 1;
        }
        let full = Oracle::new(&g).all();
        let rel = Oracle::new(&rg).all();
        for tag in ["delta", "lambda", "dpar", "dparstar", "dclassic", "dclassicstar"] {
            ensure!(full[tag].plus == rel[tag].plus, "seed {seed}: +{tag} differs after relevant grounding");
        }
    }
    Verdict::Pass(format!("50 theories: counts = c^vars per rule; relevant grounding smaller on {bigger}, same positive closures"))
}

fn main() {
    let checks: [(&str, Check); 11] = [
        ("golden Tweety", c1_tweety),
        ("golden reachability", c2_reachability),
        ("inference-strength lattice", c3_lattice),
        ("consistency and coherence", c4_consistency),
        ("six outcomes", c5_outcomes),
        ("engine equivalence", c6_engines),
        ("transformation equivalence", c7_transforms),
        ("linear-time shape", c8_linear_time),
        ("Horn reduction", c9_horn),
        ("case study scaling shape", c10_faers),
        ("grounding bound", c11_grounding),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Verdict::Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let (status, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                unexpected += 1;
                ("FAIL", d)
            }
            Verdict::Known(d) => ("FAIL (known)", d),
        };
        println!("criterion {id:>2} {status}: {name} [{took:.2?}] {detail}");
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
