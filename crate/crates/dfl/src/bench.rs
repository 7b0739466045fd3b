//! Timing runs. Reports are `key: value` lines, one block per size.

use std::time::{Duration, Instant};

use anyhow::Result;
use dfl_core::faers::{self, replicate, run_case_study, SyntheticConfig};
use dfl_core::harness::{random_theory, GenConfig};
use dfl_core::linear::{chain_theory, linear_dpar_count};
use dfl_core::parallel::Executor;
use dfl_core::scalable::{solve, SolveOptions};
use dfl_core::{Sign, Tag};

use crate::assets;
use crate::io::{parse_literal_list, parse_theory_text};

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub blocks: Vec<Vec<(String, String)>>,
}

impl Report {
    pub fn render(&self) -> String {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|(k, v)| format!("{k}: {v}\n")).collect::<String>())
            .collect();
        blocks.join("\n")
    }
}

fn ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// Best of `repeats` runs of `f`, with the value of the last run.
pub fn best_of<T>(repeats: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed());
        out = Some(v);
    }
    (best, out.expect("ran at least once"))
}

/// Chain theories through the linear pipeline, or the staged engine when
/// `staged` is set. Theory construction is not timed.
pub fn chain(sizes: &[usize], staged: bool, repeats: usize) -> Result<Report> {
    let mut r = Report::default();
    let mut prev: Option<Duration> = None;
    for &n in sizes.iter().filter(|n| **n > 0) {
        let t = chain_theory(n);
        let (d, count) = if staged {
            let (d, c) = best_of(repeats, || solve(&t, &SolveOptions { dparstar: false, ..Default::default() }));
            (d, c?.dpar.literals(Sign::Plus, Tag::DPar).len())
        } else {
            let (d, c) = best_of(repeats, || linear_dpar_count(&t));
            (d, c?)
        };
        let mut b = vec![("n".into(), n.to_string()), ("wall_ms".into(), ms(d)), ("conclusions".into(), count.to_string())];
        if let Some(p) = prev {
            b.push(("ratio".into(), format!("{:.3}", d.as_secs_f64() / p.as_secs_f64())));
        }
        prev = Some(d);
        r.blocks.push(b);
    }
    Ok(r)
}

/// Staged solving of `n` seeded random theories.
pub fn random(n: usize, seed: u64, cfg: &GenConfig) -> Result<Report> {
    if n == 0 {
        return Ok(Report::default());
    }
    let start = Instant::now();
    let mut count = 0;
    for i in 0..n as u64 {
        let t = random_theory(cfg, seed.wrapping_add(i));
        count += solve(&t, &SolveOptions::default())?.dpar.len();
    }
    Ok(Report {
        blocks: vec![vec![
            ("n".into(), n.to_string()),
            ("wall_ms".into(), ms(start.elapsed())),
            ("conclusions".into(), count.to_string()),
        ]],
    })
}

/// Synthetic case study with `rows` rows replicated `copies` times each.
pub fn faers<E: Executor>(rows: usize, copies: &[usize], seed: u64, exec: &E) -> Result<Report> {
    if rows == 0 {
        return Ok(Report::default());
    }
    let tables = faers::synthetic_tables(&SyntheticConfig { rows, seed, ..Default::default() });
    let queries = faers::parse_queries(assets::FAERS_QUERIES)?;
    let rules = parse_theory_text(assets::FAERS_RULES, "built-in rules")?;
    let obligations: Vec<_> = parse_literal_list(assets::FAERS_OBLIGATIONS)?.into_iter().collect();
    let mut r = Report::default();
    let mut base: Option<u64> = None;
    for &k in copies {
        let data = replicate(&tables, k, "primaryid")?;
        let start = Instant::now();
        let rep = run_case_study(&data, &queries, &rules, &obligations, false, exec)?;
        let d = start.elapsed();
        let base = *base.get_or_insert(rep.conclusions / k.max(1) as u64);
        r.blocks.push(vec![
            ("n".into(), rows.to_string()),
            ("copies".into(), k.to_string()),
            ("cases".into(), rep.cases.to_string()),
            ("facts".into(), rep.facts.to_string()),
            ("wall_ms".into(), ms(d)),
            ("conclusions".into(), rep.conclusions.to_string()),
            ("ratio".into(), format!("{:.6}", rep.conclusions as f64 / base.max(1) as f64)),
        ]);
    }
    Ok(r)
}
