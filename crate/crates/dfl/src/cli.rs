use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dfl_core::classic::{dclassic_closure, dclassicstar_closure};
use dfl_core::faers::{self, replicate, run_case_study, SyntheticConfig};
use dfl_core::ground::{ground, ground_relevant};
use dfl_core::harness::{
    brute_force_sat, check_consistency, check_containments, classify_all, horn_unsatisfiable, impossible_pair,
    parse_dimacs, random_theory, same_consequences, GenConfig,
};
use dfl_core::linear::linear_solve;
use dfl_core::parallel::{parallel_solve, Executor, PartitionPlan};
use dfl_core::scalable::{prepare, solve, SolveOptions, StagedClosures};
use dfl_core::text::{conclusions_to_string, serialize_theory};
use dfl_core::transform::{elim_dft, elim_sup, regular};
use dfl_core::{vocabulary, ClosureSet, Literal, Sign, Tag, Theory};

use crate::exec::Threads;
use crate::io::{parse_literal_list, parse_theory_text, read_tables, read_text, read_theory, write_tables};
use crate::{assets, bench};

/// Default value of `--seed`.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "dfl", version, about = "Defeasible reasoning with the scalable logic DL(∂_||) and classic DL(∂)")]
pub struct Cli {
    /// Seed for every random choice (generators, partition salts).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; never changes output.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute closures of a theory.
    Solve(SolveArgs),
    /// Ground a theory and report instance counts.
    Ground(GroundArgs),
    /// Apply the regular / defeater elimination / superiority elimination transforms.
    Transform(TransformArgs),
    /// Compare the consequences of two theories under two logics.
    Compare(CompareArgs),
    /// Print the outcome letter (A-F) of every literal.
    Classify(ClassifyArgs),
    /// Check inference-strength containments and consistency on random theories.
    CheckLattice(LatticeArgs),
    /// Decide a Horn CNF through the strict-rule reduction.
    Horn(HornArgs),
    /// Run the case study over CSV tables.
    Ingest(IngestArgs),
    /// Write the synthetic case study tables as CSV files.
    Synth(SynthArgs),
    /// Timing runs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Staged,
    Linear,
    Parallel,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub theory: PathBuf,
    #[arg(long, value_enum, default_value_t = Engine::Staged)]
    pub engine: Engine,
    /// Comma-separated: delta,lambda,dpar,dparstar,dclassic,dclassicstar.
    #[arg(long, default_value = "dpar")]
    pub tags: String,
    /// Also compute negative conclusions (staged and linear engines).
    #[arg(long)]
    pub negatives: bool,
    /// Extra literals for the negative-conclusion universe.
    #[arg(long)]
    pub universe_file: Option<PathBuf>,
    /// Partition count (parallel engine only).
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Ground only rule instances that can fire.
    #[arg(long)]
    pub relevant: bool,
    /// Print round statistics of the parallel engine to stderr.
    #[arg(long)]
    pub stats: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroundArgs {
    pub theory: PathBuf,
    #[arg(long)]
    pub relevant: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub theory: PathBuf,
    #[arg(long)]
    pub regular: bool,
    #[arg(long)]
    pub elim_dft: bool,
    #[arg(long)]
    pub elim_sup: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub theory_a: PathBuf,
    /// Defaults to the first theory.
    pub theory_b: Option<PathBuf>,
    #[arg(long, default_value = "dpar")]
    pub logic_a: String,
    #[arg(long, default_value = "dclassic")]
    pub logic_b: String,
    /// Literals to compare on, comma-separated; defaults to both vocabularies.
    #[arg(long)]
    pub vocab: Option<String>,
    #[arg(long)]
    pub vocab_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub theory: PathBuf,
    /// Literals to classify, comma-separated; defaults to the vocabulary.
    #[arg(long)]
    pub literals: Option<String>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, default_value_t = 1000)]
    pub cases: u64,
    /// Generator parameters as JSON; defaults to the built-in configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HornArgs {
    pub cnf: PathBuf,
    /// Cross-check by enumerating assignments.
    #[arg(long)]
    pub brute_force: bool,
}

#[derive(Debug, Args)]
pub struct CaseStudyInputs {
    /// Query file; defaults to the built-in synthetic queries.
    #[arg(long)]
    pub queries: Option<PathBuf>,
    /// Ruleset; defaults to the built-in synthetic rules.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Obligation templates; defaults to the built-in list.
    #[arg(long)]
    pub obligations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Directory of CSV files, one table per file.
    #[arg(long, required_unless_present = "synthetic")]
    pub data: Option<PathBuf>,
    /// Use a generated dataset with this many rows instead of --data.
    #[arg(long, conflicts_with = "data")]
    pub synthetic: Option<usize>,
    #[command(flatten)]
    pub inputs: CaseStudyInputs,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// Write the +dpar conclusions of every case to this file.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    pub null_rate: f64,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Chain,
    Random,
    Faers,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub kind: BenchKind,
    /// Sizes, comma-separated: chain length, theory count or row count.
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Engine::Linear)]
    pub engine: Engine,
    #[arg(long, value_delimiter = ',', default_value = "1,3,6,12")]
    pub copies: Vec<usize>,
    /// Timed repetitions per size; the fastest counts.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

/// A broken internal invariant. Maps to exit code 2.
#[derive(Debug)]
pub struct Internal(pub String);

impl fmt::Display for Internal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for Internal {}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

fn parse_tags(s: &str) -> Result<Vec<Tag>> {
    let mut tags = Vec::new();
    for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let t = Tag::from_name(name).ok_or_else(|| anyhow!("unknown tag `{name}`"))?;
        if !tags.contains(&t) {
            tags.push(t);
        }
    }
    if tags.is_empty() {
        bail!("no tags given");
    }
    Ok(tags)
}

fn parse_tag(s: &str) -> Result<Tag> {
    Tag::from_name(s).ok_or_else(|| anyhow!("unknown logic `{s}`"))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).context("cannot write output"),
    }
}

fn check_coherent(c: &ClosureSet) -> Result<()> {
    if let Some((tag, l)) = c.sign_clash() {
        return Err(Internal(format!("+{0} and -{0} both hold for {l}", tag.name())).into());
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let exec = Threads::new(cli.workers);
    match &cli.command {
        Command::Solve(a) => solve_cmd(a, cli.seed, &exec, out, err),
        Command::Ground(a) => {
            let t = read_theory(&a.theory)?;
            let (g, report) = if a.relevant { ground_relevant(&t)? } else { ground(&t)? };
            let mut text = serialize_theory(&g);
            for line in report.lines() {
                text.push_str(&format!("% {line}\n"));
            }
            emit(&text, a.output.as_deref(), out)?;
            Ok(0)
        }
        Command::Transform(a) => {
            if !(a.regular || a.elim_dft || a.elim_sup) {
                bail!("choose at least one of --regular, --elim-dft, --elim-sup");
            }
            let mut t = read_theory(&a.theory)?;
            if a.regular {
                t = regular(&t)?;
            }
            if a.elim_dft {
                t = elim_dft(&t)?;
            }
            if a.elim_sup {
                t = elim_sup(&t)?;
            }
            emit(&serialize_theory(&t), a.output.as_deref(), out)?;
            Ok(0)
        }
        Command::Compare(a) => {
            let ta = read_theory(&a.theory_a)?;
            let tb = match &a.theory_b {
                Some(p) => read_theory(p)?,
                None => ta.clone(),
            };
            let vocab = match (&a.vocab, &a.vocab_file) {
                (Some(v), _) => parse_literal_list(v)?,
                (None, Some(p)) => parse_literal_list(&read_text(p)?)?,
                (None, None) => {
                    let mut v = vocabulary(&prepare(&ta, false)?)?;
                    v.extend(vocabulary(&prepare(&tb, false)?)?);
                    v
                }
            };
            let (same, witness) = same_consequences(&ta, parse_tag(&a.logic_a)?, &tb, parse_tag(&a.logic_b)?, &vocab)?;
            let mut text = format!("same: {same}\n");
            if let Some(w) = witness {
                text.push_str(&format!("witness: {w}\n"));
            }
            emit(&text, None, out)?;
            Ok(0)
        }
        Command::Classify(a) => {
            let t = read_theory(&a.theory)?;
            let extra = match &a.literals {
                Some(l) => parse_literal_list(l)?,
                None => BTreeSet::new(),
            };
            let all = classify_all(&t, &extra)?;
            let mut text = String::new();
            for (l, o) in &all {
                if a.literals.is_none() || extra.contains(l) {
                    text.push_str(&format!("{l}\t{o}\n"));
                }
            }
            emit(&text, None, out)?;
            if let Some((l, x, y)) = impossible_pair(&all) {
                return Err(Internal(format!("impossible outcome pair ({x},{y}) at {l}")).into());
            }
            Ok(0)
        }
        Command::CheckLattice(a) => lattice_cmd(a, cli.seed, &exec, out),
        Command::Horn(a) => {
            let clauses = parse_dimacs(&read_text(&a.cnf)?)?;
            let unsat = horn_unsatisfiable(&clauses)?;
            let word = |u: bool| if u { "unsat" } else { "sat" };
            let mut text = format!("clauses: {}\nresult: {}\n", clauses.len(), word(unsat));
            if a.brute_force {
                let bf_unsat = !brute_force_sat(&clauses);
                text.push_str(&format!("brute_force: {}\n", word(bf_unsat)));
                emit(&text, None, out)?;
                if bf_unsat != unsat {
                    return Err(Internal("reduction disagrees with enumeration".into()).into());
                }
                return Ok(0);
            }
            emit(&text, None, out)?;
            Ok(0)
        }
        Command::Ingest(a) => ingest_cmd(a, cli.seed, &exec, out, err),
        Command::Synth(a) => {
            let tables = faers::synthetic_tables(&SyntheticConfig { rows: a.rows, seed: cli.seed, null_rate: a.null_rate });
            write_tables(&a.out, &tables, delimiter(a.delimiter)?)?;
            Ok(0)
        }
        Command::Bench(a) => {
            let report = match a.kind {
                BenchKind::Chain => {
                    if a.engine == Engine::Parallel {
                        bail!("chain benchmark supports the staged and linear engines");
                    }
                    bench::chain(&a.n, a.engine == Engine::Staged, a.repeats)?
                }
                BenchKind::Random => bench::random(a.n.iter().sum(), cli.seed, &GenConfig::default())?,
                BenchKind::Faers => bench::faers(a.n.iter().sum(), &a.copies, cli.seed, &exec)?,
            };
            emit(&report.render(), None, out)?;
            Ok(0)
        }
    }
}

fn delimiter(c: char) -> Result<u8> {
    u8::try_from(c).ok().filter(|b| b.is_ascii()).ok_or_else(|| anyhow!("delimiter must be one ASCII character"))
}

fn solve_cmd<E: Executor>(a: &SolveArgs, seed: u64, exec: &E, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let tags = parse_tags(&a.tags)?;
    let classic = tags.iter().any(|t| matches!(t, Tag::DClassic | Tag::DClassicStar));
    if a.partitions.is_some() && a.engine != Engine::Parallel {
        bail!("--partitions requires --engine parallel");
    }
    if a.engine == Engine::Parallel && a.negatives {
        bail!("the parallel engine computes positive conclusions only");
    }
    if classic && a.engine != Engine::Staged {
        bail!("dclassic and dclassicstar are only available with --engine staged");
    }
    let t = read_theory(&a.theory)?;
    let universe = match &a.universe_file {
        Some(p) => parse_literal_list(&read_text(p)?)?,
        None => BTreeSet::new(),
    };
    let opts = SolveOptions {
        dparstar: tags.contains(&Tag::DParStar),
        negatives: a.negatives,
        universe: universe.clone(),
        relevant_grounding: a.relevant,
    };
    let staged: StagedClosures = match a.engine {
        Engine::Staged => solve(&t, &opts)?,
        Engine::Linear => linear_solve(&t, &opts)?,
        Engine::Parallel => {
            let plan = PartitionPlan::new(a.partitions.unwrap_or(1), seed)?;
            let (c, stats) = parallel_solve(&t, &plan, &opts, exec)?;
            if a.stats {
                for line in stats.lines() {
                    writeln!(err, "{line}")?;
                }
            }
            c
        }
    };
    let mut result = ClosureSet::new();
    for tag in &tags {
        let c = match tag {
            Tag::DClassic | Tag::DClassicStar => {
                let g = prepare(&t, a.relevant)?;
                let f = if *tag == Tag::DClassic { dclassic_closure } else { dclassicstar_closure };
                let c = f(&g, &universe)?;
                if a.negatives {
                    c
                } else {
                    positives_only(&c)
                }
            }
            other => staged.get(*other).cloned().ok_or_else(|| Internal(format!("missing {}", other.name())))?,
        };
        check_coherent(&c)?;
        result.merge(c);
    }
    emit(&conclusions_to_string(&result), a.output.as_deref(), out)?;
    Ok(0)
}

fn positives_only(c: &ClosureSet) -> ClosureSet {
    let mut out = ClosureSet::new();
    for x in c.conclusions.iter().filter(|x| x.sign == Sign::Plus) {
        out.insert(x.sign, x.tag, x.literal.clone());
    }
    out
}

fn lattice_cmd<E: Executor>(a: &LatticeArgs, seed: u64, exec: &E, out: &mut dyn Write) -> Result<i32> {
    let cfg: GenConfig = match &a.config {
        Some(p) => serde_json::from_str(&read_text(p)?).with_context(|| format!("bad config {}", p.display()))?,
        None => serde_json::from_str(assets::GEN_CONFIG)?,
    };
    let seeds: Vec<u64> = (0..a.cases).map(|i| seed.wrapping_add(i)).collect();
    let results = exec.map(seeds, |s| -> Result<Vec<String>, dfl_core::Error> {
        let t = random_theory(&cfg, s);
        let mut found: Vec<String> = check_containments(&t)?.iter().map(|v| format!("seed {s}: {v}")).collect();
        found.extend(check_consistency(&t)?.iter().map(|v| format!("seed {s}: {v}")));
        if let Some((l, x, y)) = impossible_pair(&classify_all(&t, &BTreeSet::new())?) {
            found.push(format!("seed {s}: impossible outcome pair ({x},{y}) at {l}"));
        }
        Ok(found)
    });
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    let mut text = format!("cases: {}\nviolations: {}\n", a.cases, violations.len());
    for v in &violations {
        text.push_str(&format!("violation: {v}\n"));
    }
    emit(&text, None, out)?;
    if violations.is_empty() {
        Ok(0)
    } else {
        Err(Internal(format!("{} lattice violations", violations.len())).into())
    }
}

fn ingest_cmd<E: Executor>(a: &IngestArgs, seed: u64, exec: &E, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let tables = match (&a.data, a.synthetic) {
        (Some(dir), _) => read_tables(dir, delimiter(a.delimiter)?)?,
        (None, Some(rows)) => faers::synthetic_tables(&SyntheticConfig { rows, seed, ..Default::default() }),
        (None, None) => bail!("give --data or --synthetic"),
    };
    let queries = match &a.inputs.queries {
        Some(p) => faers::parse_queries(&read_text(p)?)?,
        None => faers::parse_queries(assets::FAERS_QUERIES)?,
    };
    let rules: Theory = match &a.inputs.rules {
        Some(p) => read_theory(p)?,
        None => parse_theory_text(assets::FAERS_RULES, "built-in rules")?,
    };
    let obligations: Vec<Literal> = match &a.inputs.obligations {
        Some(p) => parse_literal_list(&read_text(p)?)?,
        None => parse_literal_list(assets::FAERS_OBLIGATIONS)?,
    }
    .into_iter()
    .collect();
    let data = replicate(&tables, a.copies, "primaryid")?;
    let start = Instant::now();
    let report = run_case_study(&data, &queries, &rules, &obligations, a.emit.is_some(), exec)?;
    writeln!(err, "wall_ms: {:.3}", start.elapsed().as_secs_f64() * 1e3)?;
    let mut text = String::new();
    for line in report.lines() {
        text.push_str(&line);
        text.push('\n');
    }
    emit(&text, None, out)?;
    if let Some(p) = &a.emit {
        let mut c = ClosureSet::new();
        for l in &report.emitted {
            c.insert(Sign::Plus, Tag::DPar, l.clone());
        }
        emit(&conclusions_to_string(&c), Some(p), out)?;
    }
    Ok(0)
}
