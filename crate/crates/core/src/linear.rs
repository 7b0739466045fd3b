//! Counter-based evaluation of ∂_|| in time linear in the theory size.
//!
//! The pipeline is: make the theory regular, compute +Δ and +λ with rule
//! counters, simplify with them, then propagate +∂_|| with counters again.
//! Team defeat is handled directly: each literal keeps the number of its live
//! attackers not yet beaten by an applicable rule.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::program::{neg, Lit, Program};
use crate::scalable::{self, Bits, SolveOptions, StagedClosures};
use crate::transform::{grounded, regularize};
use crate::types::{ClosureSet, Literal, Rule, RuleKind, Sign, Tag, Theory};

/// Pending-body counters over the rules of a program.
struct Counters<'p, 'a> {
    p: &'p Program<'a>,
    pending: Vec<u32>,
    queue: Vec<Lit>,
}

impl<'p, 'a> Counters<'p, 'a> {
    fn new(p: &'p Program<'a>, counts: impl Fn(u32) -> u32) -> Self {
        Counters { p, pending: (0..p.rules.len() as u32).map(counts).collect(), queue: Vec::new() }
    }

    /// Drains the queue; `fire` is called once per rule whose counter reaches 0
    /// and may push newly derived literals.
    fn run(&mut self, enabled: impl Fn(u32) -> bool, mut fire: impl FnMut(u32, &mut Vec<Lit>)) {
        for r in 0..self.p.rules.len() as u32 {
            if enabled(r) && self.pending[r as usize] == 0 {
                fire(r, &mut self.queue);
            }
        }
        while let Some(q) = self.queue.pop() {
            for &r in self.p.by_body.get(q) {
                if enabled(r) {
                    let c = &mut self.pending[r as usize];
                    *c -= 1;
                    if *c == 0 {
                        fire(r, &mut self.queue);
                    }
                }
            }
        }
    }
}

fn delta_plus(p: &Program) -> Vec<bool> {
    let mut plus = p.fact.clone();
    let strict = |r: u32| p.rules[r as usize].kind == RuleKind::Strict;
    let mut c = Counters::new(p, |r| p.body(r).len() as u32);
    c.queue.extend((0..p.num_lits() as Lit).filter(|&l| plus[l as usize]));
    c.run(strict, |r, q| {
        let h = p.rules[r as usize].head;
        if !plus[h as usize] {
            plus[h as usize] = true;
            q.push(h);
        }
    });
    plus
}

fn lambda_plus(p: &Program, d: &[bool]) -> Vec<bool> {
    let mut plus = d.to_vec();
    let support = |r: u32| p.rules[r as usize].kind.supports();
    let mut c = Counters::new(p, |r| p.body(r).len() as u32);
    c.queue.extend((0..p.num_lits() as Lit).filter(|&l| plus[l as usize]));
    c.run(support, |r, q| {
        let h = p.rules[r as usize].head;
        if !plus[h as usize] && !d[neg(h) as usize] {
            plus[h as usize] = true;
            q.push(h);
        }
    });
    plus
}

/// Rules kept by the simplifications, with +Δ literals erased from bodies.
struct Simplified {
    alive: Vec<bool>,
    pending: Vec<u32>,
    seeds: Vec<Lit>,
}

fn simplify_program(p: &Program, d: &[bool], l: &[bool]) -> Simplified {
    let alive: Vec<bool> = p
        .rules
        .iter()
        .map(|r| {
            let definite = d[r.head as usize] || d[neg(r.head) as usize];
            let dropped = if r.kind == RuleKind::Strict { definite } else { d[neg(r.head) as usize] };
            !dropped && r.body.iter().all(|&a| l[a as usize])
        })
        .collect();
    let pending = p.rules.iter().map(|r| r.body.iter().filter(|&&a| !d[a as usize]).count() as u32).collect();
    let seeds = (0..p.num_lits() as Lit).filter(|&x| d[x as usize]).collect();
    Simplified { alive, pending, seeds }
}

/// Removes the rules made irrelevant by P_Δ and P_λ.
///
/// Returns the simplified theory and the conclusions `C` it is seeded with:
/// `+∂_|| q` for every `+Δ q`. Rules for `∼q` are deleted and `q` is erased from
/// bodies; rules with a body literal outside `+λ` are deleted; strict rules are
/// deleted when their head or its complement is definite and turned into
/// defeasible rules otherwise. Superiority pairs on deleted rules are dropped.
pub fn simplify(t: &Theory, delta: &ClosureSet, lambda: &ClosureSet) -> Result<(Theory, ClosureSet), Error> {
    if !t.is_ground() {
        return Err(Error::NotGround);
    }
    let p = Program::compile(t, delta.universe.iter().chain(&lambda.universe));
    let d = Bits::from_closure(&p, delta, Tag::Delta).plus;
    let l = Bits::from_closure(&p, lambda, Tag::Lambda).plus;
    let s = simplify_program(&p, &d, &l);
    let mut out = Theory { facts: Vec::new(), rules: Vec::new(), superiority: BTreeSet::new() };
    let mut kept = BTreeSet::new();
    for (r, src) in t.rules.iter().enumerate() {
        if !s.alive[r] {
            continue;
        }
        let kind = if src.kind == RuleKind::Strict { RuleKind::Defeasible } else { src.kind };
        let body = src.body.iter().filter(|b| !p.lookup(b).is_some_and(|x| d[x as usize])).cloned().collect();
        out.rules.push(Rule::new(src.label.clone(), kind, body, src.head.clone()));
        kept.insert(src.label.as_str());
    }
    out.superiority = t
        .superiority
        .iter()
        .filter(|(a, b)| kept.contains(a.as_str()) && kept.contains(b.as_str()))
        .cloned()
        .collect();
    let mut c = ClosureSet::new();
    for x in s.seeds {
        c.insert(Sign::Plus, Tag::DPar, p.literal(x));
    }
    Ok((out, c))
}

/// +∂_|| (or +∂_||* with `star`) by counter propagation over the simplified rules.
fn dpar_plus(p: &Program, s: &Simplified, star: bool) -> Vec<bool> {
    let n = p.num_lits();
    let heads = |r: u32| p.rules[r as usize].head;
    let supports = |r: u32| p.rules[r as usize].kind.supports();
    let mut attackers = vec![0u32; n];
    for (r, rule) in p.rules.iter().enumerate() {
        if s.alive[r] {
            attackers[neg(rule.head) as usize] += 1;
        }
    }
    // Individual defeat: attackers of head(r) that r itself does not beat.
    let unbeaten_by: Vec<u32> = if star {
        (0..p.rules.len() as u32)
            .map(|r| {
                let h = heads(r);
                let beaten =
                    p.beats.get(r).iter().filter(|&&x| s.alive[x as usize] && heads(x) == neg(h)).count()
                        as u32;
                attackers[h as usize] - beaten
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut plus = vec![false; n];
    let mut beaten = vec![false; p.rules.len()];
    let mut c = Counters { p, pending: s.pending.clone(), queue: Vec::new() };
    for &x in &s.seeds {
        plus[x as usize] = true;
    }
    // Seeds are already erased from bodies, so they are not propagated.
    c.run(
        |r| s.alive[r as usize] && supports(r),
        |r, q| {
            let h = heads(r);
            if star {
                if unbeaten_by[r as usize] > 0 {
                    return;
                }
            } else {
                for &x in p.beats.get(r) {
                    if s.alive[x as usize] && heads(x) == neg(h) && !beaten[x as usize] {
                        beaten[x as usize] = true;
                        attackers[h as usize] -= 1;
                    }
                }
                if attackers[h as usize] > 0 {
                    return;
                }
            }
            if !plus[h as usize] {
                plus[h as usize] = true;
                q.push(h);
            }
        },
    );
    plus
}

/// Runs the linear pipeline. The result has the same shape as
/// [`scalable::solve`] and is restricted to the literals of the input theory.
/// Negative conclusions, when requested, come from the staged fixpoints on
/// the regular theory.
pub fn linear_solve(t: &Theory, opts: &SolveOptions) -> Result<StagedClosures, Error> {
    let g = grounded(t)?;
    let (r, temps) = regularize(g);
    let p = Program::compile(&r, &opts.universe);
    let d = delta_plus(&p);
    let l = lambda_plus(&p, &d);
    let s = simplify_program(&p, &d, &l);
    let dp = dpar_plus(&p, &s, false);
    let ds = opts.dparstar.then(|| dpar_plus(&p, &s, true));
    let mut stages = [
        Bits { plus: d, minus: Vec::new() },
        Bits { plus: l, minus: Vec::new() },
        Bits { plus: dp, minus: Vec::new() },
    ];
    let mut star = ds.map(|plus| Bits { plus, minus: Vec::new() });
    let n = p.num_lits();
    if opts.negatives {
        let d = scalable::delta(&p, true);
        let l = scalable::lambda(&p, &d, true);
        if let Some(s) = star.as_mut() {
            s.minus = scalable::dpar(&p, &d, &l, true, true).minus;
        }
        stages[2].minus = scalable::dpar(&p, &d, &l, false, true).minus;
        stages[0].minus = d.minus;
        stages[1].minus = l.minus;
    } else {
        for s in stages.iter_mut().chain(star.iter_mut()) {
            s.minus = vec![false; n];
        }
    }
    let keep: Vec<bool> = (0..n as Lit).map(|x| !temps.contains(p.literal_predicate(x))).collect();
    let universe: BTreeSet<Literal> = if opts.negatives {
        (0..n as Lit).filter(|&x| keep[x as usize]).map(|x| p.literal(x)).collect()
    } else {
        BTreeSet::new()
    };
    let out = |b: &Bits, tag| {
        let mut b = b.clone();
        for (i, k) in keep.iter().enumerate() {
            if !k {
                b.plus[i] = false;
                b.minus[i] = false;
            }
        }
        b.to_closure(&p, tag, &universe)
    };
    Ok(StagedClosures {
        delta: out(&stages[0], Tag::Delta),
        lambda: out(&stages[1], Tag::Lambda),
        dpar: out(&stages[2], Tag::DPar),
        dparstar: star.as_ref().map(|b| out(b, Tag::DParStar)),
    })
}

/// Size of the +∂_|| set computed by the linear pipeline, without building
/// a closure set. Used for timing runs.
pub fn linear_dpar_count(t: &Theory) -> Result<usize, Error> {
    let g = grounded(t)?;
    let (r, _) = regularize(g);
    let p = Program::compile(&r, core::iter::empty());
    let d = delta_plus(&p);
    let l = lambda_plus(&p, &d);
    let s = simplify_program(&p, &d, &l);
    Ok(dpar_plus(&p, &s, false).iter().filter(|b| **b).count())
}

/// Propositional chain `p0. r_i: p_i => p_{i+1}` for `i < n`.
pub fn chain_theory(n: usize) -> Theory {
    let name = |i: usize| -> String { alloc::format!("p{i}") };
    let mut t = Theory::new();
    t.add_fact("f", Literal::prop(false, name(0)));
    t.rules.reserve(n);
    for i in 0..n {
        t.rules.push(Rule {
            label: alloc::format!("r{i}"),
            kind: RuleKind::Defeasible,
            body: vec![Literal::prop(false, name(i))],
            head: Literal::prop(false, name(i + 1)),
        });
    }
    t
}
