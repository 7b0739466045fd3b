//! Staged closures of DL(∂_||): P_Δ, then P_λ, then P_∂|| (team defeat) and
//! P_∂||* (individual defeat).
//!
//! Positive and negative tags are least fixpoints of their inference rules.
//! Negatives are only computed on request.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ground::{ground, ground_relevant};
use crate::program::{neg, Lit, Program};
use crate::types::{validate, vocabulary, ClosureSet, Literal, Sign, Tag, Theory};

/// Plus/minus bit sets over the literal ids of a [`Program`].
#[derive(Clone)]
pub(crate) struct Bits {
    pub plus: Vec<bool>,
    pub minus: Vec<bool>,
}

impl Bits {
    pub fn new(n: usize) -> Bits {
        Bits { plus: vec![false; n], minus: vec![false; n] }
    }

    pub fn to_closure(&self, p: &Program, tag: Tag, universe: &BTreeSet<Literal>) -> ClosureSet {
        let mut c = ClosureSet { conclusions: BTreeSet::new(), universe: universe.clone() };
        for l in 0..p.num_lits() {
            if self.plus[l] {
                c.insert(Sign::Plus, tag, p.literal(l as Lit));
            }
            if self.minus[l] {
                c.insert(Sign::Minus, tag, p.literal(l as Lit));
            }
        }
        c
    }

    pub fn from_closure(p: &Program, c: &ClosureSet, tag: Tag) -> Bits {
        let mut b = Bits::new(p.num_lits());
        for x in c.conclusions.iter().filter(|x| x.tag == tag) {
            if let Some(l) = p.lookup(&x.literal) {
                match x.sign {
                    Sign::Plus => b.plus[l as usize] = true,
                    Sign::Minus => b.minus[l as usize] = true,
                }
            }
        }
        b
    }
}

pub(crate) fn delta(p: &Program, negatives: bool) -> Bits {
    delta_with(p, &p.fact, negatives)
}

/// Δ with the facts given as a bit set over literal ids.
pub(crate) fn delta_with(p: &Program, fact: &[bool], negatives: bool) -> Bits {
    let mut b = Bits::new(p.num_lits());
    p.propagate(&mut b, |q, b| {
        let qi = q as usize;
        let mut changed = false;
        if !b.plus[qi]
            && (fact[qi] || p.strict_for(q).any(|r| p.body(r).iter().all(|&a| b.plus[a as usize])))
        {
            b.plus[qi] = true;
            changed = true;
        }
        if negatives
            && !b.minus[qi]
            && !fact[qi]
            && p.strict_for(q).all(|r| p.body(r).iter().any(|&a| b.minus[a as usize]))
        {
            b.minus[qi] = true;
            changed = true;
        }
        changed
    });
    b
}

pub(crate) fn lambda(p: &Program, d: &Bits, negatives: bool) -> Bits {
    let mut b = Bits::new(p.num_lits());
    p.propagate(&mut b, |q, b| {
        let qi = q as usize;
        let mut changed = false;
        if !b.plus[qi]
            && (d.plus[qi]
                || (!d.plus[neg(q) as usize]
                    && p.supporters(q).any(|r| p.body(r).iter().all(|&a| b.plus[a as usize]))))
        {
            b.plus[qi] = true;
            changed = true;
        }
        if negatives
            && !b.minus[qi]
            && d.minus[qi]
            && (d.plus[neg(q) as usize]
                || p.supporters(q).all(|r| p.body(r).iter().any(|&a| b.minus[a as usize])))
        {
            b.minus[qi] = true;
            changed = true;
        }
        changed
    });
    b
}

/// ∂_|| (team defeat) or ∂_||* (individual defeat, `star`).
pub(crate) fn dpar(p: &Program, d: &Bits, l: &Bits, star: bool, negatives: bool) -> Bits {
    let mut b = Bits::new(p.num_lits());
    // An attacker is out of play when some body literal is not +λ.
    let live = |s: u32| p.body(s).iter().all(|&a| l.plus[a as usize]);
    p.propagate(&mut b, |q, b| {
        let qi = q as usize;
        let nq = neg(q);
        let mut changed = false;
        let applicable = |r: u32, b: &Bits| p.body(r).iter().all(|&a| b.plus[a as usize]);
        let refuted = |r: u32, b: &Bits| p.body(r).iter().any(|&a| b.minus[a as usize]);
        if !b.plus[qi] {
            let derived = d.plus[qi]
                || (!d.plus[nq as usize]
                    && if star {
                        p.supporters(q).any(|r| {
                            applicable(r, b) && p.rules_for(nq).all(|s| !live(s) || p.superior(r, s))
                        })
                    } else {
                        p.supporters(q).any(|r| applicable(r, b))
                            && p.rules_for(nq).all(|s| {
                                !live(s) || p.supporters(q).any(|t| p.superior(t, s) && applicable(t, b))
                            })
                    });
            if derived {
                b.plus[qi] = true;
                changed = true;
            }
        }
        if negatives && !b.minus[qi] && d.minus[qi] {
            let derived = d.plus[nq as usize]
                || if star {
                    p.supporters(q)
                        .all(|r| refuted(r, b) || p.rules_for(nq).any(|s| live(s) && !p.superior(r, s)))
                } else {
                    p.supporters(q).all(|r| refuted(r, b))
                        || p.rules_for(nq)
                            .any(|s| live(s) && p.supporters(q).all(|t| refuted(t, b) || !p.superior(t, s)))
                };
            if derived {
                b.minus[qi] = true;
                changed = true;
            }
        }
        changed
    });
    b
}

/// Which stages to compute and how to ground.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub dparstar: bool,
    pub negatives: bool,
    /// Literals added to the negative-tag universe.
    pub universe: BTreeSet<Literal>,
    /// Use relevance-restricted grounding for non-ground theories.
    pub relevant_grounding: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dparstar: true,
            negatives: false,
            universe: BTreeSet::new(),
            relevant_grounding: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StagedClosures {
    pub delta: ClosureSet,
    pub lambda: ClosureSet,
    pub dpar: ClosureSet,
    pub dparstar: Option<ClosureSet>,
}

impl StagedClosures {
    /// All stages merged into one set.
    pub fn all(&self) -> ClosureSet {
        let mut c = self.delta.clone();
        c.merge(self.lambda.clone());
        c.merge(self.dpar.clone());
        if let Some(s) = &self.dparstar {
            c.merge(s.clone());
        }
        c
    }

    pub fn get(&self, tag: Tag) -> Option<&ClosureSet> {
        match tag {
            Tag::Delta => Some(&self.delta),
            Tag::Lambda => Some(&self.lambda),
            Tag::DPar => Some(&self.dpar),
            Tag::DParStar => self.dparstar.as_ref(),
            _ => None,
        }
    }
}

/// Grounds `t` when needed and returns the theory the engines should run on.
pub fn prepare(t: &Theory, relevant: bool) -> Result<Theory, Error> {
    validate(t).into_result()?;
    if t.is_ground() {
        Ok(t.clone())
    } else if relevant {
        Ok(ground_relevant(t)?.0)
    } else {
        Ok(ground(t)?.0)
    }
}

fn require_ground(t: &Theory) -> Result<(), Error> {
    if t.is_ground() {
        Ok(())
    } else {
        Err(Error::NotGround)
    }
}

fn universe_of(p: &Program) -> BTreeSet<Literal> {
    p.all_literals()
}

fn check_cover(t: &Theory, c: &ClosureSet, what: &str) -> Result<(), Error> {
    let voc = vocabulary(t)?;
    if let Some(l) = voc.iter().find(|l| !c.universe.contains(*l)) {
        return Err(Error::Precondition(alloc::format!("{what} closure does not cover {l}")));
    }
    Ok(())
}

pub fn delta_closure(t: &Theory, universe: &BTreeSet<Literal>) -> Result<ClosureSet, Error> {
    require_ground(t)?;
    let p = Program::compile(t, universe);
    Ok(delta(&p, true).to_closure(&p, Tag::Delta, &universe_of(&p)))
}

pub fn lambda_closure(t: &Theory, delta_c: &ClosureSet) -> Result<ClosureSet, Error> {
    require_ground(t)?;
    check_cover(t, delta_c, "delta")?;
    let p = Program::compile(t, &delta_c.universe);
    let d = Bits::from_closure(&p, delta_c, Tag::Delta);
    Ok(lambda(&p, &d, true).to_closure(&p, Tag::Lambda, &universe_of(&p)))
}

fn dpar_common(
    t: &Theory,
    delta_c: &ClosureSet,
    lambda_c: &ClosureSet,
    star: bool,
) -> Result<ClosureSet, Error> {
    require_ground(t)?;
    check_cover(t, delta_c, "delta")?;
    check_cover(t, lambda_c, "lambda")?;
    let p = Program::compile(t, delta_c.universe.iter().chain(&lambda_c.universe));
    let d = Bits::from_closure(&p, delta_c, Tag::Delta);
    let l = Bits::from_closure(&p, lambda_c, Tag::Lambda);
    let tag = if star { Tag::DParStar } else { Tag::DPar };
    Ok(dpar(&p, &d, &l, star, true).to_closure(&p, tag, &universe_of(&p)))
}

pub fn dpar_closure(t: &Theory, delta_c: &ClosureSet, lambda_c: &ClosureSet) -> Result<ClosureSet, Error> {
    dpar_common(t, delta_c, lambda_c, false)
}

pub fn dparstar_closure(
    t: &Theory,
    delta_c: &ClosureSet,
    lambda_c: &ClosureSet,
) -> Result<ClosureSet, Error> {
    dpar_common(t, delta_c, lambda_c, true)
}

/// Computes Δ, λ, ∂_|| (and ∂_||*) in dependency order.
pub fn solve(t: &Theory, opts: &SolveOptions) -> Result<StagedClosures, Error> {
    let g = prepare(t, opts.relevant_grounding)?;
    Ok(solve_ground(&g, opts))
}

pub(crate) fn solve_ground(g: &Theory, opts: &SolveOptions) -> StagedClosures {
    let p = Program::compile(g, &opts.universe);
    let universe = if opts.negatives { universe_of(&p) } else { BTreeSet::new() };
    let neg = opts.negatives;
    let d = delta(&p, neg);
    let l = lambda(&p, &d, neg);
    let dp = dpar(&p, &d, &l, false, neg);
    let ds = opts.dparstar.then(|| dpar(&p, &d, &l, true, neg));
    StagedClosures {
        delta: d.to_closure(&p, Tag::Delta, &universe),
        lambda: l.to_closure(&p, Tag::Lambda, &universe),
        dpar: dp.to_closure(&p, Tag::DPar, &universe),
        dparstar: ds.map(|x| x.to_closure(&p, Tag::DParStar, &universe)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_literal, parse_theory};

    fn lit(s: &str) -> Literal {
        parse_literal(s).unwrap()
    }

    fn all(text: &str) -> StagedClosures {
        let t = parse_theory(text).unwrap();
        solve(&t, &SolveOptions { negatives: true, ..Default::default() }).unwrap()
    }

    pub(crate) const TWEETY: &str = "r1: bird(X) => fly(X). r2: penguin(X) => !fly(X). r3: penguin(X) -> bird(X). e: bird(eddie). f: penguin(tweety). r2 > r1.";

    #[test]
    fn tweety_delta() {
        let c = all(TWEETY);
        for l in ["penguin(tweety)", "bird(tweety)", "bird(eddie)"] {
            assert!(c.delta.contains(Sign::Plus, Tag::Delta, &lit(l)), "{l}");
        }
        for l in ["penguin(eddie)", "fly(eddie)", "!fly(eddie)", "fly(tweety)", "!fly(tweety)"] {
            assert!(c.delta.contains(Sign::Minus, Tag::Delta, &lit(l)), "{l}");
        }
    }

    #[test]
    fn tweety_dpar() {
        let c = all(TWEETY);
        assert!(c.dpar.contains(Sign::Plus, Tag::DPar, &lit("fly(eddie)")));
        assert!(c.dpar.contains(Sign::Plus, Tag::DPar, &lit("!fly(tweety)")));
        assert!(c.dparstar.as_ref().unwrap().contains(Sign::Plus, Tag::DParStar, &lit("!fly(tweety)")));
        assert!(c.dpar.contains(Sign::Minus, Tag::DPar, &lit("fly(tweety)")));
    }

    #[test]
    fn empty_theory_delta_over_universe() {
        let t = Theory::new();
        let u: BTreeSet<Literal> = [lit("p"), lit("!p")].into_iter().collect();
        let d = delta_closure(&t, &u).unwrap();
        assert_eq!(d.literals(Sign::Minus, Tag::Delta), u);
        assert!(d.literals(Sign::Plus, Tag::Delta).is_empty());
        let c = solve(&t, &SolveOptions::default()).unwrap();
        assert!(c.all().is_empty());
        assert!(c.all().universe.is_empty());
    }

    #[test]
    fn lambda_is_not_consistent() {
        let c = all("r: => q. s: => !q.");
        assert!(c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("q")));
        assert!(c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("!q")));
        assert!(c.dpar.literals(Sign::Plus, Tag::DPar).is_empty());
    }

    #[test]
    fn lambda_blocked_by_definite_complement() {
        let c = all("r: => p. s: -> !p.");
        assert!(c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("!p")));
        assert!(!c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("p")));
        assert!(c.lambda.contains(Sign::Minus, Tag::Lambda, &lit("p")));
    }

    #[test]
    fn staged_functions_compose() {
        let t = parse_theory("r: => q. s: q => p. t: -> !z.").unwrap();
        let u = vocabulary(&t).unwrap();
        let d = delta_closure(&t, &u).unwrap();
        let l = lambda_closure(&t, &d).unwrap();
        let dp = dpar_closure(&t, &d, &l).unwrap();
        assert!(dp.contains(Sign::Plus, Tag::DPar, &lit("p")));
        assert!(dp.contains(Sign::Minus, Tag::DPar, &lit("!p")));
        let small = delta_closure(&t, &BTreeSet::new()).unwrap();
        assert!(lambda_closure(&t, &ClosureSet::new()).is_err());
        assert!(lambda_closure(&t, &small).is_ok());
    }

    #[test]
    fn worked_examples() {
        assert!(all("a: => p. b: !p -> !p.").dpar.contains(Sign::Plus, Tag::DPar, &lit("p")));
        let c = all("r: => q. s: => !q. t: => p. u: q => !p.");
        assert!(!c.dpar.contains(Sign::Plus, Tag::DPar, &lit("p")));
        let team = "r1: => p. r2: => p. r3: => !p. r4: => !p. r1 > r3. r2 > r4.";
        let c = all(team);
        assert!(c.dpar.contains(Sign::Plus, Tag::DPar, &lit("p")));
        assert!(!c.dparstar.unwrap().contains(Sign::Plus, Tag::DParStar, &lit("p")));
        assert!(all("r: => p.").dparstar.unwrap().contains(Sign::Plus, Tag::DParStar, &lit("p")));
    }

    #[test]
    fn reachability_example() {
        let t = "r: reachable(X), link(X,Y) -> reachable(Y). s: edge(X,Y) => link(X,Y). t: broken(X,Y) => !link(X,Y). t > s.
                 reachable(a). edge(a,b). edge(b,c). edge(b,e). edge(c,a). edge(c,d). edge(d,e). edge(e,d). edge(f,e).
                 broken(c,d). broken(b,e).";
        let c = all(t);
        let reach: BTreeSet<Literal> = c
            .dpar
            .literals(Sign::Plus, Tag::DPar)
            .into_iter()
            .filter(|l| l.predicate == "reachable")
            .collect();
        let want: BTreeSet<Literal> =
            ["reachable(a)", "reachable(b)", "reachable(c)"].iter().map(|s| lit(s)).collect();
        assert_eq!(reach, want);
        assert!(c.dpar.contains(Sign::Plus, Tag::DPar, &lit("!link(c,d)")));
        assert!(c.dpar.contains(Sign::Plus, Tag::DPar, &lit("!link(b,e)")));
        assert!(!c.dpar.contains(Sign::Plus, Tag::DPar, &lit("link(c,d)")));
        assert!(c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("link(a,b)")));
        assert!(c.lambda.contains(Sign::Plus, Tag::Lambda, &lit("!link(c,d)")));
    }

    #[test]
    fn loops_leave_negatives_open() {
        let c = all("r: p => p.");
        assert!(!c.dpar.contains(Sign::Minus, Tag::DPar, &lit("p")));
        assert!(!c.dpar.contains(Sign::Plus, Tag::DPar, &lit("p")));
        assert!(c.delta.contains(Sign::Minus, Tag::Delta, &lit("p")));
        let c = all("r: p -> p.");
        assert!(!c.delta.contains(Sign::Minus, Tag::Delta, &lit("p")));
    }

    #[test]
    fn signs_are_exclusive_and_stages_nested() {
        let texts = [TWEETY, "a: => p. b: => !p. c: p => q. a > b. d: q ~> !q.", "x: -> p. y: p => !p."];
        for text in texts {
            let c = all(text);
            assert_eq!(c.all().sign_clash(), None, "{text}");
            let d = c.delta.literals(Sign::Plus, Tag::Delta);
            let s = c.dparstar.as_ref().unwrap().literals(Sign::Plus, Tag::DParStar);
            let dp = c.dpar.literals(Sign::Plus, Tag::DPar);
            let l = c.lambda.literals(Sign::Plus, Tag::Lambda);
            assert!(d.is_subset(&s) && s.is_subset(&dp) && dp.is_subset(&l), "{text}");
        }
    }
}
