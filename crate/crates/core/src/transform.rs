//! Theory transformations: `regular`, `elim_dft` and `elim_sup`.
//!
//! All three ground their input first. Fresh predicates and labels are drawn
//! from the reserved `_t<n>` namespace, numbered above any such name already in
//! the theory.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ground::ground;
use crate::types::{Fact, Literal, Rule, RuleKind, Theory};

/// True for names in the reserved temp namespace.
pub fn is_temp(name: &str) -> bool {
    name.strip_prefix("_t").is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

struct Fresh {
    next: u64,
}

impl Fresh {
    fn for_theory(t: &Theory) -> Fresh {
        let names = t.facts.iter().flat_map(|f| [f.label.as_str(), f.literal.predicate.as_str()]).chain(
            t.rules.iter().flat_map(|r| {
                core::iter::once(r.label.as_str())
                    .chain(r.body.iter().chain(core::iter::once(&r.head)).map(|l| l.predicate.as_str()))
            }),
        );
        let mut next = 0;
        for n in names {
            if is_temp(n) {
                let v: u64 = n[2..].parse().unwrap_or(u64::MAX - 1);
                next = next.max(v.saturating_add(1));
            }
        }
        Fresh { next }
    }

    fn name(&mut self) -> String {
        self.next += 1;
        alloc::format!("_t{}", self.next - 1)
    }

    fn prop(&mut self) -> Literal {
        Literal::prop(false, self.name())
    }
}

pub(crate) fn grounded(t: &Theory) -> Result<Cow<'_, Theory>, Error> {
    crate::types::validate(t).into_result()?;
    Ok(if t.is_ground() { Cow::Borrowed(t) } else { Cow::Owned(ground(t)?.0) })
}

fn strict_in_sup(t: &Theory) -> BTreeSet<&str> {
    let strict: BTreeSet<&str> =
        t.rules.iter().filter(|r| r.kind == RuleKind::Strict).map(|r| r.label.as_str()).collect();
    t.superiority.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).filter(|l| strict.contains(l)).collect()
}

/// Makes the theory regular: no strict rule takes part in the superiority
/// relation.
///
/// Each strict rule named in `>` becomes defeasible. Definite reasoning is
/// preserved by a primed copy of the facts and strict rules, and a strict
/// bridge `q' -> q` for every demoted head `q`.
pub fn regular(t: &Theory) -> Result<Theory, Error> {
    Ok(regularize(grounded(t)?).0.into_owned())
}

/// [`regular`] on a validated ground theory; also returns the fresh predicates.
pub(crate) fn regularize(g: Cow<'_, Theory>) -> (Cow<'_, Theory>, BTreeSet<String>) {
    let demote = strict_in_sup(&g);
    if demote.is_empty() {
        return (g, BTreeSet::new());
    }
    let mut fresh = Fresh::for_theory(&g);
    let mut primed: BTreeMap<String, String> = BTreeMap::new();
    let mut prime = |l: &Literal, fresh: &mut Fresh| {
        let p = primed.entry(l.predicate.clone()).or_insert_with(|| fresh.name()).clone();
        Literal { negated: l.negated, predicate: p, args: l.args.clone() }
    };
    let mut out = Theory { facts: g.facts.clone(), rules: Vec::new(), superiority: g.superiority.clone() };
    for f in &g.facts {
        let literal = prime(&f.literal, &mut fresh);
        out.facts.push(Fact { label: fresh.name(), literal });
    }
    let mut extra = Vec::new();
    for r in &g.rules {
        if r.kind != RuleKind::Strict {
            out.rules.push(r.clone());
            continue;
        }
        let body = r.body.iter().map(|b| prime(b, &mut fresh)).collect();
        let head = prime(&r.head, &mut fresh);
        extra.push(Rule::new(fresh.name(), RuleKind::Strict, body, head.clone()));
        if demote.contains(r.label.as_str()) {
            out.rules.push(Rule { kind: RuleKind::Defeasible, ..r.clone() });
            extra.push(Rule::new(fresh.name(), RuleKind::Strict, vec![head], r.head.clone()));
        } else {
            out.rules.push(r.clone());
        }
    }
    out.rules.extend(extra);
    (Cow::Owned(out), primed.into_values().collect())
}

/// Removes defeaters.
///
/// For every atom `p` with a defeater among its rules, two temps `P` and `N`
/// stand for the cases for `p` and `!p`. A supporting rule `r: A -> p` becomes
/// `A -> P`, `A -> !N` and `r: P -> p` (kind kept); a defeater `d: A ~> p`
/// becomes `d: A => !N`. The symmetric encoding is used for `!p`, and the
/// superiority relation is carried over to the new rules.
pub fn elim_dft(t: &Theory) -> Result<Theory, Error> {
    let g = grounded(t)?;
    let atoms: BTreeSet<Literal> =
        g.rules.iter().filter(|r| r.kind == RuleKind::Defeater).map(|r| r.head.atom()).collect();
    if atoms.is_empty() {
        return Ok(g.into_owned());
    }
    let mut fresh = Fresh::for_theory(&g);
    let temps: BTreeMap<&Literal, (Literal, Literal)> =
        atoms.iter().map(|a| (a, (fresh.prop(), fresh.prop()))).collect();
    // Label of the rule establishing the temp, and of the rule attacking the other temp.
    let mut plus: BTreeMap<&str, String> = BTreeMap::new();
    let mut minus: BTreeMap<&str, String> = BTreeMap::new();
    let mut out = Theory { facts: g.facts.clone(), rules: Vec::new(), superiority: BTreeSet::new() };
    for r in &g.rules {
        let Some((p, n)) = temps.get(&r.head.atom()) else {
            out.rules.push(r.clone());
            continue;
        };
        let (own, other) = if r.head.negated { (n, p) } else { (p, n) };
        if r.kind == RuleKind::Defeater {
            out.rules.push(Rule::new(
                r.label.clone(),
                RuleKind::Defeasible,
                r.body.clone(),
                other.complement(),
            ));
            minus.insert(&r.label, r.label.clone());
            continue;
        }
        let (a, b) = (fresh.name(), fresh.name());
        out.rules.push(Rule::new(a.clone(), r.kind, r.body.clone(), own.clone()));
        out.rules.push(Rule::new(b.clone(), r.kind, r.body.clone(), other.complement()));
        out.rules.push(Rule::new(r.label.clone(), r.kind, vec![own.clone()], r.head.clone()));
        plus.insert(&r.label, a);
        minus.insert(&r.label, b);
    }
    for (a, b) in &g.superiority {
        let (a, b) = (a.as_str(), b.as_str());
        if !minus.contains_key(a) || !minus.contains_key(b) {
            out.superiority.insert((a.into(), b.into()));
            continue;
        }
        if let Some(pa) = plus.get(a) {
            out.superiority.insert((pa.clone(), minus[b].clone()));
        }
        if let Some(pb) = plus.get(b) {
            out.superiority.insert((minus[a].clone(), pb.clone()));
        }
        if plus.contains_key(a) && plus.contains_key(b) {
            out.superiority.insert((a.into(), b.into()));
        }
    }
    Ok(out)
}

/// Removes the superiority relation.
///
/// Every rule `r: B => h` in a pair of `>` between conflicting rules becomes
/// `B => tr` and `r: tr => h`; each pair `a > b` becomes `ta => !tb`. Strict
/// rules in `>` are first made defeasible by [`regular`].
pub fn elim_sup(t: &Theory) -> Result<Theory, Error> {
    let g = grounded(t)?;
    let g = if strict_in_sup(&g).is_empty() { g } else { Cow::Owned(regular(&g)?) };
    if g.superiority.is_empty() {
        return Ok(g.into_owned());
    }
    // A defeater never beats anything, so pairs where it is the superior rule carry no information.
    let heads: BTreeMap<&str, &Literal> = g.rules.iter().map(|r| (r.label.as_str(), &r.head)).collect();
    let defeaters: BTreeSet<&str> =
        g.rules.iter().filter(|r| r.kind == RuleKind::Defeater).map(|r| r.label.as_str()).collect();
    let pairs: Vec<(&str, &str)> = g
        .superiority
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .filter(|(a, _)| !defeaters.contains(a))
        .filter(|(a, b)| match (heads.get(a), heads.get(b)) {
            (Some(x), Some(y)) => **x == y.complement(),
            _ => false,
        })
        .collect();
    let mut fresh = Fresh::for_theory(&g);
    let mut tmp: BTreeMap<&str, Literal> = BTreeMap::new();
    for (a, b) in &pairs {
        for l in [a, b] {
            if !tmp.contains_key(l) {
                tmp.insert(l, fresh.prop());
            }
        }
    }
    let mut out = Theory { facts: g.facts.clone(), rules: Vec::new(), superiority: BTreeSet::new() };
    for r in &g.rules {
        match tmp.get(r.label.as_str()) {
            None => out.rules.push(r.clone()),
            Some(x) => {
                out.rules.push(Rule::new(fresh.name(), RuleKind::Defeasible, r.body.clone(), x.clone()));
                out.rules.push(Rule::new(r.label.clone(), r.kind, vec![x.clone()], r.head.clone()));
            }
        }
    }
    for (a, b) in pairs {
        out.rules.push(Rule::new(
            fresh.name(),
            RuleKind::Defeasible,
            vec![tmp[a].clone()],
            tmp[b].complement(),
        ));
    }
    Ok(out)
}

/// Literals of `t` outside the temp namespace, Σ(t) for ground theories.
pub fn signature(t: &Theory) -> Result<BTreeSet<Literal>, Error> {
    Ok(crate::types::vocabulary(&*grounded(t)?)?.into_iter().filter(|l| !is_temp(&l.predicate)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::dclassic_closure;
    use crate::scalable::{solve_ground, SolveOptions};
    use crate::text::parse_theory;
    use crate::types::{ClosureSet, Tag};

    const TWEETY: &str = "r1: bird(X) => fly(X). r2: penguin(X) => !fly(X). r3: penguin(X) -> bird(X). e: bird(eddie). f: penguin(tweety). r2 > r1.";

    fn dclassic(t: &Theory, sigma: &BTreeSet<Literal>) -> ClosureSet {
        dclassic_closure(&ground(t).unwrap().0, sigma).unwrap().restrict(sigma)
    }

    fn dpar(t: &Theory, sigma: &BTreeSet<Literal>) -> ClosureSet {
        let o = SolveOptions { negatives: true, universe: sigma.clone(), ..Default::default() };
        solve_ground(&ground(t).unwrap().0, &o).all().restrict(sigma)
    }

    fn th(s: &str) -> Theory {
        parse_theory(s).unwrap()
    }

    #[test]
    fn temp_names() {
        assert!(is_temp("_t0") && is_temp("_t12"));
        assert!(!is_temp("_t") && !is_temp("t1") && !is_temp("_tx"));
        let t = th("_t4: => _t7. p.");
        assert_eq!(Fresh::for_theory(&t).name(), "_t8");
    }

    #[test]
    fn regular_shape() {
        let t = th("r: p -> q. s: => !q. p. r > s.");
        let r = regular(&t).unwrap();
        assert!(strict_in_sup(&r).is_empty());
        assert_eq!(r.rule("r").unwrap().kind, RuleKind::Defeasible);
        assert!(r.superiority.contains(&("r".into(), "s".into())));
        assert_eq!(dclassic(&t, &signature(&t).unwrap()), dclassic(&r, &signature(&t).unwrap()));
        assert_eq!(dpar(&t, &signature(&t).unwrap()), dpar(&r, &signature(&t).unwrap()));
        let tw = th(TWEETY);
        assert_eq!(regular(&tw).unwrap(), ground(&tw).unwrap().0);
    }

    #[test]
    fn elim_dft_pattern() {
        let t = th("r: b => h. d: c ~> !h. b. c.");
        let e = elim_dft(&t).unwrap();
        assert!(e.rules.iter().all(|r| r.kind != RuleKind::Defeater));
        assert_eq!(e.rules.len(), 4);
        let d = e.rule("d").unwrap();
        assert_eq!(d.body, vec![Literal::prop(false, "c")]);
        assert!(d.head.negated && is_temp(&d.head.predicate));
        let r = e.rule("r").unwrap();
        assert_eq!(r.head, Literal::prop(false, "h"));
        assert_eq!(r.body.len(), 1);
        assert_eq!(d.head.predicate, r.body[0].predicate);
        let sigma = signature(&t).unwrap();
        assert_eq!(dclassic(&t, &sigma), dclassic(&e, &sigma));
        assert_eq!(dpar(&t, &sigma), dpar(&e, &sigma));
        assert_eq!(elim_dft(&th(TWEETY)).unwrap(), ground(&th(TWEETY)).unwrap().0);
    }

    #[test]
    fn elim_sup_pattern() {
        let t = th("r1: b1 => h. r2: b2 => !h. r1 > r2. b1. b2.");
        let e = elim_sup(&t).unwrap();
        assert!(e.superiority.is_empty());
        assert_eq!(e.rules.len(), 5);
        let sigma = signature(&t).unwrap();
        assert_eq!(dclassic(&t, &sigma), dclassic(&e, &sigma));
        assert!(dclassic(&e, &sigma).contains(crate::Sign::Plus, Tag::DClassic, &Literal::prop(false, "h")));
        assert_eq!(elim_sup(&th("a: => p. b: p => q.")).unwrap(), th("a: => p. b: p => q."));
    }

    #[test]
    fn elim_sup_loses_team_defeat_of_dpar() {
        // The transformed attacker of h keeps a +λ body, so it is never neutralised.
        let t = th("r1: => h. r2: => !h. r1 > r2.");
        let sigma = signature(&t).unwrap();
        let h = Literal::prop(false, "h");
        assert!(dpar(&t, &sigma).contains(crate::Sign::Plus, Tag::DPar, &h));
        assert!(!dpar(&elim_sup(&t).unwrap(), &sigma).contains(crate::Sign::Plus, Tag::DPar, &h));
    }

    #[test]
    fn tweety_preserved() {
        let t = th(TWEETY);
        let sigma = signature(&t).unwrap();
        for f in [regular, elim_dft, elim_sup] {
            let u = f(&t).unwrap();
            assert_eq!(dclassic(&t, &sigma), dclassic(&u, &sigma));
        }
        let plus = |c: ClosureSet| c.literals(crate::Sign::Plus, Tag::DPar);
        for f in [regular, elim_dft] {
            assert_eq!(plus(dpar(&t, &sigma)), plus(dpar(&f(&t).unwrap(), &sigma)));
        }
        // r1 stays a live attacker of !fly(tweety) once r2 > r1 is encoded by temps.
        let lost = plus(dpar(&t, &sigma))
            .difference(&plus(dpar(&elim_sup(&t).unwrap(), &sigma)))
            .cloned()
            .collect::<Vec<_>>();
        assert_eq!(lost, vec![crate::text::parse_literal("!fly(tweety)").unwrap()]);
    }
}
