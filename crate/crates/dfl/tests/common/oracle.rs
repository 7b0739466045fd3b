//! Reference evaluator for acceptance checks. Works on literal strings and
//! grows each proof one conclusion at a time, with no indexing at all.

use std::collections::{BTreeMap, BTreeSet};

use dfl_core::{RuleKind, Theory};

pub struct R {
    pub label: String,
    pub kind: RuleKind,
    pub body: Vec<String>,
    pub head: String,
}

pub struct Oracle {
    pub lits: BTreeSet<String>,
    facts: BTreeSet<String>,
    rules: Vec<R>,
    sup: BTreeSet<(String, String)>,
}

pub fn comp(s: &str) -> String {
    match s.strip_prefix('!') {
        Some(a) => a.to_string(),
        None => format!("!{s}"),
    }
}

/// Positive and negative conclusions of one tag.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Proof {
    pub plus: BTreeSet<String>,
    pub minus: BTreeSet<String>,
}

impl Oracle {
    pub fn new(t: &Theory) -> Oracle {
        assert!(t.is_ground(), "oracle needs a ground theory");
        let mut lits = BTreeSet::new();
        let facts: BTreeSet<String> = t.facts.iter().map(|f| f.literal.to_string()).collect();
        let rules: Vec<R> = t
            .rules
            .iter()
            .map(|r| R {
                label: r.label.clone(),
                kind: r.kind,
                body: r.body.iter().map(|l| l.to_string()).collect(),
                head: r.head.to_string(),
            })
            .collect();
        for l in facts.iter().chain(rules.iter().flat_map(|r| r.body.iter().chain([&r.head]))) {
            lits.insert(l.clone());
            lits.insert(comp(l));
        }
        Oracle { lits, facts, rules, sup: t.superiority.clone() }
    }

    fn rules_for<'a>(&'a self, q: &'a str) -> impl Iterator<Item = &'a R> + 'a {
        self.rules.iter().filter(move |r| r.head == q)
    }

    fn sd<'a>(&'a self, q: &'a str) -> impl Iterator<Item = &'a R> + 'a {
        self.rules_for(q).filter(|r| r.kind != RuleKind::Defeater)
    }

    fn gt(&self, a: &R, b: &R) -> bool {
        self.sup.contains(&(a.label.clone(), b.label.clone()))
    }

    /// Appends conclusions one at a time until no inference rule applies.
    fn extend(&self, plus_ok: impl Fn(&str, &Proof) -> bool, minus_ok: impl Fn(&str, &Proof) -> bool) -> Proof {
        let mut p = Proof::default();
        'grow: loop {
            for q in &self.lits {
                if !p.plus.contains(q) && plus_ok(q, &p) {
                    p.plus.insert(q.clone());
                    continue 'grow;
                }
                if !p.minus.contains(q) && minus_ok(q, &p) {
                    p.minus.insert(q.clone());
                    continue 'grow;
                }
            }
            return p;
        }
    }

    pub fn all(&self) -> BTreeMap<&'static str, Proof> {
        let all = |b: &[String], s: &BTreeSet<String>| b.iter().all(|a| s.contains(a));
        let some = |b: &[String], s: &BTreeSet<String>| b.iter().any(|a| s.contains(a));
        let delta = self.extend(
            |q, p| {
                self.facts.contains(q)
                    || self.rules_for(q).any(|r| r.kind == RuleKind::Strict && all(&r.body, &p.plus))
            },
            |q, p| {
                !self.facts.contains(q)
                    && self.rules_for(q).filter(|r| r.kind == RuleKind::Strict).all(|r| some(&r.body, &p.minus))
            },
        );
        let d = &delta;
        let lambda = self.extend(
            |q, p| d.plus.contains(q) || (self.sd(q).any(|r| all(&r.body, &p.plus)) && !d.plus.contains(&comp(q))),
            |q, p| {
                d.minus.contains(q)
                    && (self.sd(q).all(|r| some(&r.body, &p.minus)) || d.plus.contains(&comp(q)))
            },
        );
        let l = &lambda;
        let par = |star: bool| {
            self.extend(
                |q, p| {
                    let nq = comp(q);
                    if d.plus.contains(q) {
                        return true;
                    }
                    if d.plus.contains(&nq) {
                        return false;
                    }
                    let fires = |r: &R| all(&r.body, &p.plus);
                    let attack_ok = |s: &R, winner: &dyn Fn(&R) -> bool| !all(&s.body, &l.plus) || winner(s);
                    if star {
                        self.sd(q).any(|r| fires(r) && self.rules_for(&nq).all(|s| attack_ok(s, &|s| self.gt(r, s))))
                    } else {
                        self.sd(q).any(fires)
                            && self
                                .rules_for(&nq)
                                .all(|s| attack_ok(s, &|s| self.sd(q).any(|t| fires(t) && self.gt(t, s))))
                    }
                },
                |q, p| {
                    let nq = comp(q);
                    if !d.minus.contains(q) {
                        return false;
                    }
                    if d.plus.contains(&nq) {
                        return true;
                    }
                    let dead = |r: &R| some(&r.body, &p.minus);
                    let live_attack = |s: &R| all(&s.body, &l.plus);
                    if star {
                        self.sd(q).all(|r| dead(r) || self.rules_for(&nq).any(|s| live_attack(s) && !self.gt(r, s)))
                    } else {
                        self.sd(q).all(dead)
                            || self
                                .rules_for(&nq)
                                .any(|s| live_attack(s) && self.sd(q).all(|t| dead(t) || !self.gt(t, s)))
                    }
                },
            )
        };
        let classic = |star: bool| {
            self.extend(
                |q, p| {
                    let nq = comp(q);
                    if d.plus.contains(q) {
                        return true;
                    }
                    if !d.minus.contains(&nq) {
                        return false;
                    }
                    let fires = |r: &R| all(&r.body, &p.plus);
                    let beaten = |s: &R| some(&s.body, &p.minus);
                    if star {
                        self.sd(q).any(|r| fires(r) && self.rules_for(&nq).all(|s| beaten(s) || self.gt(r, s)))
                    } else {
                        self.sd(q).any(fires)
                            && self
                                .rules_for(&nq)
                                .all(|s| beaten(s) || self.sd(q).any(|t| fires(t) && self.gt(t, s)))
                    }
                },
                |q, p| {
                    let nq = comp(q);
                    if !d.minus.contains(q) {
                        return false;
                    }
                    if d.plus.contains(&nq) {
                        return true;
                    }
                    let dead = |r: &R| some(&r.body, &p.minus);
                    let fires = |s: &R| all(&s.body, &p.plus);
                    if star {
                        self.sd(q).all(|r| dead(r) || self.rules_for(&nq).any(|s| fires(s) && !self.gt(r, s)))
                    } else {
                        self.sd(q).all(dead)
                            || self.rules_for(&nq).any(|s| fires(s) && self.sd(q).all(|t| dead(t) || !self.gt(t, s)))
                    }
                },
            )
        };
        let mut out = BTreeMap::new();
        out.insert("dpar", par(false));
        out.insert("dparstar", par(true));
        out.insert("dclassic", classic(false));
        out.insert("dclassicstar", classic(true));
        out.insert("lambda", lambda);
        out.insert("delta", delta);
        out
    }
}
