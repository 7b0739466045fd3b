//! Interned, index-based form of a ground theory shared by the engines.
//!
//! Literal ids are `2 * atom + negated`, so the complement of `l` is `l ^ 1`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::types::{Literal, RuleKind, Term, Theory};
use crate::{HashMap, HashSet};

pub(crate) type Lit = u32;

#[inline]
pub(crate) fn neg(l: Lit) -> Lit {
    l ^ 1
}

pub(crate) struct PRule {
    pub kind: RuleKind,
    pub head: Lit,
    pub body: Vec<Lit>,
}

/// Compressed adjacency lists.
pub(crate) struct Csr {
    off: Vec<u32>,
    idx: Vec<u32>,
}

impl Csr {
    fn build(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> Csr {
        let mut off = vec![0u32; n + 1];
        for (k, _) in pairs.clone() {
            off[k as usize + 1] += 1;
        }
        for i in 0..n {
            off[i + 1] += off[i];
        }
        let mut fill = off.clone();
        let mut idx = vec![0u32; off[n] as usize];
        for (k, v) in pairs {
            idx[fill[k as usize] as usize] = v;
            fill[k as usize] += 1;
        }
        Csr { off, idx }
    }

    #[inline]
    pub fn get(&self, k: Lit) -> &[u32] {
        &self.idx[self.off[k as usize] as usize..self.off[k as usize + 1] as usize]
    }
}

pub(crate) struct Program<'a> {
    atoms: Vec<(&'a str, &'a [Term])>,
    index: HashMap<(&'a str, &'a [Term]), u32>,
    pub fact: Vec<bool>,
    pub rules: Vec<PRule>,
    /// Rule label per rule, for output and superiority.
    pub by_head: Csr,
    pub by_body: Csr,
    sup: HashSet<(u32, u32)>,
    pub beats: Csr,
}

impl<'a> Program<'a> {
    /// Compiles a ground theory. `extra` literals are added to the literal table
    /// so negative tags get evaluated for them too.
    pub fn compile(t: &'a Theory, extra: impl IntoIterator<Item = &'a Literal>) -> Program<'a> {
        let mut atoms: Vec<(&'a str, &'a [Term])> = Vec::new();
        let mut index: HashMap<(&'a str, &'a [Term]), u32> = HashMap::new();
        let mut intern = |l: &'a Literal| -> Lit {
            let key = (l.predicate.as_str(), l.args.as_slice());
            let a = *index.entry(key).or_insert_with(|| {
                atoms.push(key);
                (atoms.len() - 1) as u32
            });
            2 * a + l.negated as u32
        };
        let facts: Vec<Lit> = t.facts.iter().map(|f| intern(&f.literal)).collect();
        let mut rules = Vec::with_capacity(t.rules.len());
        let mut labels = Vec::with_capacity(t.rules.len());
        for r in &t.rules {
            let mut body: Vec<Lit> = r.body.iter().map(&mut intern).collect();
            body.sort_unstable();
            body.dedup();
            let head = intern(&r.head);
            rules.push(PRule { kind: r.kind, head, body });
            labels.push(r.label.as_str());
        }
        for l in extra {
            intern(l);
        }
        let n = atoms.len() * 2;
        let mut fact = vec![false; n];
        for f in facts {
            fact[f as usize] = true;
        }
        let by_head = Csr::build(n, rules.iter().enumerate().map(|(i, r)| (r.head, i as u32)));
        let by_body = Csr::build(
            n,
            rules.iter().enumerate().flat_map(|(i, r)| r.body.iter().map(move |&b| (b, i as u32))),
        );
        let label_ix: HashMap<&str, u32> = labels.iter().enumerate().map(|(i, l)| (*l, i as u32)).collect();
        let mut sup = HashSet::new();
        for (a, b) in &t.superiority {
            if let (Some(&x), Some(&y)) = (label_ix.get(a.as_str()), label_ix.get(b.as_str())) {
                sup.insert((x, y));
            }
        }
        let mut pairs: Vec<(u32, u32)> = sup.iter().copied().collect();
        pairs.sort_unstable();
        let beats = Csr::build(rules.len(), pairs.iter().copied());
        Program { atoms, index, fact, rules, by_head, by_body, sup, beats }
    }

    pub fn num_lits(&self) -> usize {
        self.atoms.len() * 2
    }

    pub fn literal(&self, l: Lit) -> Literal {
        let (p, args) = self.atoms[(l / 2) as usize];
        Literal { negated: l & 1 == 1, predicate: p.into(), args: args.to_vec() }
    }

    pub fn literal_predicate(&self, l: Lit) -> &'a str {
        self.atoms[(l / 2) as usize].0
    }

    pub fn lookup(&self, l: &Literal) -> Option<Lit> {
        self.index.get(&(l.predicate.as_str(), l.args.as_slice())).map(|a| 2 * a + l.negated as u32)
    }

    #[inline]
    pub fn superior(&self, a: u32, b: u32) -> bool {
        !self.sup.is_empty() && self.sup.contains(&(a, b))
    }

    /// Rules with head `q`.
    #[inline]
    pub fn rules_for(&self, q: Lit) -> impl Iterator<Item = u32> + '_ {
        self.by_head.get(q).iter().copied()
    }

    /// Strict and defeasible rules with head `q` (R_sd[q]).
    #[inline]
    pub fn supporters(&self, q: Lit) -> impl Iterator<Item = u32> + '_ {
        self.by_head.get(q).iter().copied().filter(|&r| self.rules[r as usize].kind.supports())
    }

    #[inline]
    pub fn strict_for(&self, q: Lit) -> impl Iterator<Item = u32> + '_ {
        self.by_head.get(q).iter().copied().filter(|&r| self.rules[r as usize].kind == RuleKind::Strict)
    }

    #[inline]
    pub fn body(&self, r: u32) -> &[Lit] {
        &self.rules[r as usize].body
    }

    pub fn all_literals(&self) -> BTreeSet<Literal> {
        (0..self.num_lits() as Lit).map(|l| self.literal(l)).collect()
    }

    /// Runs `step` to a fixpoint. `step(q, state)` may add conclusions about `q`
    /// and returns true when it did; every literal whose inference rule mentions
    /// `q` (heads of rules using `q` and their complements) is then revisited.
    pub fn propagate<S>(&self, state: &mut S, mut step: impl FnMut(Lit, &mut S) -> bool) {
        let n = self.num_lits();
        let mut queued = vec![true; n];
        let mut queue: VecDeque<Lit> = (0..n as Lit).collect();
        while let Some(q) = queue.pop_front() {
            queued[q as usize] = false;
            if step(q, state) {
                for &r in self.by_body.get(q) {
                    let h = self.rules[r as usize].head;
                    for x in [h, neg(h)] {
                        if !queued[x as usize] {
                            queued[x as usize] = true;
                            queue.push_back(x);
                        }
                    }
                }
            }
        }
    }
}
