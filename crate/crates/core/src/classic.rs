//! Classic DL(∂) and its individual-defeat variant ∂*. Positive and negative
//! conclusions depend on each other, so both are computed in one fixpoint.

use alloc::collections::BTreeSet;

use crate::error::Error;
use crate::program::{neg, Program};
use crate::scalable::{delta, Bits};
use crate::types::{ClosureSet, Literal, Tag, Theory};

pub(crate) fn dclassic(p: &Program, d: &Bits, star: bool) -> Bits {
    let mut b = Bits::new(p.num_lits());
    p.propagate(&mut b, |q, b| {
        let qi = q as usize;
        let nq = neg(q);
        let applicable = |r: u32, b: &Bits| p.body(r).iter().all(|&a| b.plus[a as usize]);
        let refuted = |r: u32, b: &Bits| p.body(r).iter().any(|&a| b.minus[a as usize]);
        let mut changed = false;
        if !b.plus[qi] {
            let derived = d.plus[qi]
                || (d.minus[nq as usize]
                    && if star {
                        p.supporters(q).any(|r| {
                            applicable(r, b) && p.rules_for(nq).all(|s| refuted(s, b) || p.superior(r, s))
                        })
                    } else {
                        p.supporters(q).any(|r| applicable(r, b))
                            && p.rules_for(nq).all(|s| {
                                refuted(s, b) || p.supporters(q).any(|t| p.superior(t, s) && applicable(t, b))
                            })
                    });
            if derived {
                b.plus[qi] = true;
                changed = true;
            }
        }
        if !b.minus[qi] && d.minus[qi] {
            let derived = d.plus[nq as usize]
                || if star {
                    p.supporters(q).all(|r| {
                        refuted(r, b) || p.rules_for(nq).any(|s| applicable(s, b) && !p.superior(r, s))
                    })
                } else {
                    p.supporters(q).all(|r| refuted(r, b))
                        || p.rules_for(nq).any(|s| {
                            applicable(s, b) && p.supporters(q).all(|t| refuted(t, b) || !p.superior(t, s))
                        })
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

fn run(t: &Theory, universe: &BTreeSet<Literal>, star: bool) -> Result<ClosureSet, Error> {
    if !t.is_ground() {
        return Err(Error::NotGround);
    }
    let p = Program::compile(t, universe);
    let d = delta(&p, true);
    let tag = if star { Tag::DClassicStar } else { Tag::DClassic };
    Ok(dclassic(&p, &d, star).to_closure(&p, tag, &p.all_literals()))
}

/// ±∂ over `universe` ∪ vocabulary(t).
pub fn dclassic_closure(t: &Theory, universe: &BTreeSet<Literal>) -> Result<ClosureSet, Error> {
    run(t, universe, false)
}

/// ±∂* over `universe` ∪ vocabulary(t).
pub fn dclassicstar_closure(t: &Theory, universe: &BTreeSet<Literal>) -> Result<ClosureSet, Error> {
    run(t, universe, true)
}
