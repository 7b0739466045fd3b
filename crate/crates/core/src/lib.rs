//! Defeasible reasoning over the scalable logic DL(∂_||) and classic DL(∂).
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches files,
//! threads or clocks lives in the `dfl` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classic;
pub mod error;
pub mod faers;
pub mod ground;
pub mod harness;
pub mod linear;
pub mod parallel;
mod program;
pub mod scalable;
pub mod text;
pub mod transform;
pub mod types;

pub use error::Error;
pub use types::{
    complement, validate, vocabulary, ClosureSet, Fact, Literal, Rule, RuleKind, Sign, Tag, TaggedConclusion,
    Term, Theory, ValidationReport, Violation,
};

pub(crate) type HashMap<K, V> = hashbrown::HashMap<K, V>;
pub(crate) type HashSet<K> = hashbrown::HashSet<K>;
