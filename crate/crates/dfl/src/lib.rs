//! File formats, command-line front end and benchmarks for `dfl-core`.

pub mod assets;
pub mod bench;
pub mod cli;
pub mod exec;
pub mod io;
