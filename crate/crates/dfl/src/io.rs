//! File loading: theories, literal lists, CSV tables and DIMACS files.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dfl_core::faers::Table;
use dfl_core::text::{describe_violations, parse_literal, parse_theory_with_spans};
use dfl_core::{Error, Literal, Theory};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses a theory, reporting violations with source positions.
pub fn parse_theory_text(text: &str, origin: &str) -> Result<Theory> {
    match parse_theory_with_spans(text) {
        Ok((t, _)) => Ok(t),
        Err(Error::Invalid(v)) => bail!("{origin}: invalid theory\n{}", describe_violations(text, &v).join("\n")),
        Err(e) => Err(anyhow!("{origin}: {e}")),
    }
}

pub fn read_theory(path: &Path) -> Result<Theory> {
    parse_theory_text(&read_text(path)?, &path.display().to_string())
}

/// Literals separated by newlines, commas or semicolons; `#` and `%` start comments.
pub fn parse_literal_list(text: &str) -> Result<BTreeSet<Literal>> {
    let mut out = BTreeSet::new();
    for line in text.lines() {
        let line = line.split(['#', '%']).next().unwrap_or("");
        for item in split_top_level(line) {
            let item = item.trim();
            if !item.is_empty() {
                out.insert(parse_literal(item).map_err(|e| anyhow!("literal `{item}`: {e}"))?);
            }
        }
    }
    Ok(out)
}

/// Splits on `,` and `;` outside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Reads one CSV file as a table named after the upper-cased file stem.
pub fn read_table(path: &Path, delimiter: u8) -> Result<Table> {
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("bad file name {}", path.display()))?
        .to_ascii_uppercase();
    let mut r = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(false)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let columns: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed row {}", path.display(), i + 1))?;
        rows.push(rec.iter().map(|c| c.trim().to_string()).collect());
    }
    Ok(Table::new(name, columns, rows)?)
}

/// Every `.csv` and `.txt` file in `dir`, in file name order.
pub fn read_tables(dir: &Path, delimiter: u8) -> Result<Vec<Table>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|x| x.to_str()), Some("csv" | "txt")))
        .collect();
    paths.sort();
    paths.iter().map(|p| read_table(p, delimiter)).collect()
}

pub fn write_tables(dir: &Path, tables: &[Table], delimiter: u8) -> Result<()> {
    fs::create_dir_all(dir)?;
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_path(&path)?;
        w.write_record(&t.columns)?;
        for r in &t.rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    Ok(())
}
