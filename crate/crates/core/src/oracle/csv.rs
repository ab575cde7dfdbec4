//! Tournament files.
//!
//! ```text
//! item_a,item_b,outcome
//! lions,tigers,+
//! lions,bears,-1
//! ```
//!
//! One row per unordered pair. Under `+` (or `1`) the first item won; under
//! `-` (or `-1`) the second did. Items are arbitrary strings, indexed in
//! order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::Result;
use crate::ranking::{QueryTable, Tournament};

pub const HEADER: [&str; 3] = ["item_a", "item_b", "outcome"];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: expected header `item_a,item_b,outcome`, found `{found}`")]
    BadHeader { line: u64, found: String },

    #[error("line {line}: malformed row: {reason}")]
    Malformed { line: u64, reason: String },

    #[error("line {line}: item `{item}` is compared with itself")]
    SelfComparison { line: u64, item: String },

    #[error("line {line}: outcome for ({a}, {b}) contradicts line {first_line}")]
    Contradiction {
        line: u64,
        first_line: u64,
        a: String,
        b: String,
    },

    #[error("incomplete tournament: no outcome for pair ({a}, {b})")]
    MissingPair { a: String, b: String },

    #[error("csv: {0}")]
    Read(#[from] csv::Error),
}

/// A complete tournament together with the names of its items.
#[derive(Clone, Debug)]
pub struct NamedTournament {
    pub names: Vec<String>,
    pub table: QueryTable,
}

pub fn load_tournament_csv(path: impl AsRef<Path>) -> Result<NamedTournament> {
    let file = File::open(path)?;
    Ok(read_tournament_csv(file)?)
}

fn parse_outcome(s: &str) -> Option<i8> {
    match s {
        "+" | "1" | "+1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

pub fn read_tournament_csv<R: Read>(reader: R) -> std::result::Result<NamedTournament, CsvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    // (lo, hi) -> (q(a_hi, a_lo), line)
    let mut seen: HashMap<(usize, usize), (i8, u64)> = HashMap::new();
    let mut header_done = false;

    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_done {
            let fields: Vec<&str> = record.iter().collect();
            if fields != HEADER {
                return Err(CsvError::BadHeader {
                    line,
                    found: fields.join(","),
                });
            }
            header_done = true;
            continue;
        }
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != 3 {
            return Err(CsvError::Malformed {
                line,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let (a, b, outcome) = (&record[0], &record[1], &record[2]);
        if a.is_empty() || b.is_empty() {
            return Err(CsvError::Malformed {
                line,
                reason: "empty item name".into(),
            });
        }
        let sign = parse_outcome(outcome).ok_or_else(|| CsvError::Malformed {
            line,
            reason: format!("outcome `{outcome}` is not one of +, -, 1, -1"),
        })?;
        if a == b {
            return Err(CsvError::SelfComparison {
                line,
                item: a.to_string(),
            });
        }
        let mut intern = |name: &str| -> usize {
            if let Some(&i) = index.get(name) {
                return i;
            }
            names.push(name.to_string());
            index.insert(name.to_string(), names.len() - 1);
            names.len() - 1
        };
        let ia = intern(a);
        let ib = intern(b);
        let (lo, hi, hi_sign) = if ia < ib {
            (ia, ib, -sign)
        } else {
            (ib, ia, sign)
        };
        match seen.get(&(lo, hi)) {
            Some(&(prev, first_line)) if prev != hi_sign => {
                return Err(CsvError::Contradiction {
                    line,
                    first_line,
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
            Some(_) => {}
            None => {
                seen.insert((lo, hi), (hi_sign, line));
            }
        }
    }
    if !header_done {
        return Err(CsvError::BadHeader {
            line: 1,
            found: String::new(),
        });
    }

    let n = names.len();
    for hi in 1..n {
        for lo in 0..hi {
            if !seen.contains_key(&(lo, hi)) {
                return Err(CsvError::MissingPair {
                    a: names[lo].clone(),
                    b: names[hi].clone(),
                });
            }
        }
    }
    let table = QueryTable::from_fn(n, |hi, lo| seen[&(lo, hi)].0 > 0);
    Ok(NamedTournament { names, table })
}

/// Writes one row per pair `(a_i, a_j)`, `i < j`, in index order.
pub fn write_tournament_csv<W: Write, T: Tournament + ?Sized>(
    writer: W,
    t: &T,
    names: &[String],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER).map_err(CsvError::from)?;
    for i in 0..t.len() {
        for j in (i + 1)..t.len() {
            let outcome = if t.beats(i, j) { "+" } else { "-" };
            w.write_record([names[i].as_str(), names[j].as_str(), outcome])
                .map_err(CsvError::from)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `"1"`, `"2"`, ... for generated instances.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}
