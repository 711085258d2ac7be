//! JSON form of cohomology tables:
//! `{"n": 2, "d": 1, "entries": [{"i": 0, "p": 0, "h": 1}, ...]}`.
//! Entries not listed are zero.

use serde::Deserialize;
use serde_json::{json, Value};

use sheafmonad::CohTable;

use crate::format::ParseError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    i: i64,
    p: usize,
    h: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Table {
    n: usize,
    d: usize,
    entries: Vec<Entry>,
}

pub fn parse_table(text: &str) -> Result<CohTable, ParseError> {
    let t: Table = serde_json::from_str(text).map_err(|e| ParseError { line: e.line(), message: e.to_string() })?;
    CohTable::new(t.n, t.d, t.entries.into_iter().map(|e| (e.i, e.p, e.h)))
        .map_err(|e| ParseError { line: 1, message: e.to_string() })
}

/// Non-zero entries only, sorted by `(i, p)`.
pub fn table_json(t: &CohTable) -> Value {
    let entries: Vec<Value> = t.nonzero().map(|(i, p, h)| json!({ "i": i, "p": p, "h": h })).collect();
    json!({ "n": t.ambient(), "d": t.support_dim(), "entries": entries })
}
