//! JSON and CSV forms of chain records and partition tables.

use anyhow::{bail, Context, Result};
use normchain_core::chain::{ChainEntry, ChainRecord};
use normchain_core::sequences::{build_tables, compare_cell, PartitionTables};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EntryJson {
    pub k: u32,
    pub log2_order: u32,
    pub log2_index: Option<u32>,
    pub a_k_plus_2: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

/// Field order here is the wire order.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RecordJson {
    pub n: u32,
    pub base_depth: u32,
    pub entries: Vec<EntryJson>,
    pub d: Option<u32>,
    pub notes: Vec<String>,
}

impl From<&ChainRecord> for RecordJson {
    fn from(r: &ChainRecord) -> Self {
        RecordJson {
            n: r.n,
            base_depth: r.base_depth,
            entries: r
                .entries
                .iter()
                .map(|e| EntryJson {
                    k: e.k,
                    log2_order: e.log2_order,
                    log2_index: e.log2_index,
                    a_k_plus_2: e.a_k_plus_2.map(|a| a as u64),
                    matches: e.matches(),
                })
                .collect(),
            d: r.d,
            notes: r.notes.clone(),
        }
    }
}

impl RecordJson {
    /// Rebuilds the record, recomputing the verdicts and checking them against the stored flags.
    pub fn into_record(self) -> Result<ChainRecord> {
        let tables = build_tables(self.entries.len() + 2);
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            let verdict = compare_cell(self.n, e.k, e.log2_index.map(u64::from), &tables);
            let entry = ChainEntry {
                k: e.k,
                log2_order: e.log2_order,
                log2_index: e.log2_index,
                a_k_plus_2: e.a_k_plus_2.map(u128::from),
                verdict,
            };
            if entry.matches() != e.matches {
                bail!("stored match flag for k={} disagrees with the recomputed verdict", e.k);
            }
            entries.push(entry);
        }
        Ok(ChainRecord { n: self.n, base_depth: self.base_depth, entries, d: self.d, notes: self.notes })
    }
}

pub fn to_json(r: &ChainRecord) -> String {
    serde_json::to_string_pretty(&RecordJson::from(r)).expect("plain data serializes")
}

pub fn many_to_json(rs: &[ChainRecord]) -> String {
    let v: Vec<RecordJson> = rs.iter().map(RecordJson::from).collect();
    serde_json::to_string_pretty(&v).expect("plain data serializes")
}

pub fn from_json(s: &str) -> Result<ChainRecord> {
    let j: RecordJson = serde_json::from_str(s).context("malformed chain record")?;
    j.into_record()
}

#[derive(Serialize)]
struct CsvRow {
    n: u32,
    k: u32,
    log2_order: u32,
    log2_index: Option<u32>,
    a_k_plus_2: Option<u64>,
    #[serde(rename = "match")]
    matches: Option<bool>,
}

pub fn to_csv(rs: &[ChainRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rs {
        for e in &r.entries {
            w.serialize(CsvRow {
                n: r.n,
                k: e.k,
                log2_order: e.log2_order,
                log2_index: e.log2_index,
                a_k_plus_2: e.a_k_plus_2.map(|a| a as u64),
                matches: e.matches(),
            })?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct SeqRow {
    j: usize,
    b_j: String,
    a_j: String,
}

fn seq_rows(t: &PartitionTables) -> impl Iterator<Item = SeqRow> + '_ {
    // u128 values go out as decimal strings in CSV and as numbers in JSON
    t.rows().map(|(j, b, a)| SeqRow { j, b_j: b.to_string(), a_j: a.to_string() })
}

pub fn seq_csv(t: &PartitionTables) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in seq_rows(t) {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn seq_json(t: &PartitionTables) -> String {
    let rows: Vec<serde_json::Value> = seq_rows(t)
        .map(|r| {
            let num = |s: &str| serde_json::Value::Number(s.parse().expect("decimal digits"));
            serde_json::json!({ "j": r.j, "b_j": num(&r.b_j), "a_j": num(&r.a_j) })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("plain data serializes")
}
