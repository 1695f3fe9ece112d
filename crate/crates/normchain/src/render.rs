//! Plain-text tables.
//!
//! The cell with `k = n - 2` is the last one the partition sums predict;
//! it is marked with brackets.

use std::fmt::Write;

use normchain_core::chain::ChainRecord;
use normchain_core::imprimitivity::ImprimitivityTree;
use normchain_core::sequences::{build_tables, PartitionTables};

fn on_diagonal(n: u32, k: u32) -> bool {
    k + 2 == n || (n < 2 && k == 0)
}

fn cell(r: &ChainRecord, k: u32) -> String {
    match r.entries.get(k as usize) {
        Some(e) if on_diagonal(r.n, k) => format!("[{}]", e.log2_order),
        Some(e) => e.log2_order.to_string(),
        None => "-".to_string(),
    }
}

/// One column: order, index over the previous step, predicted index and verdict per row.
pub fn column(r: &ChainRecord) -> String {
    let mut out = String::new();
    writeln!(out, "n = {}  (base depth {})", r.n, r.base_depth).unwrap();
    writeln!(out, "{:>3}  {:>8}  {:>6}  {:>8}  check", "k", "log2|N|", "+idx", "a_(k+2)").unwrap();
    for e in &r.entries {
        let idx = e.log2_index.map_or("-".into(), |i| format!("+{i}"));
        let a = e.a_k_plus_2.map_or("-".into(), |a| format!("+{a}"));
        let check = match e.matches() {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None if e.k >= 1 => "no prediction",
            None => "",
        };
        writeln!(out, "{:>3}  {:>8}  {:>6}  {:>8}  {}", e.k, cell(r, e.k), idx, a, check).unwrap();
    }
    match r.d {
        Some(d) => writeln!(out, "stabilizes at d = {d}").unwrap(),
        None => writeln!(out, "not stabilized within the computed steps").unwrap(),
    }
    for note in &r.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

/// Columns side by side, one row per `k`, plus the predicted index column.
pub fn table(records: &[ChainRecord], k_max: u32) -> String {
    let tables = build_tables(k_max as usize + 2);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut head = vec!["n".to_string()];
    head.extend(records.iter().map(|r| r.n.to_string()));
    head.push(String::new());
    rows.push(head);
    for k in 0..=k_max {
        let label = if k == 0 { "log2|U_n|".to_string() } else { format!("log2|N^{k}_n|") };
        let mut row = vec![label];
        row.extend(records.iter().map(|r| cell(r, k)));
        row.push(if k == 0 { String::new() } else { plus(&tables, k) });
        rows.push(row);
    }
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let mut line = format!("{:<w$}", row[0], w = widths[0]);
        for c in 1..cols {
            let sep = if c == 1 || c == cols - 1 { " || " } else { " | " };
            write!(line, "{sep}{:>w$}", row[c], w = widths[c]).unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
        if i == 0 {
            writeln!(out, "{}", "=".repeat(line.trim_end().len())).unwrap();
        }
    }
    for r in records.iter().filter(|r| !r.notes.is_empty()) {
        for note in &r.notes {
            writeln!(out, "note n={}: {note}", r.n).unwrap();
        }
    }
    out
}

fn plus(t: &PartitionTables, k: u32) -> String {
    t.a(k as usize + 2).map_or("-".into(), |a| format!("+{a}"))
}

/// `j  b_j  a_j` rows.
pub fn sequences(t: &PartitionTables) -> String {
    let mut out = String::new();
    writeln!(out, "{:>4}  {:>12}  {:>12}", "j", "b_j", "a_j").unwrap();
    for (j, b, a) in t.rows() {
        writeln!(out, "{j:>4}  {b:>12}  {a:>12}").unwrap();
    }
    out
}

/// Graphviz rendering with vertices in level order.
pub fn tree_dot(tree: &ImprimitivityTree, n: u32) -> String {
    let mut out = format!("digraph imprimitivity_{n} {{\n");
    for (i, v) in tree.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\"];", v.label()).unwrap();
    }
    for (a, b) in &tree.edges {
        writeln!(out, "  v{a} -> v{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Indented outline of the same tree.
pub fn tree_outline(tree: &ImprimitivityTree) -> String {
    let mut out = String::new();
    for v in &tree.vertices {
        writeln!(out, "{}{}", "  ".repeat(v.level as usize), v.label()).unwrap();
    }
    out
}
