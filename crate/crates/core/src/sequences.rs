//! Partitions into at least two distinct parts (`b_j`) and their partial sums (`a_j`).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest `j` accepted by [`build_tables`]; the counts stay far inside `u128`.
pub const MAX_TABLE_J: usize = 1000;
/// Largest `j` accepted by [`brute_force_b`].
pub const MAX_BRUTE_J: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTables {
    b: Vec<u128>,
    a: Vec<u128>,
}

impl PartitionTables {
    pub fn max_j(&self) -> usize {
        self.b.len()
    }

    /// `b_j` for `1 <= j <= max_j`.
    pub fn b(&self, j: usize) -> Option<u128> {
        j.checked_sub(1).and_then(|i| self.b.get(i)).copied()
    }

    /// `a_j` for `1 <= j <= max_j`.
    pub fn a(&self, j: usize) -> Option<u128> {
        j.checked_sub(1).and_then(|i| self.a.get(i)).copied()
    }

    /// `(j, b_j, a_j)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, u128, u128)> + '_ {
        self.b.iter().zip(&self.a).enumerate().map(|(i, (&b, &a))| (i + 1, b, a))
    }
}

/// Tables for `1 <= j <= max_j`.
///
/// Panics if `max_j` is zero or above [`MAX_TABLE_J`].
pub fn build_tables(max_j: usize) -> PartitionTables {
    assert!((1..=MAX_TABLE_J).contains(&max_j), "max_j must lie in 1..={MAX_TABLE_J}");
    // q[s] = partitions of s into distinct parts, 0/1 knapsack over parts
    let mut q = vec![0u128; max_j + 1];
    q[0] = 1;
    for part in 1..=max_j {
        for s in (part..=max_j).rev() {
            q[s] += q[s - part];
        }
    }
    let b: Vec<u128> = (1..=max_j).map(|j| q[j] - 1).collect();
    let a = b
        .iter()
        .scan(0u128, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    PartitionTables { b, a }
}

/// `b_j` by listing every strictly decreasing sequence of at least two parts.
pub fn brute_force_b(j: u32) -> Result<u64> {
    if j > MAX_BRUTE_J {
        return Err(Error::TooLarge { log2_order: j, bound: MAX_BRUTE_J });
    }
    fn count(rest: u32, below: u32, parts: u32) -> u64 {
        if rest == 0 {
            return u64::from(parts >= 2);
        }
        (1..below.min(rest + 1)).map(|p| count(rest - p, p, parts + 1)).sum()
    }
    Ok(count(j, j + 1, 0))
}

/// Outcome of comparing one chain cell with the partition sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellVerdict {
    Match,
    Mismatch,
    /// `k > n - 2`: outside the range where a value is predicted.
    BelowDiagonal,
    /// `k = 0` or the index is unknown.
    NoPrediction,
}

/// Compares `log2 |N^k : N^(k-1)|` with `a_{k+2}`.
pub fn compare_cell(n: u32, k: u32, log2_index: Option<u64>, tables: &PartitionTables) -> CellVerdict {
    let (Some(idx), true) = (log2_index, k >= 1) else {
        return CellVerdict::NoPrediction;
    };
    if k + 2 > n {
        return CellVerdict::BelowDiagonal;
    }
    match tables.a(k as usize + 2) {
        Some(a) if a == u128::from(idx) => CellVerdict::Match,
        Some(_) => CellVerdict::Mismatch,
        None => CellVerdict::NoPrediction,
    }
}
