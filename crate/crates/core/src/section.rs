//! Centralizers of sections: `C_L(K/H) = {x ∈ L : [x, k] ∈ H for all k ∈ K}`.
//!
//! Two methods. [`by_quotient_table`] walks a transversal of `H` in the
//! acting group and tests each representative against the generators of
//! `K`. [`layered`] refines `K` down to `H` through an `L`-central series
//! with elementary abelian layers and cuts `L` down one layer at a time by
//! linear algebra over `F_2`, so its cost does not grow with `|K : H|`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::portrait::Portrait;
use crate::subgroup::Subgroup;

fn check_section(l: &Subgroup, k: &Subgroup, h: &Subgroup) -> Result<()> {
    for g in [k, h] {
        if g.depth() != l.depth() {
            return Err(Error::DepthMismatch { left: l.depth().get(), right: g.depth().get() });
        }
        if g.node_order() != l.node_order() {
            return Err(Error::OrderMismatch);
        }
    }
    if !h.is_normal_in(k)? {
        return Err(Error::NotNormal("lower term of the section is not normal in the upper term"));
    }
    if !k.is_normalized_by(l)? || !h.is_normalized_by(l)? {
        return Err(Error::NotNormal("acting group does not normalize the section"));
    }
    Ok(())
}

/// Coordinates of `y ∈ upper` in the elementary abelian layer `upper/lower`,
/// indexed by the leading ranks of `upper` missing from `lower`.
fn layer_coordinates(y: &Portrait, upper: &Subgroup, lower: &Subgroup, fresh: &[u32]) -> Result<Vec<bool>> {
    let mut y = y.clone();
    let mut coords = alloc::vec![false; fresh.len()];
    for r in 0..upper.rank_count() as u32 {
        if y.is_identity() {
            break;
        }
        if !y.bit(upper.node_at_rank(r)) {
            continue;
        }
        if let Some(inv) = lower.inverse_at_rank(r) {
            y = inv * &y;
        } else if let Some(inv) = upper.inverse_at_rank(r) {
            let i = fresh.binary_search(&r).map_err(|_| Error::NotNormal("layer bookkeeping"))?;
            coords[i] = true;
            y = inv * &y;
        } else {
            return Err(Error::NotNormal("element escapes the upper term of a layer"));
        }
    }
    Ok(coords)
}

/// `C_L(K/H)` through an `L`-central series of `K` over `H`.
///
/// Requires `H ⊴ K` and both normalized by `L`.
pub fn layered(l: &Subgroup, k: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    check_section(l, k, h)?;
    let depth = l.depth();
    let order = l.node_order();
    let lgens: Vec<Portrait> = l.generators().cloned().collect();
    let kgens: Vec<Portrait> = k.generators().cloned().collect();
    let hgens: Vec<Portrait> = h.generators().cloned().collect();
    let mut conj = lgens.clone();
    conj.extend(kgens.iter().cloned());

    let mut series = alloc::vec![k.clone()];
    while series.last().map(Subgroup::order_log2) != Some(h.order_log2()) {
        let cur = series.last().expect("series is non-empty");
        let mut gens = hgens.clone();
        for a in cur.generators() {
            gens.push(a.square());
            for b in &conj {
                gens.push(a.commutator(b)?);
            }
        }
        let next = Subgroup::normal_closure(depth, order, &gens, &conj)?;
        if next.order_log2() >= cur.order_log2() {
            return Err(Error::NotNormal("central series stalled"));
        }
        series.push(next);
    }

    let mut c = l.clone();
    for w in series.windows(2) {
        let (upper, lower) = (&w[0], &w[1]);
        let low: Vec<u32> = lower.leading_ranks().collect();
        let fresh: Vec<u32> = upper.leading_ranks().filter(|r| low.binary_search(r).is_err()).collect();
        let cgens: Vec<Portrait> = c.generators().cloned().collect();
        // one row per generator of c: its commutators with the generators of k, in layer coordinates
        let width = fresh.len() * kgens.len();
        let mut rows: Vec<(Vec<u64>, Vec<u64>)> = Vec::with_capacity(cgens.len());
        let tag_words = cgens.len().div_ceil(64);
        for (i, x) in cgens.iter().enumerate() {
            let mut row = alloc::vec![0u64; width.div_ceil(64).max(1)];
            for (j, g) in kgens.iter().enumerate() {
                let co = layer_coordinates(&x.commutator(g)?, upper, lower, &fresh)?;
                for (t, bit) in co.into_iter().enumerate() {
                    if bit {
                        let pos = j * fresh.len() + t;
                        row[pos / 64] |= 1 << (pos % 64);
                    }
                }
            }
            let mut tag = alloc::vec![0u64; tag_words.max(1)];
            tag[i / 64] |= 1 << (i % 64);
            rows.push((row, tag));
        }
        let rank = eliminate(&mut rows, width);
        let mut kernel_gens: Vec<Portrait> = Vec::new();
        for (row, tag) in &rows {
            if row.iter().all(|&w| w == 0) {
                let mut x = Portrait::identity(depth);
                for (i, g) in cgens.iter().enumerate() {
                    if tag[i / 64] >> (i % 64) & 1 == 1 {
                        x = &x * g;
                    }
                }
                kernel_gens.push(x);
            }
        }
        for (i, a) in cgens.iter().enumerate() {
            kernel_gens.push(a.square());
            for b in &cgens[i + 1..] {
                kernel_gens.push(a.commutator(b)?);
            }
        }
        let next = Subgroup::normal_closure(depth, order, &kernel_gens, &cgens)?;
        if next.order_log2() + rank != c.order_log2() {
            return Err(Error::NotNormal("layer kernel has the wrong order"));
        }
        c = next;
    }
    Ok(c)
}

/// Gaussian elimination on `(row, tag)` pairs; returns the rank.
fn eliminate(rows: &mut [(Vec<u64>, Vec<u64>)], width: usize) -> u32 {
    let mut rank = 0usize;
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].0[w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.0[w] & b != 0 {
                for (x, y) in r.0.iter_mut().zip(&pivot.0) {
                    *x ^= *y;
                }
                for (x, y) in r.1.iter_mut().zip(&pivot.1) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank as u32
}

/// `C_L(K/H)` by enumerating a transversal of `H` in `L`.
///
/// Requires `H ≤ K ≤ L`, `H ⊴ K` and both normalized by `L`; the index
/// `|L : H|` must be at most `2^bound_log2`. With `L = K` this is the preimage
/// of the center of `K/H`.
pub fn by_quotient_table(l: &Subgroup, k: &Subgroup, h: &Subgroup, bound_log2: u32) -> Result<Subgroup> {
    check_section(l, k, h)?;
    if !h.is_subgroup_of(k)? || !k.is_subgroup_of(l)? {
        return Err(Error::NotNormal("section terms are not nested"));
    }
    let index = l.order_log2() - h.order_log2();
    if index > bound_log2 || index >= 64 {
        return Err(Error::QuotientTooLarge { log2_index: index, bound: bound_log2 });
    }
    let low: Vec<u32> = h.leading_ranks().collect();
    let transversal: Vec<Portrait> = l
        .leading_ranks()
        .filter(|r| low.binary_search(r).is_err())
        .map(|r| l.entry_at_rank(r).expect("leading rank has an entry").clone())
        .collect();
    // generators of k modulo h suffice
    let kgens: Vec<Portrait> = k.generators().filter(|g| !h.contains(g).unwrap_or(false)).cloned().collect();
    let mut out = h.clone();
    let m = transversal.len();
    let mut prefix = alloc::vec![Portrait::identity(l.depth()); m + 1];
    for c in 0u64..1 << m {
        if c > 0 {
            let from = m - 1 - c.trailing_zeros() as usize;
            for i in from..m {
                prefix[i + 1] =
                    if c >> (m - 1 - i) & 1 == 1 { &prefix[i] * &transversal[i] } else { prefix[i].clone() };
            }
        }
        let x = &prefix[m];
        if out.contains(x)? {
            continue;
        }
        let mut central = true;
        for g in &kgens {
            if !h.contains(&x.commutator(g)?)? {
                central = false;
                break;
            }
        }
        if central {
            out = out.extend(core::slice::from_ref(x))?;
        }
    }
    Ok(out)
}
