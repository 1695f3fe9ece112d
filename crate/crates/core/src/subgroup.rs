//! Subgroups of `Σ_n` as echelonized generating sequences.
//!
//! Nodes are ranked by a pre-order traversal ([`NodeOrder`]). Since every
//! ancestor precedes its descendants, the portraits vanishing on the first
//! `j` ranks form a subgroup `G_j`, and `G_{j+1}` has index 2 in `G_j`.
//! A subgroup is stored as at most one entry per rank, each entry having
//! that rank as its leading (first set) rank. Membership is decided by
//! sifting, the order is `2^(number of entries)`, and the normal words
//! `e_{r1} e_{r2} ...` over ascending ranks enumerate the group exactly once.
//!
//! After construction the entries are reduced: each entry vanishes on the
//! leading ranks of all later entries. The reduced sequence is unique to the
//! group, so equality, ordering and hashing compare entries directly.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::portrait::{Depth, Portrait};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeOrder {
    /// Pre-order visiting the left subtree first.
    LeftFirst,
    /// Pre-order visiting the right subtree first.
    RightFirst,
}

impl NodeOrder {
    pub fn opposite(self) -> NodeOrder {
        match self {
            NodeOrder::LeftFirst => NodeOrder::RightFirst,
            NodeOrder::RightFirst => NodeOrder::LeftFirst,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            NodeOrder::LeftFirst => "LeftFirst",
            NodeOrder::RightFirst => "RightFirst",
        }
    }

    pub fn from_tag(s: &str) -> Option<NodeOrder> {
        match s {
            "LeftFirst" => Some(NodeOrder::LeftFirst),
            "RightFirst" => Some(NodeOrder::RightFirst),
            _ => None,
        }
    }
}

/// Heap node of each 0-based rank.
pub fn rank_table(depth: Depth, order: NodeOrder) -> Vec<u16> {
    let half = depth.degree() / 2;
    let mut out = Vec::with_capacity(depth.node_count());
    let mut stack = Vec::new();
    if depth.get() > 0 {
        stack.push(1usize);
    }
    while let Some(v) = stack.pop() {
        out.push(v as u16);
        if v < half {
            match order {
                NodeOrder::LeftFirst => {
                    stack.push(2 * v + 1);
                    stack.push(2 * v);
                }
                NodeOrder::RightFirst => {
                    stack.push(2 * v);
                    stack.push(2 * v + 1);
                }
            }
        }
    }
    out
}

const NONE: u32 = u32::MAX;
const SAMPLE_SEED: u64 = 0x05ee_d0f2_c4a1;
const MAX_MISSES: u32 = 96;

#[derive(Clone)]
struct Entry {
    rank: u32,
    elem: Portrait,
    inv: Portrait,
}

#[derive(Clone)]
pub struct Subgroup {
    depth: Depth,
    order: NodeOrder,
    ranks: Arc<[u16]>,
    slots: Vec<u32>,
    entries: Vec<Entry>,
}

impl Subgroup {
    pub fn trivial(depth: Depth, order: NodeOrder) -> Subgroup {
        let ranks: Arc<[u16]> = rank_table(depth, order).into();
        Subgroup { depth, order, slots: alloc::vec![NONE; ranks.len()], ranks, entries: Vec::new() }
    }

    /// The group generated by `gens`.
    pub fn generate(depth: Depth, order: NodeOrder, gens: &[Portrait]) -> Result<Subgroup> {
        Subgroup::normal_closure(depth, order, gens, &[])
    }

    /// The smallest subgroup containing `gens` and normalized by `conjugators`.
    pub fn normal_closure(
        depth: Depth,
        order: NodeOrder,
        gens: &[Portrait],
        conjugators: &[Portrait],
    ) -> Result<Subgroup> {
        let mut s = Subgroup::trivial(depth, order);
        s.absorb(gens.iter().cloned(), conjugators)?;
        Ok(s)
    }

    /// The portraits supported on the kept nodes, which must form a group.
    ///
    /// Used for `Σ_n` (all nodes) and `Q_n` (all but the root): each unit
    /// portrait is its own leading entry and the set of them is already
    /// reduced.
    pub(crate) fn from_unit_nodes(depth: Depth, order: NodeOrder, keep: impl Fn(usize) -> bool) -> Subgroup {
        let mut s = Subgroup::trivial(depth, order);
        for r in 0..s.ranks.len() {
            let v = s.ranks[r] as usize;
            if keep(v) {
                let p = Portrait::from_nodes(depth, [v]);
                s.slots[r] = s.entries.len() as u32;
                s.entries.push(Entry { rank: r as u32, inv: p.clone(), elem: p });
            }
        }
        s
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn node_order(&self) -> NodeOrder {
        self.order
    }

    /// `log2` of the group order.
    pub fn order_log2(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending rank order.
    pub fn generators(&self) -> impl ExactSizeIterator<Item = &Portrait> + '_ {
        self.entries.iter().map(|e| &e.elem)
    }

    pub fn leading_ranks(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.rank)
    }

    /// Heap node sitting at a 0-based rank.
    pub fn node_at_rank(&self, rank: u32) -> usize {
        self.ranks[rank as usize] as usize
    }

    pub fn entry_at_rank(&self, rank: u32) -> Option<&Portrait> {
        match self.slots.get(rank as usize) {
            Some(&i) if i != NONE => Some(&self.entries[i as usize].elem),
            _ => None,
        }
    }

    pub(crate) fn rank_count(&self) -> usize {
        self.ranks.len()
    }

    pub(crate) fn inverse_at_rank(&self, rank: u32) -> Option<&Portrait> {
        match self.slots.get(rank as usize) {
            Some(&i) if i != NONE => Some(&self.entries[i as usize].inv),
            _ => None,
        }
    }

    /// The elements vanishing on all ranks below `rank`: the entries from `rank` on.
    pub fn from_rank(&self, rank: u32) -> Subgroup {
        let mut s = self.clone();
        s.entries.retain(|e| e.rank >= rank);
        for x in s.slots.iter_mut() {
            *x = NONE;
        }
        for (i, e) in s.entries.iter().enumerate() {
            s.slots[e.rank as usize] = i as u32;
        }
        s
    }

    fn check(&self, g: &Portrait) -> Result<()> {
        if g.depth() != self.depth {
            return Err(Error::DepthMismatch { left: self.depth.get(), right: g.depth().get() });
        }
        Ok(())
    }

    fn check_group(&self, other: &Subgroup) -> Result<()> {
        if other.depth != self.depth {
            return Err(Error::DepthMismatch { left: self.depth.get(), right: other.depth.get() });
        }
        Ok(())
    }

    /// Sifts until the first rank without an entry; returns the residue and that rank.
    fn sift_raw(&self, g: &Portrait) -> (Portrait, Option<u32>) {
        let mut g = g.clone();
        if g.is_identity() {
            return (g, None);
        }
        for r in 0..self.ranks.len() {
            if g.bit(self.ranks[r] as usize) {
                match self.slots[r] {
                    NONE => return (g, Some(r as u32)),
                    i => {
                        g = self.entries[i as usize].inv.mul_unchecked(&g);
                        if g.is_identity() {
                            return (g, None);
                        }
                    }
                }
            }
        }
        (g, None)
    }

    /// The sifting residue: identity exactly when `g` is a member.
    pub fn sift(&self, g: &Portrait) -> Result<Portrait> {
        self.check(g)?;
        Ok(self.sift_raw(g).0)
    }

    pub fn contains(&self, g: &Portrait) -> Result<bool> {
        self.check(g)?;
        Ok(self.sift_raw(g).1.is_none())
    }

    /// Canonical representative of the right coset `self * g`: the unique
    /// element of the coset vanishing on every leading rank of `self`.
    pub fn reduce(&self, g: &Portrait) -> Result<Portrait> {
        self.check(g)?;
        Ok(self.reduce_raw(g.clone()))
    }

    fn reduce_raw(&self, mut g: Portrait) -> Portrait {
        for e in &self.entries {
            if g.bit(self.ranks[e.rank as usize] as usize) {
                g = e.inv.mul_unchecked(&g);
            }
        }
        g
    }

    /// Inserts the residue of `g` without closing; returns whether the table grew.
    fn insert_residue(&mut self, g: &Portrait) -> bool {
        let (res, rank) = self.sift_raw(g);
        match rank {
            None => false,
            Some(r) => {
                self.push_entry(r, res);
                true
            }
        }
    }

    fn push_entry(&mut self, r: u32, elem: Portrait) {
        self.slots[r as usize] = self.entries.len() as u32;
        let inv = elem.inverse();
        self.entries.push(Entry { rank: r, elem, inv });
    }

    /// Worklist closure. Squares and commutators of each new residue with
    /// the existing entries (and its conjugates under `conjugators`) are fed
    /// back until everything sifts through.
    fn absorb(&mut self, gens: impl IntoIterator<Item = Portrait>, conjugators: &[Portrait]) -> Result<()> {
        let conj: Vec<(Portrait, Portrait)> = conjugators
            .iter()
            .map(|c| {
                self.check(c)?;
                Ok((c.inverse(), c.clone()))
            })
            .collect::<Result<_>>()?;
        let mut queue: VecDeque<Portrait> = VecDeque::new();
        for g in gens {
            self.check(&g)?;
            queue.push_back(g);
        }
        while let Some(g) = queue.pop_front() {
            let (res, rank) = self.sift_raw(&g);
            let Some(r) = rank else { continue };
            let inv = res.inverse();
            queue.push_back(res.square());
            for e in &self.entries {
                queue.push_back(inv.mul_unchecked(&e.inv).mul_unchecked(&res.mul_unchecked(&e.elem)));
            }
            for (ci, c) in &conj {
                queue.push_back(ci.mul_unchecked(&res).mul_unchecked(c));
            }
            self.slots[r as usize] = self.entries.len() as u32;
            self.entries.push(Entry { rank: r, elem: res, inv });
        }
        self.canonicalize();
        Ok(())
    }

    /// Sorts entries by rank and reduces each against the later ones.
    fn canonicalize(&mut self) {
        self.entries.sort_by_key(|e| e.rank);
        for i in (0..self.entries.len()).rev() {
            let mut x = self.entries[i].elem.clone();
            let mut changed = false;
            for j in i + 1..self.entries.len() {
                let node = self.ranks[self.entries[j].rank as usize] as usize;
                if x.bit(node) {
                    x = self.entries[j].inv.mul_unchecked(&x);
                    changed = true;
                }
            }
            if changed {
                self.entries[i].inv = x.inverse();
                self.entries[i].elem = x;
            }
        }
        for s in self.slots.iter_mut() {
            *s = NONE;
        }
        for (i, e) in self.entries.iter().enumerate() {
            self.slots[e.rank as usize] = i as u32;
        }
    }

    /// `<self, gens>`.
    pub fn extend(&self, gens: &[Portrait]) -> Result<Subgroup> {
        let mut s = self.clone();
        s.absorb(gens.iter().cloned(), &[])?;
        Ok(s)
    }

    /// `<self, other>`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_group(other)?;
        let gens: Vec<Portrait> = other.generators().cloned().collect();
        self.extend(&gens)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        self.check_group(other)?;
        if self.order_log2() > other.order_log2() {
            return Ok(false);
        }
        Ok(self.generators().all(|g| other.sift_raw(g).1.is_none()))
    }

    /// Equality as sets, regardless of node order.
    pub fn same_group(&self, other: &Subgroup) -> Result<bool> {
        Ok(self.order_log2() == other.order_log2() && self.is_subgroup_of(other)?)
    }

    /// `g^-1 self g`.
    pub fn conjugate(&self, g: &Portrait) -> Result<Subgroup> {
        self.check(g)?;
        let gi = g.inverse();
        let conj: Vec<Portrait> = self.generators().map(|x| gi.mul_unchecked(x).mul_unchecked(g)).collect();
        let target = self.order_log2();
        let mut s = Subgroup::trivial(self.depth, self.order);
        for c in &conj {
            s.insert_residue(c);
        }
        if s.order_log2() == target {
            s.canonicalize();
            return Ok(s);
        }
        let s = self.sample_known_order(self.order, target, |rng| {
            let x = self.random_element(rng);
            gi.mul_unchecked(&x).mul_unchecked(g)
        });
        match s {
            Some(s) => Ok(s),
            None => Subgroup::generate(self.depth, self.order, &conj),
        }
    }

    /// Whether every generator of `g` conjugates `self` into itself.
    pub fn is_normalized_by(&self, g: &Subgroup) -> Result<bool> {
        self.check_group(g)?;
        for c in g.generators() {
            if !self.is_normalized_by_element(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_normalized_by_element(&self, c: &Portrait) -> Result<bool> {
        self.check(c)?;
        let ci = c.inverse();
        Ok(self.generators().all(|x| self.sift_raw(&ci.mul_unchecked(x).mul_unchecked(c)).1.is_none()))
    }

    /// `self ⊴ g`.
    pub fn is_normal_in(&self, g: &Subgroup) -> Result<bool> {
        Ok(self.is_subgroup_of(g)? && self.is_normalized_by(g)?)
    }

    pub fn centralizes_element(&self, c: &Portrait) -> bool {
        self.generators().all(|x| x * c == c * x)
    }

    pub fn is_abelian(&self) -> bool {
        let gens: Vec<&Portrait> = self.generators().collect();
        gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| *a * *b == *b * *a))
    }

    /// Uniformly random element: a normal word with random exponents.
    pub fn random_element<R: RngCore>(&self, rng: &mut R) -> Portrait {
        let mut x = Portrait::identity(self.depth);
        let mut bits = 0u64;
        for (i, e) in self.entries.iter().enumerate() {
            if i % 64 == 0 {
                bits = rng.next_u64();
            }
            if bits >> (i % 64) & 1 == 1 {
                x = x.mul_unchecked(&e.elem);
            }
        }
        x
    }

    /// Builds the subgroup of known order `2^target` from uniform samples.
    ///
    /// Every sample must lie in the target group. Returns `None` if the
    /// target was not reached within the miss budget.
    fn sample_known_order(
        &self,
        order: NodeOrder,
        target: u32,
        sample: impl FnMut(&mut ChaCha8Rng) -> Portrait,
    ) -> Option<Subgroup> {
        Subgroup::from_samples(self.depth, order, target, sample)
    }

    /// Builds a subgroup of known order `2^target` from a sampler that draws
    /// uniformly from it. Distinct normal words are distinct elements, so the
    /// table can never outgrow the sampled group; reaching `target` entries
    /// therefore pins the group down exactly.
    pub fn from_samples(
        depth: Depth,
        order: NodeOrder,
        target: u32,
        mut sample: impl FnMut(&mut ChaCha8Rng) -> Portrait,
    ) -> Option<Subgroup> {
        let mut s = Subgroup::trivial(depth, order);
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ u64::from(target) << 32 ^ u64::from(depth.get()));
        let mut misses = 0;
        while s.order_log2() < target {
            let g = sample(&mut rng);
            if g.depth() != depth {
                return None;
            }
            if s.insert_residue(&g) {
                misses = 0;
            } else {
                misses += 1;
                if misses > MAX_MISSES {
                    return None;
                }
            }
        }
        s.canonicalize();
        Some(s)
    }

    /// The same group echelonized under another node order.
    pub fn with_order(&self, order: NodeOrder) -> Subgroup {
        if order == self.order {
            return self.clone();
        }
        let target = self.order_log2();
        match self.sample_known_order(order, target, |rng| self.random_element(rng)) {
            Some(s) => s,
            None => {
                let gens: Vec<Portrait> = self.generators().cloned().collect();
                Subgroup::generate(self.depth, order, &gens).expect("depths agree")
            }
        }
    }

    /// All elements, each exactly once, as normal words in rank order.
    pub fn elements(&self, bound_log2: u32) -> Result<Elements<'_>> {
        if self.order_log2() > bound_log2 || self.order_log2() >= 64 {
            return Err(Error::TooLarge { log2_order: self.order_log2(), bound: bound_log2 });
        }
        let m = self.entries.len();
        Ok(Elements {
            group: self,
            prefix: alloc::vec![Portrait::identity(self.depth); m + 1],
            counter: 0,
            end: 1u64 << m,
        })
    }

    /// Canonical key bytes: depth, order tag and the hex of each entry.
    pub fn key(&self) -> GroupKey {
        GroupKey { depth: self.depth, order: self.order, entries: self.generators().cloned().collect() }
    }
}

impl Subgroup {
    /// Text form: a `IGS1 <order> <depth>` header, then one hex portrait per entry.
    pub fn to_igs1(&self) -> String {
        let mut out = alloc::format!("IGS1 {} {}\n", self.order.tag(), self.depth.get());
        for g in self.generators() {
            out.push_str(&g.to_hex());
            out.push('\n');
        }
        out
    }

    /// Parses [`Subgroup::to_igs1`] output. Any generating list is accepted;
    /// the result is re-echelonized.
    pub fn from_igs1(text: &str) -> Result<Subgroup> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(Error::Parse { position: 0, message: "missing IGS1 header" })?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("IGS1") {
            return Err(Error::Parse { position: 0, message: "missing IGS1 header" });
        }
        let order = fields
            .next()
            .and_then(NodeOrder::from_tag)
            .ok_or(Error::Parse { position: 5, message: "unknown node order" })?;
        let depth = fields
            .next()
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or(Error::Parse { position: header.len(), message: "bad depth" })?;
        let depth = Depth::new(depth)?;
        let gens = lines.map(Portrait::from_hex).collect::<Result<Vec<_>>>()?;
        Subgroup::generate(depth, order, &gens)
    }
}

/// Hashable, ordered identity of a reduced subgroup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupKey {
    depth: Depth,
    order: NodeOrder,
    entries: Vec<Portrait>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.depth == other.depth
            && self.order == other.order
            && self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.elem == b.elem)
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth, self.order)
            .cmp(&(other.depth, other.order))
            .then_with(|| self.generators().cmp(other.generators()))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("depth", &self.depth.get())
            .field("order", &self.order)
            .field("log2_order", &self.order_log2())
            .field("entries", &self.entries.iter().map(|e| &e.elem).collect::<Vec<_>>())
            .finish()
    }
}

pub struct Elements<'a> {
    group: &'a Subgroup,
    prefix: Vec<Portrait>,
    counter: u64,
    end: u64,
}

impl Iterator for Elements<'_> {
    type Item = Portrait;

    fn next(&mut self) -> Option<Portrait> {
        if self.counter >= self.end {
            return None;
        }
        let m = self.group.entries.len();
        let c = self.counter;
        if c > 0 {
            // entry i is selected by bit m-1-i; only entries past the highest flipped bit change
            let from = m - 1 - c.trailing_zeros() as usize;
            for i in from..m {
                self.prefix[i + 1] = if c >> (m - 1 - i) & 1 == 1 {
                    self.prefix[i].mul_unchecked(&self.group.entries[i].elem)
                } else {
                    self.prefix[i].clone()
                };
            }
        }
        self.counter += 1;
        Some(self.prefix[m].clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.counter) as usize;
        (left, Some(left))
    }
}

/// `C_G(H)` by testing every element of `G`.
pub fn centralizer_by_enumeration(g: &Subgroup, h: &Subgroup, bound_log2: u32) -> Result<Subgroup> {
    g.check_group(h)?;
    let mut out = Subgroup::trivial(g.depth, g.order);
    for x in g.elements(bound_log2)? {
        if out.sift_raw(&x).1.is_none() {
            continue;
        }
        if h.centralizes_element(&x) {
            out.absorb([x], &[])?;
        }
    }
    Ok(out)
}

/// `N_G(H)` by testing every element of `G`.
pub fn normalizer_by_enumeration(g: &Subgroup, h: &Subgroup, bound_log2: u32) -> Result<Subgroup> {
    g.check_group(h)?;
    let mut out = Subgroup::trivial(g.depth, g.order);
    for x in g.elements(bound_log2)? {
        if out.sift_raw(&x).1.is_none() {
            continue;
        }
        if h.is_normalized_by_element(&x)? {
            out.absorb([x], &[])?;
        }
    }
    Ok(out)
}

/// `A ∩ B` by enumerating the smaller group.
pub fn intersection_by_enumeration(a: &Subgroup, b: &Subgroup, bound_log2: u32) -> Result<Subgroup> {
    a.check_group(b)?;
    let (small, large) = if a.order_log2() <= b.order_log2() { (a, b) } else { (b, a) };
    let mut out = Subgroup::trivial(a.depth, a.order);
    for x in small.elements(bound_log2)? {
        if out.sift_raw(&x).1.is_none() {
            continue;
        }
        if large.sift_raw(&x).1.is_none() {
            out.absorb([x], &[])?;
        }
    }
    Ok(out)
}
