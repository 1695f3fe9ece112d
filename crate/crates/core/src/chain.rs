//! The normalizer chain `N^0 = U_n ≤ N^1 ≤ ...` inside `Σ_n`.
//!
//! The chain at depth `n` is assembled from the pairs `(C^k, D^k)` at depth
//! `n - 1`, where `C^k = C_{D^{k-1}}(D^{k-1}/C^{k-1})` and
//! `D^k = N(C^{k-1}) ∩ N(D^{k-1})`, as `N^k_n = Split(D^k_{n-1}, C^k_{n-1})`.
//! Normalizers of split-shape groups recurse on depth:
//! `N(Split(K, H)) = Split(N(K) ∩ N(H), C_K(K/H))`. Below the base depth,
//! or when a group is not of split shape but still small, `Σ_d` is
//! enumerated.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::constructions::{group_sigma, group_u, translations};
use crate::error::{Error, Result};
use crate::portrait::Depth;
use crate::section;
use crate::sequences::{build_tables, compare_cell, CellVerdict};
use crate::split::{base_part, decompose_base, root_swap, Shape, SplitGroup};
use crate::subgroup::{intersection_by_enumeration, normalizer_by_enumeration, NodeOrder, Subgroup};

/// Bumped whenever results could change; part of every cache key.
pub const ENGINE_VERSION: u32 = 1;
/// Default number of chain steps after `N^0`.
pub const DEFAULT_K_MAX: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CentralizerMethod {
    /// Enumerate a transversal of the lower term, up to the quotient bound.
    #[default]
    QuotientTable,
    /// Linear algebra along a central series; no quotient bound.
    Layered,
}

impl CentralizerMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CentralizerMethod::QuotientTable => "table",
            CentralizerMethod::Layered => "layered",
        }
    }

    pub fn from_tag(s: &str) -> Option<CentralizerMethod> {
        match s {
            "table" => Some(CentralizerMethod::QuotientTable),
            "layered" => Some(CentralizerMethod::Layered),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Groups at this depth or below are leaves.
    pub base_depth: u32,
    pub enum_bound_log2: u32,
    pub quotient_bound_log2: u32,
    pub centralizer: CentralizerMethod,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            base_depth: 3,
            enum_bound_log2: 22,
            quotient_bound_log2: 26,
            centralizer: CentralizerMethod::QuotientTable,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.base_depth) {
            return Err(Error::IndexOutOfRange { what: "base depth", index: self.base_depth });
        }
        if self.enum_bound_log2 > 40 {
            return Err(Error::IndexOutOfRange { what: "enumeration bound", index: self.enum_bound_log2 });
        }
        if self.quotient_bound_log2 > 40 {
            return Err(Error::IndexOutOfRange { what: "quotient bound", index: self.quotient_bound_log2 });
        }
        Ok(())
    }
}

/// One step of the `C/D` recursion.
#[derive(Clone, Debug)]
pub struct CdPair {
    pub k: u32,
    pub c: Arc<SplitGroup>,
    pub d: Arc<SplitGroup>,
}

/// The pairs that could be computed, and the error that stopped the rest.
#[derive(Clone, Debug)]
pub struct CdChain {
    pub pairs: Vec<CdPair>,
    pub error: Option<(u32, Error)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEntry {
    pub k: u32,
    pub log2_order: u32,
    pub log2_index: Option<u32>,
    pub a_k_plus_2: Option<u128>,
    pub verdict: CellVerdict,
}

impl ChainEntry {
    /// `Some(true/false)` where a prediction exists.
    pub fn matches(&self) -> Option<bool> {
        match self.verdict {
            CellVerdict::Match => Some(true),
            CellVerdict::Mismatch => Some(false),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRecord {
    pub n: u32,
    pub base_depth: u32,
    pub entries: Vec<ChainEntry>,
    /// Stabilization index: `N^d = Σ_n`.
    pub d: Option<u32>,
    pub notes: Vec<String>,
}

/// Notes starting with this prefix mark a column cut short by an error.
pub const ERROR_NOTE: &str = "error";

impl ChainRecord {
    pub fn orders(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.log2_order).collect()
    }

    pub fn failed(&self) -> bool {
        self.notes.iter().any(|s| s.starts_with(ERROR_NOTE))
    }

    fn new(n: u32, base_depth: u32) -> ChainRecord {
        ChainRecord { n, base_depth, entries: Vec::new(), d: None, notes: Vec::new() }
    }

    /// Appends the next order, filling index and prediction.
    fn push(&mut self, log2_order: u32) {
        let k = self.entries.len() as u32;
        let log2_index = self.entries.last().map(|e| log2_order - e.log2_order);
        let tables = build_tables(k as usize + 2);
        let a = if k >= 1 { tables.a(k as usize + 2) } else { None };
        let verdict = compare_cell(self.n, k, log2_index.map(u64::from), &tables);
        self.entries.push(ChainEntry { k, log2_order, log2_index, a_k_plus_2: a, verdict });
        if self.d.is_none() && log2_order == (1u32 << self.n) - 1 {
            self.d = Some(k);
        }
    }
}

fn depth(n: u32) -> Result<Depth> {
    Depth::new(n)
}

fn group_of(s: &Arc<SplitGroup>) -> &Subgroup {
    s.group()
}

/// Structural normalizer engine with memo tables keyed by canonical subgroups.
#[derive(Debug, Default)]
pub struct Engine {
    config: EngineConfig,
    detected: BTreeMap<Subgroup, Arc<SplitGroup>>,
    normalizers: BTreeMap<Subgroup, Arc<SplitGroup>>,
    intersections: BTreeMap<(Subgroup, Subgroup), Arc<SplitGroup>>,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Engine> {
        config.validate()?;
        Ok(Engine { config, ..Engine::default() })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn enumerable(&self, d: u32) -> bool {
        d < 32 && (1u64 << d) - 1 <= u64::from(self.config.enum_bound_log2)
    }

    /// Recursively decomposes `y` into split shape down to the base depth.
    pub fn detect(&mut self, y: &Subgroup) -> Result<Arc<SplitGroup>> {
        let y = y.with_order(NodeOrder::LeftFirst);
        if let Some(s) = self.detected.get(&y) {
            return Ok(s.clone());
        }
        let d = y.depth().get();
        let out = if d <= self.config.base_depth {
            Arc::new(SplitGroup::leaf(y.clone()))
        } else {
            match self.try_split(&y) {
                Ok(s) => s,
                Err(_) if self.enumerable(d) => Arc::new(SplitGroup::leaf(y.clone())),
                Err(e) => return Err(e),
            }
        };
        self.detected.insert(y, out.clone());
        Ok(out)
    }

    fn try_split(&mut self, y: &Subgroup) -> Result<Arc<SplitGroup>> {
        let d = y.depth();
        let s = root_swap(d);
        let (w, with_swap) = if y.contains(&s)? {
            (base_part(y), true)
        } else if y.entry_at_rank(0).is_none() && y.is_normalized_by_element(&s)? {
            (y.clone(), false)
        } else {
            return Err(Error::NotSymmetric { depth: d.get() });
        };
        let dec = decompose_base(&w)?;
        let k = self.detect(&dec.k)?;
        let h = self.detect(&dec.h)?;
        let shape = if with_swap { Shape::Split { k, h } } else { Shape::Diagonal { k, h } };
        Ok(Arc::new(SplitGroup::from_parts(y.clone(), shape)))
    }

    fn leaf_normalizer(&mut self, y: &Subgroup) -> Result<Arc<SplitGroup>> {
        let d = y.depth().get();
        if !self.enumerable(d) {
            return Err(Error::TooLarge { log2_order: (1 << d) - 1, bound: self.config.enum_bound_log2 });
        }
        let sigma = group_sigma(d)?;
        let n = normalizer_by_enumeration(&sigma, y, self.config.enum_bound_log2)?;
        self.detect(&n)
    }

    /// `N_{Σ_d}(Y)`.
    pub fn normalizer(&mut self, y: &Arc<SplitGroup>) -> Result<Arc<SplitGroup>> {
        if let Some(s) = self.normalizers.get(y.group()) {
            return Ok(s.clone());
        }
        let d = y.depth().get();
        let out = if y.order_log2() == (1 << d) - 1 {
            y.clone()
        } else {
            match y.shape().clone() {
                Shape::Leaf => self.leaf_normalizer(y.group())?,
                Shape::Split { k, h } => {
                    let nk = self.normalizer(&k)?;
                    let nh = self.normalizer(&h)?;
                    let l = self.intersect(&nk, &nh)?;
                    let m = self.section_centralizer(k.group(), k.group(), h.group())?;
                    self.assemble(l, m)?
                }
                Shape::Diagonal { k, h } => {
                    let nk = self.normalizer(&k)?;
                    let nh = self.normalizer(&h)?;
                    let l = self.intersect(&nk, &nh)?;
                    let m = self.section_centralizer(l.group(), k.group(), h.group())?;
                    self.assemble(l, m)?
                }
            }
        };
        self.normalizers.insert(y.group().clone(), out.clone());
        Ok(out)
    }

    fn assemble(&mut self, l: Arc<SplitGroup>, m: Subgroup) -> Result<Arc<SplitGroup>> {
        if !m.is_normal_in(l.group())? {
            return Err(Error::NotNormal("centralizer of the section is not normal in the intersection"));
        }
        let m = self.detect(&m)?;
        let out = SplitGroup::split(l, m)?;
        // register so later detections reuse the shape
        let out = self.detected.entry(out.group().clone()).or_insert_with(|| Arc::new(out)).clone();
        Ok(out)
    }

    /// `C_L(K/H)` with the configured method.
    pub fn section_centralizer(&mut self, l: &Subgroup, k: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
        match self.config.centralizer {
            CentralizerMethod::QuotientTable => {
                section::by_quotient_table(l, k, h, self.config.quotient_bound_log2)
            }
            CentralizerMethod::Layered => section::layered(l, k, h),
        }
    }

    /// `A ∩ B`, componentwise on split shapes and by enumeration at leaves.
    pub fn intersect(&mut self, a: &Arc<SplitGroup>, b: &Arc<SplitGroup>) -> Result<Arc<SplitGroup>> {
        if a.depth() != b.depth() {
            return Err(Error::DepthMismatch { left: a.depth().get(), right: b.depth().get() });
        }
        let key = if a.group() <= b.group() {
            (a.group().clone(), b.group().clone())
        } else {
            (b.group().clone(), a.group().clone())
        };
        if let Some(s) = self.intersections.get(&key) {
            return Ok(s.clone());
        }
        let out = if a.group().is_subgroup_of(b.group())? {
            a.clone()
        } else if b.group().is_subgroup_of(a.group())? {
            b.clone()
        } else {
            match (a.shape().clone(), b.shape().clone()) {
                (Shape::Split { k: k1, h: h1 }, Shape::Split { k: k2, h: h2 }) => {
                    let k = self.intersect(&k1, &k2)?;
                    let h = self.intersect(&h1, &h2)?;
                    self.register(SplitGroup::split(k, h)?)
                }
                (
                    Shape::Split { k: k1, h: h1 } | Shape::Diagonal { k: k1, h: h1 },
                    Shape::Split { k: k2, h: h2 } | Shape::Diagonal { k: k2, h: h2 },
                ) => {
                    let k = self.intersect(&k1, &k2)?;
                    let h = self.intersect(&h1, &h2)?;
                    self.register(SplitGroup::diagonal(k, h)?)
                }
                _ => {
                    let x = intersection_by_enumeration(a.group(), b.group(), self.config.enum_bound_log2)?;
                    self.detect(&x)?
                }
            }
        };
        self.intersections.insert(key, out.clone());
        Ok(out)
    }

    fn register(&mut self, s: SplitGroup) -> Arc<SplitGroup> {
        self.detected.entry(s.group().clone()).or_insert_with(|| Arc::new(s)).clone()
    }

    /// Pairs `(C^k, D^k)` at depth `m` for `k <= k_max`, stopping early once both reach `Σ_m`.
    pub fn cd_chain(&mut self, m: u32, k_max: u32) -> Result<CdChain> {
        depth(m)?;
        if m == 0 {
            return Err(Error::IndexOutOfRange { what: "depth of the C/D recursion", index: 0 });
        }
        let c0 = self.detect(&translations(m)?)?;
        let d0 = self.detect(&group_u(m)?)?;
        let mut pairs = alloc::vec![CdPair { k: 0, c: c0, d: d0 }];
        let full = (1u32 << m) - 1;
        for k in 1..=k_max {
            let prev = pairs.last().expect("non-empty").clone();
            if prev.c.order_log2() == full && prev.d.order_log2() == full {
                break;
            }
            match self.cd_step(&prev) {
                Ok(p) => pairs.push(p),
                Err(e) => return Ok(CdChain { pairs, error: Some((k, e)) }),
            }
        }
        Ok(CdChain { pairs, error: None })
    }

    fn cd_step(&mut self, prev: &CdPair) -> Result<CdPair> {
        let c = self.section_centralizer(group_of(&prev.d), group_of(&prev.d), group_of(&prev.c))?;
        let c = self.detect(&c)?;
        let nc = self.normalizer(&prev.c)?;
        let nd = self.normalizer(&prev.d)?;
        let d = self.intersect(&nc, &nd)?;
        if !prev.c.group().is_subgroup_of(c.group())? {
            return Err(Error::NotNormal("C/D recursion: C^k does not contain C^(k-1)"));
        }
        if !c.group().is_normal_in(d.group())? {
            return Err(Error::NotNormal("C/D recursion: C^k is not normal in D^k"));
        }
        Ok(CdPair { k: prev.k + 1, c, d })
    }

    /// The chain column at depth `n` through `k_max` steps.
    ///
    /// Errors at individual steps end the column and are recorded as notes.
    pub fn chain(&mut self, n: u32, k_max: u32) -> Result<ChainRecord> {
        depth(n)?;
        let mut rec = ChainRecord::new(n, self.config.base_depth);
        if n <= 1 {
            rec.push((1 << n) - 1);
            return Ok(rec);
        }
        rec.push(group_u(n)?.order_log2());
        if rec.d.is_some() {
            return Ok(rec);
        }
        let cd = self.cd_chain(n - 1, k_max)?;
        for p in &cd.pairs[1..] {
            rec.push(1 + p.d.order_log2() + p.c.order_log2());
            if rec.d.is_some() {
                break;
            }
        }
        if let Some((k, e)) = cd.error {
            rec.notes.push(format!("{ERROR_NOTE} at k={k}: {e}"));
        }
        Ok(rec)
    }

    /// Materialized `N^0, ..., N^j` for `j <= k_max`, up to stabilization.
    pub fn chain_groups(&mut self, n: u32, k_max: u32) -> Result<Vec<Subgroup>> {
        if n <= 1 {
            return Ok(alloc::vec![group_sigma(n)?]);
        }
        let mut out = alloc::vec![group_u(n)?];
        if out[0].order_log2() == (1 << n) - 1 {
            return Ok(out);
        }
        let cd = self.cd_chain(n - 1, k_max)?;
        if let Some((_, e)) = cd.error {
            return Err(e);
        }
        for p in &cd.pairs[1..] {
            let g = SplitGroup::split(p.d.clone(), p.c.clone())?;
            let full = g.order_log2() == (1 << n) - 1;
            out.push(g.group().clone());
            if full {
                break;
            }
        }
        Ok(out)
    }

    /// `N_{Σ_n}(Y)` through the semidirect reduction `N(Y) = N_{Q_n}(Y ∩ Q_n) ⋊ <s_n>`,
    /// after checking `[N_{Q_n}(Y ∩ Q_n), s_n] ⊆ Y` on generators.
    pub fn lemma2_normalizer(&mut self, y: &Subgroup) -> Result<Subgroup> {
        let d = y.depth();
        let y = y.with_order(NodeOrder::LeftFirst);
        let s = root_swap(d);
        if !y.contains(&s)? {
            return Err(Error::ShapeViolation { depth: d.get(), reason: "root swap is not in the group" });
        }
        let w = base_part(&y);
        let q_bound = (1u32 << d.get()) - 2;
        let nw = if q_bound <= self.config.enum_bound_log2 {
            normalizer_by_enumeration(&crate::constructions::group_q(d.get())?, &w, self.config.enum_bound_log2)?
        } else {
            let ws = self.detect(&w)?;
            base_part(self.normalizer(&ws)?.group())
        };
        for x in nw.generators() {
            let c = x.commutator(&s)?;
            if !y.contains(&c)? {
                return Err(Error::HypothesisFailed(c));
            }
        }
        nw.extend(&[s])
    }
}

/// Iterated `N_{Σ_n}` by enumeration, starting at `U_n`.
pub fn chain_oracle(n: u32, enum_bound_log2: u32) -> Result<ChainRecord> {
    let mut rec = ChainRecord::new(n, n);
    let sigma = group_sigma(n)?;
    let mut g = if n <= 1 { sigma.clone() } else { group_u(n)? };
    rec.push(g.order_log2());
    while g.order_log2() < sigma.order_log2() {
        g = normalizer_by_enumeration(&sigma, &g, enum_bound_log2)?;
        rec.push(g.order_log2());
    }
    rec.notes.push(String::from("enumeration oracle"));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_columns() {
        let mut e = Engine::new(EngineConfig::default()).unwrap();
        assert_eq!(e.chain(1, 9).unwrap().orders(), [1]);
        assert_eq!(e.chain(2, 9).unwrap().orders(), [3]);
        assert_eq!(e.chain(3, 9).unwrap().orders(), [6, 7]);
        let r = e.chain(4, 9).unwrap();
        assert_eq!(r.orders(), [10, 11, 13, 14, 15]);
        assert_eq!(r.d, Some(4));
    }

    #[test]
    fn oracle_small_columns() {
        assert_eq!(chain_oracle(2, 22).unwrap().orders(), [3]);
        assert_eq!(chain_oracle(3, 22).unwrap().orders(), [6, 7]);
    }

    #[test]
    fn detect_affine_group() {
        let mut e = Engine::new(EngineConfig::default()).unwrap();
        let s = e.detect(&group_u(5).unwrap()).unwrap();
        let Shape::Split { k, h } = s.shape() else { panic!("not split: {s}") };
        assert_eq!(k.group(), &group_u(4).unwrap());
        assert_eq!(h.group(), &translations(4).unwrap());
        assert_eq!(s.order_log2(), 15);
    }

    #[test]
    fn config_bounds() {
        let bad = EngineConfig { base_depth: 5, ..EngineConfig::default() };
        assert!(Engine::new(bad).is_err());
    }
}
