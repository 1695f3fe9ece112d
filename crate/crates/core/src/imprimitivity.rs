//! Block systems, imprimitivity chains and trees.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::{group_sigma, translations, Flag};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::portrait::Portrait;
use crate::subgroup::Subgroup;

/// `B^n_{m,k} = {k 2^(n-m) + 1, ..., (k+1) 2^(n-m)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub n: u32,
    pub m: u32,
    pub k: u64,
}

impl Block {
    pub fn first(&self) -> u64 {
        (self.k << (self.n - self.m)) + 1
    }

    pub fn last(&self) -> u64 {
        (self.k + 1) << (self.n - self.m)
    }

    pub fn contains(&self, x: u64) -> bool {
        (self.first()..=self.last()).contains(&x)
    }

    pub fn points(&self) -> core::ops::RangeInclusive<u64> {
        self.first()..=self.last()
    }
}

/// The interval system `B^n_m` with `2^m` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub n: u32,
    pub m: u32,
}

impl BlockSystem {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m > n {
            return Err(Error::IndexOutOfRange { what: "block system level", index: m });
        }
        Ok(BlockSystem { n, m })
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        (0..1u64 << self.m).map(|k| Block { n: self.n, m: self.m, k })
    }

    pub fn block_of(&self, x: u64) -> Block {
        Block { n: self.n, m: self.m, k: (x - 1) >> (self.n - self.m) }
    }

    pub fn partition(&self) -> Partition {
        let shift = self.n - self.m;
        Partition { labels: (0..1u32 << self.n).map(|x| x >> shift).collect() }
    }
}

/// A partition of `{1, ..., d}`, labels numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    labels: Vec<u32>,
}

impl Partition {
    pub fn from_labels(raw: &[u32]) -> Partition {
        let mut map = alloc::collections::BTreeMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| *m as usize + 1)
    }

    /// Blocks as sorted 1-based point lists, ordered by least point.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = alloc::vec![Vec::new(); self.block_count()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(x as u32 + 1);
        }
        out
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.degree() != coarser.degree() {
            return false;
        }
        let mut up = alloc::vec![u32::MAX; self.block_count()];
        self.labels.iter().zip(&coarser.labels).all(|(&f, &c)| {
            let slot = &mut up[f as usize];
            if *slot == u32::MAX {
                *slot = c;
            }
            *slot == c
        })
    }
}

/// Coarsest to finest: one block first, singletons last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprimitivityChain {
    pub levels: Vec<Partition>,
}

impl ImprimitivityChain {
    pub fn new(levels: Vec<Partition>) -> Result<Self> {
        let ok = match (levels.first(), levels.last()) {
            (Some(f), Some(l)) => {
                f.block_count() == 1
                    && l.block_count() == l.degree()
                    && levels.windows(2).all(|w| w[1].refines(&w[0]) && w[0].degree() == w[1].degree())
            }
            _ => false,
        };
        if !ok {
            return Err(Error::IndexOutOfRange { what: "imprimitivity chain level", index: levels.len() as u32 });
        }
        Ok(ImprimitivityChain { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn tree(&self) -> ImprimitivityTree {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut prev_start = 0usize;
        for (m, part) in self.levels.iter().enumerate() {
            let start = vertices.len();
            for (k, pts) in part.blocks().into_iter().enumerate() {
                if m > 0 {
                    let parent_label = self.levels[m - 1].labels[pts[0] as usize - 1] as usize;
                    edges.push((prev_start + parent_label, vertices.len()));
                }
                vertices.push(TreeVertex { level: m as u32, index: k as u64, points: pts });
            }
            prev_start = start;
        }
        ImprimitivityTree { vertices, edges }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub level: u32,
    pub index: u64,
    pub points: Vec<u32>,
}

impl TreeVertex {
    /// `m.k [a..b]`.
    pub fn label(&self) -> String {
        let a = self.points.first().copied().unwrap_or(0);
        let b = self.points.last().copied().unwrap_or(0);
        alloc::format!("{}.{} [{}..{}]", self.level, self.index, a, b)
    }
}

/// Vertices level by level; edges run from a block to the blocks it contains one level down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprimitivityTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
}

pub fn canonical_chain(n: u32) -> ImprimitivityChain {
    ImprimitivityChain { levels: (0..=n).map(|m| BlockSystem { n, m }.partition()).collect() }
}

/// Whether every permutation maps every block onto a block.
pub fn is_invariant_under(gens: &[Permutation], part: &Partition) -> bool {
    let blocks = part.blocks();
    gens.iter().all(|g| {
        g.degree() == part.degree()
            && blocks.iter().all(|b| {
                let img = g.zero_based();
                let target = part.labels[img[b[0] as usize - 1] as usize];
                let size = blocks[target as usize].len();
                size == b.len() && b.iter().all(|&x| part.labels[img[x as usize - 1] as usize] == target)
            })
    })
}

pub fn is_invariant(g: &Subgroup, sys: &BlockSystem) -> bool {
    let gens: Vec<Permutation> = g.generators().map(Portrait::to_permutation).collect();
    sys.n == g.depth().get() && is_invariant_under(&gens, &sys.partition())
}

/// Orbit partition of a subgroup on `{1, ..., 2^n}`.
pub fn orbits_of(h: &Subgroup) -> Partition {
    let d = h.depth().degree();
    let mut parent: Vec<u32> = (0..d as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for g in h.generators() {
        for (x, y) in g.to_permutation().zero_based().iter().enumerate() {
            let a = find(&mut parent, x as u32);
            let b = find(&mut parent, *y);
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let labels: Vec<u32> = (0..d as u32).map(|x| find(&mut parent, x)).collect();
    Partition::from_labels(&labels)
}

/// Level `i` is the orbit partition of `T_{n,n-i}`.
pub fn chain_from_flag(f: &Flag) -> Result<ImprimitivityChain> {
    ImprimitivityChain::new(f.terms.iter().rev().map(orbits_of).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub n: u32,
    /// Elementary abelian regular subgroups found inside `Σ_n`.
    pub found: usize,
    /// Size of the `Σ_n`-conjugacy class of `T_n`.
    pub class_size: usize,
    pub all_conjugate: bool,
}

/// Finds every elementary abelian regular subgroup of `Σ_n` and checks that
/// each is `Σ_n`-conjugate to `T_n`. Enumeration scale only (`n <= 3`).
pub fn uniqueness_check(n: u32) -> Result<UniquenessReport> {
    if n > 3 {
        return Err(Error::TooLarge { log2_order: (1 << n) - 1, bound: 7 });
    }
    let sigma = group_sigma(n)?;
    let elems: Vec<Portrait> = sigma.elements(7)?.collect();
    let inv: Vec<&Portrait> = elems
        .iter()
        .filter(|p| !p.is_identity() && p.square().is_identity() && p.to_permutation().fixed_point_count() == 0)
        .collect();
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let id = Portrait::identity(sigma.depth());
    search(&inv, 0, &mut Vec::new(), &mut alloc::vec![id], 1 << n, &mut found, &sigma)?;
    let t = translations(n)?;
    let mut class = BTreeSet::new();
    for g in &elems {
        class.insert(t.conjugate(g)?);
    }
    let all_conjugate = found.iter().all(|h| class.contains(h));
    Ok(UniquenessReport { n, found: found.len(), class_size: class.len(), all_conjugate })
}

fn search(
    inv: &[&Portrait],
    start: usize,
    chosen: &mut Vec<usize>,
    elems: &mut Vec<Portrait>,
    target: usize,
    found: &mut BTreeSet<Subgroup>,
    sigma: &Subgroup,
) -> Result<()> {
    if elems.len() == target {
        let gens: Vec<Portrait> = chosen.iter().map(|&c| inv[c].clone()).collect();
        found.insert(Subgroup::generate(sigma.depth(), sigma.node_order(), &gens)?);
        return Ok(());
    }
    for c in start..inv.len() {
        let g = inv[c];
        if elems.contains(g) || !chosen.iter().all(|&o| inv[o] * g == g * inv[o]) {
            continue;
        }
        let coset: Vec<Portrait> = elems.iter().map(|e| e * g).collect();
        if !coset.iter().all(|x| x.to_permutation().fixed_point_count() == 0) {
            continue;
        }
        let len = elems.len();
        elems.extend(coset);
        chosen.push(c);
        search(inv, c + 1, chosen, elems, target, found, sigma)?;
        chosen.pop();
        elems.truncate(len);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flag, group_t};
    use crate::portrait::Depth;

    #[test]
    fn intervals() {
        let sys = BlockSystem::new(2, 1).unwrap();
        let b: Vec<Vec<u64>> = sys.blocks().map(|b| b.points().collect()).collect();
        assert_eq!(b, [[1, 2], [3, 4]]);
        assert_eq!(canonical_chain(3).tree().vertices.len(), 15);
        assert_eq!(canonical_chain(3).depth(), 3);
        let last = BlockSystem::new(4, 4).unwrap().partition();
        assert_eq!(last.block_count(), 16);
        assert!(BlockSystem::new(2, 3).is_err());
    }

    #[test]
    fn invariance() {
        let s = group_sigma(3).unwrap();
        assert!((0..=3).all(|m| is_invariant(&s, &BlockSystem { n: 3, m })));
        let t = translations(4).unwrap();
        assert!((0..=4).all(|m| is_invariant(&t, &BlockSystem { n: 4, m })));
        let p = Permutation::parse_cycles("(1,3)", 4).unwrap();
        assert!(!is_invariant_under(&[p], &BlockSystem { n: 2, m: 1 }.partition()));
    }

    #[test]
    fn orbits_and_flags() {
        let o = orbits_of(&group_t(3, 2).unwrap());
        assert_eq!(o.blocks(), [[1, 2, 3, 4], [5, 6, 7, 8]]);
        let e = orbits_of(&Subgroup::trivial(Depth::new(2).unwrap(), crate::NodeOrder::LeftFirst));
        assert_eq!(e.block_count(), 4);
        for n in 0..=8 {
            assert_eq!(chain_from_flag(&flag(n).unwrap()).unwrap(), canonical_chain(n));
        }
    }

    #[test]
    fn tree_shape() {
        for n in 0..=5 {
            let t = canonical_chain(n).tree();
            assert_eq!(t.vertices.len(), (1 << (n + 1)) - 1);
            assert_eq!(t.edges.len(), (1 << (n + 1)) - 2);
        }
        let t = canonical_chain(2).tree();
        assert_eq!(t.vertices[2].label(), "1.1 [3..4]");
        assert_eq!(t.edges[0], (0, 1));
    }

    #[test]
    fn translations_are_unique_up_to_conjugacy() {
        for n in 1..=3 {
            let r = uniqueness_check(n).unwrap();
            assert!(r.all_conjugate, "{r:?}");
            assert!(r.found >= 1);
        }
        assert_eq!(uniqueness_check(1).unwrap().found, 1);
        assert_eq!(uniqueness_check(2).unwrap().found, 1);
        assert!(uniqueness_check(4).is_err());
    }
}
