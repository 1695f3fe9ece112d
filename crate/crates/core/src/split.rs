//! Split-shape subgroups `<s_n> ⋉ (Δ(K) · (H × H^{s_n}))` and their base parts.
//!
//! In portrait terms the base part `Δ(K) · (H × H^{s_n})` is the set of
//! portraits with trivial root bit whose left and right components `x`, `y`
//! lie in `K` with `x y^-1 ∈ H`. Its order is `|K| |H|`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::portrait::{Depth, Portrait};
use crate::subgroup::{NodeOrder, Subgroup};

/// The root swap `s_n`.
pub fn root_swap(depth: Depth) -> Portrait {
    Portrait::from_nodes(depth, [1])
}

/// `Y ∩ Q_n`: the entries past the root rank.
pub fn base_part(y: &Subgroup) -> Subgroup {
    y.from_rank(1)
}

fn lower(w: &Subgroup) -> Result<Depth> {
    w.depth().child().ok_or(Error::IndexOutOfRange { what: "subtree of depth", index: 0 })
}

/// `H` with `H × 1 = W ∩ (Σ_{n-1} × 1)`, read off the right-first echelon form of `W ≤ Q_n`.
pub fn left_kernel(w: &Subgroup) -> Result<Subgroup> {
    let child = lower(w)?;
    if w.entry_at_rank(0).is_some() {
        return Err(Error::NotInQ);
    }
    // right-first ranks: root, then the right subtree, then the left subtree
    let wr = w.with_order(NodeOrder::RightFirst).from_rank(1 << child.get());
    let gens = wr.generators().map(Portrait::left).collect::<Result<Vec<_>>>()?;
    Subgroup::generate(child, NodeOrder::LeftFirst, &gens)
}

/// The image of `W ≤ Q_n` under the projection to the left component.
pub fn left_projection(w: &Subgroup) -> Result<Subgroup> {
    let child = lower(w)?;
    if w.entry_at_rank(0).is_some() {
        return Err(Error::NotInQ);
    }
    let gens = w.generators().map(Portrait::left).collect::<Result<Vec<_>>>()?;
    Subgroup::generate(child, NodeOrder::LeftFirst, &gens)
}

/// `(K, H)` with `W = Δ(K) · (H × H^{s_n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDecomposition {
    pub k: Subgroup,
    pub h: Subgroup,
}

/// Splits `W ≤ Q_n` into `(K, H)`, verifying that `W` really has that shape.
pub fn decompose_base(w: &Subgroup) -> Result<BaseDecomposition> {
    let depth = w.depth().get();
    let h = left_kernel(w)?;
    let k = left_projection(w)?;
    let violation = |reason| Error::ShapeViolation { depth, reason };
    if k.order_log2() + h.order_log2() != w.order_log2() {
        return Err(violation("left and right kernels differ in order"));
    }
    if !h.is_normal_in(&k)? {
        return Err(violation("left kernel is not normal in the projection"));
    }
    for g in w.generators() {
        let x = g.left()?;
        let y = g.right()?;
        if !h.contains(&(&x * &y.inverse()))? {
            return Err(violation("components of a generator differ outside the kernel"));
        }
    }
    Ok(BaseDecomposition { k, h })
}

/// `Δ(K) · (H × H^{s_n})`, with `s_n` adjoined when `with_swap` is set.
pub fn materialize(k: &Subgroup, h: &Subgroup, with_swap: bool) -> Result<Subgroup> {
    if k.depth() != h.depth() {
        return Err(Error::DepthMismatch { left: k.depth().get(), right: h.depth().get() });
    }
    let depth = k.depth().parent()?;
    if !h.is_normal_in(k)? {
        return Err(Error::NotNormal("H is not normal in K"));
    }
    let target = u32::from(with_swap) + k.order_log2() + h.order_log2();
    let s = root_swap(depth);
    Subgroup::from_samples(depth, NodeOrder::LeftFirst, target, |rng| {
        let y = k.random_element(rng).diagonal().expect("parent depth checked");
        let x = h.random_element(rng).left_embed().expect("parent depth checked");
        let g = &x * &y;
        if with_swap && rng.next_u32() & 1 == 1 {
            &s * &g
        } else {
            g
        }
    })
    .ok_or(Error::ShapeViolation { depth: depth.get(), reason: "materialization fell short of the expected order" })
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// Stored as a plain subgroup; handled by enumeration.
    Leaf,
    /// `<s_n> ⋉ (Δ(K) · (H × H^{s_n}))`.
    Split { k: Arc<SplitGroup>, h: Arc<SplitGroup> },
    /// `Δ(K) · (H × H^{s_n})` without the root swap.
    Diagonal { k: Arc<SplitGroup>, h: Arc<SplitGroup> },
}

/// A subgroup together with its recursive shape.
#[derive(Clone, Debug)]
pub struct SplitGroup {
    group: Subgroup,
    shape: Shape,
}

impl SplitGroup {
    pub fn leaf(group: Subgroup) -> SplitGroup {
        let group = group.with_order(NodeOrder::LeftFirst);
        SplitGroup { group, shape: Shape::Leaf }
    }

    pub fn split(k: Arc<SplitGroup>, h: Arc<SplitGroup>) -> Result<SplitGroup> {
        let group = materialize(&k.group, &h.group, true)?;
        Ok(SplitGroup { group, shape: Shape::Split { k, h } })
    }

    pub fn diagonal(k: Arc<SplitGroup>, h: Arc<SplitGroup>) -> Result<SplitGroup> {
        let group = materialize(&k.group, &h.group, false)?;
        Ok(SplitGroup { group, shape: Shape::Diagonal { k, h } })
    }

    /// Reassembles from a known group and already-detected components.
    pub(crate) fn from_parts(group: Subgroup, shape: Shape) -> SplitGroup {
        SplitGroup { group, shape }
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn depth(&self) -> Depth {
        self.group.depth()
    }

    pub fn order_log2(&self) -> u32 {
        self.group.order_log2()
    }

    /// Compact shape description such as `S(S(L3,L1),L2)`.
    pub fn describe(&self) -> String {
        alloc::format!("{self}")
    }
}

impl PartialEq for SplitGroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
    }
}

impl Eq for SplitGroup {}

impl fmt::Display for SplitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Leaf => write!(f, "L{}", self.order_log2()),
            Shape::Split { k, h } => write!(f, "S({k},{h})"),
            Shape::Diagonal { k, h } => write!(f, "D({k},{h})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{diagonal_embed, group_q, group_t, group_u, left_embed, translations};

    #[test]
    fn kernels_of_products() {
        let t = translations(3).unwrap();
        let prod = left_embed(&t).unwrap().join(&left_embed(&t).unwrap().conjugate(&root_swap(Depth::new(4).unwrap())).unwrap()).unwrap();
        assert_eq!(left_kernel(&prod).unwrap(), t);
        let diag = diagonal_embed(&t).unwrap();
        assert!(left_kernel(&diag).unwrap().is_trivial());
        assert!(matches!(left_kernel(&translations(4).unwrap()), Err(Error::NotInQ)));
    }

    #[test]
    fn affine_base_part_projects_onto_smaller_affine_group() {
        for n in 2..=5 {
            let u = group_u(n).unwrap();
            let w = base_part(&u);
            assert_eq!(w.order_log2(), u.order_log2() - 1);
            let dec = decompose_base(&w).unwrap();
            assert_eq!(dec.k, group_u(n - 1).unwrap());
            assert_eq!(dec.h, translations(n - 1).unwrap());
            assert_eq!(materialize(&dec.k, &dec.h, true).unwrap(), u);
        }
    }

    #[test]
    fn translations_split_over_trivial() {
        let t = translations(4).unwrap();
        let dec = decompose_base(&base_part(&t)).unwrap();
        assert_eq!(dec.k, translations(3).unwrap());
        assert!(dec.h.is_trivial());
    }

    #[test]
    fn twisted_base_groups_are_rejected() {
        // the graph of the swap automorphism of Σ_1 × Σ_1 inside Q_3
        let d = Depth::new(3).unwrap();
        let a = Portrait::from_nodes(d, [4, 7]);
        let b = Portrait::from_nodes(d, [5, 6]);
        let w = Subgroup::generate(d, NodeOrder::LeftFirst, &[a, b]).unwrap();
        assert!(matches!(decompose_base(&w), Err(Error::ShapeViolation { .. })));
        assert!(group_q(3).unwrap().is_subgroup_of(&group_q(3).unwrap()).unwrap());
        let k = group_t(2, 1).unwrap();
        let h = translations(2).unwrap();
        assert!(matches!(materialize(&k, &h, true), Err(Error::NotNormal(_))));
    }
}
