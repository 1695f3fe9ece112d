//! Elements of the iterated wreath product `Σ_n` as tree portraits.
//!
//! A portrait holds one bit per internal node of the depth-`n` binary tree,
//! in heap order: the root is node 1 and the children of node `i` are `2i`
//! and `2i + 1`. Node `i` is stored at bit `i` (bit 0 is unused), so level
//! `l` occupies bits `2^l .. 2^(l+1)`. A set bit swaps the two subtrees
//! below the node. The left subtree of the root covers points
//! `1 ..= 2^(n-1)`, so the root bit alone is the swap `s_n`.
//!
//! Products use the right-action convention: `a * b` applies `a` first.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};

pub const MAX_DEPTH: u32 = 16;

/// Tree depth `n`; the degree is `2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Depth(u8);

impl Depth {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_DEPTH {
            return Err(Error::DepthTooLarge(n));
        }
        Ok(Depth(n as u8))
    }

    pub const fn get(self) -> u32 {
        self.0 as u32
    }

    /// Number of points, `2^n`.
    pub const fn degree(self) -> usize {
        1 << self.0
    }

    /// Number of internal nodes, `2^n - 1`.
    pub const fn node_count(self) -> usize {
        (1 << self.0) - 1
    }

    pub fn child(self) -> Option<Depth> {
        self.0.checked_sub(1).map(Depth)
    }

    pub fn parent(self) -> Result<Depth> {
        Depth::new(self.get() + 1)
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type Words = SmallVec<[u64; 2]>;

fn word_count(depth: Depth) -> usize {
    depth.degree().div_ceil(64)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Portrait {
    depth: Depth,
    words: Words,
}

impl Portrait {
    pub fn identity(depth: Depth) -> Self {
        Portrait { depth, words: smallvec![0; word_count(depth)] }
    }

    /// Portrait with exactly the given heap nodes set.
    ///
    /// Panics if a node is outside `1 ..= 2^n - 1`.
    pub fn from_nodes(depth: Depth, nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Portrait::identity(depth);
        for v in nodes {
            assert!(v >= 1 && v < depth.degree(), "node {v} outside depth {depth}");
            p.flip(v);
        }
        p
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn bit(&self, node: usize) -> bool {
        (self.words[node >> 6] >> (node & 63)) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, node: usize) {
        self.words[node >> 6] ^= 1 << (node & 63);
    }

    #[inline]
    pub fn set(&mut self, node: usize, value: bool) {
        if self.bit(node) != value {
            self.flip(node);
        }
    }

    /// Set nodes in ascending heap order.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn check_depth(&self, other: &Portrait) -> Result<()> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch { left: self.depth.get(), right: other.depth.get() });
        }
        Ok(())
    }

    /// `self` first, then `other`.
    pub fn multiply(&self, other: &Portrait) -> Result<Portrait> {
        self.check_depth(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, b: &Portrait) -> Portrait {
        if self.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return self.clone();
        }
        let size = self.depth.degree();
        let mut out = Portrait::identity(self.depth);
        // (ab)(v) = a(v) xor b(image of v under a)
        with_images(self, size, |i, img| {
            if self.bit(i) ^ b.bit(img) {
                out.flip(i);
            }
        });
        out
    }

    pub fn inverse(&self) -> Portrait {
        if self.is_identity() {
            return self.clone();
        }
        let size = self.depth.degree();
        let mut out = Portrait::identity(self.depth);
        with_images(self, size, |i, img| {
            if self.bit(i) {
                out.flip(img);
            }
        });
        out
    }

    /// `g^-1 self g`.
    pub fn conjugate(&self, g: &Portrait) -> Result<Portrait> {
        self.check_depth(g)?;
        Ok(g.inverse().mul_unchecked(&self.mul_unchecked(g)))
    }

    /// `self^-1 y^-1 self y`.
    pub fn commutator(&self, y: &Portrait) -> Result<Portrait> {
        self.check_depth(y)?;
        Ok(self.inverse().mul_unchecked(&y.inverse()).mul_unchecked(&self.mul_unchecked(y)))
    }

    pub fn square(&self) -> Portrait {
        self.mul_unchecked(self)
    }

    /// Order of the element, a power of two.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut ord = 1;
        while !x.is_identity() {
            x = x.square();
            ord *= 2;
        }
        ord
    }

    pub fn act(&self, x: Point) -> Result<Point> {
        let d = self.depth.degree();
        if x.0 == 0 || x.0 as usize > d {
            return Err(Error::PointOutOfRange { point: x.0 as u64, degree: d as u64 });
        }
        Ok(Point(self.act_zero(x.0 as usize - 1) as u32 + 1))
    }

    fn act_zero(&self, x: usize) -> usize {
        let n = self.depth.get();
        let mut node = 1usize;
        let mut out = 0usize;
        for l in 0..n {
            let c = (x >> (n - 1 - l)) & 1;
            out = (out << 1) | (c ^ self.bit(node) as usize);
            node = (node << 1) | c;
        }
        out
    }

    pub fn to_permutation(&self) -> Permutation {
        let d = self.depth.degree();
        Permutation::from_zero_based((0..d).map(|x| self.act_zero(x) as u32).collect())
    }

    /// Portrait of a permutation of degree `2^n`, if it stabilizes every block system.
    pub fn from_permutation(q: &Permutation, depth: Depth) -> Result<Portrait> {
        let d = depth.degree();
        if q.degree() != d {
            return Err(Error::DegreeMismatch { expected: d as u64, found: q.degree() as u64 });
        }
        let n = depth.get();
        let img = q.zero_based();
        let mut p = Portrait::identity(depth);
        for l in 0..n {
            // left child block of node (l, j) starts at 2j * 2^(n-l-1)
            let width = 1usize << (n - l - 1);
            for j in 0..(1usize << l) {
                let y = img[2 * j * width] as usize;
                if (y / width) & 1 == 1 {
                    p.flip((1 << l) + j);
                }
            }
        }
        if p.to_permutation() != *q {
            return Err(first_broken_block(img, n));
        }
        Ok(p)
    }

    /// Component on the left subtree.
    pub fn left(&self) -> Result<Portrait> {
        self.component(0)
    }

    /// Component on the right subtree.
    pub fn right(&self) -> Result<Portrait> {
        self.component(1)
    }

    fn component(&self, side: usize) -> Result<Portrait> {
        let child = self.depth.child().ok_or(Error::IndexOutOfRange { what: "subtree of depth", index: 0 })?;
        let mut out = Portrait::identity(child);
        for l in 0..child.get() {
            let width = 1usize << l;
            let src = (2 << l) + side * width;
            for j in 0..width {
                if self.bit(src + j) {
                    out.flip(width + j);
                }
            }
        }
        Ok(out)
    }

    /// Portrait `(left, right) * s^root` one level up.
    pub fn from_parts(root: bool, left: &Portrait, right: &Portrait) -> Result<Portrait> {
        left.check_depth(right)?;
        let depth = left.depth.parent()?;
        let mut out = Portrait::identity(depth);
        out.set(1, root);
        for l in 0..left.depth.get() {
            let width = 1usize << l;
            for j in 0..width {
                if left.bit(width + j) {
                    out.flip((2 << l) + j);
                }
                if right.bit(width + j) {
                    out.flip((2 << l) + width + j);
                }
            }
        }
        Ok(out)
    }

    /// The diagonal copy `(x, x^s)` one level up.
    pub fn diagonal(&self) -> Result<Portrait> {
        Portrait::from_parts(false, self, self)
    }

    /// `(x, 1)` one level up.
    pub fn left_embed(&self) -> Result<Portrait> {
        Portrait::from_parts(false, self, &Portrait::identity(self.depth))
    }

    /// `P<n>:` followed by the node bits in heap order, most significant first, as hex digits.
    pub fn to_hex(&self) -> String {
        let mut s = alloc::format!("P{}:", self.depth);
        let bits = self.depth.node_count();
        for start in (0..bits).step_by(4) {
            let mut nib = 0u32;
            for k in 0..4 {
                nib <<= 1;
                if start + k < bits && self.bit(start + k + 1) {
                    nib |= 1;
                }
            }
            s.push(char::from_digit(nib, 16).unwrap_or('0'));
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Portrait> {
        let err = |position, message| Error::Parse { position, message };
        let rest = s.strip_prefix('P').ok_or(err(0, "expected `P`"))?;
        let colon = rest.find(':').ok_or(err(1, "expected `:`"))?;
        let n: u32 = rest[..colon].parse().map_err(|_| err(1, "bad depth"))?;
        let depth = Depth::new(n)?;
        let digits = &rest[colon + 1..];
        let bits = depth.node_count();
        let offset = colon + 2;
        if digits.len() != bits.div_ceil(4) {
            return Err(err(offset, "wrong number of hex digits"));
        }
        let mut p = Portrait::identity(depth);
        for (i, c) in digits.chars().enumerate() {
            let nib = c.to_digit(16).ok_or(err(offset + i, "bad hex digit"))?;
            for k in 0..4 {
                if nib >> (3 - k) & 1 == 1 {
                    let idx = 4 * i + k;
                    if idx >= bits {
                        return Err(err(offset + i, "padding bits must be zero"));
                    }
                    p.flip(idx + 1);
                }
            }
        }
        Ok(p)
    }
}

/// Calls `f(node, image_of_node)` for every node in heap order.
#[inline]
fn with_images(a: &Portrait, size: usize, mut f: impl FnMut(usize, usize)) {
    if size <= 1 {
        return;
    }
    let mut small = [0u16; 128];
    let mut large: Vec<u16>;
    let img: &mut [u16] = if size <= 128 {
        &mut small[..size]
    } else {
        large = vec![0u16; size];
        &mut large[..]
    };
    img[1] = 1;
    f(1, 1);
    for i in 2..size {
        let p = i >> 1;
        let t = ((img[p] as usize) << 1) | ((i & 1) ^ a.bit(p) as usize);
        img[i] = t as u16;
        f(i, t);
    }
}

fn first_broken_block(img: &[u32], n: u32) -> Error {
    for m in 1..=n {
        let width = 1usize << (n - m);
        for k in 0..(1usize << m) {
            let target = img[k * width] as usize / width;
            if (k * width..(k + 1) * width).any(|x| img[x] as usize / width != target) {
                return Error::NotInSigma { level: m, block: k as u64 };
            }
        }
    }
    Error::NotInSigma { level: 0, block: 0 }
}

/// Panics on a depth mismatch; use [`Portrait::multiply`] for a checked product.
impl Mul for &Portrait {
    type Output = Portrait;

    fn mul(self, rhs: &Portrait) -> Portrait {
        assert_eq!(self.depth, rhs.depth, "depth mismatch in portrait product");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn d(n: u32) -> Depth {
        Depth::new(n).unwrap()
    }

    fn perm(s: &str, n: u32) -> Permutation {
        Permutation::parse_cycles(s, 1 << n).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        assert!(Portrait::identity(d(3)).to_permutation().is_identity());
        assert_eq!(Portrait::identity(d(4)).act(Point(11)), Ok(Point(11)));
        let p0 = Portrait::identity(d(0));
        assert_eq!(p0.to_permutation().degree(), 1);
        assert_eq!(p0.to_hex(), "P0:");
    }

    #[test]
    fn root_bit_is_the_top_swap() {
        let s3 = Portrait::from_nodes(d(3), [1]);
        assert_eq!(s3.to_permutation().to_string(), "(1,5)(2,6)(3,7)(4,8)");
        assert_eq!(s3.act(Point(2)), Ok(Point(6)));
        let s2 = Portrait::from_nodes(d(3), [2]);
        assert_eq!(s2.act(Point(7)), Ok(Point(7)));
        assert_eq!(Portrait::from_permutation(&perm("(1,3)(2,4)", 2), d(2)).unwrap(), Portrait::from_nodes(d(2), [1]));
    }

    #[test]
    fn products_follow_image_tables() {
        let s1 = Portrait::from_permutation(&perm("(1,2)", 2), d(2)).unwrap();
        let s2 = Portrait::from_permutation(&perm("(1,3)(2,4)", 2), d(2)).unwrap();
        assert_eq!((&s1 * &s2).to_permutation().to_string(), "(1,4,2,3)");
        assert!((&s1 * &s1).is_identity());
        let t1 = Portrait::from_permutation(&perm("(1,2)(3,4)", 2), d(2)).unwrap();
        assert_eq!((&t1 * &s2).to_permutation().to_string(), "(1,4)(2,3)");
    }

    #[test]
    fn conjugation_moves_the_left_swap() {
        let x = Portrait::from_nodes(d(1), [1]).left_embed().unwrap();
        let s2 = Portrait::from_nodes(d(2), [1]);
        assert_eq!(x.conjugate(&s2).unwrap().to_permutation().to_string(), "(3,4)");
    }

    #[test]
    fn not_in_sigma_reports_block() {
        let q = perm("(1,2,3)", 2);
        assert!(matches!(Portrait::from_permutation(&q, d(2)), Err(Error::NotInSigma { level: 1, block: 0 })));
        let q = perm("(2,3)", 2);
        assert!(matches!(Portrait::from_permutation(&q, d(2)), Err(Error::NotInSigma { level: 1, block: 0 })));
        let q = perm("(1,2)", 3);
        assert!(Portrait::from_permutation(&q, d(3)).is_ok());
    }

    #[test]
    fn mismatched_depths_are_errors() {
        let a = Portrait::identity(d(2));
        let b = Portrait::identity(d(3));
        assert_eq!(a.multiply(&b), Err(Error::DepthMismatch { left: 2, right: 3 }));
        assert!(a.commutator(&b).is_err());
        assert!(Portrait::identity(d(2)).act(Point(5)).is_err());
        assert!(Depth::new(17).is_err());
    }

    #[test]
    fn hex_roundtrip() {
        let p = Portrait::from_nodes(d(3), [1, 5, 7]);
        assert_eq!(p.to_hex(), "P3:8a");
        assert_eq!(Portrait::from_hex(&p.to_hex()).unwrap(), p);
        assert_eq!(Portrait::from_nodes(d(2), [1]).to_hex(), "P2:8");
        assert!(Portrait::from_hex("P2:9").is_err());
        assert!(Portrait::from_hex("P2:8f").is_err());
        assert!(Portrait::from_hex("Q2:8").is_err());
    }

    #[test]
    fn components_roundtrip() {
        let p = Portrait::from_nodes(d(3), [1, 2, 3, 6, 7]);
        let l = p.left().unwrap();
        let r = p.right().unwrap();
        assert_eq!(l, Portrait::from_nodes(d(2), [1]));
        assert_eq!(r, Portrait::from_nodes(d(2), [1, 2, 3]));
        assert_eq!(Portrait::from_parts(true, &l, &r).unwrap(), p);
    }

    #[test]
    fn depth_three_image_is_all_of_sigma() {
        let mut seen = alloc::collections::BTreeSet::new();
        for mask in 0u32..128 {
            let p = Portrait::from_nodes(d(3), (1..8).filter(|v| mask >> (v - 1) & 1 == 1));
            let q = p.to_permutation();
            assert_eq!(Portrait::from_permutation(&q, d(3)).unwrap(), p);
            seen.insert(q);
        }
        assert_eq!(seen.len(), 128);
    }
}
