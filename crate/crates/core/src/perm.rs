//! Permutations of `{1, ..., d}` as image tables, with cycle notation.
//!
//! Products follow the right-action convention: `a.then(b)` applies `a`
//! first. Cycle strings such as `(1,2)(1,3)` multiply left to right in the
//! same way.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A 1-based point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub u32);

impl Point {
    pub const fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    // 0-based internally
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 1-based images; `images[x-1]` is the image of `x`.
    pub fn from_images(images: &[u32]) -> Result<Self> {
        let d = images.len();
        let mut seen = alloc::vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &y in images {
            if y == 0 || y as usize > d {
                return Err(Error::PointOutOfRange { point: y as u64, degree: d as u64 });
            }
            let y0 = y - 1;
            if core::mem::replace(&mut seen[y0 as usize], true) {
                return Err(Error::NotAPermutation);
            }
            out.push(y0);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut v = images.clone();
            v.sort_unstable();
            v.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image table.
    pub fn images(&self) -> impl Iterator<Item = u32> + '_ {
        self.images.iter().map(|&y| y + 1)
    }

    pub(crate) fn zero_based(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: Point) -> Result<Point> {
        let d = self.degree();
        if x.0 == 0 || x.0 as usize > d {
            return Err(Error::PointOutOfRange { point: x.0 as u64, degree: d as u64 });
        }
        Ok(Point(self.images[x.0 as usize - 1] + 1))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation { images: self.images.iter().map(|&y| other.images[y as usize]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    /// `g^-1 self g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation> {
        g.inverse().then(self)?.then(g)
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Result<Permutation> {
        self.inverse().then(&other.inverse())?.then(self)?.then(other)
    }

    /// Pads with fixed points up to `degree`.
    pub fn extend(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::DegreeMismatch { expected: degree as u64, found: self.degree() as u64 });
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Ok(Permutation { images })
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &y)| *i as u32 == y).count()
    }

    pub fn order(&self) -> u64 {
        let mut seen = alloc::vec![false; self.degree()];
        let mut l: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    /// Cycles of length at least two, each starting at its least point, sorted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = alloc::vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32 + 1);
                x = self.images[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Parses cycle notation like `(1,3)(2,4)` into a permutation of the given degree.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, degree };
        p.skip_ws();
        let perm = p.cycles()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(perm)
    }

    /// Evaluates an expression over cycle notation.
    ///
    /// Grammar: `expr := term ('*' term)*`, `term := atom ('^' (atom | '-1'))*`,
    /// `atom := cycle+ | 'id' | '[' expr ',' expr ']'`. `x^g` is `g^-1 x g` and
    /// `[x,y]` is `x^-1 y^-1 x y`.
    pub fn evaluate(s: &str, degree: usize) -> Result<Permutation> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, degree };
        let perm = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(perm)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree() as u64, found: other.degree() as u64 });
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    degree: usize,
}

impl Parser<'_> {
    fn err(&self, message: &'static str) -> Error {
        Error::Parse { position: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, message: &'static str) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(message))
        }
    }

    fn expr(&mut self) -> Result<Permutation> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.then(&rhs)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Permutation> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                self.pos += 1;
                if self.peek() != Some(b'1') {
                    return Err(self.err("only the exponent -1 is supported"));
                }
                self.pos += 1;
                acc = acc.inverse();
            } else {
                let g = self.atom()?;
                acc = acc.conjugate(&g)?;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Permutation> {
        match self.peek() {
            Some(b'(') => self.cycles(),
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b',', "expected `,` in commutator")?;
                let y = self.expr()?;
                self.expect(b']', "expected `]`")?;
                x.commutator(&y)
            }
            Some(b'i') if self.s[self.pos..].starts_with(b"id") => {
                self.pos += 2;
                Ok(Permutation::identity(self.degree))
            }
            _ => Err(self.err("expected a cycle, `id` or `[`")),
        }
    }

    fn cycles(&mut self) -> Result<Permutation> {
        let mut acc = Permutation::identity(self.degree);
        if self.peek() != Some(b'(') {
            return Err(self.err("expected `(`"));
        }
        while self.peek() == Some(b'(') {
            let c = self.cycle()?;
            acc = acc.then(&c)?;
        }
        Ok(acc)
    }

    fn cycle(&mut self) -> Result<Permutation> {
        self.expect(b'(', "expected `(`")?;
        let mut pts: Vec<u32> = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Permutation::identity(self.degree));
        }
        loop {
            let start = {
                self.skip_ws();
                self.pos
            };
            let x = self.number()?;
            if x == 0 || x as usize > self.degree {
                return Err(Error::Parse { position: start, message: "point out of range" });
            }
            if pts.contains(&x) {
                return Err(Error::Parse { position: start, message: "repeated point in cycle" });
            }
            pts.push(x);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected `,` or `)`")),
            }
        }
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for (i, &x) in pts.iter().enumerate() {
            images[x as usize - 1] = pts[(i + 1) % pts.len()] - 1;
        }
        Ok(Permutation { images })
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(d) = self.s.get(self.pos).filter(|c| c.is_ascii_digit()) {
            v = v * 10 + u64::from(d - b'0');
            if v > u64::from(u32::MAX) {
                return Err(Error::Parse { position: start, message: "number too large" });
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(v as u32)
    }
}

/// Formats a list of permutations one per line.
pub fn cycle_lines<'a>(perms: impl IntoIterator<Item = &'a Permutation>) -> String {
    let mut out = String::new();
    for (i, p) in perms.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&alloc::format!("{p}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_print_roundtrip() {
        let p = Permutation::parse_cycles("(1,3)(2,4)", 4).unwrap();
        assert_eq!(p.to_string(), "(1,3)(2,4)");
        assert_eq!(Permutation::parse_cycles(" ( ) ", 4).unwrap().to_string(), "()");
    }

    #[test]
    fn cycles_multiply_left_to_right() {
        let p = Permutation::parse_cycles("(1,2)(1,3)(2,4)", 4).unwrap();
        assert_eq!(p.to_string(), "(1,4,2,3)");
        let q = Permutation::evaluate("(1,2)*(1,3)(2,4)", 4).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn conjugation_and_commutator_syntax() {
        let x = Permutation::evaluate("(1,2)^(1,3)(2,4)", 4).unwrap();
        assert_eq!(x.to_string(), "(3,4)");
        let c = Permutation::evaluate("[(1,2),(2,3)]", 4).unwrap();
        assert_eq!(c.to_string(), "(1,2,3)");
        assert_eq!(Permutation::evaluate("(1,2,3)^-1", 4).unwrap().to_string(), "(1,3,2)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            Permutation::parse_cycles("(1,5)", 4),
            Err(Error::Parse { position: 3, message: "point out of range" })
        );
        assert!(matches!(Permutation::parse_cycles("(1,2", 4), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(Permutation::parse_cycles("(1,1)", 4), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(Permutation::evaluate("(1,2) * ", 4), Err(Error::Parse { position: 8, .. })));
    }

    #[test]
    fn order_and_inverse() {
        let p = Permutation::parse_cycles("(1,2,3)(4,5)", 6).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.then(&p.inverse()).unwrap().is_identity());
        assert_eq!(p.fixed_point_count(), 1);
    }
}
