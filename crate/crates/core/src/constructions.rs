//! Named generators and subgroups of `Σ_n`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::portrait::{Depth, Portrait};
use crate::subgroup::{NodeOrder, Subgroup};

const LF: NodeOrder = NodeOrder::LeftFirst;

fn depth(n: u32) -> Result<Depth> {
    Depth::new(n)
}

fn check_index(what: &'static str, index: u32, lo: u32, hi: u32) -> Result<()> {
    if index < lo || index > hi {
        return Err(Error::IndexOutOfRange { what, index });
    }
    Ok(())
}

/// `s_i`: the swap at the depth-`(n-i)` node of the leftmost path.
pub fn gen_s(n: u32, i: u32) -> Result<Portrait> {
    let d = depth(n)?;
    check_index("s generator", i, 1, n)?;
    Ok(Portrait::from_nodes(d, [1usize << (n - i)]))
}

/// `t^n_i`: every node at depth `n-i` set.
pub fn gen_t(n: u32, i: u32) -> Result<Portrait> {
    let d = depth(n)?;
    check_index("t generator", i, 1, n)?;
    let lo = 1usize << (n - i);
    Ok(Portrait::from_nodes(d, lo..2 * lo))
}

/// `u^n_{i,j}` for `1 <= i <= j <= n`.
pub fn gen_u(n: u32, i: u32, j: u32) -> Result<Portrait> {
    depth(n)?;
    if i < 1 || i > j {
        return Err(Error::IndexOutOfRange { what: "u generator row", index: i });
    }
    check_index("u generator column", j, i, n)?;
    match i {
        1 => gen_t(n, n - j + 1),
        2 => gen_u(n - 1, 1, j - 1)?.left_embed(),
        _ => gen_u(n - 1, i - 1, j - 1)?.diagonal(),
    }
}

/// `T_{n,i} = <t_1, ..., t_i>`.
pub fn group_t(n: u32, i: u32) -> Result<Subgroup> {
    let d = depth(n)?;
    check_index("T term", i, 0, n)?;
    let gens = (1..=i).map(|k| gen_t(n, k)).collect::<Result<Vec<_>>>()?;
    Subgroup::generate(d, LF, &gens)
}

/// The translation group `T_n = T_{n,n}`.
pub fn translations(n: u32) -> Result<Subgroup> {
    group_t(n, n)
}

/// `Σ_n`, all portraits.
pub fn group_sigma(n: u32) -> Result<Subgroup> {
    Ok(Subgroup::from_unit_nodes(depth(n)?, LF, |_| true))
}

/// `Q_n = Σ_{n-1} × Σ_{n-1}`, the portraits with trivial root bit.
pub fn group_q(n: u32) -> Result<Subgroup> {
    Ok(Subgroup::from_unit_nodes(depth(n)?, LF, |v| v != 1))
}

/// `U_n = N_{Σ_n}(T_n)`, generated by the `u^n_{i,j}`.
pub fn group_u(n: u32) -> Result<Subgroup> {
    Subgroup::generate(depth(n)?, LF, &u_generators(n)?)
}

pub fn u_generators(n: u32) -> Result<Vec<Portrait>> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            gens.push(gen_u(n, i, j)?);
        }
    }
    Ok(gens)
}

/// `Δ(H)`: every element duplicated into both subtrees, one level up.
pub fn diagonal_embed(h: &Subgroup) -> Result<Subgroup> {
    let gens = h.generators().map(Portrait::diagonal).collect::<Result<Vec<_>>>()?;
    Subgroup::generate(h.depth().parent()?, LF, &gens)
}

/// `H × 1`: every element placed in the left subtree, one level up.
pub fn left_embed(h: &Subgroup) -> Result<Subgroup> {
    let gens = h.generators().map(Portrait::left_embed).collect::<Result<Vec<_>>>()?;
    Subgroup::generate(h.depth().parent()?, LF, &gens)
}

/// `Z_h(Θ_n)` as a concrete subgroup of `Σ_n`, for `1 <= h <= n-1`:
/// `Z_1 = T_{n-1,1} × 1` and `Z_h = Δ(Z_{h-1}(Θ_{n-1})) · (T_{n-1,h} × 1)`.
pub fn upper_central_theta(n: u32, h: u32) -> Result<Subgroup> {
    let d = depth(n)?;
    if n < 2 {
        return Err(Error::IndexOutOfRange { what: "upper central term", index: h });
    }
    check_index("upper central term", h, 1, n - 1)?;
    Subgroup::generate(d, LF, &theta_generators(n, h)?)
}

fn theta_generators(n: u32, h: u32) -> Result<Vec<Portrait>> {
    let mut gens = Vec::new();
    if h > 1 {
        for g in theta_generators(n - 1, h - 1)? {
            gens.push(g.diagonal()?);
        }
    }
    for k in 1..=h {
        gens.push(gen_t(n - 1, k)?.left_embed()?);
    }
    Ok(gens)
}

/// The maximal flag `1 = T_{n,0} < T_{n,1} < ... < T_{n,n} = T_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub terms: Vec<Subgroup>,
}

impl Flag {
    pub fn depth(&self) -> u32 {
        self.terms.len() as u32 - 1
    }
}

pub fn flag(n: u32) -> Result<Flag> {
    Ok(Flag { terms: (0..=n).map(|i| group_t(n, i)).collect::<Result<_>>()? })
}

/// A named group such as `T:5`, `T:5:2`, `U:6`, `Sigma:4`, `Q:3`, `Ztheta:6:3` or `Trivial:3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGroup {
    Translations { n: u32 },
    FlagTerm { n: u32, i: u32 },
    Affine { n: u32 },
    Sigma { n: u32 },
    Base { n: u32 },
    Theta { n: u32, h: u32 },
    Trivial { n: u32 },
}

impl NamedGroup {
    pub fn parse(key: &str) -> Result<NamedGroup> {
        let unknown = || Error::UnknownGroup(key.to_string());
        let parts: Vec<&str> = key.split(':').collect();
        let nums = parts[1..].iter().map(|p| p.trim().parse::<u32>().map_err(|_| unknown())).collect::<Result<Vec<u32>>>()?;
        let g = match (parts[0].trim(), nums.as_slice()) {
            ("T", [n]) => NamedGroup::Translations { n: *n },
            ("T", [n, i]) => NamedGroup::FlagTerm { n: *n, i: *i },
            ("U", [n]) => NamedGroup::Affine { n: *n },
            ("Sigma", [n]) => NamedGroup::Sigma { n: *n },
            ("Q", [n]) => NamedGroup::Base { n: *n },
            ("Ztheta", [n, h]) => NamedGroup::Theta { n: *n, h: *h },
            ("Trivial", [n]) => NamedGroup::Trivial { n: *n },
            _ => return Err(unknown()),
        };
        depth(g.n())?;
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        match *self {
            NamedGroup::Translations { n }
            | NamedGroup::FlagTerm { n, .. }
            | NamedGroup::Affine { n }
            | NamedGroup::Sigma { n }
            | NamedGroup::Base { n }
            | NamedGroup::Theta { n, .. }
            | NamedGroup::Trivial { n } => n,
        }
    }

    pub fn key(&self) -> String {
        match *self {
            NamedGroup::Translations { n } => alloc::format!("T:{n}"),
            NamedGroup::FlagTerm { n, i } => alloc::format!("T:{n}:{i}"),
            NamedGroup::Affine { n } => alloc::format!("U:{n}"),
            NamedGroup::Sigma { n } => alloc::format!("Sigma:{n}"),
            NamedGroup::Base { n } => alloc::format!("Q:{n}"),
            NamedGroup::Theta { n, h } => alloc::format!("Ztheta:{n}:{h}"),
            NamedGroup::Trivial { n } => alloc::format!("Trivial:{n}"),
        }
    }

    pub fn build(&self) -> Result<Subgroup> {
        match *self {
            NamedGroup::Translations { n } => translations(n),
            NamedGroup::FlagTerm { n, i } => group_t(n, i),
            NamedGroup::Affine { n } => group_u(n),
            NamedGroup::Sigma { n } => group_sigma(n),
            NamedGroup::Base { n } => group_q(n),
            NamedGroup::Theta { n, h } => upper_central_theta(n, h),
            NamedGroup::Trivial { n } => Ok(Subgroup::trivial(depth(n)?, LF)),
        }
    }

    /// The defining generators, as opposed to the echelonized entries:
    /// `t_n, ..., t_1` for `T`, the `u_{i,j}` for `U`, `s_1, ..., s_n` for `Σ`.
    pub fn defining_generators(&self) -> Result<Vec<Portrait>> {
        match *self {
            NamedGroup::Translations { n } => (1..=n).rev().map(|i| gen_t(n, i)).collect(),
            NamedGroup::FlagTerm { n, i } => {
                check_index("T term", i, 0, n)?;
                (1..=i).rev().map(|k| gen_t(n, k)).collect()
            }
            NamedGroup::Affine { n } => u_generators(n),
            NamedGroup::Sigma { n } => (1..=n).map(|i| gen_s(n, i)).collect(),
            NamedGroup::Base { n } => {
                if n == 0 {
                    return Ok(Vec::new());
                }
                let mut gens = Vec::new();
                for i in 1..n {
                    let s = gen_s(n - 1, i)?;
                    gens.push(s.left_embed()?);
                    gens.push(Portrait::from_parts(false, &Portrait::identity(s.depth()), &s)?);
                }
                Ok(gens)
            }
            NamedGroup::Theta { n, h } => {
                upper_central_theta(n, h)?;
                theta_generators(n, h)
            }
            NamedGroup::Trivial { .. } => Ok(Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::subgroup::{centralizer_by_enumeration, normalizer_by_enumeration};

    fn cyc(p: &Portrait) -> String {
        p.to_permutation().to_string()
    }

    #[test]
    fn generators_expand_to_transpositions() {
        assert_eq!(cyc(&gen_s(3, 3).unwrap()), "(1,5)(2,6)(3,7)(4,8)");
        assert_eq!(cyc(&gen_s(3, 1).unwrap()), "(1,2)");
        assert_eq!(cyc(&gen_t(2, 1).unwrap()), "(1,2)(3,4)");
        assert_eq!(gen_t(3, 3).unwrap(), gen_s(3, 3).unwrap());
        assert!(gen_s(3, 4).is_err());
        assert!(gen_t(3, 0).is_err());
        for n in 1..=6 {
            for i in 1..=n {
                assert!(gen_s(n, i).unwrap().square().is_identity());
                let p = gen_s(n, i).unwrap().to_permutation();
                let h = 1u32 << (i - 1);
                let want: Vec<u32> = (1..=1u32 << n).map(|x| if x <= h { x + h } else if x <= 2 * h { x - h } else { x }).collect();
                assert_eq!(p.images().collect::<Vec<_>>(), want);
            }
        }
    }

    #[test]
    fn t_generators_are_diagonal_copies() {
        for n in 2..=7 {
            for i in 1..n {
                assert_eq!(gen_t(n, i).unwrap(), gen_t(n - 1, i).unwrap().diagonal().unwrap());
            }
        }
    }

    #[test]
    fn center_generator_is_central() {
        for n in 1..=6 {
            let z = gen_t(n, 1).unwrap();
            for i in 1..=n {
                assert_eq!(z.conjugate(&gen_s(n, i).unwrap()).unwrap(), z);
            }
        }
    }

    #[test]
    fn basic_orders() {
        assert_eq!(group_t(5, 5).unwrap().order_log2(), 5);
        assert_eq!(group_sigma(4).unwrap().order_log2(), 15);
        assert_eq!(group_q(4).unwrap().order_log2(), 14);
        let f = flag(3).unwrap();
        assert_eq!(f.terms.iter().map(Subgroup::order_log2).collect::<Vec<_>>(), [0, 1, 2, 3]);
        for n in 2..=11 {
            assert_eq!(group_u(n).unwrap().order_log2(), n * (n + 1) / 2, "n={n}");
        }
        assert_eq!(group_u(2).unwrap(), group_sigma(2).unwrap());
    }

    #[test]
    fn sigma_is_generated_by_the_s_swaps() {
        for n in 0..=5 {
            let gens: Vec<Portrait> = (1..=n).map(|i| gen_s(n, i).unwrap()).collect();
            let g = Subgroup::generate(Depth::new(n).unwrap(), LF, &gens).unwrap();
            assert_eq!(g, group_sigma(n).unwrap());
            assert_eq!(g.order_log2(), (1 << n) - 1);
        }
    }

    #[test]
    fn affine_group_is_the_normalizer_of_translations() {
        for n in 1..=4 {
            let s = group_sigma(n).unwrap();
            let t = translations(n).unwrap();
            assert_eq!(normalizer_by_enumeration(&s, &t, 22).unwrap(), group_u(n).unwrap());
            assert_eq!(centralizer_by_enumeration(&s, &t, 22).unwrap(), t);
        }
    }

    #[test]
    fn embeddings() {
        let t = translations(3).unwrap();
        let s4 = gen_s(4, 4).unwrap();
        let dt = diagonal_embed(&t).unwrap();
        assert_eq!(dt.extend(&[s4]).unwrap(), translations(4).unwrap());
        let l = left_embed(&group_t(2, 1).unwrap()).unwrap();
        let g: Vec<String> = l.generators().map(cyc).collect();
        assert_eq!(g, ["(1,2)(3,4)"]);
    }

    #[test]
    fn theta_indices() {
        for n in 2..=7 {
            let mut prev = 0;
            for h in 1..n.min(5) {
                let z = upper_central_theta(n, h).unwrap();
                assert_eq!(z.order_log2() - prev, h, "n={n} h={h}");
                assert_eq!(z.order_log2(), h * (h + 1) / 2);
                prev = z.order_log2();
            }
        }
        assert!(upper_central_theta(4, 4).is_err());
    }

    #[test]
    fn named_lookup() {
        assert_eq!(NamedGroup::parse("Ztheta:6:3").unwrap(), NamedGroup::Theta { n: 6, h: 3 });
        assert_eq!(NamedGroup::parse("U:6").unwrap().build().unwrap().order_log2(), 21);
        assert!(matches!(NamedGroup::parse("X:3"), Err(Error::UnknownGroup(_))));
        let t = NamedGroup::parse("T:2").unwrap().defining_generators().unwrap();
        let lines: Vec<String> = t.iter().map(cyc).collect();
        assert_eq!(lines, ["(1,3)(2,4)", "(1,2)(3,4)"]);
        assert_eq!(NamedGroup::parse("U:3").unwrap().defining_generators().unwrap().len(), 6);
        let q = NamedGroup::parse("Q:3").unwrap();
        let gens = q.defining_generators().unwrap();
        assert_eq!(Subgroup::generate(Depth::new(3).unwrap(), LF, &gens).unwrap(), q.build().unwrap());
        let p = Permutation::parse_cycles("(1,3)", 4).unwrap();
        assert!(Portrait::from_permutation(&p, Depth::new(2).unwrap()).is_err());
    }
}
