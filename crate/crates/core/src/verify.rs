//! Checks of the structural results against the engine and against enumeration.
//!
//! Every check returns a [`Report`] with one line per compared cell; a
//! mismatch fails the report instead of raising an error.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::chain::{chain_oracle, Engine};
use crate::constructions::{diagonal_embed, flag, group_sigma, group_t, group_u, left_embed, translations, upper_central_theta};
use crate::error::{Error, Result};
use crate::imprimitivity::uniqueness_check;
use crate::perm::Permutation;
use crate::portrait::{Depth, Portrait};
use crate::section;
use crate::split::materialize;
use crate::subgroup::{centralizer_by_enumeration, intersection_by_enumeration, normalizer_by_enumeration, Subgroup};

/// Names accepted by [`run_check`].
pub const CHECKS: &[&str] =
    &["theorem3", "flag", "k4", "upper_central", "uniqueness", "product", "selfcentralizing", "uniserial", "oracle", "portrait"];

/// Default number of cases per depth for the `portrait` check.
pub const PORTRAIT_CASES: u64 = 100_000;
/// Default seed for the randomized checks.
pub const DEFAULT_SEED: u64 = 20_190_601;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: &'static str,
    pub n: u32,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl Report {
    fn new(check: &'static str, n: u32) -> Report {
        Report { check, n, passed: true, lines: Vec::new() }
    }

    fn cell(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn info(&mut self, line: String) {
        self.lines.push(format!("info {line}"));
    }
}

/// Dispatches by check name; `seed` only feeds the randomized checks.
pub fn run_check(name: &str, n: u32, engine: &mut Engine, seed: u64) -> Result<Report> {
    match name {
        "theorem3" => theorem3(n, engine),
        "flag" => flag_prop(n, engine),
        "k4" => k4_theorem(n, engine),
        "upper_central" => upper_central(n),
        "uniqueness" => uniqueness(n),
        "product" => product_corollary(n, engine),
        "selfcentralizing" => self_centralizing(n),
        "uniserial" => uniserial(n),
        "oracle" => oracle(n, engine),
        "portrait" => portrait_properties(n, PORTRAIT_CASES, seed),
        _ => Err(Error::UnknownCheck(String::from(name))),
    }
}

fn require(n: u32, lo: u32, hi: u32) -> Result<()> {
    if n < lo {
        return Err(Error::IndexOutOfRange { what: "check depth", index: n });
    }
    if n > hi {
        return Err(Error::TooLarge { log2_order: (1 << n.min(31)) - 1, bound: (1 << hi) - 1 });
    }
    Ok(())
}

/// `N^1_n`, which is `Σ_n` itself when the chain is already stable.
fn first_normalizer(n: u32, engine: &mut Engine) -> Result<Subgroup> {
    let groups = engine.chain_groups(n, 1)?;
    Ok(groups.last().expect("chain has N^0").clone())
}

fn perm_set(g: &Subgroup) -> Result<BTreeSet<Permutation>> {
    Ok(g.elements(20)?.map(|p| p.to_permutation()).collect())
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `N_{Sym(2^n)}(G)` by running through all of `Sym(2^n)`.
fn sym_normalizer(g: &BTreeSet<Permutation>, degree: usize) -> Result<BTreeSet<Permutation>> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut out = BTreeSet::new();
    loop {
        let x = Permutation::from_zero_based(images.clone());
        let mut normalizes = true;
        for h in g {
            if !g.contains(&h.conjugate(&x)?) {
                normalizes = false;
                break;
            }
        }
        if normalizes {
            out.insert(x);
        }
        if !next_permutation(&mut images) {
            return Ok(out);
        }
    }
}

/// Normalizers in the full symmetric group agree with those in `Σ_n` along the chain.
pub fn theorem3(n: u32, engine: &mut Engine) -> Result<Report> {
    require(n, 1, 3)?;
    let mut rep = Report::new("theorem3", n);
    let groups = engine.chain_groups(n, 9)?;
    for (k, g) in groups.iter().enumerate() {
        let next = groups.get(k + 1).unwrap_or(g);
        let sym = sym_normalizer(&perm_set(g)?, 1 << n)?;
        let want = perm_set(next)?;
        rep.cell(sym == want, format!("k={}: |N_Sym(N^{k})| = {} vs |N^{}| = {}", k + 1, sym.len(), k + 1, want.len()));
    }
    Ok(rep)
}

/// `N^1` normalizes `T_{n,i}` for `i <= n-2`.
pub fn flag_prop(n: u32, engine: &mut Engine) -> Result<Report> {
    require(n, 2, 8)?;
    let mut rep = Report::new("flag", n);
    let n1 = first_normalizer(n, engine)?;
    let f = flag(n)?;
    for (i, term) in f.terms.iter().enumerate().take(n as usize - 1) {
        rep.cell(term.is_normalized_by(&n1)?, format!("N^1 normalizes T_{{{n},{i}}}"));
    }
    let last = n - 1;
    let holds = f.terms[last as usize].is_normalized_by(&n1)?;
    rep.info(format!("N^1 {} T_{{{n},{last}}}", if holds { "also normalizes" } else { "does not normalize" }));
    Ok(rep)
}

/// `Z_h(Θ_m) · T_m`.
fn central_form(m: u32, h: u32) -> Result<Subgroup> {
    upper_central_theta(m, h)?.join(&translations(m)?)
}

fn split_form(k: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    materialize(k, h, true)
}

/// The explicit descriptions of `N^1..N^4` at depth `n`, `k <= min(4, n-2)`.
pub fn k4_closed_forms(n: u32) -> Result<Vec<Subgroup>> {
    require(n, 3, 12)?;
    let m = n - 1;
    let top = (n - 2).min(4);
    let mut out = Vec::new();
    for k in 1..=top {
        let g = match k {
            1 => split_form(&group_u(m)?, &central_form(m, 1)?)?,
            2 => split_form(&group_u(m)?, &central_form(m, 2)?)?,
            3 => {
                let n1 = split_form(&group_u(m - 1)?, &central_form(m - 1, 1)?)?;
                split_form(&n1, &central_form(m, 3)?)?
            }
            _ => {
                let n2 = split_form(&group_u(m - 1)?, &central_form(m - 1, 2)?)?;
                let inner = upper_central_theta(m - 1, 1)?.join(&group_t(m - 1, 4)?)?;
                let c4 = diagonal_embed(&upper_central_theta(m - 1, 3)?)?
                    .join(&left_embed(&inner)?)?
                    .join(&translations(m)?)?;
                split_form(&n2, &c4)?
            }
        };
        out.push(g);
    }
    Ok(out)
}

/// Closed forms for `k <= 4` against the engine's chain cells.
pub fn k4_theorem(n: u32, engine: &mut Engine) -> Result<Report> {
    require(n, 3, 8)?;
    let mut rep = Report::new("k4", n);
    let forms = k4_closed_forms(n)?;
    let groups = engine.chain_groups(n, forms.len() as u32)?;
    for (i, form) in forms.iter().enumerate() {
        let k = i + 1;
        match groups.get(k) {
            Some(g) => rep.cell(
                g == form,
                format!("k={k}: closed form 2^{} vs chain cell 2^{}", form.order_log2(), g.order_log2()),
            ),
            None => rep.cell(false, format!("k={k}: chain ended before this cell")),
        }
    }
    Ok(rep)
}

/// Upper central terms of `Θ_n` against iterated quotient centers of `U_n` over `T_n`.
pub fn upper_central(n: u32) -> Result<Report> {
    require(n, 2, 8)?;
    let mut rep = Report::new("upper_central", n);
    let u = group_u(n)?;
    let t = translations(n)?;
    let mut prev = t.clone();
    for h in 1..n {
        let z = section::by_quotient_table(&u, &u, &prev, 40)?;
        let form = central_form(n, h)?;
        let step = z.order_log2() - prev.order_log2();
        rep.cell(z == form, format!("h={h}: Z_h(Θ_{n}) · T_{n} matches the quotient center"));
        rep.cell(step == h, format!("h={h}: |Z_h : Z_(h-1)| = 2^{step}"));
        prev = z;
    }
    rep.cell(prev == u, format!("Z_{}(Θ_{n}) · T_{n} = U_{n}", n - 1));
    Ok(rep)
}

/// Every elementary abelian regular subgroup of `Σ_n` is conjugate to `T_n`.
pub fn uniqueness(n: u32) -> Result<Report> {
    require(n, 1, 3)?;
    let mut rep = Report::new("uniqueness", n);
    let u = uniqueness_check(n)?;
    rep.cell(
        u.all_conjugate && u.found == u.class_size,
        format!("{} regular elementary abelian subgroups, conjugacy class of T_{n} has {}", u.found, u.class_size),
    );
    Ok(rep)
}

/// `|T_n T_n^g| = 2^(n+2)` and `T_n ∩ T_n^g = T_{n,n-2}` for `g ∈ N^1 \ U_n`.
pub fn product_corollary(n: u32, engine: &mut Engine) -> Result<Report> {
    require(n, 3, 8)?;
    let mut rep = Report::new("product", n);
    let u = group_u(n)?;
    let n1 = first_normalizer(n, engine)?;
    let mut g = None;
    for x in n1.generators() {
        if !u.contains(x)? {
            g = Some(x.clone());
            break;
        }
    }
    let Some(g) = g else {
        rep.cell(false, String::from("N^1 = U_n"));
        return Ok(rep);
    };
    let t = translations(n)?;
    let tg = t.conjugate(&g)?;
    let prod = t.join(&tg)?;
    rep.cell(prod.order_log2() == n + 2, format!("|T_{n} · T_{n}^g| = 2^{}", prod.order_log2()));
    let meet = intersection_by_enumeration(&t, &tg, 16)?;
    rep.cell(meet == group_t(n, n - 2)?, format!("T_{n} ∩ T_{n}^g has order 2^{} and equals T_{{{n},{}}}", meet.order_log2(), n - 2));
    Ok(rep)
}

/// `C_{Σ_n}(T_n) = T_n`.
pub fn self_centralizing(n: u32) -> Result<Report> {
    require(n, 1, 4)?;
    let mut rep = Report::new("selfcentralizing", n);
    let t = translations(n)?;
    let c = centralizer_by_enumeration(&group_sigma(n)?, &t, 22)?;
    rep.cell(c == t, format!("C_Σ(T_{n}) has order 2^{}", c.order_log2()));
    Ok(rep)
}

/// The `U_n`-invariant subgroups of `T_n` are exactly the flag terms.
pub fn uniserial(n: u32) -> Result<Report> {
    require(n, 1, 4)?;
    let mut rep = Report::new("uniserial", n);
    let t = translations(n)?;
    let u = group_u(n)?;
    let elems: Vec<_> = t.elements(8)?.filter(|p| !p.is_identity()).collect();
    // every subgroup of T_n is spanned by at most n of its elements
    let mut subgroups = BTreeSet::new();
    let mut frontier = alloc::vec![Subgroup::trivial(t.depth(), t.node_order())];
    subgroups.insert(frontier[0].clone());
    while let Some(s) = frontier.pop() {
        for e in &elems {
            if s.contains(e)? {
                continue;
            }
            let bigger = s.extend(core::slice::from_ref(e))?;
            if subgroups.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut invariant = Vec::new();
    for s in &subgroups {
        if s.is_normalized_by(&u)? {
            invariant.push(s.clone());
        }
    }
    let terms: BTreeSet<Subgroup> = flag(n)?.terms.into_iter().collect();
    let got: BTreeSet<Subgroup> = invariant.into_iter().collect();
    rep.info(format!("{} subgroups of T_{n}", subgroups.len()));
    rep.cell(got == terms, format!("{} U_{n}-invariant subgroups, flag has {} terms", got.len(), terms.len()));
    Ok(rep)
}

/// Structural chain against iterated enumeration in `Σ_n`, cell by cell and group by group.
pub fn oracle(n: u32, engine: &mut Engine) -> Result<Report> {
    require(n, 1, 4)?;
    let mut rep = Report::new("oracle", n);
    let bound = engine.config().enum_bound_log2.max((1 << n) - 1);
    let fast = engine.chain(n, 9)?;
    let slow = chain_oracle(n, bound)?;
    rep.cell(fast.orders() == slow.orders(), format!("orders {:?} vs oracle {:?}", fast.orders(), slow.orders()));
    let groups = engine.chain_groups(n, 9)?;
    let sigma = group_sigma(n)?;
    for k in 1..groups.len() {
        let want = normalizer_by_enumeration(&sigma, &groups[k - 1], bound)?;
        rep.cell(groups[k] == want, format!("k={k}: N^{k} equals N_Σ(N^{})", k - 1));
    }
    if n >= 2 {
        let t = translations(n)?;
        rep.cell(engine.lemma2_normalizer(&t)? == group_u(n)?, format!("semidirect reduction gives N(T_{n}) = U_{n}"));
        let n1 = first_normalizer(n, engine)?;
        rep.cell(engine.lemma2_normalizer(&group_u(n)?)? == n1, format!("semidirect reduction gives N(U_{n}) = N^1"));
    }
    Ok(rep)
}

fn random_portrait(depth: Depth, rng: &mut ChaCha8Rng) -> Portrait {
    let mut p = Portrait::identity(depth);
    let mut word = 0u64;
    for node in 1..depth.node_count() + 1 {
        if node % 64 == 1 {
            word = rng.next_u64();
        }
        p.set(node, word >> (node % 64) & 1 == 1);
    }
    p
}

/// Random portraits against their permutations: the product is a
/// homomorphism, associative, and permutation, hex and inverse round trips
/// are exact. One report line per property with its failure count.
pub fn portrait_properties(n: u32, cases: u64, seed: u64) -> Result<Report> {
    require(n, 1, 8)?;
    let depth = Depth::new(n)?;
    let mut rep = Report::new("portrait", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(n));
    let id = Portrait::identity(depth);
    let mut fails = [0u64; 3];
    for _ in 0..cases {
        let a = random_portrait(depth, &mut rng);
        let b = random_portrait(depth, &mut rng);
        let c = random_portrait(depth, &mut rng);
        let ab = &a * &b;
        if ab.to_permutation() != a.to_permutation().then(&b.to_permutation())? {
            fails[0] += 1;
        }
        if &ab * &c != &a * &(&b * &c) {
            fails[1] += 1;
        }
        let back = Portrait::from_permutation(&a.to_permutation(), depth)?;
        let hex = Portrait::from_hex(&a.to_hex())?;
        if back != a || hex != a || &a * &a.inverse() != id || a.inverse().to_permutation() != a.to_permutation().inverse() {
            fails[2] += 1;
        }
    }
    for (name, f) in ["homomorphism", "associativity", "round trips"].into_iter().zip(fails) {
        rep.cell(f == 0, format!("{name}: {f} failures in {cases} cases"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::EngineConfig;

    #[test]
    fn next_permutation_counts() {
        let mut v = [0u32, 1, 2, 3];
        let mut c = 1;
        while next_permutation(&mut v) {
            c += 1;
        }
        assert_eq!(c, 24);
        assert_eq!(v, [3, 2, 1, 0]);
    }

    #[test]
    fn quick_checks_pass() {
        let mut e = Engine::new(EngineConfig::default()).unwrap();
        for (name, n) in [("flag", 4), ("k4", 4), ("upper_central", 4), ("product", 4), ("selfcentralizing", 3), ("uniqueness", 2), ("uniserial", 3), ("oracle", 3), ("theorem3", 2), ("portrait", 3)] {
            let r = run_check(name, n, &mut e, DEFAULT_SEED).unwrap();
            assert!(r.passed, "{name}: {:?}", r.lines);
        }
        assert!(matches!(run_check("nope", 3, &mut e, 0), Err(Error::UnknownCheck(_))));
    }
}
