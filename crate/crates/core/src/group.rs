//! Exact arithmetic in the complex reflection group G(e,e,n).
//!
//! An element is an n×n monomial matrix whose nonzero entries are e-th roots
//! of unity with product 1. We store it as a pair (σ, ε): row `i` has its
//! nonzero entry in column `σ(i)` and that entry is `ζ_e^{ε(i)}`. Roots of
//! unity are never materialized; `ζ_e^a` is the integer `a mod e`.
//!
//! Rows and columns are 1-based in every public accessor and serialized
//! form. Internally `perm` is stored 0-based.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of group elements any enumeration may produce.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// The pair (e, n) fixing the group G(e,e,n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    e: u32,
    n: usize,
}

impl GroupParams {
    pub fn new(e: u32, n: usize) -> Result<Self> {
        if e < 2 {
            return Err(Error::InvalidParams(format!("e must be at least 2, got {e}")));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        if e > u16::MAX as u32 || n > u8::MAX as usize {
            return Err(Error::InvalidParams(format!("e={e}, n={n} is too large")));
        }
        Ok(GroupParams { e, n })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `e^(n-1) · n!`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        let mut order: u128 = 1;
        for _ in 1..self.n {
            order = order.checked_mul(self.e as u128)?;
        }
        for m in 2..=self.n as u128 {
            order = order.checked_mul(m)?;
        }
        Some(order)
    }

    /// Checks `1 ≤ k ≤ e-1`.
    pub fn check_k(&self, k: u32) -> Result<()> {
        if k == 0 || k >= self.e {
            return Err(Error::InvalidParams(format!(
                "k must satisfy 1 <= k <= e-1 = {}, got {k}",
                self.e - 1
            )));
        }
        Ok(())
    }

    /// The generating set X = {t_0, …, t_{e-1}, s_3, …, s_n}, in the order
    /// t's first, then s's by increasing index.
    pub fn generators(&self) -> Vec<Generator> {
        (0..self.e)
            .map(Generator::T)
            .chain((3..=self.n as u32).map(Generator::S))
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        identity(*self)
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.e, self.e, self.n)
    }
}

/// An atom of the generating set: `T(i)` for `i ∈ ℤ/eℤ` or `S(j)` for `3 ≤ j ≤ n`.
///
/// The ordering is s_n < s_{n-1} < ⋯ < s_3 < t_0 < t_1 < ⋯ < t_{e-1}, which
/// does not depend on (e, n). Cells of the homology complex are sorted by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    T(u32),
    S(u32),
}

impl Generator {
    pub fn check(&self, params: GroupParams) -> Result<()> {
        let ok = match *self {
            Generator::T(i) => i < params.e,
            Generator::S(j) => j >= 3 && (j as usize) <= params.n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange {
                generator: self.to_string(),
                e: params.e,
                n: params.n,
            })
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Generator::T(_))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Generator::S(a), Generator::S(b)) => b.cmp(a),
            (Generator::S(_), Generator::T(_)) => Ordering::Less,
            (Generator::T(_), Generator::S(_)) => Ordering::Greater,
            (Generator::T(a), Generator::T(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::T(i) => write!(f, "t{i}"),
            Generator::S(j) => write!(f, "s{j}"),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidToken {
            token: s.to_string(),
            reason: reason.to_string(),
        };
        let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let tail = tail.strip_prefix('_').unwrap_or(tail);
        let index: u32 = tail.parse().map_err(|_| bad("expected an index after the letter"))?;
        match head {
            "t" => Ok(Generator::T(index)),
            "s" => Ok(Generator::S(index)),
            _ => Err(bad("expected a generator of the form tI or sJ")),
        }
    }
}

/// A word over the generating set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    /// Parses a whitespace-separated word such as `"t0 s3 t1"`, checking every
    /// letter against `params`. Inverse letters are rejected here.
    pub fn parse(s: &str, params: GroupParams) -> Result<Self> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token.contains('^') {
                return Err(Error::InvalidToken {
                    token: token.to_string(),
                    reason: "inverse letters are only accepted by the monoid-level parser"
                        .to_string(),
                });
            }
            let g: Generator = token.parse()?;
            g.check(params)?;
            letters.push(g);
        }
        Ok(Word(letters))
    }

    /// The product of the generator matrices, left to right.
    pub fn evaluate(&self, params: GroupParams) -> Result<GroupElement> {
        let mut acc = identity(params);
        for &g in &self.0 {
            acc = acc.mul_generator(g, params)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromIterator<Generator> for Word {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A monomial matrix of G(e,e,n).
///
/// The derived ordering is lexicographic on (σ, ε), which is the enumeration
/// order used throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    e: u32,
    perm: Vec<u8>,
    exps: Vec<u16>,
}

impl GroupElement {
    /// Builds an element from a 1-based permutation and an exponent vector.
    /// Exponents are reduced mod e.
    pub fn from_parts(e: u32, perm: &[usize], exps: &[i64]) -> Result<Self> {
        let n = perm.len();
        let params = GroupParams::new(e, n)?;
        if exps.len() != n {
            return Err(Error::InvalidElement(format!(
                "perm has length {n} but exps has length {}",
                exps.len()
            )));
        }
        let mut seen = vec![false; n];
        for &c in perm {
            if c == 0 || c > n || seen[c - 1] {
                return Err(Error::InvalidElement(format!("{perm:?} is not a permutation of 1..{n}")));
            }
            seen[c - 1] = true;
        }
        let exps: Vec<u16> = exps.iter().map(|&a| a.rem_euclid(e as i64) as u16).collect();
        let sum: u64 = exps.iter().map(|&a| a as u64).sum();
        if sum % e as u64 != 0 {
            return Err(Error::InvalidElement(format!(
                "product of the nonzero entries is ζ^{} ≠ 1",
                sum % e as u64
            )));
        }
        Ok(GroupElement {
            e: params.e,
            perm: perm.iter().map(|&c| (c - 1) as u8).collect(),
            exps,
        })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn params(&self) -> GroupParams {
        GroupParams { e: self.e, n: self.n() }
    }

    /// Column `c_i` of the nonzero entry of row `i` (both 1-based).
    pub fn col(&self, i: usize) -> usize {
        self.perm[i - 1] as usize + 1
    }

    /// Exponent `a` with `w[i, c_i] = ζ_e^a`, for 1-based row `i`.
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i - 1] as u32
    }

    /// The 1-based permutation `[σ(1), …, σ(n)]`.
    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&c| c as usize + 1).collect()
    }

    pub fn exps(&self) -> Vec<u32> {
        self.exps.iter().map(|&a| a as u32).collect()
    }

    pub(crate) fn raw_perm(&self) -> &[u8] {
        &self.perm
    }

    pub(crate) fn raw_exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &c)| c as usize == i) && self.exps.iter().all(|&a| a == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &c)| c as usize == i)
    }

    fn check_same(&self, other: &GroupElement) -> Result<()> {
        if self.e != other.e || self.n() != other.n() {
            return Err(Error::ParamMismatch {
                e1: self.e,
                n1: self.n(),
                e2: other.e,
                n2: other.n(),
            });
        }
        Ok(())
    }

    /// The matrix product `self · other`.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        let e = self.e as u32;
        let mut perm = Vec::with_capacity(self.n());
        let mut exps = Vec::with_capacity(self.n());
        for (&c, &a) in self.perm.iter().zip(&self.exps) {
            let c = c as usize;
            perm.push(other.perm[c]);
            exps.push(((a as u32 + other.exps[c] as u32) % e) as u16);
        }
        GroupElement { e: self.e, perm, exps }
    }

    /// The inverse, i.e. the conjugate transpose.
    pub fn inverse(&self) -> GroupElement {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut exps = vec![0u16; n];
        for (i, (&c, &a)) in self.perm.iter().zip(&self.exps).enumerate() {
            perm[c as usize] = i as u8;
            exps[c as usize] = ((self.e - a as u32) % self.e) as u16;
        }
        GroupElement { e: self.e, perm, exps }
    }

    /// `self · x` for a generator `x`.
    pub fn mul_generator(&self, x: Generator, params: GroupParams) -> Result<GroupElement> {
        let g = generator_matrix(x, params)?;
        self.multiply(&g)
    }

    /// `x · self` for a generator `x`.
    pub fn left_mul_generator(&self, x: Generator, params: GroupParams) -> Result<GroupElement> {
        let g = generator_matrix(x, params)?;
        g.multiply(self)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            e: self.e,
            n: self.n(),
            perm: self.perm(),
            exps: self.exps(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?)
    }
}

/// Serialized form `{"e":3,"n":4,"perm":[4,2,3,1],"exps":[0,2,1,0]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub e: u32,
    pub n: usize,
    pub perm: Vec<usize>,
    pub exps: Vec<u32>,
}

impl ElementJson {
    pub fn to_element(&self) -> Result<GroupElement> {
        if self.perm.len() != self.n {
            return Err(Error::InvalidElement(format!(
                "n = {} but perm has length {}",
                self.n,
                self.perm.len()
            )));
        }
        let exps: Vec<i64> = self.exps.iter().map(|&a| a as i64).collect();
        GroupElement::from_parts(self.e, &self.perm, &exps)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let json: ElementJson =
            serde_json::from_str(s).map_err(|err| Error::InvalidElement(err.to_string()))?;
        json.to_element()
    }
}

pub fn identity(params: GroupParams) -> GroupElement {
    GroupElement {
        e: params.e,
        perm: (0..params.n as u8).collect(),
        exps: vec![0; params.n],
    }
}

/// The matrix of a generator: t_i has ζ^{-i} at (1,2) and ζ^{i} at (2,1);
/// s_j is the transposition of rows j-1 and j.
pub fn generator_matrix(g: Generator, params: GroupParams) -> Result<GroupElement> {
    g.check(params)?;
    let mut w = identity(params);
    match g {
        Generator::T(i) => {
            w.perm.swap(0, 1);
            w.exps[0] = ((params.e - i) % params.e) as u16;
            w.exps[1] = i as u16;
        }
        Generator::S(j) => {
            w.perm.swap(j as usize - 2, j as usize - 1);
        }
    }
    Ok(w)
}

/// λ^k = diag(ζ^{-k(n-1)}, ζ^k, …, ζ^k).
pub fn lambda_power(params: GroupParams, k: u64) -> GroupElement {
    let e = params.e as u64;
    let k = k % e;
    let first = (e - (k * (params.n as u64 - 1)) % e) % e;
    let mut exps = vec![k as u16; params.n];
    exps[0] = first as u16;
    GroupElement {
        e: params.e,
        perm: (0..params.n as u8).collect(),
        exps,
    }
}

/// Every element of G(e,e,n), lexicographically ordered on (σ, ε).
pub fn enumerate_group(params: GroupParams, cap: usize) -> Result<Vec<GroupElement>> {
    let order = params.order().unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::cap("group enumeration", order, cap));
    }
    let n = params.n;
    let e = params.e as u16;
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    let mut out = Vec::with_capacity(order as usize);
    for perm in perms {
        let mut prefix = vec![0u16; n - 1];
        loop {
            let sum: u32 = prefix.iter().map(|&a| a as u32).sum();
            let mut exps = prefix.clone();
            exps.push(((e as u32 - sum % e as u32) % e as u32) as u16);
            out.push(GroupElement {
                e: params.e,
                perm: perm.clone(),
                exps,
            });
            // odometer increment, last position fastest
            let mut pos = n - 1;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                prefix[pos] += 1;
                if prefix[pos] < e {
                    pos = usize::MAX;
                    break;
                }
                prefix[pos] = 0;
            }
            if pos != usize::MAX {
                break;
            }
        }
    }
    Ok(out)
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: u32, n: usize) -> GroupParams {
        GroupParams::new(e, n).unwrap()
    }

    fn el(e: u32, perm: &[usize], exps: &[i64]) -> GroupElement {
        GroupElement::from_parts(e, perm, exps).unwrap()
    }

    #[test]
    fn identity_coordinates() {
        let id = identity(p(3, 3));
        assert_eq!(id.perm(), vec![1, 2, 3]);
        assert_eq!(id.exps(), vec![0, 0, 0]);
        for w in enumerate_group(p(3, 2), DEFAULT_GROUP_CAP).unwrap() {
            assert_eq!(identity(p(3, 2)).multiply(&w).unwrap(), w);
        }
    }

    #[test]
    fn generator_matrices() {
        let params = p(3, 3);
        let t0 = generator_matrix(Generator::T(0), params).unwrap();
        assert_eq!((t0.perm(), t0.exps()), (vec![2, 1, 3], vec![0, 0, 0]));
        let t1 = generator_matrix(Generator::T(1), params).unwrap();
        assert_eq!((t1.perm(), t1.exps()), (vec![2, 1, 3], vec![2, 1, 0]));
        let s3 = generator_matrix(Generator::S(3), params).unwrap();
        assert_eq!((s3.perm(), s3.exps()), (vec![1, 3, 2], vec![0, 0, 0]));
    }

    #[test]
    fn generator_out_of_range() {
        let params = p(3, 3);
        assert!(generator_matrix(Generator::T(3), params).is_err());
        assert!(generator_matrix(Generator::S(4), params).is_err());
        assert!(generator_matrix(Generator::S(2), params).is_err());
        assert!(generator_matrix(Generator::S(3), p(3, 2)).is_err());
    }

    #[test]
    fn multiply_examples() {
        let params = p(3, 4);
        let g = |x| generator_matrix(x, params).unwrap();
        let t1 = g(Generator::T(1));
        assert!(t1.multiply(&t1).unwrap().is_identity());
        let (s3, s4) = (g(Generator::S(3)), g(Generator::S(4)));
        let lhs = s3.multiply(&s4).unwrap().multiply(&s3).unwrap();
        let rhs = s4.multiply(&s3).unwrap().multiply(&s4).unwrap();
        assert_eq!(lhs, rhs);

        // t1·t0 = t2·t1 in G(3,3,2), checked against explicit 2×2 products:
        // t1·t0 = [[0,ζ²],[ζ,0]]·[[0,1],[1,0]] = [[ζ²,0],[0,ζ]]
        let params = p(3, 2);
        let g = |x| generator_matrix(x, params).unwrap();
        let a = g(Generator::T(1)).multiply(&g(Generator::T(0))).unwrap();
        let b = g(Generator::T(2)).multiply(&g(Generator::T(1))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, el(3, &[1, 2], &[2, 1]));
    }

    #[test]
    fn multiply_rejects_mismatch() {
        let a = identity(p(3, 3));
        let b = identity(p(4, 3));
        assert!(matches!(a.multiply(&b), Err(Error::ParamMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        let params = p(3, 3);
        assert!(identity(params).inverse().is_identity());
        for i in 0..3 {
            let t = generator_matrix(Generator::T(i), params).unwrap();
            assert_eq!(t.inverse(), t);
        }
        let all = enumerate_group(params, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(all.len(), 54);
        for w in &all {
            assert!(w.inverse().multiply(w).unwrap().is_identity());
            assert!(w.multiply(&w.inverse()).unwrap().is_identity());
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_group(p(2, 2), DEFAULT_GROUP_CAP).unwrap().len(), 4);
        let all = enumerate_group(p(3, 3), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(all.len(), 54);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all, "enumeration is sorted and duplicate free");
        assert!(all.contains(&identity(p(3, 3))));
        assert!(all.contains(&lambda_power(p(3, 3), 1)));
        for (e, n) in [(2, 2), (3, 2), (4, 3), (2, 4), (5, 3)] {
            let params = p(e, n);
            let all = enumerate_group(params, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(all.len() as u128, params.order().unwrap());
        }
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_group(p(3, 4), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { needed: 648, cap: 100, .. }));
    }

    #[test]
    fn lambda_examples() {
        let params = p(3, 3);
        assert_eq!(lambda_power(params, 1).exps(), vec![1, 1, 1]);
        assert!(lambda_power(params, 0).is_identity());
        assert!(lambda_power(params, 3).is_identity());
        let l = lambda_power(params, 1);
        assert_eq!(l.multiply(&l).unwrap(), lambda_power(params, 2));
    }

    #[test]
    fn params_validation() {
        assert!(GroupParams::new(1, 3).is_err());
        assert!(GroupParams::new(3, 1).is_err());
        let params = p(4, 3);
        assert!(params.check_k(0).is_err());
        assert!(params.check_k(4).is_err());
        assert!(params.check_k(3).is_ok());
    }

    #[test]
    fn element_json() {
        let w: GroupElement = r#"{"e":3,"n":4,"perm":[4,2,3,1],"exps":[0,2,1,0]}"#.parse().unwrap();
        assert_eq!(w.col(1), 4);
        assert_eq!(w.exp(2), 2);
        assert_eq!(w.to_string(), r#"{"e":3,"n":4,"perm":[4,2,3,1],"exps":[0,2,1,0]}"#);
        assert!(r#"{"e":3,"n":2,"perm":[1,2],"exps":[1,0]}"#.parse::<GroupElement>().is_err());
        assert!(r#"{"e":3,"n":2,"perm":[1,1],"exps":[0,0]}"#.parse::<GroupElement>().is_err());
    }

    #[test]
    fn word_parsing() {
        let params = p(3, 4);
        let w = Word::parse("t0 s3 t1 t0 s4 s3 t0", params).unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.to_string(), "t0 s3 t1 t0 s4 s3 t0");
        assert!(Word::parse("t0^-1", params).is_err());
        assert!(Word::parse("t3", params).is_err());
        assert!(Word::parse("x1", params).is_err());
        assert_eq!("t_2".parse::<Generator>().unwrap(), Generator::T(2));
    }

    #[test]
    fn atom_order() {
        let mut atoms = p(3, 5).generators();
        atoms.sort();
        let names: Vec<String> = atoms.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["s5", "s4", "s3", "t0", "t1", "t2"]);
    }
}
