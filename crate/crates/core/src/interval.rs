//! Divisibility orders on G(e,e,n) and the intervals [1, λ^k].
//!
//! Members of an [`Interval`] are numbered by increasing length, ties broken
//! by the element order, so the identity is member 0 and λ^k is the last one.
//! Every divisibility query between members is a bitset lookup.

use std::collections::{HashMap, HashSet};
use std::fmt;

use base64::Engine;
use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    enumerate_group, generator_matrix, lambda_power, ElementJson, GroupElement, GroupParams,
    Generator, Word,
};
use crate::words::{length, length_decreases, length_decreases_right, maximal_length_elements};

/// `a ⪯ b`: `b = a·c` with ℓ(b) = ℓ(a) + ℓ(c).
///
/// Peels the letters of a reduced expression of `a` off the left of `b`,
/// requiring the length to drop at every step.
pub fn left_divides(a: &GroupElement, b: &GroupElement) -> Result<bool> {
    let params = b.params();
    if a.params() != params {
        return Err(Error::ParamMismatch { e1: a.e(), n1: a.n(), e2: b.e(), n2: b.n() });
    }
    let mut cur = b.clone();
    for &x in crate::words::reduced_expression(a).letters() {
        if !length_decreases(x, &cur) {
            return Ok(false);
        }
        cur = cur.left_mul_generator(x, params)?;
    }
    Ok(true)
}

/// `a ⪯_r b`: `b = c·a` with ℓ(b) = ℓ(c) + ℓ(a). Equivalent to `a⁻¹ ⪯ b⁻¹`.
pub fn right_divides(a: &GroupElement, b: &GroupElement) -> Result<bool> {
    left_divides(&a.inverse(), &b.inverse())
}

/// Rows whose entry is a strict left-to-right minimum of the column sequence.
pub fn bullet_rows(w: &GroupElement) -> Vec<bool> {
    let mut min = usize::MAX;
    (1..=w.n())
        .map(|i| {
            let c = w.col(i);
            let bullet = c < min;
            min = min.min(c);
            bullet
        })
        .collect()
}

/// Staircase membership test for `D_k`: every entry that is not a bullet is 1 or ζ^k.
pub fn in_dk(w: &GroupElement, k: u32) -> bool {
    let k = k % w.e();
    bullet_rows(w)
        .into_iter()
        .enumerate()
        .all(|(i, bullet)| bullet || w.exp(i + 1) == 0 || w.exp(i + 1) == k)
}

/// All left or right divisors of `w`, found by stripping letters that shorten it.
pub fn divisors(w: &GroupElement, side: Side, cap: usize) -> Result<HashSet<GroupElement>> {
    let params = w.params();
    let gens: Vec<(Generator, GroupElement)> = params
        .generators()
        .into_iter()
        .map(|x| generator_matrix(x, params).map(|g| (x, g)))
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut stack = vec![w.clone()];
    seen.insert(w.clone());
    while let Some(b) = stack.pop() {
        for (x, g) in &gens {
            let smaller = match side {
                Side::Left if length_decreases_right(*x, &b) => b.mul_unchecked(g),
                Side::Right if length_decreases(*x, &b) => g.mul_unchecked(&b),
                _ => continue,
            };
            if seen.insert(smaller.clone()) {
                if seen.len() > cap {
                    return Err(Error::cap("divisor search", seen.len() as u128, cap));
                }
                stack.push(smaller);
            }
        }
    }
    Ok(seen)
}

/// Whether the left and right divisor sets of `w` coincide.
pub fn is_balanced(w: &GroupElement, cap: usize) -> Result<bool> {
    Ok(divisors(w, Side::Left, cap)? == divisors(w, Side::Right, cap)?)
}

/// The balanced elements of maximal length. They are exactly the powers
/// λ^k with 1 ≤ k ≤ e−1; any other outcome is reported as a violation.
pub fn balanced_max_length(params: GroupParams, cap: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for w in maximal_length_elements(params, cap)? {
        if is_balanced(&w, cap)? {
            out.push(w);
        }
    }
    let mut expected: Vec<GroupElement> =
        (1..params.e() as u64).map(|k| lambda_power(params, k)).collect();
    expected.sort();
    if out != expected {
        return Err(Error::TheoremViolation(format!(
            "balanced maximal-length elements of {params} are not the powers of λ: found {}",
            out.len()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Meet,
    Join,
}

/// A pair of members whose common divisors (or multiples) have no unique
/// greatest (or least) element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{side} {kind:?} of members {a} and {b} is not unique: maximal candidates {antichain:?}")]
pub struct LatticeViolation {
    pub side: Side,
    pub kind: BoundKind,
    pub a: usize,
    pub b: usize,
    /// The extremal elements of the common bound set, an antichain of size ≥ 2.
    pub antichain: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub left_meet: bool,
    pub left_join: bool,
    pub right_meet: bool,
    pub right_join: bool,
    pub counterexample: Option<LatticeViolation>,
}

impl LatticeReport {
    pub fn is_lattice(&self) -> bool {
        self.left_meet && self.left_join && self.right_meet && self.right_join
    }
}

/// The interval `[1, λ^k]` with both divisibility relations tabulated.
#[derive(Debug, Clone)]
pub struct Interval {
    params: GroupParams,
    k: u32,
    members: Vec<GroupElement>,
    lengths: Vec<usize>,
    index: HashMap<GroupElement, usize>,
    /// `down[side][b]` holds every member dividing `b` on that side.
    down: [Vec<FixedBitSet>; 2],
    /// `up[side][a]` holds every member that `a` divides on that side.
    up: [Vec<FixedBitSet>; 2],
    atoms: Vec<(Generator, usize)>,
}

impl Interval {
    /// Builds `[1, λ^k]` from the staircase criterion and checks, over the
    /// whole group, that it is both the left and the right divisor set of λ^k.
    pub fn build(params: GroupParams, k: u32, cap: usize) -> Result<Self> {
        params.check_k(k)?;
        let group = enumerate_group(params, cap)?;
        let lambda = lambda_power(params, k as u64);
        let mismatch = group.par_iter().find_map_any(|w| {
            let staircase = in_dk(w, k);
            let left = left_divides(w, &lambda).ok()?;
            let right = right_divides(w, &lambda).ok()?;
            (staircase != left || staircase != right).then(|| w.clone())
        });
        if let Some(w) = mismatch {
            return Err(Error::TheoremViolation(format!(
                "{w} disagrees between the staircase test and divisibility of λ^{k}"
            )));
        }
        let mut members: Vec<(usize, GroupElement)> = group
            .into_iter()
            .filter(|w| in_dk(w, k))
            .map(|w| (length(&w), w))
            .collect();
        members.sort();
        let (lengths, members): (Vec<usize>, Vec<GroupElement>) = members.into_iter().unzip();
        Self::from_members(params, k, members, lengths)
    }

    fn from_members(
        params: GroupParams,
        k: u32,
        members: Vec<GroupElement>,
        lengths: Vec<usize>,
    ) -> Result<Self> {
        let size = members.len();
        let index: HashMap<GroupElement, usize> =
            members.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let gens: Vec<(Generator, GroupElement)> = params
            .generators()
            .into_iter()
            .map(|x| generator_matrix(x, params).map(|g| (x, g)))
            .collect::<Result<_>>()?;

        let mut down: [Vec<FixedBitSet>; 2] = [Vec::with_capacity(size), Vec::with_capacity(size)];
        for (b, w) in members.iter().enumerate() {
            let inverse = w.inverse();
            for side in Side::BOTH {
                let mut set = FixedBitSet::with_capacity(size);
                set.insert(b);
                for (x, g) in &gens {
                    // Covers: b = c·x on the left order, b = x·c on the right one.
                    let c = match side {
                        Side::Left if length_decreases(*x, &inverse) => w.mul_unchecked(g),
                        Side::Right if length_decreases(*x, w) => g.mul_unchecked(w),
                        _ => continue,
                    };
                    let Some(&ci) = index.get(&c) else {
                        return Err(Error::TheoremViolation(format!(
                            "{side} divisor {c} of a member lies outside the interval"
                        )));
                    };
                    set.union_with(&down[side.slot()][ci]);
                }
                down[side.slot()].push(set);
            }
        }

        let mut up = [
            vec![FixedBitSet::with_capacity(size); size],
            vec![FixedBitSet::with_capacity(size); size],
        ];
        for side in Side::BOTH {
            for (b, set) in down[side.slot()].iter().enumerate() {
                for a in set.ones() {
                    up[side.slot()][a].insert(b);
                }
            }
        }

        let atoms = gens
            .iter()
            .map(|(x, g)| {
                index.get(g).map(|&i| (*x, i)).ok_or_else(|| {
                    Error::TheoremViolation(format!("generator {x} is not in the interval"))
                })
            })
            .collect::<Result<_>>()?;

        Ok(Interval { params, k, members, lengths, index, down, up, atoms })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.members[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// The member λ^k.
    pub fn top(&self) -> usize {
        self.members.len() - 1
    }

    /// The generators with their member indices, t's first.
    pub fn atoms(&self) -> &[(Generator, usize)] {
        &self.atoms
    }

    pub fn atom(&self, x: Generator) -> Option<usize> {
        self.atoms.iter().find(|(y, _)| *y == x).map(|&(_, i)| i)
    }

    /// Index of the group product of two members, if it is a member.
    pub fn product(&self, a: usize, b: usize) -> Option<usize> {
        self.index_of(&self.members[a].mul_unchecked(&self.members[b]))
    }

    pub fn divides(&self, side: Side, a: usize, b: usize) -> bool {
        self.down[side.slot()][b].contains(a)
    }

    pub fn down_set(&self, side: Side, b: usize) -> &FixedBitSet {
        &self.down[side.slot()][b]
    }

    pub fn up_set(&self, side: Side, a: usize) -> &FixedBitSet {
        &self.up[side.slot()][a]
    }

    /// Greatest common divisor on `side`.
    pub fn meet(&self, side: Side, a: usize, b: usize) -> Result<usize, LatticeViolation> {
        let mut common = self.down[side.slot()][a].clone();
        common.intersect_with(&self.down[side.slot()][b]);
        self.extremum(side, BoundKind::Meet, a, b, &common)
    }

    /// Least common multiple on `side`.
    pub fn join(&self, side: Side, a: usize, b: usize) -> Result<usize, LatticeViolation> {
        let mut common = self.up[side.slot()][a].clone();
        common.intersect_with(&self.up[side.slot()][b]);
        self.extremum(side, BoundKind::Join, a, b, &common)
    }

    fn extremum(
        &self,
        side: Side,
        kind: BoundKind,
        a: usize,
        b: usize,
        common: &FixedBitSet,
    ) -> Result<usize, LatticeViolation> {
        // Member order refines length, so the last (first) common bound is
        // the only candidate for a greatest (least) one.
        let candidate = match kind {
            BoundKind::Meet => common.maximum(),
            BoundKind::Join => common.minimum(),
        };
        let tables = match kind {
            BoundKind::Meet => &self.down[side.slot()],
            BoundKind::Join => &self.up[side.slot()],
        };
        if let Some(c) = candidate {
            if common.is_subset(&tables[c]) {
                return Ok(c);
            }
        }
        let antichain = common
            .ones()
            .filter(|&c| common.ones().all(|d| d == c || !tables[d].contains(c)))
            .collect();
        Err(LatticeViolation { side, kind, a, b, antichain })
    }

    /// Checks that every pair of members has a unique meet and join on both sides.
    pub fn verify_lattice(&self) -> LatticeReport {
        let mut report = LatticeReport {
            left_meet: true,
            left_join: true,
            right_meet: true,
            right_join: true,
            counterexample: None,
        };
        for side in Side::BOTH {
            for kind in [BoundKind::Meet, BoundKind::Join] {
                let found = (0..self.len()).into_par_iter().find_map_first(|a| {
                    (a..self.len()).find_map(|b| {
                        let r = match kind {
                            BoundKind::Meet => self.meet(side, a, b),
                            BoundKind::Join => self.join(side, a, b),
                        };
                        r.err()
                    })
                });
                if let Some(v) = found {
                    match (side, kind) {
                        (Side::Left, BoundKind::Meet) => report.left_meet = false,
                        (Side::Left, BoundKind::Join) => report.left_join = false,
                        (Side::Right, BoundKind::Meet) => report.right_meet = false,
                        (Side::Right, BoundKind::Join) => report.right_join = false,
                    }
                    report.counterexample.get_or_insert(v);
                }
            }
        }
        report
    }

    /// Joins of every pair of generators on both sides, checked against the
    /// closed-form identities for atom lcms.
    pub fn atom_lcm_table(&self) -> Result<Vec<AtomLcm>> {
        let params = self.params;
        let k = self.k;
        let e = params.e();
        let eval = |word: &[Generator]| -> Result<GroupElement> { Word(word.to_vec()).evaluate(params) };
        let mut table = Vec::new();
        for &(x, xi) in &self.atoms {
            for &(y, yi) in &self.atoms {
                let left = self.join(Side::Left, xi, yi)?;
                let right = self.join(Side::Right, xi, yi)?;
                use Generator::{S, T};
                let expected: Vec<Generator> = match (x, y) {
                    _ if x == y => vec![x],
                    (T(_), T(_)) => vec![T(k), T(0)],
                    (T(i), S(3)) | (S(3), T(i)) => vec![T(i), S(3), T(i)],
                    (T(i), S(j)) | (S(j), T(i)) => vec![T(i), S(j)],
                    (S(i), S(j)) if i.abs_diff(j) == 1 => vec![S(i), S(j), S(i)],
                    (S(i), S(j)) => vec![S(i), S(j)],
                };
                let expected_el = eval(&expected)?;
                let ok = self.members[left] == expected_el && left == right;
                if !ok {
                    return Err(Error::TheoremViolation(format!(
                        "lcm of {x} and {y} in [1, λ^{k}] of {params} (e={e}) is not {}",
                        Word(expected)
                    )));
                }
                table.push(AtomLcm { x, y, left, right, word: Word(expected) });
            }
        }
        Ok(table)
    }

    /// Hasse diagram of the left order in DOT.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "digraph interval {{\n  label=\"[1, lambda^{}] in G({},{},{})\";\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n",
            self.k,
            self.params.e(),
            self.params.e(),
            self.params.n()
        ));
        for (i, w) in self.members.iter().enumerate() {
            out.push_str(&format!(
                "  m{i} [label=\"{}\"];\n",
                crate::words::reduced_expression(w)
            ));
        }
        for (a, w) in self.members.iter().enumerate() {
            for (x, ai) in &self.atoms {
                let _ = ai;
                let g = generator_matrix(*x, self.params).expect("generator in range");
                if let Some(b) = self.index_of(&w.mul_unchecked(&g)) {
                    if self.lengths[b] == self.lengths[a] + 1 {
                        out.push_str(&format!("  m{a} -> m{b} [label=\"{x}\"];\n"));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Members plus both relations; row `a` has bit `b` set iff `a` divides `b`.
    pub fn to_json(&self) -> IntervalJson {
        let rows = |side: Side| -> Vec<String> {
            self.up[side.slot()].iter().map(|set| encode_bits(set, self.len())).collect()
        };
        IntervalJson {
            e: self.params.e(),
            n: self.params.n(),
            k: self.k,
            size: self.len(),
            members: self.members.iter().map(GroupElement::to_json).collect(),
            lengths: self.lengths.clone(),
            left_divides: rows(Side::Left),
            right_divides: rows(Side::Right),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomLcm {
    pub x: Generator,
    pub y: Generator,
    pub left: usize,
    pub right: usize,
    pub word: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalJson {
    pub e: u32,
    pub n: usize,
    pub k: u32,
    pub size: usize,
    pub members: Vec<ElementJson>,
    pub lengths: Vec<usize>,
    /// Base64 of the row bitset, bit `b` at byte `b / 8`, position `b % 8`.
    pub left_divides: Vec<String>,
    pub right_divides: Vec<String>,
}

fn encode_bits(set: &FixedBitSet, len: usize) -> String {
    let mut bytes = vec![0u8; len.div_ceil(8)];
    for b in set.ones() {
        bytes[b / 8] |= 1 << (b % 8);
    }
    base64::engine::general_purpose::STANDARD.encode(bytes)
}
