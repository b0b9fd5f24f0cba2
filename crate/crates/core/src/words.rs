//! Reduced expressions and the length function over the generating set X.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{enumerate_group, generator_matrix, GroupElement, GroupParams, Generator, Word};

/// `s_2` plays the role of `t_0` in the reduction loop.
fn s(j: usize) -> Generator {
    if j == 2 {
        Generator::T(0)
    } else {
        Generator::S(j as u32)
    }
}

/// Reduces `w` to the identity by right multiplications and returns the
/// word recording them, in reverse.
///
/// At step `i` the nonzero entry of row `i` sits at column `c`. A nontrivial
/// root is pushed into column 1 and cleared by `t_k`; the resulting 1 is then
/// pushed to the diagonal.
pub fn reduced_expression(w: &GroupElement) -> Word {
    let params = w.params();
    let gen = |x: Generator| generator_matrix(x, params).expect("generator in range");
    let mut scratch = w.clone();
    // Letters are collected in the order they are applied; the result is
    // the reversal.
    let mut applied = Vec::new();
    for i in (2..=params.n()).rev() {
        let mut c = scratch.col(i);
        let k = scratch.exp(i);
        if k != 0 {
            for j in (2..=c).rev() {
                scratch = scratch.mul_unchecked(&gen(s(j)));
                applied.push(s(j));
            }
            scratch = scratch.mul_unchecked(&gen(Generator::T(k)));
            applied.push(Generator::T(k));
            c = 2;
        }
        for j in c + 1..=i {
            scratch = scratch.mul_unchecked(&gen(s(j)));
            applied.push(s(j));
        }
        debug_assert_eq!((scratch.col(i), scratch.exp(i)), (i, 0));
    }
    debug_assert!(scratch.is_identity());
    applied.reverse();
    Word(applied)
}

/// One step of the block recursion: the block `w_i` and the word it contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub row: usize,
    /// Column of the nonzero entry of the last row of the block.
    pub col: usize,
    /// Exponent of that entry.
    pub exp: u32,
    pub word: Word,
}

/// The blocks `w_n, …, w_2`, stored in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    /// The word `RE_i(w)` for `2 ≤ i ≤ n`.
    pub fn word(&self, i: usize) -> Option<&Word> {
        self.blocks.iter().find(|b| b.row == i).map(|b| &b.word)
    }

    /// `RE_2(w) RE_3(w) ⋯ RE_n(w)`.
    pub fn concat(&self) -> Word {
        self.blocks.iter().rev().flat_map(|b| b.word.0.iter().copied()).collect()
    }
}

/// Length of the word contributed by a block whose last row `i` has its
/// entry `ζ^k` in column `c`.
fn block_len(i: usize, c: usize, k: u32) -> usize {
    match (k, c) {
        (0, _) => i - c,
        (_, 1) => i - 1,
        (_, 2) => i,
        (_, c) => i + c - 2,
    }
}

fn block_word(i: usize, c: usize, k: u32) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(block_len(i, c, k));
    if k == 0 {
        out.extend((c + 1..=i).rev().map(s));
    } else {
        out.extend((3..=i).rev().map(s));
        out.push(Generator::T(k));
        if c >= 2 {
            out.push(Generator::T(0));
        }
        out.extend((3..=c).map(s));
    }
    Word(out)
}

/// Walks the blocks `w_n ⊃ ⋯ ⊃ w_2` without multiplying matrices: `w_{i-1}`
/// is `w_i` with row `i` and column `c` removed and its first column scaled
/// by the removed entry. Calls `visit(i, c, k)` once per block.
fn walk_blocks(w: &GroupElement, mut visit: impl FnMut(usize, usize, u32)) {
    let e = w.e();
    let mut cols: Vec<u8> = w.raw_perm().to_vec();
    let mut exps: Vec<u16> = w.raw_exps().to_vec();
    for i in (2..=w.n()).rev() {
        let c = cols[i - 1] as usize;
        let k = exps[i - 1] as u32;
        visit(i, c + 1, k);
        cols.truncate(i - 1);
        exps.truncate(i - 1);
        for (col, a) in cols.iter_mut().zip(exps.iter_mut()) {
            if *col as usize > c {
                *col -= 1;
            }
            if *col == 0 {
                *a = ((*a as u32 + k) % e) as u16;
            }
        }
    }
}

/// The block recursion with the closed-form word of each block.
pub fn reduced_expression_blockwise(w: &GroupElement) -> BlockDecomposition {
    let mut blocks = Vec::with_capacity(w.n().saturating_sub(1));
    walk_blocks(w, |row, col, exp| {
        blocks.push(Block {
            row,
            col,
            exp,
            word: block_word(row, col, exp),
        })
    });
    BlockDecomposition { blocks }
}

/// The length ℓ(w) over X.
pub fn length(w: &GroupElement) -> usize {
    let mut total = 0;
    walk_blocks(w, |i, c, k| total += block_len(i, c, k));
    total
}

/// Whether ℓ(xw) = ℓ(w) − 1, read off from (σ, ε) without computing lengths.
pub fn length_decreases(x: Generator, w: &GroupElement) -> bool {
    match x {
        Generator::S(i) => {
            let i = i as usize;
            if w.col(i - 1) < w.col(i) {
                w.exp(i) != 0
            } else {
                w.exp(i - 1) == 0
            }
        }
        Generator::T(k) => {
            if w.col(1) < w.col(2) {
                w.exp(2) != 0
            } else {
                (w.exp(1) + k) % w.e() == 0
            }
        }
    }
}

/// Whether ℓ(wx) = ℓ(w) − 1. Inversion preserves length and every generator
/// is an involution, so this is the left test applied to `w⁻¹`.
pub fn length_decreases_right(x: Generator, w: &GroupElement) -> bool {
    length_decreases(x, &w.inverse())
}

/// The diagonal elements whose entries in rows 2..n are all different from 1.
pub fn maximal_length_elements(params: GroupParams, cap: usize) -> Result<Vec<GroupElement>> {
    let count = ((params.e() - 1) as u128).checked_pow(params.n() as u32 - 1).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::cap("maximal-length elements", count, cap));
    }
    let e = params.e();
    let n = params.n();
    let perm: Vec<usize> = (1..=n).collect();
    let mut tail = vec![1u32; n - 1];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let sum: u32 = tail.iter().sum();
        let mut exps = vec![(e - sum % e) as i64 % e as i64];
        exps.extend(tail.iter().map(|&a| a as i64));
        out.push(GroupElement::from_parts(e, &perm, &exps)?);
        let mut pos = tail.len();
        loop {
            if pos == 0 {
                out.sort();
                return Ok(out);
            }
            pos -= 1;
            tail[pos] += 1;
            if tail[pos] < e {
                break;
            }
            tail[pos] = 1;
        }
    }
}

/// Every reduced expression of `w`, found by peeling off a left generator
/// that shortens the element.
pub fn all_reduced_expressions(w: &GroupElement, cap: usize) -> Result<Vec<Word>> {
    let params = w.params();
    let atoms = params.generators();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    descend(w, &atoms, params, &mut prefix, &mut out, cap)?;
    Ok(out)
}

fn descend(
    w: &GroupElement,
    atoms: &[Generator],
    params: GroupParams,
    prefix: &mut Vec<Generator>,
    out: &mut Vec<Word>,
    cap: usize,
) -> Result<()> {
    if w.is_identity() {
        if out.len() >= cap {
            return Err(Error::cap("reduced expressions", out.len() as u128 + 1, cap));
        }
        out.push(Word(prefix.clone()));
        return Ok(());
    }
    for &x in atoms {
        if length_decreases(x, w) {
            let rest = w.left_mul_generator(x, params)?;
            prefix.push(x);
            descend(&rest, atoms, params, prefix, out, cap)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// Graph distance from the identity in the Cayley graph of (G(e,e,n), X),
/// by breadth-first search.
pub fn cayley_distances(params: GroupParams, cap: usize) -> Result<HashMap<GroupElement, usize>> {
    let order = params.order().unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::cap("Cayley graph search", order, cap));
    }
    let gens: Vec<GroupElement> = params
        .generators()
        .into_iter()
        .map(|x| generator_matrix(x, params))
        .collect::<Result<_>>()?;
    let mut dist = HashMap::with_capacity(order as usize);
    let mut queue = VecDeque::new();
    let start = params.identity();
    dist.insert(start.clone(), 0);
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for g in &gens {
            let next = w.mul_unchecked(g);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    Ok(dist)
}

/// Lengths of every element of the group, in enumeration order.
pub fn length_table(params: GroupParams, cap: usize) -> Result<Vec<(GroupElement, usize)>> {
    Ok(enumerate_group(params, cap)?
        .into_iter()
        .map(|w| {
            let l = length(&w);
            (w, l)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{identity, lambda_power, DEFAULT_GROUP_CAP};

    fn p(e: u32, n: usize) -> GroupParams {
        GroupParams::new(e, n).unwrap()
    }

    fn worked_example() -> GroupElement {
        GroupElement::from_parts(3, &[4, 2, 3, 1], &[0, 2, 1, 0]).unwrap()
    }

    #[test]
    fn worked_example_word() {
        let w = worked_example();
        assert_eq!(reduced_expression(&w).to_string(), "t0 s3 t1 t0 s4 s3 t0");
        let blocks = reduced_expression_blockwise(&w);
        assert_eq!(blocks.word(2).unwrap().to_string(), "t0");
        assert_eq!(blocks.word(3).unwrap().to_string(), "s3 t1 t0");
        assert_eq!(blocks.word(4).unwrap().to_string(), "s4 s3 t0");
        assert_eq!(length(&w), 7);
    }

    #[test]
    fn identity_is_empty() {
        let id = identity(p(4, 4));
        assert!(reduced_expression(&id).is_empty());
        assert!(reduced_expression_blockwise(&id).blocks.iter().all(|b| b.word.is_empty()));
        assert_eq!(length(&id), 0);
    }

    #[test]
    fn lambda_word() {
        let params = p(5, 4);
        let word = reduced_expression(&lambda_power(params, 1));
        assert_eq!(word.to_string(), "t1 t0 s3 t1 t0 s3 s4 s3 t1 t0 s3 s4");
        for k in 1..5 {
            assert_eq!(length(&lambda_power(params, k)), 12);
        }
    }

    #[test]
    fn words_evaluate_back() {
        for (e, n) in [(2, 2), (3, 3), (4, 3), (2, 4), (3, 4)] {
            let params = p(e, n);
            for w in enumerate_group(params, DEFAULT_GROUP_CAP).unwrap() {
                let word = reduced_expression(&w);
                assert_eq!(word.evaluate(params).unwrap(), w);
                assert_eq!(reduced_expression_blockwise(&w).concat(), word);
                assert_eq!(length(&w), word.len());
            }
        }
    }

    #[test]
    fn length_matches_bfs() {
        for (e, n) in [(3, 3), (4, 2), (2, 4)] {
            let params = p(e, n);
            let dist = cayley_distances(params, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(dist.len() as u128, params.order().unwrap());
            for (w, d) in dist {
                assert_eq!(length(&w), d, "{w}");
            }
        }
    }

    #[test]
    fn predicate_matches_lengths() {
        for (e, n) in [(3, 3), (4, 3), (5, 2)] {
            let params = p(e, n);
            for w in enumerate_group(params, DEFAULT_GROUP_CAP).unwrap() {
                let l = length(&w);
                for x in params.generators() {
                    let xw = w.left_mul_generator(x, params).unwrap();
                    assert_eq!(length_decreases(x, &w), length(&xw) + 1 == l);
                    let wx = w.mul_generator(x, params).unwrap();
                    assert_eq!(length_decreases_right(x, &w), length(&wx) + 1 == l);
                }
            }
        }
    }

    #[test]
    fn predicate_examples() {
        let params = p(3, 3);
        let lambda = lambda_power(params, 1);
        assert!(length_decreases(Generator::T(1), &lambda));
        for x in params.generators() {
            assert!(!length_decreases(x, &identity(params)));
        }
    }

    #[test]
    fn maximal_length_census() {
        assert_eq!(maximal_length_elements(p(3, 3), 100).unwrap().len(), 4);
        let only = maximal_length_elements(p(2, 4), 100).unwrap();
        assert_eq!(only, vec![lambda_power(p(2, 4), 1)]);
        for (e, n) in [(3, 3), (4, 3), (2, 4)] {
            let params = p(e, n);
            let top = maximal_length_elements(params, 1000).unwrap();
            let max = n * (n - 1);
            for w in enumerate_group(params, DEFAULT_GROUP_CAP).unwrap() {
                assert_eq!(length(&w) == max, top.contains(&w));
                assert!(length(&w) <= max);
            }
        }
    }

    #[test]
    fn reduced_expression_enumeration() {
        let params = p(3, 2);
        assert_eq!(all_reduced_expressions(&identity(params), 10).unwrap(), vec![Word::new()]);
        let t0 = generator_matrix(Generator::T(0), params).unwrap();
        let words = all_reduced_expressions(&t0, 10).unwrap();
        assert_eq!(words, vec![Word(vec![Generator::T(0)])]);
        let w = Word::parse("t1 t0", params).unwrap().evaluate(params).unwrap();
        let mut words: Vec<String> =
            all_reduced_expressions(&w, 10).unwrap().iter().map(|w| w.to_string()).collect();
        words.sort();
        assert_eq!(words, ["t0 t2", "t1 t0", "t2 t1"]);
        assert!(all_reduced_expressions(&w, 2).is_err());
    }
}
