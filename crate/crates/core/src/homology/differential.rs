//! Differentials of the complex with trivial coefficients.
//!
//! The closed forms cover the cell shapes that occur for B(e,e,n); the
//! generic version runs the defining recursion with coefficients in the
//! monoid and augments at the end.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::garside::{Garside, NormalForm};
use crate::group::Generator;

use super::cells::{Cell, CellBasis};
use super::snf::IntMatrix;

/// How two atoms interact in the presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pair {
    Braid,
    Commute,
    /// Two t's; only `[t_0, t_i]` occurs as a cell.
    Dual,
}

fn pair_kind(x: Generator, y: Generator) -> Pair {
    use Generator::{S, T};
    match (x, y) {
        (T(_), T(_)) => Pair::Dual,
        (S(a), S(b)) if a.abs_diff(b) == 1 => Pair::Braid,
        (S(3), T(_)) | (T(_), S(3)) => Pair::Braid,
        _ => Pair::Commute,
    }
}

/// Sparse column being assembled against a cell basis.
struct Column<'a> {
    basis: &'a CellBasis,
    entries: BTreeMap<usize, i64>,
}

impl<'a> Column<'a> {
    fn new(basis: &'a CellBasis) -> Self {
        Column { basis, entries: BTreeMap::new() }
    }

    fn add(&mut self, atoms: &[Generator], coeff: i64) -> Result<()> {
        let cell = Cell { atoms: atoms.to_vec() };
        let row = self.basis.index_of(&cell).ok_or_else(|| {
            Error::TheoremViolation(format!("closed form refers to {cell}, which is not a cell"))
        })?;
        *self.entries.entry(row).or_default() += coeff;
        Ok(())
    }
}

/// Closed-form d_r for r ∈ {1, 2, 3}: rows are (r−1)-cells, columns r-cells.
pub fn differential_closed_form(g: &Garside, basis: &CellBasis, r: usize) -> Result<IntMatrix> {
    if !(1..=3).contains(&r) || r > basis.max_degree() {
        return Err(Error::Unsupported(format!("closed-form differential of degree {r}")));
    }
    let e = g.params().e();
    let k = g.k();
    let t = |i: i64| Generator::T(i.rem_euclid(e as i64) as u32);
    let (ki, ei) = (k as i64, e as i64);
    let mut m = IntMatrix::zeros(basis.count(r - 1), basis.count(r));
    for (c, cell) in basis.cells(r).iter().enumerate() {
        let mut col = Column::new(basis);
        match cell.atoms[..] {
            [_] => {}
            [x, y] => match pair_kind(x, y) {
                Pair::Dual => {
                    let Generator::T(i) = y else { unreachable!() };
                    let i = i as i64;
                    if x != t(0) {
                        return Err(no_formula(cell));
                    }
                    col.add(&[t(i)], 1)?;
                    col.add(&[t(0)], -1)?;
                    col.add(&[t(ki)], -1)?;
                    col.add(&[t(i + ki)], 1)?;
                }
                Pair::Braid => {
                    col.add(&[y], 1)?;
                    col.add(&[x], -1)?;
                }
                Pair::Commute => {}
            },
            [x, y, z] => {
                if y.is_t() {
                    let Generator::T(j) = z else { return Err(no_formula(cell)) };
                    if y != t(0) || x.is_t() {
                        return Err(no_formula(cell));
                    }
                    let j = j as i64;
                    if x == Generator::S(3) {
                        if (j + ki).rem_euclid(ei) != 0 {
                            col.add(&[t(0), t(j)], 1)?;
                            col.add(&[x, t(j)], -1)?;
                            col.add(&[t(0), t(j + ki)], -1)?;
                            col.add(&[t(0), t(ki)], 1)?;
                            col.add(&[x, t(j + 2 * ki)], 1)?;
                            col.add(&[x, t(0)], 1)?;
                            col.add(&[x, t(2 * ki)], -1)?;
                        } else {
                            col.add(&[t(0), t(j)], 1)?;
                            col.add(&[x, t(j)], -1)?;
                            col.add(&[x, t(ki)], 1)?;
                            col.add(&[t(0), t(ki)], 1)?;
                            col.add(&[x, t(0)], 1)?;
                            col.add(&[x, t(2 * ki)], -1)?;
                        }
                    } else {
                        col.add(&[x, t(j)], -1)?;
                        col.add(&[x, t(0)], 1)?;
                        col.add(&[x, t(j + ki)], -1)?;
                        col.add(&[x, t(ki)], 1)?;
                    }
                } else {
                    let kinds = (pair_kind(x, y), pair_kind(x, z), pair_kind(y, z));
                    match kinds {
                        (Pair::Braid, Pair::Commute, Pair::Braid) => col.add(&[x, z], -2)?,
                        (Pair::Braid, Pair::Commute, Pair::Commute) => {
                            col.add(&[y, z], 1)?;
                            col.add(&[x, z], -1)?;
                        }
                        (Pair::Commute, Pair::Commute, Pair::Braid) => {
                            col.add(&[x, y], 1)?;
                            col.add(&[x, z], -1)?;
                        }
                        (Pair::Commute, Pair::Commute, Pair::Commute) => {}
                        _ => return Err(no_formula(cell)),
                    }
                }
            }
            _ => return Err(no_formula(cell)),
        }
        for (row, v) in col.entries {
            m.add_to(row, c, v);
        }
    }
    Ok(m)
}

fn no_formula(cell: &Cell) -> Error {
    Error::TheoremViolation(format!("cell {cell} matches no closed-form case"))
}

/// Element of ℤM ⊗ C_r: `(cell index, monoid coefficient) ↦ multiplicity`.
pub type Chain = BTreeMap<(usize, NormalForm), i64>;

fn add_term(chain: &mut Chain, cell: usize, coeff: NormalForm, v: i64) {
    if v == 0 {
        return;
    }
    let key = (cell, coeff);
    let slot = chain.entry(key.clone()).or_default();
    *slot += v;
    if *slot == 0 {
        chain.remove(&key);
    }
}

fn add_chain(acc: &mut Chain, other: Chain) {
    for ((c, f), v) in other {
        add_term(acc, c, f, v);
    }
}

/// Runs the recursive definition of ∂, s and u over the monoid ring.
pub struct GenericComplex<'a> {
    g: &'a Garside,
    basis: &'a CellBasis,
    /// Atom member indices in generator order.
    atoms: Vec<(Generator, usize)>,
    boundary_memo: HashMap<(usize, usize), Chain>,
    section_memo: HashMap<(usize, NormalForm, usize), Chain>,
    steps: usize,
    max_steps: usize,
}

impl<'a> GenericComplex<'a> {
    pub fn new(g: &'a Garside, basis: &'a CellBasis, max_steps: usize) -> Self {
        GenericComplex {
            g,
            basis,
            atoms: basis.atoms().to_vec(),
            boundary_memo: HashMap::new(),
            section_memo: HashMap::new(),
            steps: 0,
            max_steps,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Error::cap("recursion steps", self.steps as u128, self.max_steps));
        }
        Ok(())
    }

    /// Least atom right-dividing a positive element.
    fn least_right_divisor(&self, f: &NormalForm) -> Option<Generator> {
        self.atoms.iter().find(|&&(_, xi)| self.g.right_divides(xi, f)).map(|&(x, _)| x)
    }

    /// α_{/A} for the r-cell `[α, A]` with index `c`: lcm(α, A) · lcm(A)⁻¹.
    fn quotient(&self, r: usize, c: usize, tail: usize) -> Result<usize> {
        let interval = self.g.interval();
        let full = interval.element(self.basis.lcm(r, c));
        let part = interval.element(self.basis.lcm(r - 1, tail));
        let q = full.mul_unchecked(&part.inverse());
        interval.index_of(&q).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "lcm of {} is not a left multiple of the lcm of its tail",
                self.basis.cells(r)[c]
            ))
        })
    }

    fn tail_index(&self, r: usize, c: usize) -> usize {
        let tail = self.basis.cells(r)[c].tail();
        self.basis.index_of(&tail).expect("the tail of a cell is a cell")
    }

    fn left_multiply(&self, x: &NormalForm, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for ((c, f), &v) in chain {
            add_term(&mut out, *c, self.g.multiply(x, f), v);
        }
        out
    }

    /// ∂_r applied to the basis cell `c` of degree r ≥ 1.
    pub fn boundary(&mut self, r: usize, c: usize) -> Result<Chain> {
        if let Some(ch) = self.boundary_memo.get(&(r, c)) {
            return Ok(ch.clone());
        }
        self.tick()?;
        let tail = self.tail_index(r, c);
        let q = self.g.simple(self.quotient(r, c, tail)?);
        let mut out = Chain::new();
        add_term(&mut out, tail, q.clone(), 1);
        let correction = self.u(r - 1, &q, tail)?;
        for ((cell, f), v) in correction {
            add_term(&mut out, cell, f, -v);
        }
        self.boundary_memo.insert((r, c), out.clone());
        Ok(out)
    }

    /// u_r(f[A]) = s_{r−1}(f · ∂_r[A]), with u_0(f[∅]) = [∅].
    fn u(&mut self, r: usize, f: &NormalForm, cell: usize) -> Result<Chain> {
        if r == 0 {
            let mut out = Chain::new();
            add_term(&mut out, 0, NormalForm::default(), 1);
            return Ok(out);
        }
        let d = self.boundary(r, cell)?;
        let image = self.left_multiply(f, &d);
        self.section_chain(r - 1, image)
    }

    /// s_r extended linearly.
    fn section_chain(&mut self, r: usize, chain: Chain) -> Result<Chain> {
        let mut out = Chain::new();
        for ((c, f), v) in chain {
            let piece = self.section(r, &f, c)?;
            for ((c2, f2), v2) in piece {
                add_term(&mut out, c2, f2, v * v2);
            }
        }
        Ok(out)
    }

    /// s_r(x[A]) for the r-cell `A` with index `cell`.
    fn section(&mut self, r: usize, x: &NormalForm, cell: usize) -> Result<Chain> {
        let key = (r, x.clone(), cell);
        if let Some(ch) = self.section_memo.get(&key) {
            return Ok(ch.clone());
        }
        self.tick()?;
        let lcm = self.g.simple(self.basis.lcm(r, cell));
        let product = self.g.multiply(x, &lcm);
        let a_cell = &self.basis.cells(r)[cell];
        let out = match self.least_right_divisor(&product) {
            None => Chain::new(),
            Some(alpha) if a_cell.atoms.first() == Some(&alpha) => Chain::new(),
            Some(alpha) => {
                let mut atoms = vec![alpha];
                atoms.extend_from_slice(&a_cell.atoms);
                let bigger = Cell { atoms };
                let c = self.basis.index_of(&bigger).ok_or_else(|| {
                    Error::TheoremViolation(format!("{bigger} is not a cell"))
                })?;
                let q = self.quotient(r + 1, c, cell)?;
                let y = self.g.right_quotient(x, q).ok_or_else(|| {
                    Error::TheoremViolation(format!(
                        "{} is not right-divisible by the quotient for {bigger}",
                        self.g.spell(x)
                    ))
                })?;
                let mut out = Chain::new();
                add_term(&mut out, c, y.clone(), 1);
                let u = self.u(r, &self.g.simple(q), cell)?;
                let rest = self.left_multiply(&y, &u);
                add_chain(&mut out, self.section_chain(r, rest)?);
                out
            }
        };
        self.section_memo.insert(key, out.clone());
        Ok(out)
    }

    /// d_r with every monoid coefficient replaced by 1.
    pub fn augmented(&mut self, r: usize) -> Result<IntMatrix> {
        if r == 0 || r > self.basis.max_degree() {
            return Err(Error::Unsupported(format!("generic differential of degree {r}")));
        }
        let mut m = IntMatrix::zeros(self.basis.count(r - 1), self.basis.count(r));
        for c in 0..self.basis.count(r) {
            for ((row, _), v) in self.boundary(r, c)? {
                m.add_to(row, c, v);
            }
        }
        Ok(m)
    }
}

/// Generic d_r, `1 ≤ r ≤ 3`.
pub fn differential_generic(
    g: &Garside,
    basis: &CellBasis,
    r: usize,
    max_steps: usize,
) -> Result<IntMatrix> {
    GenericComplex::new(g, basis, max_steps).augmented(r)
}
