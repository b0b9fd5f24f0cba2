//! Cells of the complex: increasing tuples of atoms closed under the
//! "least right divisor of the lcm" condition.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::garside::Garside;
use crate::group::Generator;
use crate::interval::Side;

/// An r-cell `[x_1, …, x_r]`, atoms strictly increasing in generator order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub atoms: Vec<Generator>,
}

impl Cell {
    pub fn empty() -> Self {
        Cell { atoms: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.atoms.len()
    }

    /// The cell with the first atom removed.
    pub fn tail(&self) -> Cell {
        Cell { atoms: self.atoms[1..].to_vec() }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", names.join(","))
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cells of degree 0 to `max_degree` together with the simples they span.
#[derive(Debug, Clone)]
pub struct CellBasis {
    /// `cells[r]` lists the r-cells in lexicographic order.
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    /// `lcm[r][c]`: member index of the lcm of cell `c`'s atoms.
    lcm: Vec<Vec<usize>>,
    /// Atoms sorted by generator order, with member indices.
    atoms: Vec<(Generator, usize)>,
}

impl CellBasis {
    pub fn new(g: &Garside, max_degree: usize) -> Result<Self> {
        let interval = g.interval();
        let mut atoms = interval.atoms().to_vec();
        atoms.sort();
        let mut cells = vec![vec![Cell::empty()]];
        let mut lcm = vec![vec![interval.identity()]];
        for r in 1..=max_degree {
            let mut level = Vec::new();
            let mut level_lcm = Vec::new();
            for (tail, &tail_lcm) in cells[r - 1].iter().zip(&lcm[r - 1]) {
                for &(x, xi) in &atoms {
                    if tail.atoms.first().is_some_and(|&first| x >= first) {
                        break;
                    }
                    let joined = interval.join(Side::Right, xi, tail_lcm)?;
                    if least_right_divisor(g, &atoms, joined) == Some(x) {
                        let mut cell_atoms = vec![x];
                        cell_atoms.extend_from_slice(&tail.atoms);
                        level.push(Cell { atoms: cell_atoms });
                        level_lcm.push(joined);
                    }
                }
            }
            let mut order: Vec<usize> = (0..level.len()).collect();
            order.sort_by(|&a, &b| level[a].cmp(&level[b]));
            cells.push(order.iter().map(|&i| level[i].clone()).collect());
            lcm.push(order.iter().map(|&i| level_lcm[i]).collect());
        }
        let index = cells
            .iter()
            .map(|level| level.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        Ok(CellBasis { cells, index, lcm, atoms })
    }

    pub fn max_degree(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, r: usize) -> &[Cell] {
        &self.cells[r]
    }

    pub fn count(&self, r: usize) -> usize {
        self.cells[r].len()
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        self.index.get(cell.degree())?.get(cell).copied()
    }

    pub fn lcm(&self, r: usize, c: usize) -> usize {
        self.lcm[r][c]
    }

    /// Atoms in generator order.
    pub fn atoms(&self) -> &[(Generator, usize)] {
        &self.atoms
    }

    /// Whether the left-divisibility join of every cell's atoms equals the
    /// right-divisibility join used to define the cells. Returns the first
    /// cell where they differ.
    pub fn lcm_sides_disagree(&self, g: &Garside) -> Result<Option<Cell>> {
        let interval = g.interval();
        for r in 1..=self.max_degree() {
            for (c, cell) in self.cells[r].iter().enumerate() {
                let mut left = interval.identity();
                for x in &cell.atoms {
                    let xi = interval.atom(*x).expect("cell atoms are atoms");
                    left = interval.join(Side::Left, left, xi)?;
                }
                if left != self.lcm[r][c] {
                    return Ok(Some(cell.clone()));
                }
            }
        }
        Ok(None)
    }
}

/// The least atom right-dividing a simple, if any.
fn least_right_divisor(g: &Garside, atoms: &[(Generator, usize)], s: usize) -> Option<Generator> {
    atoms
        .iter()
        .find(|&&(_, xi)| g.interval().divides(Side::Right, xi, s))
        .map(|&(x, _)| x)
}

/// The r-cells of the complex, `r ≤ 3`.
pub fn enumerate_cells(g: &Garside, r: usize) -> Result<Vec<Cell>> {
    Ok(CellBasis::new(g, r)?.cells(r).to_vec())
}
