//! Dense matrices over the rationals.
//!
//! Elimination is plain Gaussian elimination on [`Rat`] entries; every
//! intermediate value is reduced on construction so results are exact.

use std::fmt;
use std::ops::Mul;

use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut m = Self::zeros(size, size)?;
        for i in 0..size {
            m.set(i, i, Rat::one());
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Reduces `self` to row echelon form in place, applying the same row
    /// operations to `aug` when given. Returns the pivot columns and the
    /// sign of the row permutation.
    fn eliminate(&mut self, mut aug: Option<&mut RatMatrix>) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut negated = false;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                self.swap_rows(p, row);
                if let Some(a) = aug.as_deref_mut() {
                    a.swap_rows(p, row);
                }
                negated = !negated;
            }
            let pivot = self.get(row, col).clone();
            for r in row + 1..self.rows {
                let factor = self.get(r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c) - &factor * self.get(row, c);
                    self.set(r, c, v);
                }
                if let Some(a) = aug.as_deref_mut() {
                    for c in 0..a.cols {
                        let v = a.get(r, c) - &factor * a.get(row, c);
                        a.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, negated)
    }

    pub fn det(&self) -> Result<Rat> {
        self.require_square("det")?;
        let mut work = self.clone();
        let (pivots, negated) = work.eliminate(None);
        if pivots.len() < self.rows {
            return Ok(Rat::zero());
        }
        let prod: Rat = (0..self.rows).map(|i| work.get(i, i).clone()).product();
        Ok(if negated { -prod } else { prod })
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(None).0.len()
    }

    /// Solves `self · X = rhs` for a matrix right-hand side.
    fn solve_matrix(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.require_square("solve")?;
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {}",
                rhs.rows, self.rows
            )));
        }
        let mut work = self.clone();
        let mut aug = rhs.clone();
        let (pivots, _) = work.eliminate(Some(&mut aug));
        if pivots.len() < self.rows {
            return Err(Error::Singular);
        }
        let n = self.rows;
        for i in (0..n).rev() {
            let pivot = work.get(i, i).clone();
            for c in 0..aug.cols {
                let mut acc = aug.get(i, c).clone();
                for j in i + 1..n {
                    acc -= &(work.get(i, j) * aug.get(j, c));
                }
                aug.set(i, c, acc / &pivot);
            }
        }
        Ok(aug)
    }

    pub fn invert(&self) -> Result<RatMatrix> {
        self.require_square("invert")?;
        self.solve_matrix(&RatMatrix::identity(self.rows)?)
    }

    pub fn solve(&self, rhs: &[Rat]) -> Result<Vec<Rat>> {
        let column = RatMatrix::from_rows(rhs.iter().map(|v| vec![v.clone()]).collect())?;
        Ok(self.solve_matrix(&column)?.entries)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn try_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols)?;
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let v = (0..self.cols).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
                out.set(r, c, v);
            }
        }
        Ok(out)
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    /// Panics on mismatched dimensions; see [`RatMatrix::try_mul`].
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix dimensions")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Rat]> = (0..self.rows).map(|r| self.row(r)).collect();
        f.debug_list().entries(rows).finish()
    }
}
