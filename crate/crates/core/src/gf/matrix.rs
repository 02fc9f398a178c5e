//! Dense row-major matrices over GF(q) with exact Gaussian elimination.
//!
//! Pivoting is deterministic: columns are processed left to right and the first row
//! (from the current rank down) with a nonzero entry becomes the pivot.

use crate::error::{Error, Result};
use crate::gf::field::{FiniteField, Fq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: FqMatrix,
    pub pivots: Vec<usize>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![Fq::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FqMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from columns, each given as a sparse list of `(row, value)`.
    pub fn from_sparse_columns(rows: usize, columns: &[Vec<(usize, Fq)>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &FiniteField, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(out.get(i, j), a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, f: &FiniteField, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Fq::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect()
    }

    /// Selects a subset of rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        FqMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (k, &c) in idx.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    /// Stacks `other` to the right of `self`.
    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hconcat row counts".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Core elimination. With `reduce_above` the result is fully reduced (RREF);
    /// otherwise only rows below each pivot are cleared.
    fn eliminate(&mut self, f: &FiniteField, reduce_above: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        let cols = self.cols;
        let mut pivot_support: Vec<(usize, Fq)> = Vec::new();
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(rank, pr);
            let inv = f.inv(self.get(rank, c)).expect("pivot is nonzero");
            pivot_support.clear();
            for k in c..cols {
                let v = self.get(rank, k);
                if !v.is_zero() {
                    let nv = f.mul(v, inv);
                    self.set(rank, k, nv);
                    pivot_support.push((k, nv));
                }
            }
            let start = if reduce_above { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                let base = r * cols;
                for &(k, v) in &pivot_support {
                    let idx = base + k;
                    self.data[idx] = f.mul_add(self.data[idx], nf, v);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        // eliminate along the shorter side
        if self.rows < self.cols {
            let mut t = self.transpose();
            t.eliminate(f, false).len()
        } else {
            let mut m = self.clone();
            m.eliminate(f, false).len()
        }
    }

    pub fn echelon(&self, f: &FiniteField) -> Echelon {
        let mut m = self.clone();
        let pivots = m.eliminate(f, true);
        Echelon { rref: m, pivots }
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self, f: &FiniteField) -> Vec<Vec<Fq>> {
        let Echelon { rref, pivots } = self.echelon(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fq::ZERO; self.cols];
            v[free] = Fq::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rref.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix, by Gaussian elimination.
    pub fn determinant(&self, f: &FiniteField) -> Result<Fq> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fq::ONE;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(Fq::ZERO);
            };
            if piv != c {
                for k in 0..n {
                    let (a, b) = (m.get(c, k), m.get(piv, k));
                    m.set(c, k, b);
                    m.set(piv, k, a);
                }
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = f.sub(m.get(r, k), f.mul(factor, m.get(c, k)));
                    m.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, f: &FiniteField, b: &[Fq]) -> Result<Option<Vec<Fq>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let col = FqMatrix {
            rows: self.rows,
            cols: 1,
            data: b.to_vec(),
        };
        let aug = self.hconcat(&col)?;
        let Echelon { rref, pivots } = aug.echelon(f);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fq::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.get(r, self.cols);
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field::FiniteField;

    #[test]
    fn zero_and_identity_ranks() {
        let f = FiniteField::prime(5).unwrap();
        assert_eq!(FqMatrix::zeros(3, 3).rank(&f), 0);
        assert_eq!(FqMatrix::identity(4).rank(&f), 4);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let f = FiniteField::prime(5).unwrap();
        assert!(FqMatrix::identity(3).kernel(&f).is_empty());
        assert_eq!(FqMatrix::zeros(2, 3).kernel(&f).len(), 3);
    }

    #[test]
    fn kernel_of_one_by_two() {
        // (1, 2) over GF(5): kernel spanned by (-2, 1)
        let f = FiniteField::prime(5).unwrap();
        let m = FqMatrix::from_rows(vec![vec![f.from_int(1), f.from_int(2)]]).unwrap();
        let k = m.kernel(&f);
        assert_eq!(k, vec![vec![f.from_int(3), f.from_int(1)]]);
        // enumeration over GF(5)^2: exactly 5 solutions, all multiples of k[0]
        let mut count = 0;
        for a in f.elements() {
            for b in f.elements() {
                if m.mul_vec(&f, &[a, b])[0].is_zero() {
                    count += 1;
                    assert_eq!(f.mul(b, f.from_int(3)), a);
                }
            }
        }
        assert_eq!(count, 5);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = FiniteField::prime(3).unwrap();
        let m = FqMatrix::from_rows(vec![
            vec![f.from_int(1), f.from_int(1)],
            vec![f.from_int(2), f.from_int(2)],
        ])
        .unwrap();
        let x = m
            .solve(&f, &[f.from_int(1), f.from_int(2)])
            .unwrap()
            .unwrap();
        assert_eq!(m.mul_vec(&f, &x), vec![f.from_int(1), f.from_int(2)]);
        assert!(m
            .solve(&f, &[f.from_int(1), f.from_int(1)])
            .unwrap()
            .is_none());
    }
}
