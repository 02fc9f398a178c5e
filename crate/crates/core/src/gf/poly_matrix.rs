//! Matrices over GF(q)[t] and their Smith normal form.

use crate::error::{Error, Result};
use crate::gf::field::{FiniteField, Fq};
use crate::gf::matrix::FqMatrix;
use crate::gf::poly::FqPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FqPolynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![FqPolynomial::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FqPolynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged polynomial matrix".into()));
        }
        Ok(PolyMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FqPolynomial {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FqPolynomial) {
        self.data[r * self.cols + c] = v;
    }

    /// Entrywise evaluation at `t = x`.
    pub fn eval(&self, f: &FiniteField, x: Fq) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).eval(f, x));
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, f: &FiniteField, dst: usize, src: usize, q: &FqPolynomial) {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, c).sub(f, &q.mul(f, s));
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, f: &FiniteField, dst: usize, src: usize, q: &FqPolynomial) {
        for r in 0..self.rows {
            let s = self.get(r, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, dst).sub(f, &q.mul(f, s));
            self.set(r, dst, v);
        }
    }

    /// Position of a nonzero entry of least degree in the lower right block from `k`.
    fn min_degree_entry(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for r in k..self.rows {
            for c in k..self.cols {
                if let Some(d) = self.get(r, c).degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, r, c));
                        if d == 0 {
                            return Some((r, c));
                        }
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// The nonzero invariant factors `d_1 | d_2 | ...`, each monic. Their number is the
    /// rank over GF(q)(t).
    pub fn invariant_factors(&self, f: &FiniteField) -> Vec<FqPolynomial> {
        let mut m = self.clone();
        let n = self.rows.min(self.cols);
        let mut out = Vec::new();
        for k in 0..n {
            let Some((r, c)) = m.min_degree_entry(k) else {
                break;
            };
            m.swap_rows(k, r);
            m.swap_cols(k, c);
            loop {
                let pivot = m.get(k, k).clone();
                let mut changed = false;
                for r in k + 1..m.rows {
                    if m.get(r, k).is_zero() {
                        continue;
                    }
                    let (q, rem) = m.get(r, k).div_rem(f, &pivot).expect("pivot is nonzero");
                    m.row_sub(f, r, k, &q);
                    if !rem.is_zero() {
                        changed = true;
                    }
                }
                for c in k + 1..m.cols {
                    if m.get(k, c).is_zero() {
                        continue;
                    }
                    let (q, rem) = m.get(k, c).div_rem(f, &pivot).expect("pivot is nonzero");
                    m.col_sub(f, c, k, &q);
                    if !rem.is_zero() {
                        changed = true;
                    }
                }
                if !changed {
                    // the pivot must divide the remaining block
                    let bad = (k + 1..m.rows)
                        .find(|&r| (k + 1..m.cols).any(|c| !pivot.divides(f, m.get(r, c))));
                    match bad {
                        None => break,
                        Some(r) => {
                            // row[k] += row[r] brings a non-multiple into row k
                            m.row_sub(f, k, r, &FqPolynomial::constant(f.neg(Fq::ONE)));
                            continue;
                        }
                    }
                }
                let (r, c) = m.min_degree_entry(k).expect("block is nonzero");
                m.swap_rows(k, r);
                m.swap_cols(k, c);
            }
            out.push(m.get(k, k).monic(f));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &FiniteField, c: &[i64]) -> FqPolynomial {
        FqPolynomial::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn diagonal_with_coprime_entries() {
        let f = FiniteField::prime(5).unwrap();
        // diag(t, t + 1) ~ diag(1, t (t + 1))
        let mut m = PolyMatrix::zeros(2, 2);
        m.set(0, 0, poly(&f, &[0, 1]));
        m.set(1, 1, poly(&f, &[1, 1]));
        let inv = m.invariant_factors(&f);
        assert_eq!(inv, vec![FqPolynomial::one(), poly(&f, &[0, 1, 1])]);
    }

    #[test]
    fn rank_drop_at_zero() {
        let f = FiniteField::prime(3).unwrap();
        // [[1, t], [t, t^2]] has rank 1
        let m = PolyMatrix::from_rows(vec![
            vec![poly(&f, &[1]), poly(&f, &[0, 1])],
            vec![poly(&f, &[0, 1]), poly(&f, &[0, 0, 1])],
        ])
        .unwrap();
        assert_eq!(m.invariant_factors(&f), vec![FqPolynomial::one()]);
    }
}
