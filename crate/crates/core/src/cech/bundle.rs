//! Vector bundles on E given by a transition matrix on the two-chart cover.
//!
//! A section is a pair `(f1, f2)` with `f1` regular on `U1`, `f2 = T f1`, and the
//! `i`-th component of `f2` regular on `U2` away from O with a pole of order at most
//! `twists[i]` at O. Nonzero twists let the cover present line bundles `O(d O)` of
//! odd degree, which no scalar transition over `A[1/u]` can do on its own.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cech::cover::Cover;
use crate::cech::func::{Func, OverlapRing};
use crate::cech::TwoChartCover;
use crate::elliptic::DivisorOnE;
use crate::error::{Error, Result};
use crate::gf::{binomial_mod, Fq};

pub type FuncMatrix = Vec<Vec<Func>>;

#[derive(Clone, Debug)]
pub struct CechBundle {
    cover: Cover,
    t: FuncMatrix,
    t_inv: FuncMatrix,
    twists: Vec<i64>,
    degree: i64,
}

pub fn identity_matrix(n: usize) -> FuncMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Func::one() } else { Func::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(ring: &OverlapRing, a: &FuncMatrix, b: &FuncMatrix) -> FuncMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Func::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if bk[j].is_zero() {
                    continue;
                }
                out[i][j] = ring.add(&out[i][j], &ring.mul(&a[i][k], &bk[j]));
            }
        }
    }
    out
}

fn transpose(a: &FuncMatrix) -> FuncMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect()
}

fn kron(ring: &OverlapRing, a: &FuncMatrix, b: &FuncMatrix) -> FuncMatrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Func::zero(); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..rb {
                    if !b[k][l].is_zero() {
                        out[i * rb + k][j * rb + l] = ring.mul(&a[i][j], &b[k][l]);
                    }
                }
            }
        }
    }
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(ring: &OverlapRing, a: &FuncMatrix) -> Func {
    let n = a.len();
    match n {
        0 => Func::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut acc = Func::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: FuncMatrix = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = ring.mul(&a[0][j], &determinant(ring, &minor));
                acc = if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

/// Multi-indices of total degree `m` in `r` variables, largest first exponent first.
pub fn multi_indices(r: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 1 {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=m).rev() {
            prefix.push(a);
            rec(r - 1, m - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(r, m, &mut Vec::new(), &mut out);
    out
}

/// Matrix of `Sym^m` of the linear map with matrix `t`, in the basis [`multi_indices`].
pub fn sym_matrix(ring: &OverlapRing, t: &FuncMatrix, m: u32) -> FuncMatrix {
    let r = t.len();
    let basis = multi_indices(r, m);
    let index: HashMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let n = basis.len();
    let mut out = vec![vec![Func::zero(); n]; n];
    for (col, alpha) in basis.iter().enumerate() {
        // product over j of (sum_i t[i][j] e_i)^{alpha_j}
        let mut poly: HashMap<Vec<u32>, Func> = HashMap::new();
        poly.insert(vec![0; r], Func::one());
        for (j, &aj) in alpha.iter().enumerate() {
            for _ in 0..aj {
                let mut next: HashMap<Vec<u32>, Func> = HashMap::new();
                for (beta, c) in &poly {
                    for (i, row) in t.iter().enumerate() {
                        if row[j].is_zero() {
                            continue;
                        }
                        let mut b = beta.clone();
                        b[i] += 1;
                        let term = ring.mul(c, &row[j]);
                        let slot = next.entry(b).or_default();
                        *slot = ring.add(slot, &term);
                    }
                }
                poly = next;
            }
        }
        for (beta, c) in poly {
            if !c.is_zero() {
                out[index[&beta]][col] = c;
            }
        }
    }
    out
}

fn binomial_i128(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r = 1i128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl CechBundle {
    fn assemble(
        cover: Cover,
        t: FuncMatrix,
        t_inv: FuncMatrix,
        twists: Vec<i64>,
        degree: i64,
    ) -> Self {
        CechBundle {
            cover,
            t,
            t_inv,
            twists,
            degree,
        }
    }

    /// `O_E^r`.
    pub fn trivial(cover: &Cover, rank: usize) -> Self {
        Self::assemble(
            cover.clone(),
            identity_matrix(rank),
            identity_matrix(rank),
            vec![0; rank],
            0,
        )
    }

    /// The line bundle `O(d O)`.
    pub fn origin_line_bundle(cover: &Cover, d: i64) -> Self {
        Self::assemble(
            cover.clone(),
            identity_matrix(1),
            identity_matrix(1),
            vec![d],
            d,
        )
    }

    /// Bundle from a transition matrix and per-component twists; the inverse is found
    /// by Gauss–Jordan elimination with pivots of the form `c u^j`.
    pub fn from_transition(cover: &Cover, t: FuncMatrix, twists: Vec<i64>) -> Result<Self> {
        let n = t.len();
        if t.iter().any(|row| row.len() != n) || twists.len() != n {
            return Err(Error::DimensionMismatch(
                "transition must be square and match twists".into(),
            ));
        }
        let ring = cover.ring();
        let mut a = t.clone();
        let mut inv = identity_matrix(n);
        let mut pivot_j_sum = 0i64;
        for col in 0..n {
            let found =
                (col..n).find_map(|r| ring.monomial_unit_inverse(&a[r][col]).map(|i| (r, i)));
            let Some((r, pinv)) = found else {
                return Err(Error::NotInvertible(format!(
                    "no monomial unit pivot in column {col}"
                )));
            };
            pivot_j_sum -= pinv.min_j().unwrap();
            a.swap(col, r);
            inv.swap(col, r);
            a[col] = a[col].iter().map(|v| ring.mul(v, &pinv)).collect();
            inv[col] = inv[col].iter().map(|v| ring.mul(v, &pinv)).collect();
            for k in 0..n {
                if k == col || a[k][col].is_zero() {
                    continue;
                }
                let factor = a[k][col].clone();
                for c in 0..n {
                    let da = ring.mul(&factor, &a[col][c]);
                    a[k][c] = ring.sub(&a[k][c], &da);
                    let di = ring.mul(&factor, &inv[col][c]);
                    inv[k][c] = ring.sub(&inv[k][c], &di);
                }
            }
        }
        // det T = +- product of the pivots c u^j, each with pole order 2j at O
        let degree = -2 * pivot_j_sum + twists.iter().sum::<i64>();
        Ok(Self::assemble(cover.clone(), t, inv, twists, degree))
    }

    /// Bundle with a known inverse transition; the degree is recomputed from `det T`.
    pub fn from_transition_and_inverse(
        cover: &Cover,
        t: FuncMatrix,
        t_inv: FuncMatrix,
        twists: Vec<i64>,
    ) -> Result<Self> {
        let n = t.len();
        if t_inv.len() != n || twists.len() != n {
            return Err(Error::DimensionMismatch(
                "transition, inverse and twists".into(),
            ));
        }
        let ring = cover.ring();
        if mat_mul(ring, &t, &t_inv) != identity_matrix(n) {
            return Err(Error::NotInvertible(
                "supplied inverse does not invert the transition".into(),
            ));
        }
        let det = determinant(ring, &t);
        let w = det
            .max_weight()
            .ok_or_else(|| Error::NotInvertible("zero determinant".into()))?;
        let degree = -w + twists.iter().sum::<i64>();
        Ok(Self::assemble(cover.clone(), t, t_inv, twists, degree))
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn ring(&self) -> &OverlapRing {
        self.cover.ring()
    }

    pub fn rank(&self) -> usize {
        self.t.len()
    }

    pub fn transition(&self) -> &FuncMatrix {
        &self.t
    }

    pub fn inverse_transition(&self) -> &FuncMatrix {
        &self.t_inv
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    /// Degree of the determinant line bundle.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = &self.t[i][j];
                if i == j {
                    *v == Func::one()
                } else if i > j {
                    v.is_zero()
                } else {
                    true
                }
            })
        }) && self.twists.iter().all(|&d| d == 0)
    }

    fn same_cover(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.cover, &other.cover) || *self.cover == *other.cover {
            Ok(())
        } else {
            Err(Error::MismatchedCovers)
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_cover(other)?;
        let ring = self.ring();
        let t = kron(ring, &self.t, &other.t);
        let t_inv = kron(ring, &self.t_inv, &other.t_inv);
        let twists = self
            .twists
            .iter()
            .flat_map(|&a| other.twists.iter().map(move |&b| a + b))
            .collect();
        let degree = other.rank() as i64 * self.degree + self.rank() as i64 * other.degree;
        Ok(Self::assemble(self.cover.clone(), t, t_inv, twists, degree))
    }

    pub fn sym(&self, m: u32) -> Self {
        let ring = self.ring();
        let r = self.rank();
        let basis = multi_indices(r, m);
        let t = sym_matrix(ring, &self.t, m);
        let t_inv = sym_matrix(ring, &self.t_inv, m);
        let twists = basis
            .iter()
            .map(|a| {
                a.iter()
                    .zip(&self.twists)
                    .map(|(&k, &d)| k as i64 * d)
                    .sum()
            })
            .collect();
        // deg Sym^m V = (m / r) C(m + r - 1, m) deg V
        let degree = if r == 0 {
            0
        } else {
            (m as i128 * binomial_i128(m as i128 + r as i128 - 1, m as i128) * self.degree as i128
                / r as i128) as i64
        };
        Self::assemble(self.cover.clone(), t, t_inv, twists, degree)
    }

    pub fn dual(&self) -> Self {
        Self::assemble(
            self.cover.clone(),
            transpose(&self.t_inv),
            transpose(&self.t),
            self.twists.iter().map(|d| -d).collect(),
            -self.degree,
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_cover(other)?;
        let (a, b) = (self.rank(), other.rank());
        let block = |x: &FuncMatrix, y: &FuncMatrix| {
            let mut out = vec![vec![Func::zero(); a + b]; a + b];
            for i in 0..a {
                for j in 0..a {
                    out[i][j] = x[i][j].clone();
                }
            }
            for i in 0..b {
                for j in 0..b {
                    out[a + i][a + j] = y[i][j].clone();
                }
            }
            out
        };
        let twists = self.twists.iter().chain(&other.twists).copied().collect();
        Ok(Self::assemble(
            self.cover.clone(),
            block(&self.t, &other.t),
            block(&self.t_inv, &other.t_inv),
            twists,
            self.degree + other.degree,
        ))
    }

    /// `V (x) O(n O)`.
    pub fn twist_origin(&self, n: i64) -> Self {
        let mut out = self.clone();
        for d in &mut out.twists {
            *d += n;
        }
        out.degree += n * self.rank() as i64;
        out
    }

    /// `V (x) O(D)`, available when `D ~ deg(D) O`.
    pub fn twist(&self, d: &DivisorOnE) -> Result<Self> {
        if !d.is_multiple_of_origin(self.cover.curve())? {
            return Err(Error::UnpresentableTwist);
        }
        Ok(self.twist_origin(d.degree()))
    }

    /// `P T P^-1` for a constant invertible matrix `P`; requires equal twists.
    pub fn conjugate_by_constant(&self, p: &[Vec<Fq>], p_inv: &[Vec<Fq>]) -> Result<Self> {
        let n = self.rank();
        if self.twists.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidInput(
                "constant change of frame needs equal twists".into(),
            ));
        }
        let to_func = |m: &[Vec<Fq>]| -> FuncMatrix {
            m.iter()
                .map(|row| row.iter().map(|&c| Func::constant(c)).collect())
                .collect()
        };
        let (pm, pi) = (to_func(p), to_func(p_inv));
        let ring = self.ring();
        if pm.len() != n || mat_mul(ring, &pm, &pi) != identity_matrix(n) {
            return Err(Error::NotInvertible("constant frame change".into()));
        }
        let t = mat_mul(ring, &mat_mul(ring, &pm, &self.t), &pi);
        let t_inv = mat_mul(ring, &mat_mul(ring, &pm, &self.t_inv), &pi);
        Ok(Self::assemble(
            self.cover.clone(),
            t,
            t_inv,
            self.twists.clone(),
            self.degree,
        ))
    }

    /// The quotient by the subbundle spanned by the first `k` frame vectors; requires
    /// the transition to be block upper triangular with respect to that split.
    pub fn quotient_by_leading(&self, k: usize) -> Result<Self> {
        let n = self.rank();
        if k > n || (k..n).any(|i| (0..k).any(|j| !self.t[i][j].is_zero())) {
            return Err(Error::InvalidInput(
                "leading frame vectors do not span a subbundle".into(),
            ));
        }
        let ring = self.ring();
        let sub: FuncMatrix = self.t[..k].iter().map(|r| r[..k].to_vec()).collect();
        let sub_w = determinant(ring, &sub).max_weight().unwrap_or(0);
        let sub_degree = -sub_w + self.twists[..k].iter().sum::<i64>();
        let cut =
            |m: &FuncMatrix| -> FuncMatrix { m[k..].iter().map(|r| r[k..].to_vec()).collect() };
        Ok(Self::assemble(
            self.cover.clone(),
            cut(&self.t),
            cut(&self.t_inv),
            self.twists[k..].to_vec(),
            self.degree - sub_degree,
        ))
    }

    /// Pullback along the relative Frobenius `E' -> E`, where `E'` has coefficients
    /// `a_i^(1/p)` and `(x', y') -> (x'^p, y'^p)`; the cover of `E'` uses `x0^(1/p)`.
    pub fn frobenius_pullback(&self) -> Self {
        let curve = self.cover.curve();
        let field = curve.field().clone();
        let p = field.characteristic() as i64;
        let target = curve.frobenius_untwist();
        let cover =
            TwoChartCover::with_base_point(&target, field.frobenius_inv(self.cover.base_x()));
        let ring = cover.ring().clone();
        let yp = ring.pow(&ring.monomial(0, 1), p as u64);
        let pull = |a: &Func| -> Func {
            let even = Func {
                even: a.even.map_and_inflate(|c| c, p),
                odd: Default::default(),
            };
            let odd = Func {
                even: a.odd.map_and_inflate(|c| c, p),
                odd: Default::default(),
            };
            ring.add(&even, &ring.mul(&odd, &yp))
        };
        let pull_m = |m: &FuncMatrix| -> FuncMatrix {
            m.iter().map(|r| r.iter().map(&pull).collect()).collect()
        };
        Self::assemble(
            cover.clone(),
            pull_m(&self.t),
            pull_m(&self.t_inv),
            self.twists.iter().map(|d| d * p).collect(),
            self.degree * p,
        )
    }
}

/// Upper unitriangular `(m+1) x (m+1)` matrix with entries `C(j, i) g^(j - i)` mod p.
pub fn unipotent_sym_matrix(ring: &OverlapRing, g: &Func, m: u32) -> FuncMatrix {
    let f = ring.field().clone();
    let n = m as usize + 1;
    let powers: Vec<Func> = (0..n)
        .scan(Func::one(), |acc, k| {
            let cur = acc.clone();
            if k + 1 < n {
                *acc = ring.mul(acc, g);
            }
            Some(cur)
        })
        .collect();
    let mut out = vec![vec![Func::zero(); n]; n];
    for j in 0..n {
        for i in 0..=j {
            let c = binomial_mod(&f, j as u64, i as u64);
            if !c.is_zero() {
                out[i][j] = ring.scale(&powers[j - i], c);
            }
        }
    }
    out
}
