//! h^0 and h^1 from the Čech differential `(f1, f2) -> f2 - T f1`.
//!
//! Both groups are computed from finite-dimensional pieces whose size is bounded a
//! priori, so results at the certified level are exact:
//!
//! * A global section has `f1 = T^-1 f2`, so the `k`-th component of `f1` has pole
//!   order at most `B1_k = max_i (pole(T^-1_ki) + d_i)` at O.
//! * Modulo `O(U2)`-cochains, `C^1` is spanned by monomials `u^j y^e e_i` of weight
//!   above `d_i`. Those with `j >= s_inv` (the largest negative `u`-power in `T^-1`)
//!   are `T` of a `U1`-cochain, and a `U1`-cochain monomial with `j >= s + s_inv`
//!   lands entirely in that range. So `H^1` is the quotient of the finite space
//!   `W = {w > d_i, j < s_inv}` by the image of `U1`-monomials with `j < s + s_inv`.

use std::collections::HashMap;

use crate::cech::bundle::CechBundle;
use crate::cech::cover::Cover;
use crate::cech::func::Func;
use crate::error::Result;
use crate::gf::{Fq, FqMatrix};

/// A global section: component vectors on each chart, with `chart2 = T chart1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub chart1: Vec<Func>,
    pub chart2: Vec<Func>,
}

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub h0: usize,
    pub h1: usize,
    pub sections: Vec<Section>,
    /// Largest pole order at O allowed for `U1`-cochains.
    pub truncation_level: i64,
    /// Whether the same numbers come out at `truncation_level + 1`.
    pub stabilized: bool,
    /// Whether `truncation_level` reaches the a priori bound, making the result exact.
    pub certified: bool,
}

/// Basis index `(component, j, e)` of the monomial `u^j y^e` in component `i`.
pub type MonomialIndex = (usize, i64, u8);

#[derive(Clone, Debug)]
struct Bounds {
    s: i64,
    s_inv: i64,
    b1: Vec<i64>,
}

fn most_negative_power(m: &[Vec<Func>]) -> i64 {
    let lowest = m
        .iter()
        .flatten()
        .filter_map(|f| f.min_j())
        .min()
        .unwrap_or(0);
    (-lowest).max(0)
}

fn bounds(v: &CechBundle) -> Bounds {
    let d = v.twists();
    let b1 = v
        .inverse_transition()
        .iter()
        .map(|row| {
            row.iter()
                .zip(d)
                .filter_map(|(f, &di)| f.max_weight().map(|w| w + di))
                .max()
                .unwrap_or(i64::MIN)
        })
        .collect();
    Bounds {
        s: most_negative_power(v.transition()),
        s_inv: most_negative_power(v.inverse_transition()),
        b1,
    }
}

/// Level from which `cohomology` is exact.
pub fn certified_level(v: &CechBundle) -> i64 {
    let b = bounds(v);
    let b1 = b.b1.iter().copied().max().unwrap_or(0).max(0);
    let span = b.s + b.s_inv;
    if span > 0 {
        b1.max(2 * span + 1)
    } else {
        b1
    }
}

/// Monomials `u^j y^e` with `j >= 0` and weight at most `n`, by increasing weight.
fn chart1_monomials(n: i64) -> impl Iterator<Item = (i64, u8)> {
    (0..=n.max(-1)).filter(|&w| w != 1).map(|w| {
        if w % 2 == 0 {
            (w / 2, 0)
        } else {
            ((w - 3) / 2, 1)
        }
    })
}

/// Columns `T (u^j y^e e_k)` as sparse maps over monomial indices.
struct Differential<'a> {
    v: &'a CechBundle,
    /// `T_ik * y` for every entry.
    t_times_y: Vec<Vec<Func>>,
}

impl<'a> Differential<'a> {
    fn new(v: &'a CechBundle) -> Self {
        let ring = v.ring();
        let t_times_y = v
            .transition()
            .iter()
            .map(|row| row.iter().map(|f| ring.mul_monomial(f, 0, 1)).collect())
            .collect();
        Differential { v, t_times_y }
    }

    fn column(&self, k: usize, j: i64, e: u8) -> impl Iterator<Item = (MonomialIndex, Fq)> + '_ {
        let t = self.v.transition();
        (0..self.v.rank()).flat_map(move |i| {
            let base = if e == 0 {
                &t[i][k]
            } else {
                &self.t_times_y[i][k]
            };
            base.terms()
                .map(move |(jj, ee, c)| ((i, jj + j, ee), c))
                .collect::<Vec<_>>()
        })
    }
}

fn weight(j: i64, e: u8) -> i64 {
    2 * j + 3 * e as i64
}

/// The linear system whose kernel is `H^0` at a truncation level. Columns are the
/// `U1`-monomials `u^j y^e e_k`; rows are the monomials of `T f1` whose pole order at O
/// exceeds the twist of their component.
#[derive(Clone, Debug)]
pub struct GlobalSectionSystem {
    pub matrix: FqMatrix,
    pub columns: Vec<MonomialIndex>,
    pub rows: Vec<MonomialIndex>,
}

pub fn global_section_system(v: &CechBundle, level: i64) -> GlobalSectionSystem {
    let d = v.twists();
    let diff = Differential::new(v);
    let mut rows: HashMap<MonomialIndex, usize> = HashMap::new();
    let mut cols = Vec::new();
    let mut sparse = Vec::new();
    for k in 0..v.rank() {
        for (j, e) in chart1_monomials(level) {
            let mut col = Vec::new();
            for ((i, jj, ee), c) in diff.column(k, j, e) {
                if weight(jj, ee) > d[i] {
                    let n = rows.len();
                    let r = *rows.entry((i, jj, ee)).or_insert(n);
                    col.push((r, c));
                }
            }
            cols.push((k, j, e));
            sparse.push(col);
        }
    }
    let mut row_keys = vec![(0, 0, 0); rows.len()];
    for (key, r) in rows {
        row_keys[r] = key;
    }
    GlobalSectionSystem {
        matrix: FqMatrix::from_sparse_columns(row_keys.len(), &sparse),
        columns: cols,
        rows: row_keys,
    }
}

fn h0_at(v: &CechBundle, level: i64) -> usize {
    let sys = global_section_system(v, level);
    let f = v.ring().field();
    sys.columns.len() - sys.matrix.rank(f)
}

fn sections_at(v: &CechBundle, level: i64) -> Vec<Section> {
    let sys = global_section_system(v, level);
    let ring = v.ring();
    let f = ring.field();
    sys.matrix
        .kernel(f)
        .into_iter()
        .map(|vec| {
            let mut chart1 = vec![Func::zero(); v.rank()];
            for (&(k, j, e), &c) in sys.columns.iter().zip(&vec) {
                if !c.is_zero() {
                    chart1[k] = ring.add(&chart1[k], &Func::monomial(c, j, e));
                }
            }
            let chart2 = v
                .transition()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&chart1)
                        .fold(Func::zero(), |acc, (t, s)| ring.add(&acc, &ring.mul(t, s)))
                })
                .collect();
            Section { chart1, chart2 }
        })
        .collect()
}

/// The finite space `W` in the order used for cokernel representatives:
/// component descending, then `j` ascending, then `e`.
fn h1_target(v: &CechBundle, b: &Bounds) -> Vec<MonomialIndex> {
    let d = v.twists();
    let mut out = Vec::new();
    for i in (0..v.rank()).rev() {
        let j_min = (d[i] - 3).div_euclid(2) + 1;
        for j in j_min..b.s_inv {
            for e in 0..=1u8 {
                if weight(j, e) > d[i] {
                    out.push((i, j, e));
                }
            }
        }
    }
    out
}

fn h1_image(
    v: &CechBundle,
    b: &Bounds,
    level: i64,
    target: &HashMap<MonomialIndex, usize>,
) -> Vec<Vec<(usize, Fq)>> {
    let diff = Differential::new(v);
    let mut cols = Vec::new();
    for k in 0..v.rank() {
        for (j, e) in chart1_monomials(level) {
            if j >= b.s + b.s_inv {
                continue;
            }
            let col: Vec<(usize, Fq)> = diff
                .column(k, j, e)
                .filter_map(|(idx, c)| target.get(&idx).map(|&r| (r, c)))
                .collect();
            if !col.is_empty() {
                cols.push(col);
            }
        }
    }
    cols
}

fn h1_at(v: &CechBundle, level: i64) -> usize {
    let b = bounds(v);
    let w = h1_target(v, &b);
    if w.is_empty() {
        return 0;
    }
    let index: HashMap<MonomialIndex, usize> = w.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let cols = h1_image(v, &b, level, &index);
    let m = FqMatrix::from_sparse_columns(w.len(), &cols);
    w.len() - m.rank(v.ring().field())
}

/// Monomials `u^j y^e e_i` whose classes form a basis of `H^1(V)`: the first ones, in
/// the order component descending / `j` ascending, not in the span of the image.
pub fn h1_cokernel_representatives(v: &CechBundle) -> Vec<MonomialIndex> {
    let b = bounds(v);
    let w = h1_target(v, &b);
    let index: HashMap<MonomialIndex, usize> = w.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut cols = h1_image(v, &b, certified_level(v), &index);
    let n_image = cols.len();
    cols.extend((0..w.len()).map(|r| vec![(r, Fq::ONE)]));
    let m = FqMatrix::from_sparse_columns(w.len(), &cols);
    m.echelon(v.ring().field())
        .pivots
        .into_iter()
        .filter(|&c| c >= n_image)
        .map(|c| w[c - n_image])
        .collect()
}

/// A function on the overlap whose class spans `H^1(E, O_E)`: the first cokernel
/// representative for the trivial line bundle.
pub fn h1_generator(cover: &Cover) -> Func {
    let reps = h1_cokernel_representatives(&CechBundle::trivial(cover, 1));
    let &(_, j, e) = reps.first().expect("H^1(O_E) is one-dimensional");
    Func::monomial(Fq::ONE, j, e)
}

/// Full computation. With `level = None` the certified level is used and the result
/// is rechecked one level higher; an explicit level may be below the bound, in which
/// case `h0` can be too small and `h1` too large.
pub fn cohomology(v: &CechBundle, level: Option<i64>) -> Result<CohomologyResult> {
    let cert = certified_level(v);
    let n = level.unwrap_or(cert);
    let h0 = h0_at(v, n);
    let h1 = h1_at(v, n);
    let stabilized = h0_at(v, n + 1) == h0 && h1_at(v, n + 1) == h1;
    Ok(CohomologyResult {
        h0,
        h1,
        sections: sections_at(v, n),
        truncation_level: n,
        stabilized,
        certified: n >= cert,
    })
}

/// `h^0` at the certified level, without sections or rechecks.
pub fn h0(v: &CechBundle) -> usize {
    h0_at(v, certified_level(v))
}

/// `h^1` at the certified level.
pub fn h1(v: &CechBundle) -> usize {
    h1_at(v, certified_level(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::bundle::unipotent_sym_matrix;
    use crate::cech::TwoChartCover;
    use crate::elliptic::WeierstrassCurve;
    use crate::gf::FiniteField;

    fn cover(p: u32, a: [i64; 5]) -> Cover {
        let e = WeierstrassCurve::from_ints(FiniteField::prime(p).unwrap(), a).unwrap();
        TwoChartCover::new(&e)
    }

    fn sym_f2(c: &Cover, m: u32) -> CechBundle {
        let g = h1_generator(c);
        let ring = c.ring();
        let t = unipotent_sym_matrix(ring, &g, m);
        let t_inv = unipotent_sym_matrix(ring, &ring.neg(&g), m);
        CechBundle::from_transition_and_inverse(c, t, t_inv, vec![0; m as usize + 1]).unwrap()
    }

    #[test]
    fn structure_sheaf() {
        let c = cover(5, [0, 0, 0, 1, 1]);
        let r = cohomology(&CechBundle::trivial(&c, 1), None).unwrap();
        assert_eq!((r.h0, r.h1), (1, 1));
        assert!(r.stabilized && r.certified);
        assert_eq!(h1_generator(&c), Func::monomial(Fq::ONE, -1, 1));
    }

    #[test]
    fn origin_line_bundles() {
        let c = cover(3, [0, 0, 0, 1, 1]);
        for d in -3..6 {
            let r = cohomology(&CechBundle::origin_line_bundle(&c, d), None).unwrap();
            let expected = match d {
                d if d > 0 => (d as usize, 0),
                0 => (1, 1),
                d => (0, (-d) as usize),
            };
            assert_eq!((r.h0, r.h1), expected, "d={d}");
        }
    }

    #[test]
    fn sections_satisfy_the_gluing() {
        let c = cover(2, [1, 0, 0, 0, 1]);
        let v = sym_f2(&c, 2).twist_origin(1);
        let r = cohomology(&v, None).unwrap();
        assert_eq!(r.h0 as i64 - r.h1 as i64, v.degree());
        for s in &r.sections {
            assert!(s.chart1.iter().all(|f| f.is_regular_away_from_origin()));
            for (f, &d) in s.chart2.iter().zip(v.twists()) {
                assert!(f.max_weight().is_none_or(|w| w <= d));
            }
        }
    }

    #[test]
    fn f2_and_its_split_counterpart() {
        let c = cover(5, [0, 0, 0, 1, 1]);
        let f2 = sym_f2(&c, 1);
        let r = cohomology(&f2, None).unwrap();
        assert_eq!((r.h0, r.h1), (1, 1));
        let split = CechBundle::trivial(&c, 2);
        assert_eq!(h0(&split), 2);
    }

    #[test]
    fn low_truncation_is_partial() {
        let c = cover(3, [0, 0, 0, 1, 1]);
        let v = CechBundle::origin_line_bundle(&c, 5);
        let full = cohomology(&v, None).unwrap();
        let partial = cohomology(&v, Some(2)).unwrap();
        assert!(!partial.certified);
        assert!(partial.h0 <= full.h0);
    }
}
