//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use charp_core::cech::{
    identity_matrix, mat_mul, CechBundle, Cover, Func, FuncMatrix, OverlapRing, TwoChartCover,
};
use charp_core::elliptic::{PointOnE, WeierstrassCurve};
use charp_core::gf::{FiniteField, Fq, FqMatrix};
use charp_core::snc::{DeltaComponent, StratifiedPair, Stratum, Q};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const PRIMES: [u32; 3] = [2, 3, 5];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn curve(p: u32, a: [i64; 5]) -> WeierstrassCurve {
    WeierstrassCurve::from_ints(FiniteField::prime(p).unwrap(), a).unwrap()
}

/// Affine points by testing every pair `(x, y)` against the equation.
pub fn brute_force_affine_points(c: &WeierstrassCurve) -> Vec<(Fq, Fq)> {
    let f = c.field();
    let [a1, a2, a3, a4, a6] = c.coefficients();
    let mut out = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let lhs = f.add(f.add(f.mul(y, y), f.mul(a1, f.mul(x, y))), f.mul(a3, y));
            let x2 = f.mul(x, x);
            let rhs = f.add(f.add(f.add(f.mul(x2, x), f.mul(a2, x2)), f.mul(a4, x)), a6);
            if lhs == rhs {
                out.push((x, y));
            }
        }
    }
    out
}

/// Supersingularity from a brute-force point count: `p` divides `q + 1 - #E`.
pub fn supersingular_by_count(c: &WeierstrassCurve) -> bool {
    let q = c.field().order() as i64;
    let n = brute_force_affine_points(c).len() as i64 + 1;
    (q + 1 - n).rem_euclid(c.field().characteristic() as i64) == 0
}

/// Curves over GF(p) used for the Frobenius dichotomy, with both kinds for each p.
pub fn dichotomy_curves(p: u32) -> Vec<[i64; 5]> {
    match p {
        2 => vec![
            [1, 0, 0, 0, 1],
            [1, 1, 0, 0, 1],
            [0, 0, 1, 0, 0],
            [0, 0, 1, 1, 0],
            [0, 0, 1, 1, 1],
        ],
        3 => vec![
            [0, 0, 0, -1, 0],
            [0, 0, 0, -1, 1],
            [0, 1, 0, 0, 1],
            [0, -1, 0, 0, 1],
            [0, 1, 0, 0, -1],
        ],
        5 => vec![
            [0, 0, 0, 0, 1],
            [0, 0, 0, 0, 2],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 1, 1],
            [0, 0, 0, 2, 0],
        ],
        _ => unreachable!("desk-scale primes only"),
    }
}

fn random_nonzero(f: &FiniteField, r: &mut StdRng) -> Fq {
    f.element(r.gen_range(1..f.order()))
}

fn random_func(cover: &Cover, r: &mut StdRng) -> Func {
    let ring = cover.ring();
    let f = ring.field();
    let mut out = Func::zero();
    for _ in 0..r.gen_range(1..=2) {
        let m = Func::monomial(
            random_nonzero(f, r),
            r.gen_range(-2..=2),
            r.gen_range(0..=1),
        );
        out = ring.add(&out, &m);
    }
    out
}

/// A random bundle as a product of elementary, monomial-diagonal and permutation
/// transitions, whose inverse is the reversed product of the inverses.
pub fn random_bundle(cover: &Cover, r: &mut StdRng) -> CechBundle {
    let ring = cover.ring();
    let f = ring.field().clone();
    let n = r.gen_range(1..=3usize);
    let mut t = identity_matrix(n);
    let mut t_inv = identity_matrix(n);
    for _ in 0..r.gen_range(1..=4) {
        let mut e = identity_matrix(n);
        let mut e_inv = identity_matrix(n);
        match r.gen_range(0..3) {
            0 if n > 1 => {
                let i = r.gen_range(0..n);
                let j = (i + r.gen_range(1..n)) % n;
                let g = random_func(cover, r);
                e_inv[i][j] = ring.neg(&g);
                e[i][j] = g;
            }
            1 => {
                for i in 0..n {
                    let c = random_nonzero(&f, r);
                    let k = r.gen_range(-1..=1);
                    e[i][i] = Func::monomial(c, k, 0);
                    e_inv[i][i] = Func::monomial(f.inv(c).unwrap(), -k, 0);
                }
            }
            _ if n > 1 => {
                let (i, j) = (0, r.gen_range(1..n));
                e.swap(i, j);
                e_inv.swap(i, j);
            }
            _ => {}
        }
        t = mat_mul(ring, &t, &e);
        t_inv = mat_mul(ring, &e_inv, &t_inv);
    }
    let twists = (0..n).map(|_| r.gen_range(-3..=3)).collect();
    CechBundle::from_transition_and_inverse(cover, t, t_inv, twists).unwrap()
}

/// A random constant invertible matrix and its inverse, as a product of elementary
/// matrices; with `unitriangular` only additions of a row to an earlier one are used.
pub fn random_constant_frame(
    f: &FiniteField,
    n: usize,
    unitriangular: bool,
    r: &mut StdRng,
) -> (Vec<Vec<Fq>>, Vec<Vec<Fq>>) {
    let mut p = FqMatrix::identity(n);
    let mut p_inv = FqMatrix::identity(n);
    for _ in 0..3 * n {
        let mut e = FqMatrix::identity(n);
        let mut e_inv = FqMatrix::identity(n);
        let i = r.gen_range(0..n);
        if unitriangular {
            if i + 1 < n {
                let j = r.gen_range(i + 1..n);
                let c = f.element(r.gen_range(0..f.order()));
                e.set(i, j, c);
                e_inv.set(i, j, f.neg(c));
            }
        } else if n > 1 && r.gen_bool(0.5) {
            let j = (i + r.gen_range(1..n)) % n;
            let c = f.element(r.gen_range(0..f.order()));
            e.set(i, j, c);
            e_inv.set(i, j, f.neg(c));
        } else {
            let c = random_nonzero(f, r);
            e.set(i, i, c);
            e_inv.set(i, i, f.inv(c).unwrap());
        }
        p = p.mul(f, &e).unwrap();
        p_inv = e_inv.mul(f, &p_inv).unwrap();
    }
    assert_eq!(p.mul(f, &p_inv).unwrap(), FqMatrix::identity(n));
    let rows = |m: &FqMatrix| (0..n).map(|i| m.row(i).to_vec()).collect();
    (rows(&p), rows(&p_inv))
}

/// Coefficient of `y/u`, the functional spanning `H^1(E, O)`: every other monomial
/// `u^j y^e` is regular on one of the two charts.
fn h1_functional(g: &Func) -> Fq {
    g.coeff(-1, 1)
}

/// The part of `g` regular on the first chart (`u`-exponent at least 0).
fn first_chart_part(ring: &OverlapRing, g: &Func) -> Func {
    g.terms()
        .filter(|&(j, _, _)| j >= 0)
        .fold(Func::zero(), |acc, (j, e, c)| {
            ring.add(&acc, &Func::monomial(c, j, e))
        })
}

/// `h0` of a bundle with upper unitriangular transition and zero twists, by solving
/// for sections one component at a time from the bottom.
///
/// Component `i` of a section satisfies `f2_i - f1_i = sum_{k > i} T_ik f1_k`. The
/// right-hand side is a coboundary exactly when its `y/u` coefficient vanishes, and then
/// `f1_i` is minus its first-chart part plus a new constant. Tracking each `f1_k` as a
/// linear combination of the constants gives one linear condition per component.
pub fn filtration_h0(v: &CechBundle) -> usize {
    assert!(v.is_upper_unitriangular() && v.twists().iter().all(|&d| d == 0));
    let ring = v.ring();
    let f = ring.field().clone();
    let t = v.transition();
    let n = v.rank();
    // parts[k][c]: coefficient function of constant c in f1_k
    let mut parts: Vec<Vec<Func>> = vec![Vec::new(); n];
    let mut conditions: Vec<Vec<Fq>> = Vec::new();
    for i in (0..n).rev() {
        let mut row = vec![Func::zero(); n];
        for (c, slot) in row.iter_mut().enumerate() {
            let mut g = Func::zero();
            for k in i + 1..n {
                g = ring.add(&g, &ring.mul(&t[i][k], &parts[k][c]));
            }
            *slot = g;
        }
        conditions.push(row.iter().map(h1_functional).collect());
        let mut own: Vec<Func> = row
            .iter()
            .map(|g| ring.neg(&first_chart_part(ring, g)))
            .collect();
        own[i] = ring.add(&own[i], &Func::one());
        parts[i] = own;
    }
    n - FqMatrix::from_rows(conditions).unwrap().rank(&f)
}

pub fn cover_for(p: u32, a: [i64; 5]) -> Cover {
    TwoChartCover::new(&curve(p, a))
}

pub fn is_identity(cover: &Cover, a: &FuncMatrix, b: &FuncMatrix) -> bool {
    mat_mul(cover.ring(), a, b) == identity_matrix(a.len())
}

pub fn affine(p: &PointOnE) -> Option<(Fq, Fq)> {
    match *p {
        PointOnE::Affine(x, y) => Some((x, y)),
        PointOnE::Infinity => None,
    }
}

/// A random annotated pair on `A^n`, `n` in 2..=3, with up to `n` boundary divisors.
/// Multiplicities are drawn from a small set around 1 and occasionally placed on point
/// strata or flagged as containing a component, so all three verdicts occur.
pub fn random_pair(r: &mut StdRng) -> StratifiedPair {
    const MULTS: [(i64, i64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1), (5, 4)];
    let n = r.gen_range(2..=3u32);
    let k = r.gen_range(1..=n as usize);
    let names: Vec<String> = (0..k).map(|i| format!("D{i}")).collect();
    let mut strata = Vec::new();
    let mut top = Q::new(1, 4);
    for mask in 1u32..1 << k {
        let j: Vec<String> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| names[b].clone())
            .collect();
        let dim = n - j.len() as u32;
        // 5/4 only rarely
        let top_index = if r.gen_bool(0.1) {
            MULTS.len()
        } else {
            MULTS.len() - 1
        };
        let (a, b) = MULTS[r.gen_range(0..top_index)];
        let max_mult = if dim == 0 && !r.gen_bool(0.1) {
            Q::from_integer(0)
        } else {
            Q::new(a, b)
        };
        top = top.max(max_mult);
        strata.push(Stratum {
            j,
            dim,
            contains_delta_component: r.gen_bool(0.05),
            max_mult,
            depends_on: Vec::new(),
        });
    }
    StratifiedPair {
        dimension: n,
        divisors: names,
        strata,
        delta: vec![DeltaComponent {
            name: "G".into(),
            coeff: top,
        }],
    }
}
