mod common;

use charp_core::cech::{certified_level, cohomology, h0, TwoChartCover};
use charp_core::elliptic::{PointOnE, WeierstrassCurve};
use charp_core::gf::{FiniteField, Fq, FqMatrix};
use charp_core::unipotent::{DecompositionType, UnipotentBundle, UnipotentEngine};
use common::*;
use proptest::prelude::*;
use rand::Rng;

const FIELDS: [(u32, u32); 6] = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)];

fn field(idx: usize) -> std::sync::Arc<FiniteField> {
    let (p, n) = FIELDS[idx];
    FiniteField::new(p, n, None).unwrap()
}

fn random_curve(f: &std::sync::Arc<FiniteField>, seed: u64) -> Option<WeierstrassCurve> {
    let mut r = rng(seed);
    let codes = [(); 5].map(|_| r.gen_range(0..f.order()));
    WeierstrassCurve::from_codes(f.clone(), codes).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(idx in 0..FIELDS.len(), a in 0u32..25, b in 0u32..25, c in 0u32..25) {
        let f = field(idx);
        let q = f.order();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn rank_plus_kernel_is_column_count(idx in 0..FIELDS.len(), rows in 1usize..6, cols in 1usize..6, seed: u64) {
        let f = field(idx);
        let mut r = rng(seed);
        let m = FqMatrix::from_rows(
            (0..rows).map(|_| (0..cols).map(|_| f.element(r.gen_range(0..f.order()))).collect()).collect(),
        ).unwrap();
        let kernel = m.kernel(&f);
        prop_assert_eq!(m.rank(&f) + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(m.transpose().rank(&f), m.rank(&f));
    }

    #[test]
    fn points_match_brute_force_and_hasse_bound(idx in 0..FIELDS.len(), seed: u64) {
        let f = field(idx);
        let Some(c) = random_curve(&f, seed) else { return Ok(()) };
        let mut expected = brute_force_affine_points(&c);
        expected.sort();
        let mut got: Vec<(Fq, Fq)> = c.points().unwrap().iter().filter_map(affine).collect();
        got.sort();
        prop_assert_eq!(&got, &expected);
        let t = c.frobenius_trace().unwrap();
        prop_assert!(t * t <= 4 * f.order() as i64);
    }

    #[test]
    fn group_law_is_associative(idx in 0..FIELDS.len(), seed: u64) {
        let f = field(idx);
        let Some(c) = random_curve(&f, seed) else { return Ok(()) };
        let pts = c.points().unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let mut pick = || pts[r.gen_range(0..pts.len())];
        let (a, b, d) = (pick(), pick(), pick());
        let left = c.add(&c.add(&a, &b).unwrap(), &d).unwrap();
        let right = c.add(&a, &c.add(&b, &d).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(c.add(&a, &c.neg(&a)).unwrap(), PointOnE::Infinity);
        prop_assert_eq!(c.mul(&a, pts.len() as i64).unwrap(), PointOnE::Infinity);
    }
}

#[test]
fn riemann_roch_and_serre_duality_on_random_bundles() {
    for (i, &p) in PRIMES.iter().enumerate() {
        let cover = TwoChartCover::new(
            &dichotomy_curves(p)
                .iter()
                .map(|&a| curve(p, a))
                .next()
                .unwrap(),
        );
        let mut r = rng(1000 + i as u64);
        let mut mixed = 0;
        for _ in 0..60 {
            let v = random_bundle(&cover, &mut r);
            let res = cohomology(&v, None).unwrap();
            if v.rank() > 1 && res.h0 > 0 && res.h1 > 0 {
                mixed += 1;
            }
            assert!(res.certified && res.stabilized);
            assert_eq!(
                res.h0 as i64 - res.h1 as i64,
                v.degree(),
                "Riemann-Roch, p = {p}"
            );
            assert_eq!(res.h1, h0(&v.dual()), "Serre duality, p = {p}");
        }
        eprintln!("p = {p}: {mixed} of 60 bundles have rank > 1 and h0, h1 > 0");
        assert!(mixed >= 5, "generator too degenerate for p = {p}");
    }
}

#[test]
fn truncation_is_stable_past_the_certified_level() {
    for (i, &p) in PRIMES.iter().enumerate() {
        let cover = cover_for(p, dichotomy_curves(p)[2]);
        let mut r = rng(2000 + i as u64);
        for _ in 0..30 {
            let v = random_bundle(&cover, &mut r);
            let n = certified_level(&v);
            let at = |k| {
                let c = cohomology(&v, Some(k)).unwrap();
                (c.h0, c.h1)
            };
            assert_eq!(at(n), at(n + 1));
            assert_eq!(at(n), at(n + 2));
        }
    }
}

#[test]
fn decomposition_round_trip_and_conjugation_invariance() {
    for &p in &PRIMES {
        let cover = cover_for(p, dichotomy_curves(p)[0]);
        let engine = UnipotentEngine::new(&cover);
        let f = cover.ring().field().clone();
        let mut r = rng(3000 + p as u64);
        for parts in [
            vec![1, 1],
            vec![2],
            vec![1, 2],
            vec![3],
            vec![2, 2],
            vec![1, 3],
            vec![1, 1, 2],
            vec![4],
        ] {
            let mut v = engine.fr(parts[0]).unwrap().bundle().clone();
            for &a in &parts[1..] {
                v = v.direct_sum(engine.fr(a).unwrap().bundle()).unwrap();
            }
            let expected = DecompositionType::new(parts.clone());
            let ty = engine
                .decomposition_type(&UnipotentBundle::new(v.clone()).unwrap())
                .unwrap();
            assert_eq!(ty, expected, "p = {p}");
            let (m, m_inv) = random_constant_frame(&f, v.rank(), true, &mut r);
            let w = v.conjugate_by_constant(&m, &m_inv).unwrap();
            let ty = engine
                .decomposition_type(&UnipotentBundle::new(w).unwrap())
                .unwrap();
            assert_eq!(ty, expected, "unitriangular change of frame, p = {p}");
            // a general frame leaves the unipotent normal form; the profile still agrees
            let (m, m_inv) = random_constant_frame(&f, v.rank(), false, &mut r);
            let w = v.conjugate_by_constant(&m, &m_inv).unwrap();
            for s in 1..=v.rank() {
                let fs = engine.fr(s).unwrap();
                assert_eq!(
                    h0(&w.tensor(fs.bundle()).unwrap()),
                    h0(&v.tensor(fs.bundle()).unwrap())
                );
            }
        }
    }
}
