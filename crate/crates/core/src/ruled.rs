//! The ruled surface `S = P(F) -> E` for `F = O + O` or `F = F_2`, with `D` the section
//! cut out by the trivial subbundle `O e_1` of `F`.
//!
//! Everything reduces to bundles on `E` through `pi_* O_S(m D + pi^* M) = Sym^m F (x) O(M)`.

use std::sync::Arc;

use crate::cech::{cohomology, h0, h1, CechBundle, Cover, Func, Section};
use crate::elliptic::{DivisorOnE, PointOnE};
use crate::error::{Error, Result};
use crate::gf::{Embedding, FiniteField, Fq, FqMatrix};
use crate::unipotent::{DecompositionType, UnipotentBundle, UnipotentEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuledKind {
    /// `F = O + O`, so `S = E x P^1`.
    Split,
    /// `F = F_2`, the nonsplit self-extension of `O`.
    Atiyah,
}

/// The class `a D + pi^* M` on `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceDivisorClass {
    pub section_multiple: i64,
    pub fiber_part: DivisorOnE,
}

impl SurfaceDivisorClass {
    pub fn new(section_multiple: i64, fiber_part: DivisorOnE) -> Self {
        SurfaceDivisorClass {
            section_multiple,
            fiber_part,
        }
    }

    /// Intersection number, using `D^2 = 0` and `D . pi^* M = deg M`.
    pub fn intersection(&self, other: &Self) -> i64 {
        self.section_multiple * other.fiber_part.degree()
            + other.section_multiple * self.fiber_part.degree()
    }
}

#[derive(Clone)]
pub struct RuledSurfaceModel {
    engine: Arc<UnipotentEngine>,
    kind: RuledKind,
    bundle: UnipotentBundle,
}

impl RuledSurfaceModel {
    pub fn new(engine: Arc<UnipotentEngine>, kind: RuledKind) -> Result<Self> {
        let bundle = match kind {
            RuledKind::Split => UnipotentBundle::new(CechBundle::trivial(engine.cover(), 2))?,
            RuledKind::Atiyah => engine.fr(2)?,
        };
        Ok(RuledSurfaceModel {
            engine,
            kind,
            bundle,
        })
    }

    pub fn from_cover(cover: &Cover, kind: RuledKind) -> Result<Self> {
        Self::new(Arc::new(UnipotentEngine::new(cover)), kind)
    }

    pub fn kind(&self) -> RuledKind {
        self.kind
    }

    pub fn engine(&self) -> &Arc<UnipotentEngine> {
        &self.engine
    }

    pub fn cover(&self) -> &Cover {
        self.engine.cover()
    }

    /// The rank 2 bundle `F` with `S = P(F)`.
    pub fn bundle(&self) -> &UnipotentBundle {
        &self.bundle
    }

    /// `pi_* O_S(m D) = Sym^m F`.
    pub fn pushforward(&self, m: u32) -> Result<UnipotentBundle> {
        UnipotentBundle::new(self.bundle.bundle().sym(m))
    }

    /// `h0(S, O(m D + pi^* M))`, with `M = 0` when absent.
    pub fn section_count(&self, m: u32, fiber_part: Option<&DivisorOnE>) -> Result<usize> {
        let v = self.bundle.bundle().sym(m);
        let v = match fiber_part {
            Some(d) => v.twist(d)?,
            None => v,
        };
        Ok(h0(&v))
    }

    pub fn section_count_of(&self, class: &SurfaceDivisorClass) -> Result<usize> {
        let m = u32::try_from(class.section_multiple)
            .map_err(|_| Error::InvalidInput("section multiple must be nonnegative".into()))?;
        self.section_count(m, Some(&class.fiber_part))
    }

    /// Decomposition type of `Sym^m F`.
    pub fn pushforward_type(&self, m: u32) -> Result<DecompositionType> {
        self.engine.decomposition_type(&self.pushforward(m)?)
    }

    /// `pi_* O_{kD}(kD) = Sym^k F / O e_1^k`, from `0 -> O_S -> O_S(kD) -> O_{kD}(kD) -> 0`
    /// and `R^1 pi_* O_S = 0`.
    pub fn thickened_pushforward(&self, k: u32) -> Result<CechBundle> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "thickening order must be positive".into(),
            ));
        }
        self.bundle.bundle().sym(k).quotient_by_leading(1)
    }

    /// `h1(kD, O_{kD}(kD))`. The restriction `O(kD)|_{kD}` is trivial whenever `kD` is a
    /// fiber of a pencil (every `k` on the split surface, `k = p` on the nonsplit one),
    /// and then this is `h1(kD, O_{kD})`. Fibers of `kD -> E` are finite, so the higher
    /// direct images vanish and the value is `h1` of the pushforward.
    pub fn thickened_section_h1(&self, k: u32) -> Result<usize> {
        Ok(h1(&self.thickened_pushforward(k)?))
    }

    /// The two sections spanning `H0(S, O(m D))`; an error unless `h0 = 2`.
    pub fn pencil_sections(&self, m: u32) -> Result<(Section, Section)> {
        let res = cohomology(&self.bundle.bundle().sym(m), None)?;
        if res.h0 != 2 {
            return Err(Error::InvalidInput(format!(
                "|{m}D| has dimension {}, not a pencil",
                res.h0
            )));
        }
        let mut it = res.sections.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }

    /// Whether the pencil `|m D|` is free of base points.
    pub fn pencil_basepoint_check(&self, m: u32) -> Result<bool> {
        let (s1, s2) = self.pencil_sections(m)?;
        basepoint_free_on_samples(self.cover(), m, 0, &s1, &s2, DEFAULT_SAMPLE_DEGREE)
    }
}

/// Extension degrees sampled by [`basepoint_free_on_samples`] by default.
pub const DEFAULT_SAMPLE_DEGREE: u32 = 4;

/// Homogeneous resultant of two binary forms of degree `m`, given by their coefficient
/// lists `a_0 .. a_m` of `z1^(m-i) z2^i`.
pub fn binary_resultant(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Result<Fq> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch(
            "binary forms of equal degree".into(),
        ));
    }
    let m = a.len() - 1;
    if m == 0 {
        return Ok(Fq::ONE);
    }
    let n = 2 * m;
    let mut s = FqMatrix::zeros(n, n);
    for r in 0..m {
        for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
            s.set(r, r + i, x);
            s.set(m + r, r + i, y);
        }
    }
    s.determinant(f)
}

fn eval_polynomial_part(emb: &Embedding, a: &Func, u: Fq, y: Fq) -> Fq {
    let big = &*emb.big;
    let mut acc = Fq::ZERO;
    for (j, e, c) in a.terms() {
        debug_assert!(j >= 0);
        let mut t = big.mul(emb.map(c), big.pow(u, j as u64));
        if e == 1 {
            t = big.mul(t, y);
        }
        acc = big.add(acc, t);
    }
    acc
}

/// Value at O of a `U2`-function with pole order at most `d` there, in the local frame
/// given by the monomial of pole order exactly `d`.
fn value_at_origin(a: &Func, d: i64) -> Fq {
    let (j, e) = if d.rem_euclid(2) == 0 {
        (d / 2, 0)
    } else {
        ((d - 3) / 2, 1)
    };
    a.coeff(j, e)
}

/// Checks that two sections of `Sym^m F (x) O(twist O)` have no common zero on `P(F)`.
///
/// At each point `P` of `E` the sections give binary forms on the fiber, and they share
/// a zero exactly when their resultant vanishes. The points sampled are O and all
/// points over extensions of degree `1..=max_degree`. A vanishing resultant is a base
/// point. For `twist = 0` and unimodular transitions the resultant is a global function,
/// hence constant, so equal nonzero values everywhere certify freeness. Otherwise
/// nonzero samples cannot rule out base points over larger fields and the answer is
/// [`Error::Inconclusive`].
pub fn basepoint_free_on_samples(
    cover: &Cover,
    m: u32,
    twist: i64,
    s1: &Section,
    s2: &Section,
    max_degree: u32,
) -> Result<bool> {
    let n = m as usize + 1;
    if [&s1.chart1, &s1.chart2, &s2.chart1, &s2.chart2]
        .iter()
        .any(|v| v.len() != n)
    {
        return Err(Error::DimensionMismatch(
            "sections must have m + 1 components".into(),
        ));
    }
    let field = cover.ring().field().clone();
    let at_o =
        |s: &Section| -> Vec<Fq> { s.chart2.iter().map(|c| value_at_origin(c, twist)).collect() };
    let r0 = binary_resultant(&field, &at_o(s1), &at_o(s2))?;
    if r0.is_zero() {
        return Ok(false);
    }
    let mut constant = true;
    for e in 1..=max_degree {
        let (curve, emb) = cover.curve().base_change(e)?;
        let x0 = emb.map(cover.base_x());
        for p in curve.points()? {
            let PointOnE::Affine(x, y) = p else { continue };
            let u = emb.big.sub(x, x0);
            let ev = |s: &Section| -> Vec<Fq> {
                s.chart1
                    .iter()
                    .map(|c| eval_polynomial_part(&emb, c, u, y))
                    .collect()
            };
            let r = binary_resultant(&emb.big, &ev(s1), &ev(s2))?;
            if r.is_zero() {
                return Ok(false);
            }
            constant &= r == emb.map(r0);
        }
    }
    if twist == 0 && constant {
        Ok(true)
    } else {
        Err(Error::Inconclusive(format!(
            "no base point over extensions of degree <= {max_degree}, but the resultant is not constant"
        )))
    }
}
