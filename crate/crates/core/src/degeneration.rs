//! The family of ruled surfaces over `A^1` whose fiber at `t = 0` is `P(O + O)` and at
//! `t != 0` is `P(F_2)`, the cone over it, and the resulting plurigenera.
//!
//! With `Delta = (1/(m p)) (G_1 + ... + G_{2m})` for general `G_i` in `|p D|` one has
//! `K_S + Delta ~ 0`, so for `m` divisible by `m p` the pluricanonical divisor
//! `m (K_S + Delta + Theta)` is linearly equivalent to `m D` and plurigenera become
//! section counts on the ruled surface. Here and below the `m` of the boundary
//! coefficient is called `m_bar`.

use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::cech::{certified_level, global_section_system, h0, Cover};
use crate::elliptic::{DivisorOnE, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::gf::{FiniteField, Fq, FqPolynomial, PolyMatrix};
use crate::ruled::{RuledKind, RuledSurfaceModel};
use crate::unipotent::UnipotentEngine;

/// Which fiber of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberChoice {
    /// `t = 0`, the split surface.
    Special,
    /// `t != 0`, the surface over `F_2`.
    Generic,
}

/// The horizontal boundary component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    /// The section `D` itself, with coefficient 1.
    Section,
    /// `(1/(m_bar p)) (G'_1 + ... + G'_{m_bar})` with `G'_i` general in `|p D|`, giving
    /// terminal fibers.
    PencilAverage,
}

/// A boundary summand: `count` general members of `|multiple D|`, each with `coefficient`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryTerm {
    pub coefficient: Ratio<i64>,
    pub count: u32,
    pub multiple: u32,
}

impl BoundaryTerm {
    /// Class as a multiple of `D`.
    pub fn class(&self) -> Ratio<i64> {
        self.coefficient * Ratio::from_integer(self.count as i64 * self.multiple as i64)
    }
}

#[derive(Clone)]
pub struct FamilyConfig {
    cover: Cover,
    m_bar: u32,
    theta: ThetaVariant,
    special: RuledSurfaceModel,
    generic: RuledSurfaceModel,
}

/// `y^2 = x^3 + x + b` for the least `b >= 1` giving a smooth curve, or `y^2 + xy = x^3 + 1`
/// in characteristic 2.
pub fn default_curve(p: u32) -> Result<WeierstrassCurve> {
    let f = FiniteField::prime(p)?;
    if p == 2 {
        return WeierstrassCurve::from_ints(f, [1, 0, 0, 0, 1]);
    }
    (1..p as i64)
        .find_map(|b| WeierstrassCurve::from_ints(f.clone(), [0, 0, 0, 1, b]).ok())
        .ok_or(Error::SingularCurve)
}

impl FamilyConfig {
    pub fn new(curve: &WeierstrassCurve, m_bar: u32, theta: ThetaVariant) -> Result<Self> {
        if m_bar == 0 {
            return Err(Error::InvalidInput("m_bar must be positive".into()));
        }
        let cover = crate::cech::TwoChartCover::new(curve);
        let engine = Arc::new(UnipotentEngine::new(&cover));
        Ok(FamilyConfig {
            special: RuledSurfaceModel::new(engine.clone(), RuledKind::Split)?,
            generic: RuledSurfaceModel::new(engine, RuledKind::Atiyah)?,
            cover,
            m_bar,
            theta,
        })
    }

    /// Default curve for `p`, `m_bar = 1`, `Theta = D`.
    pub fn default_for_prime(p: u32) -> Result<Self> {
        Self::new(&default_curve(p)?, 1, ThetaVariant::Section)
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        self.cover.curve()
    }

    pub fn characteristic(&self) -> u32 {
        self.cover.ring().field().characteristic()
    }

    pub fn m_bar(&self) -> u32 {
        self.m_bar
    }

    pub fn theta(&self) -> ThetaVariant {
        self.theta
    }

    /// Plurigenera are computed for multiples of `m_bar p`.
    pub fn step(&self) -> u64 {
        self.m_bar as u64 * self.characteristic() as u64
    }

    pub fn model(&self, fiber: FiberChoice) -> &RuledSurfaceModel {
        match fiber {
            FiberChoice::Special => &self.special,
            FiberChoice::Generic => &self.generic,
        }
    }

    fn unit_coefficient(&self) -> Ratio<i64> {
        Ratio::new(1, self.step() as i64)
    }

    /// `Delta`: `2 m_bar` members of `|p D|` with coefficient `1/(m_bar p)`.
    pub fn delta(&self) -> BoundaryTerm {
        BoundaryTerm {
            coefficient: self.unit_coefficient(),
            count: 2 * self.m_bar,
            multiple: self.characteristic(),
        }
    }

    pub fn theta_term(&self) -> BoundaryTerm {
        match self.theta {
            ThetaVariant::Section => BoundaryTerm {
                coefficient: Ratio::from_integer(1),
                count: 1,
                multiple: 1,
            },
            ThetaVariant::PencilAverage => BoundaryTerm {
                coefficient: self.unit_coefficient(),
                count: self.m_bar,
                multiple: self.characteristic(),
            },
        }
    }

    /// `K_S + Delta` as a multiple of `D`, using `K_S ~ -2 D`. Zero for every valid config.
    pub fn log_canonical_class(&self) -> Ratio<i64> {
        Ratio::from_integer(-2) + self.delta().class()
    }

    pub fn check_divisible(&self, m: u64) -> Result<()> {
        let step = self.step();
        if !m.is_multiple_of(step) {
            return Err(Error::NonDivisible { m, step });
        }
        Ok(())
    }
}

/// `P_m` of the fiber pair `(S_t, Delta_t + Theta_t)`, equal to `h0(S_t, O(m D_t))`.
pub fn surface_plurigenus(cfg: &FamilyConfig, fiber: FiberChoice, m: u64) -> Result<usize> {
    cfg.check_divisible(m)?;
    let m = u32::try_from(m).map_err(|_| Error::InvalidInput("m too large".into()))?;
    cfg.model(fiber).section_count(m, None)
}

/// The cone over the fiber pair, with `L = O_S(D) (x) pi^* O(a O)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeModel {
    /// `deg A`, at least 1.
    pub a: u32,
}

impl ConeModel {
    pub fn new(a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidInput("deg A must be at least 1".into()));
        }
        Ok(ConeModel { a })
    }

    /// The closed form `(m + r + 1) r a` of the `r`-th summand for `r >= 1`: every graded
    /// piece of `Sym^(m+r) F (x) O(r a O)` is a line bundle of degree `r a > 0`.
    pub fn positive_term(&self, m: u64, r: u64) -> u64 {
        (m + r + 1) * r * self.a as u64
    }

    /// The `r`-th summand `h0(S_t, O((m + r) D) (x) pi^* O(r a O))` by Čech cohomology.
    pub fn positive_term_cech(
        &self,
        cfg: &FamilyConfig,
        fiber: FiberChoice,
        m: u64,
        r: u64,
    ) -> Result<usize> {
        let k = u32::try_from(m + r).map_err(|_| Error::InvalidInput("m too large".into()))?;
        let twist = DivisorOnE::origin((r * self.a as u64) as i64);
        cfg.model(fiber).section_count(k, Some(&twist))
    }
}

/// `P_m` of the cone, `sum_{r=0}^m h0(Z, L^r (m D_Z))`; the `r = 0` summand is the surface
/// plurigenus and the others use the closed form.
pub fn threefold_plurigenus(
    cfg: &FamilyConfig,
    cone: &ConeModel,
    fiber: FiberChoice,
    m: u64,
) -> Result<u64> {
    let base = surface_plurigenus(cfg, fiber, m)? as u64;
    Ok(base + (1..=m).map(|r| cone.positive_term(m, r)).sum::<u64>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlurigeneraRow {
    pub m: u64,
    pub surface_special: usize,
    pub surface_generic: usize,
    pub surface_jump: i64,
    pub threefold_special: u64,
    pub threefold_generic: u64,
    pub threefold_jump: i64,
    /// `floor(m/p) + 1`, an unproved expectation for the generic surface value.
    pub floor_expectation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlurigeneraTable {
    pub p: u32,
    pub m_bar: u32,
    pub a: u32,
    pub rows: Vec<PlurigeneraRow>,
}

impl PlurigeneraTable {
    /// Rows for every multiple of the step up to `m_max`.
    pub fn compute(cfg: &FamilyConfig, cone: &ConeModel, m_max: u64) -> Result<Self> {
        let p = cfg.characteristic();
        let mut rows = Vec::new();
        let mut m = cfg.step();
        while m <= m_max {
            let s0 = surface_plurigenus(cfg, FiberChoice::Special, m)?;
            let s1 = surface_plurigenus(cfg, FiberChoice::Generic, m)?;
            let y0 = threefold_plurigenus(cfg, cone, FiberChoice::Special, m)?;
            let y1 = threefold_plurigenus(cfg, cone, FiberChoice::Generic, m)?;
            rows.push(PlurigeneraRow {
                m,
                surface_special: s0,
                surface_generic: s1,
                surface_jump: s0 as i64 - s1 as i64,
                threefold_special: y0,
                threefold_generic: y1,
                threefold_jump: y0 as i64 - y1 as i64,
                floor_expectation: m / p as u64 + 1,
            });
            m += cfg.step();
        }
        Ok(PlurigeneraTable {
            p,
            m_bar: cfg.m_bar(),
            a: cone.a,
            rows,
        })
    }
}

/// `h0` of `Sym^m` of the family bundle `[[1, t g], [0, 1]]` over `GF(q)(t)` and at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametricRanks {
    pub generic: usize,
    pub special: usize,
    /// Number of unknowns in the global-section system.
    pub unknowns: usize,
    /// Degrees of the nonzero invariant factors of the system over `GF(q)[t]`.
    pub invariant_factor_degrees: Vec<usize>,
}

/// Global sections of the family `Sym^m F(t)` via the Smith normal form over `GF(q)[t]`.
///
/// The `(i, k)` entry of `Sym^m [[1, t g], [0, 1]]` is `C(k, i) (t g)^(k - i)`, so the
/// section system for general `t` is the one for `t = 1` with each entry linking row
/// component `i` to column component `k` multiplied by `t^(k - i)`. The generic `h0` is
/// the number of columns minus the rank over `GF(q)(t)`; the special one subtracts the
/// number of invariant factors not vanishing at 0.
pub fn parametric_cohomology(cfg: &FamilyConfig, m: u32) -> Result<ParametricRanks> {
    let f = cfg.cover().ring().field().clone();
    let v = cfg.model(FiberChoice::Generic).bundle().bundle().sym(m);
    let sys = global_section_system(&v, certified_level(&v));
    let (rows, cols) = (sys.matrix.rows(), sys.matrix.cols());
    let mut pm = PolyMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let x = sys.matrix.get(r, c);
            if x.is_zero() {
                continue;
            }
            let (i, k) = (sys.rows[r].0, sys.columns[c].0);
            let shift = k.checked_sub(i).expect("transition is upper triangular");
            pm.set(r, c, FqPolynomial::monomial(x, shift));
        }
    }
    let inv = pm.invariant_factors(&f);
    let nonvanishing_at_zero = inv.iter().filter(|d| !d.coeff(0).is_zero()).count();
    let special = cols - nonvanishing_at_zero;
    debug_assert_eq!(special, cols - pm.eval(&f, Fq::ZERO).rank(&f));
    Ok(ParametricRanks {
        generic: cols - inv.len(),
        special,
        unknowns: cols,
        invariant_factor_degrees: inv.iter().map(|d| d.degree().unwrap_or(0)).collect(),
    })
}

/// The Cohen–Macaulay test for one fiber of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberVerdict {
    pub fiber: FiberChoice,
    /// Multiplicity `k` of `D` in the fibers of the elliptic fibration given by `|k D|`.
    pub fiber_multiplicity: u32,
    /// `h1(kD, O_{kD})`.
    pub h1: usize,
    /// The value `h1` would take if `R^1 tau_* O` were torsion-free.
    pub torsion_free_prediction: usize,
    pub cohen_macaulay: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonCmReport {
    pub fibers: Vec<FiberVerdict>,
    /// `h1(D, O_D)` on the generic fiber; `D` is an elliptic curve.
    pub reduced_section_h1: usize,
}

/// The smallest `k >= 1` with `h0(O(k D)) >= 2`, searched up to `2 p + 2`.
fn pencil_multiplicity(model: &RuledSurfaceModel, p: u32) -> Result<u32> {
    (1..=2 * p + 2)
        .find_map(|k| match model.section_count(k, None) {
            Ok(n) if n >= 2 => Some(Ok(k)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .unwrap_or_else(|| {
            Err(Error::Inconclusive(
                "no pencil |kD| with k <= 2p + 2".into(),
            ))
        })
}

/// The canonical model of the cone is CM at a fiber exactly when `R^1 tau_* O_S` has no
/// 0-dimensional associated point. A torsion-free `R^1 tau_* O_S` would be a line bundle
/// with `h1(kD, O_{kD}) = 1` on the multiple fiber `kD`; a larger value means torsion.
pub fn non_cm_certificate(cfg: &FamilyConfig) -> Result<NonCmReport> {
    let p = cfg.characteristic();
    let mut fibers = Vec::new();
    for fiber in [FiberChoice::Special, FiberChoice::Generic] {
        let model = cfg.model(fiber);
        let k = pencil_multiplicity(model, p)?;
        let h1 = model.thickened_section_h1(k)?;
        fibers.push(FiberVerdict {
            fiber,
            fiber_multiplicity: k,
            h1,
            torsion_free_prediction: 1,
            cohen_macaulay: h1 <= 1,
        });
    }
    let reduced_section_h1 = cfg.model(FiberChoice::Generic).thickened_section_h1(1)?;
    Ok(NonCmReport {
        fibers,
        reduced_section_h1,
    })
}

/// `h0(Sym^m F)` on the special and generic fiber computed independently of
/// [`parametric_cohomology`].
pub fn fiberwise_h0(cfg: &FamilyConfig, m: u32) -> (usize, usize) {
    let s = h0(&cfg.model(FiberChoice::Special).bundle().bundle().sym(m));
    let g = h0(&cfg.model(FiberChoice::Generic).bundle().bundle().sym(m));
    (s, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_classes() {
        let cfg =
            FamilyConfig::new(&default_curve(5).unwrap(), 3, ThetaVariant::PencilAverage).unwrap();
        assert_eq!(cfg.log_canonical_class(), Ratio::from_integer(0));
        assert_eq!(cfg.theta_term().class(), Ratio::from_integer(1));
        assert_eq!(cfg.delta().coefficient, Ratio::new(1, 15));
    }

    #[test]
    fn divisibility() {
        let cfg = FamilyConfig::default_for_prime(3).unwrap();
        assert!(matches!(
            surface_plurigenus(&cfg, FiberChoice::Generic, 4),
            Err(Error::NonDivisible { m: 4, step: 3 })
        ));
        assert_eq!(
            surface_plurigenus(&cfg, FiberChoice::Generic, 3).unwrap(),
            2
        );
        assert_eq!(
            surface_plurigenus(&cfg, FiberChoice::Special, 3).unwrap(),
            4
        );
    }

    #[test]
    fn parametric_small_cases() {
        let cfg = FamilyConfig::default_for_prime(3).unwrap();
        let r = |m| {
            let x = parametric_cohomology(&cfg, m).unwrap();
            (x.generic, x.special)
        };
        assert_eq!(r(0), (1, 1));
        assert_eq!(r(1), (1, 2));
        assert_eq!(r(3), (2, 4));
    }

    #[test]
    fn default_curves_are_smooth() {
        for p in [2, 3, 5, 7, 11, 13, 31] {
            assert!(default_curve(p).is_ok(), "p = {p}");
        }
    }
}
