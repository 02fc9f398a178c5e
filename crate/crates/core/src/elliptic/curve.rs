//! Elliptic curves in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over GF(q).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{extend, Embedding, Field, Fq, FqPolynomial};

/// Default bound on field enumeration, overridable through `CHARP_MAX_FIELD_ENUM`.
pub const DEFAULT_ENUM_BOUND: u64 = 1_000_000;

pub fn enum_bound() -> u64 {
    std::env::var("CHARP_MAX_FIELD_ENUM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_BOUND)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointOnE {
    /// The origin O at infinity.
    Infinity,
    Affine(Fq, Fq),
}

impl PointOnE {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointOnE::Infinity)
    }
}

impl fmt::Display for PointOnE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOnE::Infinity => write!(f, "O"),
            PointOnE::Affine(x, y) => write!(f, "({}, {})", x, y),
        }
    }
}

#[derive(Clone)]
pub struct WeierstrassCurve {
    field: Field,
    a: [Fq; 5],
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{:?}] over {:?}", self.a, self.field)
    }
}

impl PartialEq for WeierstrassCurve {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.a == other.a
    }
}

impl WeierstrassCurve {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(field: Field, a: [Fq; 5]) -> Result<Self> {
        let c = WeierstrassCurve { field, a };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_ints(field: Field, a: [i64; 5]) -> Result<Self> {
        let coeffs = a.map(|v| field.from_int(v));
        Self::new(field, coeffs)
    }

    /// Curve over GF(p^n) from integer codes of the coefficients.
    pub fn from_codes(field: Field, codes: [u32; 5]) -> Result<Self> {
        if codes.iter().any(|&c| c >= field.order()) {
            return Err(Error::InvalidInput(
                "coefficient code outside the field".into(),
            ));
        }
        let coeffs = codes.map(|c| field.element(c));
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coefficients(&self) -> [Fq; 5] {
        self.a
    }

    pub fn a1(&self) -> Fq {
        self.a[0]
    }
    pub fn a2(&self) -> Fq {
        self.a[1]
    }
    pub fn a3(&self) -> Fq {
        self.a[2]
    }
    pub fn a4(&self) -> Fq {
        self.a[3]
    }
    pub fn a6(&self) -> Fq {
        self.a[4]
    }

    fn b_invariants(&self) -> [Fq; 4] {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let c = |v: i64| f.from_int(v);
        let b2 = f.add(f.mul(a1, a1), f.mul(c(4), a2));
        let b4 = f.add(f.mul(c(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(c(4), a6));
        let b8 = f.sum([
            f.mul(f.mul(a1, a1), a6),
            f.mul(c(4), f.mul(a2, a6)),
            f.neg(f.mul(a1, f.mul(a3, a4))),
            f.mul(a2, f.mul(a3, a3)),
            f.neg(f.mul(a4, a4)),
        ]);
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> Fq {
        let f = &*self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let c = |v: i64| f.from_int(v);
        f.sum([
            f.neg(f.mul(f.mul(b2, b2), b8)),
            f.neg(f.mul(c(8), f.pow(b4, 3))),
            f.neg(f.mul(c(27), f.mul(b6, b6))),
            f.mul(c(9), f.mul(b2, f.mul(b4, b6))),
        ])
    }

    /// `(c4, c6)` invariants.
    pub fn c_invariants(&self) -> (Fq, Fq) {
        let f = &*self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        let c = |v: i64| f.from_int(v);
        let c4 = f.sub(f.mul(b2, b2), f.mul(c(24), b4));
        let c6 = f.sum([
            f.neg(f.pow(b2, 3)),
            f.mul(c(36), f.mul(b2, b4)),
            f.neg(f.mul(c(216), b6)),
        ]);
        (c4, c6)
    }

    pub fn j_invariant(&self) -> Fq {
        let f = &*self.field;
        let (c4, _) = self.c_invariants();
        f.div(f.pow(c4, 3), self.discriminant())
            .expect("smooth curve")
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x + a6` and the linear term `a1 x + a3`.
    pub fn rhs(&self, x: Fq) -> (Fq, Fq) {
        let f = &*self.field;
        let cubic = f.sum([
            f.pow(x, 3),
            f.mul(self.a2(), f.mul(x, x)),
            f.mul(self.a4(), x),
            self.a6(),
        ]);
        let lin = f.add(f.mul(self.a1(), x), self.a3());
        (cubic, lin)
    }

    /// Value of `F(x, y) = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6`.
    pub fn equation(&self, x: Fq, y: Fq) -> Fq {
        let f = &*self.field;
        let (cubic, lin) = self.rhs(x);
        f.sub(f.add(f.mul(y, y), f.mul(lin, y)), cubic)
    }

    pub fn contains(&self, p: &PointOnE) -> bool {
        match *p {
            PointOnE::Infinity => true,
            PointOnE::Affine(x, y) => self.equation(x, y).is_zero(),
        }
    }

    pub fn neg(&self, p: &PointOnE) -> PointOnE {
        let f = &*self.field;
        match *p {
            PointOnE::Infinity => PointOnE::Infinity,
            PointOnE::Affine(x, y) => {
                let (_, lin) = self.rhs(x);
                PointOnE::Affine(x, f.sub(f.neg(y), lin))
            }
        }
    }

    /// Group law with O at infinity as identity.
    pub fn add(&self, p: &PointOnE, q: &PointOnE) -> Result<PointOnE> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::PointNotOnCurve);
        }
        let f = &*self.field;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (PointOnE::Infinity, _) => return Ok(*q),
            (_, PointOnE::Infinity) => return Ok(*p),
            (PointOnE::Affine(x1, y1), PointOnE::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a;
        let c = |v: i64| f.from_int(v);
        let (lambda, nu) = if x1 == x2 {
            let denom = f.sum([f.mul(c(2), y1), f.mul(a1, x1), a3]);
            if f.add(y1, y2) == f.sub(f.neg(f.mul(a1, x2)), a3) || denom.is_zero() {
                return Ok(PointOnE::Infinity);
            }
            let num = f.sum([
                f.mul(c(3), f.mul(x1, x1)),
                f.mul(c(2), f.mul(a2, x1)),
                a4,
                f.neg(f.mul(a1, y1)),
            ]);
            let num_nu = f.sum([
                f.neg(f.pow(x1, 3)),
                f.mul(a4, x1),
                f.mul(c(2), a6),
                f.neg(f.mul(a3, y1)),
            ]);
            (f.div(num, denom)?, f.div(num_nu, denom)?)
        } else {
            let dx = f.sub(x2, x1);
            let lambda = f.div(f.sub(y2, y1), dx)?;
            let nu = f.div(f.sub(f.mul(y1, x2), f.mul(y2, x1)), dx)?;
            (lambda, nu)
        };
        let x3 = f.sum([
            f.mul(lambda, lambda),
            f.mul(a1, lambda),
            f.neg(a2),
            f.neg(x1),
            f.neg(x2),
        ]);
        let y3 = f.sum([f.neg(f.mul(f.add(lambda, a1), x3)), f.neg(nu), f.neg(a3)]);
        Ok(PointOnE::Affine(x3, y3))
    }

    pub fn mul(&self, p: &PointOnE, k: i64) -> Result<PointOnE> {
        let mut acc = PointOnE::Infinity;
        let base = if k < 0 { self.neg(p) } else { *p };
        let mut k = k.unsigned_abs();
        let mut pw = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pw)?;
            }
            pw = self.add(&pw, &pw)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// All rational points, sorted, `O` first.
    pub fn points(&self) -> Result<Vec<PointOnE>> {
        let q = self.field.order() as u64;
        let bound = enum_bound();
        if q > bound {
            return Err(Error::EnumerationBound { size: q, bound });
        }
        let mut pts = vec![PointOnE::Infinity];
        for x in self.field.elements() {
            pts.extend(self.y_roots(x).into_iter().map(|y| PointOnE::Affine(x, y)));
        }
        Ok(pts)
    }

    /// Lexicographically smallest affine rational point.
    pub fn smallest_affine_point(&self) -> Option<PointOnE> {
        self.field
            .elements()
            .find_map(|x| self.y_roots(x).first().map(|&y| PointOnE::Affine(x, y)))
    }

    /// The solutions `y` of the curve equation at abscissa `x`, in increasing order.
    pub fn y_roots(&self, x: Fq) -> Vec<Fq> {
        let f = &*self.field;
        let (cubic, lin) = self.rhs(x);
        let mut ys = if f.characteristic() == 2 {
            if lin.is_zero() {
                f.sqrt(cubic).into_iter().collect()
            } else {
                let l2 = f.mul(lin, lin);
                let c = f.div(cubic, l2).expect("lin is nonzero");
                match f.solve_artin_schreier(c) {
                    Some(z) => vec![f.mul(lin, z), f.mul(lin, f.add(z, Fq::ONE))],
                    None => vec![],
                }
            }
        } else {
            let four = f.from_int(4);
            let disc = f.add(f.mul(lin, lin), f.mul(four, cubic));
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            match f.sqrt(disc) {
                Some(s) if s.is_zero() => vec![f.mul(half, f.neg(lin))],
                Some(s) => vec![
                    f.mul(half, f.sub(s, lin)),
                    f.mul(half, f.sub(f.neg(s), lin)),
                ],
                None => vec![],
            }
        };
        ys.sort();
        ys
    }

    /// Number of solutions `y` of `y^2 + lin*y = cubic` over this field.
    fn root_count(&self, cubic: Fq, lin: Fq) -> u64 {
        let f = &*self.field;
        if f.characteristic() == 2 {
            if lin.is_zero() {
                return 1;
            }
            // y = lin*z turns this into z^2 + z = cubic / lin^2
            let c = f.div(cubic, f.mul(lin, lin)).expect("lin nonzero");
            if f.trace(c).is_zero() {
                2
            } else {
                0
            }
        } else {
            let disc = f.add(f.mul(lin, lin), f.mul(f.from_int(4), cubic));
            (1 + f.legendre(disc)) as u64
        }
    }

    /// `#E(GF(q^e))` including O, by enumerating x and solving the quadratic in y.
    pub fn count_points(&self, extension_degree: u32) -> Result<u64> {
        self.count_points_bounded(extension_degree, enum_bound())
    }

    pub fn count_points_bounded(&self, extension_degree: u32, bound: u64) -> Result<u64> {
        let size = (self.field.order() as u64)
            .checked_pow(extension_degree)
            .unwrap_or(u64::MAX);
        if size > bound {
            return Err(Error::EnumerationBound { size, bound });
        }
        let (curve, _) = self.base_change(extension_degree)?;
        let f = &*curve.field;
        let mut count = 1u64;
        for x in f.elements() {
            let (cubic, lin) = curve.rhs(x);
            count += curve.root_count(cubic, lin);
        }
        Ok(count)
    }

    /// Trace of Frobenius `q + 1 - #E(GF(q))`.
    pub fn frobenius_trace(&self) -> Result<i64> {
        let n = self.count_points(1)? as i64;
        Ok(self.field.order() as i64 + 1 - n)
    }

    /// Hasse invariant for `p >= 5`: coefficient of `x^(p-1)` in `f(x)^((p-1)/2)`
    /// where `y^2 = f(x)` is the short Weierstrass model.
    pub fn hasse_invariant(&self) -> Option<Fq> {
        let f = &*self.field;
        let p = f.characteristic() as u64;
        if p < 5 {
            return None;
        }
        let (c4, c6) = self.c_invariants();
        let a = f.mul(f.from_int(-27), c4);
        let b = f.mul(f.from_int(-54), c6);
        let cubic = FqPolynomial::new(vec![b, a, Fq::ZERO, Fq::ONE]);
        let pw = cubic.pow(f, (p - 1) / 2);
        Some(pw.coeff((p - 1) as usize))
    }

    /// Supersingularity: Hasse invariant for `p >= 5`, trace of Frobenius mod p for
    /// `p` in `{2, 3}`.
    pub fn is_supersingular(&self) -> Result<bool> {
        match self.hasse_invariant() {
            Some(h) => Ok(h.is_zero()),
            None => self.is_supersingular_by_trace(),
        }
    }

    /// Point-count criterion, valid in every characteristic.
    pub fn is_supersingular_by_trace(&self) -> Result<bool> {
        let t = self.frobenius_trace()?;
        Ok(t.rem_euclid(self.field.characteristic() as i64) == 0)
    }

    /// The same curve over GF(q^e), with the coefficient embedding.
    pub fn base_change(&self, e: u32) -> Result<(WeierstrassCurve, Embedding)> {
        let emb = extend(&self.field, e)?;
        let a = self.a.map(|c| emb.map(c));
        Ok((
            WeierstrassCurve {
                field: emb.big.clone(),
                a,
            },
            emb,
        ))
    }

    /// `E^(p)`: coefficients raised to the p-th power.
    pub fn frobenius_twist(&self) -> WeierstrassCurve {
        let f = &*self.field;
        WeierstrassCurve {
            field: self.field.clone(),
            a: self.a.map(|c| f.frobenius(c)),
        }
    }

    /// `E^(1/p)`: coefficients replaced by their p-th roots; the relative Frobenius of
    /// this curve lands on `self`.
    pub fn frobenius_untwist(&self) -> WeierstrassCurve {
        let f = &*self.field;
        WeierstrassCurve {
            field: self.field.clone(),
            a: self.a.map(|c| f.frobenius_inv(c)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;

    fn gf(p: u32) -> Field {
        FiniteField::prime(p).unwrap()
    }

    #[test]
    fn singular_curve_rejected() {
        // y^2 = x^3 over GF(5)
        assert!(matches!(
            WeierstrassCurve::from_ints(gf(5), [0, 0, 0, 0, 0]),
            Err(Error::SingularCurve)
        ));
    }

    #[test]
    fn point_counts_by_enumeration() {
        let e = WeierstrassCurve::from_ints(gf(2), [0, 0, 1, 0, 0]).unwrap();
        assert_eq!(e.count_points(1).unwrap(), 3);
        assert_eq!(e.points().unwrap().len(), 3);
        let e = WeierstrassCurve::from_ints(gf(2), [1, 0, 0, 0, 1]).unwrap();
        assert_eq!(e.count_points(1).unwrap(), 4);
        let e = WeierstrassCurve::from_ints(gf(3), [0, 0, 0, 1, 0]).unwrap();
        assert_eq!(e.count_points(1).unwrap(), 4);
    }

    #[test]
    fn identity_and_inverse() {
        let e = WeierstrassCurve::from_ints(gf(5), [0, 0, 0, 2, 1]).unwrap();
        for p in e.points().unwrap() {
            assert_eq!(e.add(&p, &PointOnE::Infinity).unwrap(), p);
            assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), PointOnE::Infinity);
        }
    }

    #[test]
    fn tangent_doubling_over_gf2() {
        // y^2 + y = x^3: E(F_2) = {O, (0,0), (0,1)} is cyclic of order 3
        let e = WeierstrassCurve::from_ints(gf(2), [0, 0, 1, 0, 0]).unwrap();
        let p = PointOnE::Affine(Fq::ZERO, Fq::ZERO);
        let q = PointOnE::Affine(Fq::ZERO, Fq::ONE);
        assert_eq!(e.add(&p, &p).unwrap(), q);
        assert_eq!(e.add(&p, &q).unwrap(), PointOnE::Infinity);
        assert_eq!(e.add(&q, &q).unwrap(), p);
    }

    #[test]
    fn off_curve_points_rejected() {
        let e = WeierstrassCurve::from_ints(gf(5), [0, 0, 0, 2, 1]).unwrap();
        let bad = PointOnE::Affine(Fq::ZERO, Fq::ZERO);
        assert!(matches!(e.add(&bad, &bad), Err(Error::PointNotOnCurve)));
    }

    #[test]
    fn supersingularity_small_characteristic() {
        let ss = WeierstrassCurve::from_ints(gf(2), [0, 0, 1, 0, 0]).unwrap();
        assert!(ss.is_supersingular().unwrap());
        let ord = WeierstrassCurve::from_ints(gf(2), [1, 0, 0, 0, 1]).unwrap();
        assert!(!ord.is_supersingular().unwrap());
    }

    #[test]
    fn hasse_invariant_agrees_with_trace() {
        for p in [5u32, 7, 11] {
            let f = gf(p);
            for a4 in 0..p as i64 {
                for a6 in 0..p as i64 {
                    let Ok(e) = WeierstrassCurve::from_ints(f.clone(), [0, 0, 0, a4, a6]) else {
                        continue;
                    };
                    assert_eq!(
                        e.is_supersingular().unwrap(),
                        e.is_supersingular_by_trace().unwrap(),
                        "p={p} a4={a4} a6={a6}"
                    );
                }
            }
        }
    }
}
