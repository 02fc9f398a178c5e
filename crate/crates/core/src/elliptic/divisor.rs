//! Divisors on E and Riemann–Roch spaces L(D).
//!
//! Functions are written as `a / h` with `a = P0(x) + P1(x) y` regular on the affine
//! part and `h` a polynomial in `x`. Orders at affine points come from power-series
//! expansions in a local uniformizer: `x - x0` when the tangent is not vertical,
//! otherwise `y - y0`.

use std::collections::BTreeMap;

use crate::elliptic::curve::{PointOnE, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::gf::{FiniteField, Fq, FqMatrix, FqPolynomial};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorOnE {
    mult: BTreeMap<PointOnE, i64>,
}

impl DivisorOnE {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `n * P`
    pub fn point(p: PointOnE, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_point(p, n);
        d
    }

    pub fn origin(n: i64) -> Self {
        Self::point(PointOnE::Infinity, n)
    }

    /// Builds a divisor on `curve`, checking that every point lies on it.
    pub fn from_terms(curve: &WeierstrassCurve, terms: &[(PointOnE, i64)]) -> Result<Self> {
        let mut d = Self::zero();
        for &(p, n) in terms {
            if let PointOnE::Affine(x, y) = p {
                let q = curve.field().order();
                if x.code() >= q || y.code() >= q {
                    return Err(Error::IrrationalSupport);
                }
            }
            if !curve.contains(&p) {
                return Err(Error::PointNotOnCurve);
            }
            d.add_point(p, n);
        }
        Ok(d)
    }

    pub fn add_point(&mut self, p: PointOnE, n: i64) {
        let e = self.mult.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.mult.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (&p, &n) in &other.mult {
            d.add_point(p, n);
        }
        d
    }

    pub fn multiplicity(&self, p: &PointOnE) -> i64 {
        self.mult.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.mult.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&PointOnE, &i64)> {
        self.mult.iter()
    }

    pub fn is_effective(&self) -> bool {
        self.mult.values().all(|&n| n >= 0)
    }

    /// Sum of the support points in the group law, weighted by multiplicity.
    pub fn sum_in_group(&self, curve: &WeierstrassCurve) -> Result<PointOnE> {
        let mut acc = PointOnE::Infinity;
        for (p, &n) in &self.mult {
            acc = curve.add(&acc, &curve.mul(p, n)?)?;
        }
        Ok(acc)
    }

    /// `D ~ deg(D) * O` holds exactly when the group-law sum of `D` is `O`.
    pub fn is_multiple_of_origin(&self, curve: &WeierstrassCurve) -> Result<bool> {
        Ok(self.sum_in_group(curve)?.is_infinity())
    }
}

/// `P0(x) + P1(x) y`, a regular function on `E \ {O}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AffineFunction {
    pub p0: FqPolynomial,
    pub p1: FqPolynomial,
}

impl AffineFunction {
    pub fn monomial(i: usize, e: usize) -> Self {
        let m = FqPolynomial::monomial(Fq::ONE, i);
        if e == 0 {
            AffineFunction {
                p0: m,
                p1: FqPolynomial::zero(),
            }
        } else {
            AffineFunction {
                p0: FqPolynomial::zero(),
                p1: m,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p0.is_zero() && self.p1.is_zero()
    }

    /// Pole order at O: `x` has weight 2, `y` weight 3.
    pub fn pole_order(&self) -> Option<usize> {
        let a = self.p0.degree().map(|d| 2 * d);
        let b = self.p1.degree().map(|d| 2 * d + 3);
        a.max(b)
    }

    pub fn eval(&self, f: &FiniteField, x: Fq, y: Fq) -> Fq {
        f.add(self.p0.eval(f, x), f.mul(self.p1.eval(f, x), y))
    }

    fn combine(f: &FiniteField, coeffs: &[Fq], basis: &[AffineFunction]) -> Self {
        let mut out = AffineFunction::default();
        for (&c, b) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            out.p0 = out.p0.add(f, &b.p0.scale(f, c));
            out.p1 = out.p1.add(f, &b.p1.scale(f, c));
        }
        out
    }
}

/// The rational function `num / den` with `den` a polynomial in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: AffineFunction,
    pub den: FqPolynomial,
}

/// Monomial basis `1, x, y, x^2, xy, ...` of L(n*O), ordered by pole order.
pub fn origin_basis(n: i64) -> Vec<AffineFunction> {
    if n < 0 {
        return Vec::new();
    }
    let n = n as usize;
    let mut out = Vec::new();
    for w in 0..=n {
        if w == 1 {
            continue;
        }
        if w % 2 == 0 {
            out.push(AffineFunction::monomial(w / 2, 0));
        } else {
            out.push(AffineFunction::monomial((w - 3) / 2, 1));
        }
    }
    out
}

fn series_mul(f: &FiniteField, a: &[Fq], b: &[Fq], prec: usize) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; prec];
    for (i, &ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(prec - i) {
            out[i + j] = f.mul_add(out[i + j], ai, bj);
        }
    }
    out
}

fn series_poly(f: &FiniteField, p: &FqPolynomial, x: &[Fq], prec: usize) -> Vec<Fq> {
    let mut acc = vec![Fq::ZERO; prec];
    for &c in p.coeffs().iter().rev() {
        acc = series_mul(f, &acc, x, prec);
        acc[0] = f.add(acc[0], c);
    }
    acc
}

/// Local parametrisation `(x(t), y(t))` of E near an affine point, to precision `prec`.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub x: Vec<Fq>,
    pub y: Vec<Fq>,
    /// True when the uniformizer is `x - x0`, false when it is `y - y0`.
    pub x_uniformizer: bool,
}

fn equation_series(curve: &WeierstrassCurve, x: &[Fq], y: &[Fq], prec: usize) -> Vec<Fq> {
    let f = &**curve.field();
    let x2 = series_mul(f, x, x, prec);
    let x3 = series_mul(f, &x2, x, prec);
    let y2 = series_mul(f, y, y, prec);
    let xy = series_mul(f, x, y, prec);
    (0..prec)
        .map(|k| {
            f.sum([
                y2[k],
                f.mul(curve.a1(), xy[k]),
                f.mul(curve.a3(), y[k]),
                f.neg(x3[k]),
                f.neg(f.mul(curve.a2(), x2[k])),
                f.neg(f.mul(curve.a4(), x[k])),
                if k == 0 { f.neg(curve.a6()) } else { Fq::ZERO },
            ])
        })
        .collect()
}

pub fn local_expansion(
    curve: &WeierstrassCurve,
    p: &PointOnE,
    prec: usize,
) -> Result<LocalExpansion> {
    let PointOnE::Affine(x0, y0) = *p else {
        return Err(Error::InvalidInput(
            "local expansion needs an affine point".into(),
        ));
    };
    if !curve.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let f = &**curve.field();
    let prec = prec.max(2);
    let fy = f.sum([f.mul(f.from_int(2), y0), f.mul(curve.a1(), x0), curve.a3()]);
    let mut x = vec![Fq::ZERO; prec];
    let mut y = vec![Fq::ZERO; prec];
    x[0] = x0;
    y[0] = y0;
    if !fy.is_zero() {
        x[1] = Fq::ONE;
        for k in 1..prec {
            let r = equation_series(curve, &x, &y, k + 1)[k];
            y[k] = f.neg(f.div(r, fy)?);
        }
        Ok(LocalExpansion {
            x,
            y,
            x_uniformizer: true,
        })
    } else {
        let fx = f.sub(
            f.mul(curve.a1(), y0),
            f.sum([
                f.mul(f.from_int(3), f.mul(x0, x0)),
                f.mul(f.from_int(2), f.mul(curve.a2(), x0)),
                curve.a4(),
            ]),
        );
        if fx.is_zero() {
            return Err(Error::SingularCurve);
        }
        y[1] = Fq::ONE;
        for k in 1..prec {
            let r = equation_series(curve, &x, &y, k + 1)[k];
            x[k] = f.neg(f.div(r, fx)?);
        }
        Ok(LocalExpansion {
            x,
            y,
            x_uniformizer: false,
        })
    }
}

impl LocalExpansion {
    pub fn series(&self, f: &FiniteField, a: &AffineFunction, prec: usize) -> Vec<Fq> {
        let s0 = series_poly(f, &a.p0, &self.x, prec);
        let s1 = series_poly(f, &a.p1, &self.x, prec);
        let s1y = series_mul(f, &s1, &self.y, prec);
        s0.iter().zip(&s1y).map(|(&u, &v)| f.add(u, v)).collect()
    }
}

/// Order of vanishing of a nonzero regular function at a point (negative at O).
pub fn order_at(curve: &WeierstrassCurve, a: &AffineFunction, p: &PointOnE) -> Result<i64> {
    let Some(pole) = a.pole_order() else {
        return Err(Error::InvalidInput("order of the zero function".into()));
    };
    if p.is_infinity() {
        return Ok(-(pole as i64));
    }
    // the total number of zeros equals the pole order at O
    let prec = pole + 2;
    let exp = local_expansion(curve, p, prec)?;
    let s = exp.series(curve.field(), a, prec);
    let k = s
        .iter()
        .position(|c| !c.is_zero())
        .expect("zero count bounded by pole order");
    Ok(k as i64)
}

/// Order of `num / den` at a point.
pub fn rational_order_at(
    curve: &WeierstrassCurve,
    g: &RationalFunction,
    p: &PointOnE,
) -> Result<i64> {
    let den = AffineFunction {
        p0: g.den.clone(),
        p1: FqPolynomial::zero(),
    };
    Ok(order_at(curve, &g.num, p)? - order_at(curve, &den, p)?)
}

/// Basis of L(D) = {g : div(g) + D >= 0}.
///
/// Every `g` is written as `a / h` with `h = prod (x - x_P)^{e}` over the positive affine
/// part of `D`, and `a` is searched in L(N*O) with `N = D(O) + 2 deg h` subject to the
/// local order conditions at the zeros of `h` and the support of `D`.
pub fn riemann_roch_space(
    curve: &WeierstrassCurve,
    d: &DivisorOnE,
) -> Result<Vec<RationalFunction>> {
    let f = &**curve.field();
    let q = f.order();
    for (p, _) in d.support() {
        if let PointOnE::Affine(x, y) = p {
            if x.code() >= q || y.code() >= q {
                return Err(Error::IrrationalSupport);
            }
        }
        if !curve.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
    }
    if d.degree() < 0 {
        return Ok(Vec::new());
    }
    // exponent of (x - x0) in h, per x-coordinate
    let mut h_exp: BTreeMap<Fq, i64> = BTreeMap::new();
    for (p, &n) in d.support() {
        if let (PointOnE::Affine(x, _), true) = (p, n > 0) {
            let e = h_exp.entry(*x).or_insert(0);
            *e = (*e).max(n);
        }
    }
    let mut h = FqPolynomial::one();
    for (&x0, &e) in &h_exp {
        let lin = FqPolynomial::new(vec![f.neg(x0), Fq::ONE]);
        h = h.mul(f, &lin.pow(f, e as u64));
    }
    let deg_h = h.degree().unwrap_or(0) as i64;
    let big_n = d.multiplicity(&PointOnE::Infinity) + 2 * deg_h;
    let basis = origin_basis(big_n);
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    // points where a must vanish to a prescribed order
    let mut checks: BTreeMap<PointOnE, i64> = BTreeMap::new();
    let mut candidates: Vec<PointOnE> = d
        .support()
        .map(|(p, _)| *p)
        .filter(|p| !p.is_infinity())
        .collect();
    for &x0 in h_exp.keys() {
        let (cubic, lin) = curve.rhs(x0);
        for y in f.elements() {
            if f.add(f.mul(y, y), f.mul(lin, y)) == cubic {
                candidates.push(PointOnE::Affine(x0, y));
            }
        }
    }
    for pt in candidates {
        let PointOnE::Affine(x, _) = pt else { continue };
        let mut ord_h = 0;
        if let Some(&e) = h_exp.get(&x) {
            let two_torsion = curve.neg(&pt) == pt;
            ord_h = e * if two_torsion { 2 } else { 1 };
        }
        let need = ord_h - d.multiplicity(&pt);
        if need > 0 {
            checks.insert(pt, need);
        }
    }

    let mut rows: Vec<Vec<Fq>> = Vec::new();
    for (pt, &need) in &checks {
        let prec = need as usize;
        let exp = local_expansion(curve, pt, prec)?;
        let series: Vec<Vec<Fq>> = basis.iter().map(|b| exp.series(f, b, prec)).collect();
        for k in 0..prec {
            rows.push(series.iter().map(|s| s[k]).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..basis.len())
            .map(|i| {
                let mut v = vec![Fq::ZERO; basis.len()];
                v[i] = Fq::ONE;
                v
            })
            .collect()
    } else {
        FqMatrix::from_rows(rows)?.kernel(f)
    };
    Ok(kernel
        .iter()
        .map(|v| RationalFunction {
            num: AffineFunction::combine(f, v, &basis),
            den: h.clone(),
        })
        .collect())
}
