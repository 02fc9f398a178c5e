//! Functions on the chart overlap.
//!
//! With `u = x - x0`, the overlap ring is `A[1/u]` where `A = k[x, y]/(W)`. It has
//! the k-basis `u^j y^e` (`j` any integer, `e` in {0, 1}); the monomial `u^j y^e` has
//! pole order `2j + 3e` at O. These weights are pairwise distinct, so the pole order
//! of a function is the largest weight among its terms.

use std::fmt;

use crate::gf::{Field, FiniteField, Fq};

/// Laurent polynomial in `u`; `coeffs[i]` is the coefficient of `u^(low + i)`.
/// Normalised so that the first and last stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<Fq>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<Fq>) -> Self {
        let mut l = Laurent { low, coeffs };
        l.normalize();
        l
    }

    /// `c * u^j`
    pub fn monomial(c: Fq, j: i64) -> Self {
        Self::from_coeffs(j, vec![c])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, j: i64) -> Fq {
        let i = j - self.low;
        if i < 0 {
            return Fq::ZERO;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(Fq::ZERO)
    }

    /// Nonzero terms `(j, c)` in increasing `j`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn add(&self, f: &FiniteField, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.max_degree().unwrap().max(other.max_degree().unwrap());
        let coeffs = (low..=high)
            .map(|j| f.add(self.coeff(j), other.coeff(j)))
            .collect();
        Self::from_coeffs(low, coeffs)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &FiniteField, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &FiniteField, c: Fq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, f: &FiniteField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.mul_add(v[i + j], a, b);
            }
        }
        Self::from_coeffs(self.low + other.low, v)
    }

    /// Applies a coefficient map and substitutes `u -> u^k` (`k >= 1`).
    pub fn map_and_inflate(&self, map: impl Fn(Fq) -> Fq, k: i64) -> Self {
        let mut out = Vec::new();
        for (j, c) in self.terms() {
            out.push((j * k, map(c)));
        }
        let Some(&(low, _)) = out.first() else {
            return Self::zero();
        };
        let high = out.last().unwrap().0;
        let mut coeffs = vec![Fq::ZERO; (high - low + 1) as usize];
        for (j, c) in out {
            coeffs[(j - low) as usize] = c;
        }
        Self::from_coeffs(low, coeffs)
    }
}

/// `even + odd * y` in the overlap ring.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct Func {
    pub even: Laurent,
    pub odd: Laurent,
}

impl Func {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Fq) -> Self {
        Func {
            even: Laurent::monomial(c, 0),
            odd: Laurent::zero(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Fq::ONE)
    }

    /// `c * u^j * y^e`
    pub fn monomial(c: Fq, j: i64, e: u8) -> Self {
        if e == 0 {
            Func {
                even: Laurent::monomial(c, j),
                odd: Laurent::zero(),
            }
        } else {
            Func {
                even: Laurent::zero(),
                odd: Laurent::monomial(c, j),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Pole order at O, `None` for the zero function.
    pub fn max_weight(&self) -> Option<i64> {
        let a = self.even.max_degree().map(|j| 2 * j);
        let b = self.odd.max_degree().map(|j| 2 * j + 3);
        a.max(b)
    }

    /// Smallest exponent of `u` among the terms.
    pub fn min_j(&self) -> Option<i64> {
        match (self.even.min_degree(), self.odd.min_degree()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Nonzero terms `(j, e, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u8, Fq)> + '_ {
        self.even
            .terms()
            .map(|(j, c)| (j, 0u8, c))
            .chain(self.odd.terms().map(|(j, c)| (j, 1u8, c)))
    }

    pub fn coeff(&self, j: i64, e: u8) -> Fq {
        if e == 0 {
            self.even.coeff(j)
        } else {
            self.odd.coeff(j)
        }
    }

    /// Regular on the chart `E \ {O}`: no negative powers of `u`.
    pub fn is_regular_away_from_origin(&self) -> bool {
        self.min_j().is_none_or(|j| j >= 0)
    }

    /// Regular at O: no positive weights.
    pub fn is_regular_at_origin(&self) -> bool {
        self.max_weight().is_none_or(|w| w <= 0)
    }
}

/// Multiplication data for the overlap ring of a given curve and base point `x0`:
/// `y^2 = f(u) - h(u) y` with `f` cubic and `h` linear in `u`.
#[derive(Clone)]
pub struct OverlapRing {
    field: Field,
    f: Laurent,
    h: Laurent,
}

impl fmt::Debug for OverlapRing {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "OverlapRing(y^2 = {:?} - {:?} y)", self.f, self.h)
    }
}

impl OverlapRing {
    /// Ring for `y^2 + (a1 x + a3) y = x^3 + a2 x^2 + a4 x + a6` with `x = u + x0`.
    pub fn new(field: Field, a: [Fq; 5], x0: Fq) -> Self {
        let fl = &*field;
        let [a1, a2, a3, a4, a6] = a;
        let c = |v: i64| fl.from_int(v);
        // (u + x0)^3 + a2 (u + x0)^2 + a4 (u + x0) + a6
        let x0_2 = fl.mul(x0, x0);
        let f0 = fl.sum([fl.mul(x0_2, x0), fl.mul(a2, x0_2), fl.mul(a4, x0), a6]);
        let f1 = fl.sum([fl.mul(c(3), x0_2), fl.mul(c(2), fl.mul(a2, x0)), a4]);
        let f2 = fl.add(fl.mul(c(3), x0), a2);
        let f = Laurent::from_coeffs(0, vec![f0, f1, f2, Fq::ONE]);
        let h = Laurent::from_coeffs(0, vec![fl.add(fl.mul(a1, x0), a3), a1]);
        OverlapRing { field, f, h }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn add(&self, a: &Func, b: &Func) -> Func {
        let f = &*self.field;
        Func {
            even: a.even.add(f, &b.even),
            odd: a.odd.add(f, &b.odd),
        }
    }

    pub fn sub(&self, a: &Func, b: &Func) -> Func {
        let f = &*self.field;
        Func {
            even: a.even.sub(f, &b.even),
            odd: a.odd.sub(f, &b.odd),
        }
    }

    pub fn neg(&self, a: &Func) -> Func {
        let f = &*self.field;
        Func {
            even: a.even.neg(f),
            odd: a.odd.neg(f),
        }
    }

    pub fn scale(&self, a: &Func, c: Fq) -> Func {
        let f = &*self.field;
        Func {
            even: a.even.scale(f, c),
            odd: a.odd.scale(f, c),
        }
    }

    pub fn mul(&self, a: &Func, b: &Func) -> Func {
        let f = &*self.field;
        let p0q0 = a.even.mul(f, &b.even);
        let p1q1 = a.odd.mul(f, &b.odd);
        let cross = a.even.mul(f, &b.odd).add(f, &a.odd.mul(f, &b.even));
        Func {
            even: p0q0.add(f, &p1q1.mul(f, &self.f)),
            odd: cross.sub(f, &p1q1.mul(f, &self.h)),
        }
    }

    /// `a * u^j * y^e`, without a general product.
    pub fn mul_monomial(&self, a: &Func, j: i64, e: u8) -> Func {
        let shifted = Func {
            even: a.even.shift(j),
            odd: a.odd.shift(j),
        };
        if e == 0 {
            return shifted;
        }
        let f = &*self.field;
        // (P0 + P1 y) y = P1 f + (P0 - P1 h) y
        Func {
            even: shifted.odd.mul(f, &self.f),
            odd: shifted.even.sub(f, &shifted.odd.mul(f, &self.h)),
        }
    }

    pub fn pow(&self, a: &Func, mut n: u64) -> Func {
        let mut result = Func::one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `u^j y^e` as a function.
    pub fn monomial(&self, j: i64, e: u8) -> Func {
        Func::monomial(Fq::ONE, j, e)
    }

    /// Inverse of a unit of the form `c * u^j`, if `a` has that shape.
    pub fn monomial_unit_inverse(&self, a: &Func) -> Option<Func> {
        if !a.odd.is_zero() {
            return None;
        }
        let mut terms = a.even.terms();
        let (j, c) = terms.next()?;
        if terms.next().is_some() {
            return None;
        }
        Some(Func::monomial(self.field.inv(c)?, -j, 0))
    }

    /// Evaluation at an affine point `(x, y)` with `x != x0` (where `u` is invertible).
    pub fn eval(&self, a: &Func, u: Fq, y: Fq) -> Option<Fq> {
        let f = &*self.field;
        let ui = f.inv(u)?;
        let ev = |l: &Laurent| {
            l.terms().fold(Fq::ZERO, |acc, (j, c)| {
                let p = if j >= 0 {
                    f.pow(u, j as u64)
                } else {
                    f.pow(ui, (-j) as u64)
                };
                f.mul_add(acc, c, p)
            })
        };
        Some(f.add(ev(&a.even), f.mul(ev(&a.odd), y)))
    }
}
