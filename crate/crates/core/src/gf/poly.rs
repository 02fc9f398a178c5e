//! Dense univariate polynomials over GF(q).

use crate::error::{Error, Result};
use crate::gf::field::{FiniteField, Fq};

/// Coefficients low degree first; trailing zeros are always trimmed, so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FqPolynomial {
    coeffs: Vec<Fq>,
}

impl FqPolynomial {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        FqPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FqPolynomial {
            coeffs: vec![Fq::ONE],
        }
    }

    pub fn constant(c: Fq) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Fq, k: usize) -> Self {
        let mut v = vec![Fq::ZERO; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fq {
        self.coeffs.get(k).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn add(&self, f: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(v)
    }

    pub fn sub(&self, f: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(v)
    }

    pub fn scale(&self, f: &FiniteField, c: Fq) -> Self {
        Self::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
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
        Self::new(v)
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        result
    }

    pub fn div_rem(&self, f: &FiniteField, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading()).ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, d));
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, f: &FiniteField, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(f, divisor)?.1)
    }

    pub fn monic(&self, f: &FiniteField) -> Self {
        match f.inv(self.leading()) {
            Some(i) => self.scale(f, i),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, f: &FiniteField, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g` monic.
    pub fn xgcd(&self, f: &FiniteField, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1).expect("nonzero divisor");
            let s2 = s0.sub(f, &q.mul(f, &s1));
            let t2 = t0.sub(f, &q.mul(f, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match f.inv(r0.leading()) {
            Some(i) => (r0.scale(f, i), s0.scale(f, i), t0.scale(f, i)),
            None => (r0, s0, t0),
        }
    }

    pub fn eval(&self, f: &FiniteField, x: Fq) -> Fq {
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &FiniteField) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::new(v)
    }

    pub fn divides(&self, f: &FiniteField, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(f, self).map(|r| r.is_zero()).unwrap_or(false)
    }
}

/// Resultant of two polynomials via the Euclidean algorithm.
pub fn resultant(f: &FiniteField, a: &FqPolynomial, b: &FqPolynomial) -> Fq {
    let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
        return Fq::ZERO;
    };
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Fq::ONE;
    loop {
        if db == 0 {
            return f.mul(acc, f.pow(b.leading(), da as u64));
        }
        let r = a.rem(f, &b).expect("nonzero");
        let Some(dr) = r.degree() else {
            return Fq::ZERO;
        };
        // res(a, b) = (-1)^(da*db) * lc(b)^(da - dr) * res(b, r)
        if (da * db) % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b.leading(), (da - dr) as u64));
        a = b;
        b = r;
        da = db;
        db = dr;
    }
}
