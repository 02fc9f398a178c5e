//! Finite fields GF(p^n) with table-driven arithmetic.
//!
//! Elements are stored as integer codes: the element `c_0 + c_1 x + ... + c_{n-1} x^{n-1}`
//! (reduced modulo the defining polynomial) has code `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`.
//! Multiplication goes through discrete log/exp tables built from a primitive element;
//! addition is digit-wise, with a precomputed table for small non-prime fields.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field size we are willing to tabulate.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

const ADD_TABLE_LIMIT: u32 = 1024;

/// A field element, meaningful only together with its [`FiniteField`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// Shared handle; fields are immutable once built.
pub type Field = Arc<FiniteField>;

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Builds GF(p^n). Without an explicit modulus the lexicographically smallest monic
    /// irreducible polynomial of degree `n` is used (lower coefficients read as base-p
    /// digits, low degree first).
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidInput(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Error::FieldTooLarge {
                p: p as u64,
                n: n as u64,
            })? as u32;

        let modulus = match modulus {
            Some(m) => {
                let m = normalize_prime_poly(m, p)?;
                if m.len() != n as usize + 1 {
                    return Err(Error::ReducibleModulus(format!(
                        "modulus {:?} has degree {}, expected {}",
                        m,
                        m.len().saturating_sub(1),
                        n
                    )));
                }
                if !prime_poly_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format!(
                        "{:?} is reducible mod {}",
                        m, p
                    )));
                }
                m
            }
            None => smallest_irreducible(p, n),
        };

        let mut field = FiniteField {
            p,
            n,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
        };
        field.neg = (0..q).map(|a| field.neg_digits(a)).collect();
        field.build_log_tables();
        if n > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = Some(t);
        }
        Ok(Arc::new(field))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial over GF(p), low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn element(&self, code: u32) -> Fq {
        assert!(
            code < self.q,
            "code {} out of range for GF({})",
            code,
            self.q
        );
        Fq(code)
    }

    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients `c_0..c_{n-1}` of the polynomial representation.
    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.n as usize);
        let mut v = a.0;
        for _ in 0..self.n {
            c.push(v % self.p);
            v /= self.p;
        }
        c
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fq {
        let mut reduced = coeffs.iter().map(|&c| c % self.p).collect::<Vec<_>>();
        reduce_mod(&mut reduced, &self.modulus, self.p);
        let mut code = 0u32;
        for &c in reduced.iter().rev() {
            code = code * self.p + c;
        }
        Fq(code)
    }

    /// The class of `x` in `GF(p)[x]/(modulus)`.
    pub fn generator_root(&self) -> Fq {
        self.from_coeffs(&[0, 1])
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.n == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Fq(a.0 ^ b.0)
        } else if let Some(t) = &self.add_table {
            Fq(t[(a.0 * self.q + b.0) as usize])
        } else {
            Fq(self.add_digits(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        if self.n == 1 && self.p < 65536 {
            return Fq(a.0 * b.0 % self.p);
        }
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        let m = self.q - 1;
        Fq(self.exp[(if l >= m { l - m } else { l }) as usize])
    }

    /// `a + b * c`, the inner kernel of elimination.
    #[inline]
    pub fn mul_add(&self, a: Fq, b: Fq, c: Fq) -> Fq {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let m = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(Fq(self.exp[((m - l) % m) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let m = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % m)) % m;
        Fq(self.exp[l as usize])
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as u64)
    }

    /// Inverse of the absolute Frobenius, `a -> a^(p^(n-1))`.
    pub fn frobenius_inv(&self, a: Fq) -> Fq {
        self.pow(a, (self.p as u64).pow(self.n - 1))
    }

    /// Absolute trace to GF(p), returned as an element of the prime subfield.
    pub fn trace(&self, a: Fq) -> Fq {
        let mut acc = Fq::ZERO;
        let mut t = a;
        for _ in 0..self.n {
            acc = self.add(acc, t);
            t = self.frobenius(t);
        }
        acc
    }

    /// Quadratic character for odd characteristic: 1, -1 or 0.
    pub fn legendre(&self, a: Fq) -> i32 {
        assert!(self.p != 2);
        if a.is_zero() {
            return 0;
        }
        if self.log[a.0 as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// A square root of `a`, if one exists.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return Some(Fq::ZERO);
        }
        if self.p == 2 {
            return Some(self.pow(a, (self.q / 2) as u64));
        }
        let l = self.log[a.0 as usize];
        l.is_multiple_of(2)
            .then_some(Fq(self.exp[(l / 2) as usize]))
    }

    /// In characteristic 2, a root `z` of `z^2 + z = c` (the other root is `z + 1`).
    pub fn solve_artin_schreier(&self, c: Fq) -> Option<Fq> {
        assert_eq!(self.p, 2);
        // z -> z^2 + z is GF(2)-linear on the bit vector of codes.
        let n = self.n as usize;
        let mut rows: Vec<(u32, u32)> = Vec::new(); // (image, preimage)
        for i in 0..n {
            let b = Fq(1 << i);
            let img = self.add(self.mul(b, b), b).0;
            let mut v = (img, b.0);
            for &(r, pre) in &rows {
                let top = 31 - r.leading_zeros();
                if v.0 >> top & 1 == 1 {
                    v = (v.0 ^ r, v.1 ^ pre);
                }
            }
            if v.0 != 0 {
                rows.push(v);
                rows.sort_by_key(|r| std::cmp::Reverse(r.0));
            }
        }
        let mut target = (c.0, 0u32);
        for &(r, pre) in &rows {
            let top = 31 - r.leading_zeros();
            if target.0 >> top & 1 == 1 {
                target = (target.0 ^ r, target.1 ^ pre);
            }
        }
        (target.0 == 0).then_some(Fq(target.1))
    }

    pub fn sum<I: IntoIterator<Item = Fq>>(&self, it: I) -> Fq {
        it.into_iter().fold(Fq::ZERO, |acc, x| self.add(acc, x))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.n {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale = scale.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.n {
            let d = (self.p - a % self.p) % self.p;
            out += d * scale;
            scale = scale.wrapping_mul(self.p);
            a /= self.p;
        }
        out
    }

    fn mul_digits(&self, a: u32, b: u32) -> u32 {
        let ca = self.coeffs(Fq(a));
        let cb = self.coeffs(Fq(b));
        let mut prod = vec![0u32; 2 * self.n as usize];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.from_coeffs(&prod).0
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        self.exp = vec![0; q as usize];
        self.log = vec![0; q as usize];
        if q == 2 {
            self.exp[0] = 1;
            self.log[1] = 0;
            return;
        }
        for g in 2..q {
            let mut seen = 1u32;
            let mut cur = g;
            while cur != 1 {
                cur = self.mul_digits(cur, g);
                seen += 1;
                if seen > q {
                    break;
                }
            }
            if seen != q - 1 {
                continue;
            }
            let mut cur = 1u32;
            for k in 0..q - 1 {
                self.exp[k as usize] = cur;
                self.log[cur as usize] = k;
                cur = self.mul_digits(cur, g);
            }
            return;
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

// ---- polynomial helpers over the prime field (used before a field exists) ----

fn normalize_prime_poly(m: &[u32], p: u32) -> Result<Vec<u32>> {
    let mut v: Vec<u32> = m.iter().map(|&c| c % p).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    let lead = *v
        .last()
        .ok_or_else(|| Error::ReducibleModulus("zero polynomial".into()))?;
    let inv = modinv(lead, p);
    for c in v.iter_mut() {
        *c = *c * inv % p;
    }
    Ok(v)
}

fn modinv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Reduces `a` modulo the monic polynomial `m` in place (coefficients mod p).
fn reduce_mod(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let dm = m.len() - 1;
    trim(a);
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            a[idx] = (a[idx] + p - (lead * c) % p) % p;
        }
        trim(a);
    }
}

fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    reduce_mod(&mut r, m, p);
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let bn = normalize_prime_poly(&b, p).unwrap();
        reduce_mod(&mut a, &bn, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over GF(p).
pub fn prime_poly_irreducible(m: &[u32], p: u32) -> bool {
    let n = m.len() as u32 - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let sub_x = |mut v: Vec<u32>| {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        trim(&mut v);
        v
    };
    // x^(p^n) == x (mod m)
    let mut r = x.clone();
    for _ in 0..n {
        r = pow_poly_mod(&r, p as u64, m, p);
    }
    if !sub_x(r).is_empty() {
        return false;
    }
    for r in prime_factors(n) {
        let k = n / r;
        let mut t = x.clone();
        for _ in 0..k {
            t = pow_poly_mod(&t, p as u64, m, p);
        }
        let g = poly_gcd(m, &sub_x(t), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn pow_poly_mod(a: &[u32], e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = a.to_vec();
    reduce_mod(&mut base, m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut m = Vec::with_capacity(n as usize + 1);
        let mut c = code;
        for _ in 0..n {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if m[0] == 0 {
            continue;
        }
        if prime_poly_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
