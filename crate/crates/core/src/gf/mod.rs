//! Exact arithmetic in GF(p^n) and dense linear algebra over it.

pub mod extension;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod poly_matrix;

pub use extension::{extend, Embedding};
pub use field::{is_prime, Field, FiniteField, Fq};
pub use matrix::{Echelon, FqMatrix};
pub use poly::{resultant, FqPolynomial};
pub use poly_matrix::PolyMatrix;

/// Binomial coefficient reduced into the prime field.
pub fn binomial_mod(f: &FiniteField, n: u64, k: u64) -> Fq {
    if k > n {
        return Fq::ZERO;
    }
    // Lucas' theorem
    let p = f.characteristic() as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return Fq::ZERO;
        }
        acc = acc * small_binomial(nd, kd) % p;
        n /= p;
        k /= p;
    }
    f.from_int(acc as i64)
}

fn small_binomial(n: u64, k: u64) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_binomials() {
        let f = FiniteField::prime(3).unwrap();
        // C(3,1) = 3 = 0 mod 3, C(4,2) = 6 = 0, C(5,2) = 10 = 1
        assert_eq!(binomial_mod(&f, 3, 1), Fq::ZERO);
        assert_eq!(binomial_mod(&f, 4, 2), Fq::ZERO);
        assert_eq!(binomial_mod(&f, 5, 2), f.from_int(1));
        assert_eq!(binomial_mod(&f, 2, 3), Fq::ZERO);
    }
}
