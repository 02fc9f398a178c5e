//! Field extensions GF(q) -> GF(q^e) and the corresponding embeddings.

use crate::error::{Error, Result};
use crate::gf::field::{Field, FiniteField, Fq};
use crate::gf::poly::FqPolynomial;

/// An embedding of `small` into `big`, fixed by the image of the class of `x`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Field,
    pub big: Field,
    generator_image: Fq,
    table: Vec<Fq>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Self {
        Embedding {
            small: field.clone(),
            big: field.clone(),
            generator_image: field.generator_root(),
            table: field.elements().collect(),
        }
    }

    pub fn map(&self, a: Fq) -> Fq {
        self.table[a.code() as usize]
    }

    pub fn generator_image(&self) -> Fq {
        self.generator_image
    }
}

/// Builds GF(q^e) (with its canonical modulus over GF(p)) and embeds `field` into it.
///
/// The embedding sends the generator of `field` to the root of its modulus with the
/// smallest code in the big field.
pub fn extend(field: &Field, e: u32) -> Result<Embedding> {
    if e == 0 {
        return Err(Error::InvalidInput(
            "extension degree must be at least 1".into(),
        ));
    }
    if e == 1 {
        return Ok(Embedding::identity(field));
    }
    let big = FiniteField::new(field.characteristic(), field.degree() * e, None)?;
    let modulus = FqPolynomial::new(
        field
            .modulus()
            .iter()
            .map(|&c| big.from_int(c as i64))
            .collect(),
    );
    let root = big
        .elements()
        .find(|&b| modulus.eval(&big, b).is_zero())
        .ok_or_else(|| Error::InvalidInput("no root of the modulus in the extension".into()))?;
    let n = field.degree() as usize;
    let mut powers = Vec::with_capacity(n);
    let mut cur = Fq::ONE;
    for _ in 0..n {
        powers.push(cur);
        cur = big.mul(cur, root);
    }
    let table = field
        .elements()
        .map(|a| {
            field
                .coeffs(a)
                .iter()
                .zip(&powers)
                .fold(Fq::ZERO, |acc, (&c, &pw)| {
                    big.mul_add(acc, big.from_int(c as i64), pw)
                })
        })
        .collect();
    Ok(Embedding {
        small: field.clone(),
        big,
        generator_image: root,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f = FiniteField::new(2, 2, None).unwrap();
        let emb = extend(&f, 2).unwrap();
        assert_eq!(emb.big.order(), 16);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(emb.map(f.add(a, b)), emb.big.add(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(f.mul(a, b)), emb.big.mul(emb.map(a), emb.map(b)));
            }
        }
    }
}
