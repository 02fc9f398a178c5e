//! Frobenius isogenies `E -> E^(p^k)`, `(x, y) -> (x^(p^k), y^(p^k))`.

use crate::elliptic::curve::{PointOnE, WeierstrassCurve};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsogenyKind {
    RelativeFrobenius,
    /// Composite of `k` relative Frobenius steps.
    FrobeniusPower(u32),
}

#[derive(Clone, Debug)]
pub struct Isogeny {
    pub source: WeierstrassCurve,
    pub target: WeierstrassCurve,
    pub kind: IsogenyKind,
    pub degree: u64,
}

impl Isogeny {
    pub fn relative_frobenius(source: &WeierstrassCurve) -> Self {
        Isogeny {
            source: source.clone(),
            target: source.frobenius_twist(),
            kind: IsogenyKind::RelativeFrobenius,
            degree: source.field().characteristic() as u64,
        }
    }

    pub fn frobenius_power(source: &WeierstrassCurve, k: u32) -> Self {
        let mut target = source.clone();
        for _ in 0..k {
            target = target.frobenius_twist();
        }
        let kind = if k == 1 {
            IsogenyKind::RelativeFrobenius
        } else {
            IsogenyKind::FrobeniusPower(k)
        };
        Isogeny {
            source: source.clone(),
            target,
            kind,
            degree: (source.field().characteristic() as u64).pow(k),
        }
    }

    fn steps(&self) -> u32 {
        match self.kind {
            IsogenyKind::RelativeFrobenius => 1,
            IsogenyKind::FrobeniusPower(k) => k,
        }
    }

    pub fn map_point(&self, p: &PointOnE) -> Result<PointOnE> {
        if !self.source.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        let f = self.source.field();
        Ok(match *p {
            PointOnE::Infinity => PointOnE::Infinity,
            PointOnE::Affine(x, y) => {
                let e = (f.characteristic() as u64).pow(self.steps());
                PointOnE::Affine(f.pow(x, e), f.pow(y, e))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;

    #[test]
    fn frobenius_is_a_homomorphism_onto_the_twist() {
        let f = FiniteField::new(2, 2, None).unwrap();
        let g = f.generator_root();
        let e = WeierstrassCurve::new(
            f.clone(),
            [
                f.element(1),
                crate::gf::Fq::ZERO,
                crate::gf::Fq::ZERO,
                crate::gf::Fq::ZERO,
                g,
            ],
        )
        .unwrap();
        let phi = Isogeny::relative_frobenius(&e);
        assert_eq!(phi.degree, 2);
        let pts = e.points().unwrap();
        for p in &pts {
            let img = phi.map_point(p).unwrap();
            assert!(phi.target.contains(&img));
            for q in &pts {
                let lhs = phi.map_point(&e.add(p, q).unwrap()).unwrap();
                let rhs = phi.target.add(&img, &phi.map_point(q).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
