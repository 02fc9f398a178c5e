//! The affine cover `U1 = E \ {O}`, `U2 = E \ V(x - x0)` of an elliptic curve.

use std::sync::Arc;

use crate::cech::func::OverlapRing;
use crate::elliptic::{PointOnE, WeierstrassCurve};
use crate::gf::Fq;

#[derive(Debug)]
pub struct TwoChartCover {
    curve: WeierstrassCurve,
    x0: Fq,
    puncture: Option<PointOnE>,
    ring: OverlapRing,
}

pub type Cover = Arc<TwoChartCover>;

impl PartialEq for TwoChartCover {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve && self.x0 == other.x0
    }
}

impl TwoChartCover {
    /// Canonical cover: `x0` is the x-coordinate of the lexicographically smallest
    /// affine rational point `Q`, or 0 when `E(k) = {O}`.
    pub fn new(curve: &WeierstrassCurve) -> Cover {
        let puncture = curve.smallest_affine_point();
        let x0 = match puncture {
            Some(PointOnE::Affine(x, _)) => x,
            _ => Fq::ZERO,
        };
        Self::with_base_point(curve, x0)
    }

    /// Cover whose second chart removes the points with `x = x0`.
    pub fn with_base_point(curve: &WeierstrassCurve, x0: Fq) -> Cover {
        let f = curve.field();
        let puncture = f.elements().find_map(|y| {
            let p = PointOnE::Affine(x0, y);
            curve.contains(&p).then_some(p)
        });
        let ring = OverlapRing::new(f.clone(), curve.coefficients(), x0);
        Arc::new(TwoChartCover {
            curve: curve.clone(),
            x0,
            puncture,
            ring,
        })
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn base_x(&self) -> Fq {
        self.x0
    }

    /// A rational point removed from the second chart, when one exists.
    pub fn puncture(&self) -> Option<PointOnE> {
        self.puncture
    }

    pub fn ring(&self) -> &OverlapRing {
        &self.ring
    }
}
