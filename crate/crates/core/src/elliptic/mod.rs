//! Elliptic curves over finite fields: group law, point counts, supersingularity,
//! divisors with their Riemann–Roch spaces, and Frobenius isogenies.

pub mod curve;
pub mod divisor;
pub mod isogeny;

pub use curve::{enum_bound, PointOnE, WeierstrassCurve, DEFAULT_ENUM_BOUND};
pub use divisor::{
    local_expansion, order_at, origin_basis, rational_order_at, riemann_roch_space, AffineFunction,
    DivisorOnE, LocalExpansion, RationalFunction,
};
pub use isogeny::{Isogeny, IsogenyKind};
