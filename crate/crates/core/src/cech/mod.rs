//! Čech cohomology of vector bundles on an elliptic curve presented on a two-chart
//! affine cover.

pub mod bundle;
pub mod cohomology;
pub mod cover;
pub mod func;

pub use bundle::{
    determinant, identity_matrix, mat_mul, multi_indices, unipotent_sym_matrix, CechBundle,
    FuncMatrix,
};
pub use cohomology::{
    certified_level, cohomology, global_section_system, h0, h1, h1_cokernel_representatives,
    h1_generator, CohomologyResult, GlobalSectionSystem, MonomialIndex, Section,
};
pub use cover::{Cover, TwoChartCover};
pub use func::{Func, Laurent, OverlapRing};
