pub mod cech;
pub mod degeneration;
pub mod elliptic;
pub mod error;
pub mod gf;
pub mod ruled;
pub mod snc;
pub mod unipotent;

pub use error::{Error, Result};
