//! Numerical function theory on the unit disk: finite Blaschke products,
//! Carleson measures, Cauchy transforms of path measures, outer corrections,
//! bottleneck zero matching, certified polygonal paths and level-set contours.

pub mod acceptance;
pub mod blaschke;
pub mod carleson;
pub mod cauchy;
pub mod contour;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod geometry;
pub mod grid;
pub mod matching;
pub mod path;

pub use error::{Error, Result};
pub use exec::Exec;
