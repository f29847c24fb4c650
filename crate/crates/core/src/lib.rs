//! Ordered Bratteli-Vershik diagrams of Toeplitz type.
//!
//! The crate represents diagrams through run-length encoded order words and
//! computes, exactly, incidence products, suffix residue statistics, invariant
//! measure estimates and Vershik orbits. On top of these it diagnoses rational
//! eigenvalues: candidate classification, deficiency tables, cocycle maps and
//! the measure-wise survey of admissible denominators.

pub mod arith;
pub mod catalog;
pub mod diagram;
pub mod eigen;
pub mod error;
pub mod format;
pub mod matrix;
pub mod measures;
pub mod residue;
pub mod vershik;
pub mod word;

pub use diagram::{DiagramSpec, LevelSpec, PropernessReport, Subdiagram, DEFAULT_EXPAND_LIMIT};
pub use error::{Error, Result};
pub use format::{parse_spec, serialize_spec};
pub use matrix::Matrix;
pub use word::{Block, OrderWord, Vertex};
