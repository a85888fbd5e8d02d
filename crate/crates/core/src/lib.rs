//! Solvers for geometric discriminating codes.
//!
//! Given points and axis-parallel objects (1D intervals or 2D unit squares),
//! compute subsets of objects that cover every point and give each point a
//! unique containment code. The crate provides exact oracles, a 2-factor
//! approximation for arbitrary 1D intervals, a PTAS for unit intervals, and
//! LP-rounding pipelines for continuous and discrete unit squares in 2D.

pub mod bits;
pub mod codes;
pub mod cont2d;
pub mod disc2d;
pub mod edgecover;
pub mod error;
pub mod gen;
pub mod geom;
pub mod instance;
pub mod lp;
pub mod matching;
pub mod oracle;
pub mod ptas;
pub mod reductions;

pub use error::{Error, Result, Witness};
pub use instance::{Coord, Instance, Instance1d, Instance2d};
