//! Combinatorics of curves on punctured surfaces: exact normal-coordinate
//! kernels, subsurface projections and coefficients, coarse-geometry
//! predicates, and the coefficient-prescribing marking constructions.

pub mod curve;
pub mod realize;
pub mod twist;
pub mod error;
pub mod gen;
pub mod surface;

pub use curve::{Curve, MultiCurve};
pub use error::{Error, Result};
pub use surface::{make_surface, Surface, Triangulation};
