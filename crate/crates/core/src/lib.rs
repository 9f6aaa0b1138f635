//! Recovery of the principal axes of an ellipsoid from a complete system
//! of conjugate semi-diameters, through the classical confocal-quadric
//! construction, plus an exact-arithmetic decision of whether the
//! critical conic-intersection step is a ruler-and-compass (planar)
//! construction for given parameters.
//!
//! Modules:
//! - [`linalg`], [`poly`]: small-dimension numeric kernels.
//! - [`conjugate`]: conjugate systems, invariants, the spectral oracle.
//! - [`rytz`]: the planar two-circle axis construction for ellipses.
//! - [`confocal`]: confocal parameters, duality, focal conics and cones.
//! - [`chasles`]: the full 3D construction pipeline.
//! - [`exact`]: big-rational / quadratic-surd algebra and the
//!   constructibility verdicts.

pub mod chasles;
pub mod confocal;
pub mod conjugate;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod poly;
pub mod rytz;

pub use conjugate::{AxesResult, ConjugateSystem, Ellipsoid, Provenance};
pub use error::{Error, Result};
pub use linalg::{MatN, SymMatN, VecN};
pub use poly::RealPoly;
