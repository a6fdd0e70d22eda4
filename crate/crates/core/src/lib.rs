//! Numerical library for explicit solutions of the SU(2)/SU(1,1)
//! self-duality equations and the harmonic-map dualities attached to them:
//! light-cone conformal geometry, the cylinder model solution, the fiducial
//! desingularization, oblique Gauss and dual maps, the twist construction,
//! glued approximate solutions, and the modified-Bessel toolbox backing the
//! decay estimates. Every closed-form identity the constructions rely on is
//! exercised numerically by the test and acceptance suites.

pub mod acceptance;
pub mod bessel;
pub mod chart;
pub mod conformal;
pub mod csvio;
pub mod error;
pub mod field;
pub mod fiducial;
pub mod gauss;
pub mod gluing;
pub mod grid;
pub mod mat2;
pub mod mink;
pub mod model;
pub mod quad;
pub mod twist;
pub mod util;

pub use error::{CoreError, Result};
pub use mat2::{cx, Cx, Mat2};
pub use mink::{Herm2, MinkVec4, MinkVec5, PointDS3, PointH3, PointS3};
