//! Exact toric geometry of abelian quotient surfaces `C^2/G`: minimal and
//! maximal resolutions, crepant resolutions of the threefold `C^3/G` through
//! triangulations of the junior simplex, and moduli of stable McKay-quiver
//! representations as toric fans.

pub mod error;
pub mod junior;
pub mod lattice;
pub mod lp;
pub mod polyhedral;
pub mod quiver;
pub mod rational;
pub mod surface;
pub mod theta;

pub use error::{Error, Result};
pub use junior::{build_junior, JuniorSimplex, Triangulation};
pub use lattice::{Lattice, Lattice2, Lattice3, RatVec, RatVec2, RatVec3};
pub use quiver::{build_mckay_quiver, FixedConstellation, McKayQuiver, Theta};
pub use rational::Rat;
pub use surface::{AbelianAction, ActionSpec, BoundaryDivisor, Resolution};
pub use theta::RealizationReport;
