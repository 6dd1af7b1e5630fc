//! Spectral sets for intersections of generalized disks.
//!
//! Circline geometry, von Neumann spectral-set checks, the Poisson/residual
//! decomposition of the rational functional calculus over a Carathéodory
//! median tessellation, and closed-form K-spectral bounds.

pub mod bounds;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod operator;
pub mod quadrature;
pub mod tessellation;

pub use error::{Error, Result};
pub use geometry::{Circline, ExtPoint, GeneralizedDisk, MoebiusMap, OrientedArc};
pub use operator::{ComplexMatrix, RationalFunction, RationalMatrixFunction};
pub use tessellation::Tessellation;
