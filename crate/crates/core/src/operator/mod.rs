//! Dense complex matrices, rational functional calculus and spectral-set checks.

pub mod instance;
pub mod matrix;
pub mod rational;
pub mod spectral;

pub use instance::{random_instance, random_rational, InstanceConfig, InstanceKind, ProblemInstance};
pub use matrix::{
    eigenvalues, hermitian_part, identity, inverse, min_hermitian_eigenvalue, mobius_of_matrix, resolvent,
    spectral_norm, ComplexMatrix, ComplexVector, MatrixJson,
};
pub use rational::{RationalFunction, RationalMatrixFunction};
pub use spectral::{enlarge_disks, is_spectral, spectrum_clearance, spectrum_in_interior, sup_norm};
