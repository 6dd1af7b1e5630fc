//! Circlines, generalized disks and Möbius maps on the Riemann sphere.

pub mod arc;
pub mod circline;
pub mod disk;
pub mod mobius;
pub mod pair;
pub mod pieces;
pub mod point;

pub use arc::OrientedArc;
pub use circline::{Circline, CirclineShape, DiskForm, LINE_TOL, TANGENCY_TOL};
pub use disk::{in_all, wrap_angle, GeneralizedDisk};
pub use mobius::MoebiusMap;
pub use pair::{
    boundary_intersection, classify_pair, median_circline, median_form, normalize_pair, reduce_disks, CanonicalPairConfig,
    PairCase, PairRelation,
};
pub use pieces::{boundary_pieces, split_circline};
pub use point::ExtPoint;
