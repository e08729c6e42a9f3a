//! Homogeneous forms over `F_{p^m}`, Hasse–Witt matrices of hypersurfaces and helpers for
//! ordinary elliptic curves in characteristic 2.

pub mod elliptic;
pub mod geometry;
pub mod hw;
pub mod parse;
pub mod poly;

pub use elliptic::{elliptic_ordinary, two_torsion, OrdinaryReport, Weierstrass};
pub use geometry::{
    fermat, general_position, paper_hypersurface, sample_tau_invariant, singular_point_search, tau_invariant_union,
    union_of_hyperplanes, HyperplaneUnion, SingularScan,
};
pub use hw::{hw_invertible, hw_matrix, hw_stable_rank, HWMatrix};
pub use parse::parse_poly;
pub use poly::HomogPoly;

#[cfg(test)]
mod tests;
