//! Finite fields, Galois rings and generic Witt vectors.

mod field;
mod galois;
mod ring;
mod trunc;
mod witt;

pub use field::{is_irreducible, FieldDesc, FqElem};
pub use galois::{teichmuller, GaloisRingElem, RingDesc};
pub use ring::CommRing;
pub use trunc::{TruncC, TruncDesc};
pub use witt::{witt_coordinates, WittArith, WittVector};
