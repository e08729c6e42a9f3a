//! Exact arithmetic for Witt vectors, the divided-power period ring of
//! `k[x^{1/p^∞}]/(x)`, σ-semilinear crystal data, Z/2 Hochschild–Serre pages and
//! Hasse–Witt matrices.

pub mod acris;
pub mod arith;
pub mod error;
pub mod fcrystals;
pub mod galois_witt;
pub mod group_cohomology;
pub mod hasse_witt;
pub mod linalg;
pub mod report;
pub mod suites;
pub mod verify;

pub use error::{Error, Result};
pub use galois_witt::{CommRing, FieldDesc, FqElem, GaloisRingElem, RingDesc, WittArith, WittVector};
pub use acris::{DPSeries, PExponent, Profile, RSPair};
pub use fcrystals::{FCrystalDatum, SigmaModule, SmoothnessReport, Verdict};
pub use group_cohomology::{FgInvModule, ModDesc, SpectralPage};
pub use hasse_witt::{HWMatrix, HomogPoly};
pub use report::{CheckResult, Format, Report, RunConfig, Status};
