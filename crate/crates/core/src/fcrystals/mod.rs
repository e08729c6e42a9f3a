//! F-crystals: σ-modules, isocrystal equations and the product Nygaard model.

pub mod datum;
pub mod isocrystal;
pub mod library;
pub mod product;
pub mod sigma_module;
pub mod smoothness;

pub use datum::{reduce_orders, DatumFile, Entry, FCrystalDatum};
pub use isocrystal::{isocrystal_apply, isocrystal_residual, isocrystal_solve, QSeries};
pub use library::{library, library_datum, library_names};
pub use product::{theta_generator, ProductElem};
pub use sigma_module::{FixedPoints, SigmaModule, UnitRootPart};
pub use smoothness::{lifting_chain, lifting_chain_exists, smoothness_predicate, SmoothnessReport, Verdict};

#[cfg(test)]
mod tests;
