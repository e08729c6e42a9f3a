//! `Z/2` group cohomology of finitely generated `Z_(p)`-modules and the pages of the
//! Hochschild–Serre spectral sequence.

pub mod figures;
pub mod module;
pub mod spectral;
pub mod zlat;

pub use figures::{compute_figure, figure_fixture, figure_matches, FIGURES};
pub use module::{kunneth_assemble, z2_cohomology, FgInvModule, ModDesc};
pub use spectral::{
    build_e2, cell_name, force_differentials, force_differentials_with, render_markdown, Abutment, Coefficients,
    DiffStatus, Differential, Forced, SpectralPage,
};

#[cfg(test)]
mod tests;
