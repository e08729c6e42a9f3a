//! The pages for the quotient of an ordinary elliptic curve in characteristic 2 by a
//! translation of order 2.

use super::module::{FgInvModule, ModDesc};
use super::spectral::{build_e2, force_differentials, Abutment, Coefficients, SpectralPage};
use crate::error::{Error, Result};

pub const FIGURES: [u32; 5] = [2, 3, 4, 5, 7];

const FIXTURES: [(u32, &str); 5] = [
    (2, include_str!("../../fixtures/figures/figure2.json")),
    (3, include_str!("../../fixtures/figures/figure3.json")),
    (4, include_str!("../../fixtures/figures/figure4.json")),
    (5, include_str!("../../fixtures/figures/figure5.json")),
    (7, include_str!("../../fixtures/figures/figure7.json")),
];

/// Shipped JSON for a figure.
pub fn figure_fixture(n: u32) -> Option<&'static str> {
    FIXTURES.iter().find(|(k, _)| *k == n).map(|(_, s)| *s)
}

/// Rows, column count, coefficients and abutment behind each computed page.
fn setup(n: u32) -> Option<(Vec<FgInvModule>, u32, Coefficients, Abutment)> {
    let p = 2;
    Some(match n {
        2 | 3 => (
            vec![FgInvModule::trivial_elementary(p, 1), FgInvModule::trivial_elementary(p, 1), FgInvModule::zero(p)],
            4,
            Coefficients::Coherent,
            Abutment::new(vec![ModDesc::elementary(1), ModDesc::elementary(1)]),
        ),
        4 | 5 => (
            vec![FgInvModule::trivial_free(p, 1), FgInvModule::trivial_free(p, 2), FgInvModule::trivial_free(p, 1)],
            5,
            Coefficients::Crystalline,
            Abutment::new(vec![ModDesc::free(1), ModDesc::free(2), ModDesc::free(1)]),
        ),
        7 => (
            vec![FgInvModule::trivial_free(p, 1), FgInvModule::trivial_free(p, 1), FgInvModule::zero(p)],
            4,
            Coefficients::Etale,
            Abutment::new(vec![ModDesc::free(1), ModDesc::free(1)]),
        ),
        _ => return None,
    })
}

/// Compute the page shown in figure `n`: an `E_2` page, or the `E_3` page obtained by forcing.
pub fn compute_figure(n: u32) -> Result<SpectralPage> {
    let (rows, columns, coeffs, abutment) =
        setup(n).ok_or_else(|| Error::InvalidParameter(format!("no computed page for figure {n}")))?;
    let e2 = build_e2(&rows, columns, coeffs)?;
    match n {
        2 | 4 => Ok(e2),
        _ => Ok(force_differentials(&e2, &abutment)?.next),
    }
}

/// Whether the computed page serializes to exactly the shipped bytes.
pub fn figure_matches(n: u32) -> Result<bool> {
    let fixture = figure_fixture(n).ok_or_else(|| Error::InvalidParameter(format!("no fixture for figure {n}")))?;
    Ok(compute_figure(n)?.to_json() == fixture)
}
