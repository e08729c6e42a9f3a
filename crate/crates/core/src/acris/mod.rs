//! The divided-power period ring `A_cris(C)` of `C = k[x^{1/p^∞}]/(x)`, truncated.

mod conucleo;
mod exponent;
mod nygaard;
mod series;

pub use conucleo::{apply_m, conucleo_solve, fc_minus_one_solve, RSPair};
pub use exponent::{dp_carry, dp_factorial_val, frobenius_weight, PExponent};
pub use nygaard::{ars_contains, nygaard_contains, nygaard_modified_contains, nygaard_modified_kernel, witt_image};
pub use series::{DPSeries, Profile};

#[cfg(test)]
mod tests;
