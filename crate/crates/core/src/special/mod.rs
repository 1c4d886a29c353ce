//! Special functions used by the closed forms.
//!
//! Modified Bessel functions `I_ν` for integer and half-integer orders are
//! returned as [`ScaledValue`] so that `e^z`-sized results survive products
//! with `e^{-x}` damping factors. Associated Laguerre polynomials and Gamma
//! at half-integers round out what the identities need.

mod bessel;
mod gamma;
mod laguerre;
mod scaled;
mod sum;

pub use bessel::{bessel_i, BesselOrder, SERIES_SWITCH};
pub use gamma::{gamma_half, ln_gamma_half};
pub use laguerre::{laguerre_assoc, LAGUERRE_MAX_DEGREE};
pub use scaled::ScaledValue;

pub(crate) use bessel::{bessel_int, power_series};
pub(crate) use sum::NeumaierSum;
