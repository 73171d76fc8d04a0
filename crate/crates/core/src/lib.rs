//! Spectral toolkit for anisotropically rescaled Navier-Stokes experiments on a
//! periodic box, with a Littlewood-Paley verification layer, an analyticity-radius
//! monitor, and a 1D toy contraction model.
//!
//! Spectral convention throughout: `f(x) = Σ_ξ c_ξ e^{i ξ·x}` with wavenumbers
//! `ξ_i = k_i / L_i`, `k_i ∈ {-n/2+1, …, n/2}`. Norms are plain mode sums over the
//! coefficients `c_ξ` (no `1/N` factors), so single-mode examples are exact.

// `!(x > 0.0)` guards reject NaN along with out-of-range values; rewriting
// them as the positive comparison would silently admit NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops here walk the (i1, i2, i3) mode layout where the index doubles
// as the wavenumber coordinate; iterator rewrites obscure that correspondence
#![allow(clippy::needless_range_loop)]

pub mod checkpoint;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod lp;
pub mod monitor;
pub mod multiplier;
pub mod norms;
pub mod product;
pub mod random;
pub mod solver;
pub mod toy;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::Grid;
pub use multiplier::Multiplier;
pub use norms::AnisoNormParams;
pub use solver::VelocityState;

/// Complex scalar used for all spectral coefficients.
pub type C64 = num_complex::Complex64;
