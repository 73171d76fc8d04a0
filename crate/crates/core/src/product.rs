//! Pointwise products with 2/3-rule dealiasing, per axis: both factors are
//! truncated to `|k_i| ≤ kmax_i`, multiplied on the collocation grid, and the
//! result is truncated again. Retained modes of the product are then exact
//! convolution values (aliases of in-ball pairs land outside the ball).

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::{fft, C64};

/// Collocation samples of the dealias-truncated field.
pub fn truncated_spatial(f: &SpectralField) -> Array3<C64> {
    let mut t = f.clone();
    t.truncate_to_dealias_ball();
    fft::inverse(t.into_coeffs())
}

/// Transform a pointwise product back to a ball-supported spectral field.
pub fn spatial_to_dealiased(
    grid: &Grid,
    spatial: Array3<C64>,
    real: bool,
) -> Result<SpectralField> {
    let mut out = SpectralField::from_coeffs(grid, fft::forward(spatial), real)?;
    out.truncate_to_dealias_ball();
    Ok(out)
}

/// Dealiased product `fg`.
pub fn dealias_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let mut a = truncated_spatial(f);
    let b = truncated_spatial(g);
    ndarray::Zip::from(&mut a).and(&b).for_each(|x, &y| *x *= y);
    spatial_to_dealiased(f.grid(), a, f.is_real() && g.is_real())
}
