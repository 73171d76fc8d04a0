//! A scalar field stored by its Fourier coefficients on a [`Grid`].
//!
//! Fields representing real-valued functions are flagged at construction and the
//! Hermitian symmetry `c(-ξ) = conj(c(ξ))` is maintained by every operation that
//! declares itself conjugate-symmetric.

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::{fft, C64};

#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Array3<C64>,
    real: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Grid, real: bool) -> Self {
        let [d0, d1, d2] = grid.dims();
        SpectralField {
            grid: grid.clone(),
            coeffs: Array3::zeros((d0, d1, d2)),
            real,
        }
    }

    /// Wrap existing coefficients. The `real` flag is the caller's claim that the
    /// field represents a real-valued function; see [`Self::hermitian_defect`].
    pub fn from_coeffs(grid: &Grid, coeffs: Array3<C64>, real: bool) -> Result<Self> {
        let got = [coeffs.shape()[0], coeffs.shape()[1], coeffs.shape()[2]];
        if got != grid.dims() {
            return Err(Error::DimensionMismatch {
                got,
                want: grid.dims(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
            real,
        })
    }

    /// Transform spatial samples (laid out `[i1, i2, i3]` on the uniform grid)
    /// into a spectral field.
    pub fn from_spatial(grid: &Grid, spatial: Array3<C64>, real: bool) -> Result<Self> {
        let got = [spatial.shape()[0], spatial.shape()[1], spatial.shape()[2]];
        if got != grid.dims() {
            return Err(Error::DimensionMismatch {
                got,
                want: grid.dims(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs: fft::forward(spatial),
            real,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn coeffs(&self) -> &Array3<C64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array3<C64> {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Array3<C64> {
        self.coeffs
    }

    /// Spatial samples of the field (unnormalized inverse DFT of the coefficients).
    pub fn to_spatial(&self) -> Array3<C64> {
        fft::inverse(self.coeffs.clone())
    }

    /// Coefficient at integer wavenumber triple `k`.
    pub fn get(&self, k: [i64; 3]) -> Result<C64> {
        let [i1, i2, i3] = self.grid.k_triple_to_index(k)?;
        Ok(self.coeffs[[i1, i2, i3]])
    }

    pub fn set(&mut self, k: [i64; 3], value: C64) -> Result<()> {
        let [i1, i2, i3] = self.grid.k_triple_to_index(k)?;
        self.coeffs[[i1, i2, i3]] = value;
        Ok(())
    }

    /// `sqrt(Σ_ξ |c_ξ|²)`, the L² norm in the mode-sum convention.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of `c(-ξ) = conj(c(ξ))` over paired modes, plus the
    /// largest imaginary part on unpaired Nyquist planes.
    pub fn hermitian_defect(&self) -> f64 {
        let [d0, d1, d2] = self.grid.dims();
        let mut worst = 0.0f64;
        for i1 in 0..d0 {
            let j1 = self.grid.neg_index(0, i1);
            for i2 in 0..d1 {
                let j2 = self.grid.neg_index(1, i2);
                for i3 in 0..d2 {
                    let j3 = self.grid.neg_index(2, i3);
                    // Nyquist indices wrap onto themselves, so this also demands
                    // real coefficients on the unpaired planes.
                    let c = self.coeffs[[i1, i2, i3]];
                    worst = worst.max((self.coeffs[[j1, j2, j3]] - c.conj()).norm());
                }
            }
        }
        worst
    }

    /// Project onto the Hermitian-symmetric part (and zero unpaired Nyquist
    /// planes), making the represented function exactly real.
    pub fn symmetrize(&mut self) {
        let [d0, d1, d2] = self.grid.dims();
        for i1 in 0..d0 {
            let j1 = self.grid.neg_index(0, i1);
            for i2 in 0..d1 {
                let j2 = self.grid.neg_index(1, i2);
                for i3 in 0..d2 {
                    let j3 = self.grid.neg_index(2, i3);
                    if self.grid.is_nyquist(0, i1)
                        || self.grid.is_nyquist(1, i2)
                        || self.grid.is_nyquist(2, i3)
                    {
                        self.coeffs[[i1, i2, i3]] = C64::new(0.0, 0.0);
                        continue;
                    }
                    if (j1, j2, j3) < (i1, i2, i3) {
                        continue; // handled when the partner was visited
                    }
                    let c = self.coeffs[[i1, i2, i3]];
                    let d = self.coeffs[[j1, j2, j3]];
                    let avg = 0.5 * (c + d.conj());
                    self.coeffs[[i1, i2, i3]] = avg;
                    self.coeffs[[j1, j2, j3]] = avg.conj();
                }
            }
        }
        self.real = true;
    }

    /// Zero every mode outside the 2/3-rule dealias ball.
    pub fn truncate_to_dealias_ball(&mut self) {
        let g = self.grid.clone();
        for ((i1, i2, i3), c) in self.coeffs.indexed_iter_mut() {
            if !(g.dealias_keep(0, i1) && g.dealias_keep(1, i2) && g.dealias_keep(2, i3)) {
                *c = C64::new(0.0, 0.0);
            }
        }
    }

    /// Replace every coefficient by its modulus: `f ↦ f⁺`, `c_ξ ↦ |c_ξ|`.
    /// Preserves every norm built from `|c_ξ|` and is idempotent; the result is
    /// in general no longer the spectrum of a real field.
    pub fn modulus_spectrum(&self) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.mapv(|c| C64::new(c.norm(), 0.0)),
            real: false,
        }
    }

    pub fn scale(&mut self, factor: f64) {
        self.coeffs.mapv_inplace(|c| c * factor);
    }

    /// `self += factor * other`; errors when grids differ.
    pub fn axpy(&mut self, factor: f64, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        ndarray::Zip::from(&mut self.coeffs)
            .and(&other.coeffs)
            .for_each(|a, &b| *a += factor * b);
        self.real = self.real && other.real;
        Ok(())
    }
}
