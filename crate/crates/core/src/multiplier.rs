//! Diagonal Fourier multipliers `c_ξ ↦ m(ξ) c_ξ`.
//!
//! Symbols that are singular at a mode (negative horizontal powers at ξ_h = 0,
//! inverse Laplacians at ξ = 0) take the value 0 there by convention. Applying a
//! symbol that is non-finite at an occupied mode is an error instead.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::C64;

type Symbol = dyn Fn([f64; 3]) -> C64 + Send + Sync;

pub struct Multiplier {
    symbol: Box<Symbol>,
    /// `m(-ξ) = conj(m(ξ))`: application preserves real-valued fields.
    conj_symmetric: bool,
}

impl Multiplier {
    pub fn new(
        symbol: impl Fn([f64; 3]) -> C64 + Send + Sync + 'static,
        conj_symmetric: bool,
    ) -> Self {
        Multiplier {
            symbol: Box::new(symbol),
            conj_symmetric,
        }
    }

    /// Real even scalar symbol `m(ξ) = g(ξ)` with `g(-ξ) = g(ξ)`.
    pub fn real_even(symbol: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static) -> Self {
        Multiplier::new(move |xi| C64::new(symbol(xi), 0.0), true)
    }

    /// `e^{c |ξ₃|}` (the analyticity weight for radius `c`).
    pub fn exp_abs_xi3(c: f64) -> Self {
        Multiplier::real_even(move |xi| (c * xi[2].abs()).exp())
    }

    /// `|ξ₃|` (the symbol of `|D₃|`).
    pub fn abs_xi3() -> Self {
        Multiplier::real_even(|xi| xi[2].abs())
    }

    /// `i ξ_axis` (the derivative ∂ along `axis`).
    pub fn i_xi(axis: usize) -> Self {
        Multiplier::new(move |xi| C64::new(0.0, xi[axis]), true)
    }

    /// `|ξ_h|^sigma`; for `sigma < 0` the value at ξ_h = 0 is 0 by convention,
    /// for `sigma = 0` it is the identity.
    pub fn horizontal_pow(sigma: f64) -> Self {
        Multiplier::real_even(move |xi| {
            let h = xi[0].hypot(xi[1]);
            if h == 0.0 {
                if sigma == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                h.powf(sigma)
            }
        })
    }

    /// `⟨ξ₃⟩^p = (1 + ξ₃²)^{p/2}`.
    pub fn vertical_bracket_pow(p: f64) -> Self {
        Multiplier::real_even(move |xi| (1.0 + xi[2] * xi[2]).powf(0.5 * p))
    }

    /// `(|ξ_h|² + ε² ξ₃²)^{-1}`, the inverse anisotropic Laplacian `(-Δ_ε)^{-1}`,
    /// zero at ξ = 0.
    pub fn inv_neg_delta_eps(eps: f64) -> Self {
        Multiplier::real_even(move |xi| {
            let denom = xi[0] * xi[0] + xi[1] * xi[1] + eps * eps * xi[2] * xi[2];
            if denom == 0.0 {
                0.0
            } else {
                1.0 / denom
            }
        })
    }

    pub fn is_conj_symmetric(&self) -> bool {
        self.conj_symmetric
    }

    pub fn eval(&self, xi: [f64; 3]) -> C64 {
        (self.symbol)(xi)
    }

    /// Apply the multiplier mode by mode. Errors if the symbol is non-finite at
    /// a mode whose coefficient is nonzero.
    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        let grid = f.grid().clone();
        let mut out = f.clone();
        let xi_h = grid.xi_h_table();
        let xi_v = grid.xi_v_table();
        let mut bad: Option<[i64; 3]> = None;
        for ((i1, i2, i3), c) in out.coeffs_mut().indexed_iter_mut() {
            let m = (self.symbol)([xi_h[i1], xi_h[i2], xi_v[i3]]);
            if m.re.is_finite() && m.im.is_finite() {
                *c *= m;
            } else if c.norm_sqr() == 0.0 {
                *c = C64::new(0.0, 0.0);
            } else if bad.is_none() {
                bad = Some([
                    grid.index_to_k(0, i1),
                    grid.index_to_k(1, i2),
                    grid.index_to_k(2, i3),
                ]);
            }
        }
        if let Some(k) = bad {
            return Err(Error::NonFiniteSymbol { k });
        }
        let real = f.is_real() && self.conj_symmetric;
        SpectralField::from_coeffs(&grid, out.into_coeffs(), real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn grid() -> Grid {
        Grid::new(8, 8, 1.0, 1.0).unwrap()
    }

    #[test]
    fn test_multiplier_exp_weight_scales_single_mode() {
        let g = grid();
        let mut f = SpectralField::zeros(&g, false);
        f.set([0, 0, 2], C64::new(1.0, 0.0)).unwrap();
        let w = Multiplier::exp_abs_xi3(0.1).apply(&f).unwrap();
        let want = (0.2f64).exp();
        assert!((w.get([0, 0, 2]).unwrap().re - want).abs() < 1e-15);
    }

    #[test]
    fn test_multiplier_derivative_turns_cosine_into_minus_sine() {
        // i ξ₁ applied to 2 cos(x₁) gives -2 sin(x₁)
        let g = grid();
        let mut f = SpectralField::zeros(&g, true);
        f.set([1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        f.set([-1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        let df = Multiplier::i_xi(0).apply(&f).unwrap();
        assert!(df.is_real());
        let spatial = df.to_spatial();
        for i1 in 0..8 {
            let x1 = 2.0 * std::f64::consts::PI * i1 as f64 / 8.0;
            let want = -2.0 * x1.sin();
            assert!((spatial[[i1, 3, 5]].re - want).abs() < 1e-12);
            assert!(spatial[[i1, 3, 5]].im.abs() < 1e-12);
        }
    }

    #[test]
    fn test_multiplier_inverse_anisotropic_laplacian_value() {
        let g = grid();
        let mut f = SpectralField::zeros(&g, false);
        f.set([1, 0, 3], C64::new(2.0, 0.0)).unwrap();
        let out = Multiplier::inv_neg_delta_eps(0.1).apply(&f).unwrap();
        let want = 2.0 / (1.0 + 0.01 * 9.0);
        assert!((out.get([1, 0, 3]).unwrap().re - want).abs() < 1e-14);
    }

    #[test]
    fn test_multiplier_singular_symbols_zero_the_singular_mode() {
        let g = grid();
        let mut f = SpectralField::zeros(&g, false);
        f.set([0, 0, 1], C64::new(1.0, 0.0)).unwrap();
        f.set([1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        let out = Multiplier::horizontal_pow(-0.5).apply(&f).unwrap();
        assert_eq!(out.get([0, 0, 1]).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(out.get([1, 0, 0]).unwrap(), C64::new(1.0, 0.0));
        let inv = Multiplier::inv_neg_delta_eps(1.0).apply(&f).unwrap();
        assert_eq!(inv.get([0, 0, 1]).unwrap(), C64::new(1.0, 0.0)); // 1/(0+1)
    }

    #[test]
    fn test_multiplier_non_finite_symbol_at_occupied_mode_errors() {
        let g = grid();
        let blow = Multiplier::real_even(|xi| 1.0 / xi[2].abs()); // inf at ξ₃ = 0
        let mut occupied = SpectralField::zeros(&g, false);
        occupied.set([2, 0, 0], C64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            blow.apply(&occupied),
            Err(Error::NonFiniteSymbol { k: [2, 0, 0] })
        ));
        let mut unoccupied = SpectralField::zeros(&g, false);
        unoccupied.set([0, 0, 1], C64::new(1.0, 0.0)).unwrap();
        let out = blow.apply(&unoccupied).unwrap();
        assert_eq!(out.get([0, 0, 1]).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(out.get([0, 0, 0]).unwrap(), C64::new(0.0, 0.0));
    }
}
