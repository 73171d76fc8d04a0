//! Anisotropic Sobolev norms
//! `‖f‖²_{H^{σ,s}} = Σ_ξ |ξ_h|^{2σ} (1 + ξ₃²)^s |c_ξ|²`
//! in the mode-sum convention. For `σ < 0` the ξ_h = 0 modes are excluded from
//! the sum (their would-be weight is infinite); their energy is reported
//! separately by [`horizontal_mean_energy`].

use crate::field::SpectralField;
use crate::grid::Grid;

/// Exponent pair (σ, s): σ on the horizontal modulus, s on the vertical bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisoNormParams {
    pub sigma: f64,
    pub s: f64,
}

impl AnisoNormParams {
    pub fn new(sigma: f64, s: f64) -> Self {
        AnisoNormParams { sigma, s }
    }
}

/// Horizontal weight table `|ξ_h|^{2σ}` over the (i1, i2) index square.
/// At ξ_h = 0 the entry is 1 for σ = 0 and 0 otherwise (exclusion convention).
fn horizontal_weights(grid: &Grid, sigma: f64) -> Vec<f64> {
    let n = grid.n_h();
    let xi = grid.xi_h_table();
    let mut w = vec![0.0; n * n];
    for i1 in 0..n {
        for i2 in 0..n {
            let h2 = xi[i1] * xi[i1] + xi[i2] * xi[i2];
            w[i1 * n + i2] = if h2 == 0.0 {
                if sigma == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else if sigma == 0.0 {
                1.0
            } else {
                h2.powf(sigma)
            };
        }
    }
    w
}

/// Vertical weight table `(1 + ξ₃²)^s e^{2 r |ξ₃|}` over i3.
fn vertical_weights(grid: &Grid, s: f64, radius: f64) -> Vec<f64> {
    grid.xi_v_table()
        .iter()
        .map(|&xi3| {
            let bracket = if s == 0.0 {
                1.0
            } else {
                (1.0 + xi3 * xi3).powf(s)
            };
            if radius == 0.0 {
                bracket
            } else {
                bracket * (2.0 * radius * xi3.abs()).exp()
            }
        })
        .collect()
}

/// `Σ |ξ_h|^{2σ} (1+ξ₃²)^s e^{2 r |ξ₃|} |c_ξ|²`: the squared H^{σ,s} norm of
/// the field weighted by `e^{r |D₃|}`.
pub fn aniso_norm_sq_weighted(f: &SpectralField, p: AnisoNormParams, radius: f64) -> f64 {
    let grid = f.grid();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let hw = horizontal_weights(grid, p.sigma);
    let vw = vertical_weights(grid, p.s, radius);
    let data = f.coeffs().as_slice().expect("standard layout");
    let mut total = 0.0;
    for i1 in 0..n_h {
        for i2 in 0..n_h {
            let w_h = hw[i1 * n_h + i2];
            if w_h == 0.0 {
                continue;
            }
            let lane = &data[(i1 * n_h + i2) * n_v..(i1 * n_h + i2 + 1) * n_v];
            let mut acc = 0.0;
            for (c, w_v) in lane.iter().zip(vw.iter()) {
                acc += w_v * c.norm_sqr();
            }
            total += w_h * acc;
        }
    }
    total
}

pub fn aniso_norm_sq(f: &SpectralField, p: AnisoNormParams) -> f64 {
    aniso_norm_sq_weighted(f, p, 0.0)
}

pub fn aniso_norm(f: &SpectralField, p: AnisoNormParams) -> f64 {
    aniso_norm_sq(f, p).sqrt()
}

/// Squared norm of a component triple: `Σ_i ‖f_i‖²`.
pub fn aniso_norm_sq_vec(fields: &[SpectralField], p: AnisoNormParams, radius: f64) -> f64 {
    fields
        .iter()
        .map(|f| aniso_norm_sq_weighted(f, p, radius))
        .sum()
}

/// Energy `Σ_{ξ_h = 0} |c_ξ|²` carried by the horizontal-mean modes that the
/// σ < 0 norms exclude.
pub fn horizontal_mean_energy(f: &SpectralField) -> f64 {
    let n_v = f.grid().n_v();
    (0..n_v).map(|i3| f.coeffs()[[0, 0, i3]].norm_sqr()).sum()
}
