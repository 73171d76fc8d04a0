//! Tendency assembly.
//!
//! The nonlinear term is computed in divergence form, `N_i = Σ_j ∂_j(v_j
//! v_i)`, from the six dealiased symmetric products `v_i v_j`. For
//! divergence-free ball-supported states this equals the advective form
//! `v·∇v_i` to rounding, and the discrete weighted energy identity holds
//! exactly: products of retained modes are exact convolutions, so integration
//! by parts has no aliasing error.

use ndarray::Array3;

use crate::field::SpectralField;
use crate::product::{spatial_to_dealiased, truncated_spatial};
use crate::solver::pressure::pressure_from_nonlinear;
use crate::solver::VelocityState;
use crate::C64;

fn sym_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => unreachable!(),
    }
}

/// Divergence-form nonlinear term `N_i = Σ_j ∂_j(v_j v_i)` (no ε factor).
/// Costs 3 inverse and 6 forward transforms.
pub fn nonlinear_term(v: &[SpectralField; 3]) -> [SpectralField; 3] {
    let grid = v[0].grid().clone();
    let real = v.iter().all(|f| f.is_real());
    let s: [Array3<C64>; 3] = [
        truncated_spatial(&v[0]),
        truncated_spatial(&v[1]),
        truncated_spatial(&v[2]),
    ];
    let mut w = Vec::with_capacity(6);
    for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
        let p = &s[i] * &s[j];
        w.push(spatial_to_dealiased(&grid, p, real).expect("product keeps dims"));
    }
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    let mut out = [
        SpectralField::zeros(&grid, real),
        SpectralField::zeros(&grid, real),
        SpectralField::zeros(&grid, real),
    ];
    for comp in 0..3 {
        let a = w[sym_index(0, comp)].coeffs().as_slice().expect("layout");
        let b = w[sym_index(1, comp)].coeffs().as_slice().expect("layout");
        let c = w[sym_index(2, comp)].coeffs().as_slice().expect("layout");
        let dst = out[comp]
            .coeffs_mut()
            .as_slice_mut()
            .expect("standard layout");
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let base = (i1 * n_h + i2) * n_v;
                let (x1, x2) = (xi_h[i1], xi_h[i2]);
                for i3 in 0..n_v {
                    let idx = base + i3;
                    let div = x1 * a[idx] + x2 * b[idx] + xi_v[i3] * c[idx];
                    dst[idx] = C64::new(-div.im, div.re); // i · div
                }
            }
        }
    }
    out
}

/// Everything the integrating factor does not absorb:
/// `−ε^{1/2} N − (∇_h q, ε² ∂₃ q)` with q solved from N. Divergence-free by
/// construction of q. This is the stage function of the exponential stepper.
pub fn nonstiff_rhs(v: &[SpectralField; 3], eps: f64) -> [SpectralField; 3] {
    let n = nonlinear_term(v);
    let q = pressure_from_nonlinear(&n, eps);
    let grid = v[0].grid().clone();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    let seps = eps.sqrt();
    let eps2 = eps * eps;
    let qd = q.coeffs().as_slice().expect("standard layout");
    let mut out = n;
    for comp in 0..3 {
        let dst = out[comp]
            .coeffs_mut()
            .as_slice_mut()
            .expect("standard layout");
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let base = (i1 * n_h + i2) * n_v;
                for i3 in 0..n_v {
                    let idx = base + i3;
                    // gradient weight: (ξ₁, ξ₂, ε² ξ₃) per component
                    let gxi = match comp {
                        0 => xi_h[i1],
                        1 => xi_h[i2],
                        _ => eps2 * xi_v[i3],
                    };
                    let grad = C64::new(0.0, gxi) * qd[idx];
                    dst[idx] = -seps * dst[idx] - grad;
                }
            }
        }
    }
    out
}

fn add_viscous(out: &mut [SpectralField; 3], v: &[SpectralField; 3], eps: f64) {
    let grid = v[0].grid().clone();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    let eps2 = eps * eps;
    for comp in 0..3 {
        let src = v[comp].coeffs().as_slice().expect("standard layout");
        let dst = out[comp]
            .coeffs_mut()
            .as_slice_mut()
            .expect("standard layout");
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let base = (i1 * n_h + i2) * n_v;
                let h2 = xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2];
                for i3 in 0..n_v {
                    let idx = base + i3;
                    let l = h2 + eps2 * xi_v[i3] * xi_v[i3];
                    dst[idx] -= l * src[idx];
                }
            }
        }
    }
}

/// Full tendency of the rescaled system, viscous part included.
pub fn rhs_rns(state: &VelocityState) -> [SpectralField; 3] {
    let mut out = nonstiff_rhs(&state.v, state.eps);
    add_viscous(&mut out, &state.v, state.eps);
    out
}

/// Plain Navier-Stokes tendency with unit viscosity (the ε = 1 system).
pub fn rhs_ns(v: &[SpectralField; 3]) -> [SpectralField; 3] {
    let mut out = nonstiff_rhs(v, 1.0);
    add_viscous(&mut out, v, 1.0);
    out
}
