//! Pressure for the rescaled system.
//!
//! Taking the divergence of the momentum equations and using div v = 0 gives
//!
//! ```text
//! (|ξ_h|² + ε² ξ₃²) q̂ = ε^{1/2} i [ξ₁ N̂₁ + ξ₂ N̂₂ + ξ₃ N̂₃]
//! ```
//!
//! where N = v·∇v in divergence form. Inverting this anisotropic symbol (with
//! q̂(0) = 0) makes the full tendency exactly divergence-free: the pressure
//! gradient entering the equations is (∇_h q, ε² ∂₃ q), so the ε² weight on
//! ξ₃² matches the ε² on the vertical gradient component.

use crate::field::SpectralField;
use crate::solver::rhs::nonlinear_term;
use crate::solver::VelocityState;
use crate::C64;

/// Solve for q̂ given the divergence-form nonlinear term N̂ (which already
/// carries no ε^{1/2} factor; the factor is applied here).
pub fn pressure_from_nonlinear(n: &[SpectralField; 3], eps: f64) -> SpectralField {
    let grid = n[0].grid().clone();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    let eps2 = eps * eps;
    let seps = eps.sqrt();
    let mut q = SpectralField::zeros(&grid, n.iter().all(|f| f.is_real()));
    {
        let d0 = n[0].coeffs().as_slice().expect("standard layout");
        let d1 = n[1].coeffs().as_slice().expect("standard layout");
        let d2 = n[2].coeffs().as_slice().expect("standard layout");
        let out = q.coeffs_mut().as_slice_mut().expect("standard layout");
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let base = (i1 * n_h + i2) * n_v;
                let h2 = xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2];
                for i3 in 0..n_v {
                    let denom = h2 + eps2 * xi_v[i3] * xi_v[i3];
                    if denom == 0.0 {
                        continue; // q̂(0) = 0 gauge
                    }
                    let idx = base + i3;
                    let div = xi_h[i1] * d0[idx] + xi_h[i2] * d1[idx] + xi_v[i3] * d2[idx];
                    out[idx] = C64::new(0.0, seps / denom) * div;
                }
            }
        }
    }
    q
}

/// Pressure of a state: recomputes the nonlinear term and inverts the symbol.
pub fn pressure_solve(state: &VelocityState) -> SpectralField {
    let n = nonlinear_term(&state.v);
    pressure_from_nonlinear(&n, state.eps)
}
