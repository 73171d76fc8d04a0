//! Integrating-factor Runge-Kutta steppers of order 2, 3, and 4.
//!
//! With u(τ) = e^{Lτ} v(τ) the viscous symbol L = |ξ_h|² + ε²ξ₃² drops out of
//! the transformed equation, which is advanced with a classical explicit
//! scheme. Mapping the stages back to physical variables yields update
//! formulas that use only non-positive exponentials e^{-Lτ}, τ ∈ {dt/2, dt},
//! so the factors never overflow and linear-only runs decay exactly by the
//! integrating factor.
//!
//! The running dissipation integral ∫‖v‖²_diss dτ is advanced alongside as an
//! extra quadrature component with L = 0, using the same stage abscissae and
//! weights; the resulting energy-balance residual shrinks at the order of the
//! scheme which is how the acceptance tests measure convergence order.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::solver::rhs::nonstiff_rhs;
use crate::solver::{weighted_dissipation_of as dissipation_of, StepOrder, VelocityState};

/// Per-step bookkeeping that the run loop accumulates.
#[derive(Debug, Clone, Copy)]
pub struct StepReport {
    /// Quadrature of the weighted dissipation over this step.
    pub dissipation_increment: f64,
}

fn exp_table(grid: &Grid, eps: f64, tau: f64) -> Vec<f64> {
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table();
    let xi_v = grid.xi_v_table();
    let eps2 = eps * eps;
    let mut table = Vec::with_capacity(grid.total_modes());
    for i1 in 0..n_h {
        for i2 in 0..n_h {
            let h2 = xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2];
            for i3 in 0..n_v {
                let l = h2 + eps2 * xi_v[i3] * xi_v[i3];
                table.push((-l * tau).exp());
            }
        }
    }
    table
}

fn apply_table(v: &[SpectralField; 3], table: &[f64]) -> [SpectralField; 3] {
    let mut out = v.clone();
    for f in out.iter_mut() {
        let data = f.coeffs_mut().as_slice_mut().expect("standard layout");
        for (c, &e) in data.iter_mut().zip(table) {
            *c *= e;
        }
    }
    out
}

fn add_scaled(dst: &mut [SpectralField; 3], factor: f64, src: &[SpectralField; 3]) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        d.axpy(factor, s).expect("stage grids agree");
    }
}

/// Advance one step of size `dt`. Returns the new state and the dissipation
/// quadrature increment. `linear_only` freezes the nonlinear and pressure
/// terms at zero, leaving pure integrating-factor decay.
pub fn step(
    state: &VelocityState,
    dt: f64,
    order: StepOrder,
    linear_only: bool,
) -> Result<(VelocityState, StepReport)> {
    let eps = state.eps;
    let grid = state.grid().clone();
    let e_half = exp_table(&grid, eps, 0.5 * dt);
    let e_full = exp_table(&grid, eps, dt);
    let nfun = |v: &[SpectralField; 3]| -> [SpectralField; 3] {
        if linear_only {
            [
                SpectralField::zeros(&grid, true),
                SpectralField::zeros(&grid, true),
                SpectralField::zeros(&grid, true),
            ]
        } else {
            nonstiff_rhs(v, eps)
        }
    };
    let v0 = &state.v;

    let (v_next, diss) = match order {
        StepOrder::Two => {
            // Heun with integrating factor:
            // v_{n+1} = E v_n + dt/2 (E N(v_n) + N(E(v_n + dt N(v_n))))
            let a = nfun(v0);
            let mut s2 = v0.clone();
            add_scaled(&mut s2, dt, &a);
            let s2 = apply_table(&s2, &e_full);
            let b = nfun(&s2);
            let mut out = v0.clone();
            add_scaled(&mut out, 0.5 * dt, &a);
            let mut out = apply_table(&out, &e_full);
            add_scaled(&mut out, 0.5 * dt, &b);
            let d = 0.5 * dt * (dissipation_of(v0, eps) + dissipation_of(&s2, eps));
            (out, d)
        }
        StepOrder::Three => {
            // Kutta's third-order scheme, stages at 0, dt/2, dt.
            let a = nfun(v0);
            let mut s2 = v0.clone();
            add_scaled(&mut s2, 0.5 * dt, &a);
            let s2 = apply_table(&s2, &e_half);
            let b = nfun(&s2);
            let mut s3 = v0.clone();
            add_scaled(&mut s3, -dt, &a);
            let mut s3 = apply_table(&s3, &e_full);
            {
                let tb = apply_table(&b, &e_half);
                add_scaled(&mut s3, 2.0 * dt, &tb);
            }
            let c = nfun(&s3);
            let mut out = v0.clone();
            add_scaled(&mut out, dt / 6.0, &a);
            let mut out = apply_table(&out, &e_full);
            {
                let tb = apply_table(&b, &e_half);
                add_scaled(&mut out, 4.0 * dt / 6.0, &tb);
            }
            add_scaled(&mut out, dt / 6.0, &c);
            let d = dt / 6.0
                * (dissipation_of(v0, eps)
                    + 4.0 * dissipation_of(&s2, eps)
                    + dissipation_of(&s3, eps));
            (out, d)
        }
        StepOrder::Four => {
            // Classical RK4, stages at 0, dt/2, dt/2, dt.
            let a = nfun(v0);
            let mut s2 = v0.clone();
            add_scaled(&mut s2, 0.5 * dt, &a);
            let s2 = apply_table(&s2, &e_half);
            let b = nfun(&s2);
            let mut s3 = apply_table(v0, &e_half);
            add_scaled(&mut s3, 0.5 * dt, &b);
            let c = nfun(&s3);
            let mut s4 = apply_table(&c, &e_half);
            {
                let ev = apply_table(v0, &e_full);
                let mut tmp = ev;
                add_scaled(&mut tmp, dt, &s4);
                s4 = tmp;
            }
            let d4 = nfun(&s4);
            // v_{n+1} = E v_n + dt/6 (E a + 2 E_half (b + c) + d)
            let mut out = v0.clone();
            add_scaled(&mut out, dt / 6.0, &a);
            let mut out = apply_table(&out, &e_full);
            {
                let mut bc = b.clone();
                add_scaled(&mut bc, 1.0, &c);
                let tbc = apply_table(&bc, &e_half);
                add_scaled(&mut out, 2.0 * dt / 6.0, &tbc);
            }
            add_scaled(&mut out, dt / 6.0, &d4);
            let d = dt / 6.0
                * (dissipation_of(v0, eps)
                    + 2.0 * dissipation_of(&s2, eps)
                    + 2.0 * dissipation_of(&s3, eps)
                    + dissipation_of(&s4, eps));
            (out, d)
        }
    };

    if !v_next.iter().all(|f| f.is_finite()) {
        return Err(Error::BlowUp { t: state.t + dt });
    }
    let next = VelocityState::new(v_next, state.t + dt, eps)?;
    Ok((
        next,
        StepReport {
            dissipation_increment: diss,
        },
    ))
}
