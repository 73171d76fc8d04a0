//! Change-of-variables data builders connecting the rescaled system to plain
//! Navier-Stokes, plus the consistency check that the two tendencies agree
//! under the map.
//!
//! Both builders require ε = 1/m for an integer m so the rescaled fields land
//! exactly on a refined grid.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::solver::rhs::{rhs_ns, rhs_rns};
use crate::solver::VelocityState;

/// The integer m with ε = 1/m, to 1e-12.
pub fn recip_int_of_eps(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParam {
            what: "eps",
            constraint: "0 < eps <= 1",
            got: eps,
        });
    }
    let m = (1.0 / eps).round();
    if m < 1.0 || (eps - 1.0 / m).abs() > 1e-12 {
        return Err(Error::NotReciprocalInteger { eps });
    }
    Ok(m as usize)
}

/// Copy `src` coefficients into a field on `dst_grid`, index-mapped by
/// `(k₁,k₂,k₃) ↦ (h·k₁, h·k₂, v·k₃)` and scaled by `amp`.
fn map_modes(src: &SpectralField, dst_grid: &Grid, stretch: [i64; 3], amp: f64) -> SpectralField {
    let sg = src.grid();
    let mut out = SpectralField::zeros(dst_grid, src.is_real());
    for i1 in 0..sg.n_h() {
        let k1 = sg.index_to_k(0, i1);
        for i2 in 0..sg.n_h() {
            let k2 = sg.index_to_k(1, i2);
            for i3 in 0..sg.n_v() {
                let c = src.coeffs()[[i1, i2, i3]];
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                let k3 = sg.index_to_k(2, i3);
                let k = [k1 * stretch[0], k2 * stretch[1], k3 * stretch[2]];
                out.set(k, amp * c)
                    .expect("stretched mode fits refined grid");
            }
        }
    }
    out
}

/// Slow-vertical-variable embedding: from a state v with ε = 1/m on the box
/// (L_h, L_v), build `u = (ε^{1/2} v^h, ε^{-1/2} v³)(x_h, εx₃)` on the m×
/// taller box (L_h, m·L_v) with m× the vertical modes. Wavenumber indices are
/// unchanged, so source vertical frequency ξ₃ becomes εξ₃. Time is not
/// rescaled. The result is a unit-ε state for the plain system.
pub fn build_tall_data(state: &VelocityState) -> Result<VelocityState> {
    let m = recip_int_of_eps(state.eps)?;
    let sg = state.grid();
    let tall = Grid::new(sg.n_h(), m * sg.n_v(), sg.l_h(), m as f64 * sg.l_v())?;
    let seps = state.eps.sqrt();
    let u = [
        map_modes(&state.v[0], &tall, [1, 1, 1], seps),
        map_modes(&state.v[1], &tall, [1, 1, 1], seps),
        map_modes(&state.v[2], &tall, [1, 1, 1], 1.0 / seps),
    ];
    VelocityState::new(u, state.t, 1.0)
}

/// Fast-horizontal-variable embedding: from a state v with ε = 1/m, build
/// `u = (ε^{-1/2} v^h, ε^{-3/2} v³)(x_h/ε, x₃)` on the same box with m× the
/// horizontal modes; index (k₁,k₂,k₃) moves to (mk₁,mk₂,k₃). The matching
/// time change is t ↦ ε²t.
pub fn build_oscillating_data(state: &VelocityState) -> Result<VelocityState> {
    let m = recip_int_of_eps(state.eps)?;
    let sg = state.grid();
    let fine = Grid::new(m * sg.n_h(), sg.n_v(), sg.l_h(), sg.l_v())?;
    let amp_h = 1.0 / state.eps.sqrt();
    let amp_v = amp_h / state.eps;
    let mi = m as i64;
    let u = [
        map_modes(&state.v[0], &fine, [mi, mi, 1], amp_h),
        map_modes(&state.v[1], &fine, [mi, mi, 1], amp_h),
        map_modes(&state.v[2], &fine, [mi, mi, 1], amp_v),
    ];
    VelocityState::new(u, state.eps * state.eps * state.t, 1.0)
}

/// Outcome of the tendency-consistency check under [`build_tall_data`].
#[derive(Debug, Clone, Copy)]
pub struct ScalingReport {
    /// ‖map(rhs(v)) − rhs_plain(map(v))‖_{L²} / ‖map(v)‖_{L²} over the tall grid.
    pub residual: f64,
    /// ‖rhs_plain(map(v)) outside the source dealias ball‖ / ‖map(v)‖: the
    /// part of the plain tendency the source grid cannot represent. Zero for
    /// linear states; meaningful only when the nonlinearity is active.
    pub truncation_floor: f64,
}

impl ScalingReport {
    pub fn within(&self, factor: f64) -> bool {
        self.residual <= factor * self.truncation_floor
    }
}

/// Compare the rescaled tendency, mapped to the tall grid, against the plain
/// tendency of the mapped state. Inside the common dealias ball the two agree
/// to rounding; outside it only the tall grid has content, and that content
/// is the reported truncation floor.
pub fn scaling_residual(state: &VelocityState) -> Result<ScalingReport> {
    let u = build_tall_data(state)?;
    let unorm = u.l2_norm();
    if unorm == 0.0 {
        return Err(Error::ZeroInput);
    }
    let tall = u.grid().clone();
    let rhs_v = rhs_rns(state);
    let seps = state.eps.sqrt();
    let mapped = [
        map_modes(&rhs_v[0], &tall, [1, 1, 1], seps),
        map_modes(&rhs_v[1], &tall, [1, 1, 1], seps),
        map_modes(&rhs_v[2], &tall, [1, 1, 1], 1.0 / seps),
    ];
    let rhs_u = rhs_ns(&u.v);

    let sg = state.grid();
    let kmax_h = sg.dealias_kmax(0);
    let kmax_v = sg.dealias_kmax(2);
    let mut diff_sq = 0.0;
    let mut outside_sq = 0.0;
    for comp in 0..3 {
        let a = mapped[comp].coeffs();
        let b = rhs_u[comp].coeffs();
        for i1 in 0..tall.n_h() {
            let k1 = tall.index_to_k(0, i1);
            for i2 in 0..tall.n_h() {
                let k2 = tall.index_to_k(1, i2);
                for i3 in 0..tall.n_v() {
                    let d = a[[i1, i2, i3]] - b[[i1, i2, i3]];
                    diff_sq += d.norm_sqr();
                    let k3 = tall.index_to_k(2, i3);
                    if k1.abs() > kmax_h || k2.abs() > kmax_h || k3.abs() > kmax_v {
                        outside_sq += b[[i1, i2, i3]].norm_sqr();
                    }
                }
            }
        }
    }
    Ok(ScalingReport {
        residual: diff_sq.sqrt() / unorm,
        truncation_floor: outside_sq.sqrt() / unorm,
    })
}
