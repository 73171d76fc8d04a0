//! Rescaled anisotropic Navier-Stokes system on the periodic box:
//!
//! ```text
//! ∂_t v^h − Δ_h v^h − ε² ∂₃² v^h + ε^{1/2} v·∇v^h = −∇_h q
//! ∂_t v³ − Δ_h v³ − ε² ∂₃² v³ + ε^{1/2} v·∇v³ = −ε² ∂₃ q
//! div v = 0
//! ```
//!
//! with the pressure chosen so the tendency stays divergence-free, plus the
//! plain Navier-Stokes right-hand side used by the change-of-variables checks.

mod data;
mod pressure;
mod rhs;
mod stepper;

pub use data::{
    build_oscillating_data, build_tall_data, recip_int_of_eps, scaling_residual, ScalingReport,
};
pub use pressure::{pressure_from_nonlinear, pressure_solve};
pub use rhs::{nonlinear_term, rhs_ns, rhs_rns};
pub use stepper::{step, StepReport};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

/// Divergence-free velocity triple `(v¹, v², v³)` at time `t` with anisotropy
/// parameter `eps`.
#[derive(Debug, Clone)]
pub struct VelocityState {
    pub v: [SpectralField; 3],
    pub t: f64,
    pub eps: f64,
}

impl VelocityState {
    /// Relative tolerance for the construction-time divergence check.
    pub const DIV_TOL: f64 = 1e-12;

    pub fn new(v: [SpectralField; 3], t: f64, eps: f64) -> Result<Self> {
        if v[1].grid() != v[0].grid() || v[2].grid() != v[0].grid() {
            return Err(Error::GridMismatch);
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParam {
                what: "eps",
                constraint: "0 < eps <= 1",
                got: eps,
            });
        }
        let st = VelocityState { v, t, eps };
        let defect = st.divergence_max_rel();
        if defect > Self::DIV_TOL {
            return Err(Error::NotDivergenceFree { defect });
        }
        Ok(st)
    }

    pub fn zeros(grid: &Grid, eps: f64) -> Result<Self> {
        VelocityState::new(
            [
                SpectralField::zeros(grid, true),
                SpectralField::zeros(grid, true),
                SpectralField::zeros(grid, true),
            ],
            0.0,
            eps,
        )
    }

    pub fn grid(&self) -> &Grid {
        self.v[0].grid()
    }

    /// Largest mode-wise divergence `|ξ·v̂|`, relative to the state's L² size.
    pub fn divergence_max_rel(&self) -> f64 {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return 0.0;
        }
        divergence_max_abs(&self.v) / norm
    }

    pub fn l2_norm(&self) -> f64 {
        self.v
            .iter()
            .map(|f| f.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted energy `E = ½ (‖v^h‖² + ε^{-2} ‖v³‖²)` (mode-sum L²).
    pub fn weighted_energy(&self) -> f64 {
        let eh = self.v[0].l2_norm().powi(2) + self.v[1].l2_norm().powi(2);
        let ev = self.v[2].l2_norm().powi(2);
        0.5 * (eh + ev / (self.eps * self.eps))
    }

    /// Weighted dissipation
    /// `‖∇_h v^h‖² + ε² ‖∂₃ v^h‖² + ε^{-2} ‖∇_h v³‖² + ‖∂₃ v³‖²`,
    /// the exact decay rate of [`Self::weighted_energy`] for the semi-discrete
    /// system (nonlinear and pressure terms cancel).
    pub fn weighted_dissipation(&self) -> f64 {
        weighted_dissipation_of(&self.v, self.eps)
    }

    /// Spatial sup of |v_i| over components (for the advective CFL bound).
    pub fn max_speed(&self) -> f64 {
        self.v
            .iter()
            .map(|f| f.to_spatial().iter().map(|c| c.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Weighted dissipation of a velocity triple (see
/// [`VelocityState::weighted_dissipation`]).
pub fn weighted_dissipation_of(v: &[SpectralField; 3], eps: f64) -> f64 {
    let grid = v[0].grid();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table();
    let xi_v = grid.xi_v_table();
    let eps2 = eps * eps;
    let mut total = 0.0;
    for (ci, f) in v.iter().enumerate() {
        let data = f.coeffs().as_slice().expect("standard layout");
        let (wh_scale, wv_scale) = if ci < 2 {
            (1.0, eps2) // |∇_h v^h|² + ε² |∂₃ v^h|²
        } else {
            (1.0 / eps2, 1.0) // ε^{-2} |∇_h v³|² + |∂₃ v³|²
        };
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let h2 = xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2];
                let lane = &data[(i1 * n_h + i2) * n_v..(i1 * n_h + i2 + 1) * n_v];
                for (i3, c) in lane.iter().enumerate() {
                    let v2 = xi_v[i3] * xi_v[i3];
                    total += (wh_scale * h2 + wv_scale * v2) * c.norm_sqr();
                }
            }
        }
    }
    total
}

/// Largest mode-wise `|ξ·v̂|` over the grid (absolute).
pub fn divergence_max_abs(v: &[SpectralField; 3]) -> f64 {
    let grid = v[0].grid();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table();
    let xi_v = grid.xi_v_table();
    let d0 = v[0].coeffs().as_slice().expect("standard layout");
    let d1 = v[1].coeffs().as_slice().expect("standard layout");
    let d2 = v[2].coeffs().as_slice().expect("standard layout");
    let mut worst = 0.0f64;
    for i1 in 0..n_h {
        for i2 in 0..n_h {
            let base = (i1 * n_h + i2) * n_v;
            for i3 in 0..n_v {
                let div =
                    xi_h[i1] * d0[base + i3] + xi_h[i2] * d1[base + i3] + xi_v[i3] * d2[base + i3];
                worst = worst.max(div.norm());
            }
        }
    }
    worst
}

/// In-place Leray projection `v̂ ↦ (I − ξξᵀ/|ξ|²) v̂` (identity at ξ = 0).
pub fn leray_project(v: &mut [SpectralField; 3]) {
    let grid = v[0].grid().clone();
    let n_h = grid.n_h();
    let n_v = grid.n_v();
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    let [c0, c1, c2] = v;
    let d0 = c0.coeffs_mut().as_slice_mut().expect("standard layout");
    let d1 = c1.coeffs_mut().as_slice_mut().expect("standard layout");
    let d2 = c2.coeffs_mut().as_slice_mut().expect("standard layout");
    for i1 in 0..n_h {
        for i2 in 0..n_h {
            let base = (i1 * n_h + i2) * n_v;
            for i3 in 0..n_v {
                let xi = [xi_h[i1], xi_h[i2], xi_v[i3]];
                let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                if r2 == 0.0 {
                    continue;
                }
                let idx = base + i3;
                let dot = xi[0] * d0[idx] + xi[1] * d1[idx] + xi[2] * d2[idx];
                let scale = dot / r2;
                d0[idx] -= xi[0] * scale;
                d1[idx] -= xi[1] * scale;
                d2[idx] -= xi[2] * scale;
            }
        }
    }
}

/// Explicit-stage order of the integrating-factor Runge-Kutta stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOrder {
    Two,
    Three,
    Four,
}

impl StepOrder {
    pub fn from_u32(n: u32) -> Result<Self> {
        match n {
            2 => Ok(StepOrder::Two),
            3 => Ok(StepOrder::Three),
            4 => Ok(StepOrder::Four),
            _ => Err(Error::InvalidParam {
                what: "stepper order",
                constraint: "one of {2, 3, 4}",
                got: n as f64,
            }),
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            StepOrder::Two => 2,
            StepOrder::Three => 3,
            StepOrder::Four => 4,
        }
    }
}

/// Time-stepping parameters. The viscous part is handled by an exact
/// integrating factor, so `dt` is constrained only by advection and accuracy.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub order: StepOrder,
    pub cfl_safety: f64,
    pub linear_only: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64, order: StepOrder) -> Result<Self> {
        let cfg = SolverConfig {
            dt,
            t_end,
            order,
            cfl_safety: 0.5,
            linear_only: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParam {
                what: "dt",
                constraint: "positive finite",
                got: self.dt,
            });
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParam {
                what: "t_end",
                constraint: "positive finite",
                got: self.t_end,
            });
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(Error::InvalidParam {
                what: "cfl_safety",
                constraint: "in (0, 1)",
                got: self.cfl_safety,
            });
        }
        Ok(())
    }

    /// Advective CFL bound from `ε^{1/2} ‖v‖_∞` on the initial data; errors if
    /// `dt` exceeds it. Linear-only runs have no advective restriction.
    pub fn check_cfl(&self, v0: &VelocityState) -> Result<()> {
        if self.linear_only {
            return Ok(());
        }
        let speed = v0.eps.sqrt() * v0.max_speed();
        if speed == 0.0 {
            return Ok(());
        }
        let g = v0.grid();
        let dx_h = 2.0 * std::f64::consts::PI * g.l_h() / g.n_h() as f64;
        let dx_v = 2.0 * std::f64::consts::PI * g.l_v() / g.n_v() as f64;
        let bound = self.cfl_safety * dx_h.min(dx_v) / speed;
        if self.dt > bound {
            return Err(Error::CflViolation { dt: self.dt, bound });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_divergence_free_velocity;
    use crate::C64;

    #[test]
    fn test_solver_state_requires_divergence_free() {
        let g = Grid::new(8, 8, 1.0, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g, true);
        f.set([1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        f.set([-1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        // v = (f, 0, 0) has div = ∂₁ f ≠ 0
        let z = SpectralField::zeros(&g, true);
        assert!(matches!(
            VelocityState::new([f.clone(), z.clone(), z.clone()], 0.0, 0.5),
            Err(Error::NotDivergenceFree { .. })
        ));
        // v = (0, f, 0) has div = ∂₂ f = 0 (f depends only on x₁)
        assert!(VelocityState::new([z.clone(), f, z], 0.0, 0.5).is_ok());
    }

    #[test]
    fn test_solver_leray_projection_kills_divergence() {
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let v = random_divergence_free_velocity(&g, 7, 0.2, 3.0);
        let norm: f64 = v.iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt();
        assert!(norm > 0.0);
        assert!(divergence_max_abs(&v) < 1e-13 * norm);
        // projection is idempotent
        let mut w = v.clone();
        leray_project(&mut w);
        for (a, b) in w.iter().zip(v.iter()) {
            let diff: f64 = a
                .coeffs()
                .iter()
                .zip(b.coeffs().iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-15);
        }
    }

    #[test]
    fn test_solver_config_validates_and_checks_cfl() {
        assert!(SolverConfig::new(0.0, 1.0, StepOrder::Four).is_err());
        let cfg = SolverConfig::new(0.01, 1.0, StepOrder::Four).unwrap();
        let g = Grid::new(8, 8, 1.0, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g, true);
        // huge single-mode shear => tiny CFL bound
        f.set([0, 1, 0], C64::new(500.0, 0.0)).unwrap();
        f.set([0, -1, 0], C64::new(500.0, 0.0)).unwrap();
        let z0 = SpectralField::zeros(&g, true);
        let z2 = SpectralField::zeros(&g, true);
        let v = VelocityState::new([f, z0, z2], 0.0, 1.0).unwrap();
        assert!(matches!(cfg.check_cfl(&v), Err(Error::CflViolation { .. })));
        let calm = VelocityState::zeros(&g, 1.0).unwrap();
        assert!(cfg.check_cfl(&calm).is_ok());
    }
}
