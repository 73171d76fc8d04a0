//! Pressure-structure diagnostics.
//!
//! The rescaled pressure solves -Δ_ε q = ε^{1/2} ∂_α∂_β(v^α v^β) (sum over
//! all α, β). Splitting the double sum into horizontal, cross, and vertical
//! blocks and rewriting the vertical block with ∂₃v³ = -div_h v^h gives
//!
//!   -Δ_ε q = ε^{1/2} [ ∂_i∂_j(v^i v^j) + 2 ∂_i∂₃(v^i v³) - 2 ∂₃(v³ div_h v^h) ],
//!
//! with i, j running over {1, 2}. The cross block carries the factor 2
//! because (i,3) and (3,i) contribute symmetrically. The three inverted
//! pieces q¹ + q² + q³ must reassemble pressure_solve's q to rounding, and
//! their weighted H^{-1/2,s} sizes are what the energy estimates see.

use serde::Serialize;

use crate::error::Result;
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::monitor::AnalyticityState;
use crate::multiplier::Multiplier;
use crate::norms::{aniso_norm_sq_weighted, AnisoNormParams};
use crate::product::dealias_product;
use crate::solver::{pressure_solve, VelocityState};
use crate::C64;

#[derive(Debug, Clone, Serialize)]
pub struct PressureDecompositionDiag {
    /// ‖q¹_Φ‖, ‖q²_Φ‖, ‖q³_Φ‖ in H^{-1/2,s}
    pub norms: [f64; 3],
    /// ‖q¹+q²+q³ - q‖ / ‖q‖ (absolute when q = 0)
    pub sum_rel_defect: f64,
}

/// Invert one assembled right-hand side through (-Δ_ε)^{-1}, mode by mode.
fn invert_delta_eps(
    grid: &Grid,
    eps: f64,
    real: bool,
    rhs: impl Fn([f64; 3], usize, usize, usize) -> C64,
) -> SpectralField {
    let mut out = SpectralField::zeros(grid, real);
    let xi_h = grid.xi_h_table().to_vec();
    let xi_v = grid.xi_v_table().to_vec();
    for ((i1, i2, i3), c) in out.coeffs_mut().indexed_iter_mut() {
        let xi = [xi_h[i1], xi_h[i2], xi_v[i3]];
        let denom = xi[0] * xi[0] + xi[1] * xi[1] + eps * eps * xi[2] * xi[2];
        if denom == 0.0 {
            continue;
        }
        *c = rhs(xi, i1, i2, i3) / denom;
    }
    out
}

/// Split q into the horizontal-horizontal, cross, and vertical-rewritten
/// pieces and report their weighted sizes plus the reassembly defect.
pub fn pressure_decomposition_diag(
    v: &VelocityState,
    st: &AnalyticityState,
) -> Result<PressureDecompositionDiag> {
    let grid = v.grid();
    let eps = v.eps;
    let seps = eps.sqrt();

    let s11 = dealias_product(&v.v[0], &v.v[0])?;
    let s12 = dealias_product(&v.v[0], &v.v[1])?;
    let s22 = dealias_product(&v.v[1], &v.v[1])?;
    let s13 = dealias_product(&v.v[0], &v.v[2])?;
    let s23 = dealias_product(&v.v[1], &v.v[2])?;
    let mut div_h = Multiplier::i_xi(0).apply(&v.v[0])?;
    div_h.axpy(1.0, &Multiplier::i_xi(1).apply(&v.v[1])?)?;
    let s3d = dealias_product(&v.v[2], &div_h)?;

    let real = s11.is_real();
    // ∂_i∂_j → -ξ_iξ_j under the transform
    let q1 = invert_delta_eps(grid, eps, real, |xi, i1, i2, i3| {
        let sum = xi[0] * xi[0] * s11.coeffs()[[i1, i2, i3]]
            + 2.0 * xi[0] * xi[1] * s12.coeffs()[[i1, i2, i3]]
            + xi[1] * xi[1] * s22.coeffs()[[i1, i2, i3]];
        -seps * sum
    });
    let q2 = invert_delta_eps(grid, eps, real, |xi, i1, i2, i3| {
        let sum = xi[0] * s13.coeffs()[[i1, i2, i3]] + xi[1] * s23.coeffs()[[i1, i2, i3]];
        -2.0 * seps * xi[2] * sum
    });
    let q3 = invert_delta_eps(grid, eps, real, |xi, i1, i2, i3| {
        // -2 ε^{1/2} ∂₃ s3d → -2 ε^{1/2} iξ₃ ŝ
        let s = s3d.coeffs()[[i1, i2, i3]];
        C64::new(0.0, -2.0 * seps * xi[2]) * s
    });

    let q = pressure_solve(v);
    let mut sum = q1.clone();
    sum.axpy(1.0, &q2)?;
    sum.axpy(1.0, &q3)?;
    let mut diff = sum;
    diff.axpy(-1.0, &q)?;
    let q_norm = q.l2_norm();
    let sum_rel_defect = if q_norm > 0.0 {
        diff.l2_norm() / q_norm
    } else {
        diff.l2_norm()
    };

    let p = AnisoNormParams::new(-0.5, st.s);
    let radius = st.radius();
    let norms = [
        aniso_norm_sq_weighted(&q1, p, radius).sqrt(),
        aniso_norm_sq_weighted(&q2, p, radius).sqrt(),
        aniso_norm_sq_weighted(&q3, p, radius).sqrt(),
    ];
    Ok(PressureDecompositionDiag {
        norms,
        sum_rel_defect,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierBoundednessReport {
    pub eps: f64,
    /// sup |ξ_iξ_j| / (|ξ_h|² + ε²ξ₃²) over i, j ∈ {1, 2}
    pub sup_grad_grad: f64,
    /// sup ε²ξ₃² / (|ξ_h|² + ε²ξ₃²)
    pub sup_vert_vert: f64,
    /// sup |εξ₃ξ_i| / (|ξ_h|² + ε²ξ₃²)
    pub sup_mixed: f64,
    /// sup |ξ_h|^{3/2}|εξ₃|^{1/2} / (|ξ_h|² + ε²ξ₃²)
    pub sup_smoothing: f64,
}

impl MultiplierBoundednessReport {
    pub fn max_sup(&self) -> f64 {
        self.sup_grad_grad
            .max(self.sup_vert_vert)
            .max(self.sup_mixed)
            .max(self.sup_smoothing)
    }

    pub fn all_bounded(&self, tol: f64) -> bool {
        self.max_sup() <= 1.0 + tol
    }
}

/// Grid suprema of the four pressure-operator symbols. Each is a ratio of a
/// quadratic (or 3/2+1/2 split) numerator against |ξ_h|² + ε²ξ₃², so the
/// exact sup is at most 1 (AM-GM on the mixed and smoothing symbols) and the
/// grid scan should reproduce that uniformly in ε.
pub fn multiplier_boundedness_diag(grid: &Grid, eps: f64) -> MultiplierBoundednessReport {
    let mut report = MultiplierBoundednessReport {
        eps,
        sup_grad_grad: 0.0,
        sup_vert_vert: 0.0,
        sup_mixed: 0.0,
        sup_smoothing: 0.0,
    };
    let xi_h = grid.xi_h_table();
    let xi_v = grid.xi_v_table();
    for &x1 in xi_h {
        for &x2 in xi_h {
            let h_sq = x1 * x1 + x2 * x2;
            for &x3 in xi_v {
                let denom = h_sq + eps * eps * x3 * x3;
                if denom == 0.0 {
                    continue;
                }
                let grad_grad = (x1 * x1).max(x1.abs() * x2.abs()).max(x2 * x2) / denom;
                let vert_vert = eps * eps * x3 * x3 / denom;
                let mixed = (eps * x3).abs() * x1.abs().max(x2.abs()) / denom;
                let smoothing = h_sq.sqrt().powf(1.5) * (eps * x3).abs().sqrt() / denom;
                report.sup_grad_grad = report.sup_grad_grad.max(grad_grad);
                report.sup_vert_vert = report.sup_vert_vert.max(vert_vert);
                report.sup_mixed = report.sup_mixed.max(mixed);
                report.sup_smoothing = report.sup_smoothing.max(smoothing);
            }
        }
    }
    report
}
