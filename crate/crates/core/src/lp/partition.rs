//! Dyadic bump functions and their sampling on a grid.
//!
//! χ is a smooth cutoff equal to 1 on {r ≤ 3/4} and 0 on {r ≥ 4/3}; φ(r) =
//! χ(r/2) − χ(r) is supported in [3/4, 8/3]. Both partition identities
//!
//! ```text
//! χ(r) + Σ_{j≥0} φ(2^{-j} r) = 1          (any r ≥ 0)
//! Σ_{k∈ℤ} φ(2^{-k} r) = 1                 (any r > 0)
//! ```
//!
//! telescope term by term: φ(2^{-j}r) = χ(2^{-(j+1)}r) − χ(2^{-j}r), scaling
//! by powers of two is exact, and at most two φ terms are nonzero at any r,
//! so finite sums collapse to a single χ evaluation up to a couple of ulps.
//! Block reconstruction on a grid is therefore exact to rounding, far inside
//! the 1e-12 contract.

use crate::error::{Error, Result};
use crate::grid::Grid;

const LO: f64 = 0.75;
const HI: f64 = 4.0 / 3.0;

fn mollifier(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth monotone step: 0 for t ≤ 0, 1 for t ≥ 1.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = mollifier(t);
    a / (a + mollifier(1.0 - t))
}

/// Low-pass profile: 1 on {r ≤ 3/4}, 0 on {r ≥ 4/3}, smooth between.
pub fn chi(r: f64) -> f64 {
    smooth_step((HI - r.abs()) / (HI - LO))
}

/// Annulus bump φ(r) = χ(r/2) − χ(r), supported in [3/4, 8/3].
pub fn phi(r: f64) -> f64 {
    let r = r.abs();
    chi(0.5 * r) - chi(r)
}

/// Sampled dyadic bumps for one grid: vertical blocks Δ^v_{-1} = χ(|ξ₃|),
/// Δ^v_j = φ(2^{-j}|ξ₃|) for 0 ≤ j ≤ j_max, and homogeneous horizontal blocks
/// Δ̇^h_k = φ(2^{-k}|ξ_h|) for k in k_range (zero at ξ_h = 0).
#[derive(Debug, Clone)]
pub struct DyadicPartition {
    grid: Grid,
    /// index j + 1; entry j = -1 holds χ(|ξ₃|), entries j ≥ 0 hold φ(2^{-j}|ξ₃|)
    vertical_bumps: Vec<Vec<f64>>,
    /// index k - k_min; flattened n_h × n_h tables of φ(2^{-k}|ξ_h|)
    horizontal_bumps: Vec<Vec<f64>>,
    k_min: i32,
    k_max: i32,
}

/// Sample the bumps on every grid mode. The block ranges are chosen so the
/// partition identities hold exactly on all occupied moduli.
pub fn build_partition(grid: &Grid) -> Result<DyadicPartition> {
    let xi_v_max = grid.xi_v_max();
    let xi_h_max = grid.xi_h_max();
    let xi_h_min = grid.xi_h_min_nonzero();

    // smallest j_max with 2^{-(j_max+1)} xi_v_max <= 3/4, so the vertical
    // telescope closes at 1 on every mode
    let mut j_max = 0i32;
    while xi_v_max * 2f64.powi(-(j_max + 1)) > LO {
        j_max += 1;
        if j_max > 200 {
            return Err(Error::GridTooSmallForShell { axis: "vertical" });
        }
    }
    // largest k_min with 2^{-k_min} xi_h_min >= 4/3 and smallest k_max with
    // 2^{-(k_max+1)} xi_h_max <= 3/4
    let mut k_min = 0i32;
    while xi_h_min * 2f64.powi(-k_min) < HI {
        k_min -= 1;
        if k_min < -200 {
            return Err(Error::GridTooSmallForShell { axis: "horizontal" });
        }
    }
    let mut k_max = k_min;
    while xi_h_max * 2f64.powi(-(k_max + 1)) > LO {
        k_max += 1;
        if k_max > 200 {
            return Err(Error::GridTooSmallForShell { axis: "horizontal" });
        }
    }

    let xi_v = grid.xi_v_table();
    let mut vertical_bumps = Vec::with_capacity((j_max + 2) as usize);
    vertical_bumps.push(xi_v.iter().map(|&x| chi(x)).collect());
    for j in 0..=j_max {
        let scale = 2f64.powi(-j);
        vertical_bumps.push(xi_v.iter().map(|&x| phi(scale * x)).collect());
    }

    let n_h = grid.n_h();
    let xi_h = grid.xi_h_table();
    let mut horizontal_bumps = Vec::with_capacity((k_max - k_min + 1) as usize);
    for k in k_min..=k_max {
        let scale = 2f64.powi(-k);
        let mut table = Vec::with_capacity(n_h * n_h);
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let r = (xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2]).sqrt();
                table.push(if r == 0.0 { 0.0 } else { phi(scale * r) });
            }
        }
        horizontal_bumps.push(table);
    }

    Ok(DyadicPartition {
        grid: grid.clone(),
        vertical_bumps,
        horizontal_bumps,
        k_min,
        k_max,
    })
}

impl DyadicPartition {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Highest vertical block index; blocks run j = -1, 0, …, j_max.
    pub fn j_max(&self) -> i32 {
        self.vertical_bumps.len() as i32 - 2
    }

    /// Inclusive horizontal block index range.
    pub fn k_range(&self) -> (i32, i32) {
        (self.k_min, self.k_max)
    }

    /// Sampled vertical bump for block j (length n_v), `None` outside
    /// -1 ..= j_max (those blocks vanish on the grid).
    pub fn vertical_bump(&self, j: i32) -> Option<&[f64]> {
        if !(-1..=self.j_max()).contains(&j) {
            return None;
        }
        Some(&self.vertical_bumps[(j + 1) as usize])
    }

    /// Sampled horizontal bump for block k (flattened n_h × n_h, row-major),
    /// `None` outside k_range.
    pub fn horizontal_bump(&self, k: i32) -> Option<&[f64]> {
        if !(self.k_min..=self.k_max).contains(&k) {
            return None;
        }
        Some(&self.horizontal_bumps[(k - self.k_min) as usize])
    }

    /// Vertical low-pass weights χ(2^{-j}|ξ₃|) = Σ_{j' ≤ j-1} (sampled bump
    /// of block j'), exact by telescoping.
    pub fn vertical_low_weights(&self, j: i32) -> Vec<f64> {
        let scale = 2f64.powi(-j);
        self.grid
            .xi_v_table()
            .iter()
            .map(|&x| if j < 0 { 0.0 } else { chi(scale * x) })
            .collect()
    }

    /// Horizontal low-pass weights χ(2^{-k}|ξ_h|) on ξ_h ≠ 0, zero at ξ_h = 0
    /// (the homogeneous blocks carry no mean).
    pub fn horizontal_low_weights(&self, k: i32) -> Vec<f64> {
        let n_h = self.grid.n_h();
        let xi_h = self.grid.xi_h_table();
        let scale = 2f64.powi(-k);
        let mut table = Vec::with_capacity(n_h * n_h);
        for i1 in 0..n_h {
            for i2 in 0..n_h {
                let r = (xi_h[i1] * xi_h[i1] + xi_h[i2] * xi_h[i2]).sqrt();
                table.push(if r == 0.0 { 0.0 } else { chi(scale * r) });
            }
        }
        table
    }
}
