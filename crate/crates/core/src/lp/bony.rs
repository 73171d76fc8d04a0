//! Bony paraproduct decompositions of a dealiased product.
//!
//! Vertical split: fg = T^v_f g + R^v(f,g) with
//!
//! ```text
//! T^v_f g = Σ_j S^v_{j-1} f · Δ^v_j g        (f at least two blocks below g)
//! R^v(f,g) = Σ_j Δ^v_j f · S^v_{j+2} g       (everything else)
//! ```
//!
//! The pair sets {f-block ≤ g-block − 2} and {g-block ≤ f-block + 1} are
//! disjoint and exhaustive, so the two terms reconstruct the product without
//! double counting.
//!
//! Horizontal split: fg = T^h_f g + T^h_g f + R^h(f,g), where the paraproducts
//! use the homogeneous blocks (which carry no ξ_h = 0 content) and R^h picks
//! up the near-diagonal pairs plus both horizontal-mean cross terms:
//!
//! ```text
//! R^h = Σ_k Δ̇^h_k f · (Δ̇^h_{k-1} + Δ̇^h_k + Δ̇^h_{k+1}) g
//!     + mean_h(f) · g + (f − mean_h(f)) · mean_h(g)
//! ```

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::blocks::{apply_horizontal_weights, apply_vertical_weights};
use crate::lp::partition::DyadicPartition;
use crate::product::dealias_product;

fn check_grids(f: &SpectralField, g: &SpectralField, part: &DyadicPartition) -> Result<()> {
    if f.grid() != g.grid() || f.grid() != part.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Keep only the ξ_h = 0 plane (the horizontal mean, still a function of x₃).
fn horizontal_mean(f: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    let n_v = grid.n_v();
    let mut out = SpectralField::zeros(&grid, f.is_real());
    let src = f.coeffs().as_slice().expect("standard layout");
    let dst = out.coeffs_mut().as_slice_mut().expect("standard layout");
    dst[..n_v].copy_from_slice(&src[..n_v]);
    out
}

/// Vertical Bony decomposition; `T + R = dealias_product(f, g)` to rounding.
pub fn bony_vertical(
    f: &SpectralField,
    g: &SpectralField,
    part: &DyadicPartition,
) -> Result<(SpectralField, SpectralField)> {
    check_grids(f, g, part)?;
    let grid = f.grid().clone();
    let real = f.is_real() && g.is_real();
    let mut t = SpectralField::zeros(&grid, real);
    let mut r = SpectralField::zeros(&grid, real);
    for j in -1..=part.j_max() {
        let dg = vertical_bump_apply(g, part, j);
        if j >= 1 {
            let sf = apply_vertical_weights(f, &part.vertical_low_weights(j - 1));
            t.axpy(1.0, &dealias_product(&sf, &dg)?)?;
        }
        let df = vertical_bump_apply(f, part, j);
        let sg = apply_vertical_weights(g, &part.vertical_low_weights(j + 2));
        r.axpy(1.0, &dealias_product(&df, &sg)?)?;
    }
    Ok((t, r))
}

fn vertical_bump_apply(f: &SpectralField, part: &DyadicPartition, j: i32) -> SpectralField {
    match part.vertical_bump(j) {
        Some(w) => apply_vertical_weights(f, w),
        None => SpectralField::zeros(f.grid(), f.is_real()),
    }
}

fn horizontal_bump_apply(f: &SpectralField, part: &DyadicPartition, k: i32) -> SpectralField {
    match part.horizontal_bump(k) {
        Some(w) => apply_horizontal_weights(f, w),
        None => SpectralField::zeros(f.grid(), f.is_real()),
    }
}

/// Horizontal Bony decomposition; the three parts sum to
/// `dealias_product(f, g)` to rounding. Fields whose only content is the
/// horizontal mean contribute exclusively to R.
pub fn bony_horizontal(
    f: &SpectralField,
    g: &SpectralField,
    part: &DyadicPartition,
) -> Result<(SpectralField, SpectralField, SpectralField)> {
    check_grids(f, g, part)?;
    let grid = f.grid().clone();
    let real = f.is_real() && g.is_real();
    let (k_lo, k_hi) = part.k_range();

    let mut t_fg = SpectralField::zeros(&grid, real);
    let mut t_gf = SpectralField::zeros(&grid, real);
    let mut r = SpectralField::zeros(&grid, real);
    for k in k_lo..=k_hi {
        let low_f = apply_horizontal_weights(f, &part.horizontal_low_weights(k - 1));
        let dg = horizontal_bump_apply(g, part, k);
        t_fg.axpy(1.0, &dealias_product(&low_f, &dg)?)?;

        let low_g = apply_horizontal_weights(g, &part.horizontal_low_weights(k - 1));
        let df = horizontal_bump_apply(f, part, k);
        t_gf.axpy(1.0, &dealias_product(&df, &low_g)?)?;

        let mut near = horizontal_bump_apply(g, part, k - 1);
        near.axpy(1.0, &horizontal_bump_apply(g, part, k))?;
        near.axpy(1.0, &horizontal_bump_apply(g, part, k + 1))?;
        r.axpy(1.0, &dealias_product(&df, &near)?)?;
    }
    // mean_h(f)·g + (f − mean_h f)·mean_h(g)
    let mf = horizontal_mean(f);
    let mg = horizontal_mean(g);
    let mut f_prime = f.clone();
    f_prime.axpy(-1.0, &mf)?;
    r.axpy(1.0, &dealias_product(&mf, g)?)?;
    r.axpy(1.0, &dealias_product(&f_prime, &mg)?)?;
    Ok((t_fg, t_gf, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::partition::build_partition;
    use crate::random::real_gaussian_field;
    use crate::{Grid, C64};

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs()
            .iter()
            .zip(b.coeffs().iter())
            .map(|(x, y)| (x - y).norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn test_bony_vertical_constant_times_field() {
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let part = build_partition(&g).unwrap();
        let mut c = SpectralField::zeros(&g, true);
        c.set([0, 0, 0], C64::new(3.0, 0.0)).unwrap();
        let f = real_gaussian_field(&g, 4, |_| 1.0);
        let (t, r) = bony_vertical(&c, &f, &part).unwrap();
        let mut sum = t;
        sum.axpy(1.0, &r).unwrap();
        let want = dealias_product(&c, &f).unwrap();
        assert!(max_diff(&sum, &want) < 1e-12 * want.l2_norm());
    }

    #[test]
    fn test_bony_vertical_cosine_identity() {
        // f = g = 2cos(x₃): product is 2 + 2cos(2x₃)
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let part = build_partition(&g).unwrap();
        let mut f = SpectralField::zeros(&g, true);
        f.set([0, 0, 1], C64::new(1.0, 0.0)).unwrap();
        f.set([0, 0, -1], C64::new(1.0, 0.0)).unwrap();
        let (t, r) = bony_vertical(&f, &f, &part).unwrap();
        let mut sum = t;
        sum.axpy(1.0, &r).unwrap();
        assert!((sum.get([0, 0, 0]).unwrap() - C64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((sum.get([0, 0, 2]).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-13);
        assert!((sum.get([0, 0, -2]).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn test_bony_vertical_reconstructs_random_products() {
        let g = Grid::new(16, 32, 1.0, 2.0).unwrap();
        let part = build_partition(&g).unwrap();
        for seed in 0..5 {
            let f = real_gaussian_field(&g, 100 + seed, |_| 1.0);
            let h = real_gaussian_field(&g, 200 + seed, |_| 1.0);
            let (t, r) = bony_vertical(&f, &h, &part).unwrap();
            let mut sum = t;
            sum.axpy(1.0, &r).unwrap();
            let want = dealias_product(&f, &h).unwrap();
            let rel = max_diff(&sum, &want) / want.l2_norm();
            assert!(rel < 1e-12, "seed {seed}: relative defect {rel:e}");
        }
    }

    #[test]
    fn test_bony_horizontal_reconstructs_and_routes_mean_to_r() {
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let part = build_partition(&g).unwrap();
        // f with only ξ_h = 0 content: T parts must vanish, R carries all
        let mut f = SpectralField::zeros(&g, true);
        f.set([0, 0, 2], C64::new(1.0, 0.0)).unwrap();
        f.set([0, 0, -2], C64::new(1.0, 0.0)).unwrap();
        let h = real_gaussian_field(&g, 7, |_| 1.0);
        let (t_fh, t_hf, r) = bony_horizontal(&f, &h, &part).unwrap();
        assert_eq!(t_fh.l2_norm(), 0.0);
        let want = dealias_product(&f, &h).unwrap();
        let mut sum = t_fh;
        sum.axpy(1.0, &t_hf).unwrap();
        sum.axpy(1.0, &r).unwrap();
        assert!(max_diff(&sum, &want) < 1e-12 * want.l2_norm());

        // generic random pair
        let a = real_gaussian_field(&g, 8, |_| 1.0);
        let b = real_gaussian_field(&g, 9, |_| 1.0);
        let (t_ab, t_ba, r_ab) = bony_horizontal(&a, &b, &part).unwrap();
        let want_ab = dealias_product(&a, &b).unwrap();
        let mut sum_ab = t_ab;
        sum_ab.axpy(1.0, &t_ba).unwrap();
        sum_ab.axpy(1.0, &r_ab).unwrap();
        let rel = max_diff(&sum_ab, &want_ab) / want_ab.l2_norm();
        assert!(rel < 1e-12, "relative defect {rel:e}");
    }

    #[test]
    fn test_bony_horizontal_cosine_identity_and_zero_factor() {
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let part = build_partition(&g).unwrap();
        let mut f = SpectralField::zeros(&g, true);
        f.set([1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        f.set([-1, 0, 0], C64::new(1.0, 0.0)).unwrap();
        let (t_ff, t_ff2, r) = bony_horizontal(&f, &f, &part).unwrap();
        let mut sum = t_ff;
        sum.axpy(1.0, &t_ff2).unwrap();
        sum.axpy(1.0, &r).unwrap();
        // (2cos x₁)² = 2 + 2cos(2x₁)
        assert!((sum.get([0, 0, 0]).unwrap() - C64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((sum.get([2, 0, 0]).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-13);

        let z = SpectralField::zeros(&g, true);
        let (t1, t2, r0) = bony_horizontal(&f, &z, &part).unwrap();
        assert_eq!(t1.l2_norm(), 0.0);
        assert_eq!(t2.l2_norm(), 0.0);
        assert_eq!(r0.l2_norm(), 0.0);
    }

    #[test]
    fn test_bony_grid_mismatch_is_an_error() {
        let g1 = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let g2 = Grid::new(16, 32, 1.0, 1.0).unwrap();
        let part = build_partition(&g1).unwrap();
        let f = SpectralField::zeros(&g1, true);
        let h = SpectralField::zeros(&g2, true);
        assert!(matches!(
            bony_vertical(&f, &h, &part),
            Err(Error::GridMismatch)
        ));
    }
}
