//! Frozen empirical constants. Each value was measured once by the ignored
//! `calibrate` test below (grids, trials, and seeds are fixed inside it) and
//! then pinned here at full precision; the generators are deterministic, so
//! a re-measurement on the same configuration must reproduce these digits
//! and any drift points at a real change in the norm or partition code.

/// Two-sided constant for the block-sum form of the anisotropic norm:
/// `aniso_norm_lp / aniso_norm ∈ [1/K, K]` over 200 random analytic-envelope
/// fields at 64³, (σ, s) ∈ {(0,1), (1/2,1), (-1/2,1)}, seed 314159.
pub const NORM_EQUIV_K: f64 = 2.197_950_307_292_259;

/// Same measurement at 32³ (drift under grid doubling must stay small).
pub const NORM_EQUIV_K_32: f64 = 2.275_345_837_154_250_5;

/// Max weighted product-law ratio per analyticity radius (0 and 0.1) over
/// 200 random field pairs at 32³, σ₁ = σ₂ = 1/2, s = 1, seed 271828.
pub const PRODUCT_LAW_BASELINE: [(f64, f64); 2] = [
    (0.0, 1.089_562_668_385_587_5),
    (0.1, 1.055_344_373_633_107_2),
];

/// ℓ¹ sum of the normalized block profile c_{j,k} for one fixed random pair
/// at 32³, σ₁ = σ₂ = 1/2, s = 1, seeds 161803/161804.
pub const CJK_L1_BASELINE: f64 = 0.256_208_401_483_311_8;

/// The seeds the calibration above used; default verification runs reuse them
/// so fresh measurements sample the same distribution the baselines pinned.
pub const NORM_EQUIV_SEED: u64 = 314159;
pub const PRODUCT_LAW_SEED: u64 = 271828;
pub const CJK_SEED: u64 = 161803;
