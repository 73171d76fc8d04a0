//! Empirical verifiers for the inequality layer: dyadic-shell derivative
//! bounds, the weighted product law, and normalized block profiles of a
//! product. Constants are measured, not proven; reports carry per-trial
//! records so envelopes can be compared across grids and seeds.

use ndarray::Array3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::lp::partition::DyadicPartition;
use crate::multiplier::Multiplier;
use crate::norms::{aniso_norm, aniso_norm_sq_weighted, AnisoNormParams};
use crate::product::dealias_product;
use crate::random::{
    analytic_envelope, coherent_shell_field, real_gaussian_field, shell_field,
    wave_packet_shell_field,
};
use crate::C64;

/// Normalized-counting-measure L¹ norm of collocation samples.
fn l1_norm(spatial: &Array3<C64>) -> f64 {
    spatial.iter().map(|c| c.norm()).sum::<f64>() / spatial.len() as f64
}

fn linf_norm(spatial: &Array3<C64>) -> f64 {
    spatial.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

const PQ_PAIRS: [(&str, &str); 3] = [("2", "inf"), ("2", "2"), ("1", "2")];
const ALPHAS: [[i64; 3]; 3] = [[0, 0, 0], [1, 0, 0], [0, 0, 1]];

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinRecord {
    pub j: i32,
    pub trial_seed: u64,
    pub p: &'static str,
    pub q: &'static str,
    pub alpha: [i64; 3],
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinEnvelope {
    pub j: i32,
    pub p: &'static str,
    pub q: &'static str,
    pub alpha: [i64; 3],
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinReport {
    pub n_h: usize,
    pub n_v: usize,
    pub trials: u32,
    pub seed: u64,
    pub records: Vec<BernsteinRecord>,
    pub envelopes: Vec<BernsteinEnvelope>,
}

impl BernsteinReport {
    /// For every (p, q, α) family: each doubling j → j+1 moves the envelope
    /// by at most `factor` in either direction.
    pub fn stable_within(&self, factor: f64) -> bool {
        for (p, q) in PQ_PAIRS {
            for alpha in ALPHAS {
                let per_j: Vec<f64> = self
                    .envelopes
                    .iter()
                    .filter(|e| e.p == p && e.q == q && e.alpha == alpha)
                    .map(|e| e.max_ratio)
                    .collect();
                if per_j.is_empty() {
                    return false;
                }
                for w in per_j.windows(2) {
                    if !(w[1] <= factor * w[0] && w[0] <= factor * w[1]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Ratios ‖∂^α f‖_{L^q} / (2^{j(|α| + 3(1/p − 1/q))} ‖f‖_{L^p}) over random
/// fields supported in the isotropic shell 2^j·[3/4, 8/3], for every shell
/// that fits the grid whole.
pub fn verify_bernstein(grid: &Grid, trials: u32, seed: u64) -> Result<BernsteinReport> {
    if trials == 0 {
        return Err(Error::InvalidParam {
            what: "trials",
            constraint: ">= 1",
            got: 0.0,
        });
    }
    let xi_cap = grid
        .xi_h_max()
        .min(grid.xi_v_max())
        .min((grid.n_h() / 2) as f64 / grid.l_h());
    let mut shells = Vec::new();
    // j = 0's annulus holds barely two lattice rings: concentration there is
    // a discreteness artifact, not dyadic structure, so the sweep starts at
    // the first genuinely annular shell
    let mut j = 1;
    while 2f64.powi(j) * (8.0 / 3.0) <= xi_cap {
        shells.push(j);
        j += 1;
    }
    if shells.is_empty() {
        return Err(Error::GridTooSmallForShell { axis: "isotropic" });
    }

    let mut records = Vec::new();
    let mut envelopes = Vec::new();
    for &j in &shells {
        let mut max_ratio = vec![0.0f64; PQ_PAIRS.len() * ALPHAS.len()];
        // trials 0 and 1 are the deterministic near-extremal profiles
        // (recorded with seeds 0 and 1): the coherent focusing field for the
        // L²-based pairs and the single-scale wave packet for the L¹-based
        // ones. An envelope of purely generic Gaussian fields would decay
        // with j and say nothing about the constant.
        for t in 0..trials + 2 {
            let (trial_seed, f) = match t {
                0 => (0, coherent_shell_field(grid, j)),
                1 => (1, wave_packet_shell_field(grid, j)),
                _ => {
                    let trial_seed = seed
                        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                        .wrapping_add((j as u64) << 32)
                        .wrapping_add(t as u64 - 2);
                    (trial_seed, shell_field(grid, trial_seed, j))
                }
            };
            let l2_f = f.l2_norm();
            if l2_f == 0.0 {
                continue;
            }
            let spatial_f = f.to_spatial();
            let l1_f = l1_norm(&spatial_f);
            for (ai, alpha) in ALPHAS.iter().enumerate() {
                let df = match alpha {
                    [0, 0, 0] => f.clone(),
                    [1, 0, 0] => Multiplier::i_xi(0).apply(&f)?,
                    _ => Multiplier::i_xi(2).apply(&f)?,
                };
                let abs_alpha = (alpha[0] + alpha[1] + alpha[2]) as f64;
                let l2_df = df.l2_norm();
                let linf_df = linf_norm(&df.to_spatial());
                for (pi, (p, q)) in PQ_PAIRS.iter().enumerate() {
                    let (num, den_norm, inv_p_minus_inv_q) = match (*p, *q) {
                        ("2", "inf") => (linf_df, l2_f, 0.5),
                        ("2", "2") => (l2_df, l2_f, 0.0),
                        _ => (l2_df, l1_f, 0.5),
                    };
                    let scale = 2f64.powf((j as f64) * (abs_alpha + 3.0 * inv_p_minus_inv_q));
                    let ratio = num / (scale * den_norm);
                    records.push(BernsteinRecord {
                        j,
                        trial_seed,
                        p,
                        q,
                        alpha: *alpha,
                        ratio,
                    });
                    let slot = ai * PQ_PAIRS.len() + pi;
                    max_ratio[slot] = max_ratio[slot].max(ratio);
                }
            }
        }
        for (ai, alpha) in ALPHAS.iter().enumerate() {
            for (pi, (p, q)) in PQ_PAIRS.iter().enumerate() {
                envelopes.push(BernsteinEnvelope {
                    j,
                    p,
                    q,
                    alpha: *alpha,
                    max_ratio: max_ratio[ai * PQ_PAIRS.len() + pi],
                });
            }
        }
    }
    Ok(BernsteinReport {
        n_h: grid.n_h(),
        n_v: grid.n_v(),
        trials,
        seed,
        records,
        envelopes,
    })
}

/// Two-sided constant K ≥ 1 with `aniso_norm_lp / aniso_norm ∈ [1/K, K]`
/// over random analytic-envelope fields and (σ, s) ∈ {(0,1), (1/2,1),
/// (-1/2,1)}; K is the larger of the max ratio and the reciprocal of the min.
pub fn norm_equivalence_constant(grid: &Grid, trials: u32, seed: u64) -> Result<f64> {
    use crate::lp::blocks::aniso_norm_lp;
    use crate::lp::partition::build_partition;

    if trials == 0 {
        return Err(Error::InvalidParam {
            what: "trials",
            constraint: ">= 1",
            got: 0.0,
        });
    }
    let part = build_partition(grid)?;
    let env = analytic_envelope(0.05, 1.0);
    let mut k = 1.0f64;
    for t in 0..trials {
        let f = real_gaussian_field(grid, seed.wrapping_add(t as u64), &env);
        for sigma in [0.0, 0.5, -0.5] {
            let p = AnisoNormParams::new(sigma, 1.0);
            let direct = aniso_norm(&f, p);
            if direct == 0.0 {
                return Err(Error::ZeroInput);
            }
            let ratio = aniso_norm_lp(&f, p, &part) / direct;
            k = k.max(ratio).max(1.0 / ratio);
        }
    }
    Ok(k)
}

/// One weighted product-law ratio
/// `‖(ab)_Ψ‖_{H^{σ₁+σ₂−1,s}} / (‖a_Ψ‖_{H^{σ₁,s}} ‖b_Ψ‖_{H^{σ₂,s}})`
/// with Ψ = radius·|ξ₃| (subadditive, so the weighted law is expected to
/// hold with the same constant).
pub fn product_law_ratio(
    a: &SpectralField,
    b: &SpectralField,
    p1: AnisoNormParams,
    p2: AnisoNormParams,
    radius: f64,
) -> Result<f64> {
    let prod = dealias_product(a, b)?;
    let pp = AnisoNormParams::new(p1.sigma + p2.sigma - 1.0, p1.s);
    let num = aniso_norm_sq_weighted(&prod, pp, radius).sqrt();
    let da = aniso_norm_sq_weighted(a, p1, radius).sqrt();
    let db = aniso_norm_sq_weighted(b, p2, radius).sqrt();
    if da == 0.0 || db == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok(num / (da * db))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductLawRecord {
    pub trial: u32,
    pub seed_a: u64,
    pub seed_b: u64,
    pub radius: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductLawReport {
    pub sigma1: f64,
    pub sigma2: f64,
    pub s: f64,
    pub n_h: usize,
    pub n_v: usize,
    pub trials: u32,
    pub seed: u64,
    pub records: Vec<ProductLawRecord>,
    /// (radius, max ratio over trials)
    pub envelope: Vec<(f64, f64)>,
    /// max relative change of one fixed ratio under amplitude scalings
    /// 1e-3 and 1e3 of either factor; exact homogeneity makes this rounding-level
    pub amplitude_invariance_defect: f64,
}

fn validate_product_hypotheses(p1: AnisoNormParams, p2: AnisoNormParams) -> Result<()> {
    if !(p1.sigma < 1.0) {
        return Err(Error::InvalidParam {
            what: "sigma1",
            constraint: "< 1",
            got: p1.sigma,
        });
    }
    if !(p2.sigma < 1.0) {
        return Err(Error::InvalidParam {
            what: "sigma2",
            constraint: "< 1",
            got: p2.sigma,
        });
    }
    if !(p1.sigma + p2.sigma > 0.0) {
        return Err(Error::InvalidParam {
            what: "sigma1 + sigma2",
            constraint: "> 0",
            got: p1.sigma + p2.sigma,
        });
    }
    if !(p1.s > 0.5) {
        return Err(Error::InvalidParam {
            what: "s",
            constraint: "> 1/2",
            got: p1.s,
        });
    }
    if p1.s != p2.s {
        return Err(Error::InvalidParam {
            what: "s",
            constraint: "equal in both parameter sets",
            got: p2.s,
        });
    }
    Ok(())
}

/// Product-law ratios over random analytic-type fields (Gaussian modes under
/// the envelope e^{-0.2|ξ₃|}(1+|ξ|²)^{-2}, no horizontal mean), at analyticity
/// radii 0 and 0.1.
pub fn verify_product_law(
    grid: &Grid,
    p1: AnisoNormParams,
    p2: AnisoNormParams,
    trials: u32,
    seed: u64,
) -> Result<ProductLawReport> {
    validate_product_hypotheses(p1, p2)?;
    if trials == 0 {
        return Err(Error::InvalidParam {
            what: "trials",
            constraint: ">= 1",
            got: 0.0,
        });
    }
    let radii = [0.0, 0.1];
    let envelope_fn = analytic_envelope(0.1, 2.0);
    let mut records = Vec::new();
    let mut env_max = [0.0f64; 2];
    let mut first_pair: Option<(SpectralField, SpectralField)> = None;
    for t in 0..trials {
        let seed_a = seed
            .wrapping_mul(0x2545_f491_4f6c_dd1d)
            .wrapping_add(2 * t as u64);
        let seed_b = seed_a.wrapping_add(1);
        let a = real_gaussian_field(grid, seed_a, &envelope_fn);
        let b = real_gaussian_field(grid, seed_b, &envelope_fn);
        for (ri, &radius) in radii.iter().enumerate() {
            let ratio = product_law_ratio(&a, &b, p1, p2, radius)?;
            env_max[ri] = env_max[ri].max(ratio);
            records.push(ProductLawRecord {
                trial: t,
                seed_a,
                seed_b,
                radius,
                ratio,
            });
        }
        if first_pair.is_none() {
            first_pair = Some((a, b));
        }
    }

    let (a0, b0) = first_pair.expect("at least one trial");
    let base = product_law_ratio(&a0, &b0, p1, p2, 0.1)?;
    let mut defect = 0.0f64;
    for alpha in [1e-3, 1e3] {
        let mut a_scaled = a0.clone();
        a_scaled.scale(alpha);
        let ra = product_law_ratio(&a_scaled, &b0, p1, p2, 0.1)?;
        let mut b_scaled = b0.clone();
        b_scaled.scale(alpha);
        let rb = product_law_ratio(&a0, &b_scaled, p1, p2, 0.1)?;
        defect = defect
            .max((ra / base - 1.0).abs())
            .max((rb / base - 1.0).abs());
    }

    Ok(ProductLawReport {
        sigma1: p1.sigma,
        sigma2: p2.sigma,
        s: p1.s,
        n_h: grid.n_h(),
        n_v: grid.n_v(),
        trials,
        seed,
        records,
        envelope: radii.iter().cloned().zip(env_max).collect(),
        amplitude_invariance_defect: defect,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CjkProfile {
    pub j_min: i32,
    pub k_min: i32,
    /// entry [j - j_min][k - k_min]
    pub matrix: Vec<Vec<f64>>,
    pub l1_sum: f64,
}

/// Normalized block profile of a dealiased product:
/// `c_{j,k} = ‖Δ^v_j Δ̇^h_k(ab)‖_{L²} / (2^{(1−σ₁−σ₂)k} 2^{−js} ‖a‖_{H^{σ₁,s}} ‖b‖_{H^{σ₂,s}})`.
/// Exactly invariant under independent rescaling of a and b.
pub fn cjk_profile(
    a: &SpectralField,
    b: &SpectralField,
    p1: AnisoNormParams,
    p2: AnisoNormParams,
    part: &DyadicPartition,
) -> Result<CjkProfile> {
    validate_product_hypotheses(p1, p2)?;
    if a.grid() != b.grid() || a.grid() != part.grid() {
        return Err(Error::GridMismatch);
    }
    let na = aniso_norm(a, p1);
    let nb = aniso_norm(b, p2);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroInput);
    }
    let prod = dealias_product(a, b)?;
    let grid = a.grid();
    let n_v = grid.n_v();
    let data = prod.coeffs().as_slice().expect("standard layout");
    let (k_lo, k_hi) = part.k_range();
    let j_lo = -1;
    let j_hi = part.j_max();
    let mut matrix = vec![vec![0.0f64; (k_hi - k_lo + 1) as usize]; (j_hi - j_lo + 1) as usize];
    let mut l1_sum = 0.0;
    for j in j_lo..=j_hi {
        let wv = part.vertical_bump(j).expect("in range");
        for k in k_lo..=k_hi {
            let wh = part.horizontal_bump(k).expect("in range");
            let mut block_sq = 0.0;
            for (lane, &h) in data.chunks_exact(n_v).zip(wh) {
                if h == 0.0 {
                    continue;
                }
                let mut lane_sum = 0.0;
                for (c, &v) in lane.iter().zip(wv) {
                    if v != 0.0 {
                        lane_sum += (v * h).powi(2) * c.norm_sqr();
                    }
                }
                block_sq += lane_sum;
            }
            let denom = 2f64.powf((1.0 - p1.sigma - p2.sigma) * k as f64)
                * 2f64.powf(-p1.s * j as f64)
                * na
                * nb;
            let c_jk = block_sq.sqrt() / denom;
            matrix[(j - j_lo) as usize][(k - k_lo) as usize] = c_jk;
            l1_sum += c_jk;
        }
    }
    Ok(CjkProfile {
        j_min: j_lo,
        k_min: k_lo,
        matrix,
        l1_sum,
    })
}
