//! One-dimensional damped quadratic model
//!
//!   ∂_t u + γu + a(D)(u²) = 0,   a(ξ) ∈ {|ξ|, iξ},
//!
//! on modes ξ ∈ [-M, M], carrying its own analyticity radius a - λθ with
//! θ̇ = ‖u_Φ‖_X = Σ e^{(a-λθ)|ξ|}|û(ξ)|. The whole argument rests on the
//! discrete triangle estimate Σ|ξ|(|û|*|û|)(ξ) ≤ 2(Σ|ξ||û|)(Σ|û|), whose
//! best constant C_quad is measured empirically and sets λ = 4·C_quad.

mod run;

pub use run::{toy_run, ToyRow, ToyTrajectory};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ToySymbol {
    /// a(ξ) = |ξ|
    AbsXi,
    /// a(ξ) = iξ
    IXi,
}

#[derive(Debug, Clone)]
pub struct ToySpectrum {
    /// coefficients for ξ ∈ [-M, M], stored at index ξ + M
    coeffs: Vec<C64>,
    pub max_mode: usize,
    pub gamma: f64,
    pub a_radius: f64,
    pub lambda: f64,
    pub theta: f64,
    pub c_quad: f64,
    pub symbol: ToySymbol,
}

impl ToySpectrum {
    pub fn new(
        max_mode: usize,
        gamma: f64,
        a_radius: f64,
        c_quad: f64,
        symbol: ToySymbol,
    ) -> Result<Self> {
        if max_mode == 0 {
            return Err(Error::InvalidParam {
                what: "max_mode",
                constraint: ">= 1",
                got: 0.0,
            });
        }
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam {
                what: "gamma",
                constraint: "> 0",
                got: gamma,
            });
        }
        if !(a_radius > 0.0) {
            return Err(Error::InvalidParam {
                what: "a_radius",
                constraint: "> 0",
                got: a_radius,
            });
        }
        if !(c_quad > 0.0) {
            return Err(Error::InvalidParam {
                what: "c_quad",
                constraint: "> 0",
                got: c_quad,
            });
        }
        Ok(ToySpectrum {
            coeffs: vec![C64::new(0.0, 0.0); 2 * max_mode + 1],
            max_mode,
            gamma,
            a_radius,
            lambda: 4.0 * c_quad,
            theta: 0.0,
            c_quad,
            symbol,
        })
    }

    /// Real initial data with the profile e^{-2a|ξ|}, rescaled so that
    /// ‖e^{a|D|}u₀‖_X equals `eta0` (up to rounding, by homogeneity).
    pub fn from_decaying_profile(
        max_mode: usize,
        gamma: f64,
        a_radius: f64,
        eta0: f64,
        c_quad: f64,
        symbol: ToySymbol,
    ) -> Result<Self> {
        if !(eta0 > 0.0) {
            return Err(Error::InvalidParam {
                what: "eta0",
                constraint: "> 0",
                got: eta0,
            });
        }
        let mut u = ToySpectrum::new(max_mode, gamma, a_radius, c_quad, symbol)?;
        let m = max_mode as i64;
        for xi in -m..=m {
            let amp = (-2.0 * a_radius * xi.abs() as f64).exp();
            u.set(xi, C64::new(amp, 0.0));
        }
        let current = toy_x_norm(&u, a_radius);
        let scale = eta0 / current;
        for c in u.coeffs.iter_mut() {
            *c *= scale;
        }
        Ok(u)
    }

    pub fn get(&self, xi: i64) -> C64 {
        self.coeffs[(xi + self.max_mode as i64) as usize]
    }

    pub fn set(&mut self, xi: i64, value: C64) {
        self.coeffs[(xi + self.max_mode as i64) as usize] = value;
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn radius(&self) -> f64 {
        self.a_radius - self.lambda * self.theta
    }

    pub fn exhausted(&self) -> bool {
        self.theta > self.a_radius / self.lambda
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite()
            && self
                .coeffs
                .iter()
                .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Fraction of the ‖·‖_X mass (at radius r) in the last tenth of the
    /// resolved band, |ξ| > 9M/10: the truncation-adequacy monitor. Content
    /// there means the cutoff is shaping the solution.
    pub fn tail_fraction(&self, r: f64) -> f64 {
        let total = toy_x_norm(self, r);
        if total == 0.0 {
            return 0.0;
        }
        let cut = 9 * self.max_mode as i64 / 10;
        let m = self.max_mode as i64;
        let mut tail = 0.0;
        for xi in -m..=m {
            if xi.abs() > cut {
                tail += (r * xi.abs() as f64).exp() * self.get(xi).norm();
            }
        }
        tail / total
    }
}

/// `Σ_ξ e^{r|ξ|} |û(ξ)|`. Callers pass r ≥ 0 (the weighted norms of the
/// bootstrap); the formula itself is defined for any r.
pub fn toy_x_norm(u: &ToySpectrum, weight_radius: f64) -> f64 {
    let m = u.max_mode as i64;
    let mut total = 0.0;
    for xi in -m..=m {
        total += (weight_radius * xi.abs() as f64).exp() * u.get(xi).norm();
    }
    total
}

/// Truncated convolution (û*û)(ξ) = Σ_η û(η)û(ξ-η) over η, ξ-η ∈ [-M, M].
fn convolve_truncated(coeffs: &[C64], max_mode: usize) -> Vec<C64> {
    let m = max_mode as i64;
    let mut out = vec![C64::new(0.0, 0.0); coeffs.len()];
    for xi in -m..=m {
        let lo = (-m).max(xi - m);
        let hi = m.min(xi + m);
        let mut acc = C64::new(0.0, 0.0);
        for eta in lo..=hi {
            acc += coeffs[(eta + m) as usize] * coeffs[(xi - eta + m) as usize];
        }
        out[(xi + m) as usize] = acc;
    }
    out
}

/// Tendency -γû(ξ) - a(ξ)(û*û)(ξ).
pub fn toy_rhs(u: &ToySpectrum) -> Vec<C64> {
    let m = u.max_mode as i64;
    let conv = convolve_truncated(&u.coeffs, u.max_mode);
    let mut out = vec![C64::new(0.0, 0.0); u.coeffs.len()];
    for xi in -m..=m {
        let idx = (xi + m) as usize;
        let a = match u.symbol {
            ToySymbol::AbsXi => C64::new(xi.abs() as f64, 0.0),
            ToySymbol::IXi => C64::new(0.0, xi as f64),
        };
        out[idx] = -u.gamma * u.coeffs[idx] - a * conv[idx];
    }
    out
}

/// Ratio Σ|ξ|(|û|*|û|)(ξ) / [2(Σ|ξ||û|)(Σ|û|)] for one field; at most 1 by
/// the triangle inequality |ξ| ≤ |ξ-η| + |η|, with equality for one-sided
/// spectra.
pub fn quad_estimate_ratio(u: &ToySpectrum) -> Result<f64> {
    let m = u.max_mode as i64;
    let abs_coeffs: Vec<C64> = u.coeffs.iter().map(|c| C64::new(c.norm(), 0.0)).collect();
    let conv = convolve_truncated(&abs_coeffs, u.max_mode);
    let mut num = 0.0;
    let mut first_moment = 0.0;
    let mut mass = 0.0;
    for xi in -m..=m {
        let idx = (xi + m) as usize;
        num += xi.abs() as f64 * conv[idx].re;
        first_moment += xi.abs() as f64 * abs_coeffs[idx].re;
        mass += abs_coeffs[idx].re;
    }
    let den = 2.0 * first_moment * mass;
    if den == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok(num / den)
}

/// Measured best constant of the quadratic estimate: sup of the ratio over
/// one-sided single modes (the exact equality case), random Hermitian fields
/// under several decay profiles, and flat fields.
pub fn measure_c_quad(max_mode: usize, trials: u32, seed: u64) -> Result<f64> {
    use rand::Rng;

    let mut sup = 0.0f64;
    let mut probe = ToySpectrum::new(max_mode, 1.0, 1.0, 1.0, ToySymbol::AbsXi)?;

    // one-sided single mode: |ξ| ≤ |ξ-η| + |η| is an equality on its support
    for xi in [1i64, (max_mode as i64 / 2).max(1)] {
        for c in probe.coeffs_mut().iter_mut() {
            *c = C64::new(0.0, 0.0);
        }
        probe.set(xi, C64::new(1.0, 0.0));
        sup = sup.max(quad_estimate_ratio(&probe)?);
    }

    let mut rng = crate::random::seeded_rng(seed);
    let decays = [0.0, 0.05, 0.5];
    for t in 0..trials {
        let decay = decays[t as usize % decays.len()];
        for c in probe.coeffs_mut().iter_mut() {
            *c = C64::new(0.0, 0.0);
        }
        let m = max_mode as i64;
        for xi in 1..=m {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            let amp = (-decay * xi as f64).exp();
            probe.set(xi, C64::new(re * amp, im * amp));
        }
        for xi in 1..=m {
            let c = probe.get(xi);
            probe.set(-xi, c.conj());
        }
        probe.set(0, C64::new(rng.gen_range(-1.0..1.0), 0.0));
        sup = sup.max(quad_estimate_ratio(&probe)?);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_toy_rhs_single_mode_oracle() {
        let mut u = ToySpectrum::new(8, 2.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        let alpha = 0.3;
        u.set(1, C64::new(alpha, 0.0));
        let rhs = toy_rhs(&u);
        let at = |xi: i64| rhs[(xi + 8) as usize];
        assert!((at(1).re + 2.0 * alpha).abs() < 1e-15);
        assert!((at(2).re + 2.0 * alpha * alpha).abs() < 1e-15);
        assert_eq!(at(0), C64::new(0.0, 0.0));
        assert_eq!(at(3), C64::new(0.0, 0.0));

        let zero = ToySpectrum::new(8, 1.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        assert!(toy_rhs(&zero).iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn test_toy_rhs_preserves_hermitian_symmetry() {
        for symbol in [ToySymbol::AbsXi, ToySymbol::IXi] {
            let mut u = ToySpectrum::new(6, 1.0, 0.5, 1.0, symbol).unwrap();
            u.set(0, C64::new(0.4, 0.0));
            u.set(1, C64::new(0.2, -0.1));
            u.set(-1, C64::new(0.2, 0.1));
            u.set(3, C64::new(-0.05, 0.3));
            u.set(-3, C64::new(-0.05, -0.3));
            let rhs = toy_rhs(&u);
            for xi in 0..=6i64 {
                let plus = rhs[(xi + 6) as usize];
                let minus = rhs[(-xi + 6) as usize];
                assert!((plus - minus.conj()).norm() < 1e-15, "xi = {xi}");
            }
        }
    }

    #[test]
    fn test_toy_x_norm_values() {
        let mut u = ToySpectrum::new(8, 1.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        assert_eq!(toy_x_norm(&u, 0.3), 0.0);
        u.set(2, C64::new(0.3, 0.0));
        assert!((toy_x_norm(&u, 0.1) - 0.3 * 0.2f64.exp()).abs() < 1e-16);
        u.set(-2, C64::new(0.3, 0.0));
        assert!((toy_x_norm(&u, 0.1) - 0.6 * 0.2f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn test_toy_quad_estimate_holds_and_c_quad_is_one() {
        let c = measure_c_quad(32, 12, 9).unwrap();
        assert!(c <= 1.0 + 1e-13, "c_quad = {c}");
        assert!(
            c >= 1.0 - 1e-13,
            "equality case should be attained, got {c}"
        );

        let mut u = ToySpectrum::new(16, 1.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        assert!(matches!(quad_estimate_ratio(&u), Err(Error::ZeroInput)));
        u.set(4, C64::new(1.0, 0.0));
        assert!((quad_estimate_ratio(&u).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn test_toy_profile_hits_target_norm_with_small_tail() {
        let u =
            ToySpectrum::from_decaying_profile(64, 1.0, 0.5, 1e-3, 1.0, ToySymbol::AbsXi).unwrap();
        let got = toy_x_norm(&u, u.a_radius);
        assert!((got - 1e-3).abs() < 1e-15);
        assert!(u.tail_fraction(u.a_radius) < 1e-10);
        assert_eq!(u.lambda, 4.0);
    }
}
