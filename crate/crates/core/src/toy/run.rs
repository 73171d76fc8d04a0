use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

use super::{toy_rhs, toy_x_norm, ToySpectrum};

/// One sampled instant. `x_norm_weighted` is ‖u_Φ‖_X at the current radius,
/// which is also θ̇; `bound_rhs` is the small-data envelope 2η₀e^{-γt} it is
/// expected to stay under.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToyRow {
    pub t: f64,
    pub theta: f64,
    pub x_norm_weighted: f64,
    pub radius: f64,
    pub bound_rhs: f64,
}

impl ToyRow {
    pub const HEADER: &'static str = "t,theta,x_norm_weighted,radius,bound_rhs";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.t, self.theta, self.x_norm_weighted, self.radius, self.bound_rhs
        )
    }
}

#[derive(Debug, Clone)]
pub struct ToyTrajectory {
    pub rows: Vec<ToyRow>,
    /// ‖e^{a|D|}u₀‖_X, captured before the first step
    pub eta0: f64,
    /// first sample time with θ > a/λ; the run stops there (a finding, not an error)
    pub exhausted_at: Option<f64>,
    /// first time a non-finite coefficient or θ appeared
    pub nonfinite_at: Option<f64>,
    /// tail-decade X-mass fraction of the final state
    pub final_tail_fraction: f64,
    pub final_state: ToySpectrum,
}

impl ToyTrajectory {
    /// max over samples of θ̇ - 2η₀e^{-γt} (≤ 0 when the decay bound holds)
    pub fn max_bound_violation(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.x_norm_weighted - r.bound_rhs)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn final_theta(&self) -> f64 {
        self.rows.last().map(|r| r.theta).unwrap_or(0.0)
    }
}

fn theta_dot(u: &ToySpectrum, theta: f64) -> f64 {
    toy_x_norm(u, u.a_radius - u.lambda * theta)
}

/// Joint RK4 step of (û, θ); the radius weight in θ̇ tracks the stage θ.
fn rk4_step(u: &mut ToySpectrum, dt: f64) {
    let n = u.coeffs().len();
    let theta0 = u.theta;
    let base: Vec<C64> = u.coeffs().to_vec();

    let mut stage = |k_c: &[C64], k_t: f64, frac: f64, out_c: &mut Vec<C64>| -> f64 {
        for i in 0..n {
            u.coeffs_mut()[i] = base[i] + dt * frac * k_c[i];
        }
        u.theta = theta0 + dt * frac * k_t;
        let kc = toy_rhs(u);
        let kt = theta_dot(u, u.theta);
        *out_c = kc;
        kt
    };

    let mut k1c = Vec::new();
    let t1 = stage(&vec![C64::new(0.0, 0.0); n], 0.0, 0.0, &mut k1c);
    let mut k2c = Vec::new();
    let t2 = stage(&k1c, t1, 0.5, &mut k2c);
    let mut k3c = Vec::new();
    let t3 = stage(&k2c, t2, 0.5, &mut k3c);
    let mut k4c = Vec::new();
    let t4 = stage(&k3c, t3, 1.0, &mut k4c);

    for i in 0..n {
        u.coeffs_mut()[i] = base[i] + dt / 6.0 * (k1c[i] + 2.0 * k2c[i] + 2.0 * k3c[i] + k4c[i]);
    }
    u.theta = theta0 + dt / 6.0 * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
}

/// Run the model to `t_end`, sampling every `sample_every` steps (plus the
/// endpoints). Stops early, with the event recorded on the trajectory, when
/// the radius budget is exhausted (θ > a/λ) or a value goes non-finite.
pub fn toy_run(u0: ToySpectrum, dt: f64, t_end: f64, sample_every: usize) -> Result<ToyTrajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParam {
            what: "dt",
            constraint: "> 0",
            got: dt,
        });
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParam {
            what: "t_end",
            constraint: ">= 0",
            got: t_end,
        });
    }
    if sample_every == 0 {
        return Err(Error::InvalidParam {
            what: "sample_every",
            constraint: ">= 1",
            got: 0.0,
        });
    }
    // the linear decay rate sets the stiffness scale
    if dt > 0.1 / u0.gamma {
        return Err(Error::InvalidParam {
            what: "dt",
            constraint: "<= 0.1 / gamma",
            got: dt,
        });
    }

    let eta0 = toy_x_norm(&u0, u0.a_radius);
    let steps = (t_end / dt).round() as usize;

    let mut u = u0;
    let mut rows = Vec::with_capacity(steps / sample_every + 2);
    let mut exhausted_at = None;
    let mut nonfinite_at = None;

    let sample = |u: &ToySpectrum, t: f64| -> ToyRow {
        let radius = u.radius();
        ToyRow {
            t,
            theta: u.theta,
            x_norm_weighted: toy_x_norm(u, radius),
            radius,
            bound_rhs: 2.0 * eta0 * (-u.gamma * t).exp(),
        }
    };

    rows.push(sample(&u, 0.0));
    for step in 1..=steps {
        rk4_step(&mut u, dt);
        let t = step as f64 * dt;
        let stop = if !u.is_finite() {
            nonfinite_at = Some(t);
            true
        } else if u.exhausted() {
            exhausted_at = Some(t);
            true
        } else {
            false
        };
        if stop || step % sample_every == 0 || step == steps {
            rows.push(sample(&u, t));
        }
        if stop {
            break;
        }
    }

    let final_tail_fraction = if u.is_finite() {
        u.tail_fraction(u.radius().max(0.0))
    } else {
        f64::NAN
    };
    Ok(ToyTrajectory {
        rows,
        eta0,
        exhausted_at,
        nonfinite_at,
        final_tail_fraction,
        final_state: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::ToySymbol;

    #[test]
    fn test_toy_run_zero_data_stays_zero() {
        let u0 = ToySpectrum::new(16, 1.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        let traj = toy_run(u0, 0.05, 1.0, 5).unwrap();
        assert!(traj.exhausted_at.is_none());
        assert_eq!(traj.final_theta(), 0.0);
        assert!(traj.rows.iter().all(|r| r.x_norm_weighted == 0.0));
    }

    #[test]
    fn test_toy_run_small_data_decays_under_envelope() {
        let c_quad = super::super::measure_c_quad(64, 12, 7).unwrap();
        let u0 = ToySpectrum::from_decaying_profile(64, 1.0, 0.5, 1e-3, c_quad, ToySymbol::AbsXi)
            .unwrap();
        let traj = toy_run(u0, 0.01, 3.0, 10).unwrap();
        assert!(traj.exhausted_at.is_none());
        assert!(traj.nonfinite_at.is_none());
        // θ̇ ≤ 2η₀ e^{-γt} with a hair of slack for quadrature and rounding
        assert!(
            traj.max_bound_violation() < 1e-9,
            "violation = {}",
            traj.max_bound_violation()
        );
        // θ climbs monotonically toward its η₀/γ ceiling
        for pair in traj.rows.windows(2) {
            assert!(pair[1].theta >= pair[0].theta);
        }
        assert!(traj.final_theta() <= 1e-3);
        assert!(traj.final_tail_fraction < 1e-10);
    }

    #[test]
    fn test_toy_run_large_data_exhausts_radius() {
        let u0 =
            ToySpectrum::from_decaying_profile(64, 1.0, 0.5, 10.0, 1.0, ToySymbol::AbsXi).unwrap();
        let traj = toy_run(u0, 0.002, 2.0, 10).unwrap();
        let t_stop = traj
            .exhausted_at
            .expect("large data must exhaust the radius budget");
        assert!(t_stop < 2.0);
        let last = traj.rows.last().unwrap();
        assert!(last.theta > 0.5 / 4.0);
        assert!(last.radius < 0.0);
    }

    #[test]
    fn test_toy_run_rejects_coarse_dt() {
        let u0 = ToySpectrum::new(8, 5.0, 0.5, 1.0, ToySymbol::AbsXi).unwrap();
        assert!(toy_run(u0, 0.05, 1.0, 1).is_err());
    }
}
