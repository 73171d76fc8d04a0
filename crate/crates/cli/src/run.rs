//! The orchestrated run: stepper and radius monitor advance in lockstep, the
//! audit history accumulates every step, and samples stream to CSV. Floats are
//! written with `{}` formatting throughout, so a repeated run with the same
//! config and seed reproduces the files byte for byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anse_core::checkpoint::{load_checkpoint, save_checkpoint};
use anse_core::monitor::{
    advance_monitor, audit, theta_dot, AnalyticityState, AuditHistory, SampleRow,
};
use anse_core::norms::aniso_norm_sq_vec;
use anse_core::solver::{step, SolverConfig, StepOrder, VelocityState};
use anse_core::AnisoNormParams;
use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;
use crate::init::make_initial_data;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    /// Reached t_end with θ ≤ 4η² and Ψ ≤ 2η² at every sample.
    Success,
    /// Reached t_end (or stopped) but a continuation threshold failed somewhere.
    ContinuationViolated,
    /// θ crossed a/λ: the weight budget is spent and the run stops.
    RadiusExhausted,
    /// Non-finite values or energy growth past 10x the initial energy.
    BlowUp,
}

impl RunOutcome {
    pub fn exit_code(self) -> i32 {
        match self {
            RunOutcome::Success => 0,
            RunOutcome::ContinuationViolated => 2,
            RunOutcome::RadiusExhausted => 3,
            RunOutcome::BlowUp => 4,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            RunOutcome::Success => "success",
            RunOutcome::ContinuationViolated => "continuation violated",
            RunOutcome::RadiusExhausted => "radius exhausted",
            RunOutcome::BlowUp => "blow-up",
        }
    }
}

/// What a finished run hands back to the caller (sweeps aggregate these).
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub outcome: RunOutcome,
    pub final_t: f64,
    pub final_theta: f64,
    pub final_psi: f64,
    pub fitted_c0: f64,
    pub fitted_c1: f64,
    pub series_path: PathBuf,
    pub report_path: PathBuf,
}

#[derive(Debug, Serialize)]
struct FinalReport {
    outcome: RunOutcome,
    exit_code: i32,
    t_final: f64,
    steps_taken: usize,
    theta_final: f64,
    psi_final: f64,
    radius_final: f64,
    eta: f64,
    /// θ(t) ≤ 4η² and Ψ(t) ≤ 2η² at every recorded step
    continuation_held_throughout: bool,
    /// a > 2λη², the hypothesis under which the thresholds can hold at all
    budget_compatible: bool,
    theta_fit_c0: f64,
    psi_fit_c1: f64,
    energy_initial: f64,
    energy_final: f64,
    dissipation_integral: f64,
    blow_up_detail: Option<String>,
}

pub fn run_rns(cfg: &RunConfig, quiet: bool) -> Result<RunArtifacts> {
    let state = make_initial_data(cfg)?;
    let monitor = AnalyticityState::new(
        cfg.analytic.a,
        cfg.analytic.lambda,
        cfg.analytic.s,
        cfg.analytic.eta,
        cfg.physics.eps,
    )?;
    run_loop(cfg, state, monitor, quiet)
}

/// Continue a saved run to the config's t_end. θ, Ψ and the field pick up
/// bitwise where the checkpoint left them; the inequality audits and the
/// dissipation tally restart at the resume point because their histories are
/// not part of the snapshot.
pub fn resume_run(cfg: &RunConfig, checkpoint: &Path, quiet: bool) -> Result<RunArtifacts> {
    let ck = load_checkpoint(checkpoint)
        .with_context(|| format!("loading checkpoint {}", checkpoint.display()))?;
    let monitor_src = ck.clone();
    let state = ck.into_velocity_state()?;
    let monitor = monitor_src.monitor_state(cfg.analytic.eta, &state)?;
    run_loop(cfg, state, monitor, quiet)
}

fn weighted_energy_at(v: &VelocityState, radius: f64) -> f64 {
    aniso_norm_sq_vec(&v.v, AnisoNormParams::new(0.0, 0.0), radius.max(0.0))
}

fn run_loop(
    cfg: &RunConfig,
    mut state: VelocityState,
    mut monitor: AnalyticityState,
    quiet: bool,
) -> Result<RunArtifacts> {
    let out_dir = &cfg.outputs.directory;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let series_path = out_dir.join("series.csv");
    let report_path = out_dir.join("report.json");

    let dt = cfg.time.dt;
    let solver = SolverConfig {
        linear_only: cfg.physics.linear_only,
        ..SolverConfig::new(dt, cfg.time.t_end, StepOrder::Four)?
    };
    solver.check_cfl(&state)?;

    let t0 = state.t;
    let span = cfg.time.t_end - t0;
    if span <= 0.0 {
        anyhow::bail!(
            "time.t_end = {} is not past the starting time {}",
            cfg.time.t_end,
            t0
        );
    }
    let n_steps = (span / dt).round().max(1.0) as usize;

    let energy_initial = state.l2_norm().powi(2);
    let mut history = AuditHistory::new(&state, &monitor);
    let mut dissipation = 0.0_f64;
    let mut violated = !monitor.continuation_ok();
    let mut blow_up_detail: Option<String> = None;
    let mut outcome: Option<RunOutcome> = None;

    let mut series = BufWriter::new(
        File::create(&series_path)
            .with_context(|| format!("creating {}", series_path.display()))?,
    );
    writeln!(series, "{}", SampleRow::HEADER)?;

    let write_sample = |series: &mut BufWriter<File>,
                        state: &VelocityState,
                        monitor: &AnalyticityState,
                        history: &AuditHistory,
                        dissipation: f64|
     -> Result<()> {
        let report = audit(monitor, state, history);
        let row = SampleRow::from_audit(
            &report,
            weighted_energy_at(state, monitor.radius()),
            dissipation,
            state.divergence_max_rel(),
        );
        writeln!(series, "{}", row.csv_line())?;
        Ok(())
    };

    history.record(
        state.t,
        monitor.theta,
        theta_dot(&state, &monitor)?,
        monitor.psi,
    );
    violated |= !monitor.continuation_ok();
    write_sample(&mut series, &state, &monitor, &history, dissipation)?;

    if !quiet {
        println!(
            "run: grid {}x{}x{}, eps = {}, eta = {}, {} steps of dt = {}",
            cfg.grid.n_h,
            cfg.grid.n_h,
            cfg.grid.n_v,
            cfg.physics.eps,
            cfg.analytic.eta,
            n_steps,
            dt
        );
    }

    let mut steps_taken = 0;
    for step_idx in 1..=n_steps {
        let (next, rep) = step(&state, dt, solver.order, solver.linear_only)?;
        let next_monitor = match advance_monitor(&monitor, &state, &next, dt) {
            Ok(m) => m,
            Err(anse_core::Error::RadiusExhausted { .. }) => {
                outcome = Some(RunOutcome::RadiusExhausted);
                break;
            }
            Err(e) => return Err(e.into()),
        };
        state = next;
        monitor = next_monitor;
        dissipation += rep.dissipation_increment;
        steps_taken = step_idx;

        let energy = state.l2_norm().powi(2);
        if !energy.is_finite() || !monitor.theta.is_finite() {
            blow_up_detail = Some(format!("non-finite state at t = {}", state.t));
            outcome = Some(RunOutcome::BlowUp);
        } else if energy > 10.0 * energy_initial {
            blow_up_detail = Some(format!(
                "energy {} exceeded 10x the initial {} at t = {}",
                energy, energy_initial, state.t
            ));
            outcome = Some(RunOutcome::BlowUp);
        }

        if outcome.is_none() || outcome == Some(RunOutcome::RadiusExhausted) {
            history.record(
                state.t,
                monitor.theta,
                theta_dot(&state, &monitor).unwrap_or(f64::NAN),
                monitor.psi,
            );
            violated |= !monitor.continuation_ok();
        }

        if monitor.exhausted() && outcome.is_none() {
            outcome = Some(RunOutcome::RadiusExhausted);
        }

        let stopping = outcome.is_some();
        if step_idx % cfg.time.sample_every == 0 || step_idx == n_steps || stopping {
            write_sample(&mut series, &state, &monitor, &history, dissipation)?;
        }
        if stopping {
            break;
        }

        if cfg.outputs.checkpoint_every > 0 && step_idx % cfg.outputs.checkpoint_every == 0 {
            let path = out_dir.join(format!("checkpoint_{step_idx:08}.anse"));
            save_checkpoint(&path, &state, &monitor)?;
        }
    }
    series.flush()?;

    let outcome = outcome.unwrap_or(if violated {
        RunOutcome::ContinuationViolated
    } else {
        RunOutcome::Success
    });
    // The exhausted weight makes further norm evaluations meaningless, but the
    // state itself is still worth keeping for post-mortems.
    if outcome != RunOutcome::BlowUp {
        save_checkpoint(&out_dir.join("final.anse"), &state, &monitor)?;
    }

    let report = FinalReport {
        outcome,
        exit_code: outcome.exit_code(),
        t_final: state.t,
        steps_taken,
        theta_final: monitor.theta,
        psi_final: monitor.psi,
        radius_final: monitor.radius(),
        eta: cfg.analytic.eta,
        continuation_held_throughout: !violated && outcome != RunOutcome::RadiusExhausted,
        budget_compatible: monitor.budget_compatible(),
        theta_fit_c0: history.fitted_c0(),
        psi_fit_c1: history.fitted_c1(),
        energy_initial,
        energy_final: state.l2_norm().powi(2),
        dissipation_integral: dissipation,
        blow_up_detail,
    };
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(&report_path, json.as_bytes())
        .with_context(|| format!("writing {}", report_path.display()))?;

    if !quiet {
        println!(
            "done: {} at t = {} (theta = {}, psi = {}, radius = {})",
            outcome.describe(),
            report.t_final,
            report.theta_final,
            report.psi_final,
            report.radius_final
        );
    }

    Ok(RunArtifacts {
        outcome,
        final_t: report.t_final,
        final_theta: report.theta_final,
        final_psi: report.psi_final,
        fitted_c0: report.theta_fit_c0,
        fitted_c1: report.psi_fit_c1,
        series_path,
        report_path,
    })
}
