//! Run configuration: a TOML file with one table per concern. Unknown keys
//! anywhere are hard errors so a typo cannot silently fall back to a default.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub analytic: AnalyticSection,
    pub time: TimeSection,
    pub init: InitSection,
    pub outputs: OutputsSection,
    /// Only read by `run-toy`; the spatially distributed commands ignore it.
    #[serde(default)]
    pub toy: Option<ToySection>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_h: usize,
    pub n_v: usize,
    #[serde(rename = "L_h")]
    pub l_h: f64,
    #[serde(rename = "L_v")]
    pub l_v: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub eps: f64,
    /// Freeze the nonlinear and pressure terms; the run reduces to exact
    /// viscous decay. Useful as a regression control.
    #[serde(default)]
    pub linear_only: bool,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticSection {
    pub a: f64,
    pub lambda: f64,
    pub s: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    #[serde(rename = "type")]
    pub kind: InitKind,
    pub seed: u64,
    /// Envelope decay power for `random_analytic`.
    #[serde(default = "default_envelope_power")]
    pub m: f64,
    /// Data size in ‖e^{a|D₃|}v₀‖_{H^{0,s}} + ‖e^{a|D₃|}v₀‖_{H^{-1/2,s}};
    /// defaults to `analytic.eta` so data sit exactly on the small-data
    /// hypothesis unless overridden.
    #[serde(default)]
    pub target_norm: Option<f64>,
    /// Explicit coefficient list for `type = "modes"`.
    #[serde(default)]
    pub modes: Option<Vec<ModeSpec>>,
    /// Checkpoint to take the velocity field from for `type = "file"`.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

fn default_envelope_power() -> f64 {
    3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    RandomAnalytic,
    Modes,
    File,
}

/// One prescribed mode: the coefficient goes in at `k` and its conjugate at
/// `-k`, so a single entry already describes a real field.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub k: [i64; 3],
    pub re: [f64; 3],
    pub im: [f64; 3],
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub directory: PathBuf,
    /// Steps between checkpoint files; 0 writes only the final checkpoint.
    #[serde(default)]
    pub checkpoint_every: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ToySection {
    #[serde(default = "default_toy_gamma")]
    pub gamma: f64,
    #[serde(default = "default_toy_max_mode")]
    pub max_mode: usize,
    /// "abs_xi" (order-one modulus) or "i_xi" (derivative).
    #[serde(default = "default_toy_symbol")]
    pub symbol: String,
    /// Random trials when measuring the quadratic-estimate constant.
    #[serde(default = "default_toy_trials")]
    pub c_quad_trials: u32,
}

fn default_toy_gamma() -> f64 {
    1.0
}
fn default_toy_max_mode() -> usize {
    256
}
fn default_toy_symbol() -> String {
    "abs_xi".to_owned()
}
fn default_toy_trials() -> u32 {
    12
}

impl Default for ToySection {
    fn default() -> Self {
        ToySection {
            gamma: default_toy_gamma(),
            max_mode: default_toy_max_mode(),
            symbol: default_toy_symbol(),
            c_quad_trials: default_toy_trials(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Command-line flags take precedence over the file.
    pub fn apply_overrides(&mut self, seed: Option<u64>, output_dir: Option<&Path>) {
        if let Some(s) = seed {
            self.init.seed = s;
        }
        if let Some(d) = output_dir {
            self.outputs.directory = d.to_path_buf();
        }
    }

    pub fn target_norm(&self) -> f64 {
        self.init.target_norm.unwrap_or(self.analytic.eta)
    }

    /// Cheap structural checks; everything constructor-enforced in the core
    /// (grid sizes, radii, dt) is left to the constructors so the constraint
    /// lives in one place.
    // `!(x > 0.0)` rejects NaN along with nonpositive values
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<()> {
        if self.time.sample_every == 0 {
            bail!("time.sample_every must be >= 1");
        }
        if !(self.analytic.eta > 0.0) {
            bail!("analytic.eta must be > 0, got {}", self.analytic.eta);
        }
        if let Some(t) = self.init.target_norm {
            if !(t > 0.0) {
                bail!("init.target_norm must be > 0, got {t}");
            }
        }
        match self.init.kind {
            InitKind::Modes => {
                if self.init.modes.as_ref().is_none_or(|m| m.is_empty()) {
                    bail!("init.type = \"modes\" needs a non-empty init.modes list");
                }
            }
            InitKind::File => {
                if self.init.path.is_none() {
                    bail!("init.type = \"file\" needs init.path");
                }
            }
            InitKind::RandomAnalytic => {}
        }
        if let Some(toy) = &self.toy {
            if toy.symbol != "abs_xi" && toy.symbol != "i_xi" {
                bail!(
                    "toy.symbol must be \"abs_xi\" or \"i_xi\", got {:?}",
                    toy.symbol
                );
            }
        }
        Ok(())
    }
}
