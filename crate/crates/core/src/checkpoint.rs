//! Binary run snapshots.
//!
//! Layout: magic "ANSE", format version (u32 LE), n_h, n_v (u32 LE), then
//! L_h, L_v, eps, t, a, lambda, s, theta, Psi as f64 LE, then the three
//! velocity components in component-major, ξ-lexicographic order as
//! interleaved (re, im) f64 LE. The Psi slot holds the time-integral
//! accumulator ∫‖∇_h v_Φ‖² dτ; the instantaneous part of Ψ is a function of
//! (v, θ) and is recomputed on load, so a resumed run continues bitwise.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::monitor::AnalyticityState;
use crate::solver::VelocityState;

pub const MAGIC: [u8; 4] = *b"ANSE";
pub const VERSION: u32 = 1;

/// Parsed snapshot; `eta` is a run parameter, not state, so it lives in the
/// config rather than here.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub n_h: usize,
    pub n_v: usize,
    pub l_h: f64,
    pub l_v: f64,
    pub eps: f64,
    pub t: f64,
    pub a: f64,
    pub lambda: f64,
    pub s: f64,
    pub theta: f64,
    pub psi_integral: f64,
    pub v: [SpectralField; 3],
}

impl Checkpoint {
    pub fn into_velocity_state(self) -> Result<VelocityState> {
        VelocityState::new(self.v, self.t, self.eps)
    }

    /// Rebuild the monitor at the stored (θ, ∫) pair; `eta` comes from the
    /// caller's config.
    pub fn monitor_state(&self, eta: f64, v: &VelocityState) -> Result<AnalyticityState> {
        AnalyticityState::resume(
            self.a,
            self.lambda,
            self.s,
            eta,
            self.eps,
            self.theta,
            self.psi_integral,
            v,
        )
    }
}

fn wavenumber_range(n: usize) -> std::ops::RangeInclusive<i64> {
    let n = n as i64;
    (-n / 2 + 1)..=(n / 2)
}

pub fn save_checkpoint(
    path: &Path,
    state: &VelocityState,
    monitor: &AnalyticityState,
) -> Result<()> {
    let g = state.grid();
    let mut buf = Vec::with_capacity(4 + 4 + 8 + 9 * 8 + 3 * g.n_h() * g.n_h() * g.n_v() * 16);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(g.n_h() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n_v() as u32).to_le_bytes());
    for x in [
        g.l_h(),
        g.l_v(),
        state.eps,
        state.t,
        monitor.a,
        monitor.lambda,
        monitor.s,
        monitor.theta,
        monitor.psi_integral,
    ] {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for comp in &state.v {
        for k1 in wavenumber_range(g.n_h()) {
            for k2 in wavenumber_range(g.n_h()) {
                for k3 in wavenumber_range(g.n_v()) {
                    let c = comp.get([k1, k2, k3]).expect("in-range wavenumber");
                    buf.extend_from_slice(&c.re.to_le_bytes());
                    buf.extend_from_slice(&c.im.to_le_bytes());
                }
            }
        }
    }
    fs::write(path, buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.bytes.len() {
            return Err(Error::BadCheckpoint(format!(
                "truncated at byte {} (wanted {} more)",
                self.at, n
            )));
        }
        let out = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path)?;
    let mut cur = Cursor {
        bytes: &bytes,
        at: 0,
    };

    let magic = cur.take(4)?;
    if magic != MAGIC {
        return Err(Error::BadCheckpoint(format!("bad magic {:?}", magic)));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::BadCheckpoint(format!(
            "unsupported version {version} (expected {VERSION})"
        )));
    }
    let n_h = cur.u32()? as usize;
    let n_v = cur.u32()? as usize;
    let l_h = cur.f64()?;
    let l_v = cur.f64()?;
    let eps = cur.f64()?;
    let t = cur.f64()?;
    let a = cur.f64()?;
    let lambda = cur.f64()?;
    let s = cur.f64()?;
    let theta = cur.f64()?;
    let psi_integral = cur.f64()?;

    let grid = Grid::new(n_h, n_v, l_h, l_v)
        .map_err(|e| Error::BadCheckpoint(format!("stored grid invalid: {e}")))?;
    let mut v = [
        SpectralField::zeros(&grid, true),
        SpectralField::zeros(&grid, true),
        SpectralField::zeros(&grid, true),
    ];
    for comp in v.iter_mut() {
        for k1 in wavenumber_range(n_h) {
            for k2 in wavenumber_range(n_h) {
                for k3 in wavenumber_range(n_v) {
                    let re = cur.f64()?;
                    let im = cur.f64()?;
                    comp.set([k1, k2, k3], crate::C64::new(re, im))
                        .expect("in-range wavenumber");
                }
            }
        }
    }
    if cur.at != bytes.len() {
        return Err(Error::BadCheckpoint(format!(
            "{} trailing bytes",
            bytes.len() - cur.at
        )));
    }
    Ok(Checkpoint {
        n_h,
        n_v,
        l_h,
        l_v,
        eps,
        t,
        a,
        lambda,
        s,
        theta,
        psi_integral,
        v,
    })
}
