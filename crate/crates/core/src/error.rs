use thiserror::Error;

/// Errors surfaced by construction and application of spectral objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too small or odd: n_h = {n_h}, n_v = {n_v} (need even sizes >= 8)")]
    BadGridSize { n_h: usize, n_v: usize },

    #[error("box lengths must be positive: L_h = {l_h}, L_v = {l_v}")]
    BadBoxLength { l_h: f64, l_v: f64 },

    #[error("field dimensions {got:?} do not match grid {want:?}")]
    DimensionMismatch { got: [usize; 3], want: [usize; 3] },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("multiplier symbol is not finite at occupied mode k = {k:?}")]
    NonFiniteSymbol { k: [i64; 3] },

    #[error("wavenumber index {k:?} outside grid range")]
    IndexOutOfRange { k: [i64; 3] },

    #[error("grid cannot host one full dyadic shell in direction {axis}")]
    GridTooSmallForShell { axis: &'static str },

    #[error("{what} must satisfy {constraint} (got {got})")]
    InvalidParam {
        what: &'static str,
        constraint: &'static str,
        got: f64,
    },

    #[error("input field has zero norm where a nonzero field is required")]
    ZeroInput,

    #[error("analyticity radius exhausted at t = {t}: a - lambda*theta = {radius}")]
    RadiusExhausted { t: f64, radius: f64 },

    #[error("eps = {eps} is not a reciprocal integer 1/m within 1e-12")]
    NotReciprocalInteger { eps: f64 },

    #[error("time step dt = {dt} violates the advective CFL bound {bound}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("solution lost finiteness at t = {t}")]
    BlowUp { t: f64 },

    #[error("prescribed mode is not divergence-free: |xi . v| = {defect}")]
    NotDivergenceFree { defect: f64 },

    #[error("checkpoint is malformed: {0}")]
    BadCheckpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
