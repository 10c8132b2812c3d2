use std::path::PathBuf;

/// Errors raised by the numerical routines and the run orchestration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("interpolation domain error: r = {r} outside table samples [{lo}, {hi}]")]
    Interpolation { r: f64, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate:.6e}, error {error:.3e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("integrator step size underflow at r = {r:.6e}")]
    Stiffness { r: f64 },

    #[error("series startup radius {r0:.3e} too large for order {mu}")]
    Startup { r0: f64, mu: f64 },

    #[error("degenerate matching at lambda = {lambda:.6e}")]
    DegenerateMatching { lambda: f64 },

    #[error("phase jump of {jump:.3} rad between lambda = {lo:.6e} and {hi:.6e}; refine the grid")]
    GridResolution { lo: f64, hi: f64, jump: f64 },

    #[error("ill-conditioned zero-energy system (condition {condition:.3e})")]
    Conditioning { condition: f64 },

    #[error("partial-wave truncation: l_max = {l_max} still carries phase {residual:.3e}")]
    Truncation { l_max: usize, residual: f64 },

    #[error("node of the zero-energy solution unresolved near r = {r:.6e}")]
    Refinement { r: f64 },

    #[error("spectral flow partition could not be resolved near t = {t:.6e}")]
    PathResolution { t: f64 },

    #[error("box diagonalization not converged: {0}")]
    Resolution(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
