use thiserror::Error;

/// Errors raised by the map, orbit, extrema and capture computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the domain [{a}, {b}]")]
    Domain { x: f64, a: f64, b: f64 },

    #[error("map is not differentiable at x = {x}")]
    NotDifferentiable { x: f64 },

    #[error("derivative vanishes at x = {x}; quantity is singular")]
    Singular { x: f64 },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root of minimal period {found} found where period {wanted} was requested")]
    WrongPeriod { wanted: usize, found: usize },

    #[error("orbit polish left the neighbourhood of seed {seed} (reached {reached})")]
    PolishDivergence { seed: f64, reached: f64 },

    #[error("refined root {root} escaped its bracket [{lo}, {hi}]")]
    RefineEscape { root: f64, lo: f64, hi: f64 },

    #[error("refined roots {first} and {second} collide (tangency near a bifurcation)")]
    DuplicateRoot { first: f64, second: f64 },

    #[error("extremum kinds do not alternate at x = {x} for f^{q}")]
    BrokenAlternation { q: usize, x: f64 },

    #[error("{what} not found for orbit point {index}")]
    NotFound { what: &'static str, index: usize },

    #[error("capture intervals {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("f^{q}'' has no sign change on [{lo}, {hi}]")]
    NoInflection { q: usize, lo: f64, hi: f64 },

    #[error("|f'| <= slope floor at x = {x} along the back-pull sequence")]
    ZeroSlope { x: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("iteration count {q} exceeds the supported maximum {max}")]
    TooManyIterations { q: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
