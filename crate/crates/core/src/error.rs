use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Quadrature interval with `a >= b` or non-finite endpoints.
    InvalidInterval {
        a: f64,
        b: f64,
    },
    InvalidRegion(String),
    /// The operation does not apply to this kind of region.
    Unsupported(String),
    InvalidState(String),
    /// Wigner value with an imaginary part above tolerance.
    ImaginaryResidue(f64),
    /// Hermiticity defect of an assembled operator above tolerance.
    AssemblyResidual(f64),
    NonFinite,
    DimensionOverflow {
        dim: usize,
        limit: usize,
    },
    InvalidLadder(String),
    NotConverged {
        convergence: f64,
        tolerance: f64,
    },
    InvalidGrid(String),
    /// A sampled value with `|W|` above `1/π` plus the declared noise level.
    Physicality {
        q: f64,
        p: f64,
        value: f64,
        limit: f64,
    },
    /// A region that is not fully covered by a sampled grid.
    Coverage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInterval { a, b } => {
                write!(f, "invalid quadrature interval [{a}, {b}]")
            }
            Error::InvalidRegion(msg) => write!(f, "invalid region: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::ImaginaryResidue(im) => {
                write!(f, "Wigner value has imaginary residue {im:e}")
            }
            Error::AssemblyResidual(r) => write!(
                f,
                "assembled operator has Hermiticity defect {r:e}; increase the resolution"
            ),
            Error::NonFinite => write!(f, "matrix contains non-finite entries"),
            Error::DimensionOverflow { dim, limit } => {
                write!(f, "dimension {dim} exceeds limit {limit}")
            }
            Error::InvalidLadder(msg) => write!(f, "invalid dimension ladder: {msg}"),
            Error::NotConverged {
                convergence,
                tolerance,
            } => write!(
                f,
                "spectral extremes not converged: change {convergence:e} exceeds tolerance {tolerance:e}"
            ),
            Error::Physicality { q, p, value, limit } => write!(
                f,
                "physicality violation at (q, p) = ({q}, {p}): |W| = {} exceeds {limit}",
                value.abs()
            ),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::Coverage(msg) => write!(f, "grid coverage: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
