use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}; only 1 and 2 are implemented")]
    UnsupportedDimension(usize),
    #[error("points per axis must be a power of two >= 16, got {0}")]
    InvalidResolution(usize),
    #[error("extent must be positive and finite, got {0}")]
    InvalidExtent(f64),
    #[error("sample count {got} does not match grid and rank (expected {expected})")]
    SampleCount { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("exponent p = {0} outside [1, inf)")]
    InvalidExponent(f64),
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("shift of length {norm} exceeds limit {limit}")]
    ShiftTooLarge { norm: f64, limit: f64 },
    #[error("rank mismatch: {0}")]
    RankMismatch(&'static str),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("gamma function argument {0} is not positive")]
    GammaArgument(f64),
    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },
    #[error("tail bound {bound:e} exceeds tolerance {tolerance:e}")]
    TailBound { bound: f64, tolerance: f64 },
    #[error("support leaks into the boundary band of the quadrature window (relative level {0:e})")]
    SupportLeak(f64),
    #[error("method not applicable: {0}")]
    MethodMismatch(String),
    #[error("tail asymptotics violated: {0}")]
    NonConvergentTail(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed data: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "s", value: s, range: "(0, 1)" })
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}
