use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A shape parameter is missing, non-finite, or non-positive.
    InvalidShape(&'static str),
    /// The region has no grid cell whose center lies inside it.
    DegenerateDomain,
    /// Inside cells do not form one 4-connected component.
    DisconnectedMask { components: usize },
    InvalidResolution(usize),
    /// q outside the (0,1) guard band.
    ExponentOutOfBand(f64),
    /// A scalar argument is outside the domain of a formula.
    InvalidArgument(&'static str),
    /// Two fields that must share a grid do not.
    GridMismatch,
    /// A field that must be nonnegative has a negative entry.
    NegativeValue { index: usize, value: f64 },
    ZeroField,
    NotConverged { what: &'static str, iterations: usize, residual: f64 },
    /// The monotone bracket lost its ordering beyond the linear-solver band.
    BracketViolation { iteration: usize, excess: f64 },
    /// S_q(Ω) came out below S_q(Ω*) by more than the allowed tolerance.
    FaberKrahnViolation { sq_star: f64, sq_omega: f64 },
    Ode(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidShape(why) => write!(f, "invalid domain: {why}"),
            Error::DegenerateDomain => f.write_str("degenerate domain: no grid cell lies inside the region"),
            Error::DisconnectedMask { components } => {
                write!(f, "domain mask splits into {components} disconnected pieces at this resolution")
            }
            Error::InvalidResolution(r) => write!(f, "resolution {r} is below the minimum of 16"),
            Error::ExponentOutOfBand(q) => write!(f, "q out of (0,1) guard band [0.01, 0.99]: q = {q}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
            Error::GridMismatch => f.write_str("fields live on different grids"),
            Error::NegativeValue { index, value } => {
                write!(f, "field value {value} at cell {index} is negative")
            }
            Error::ZeroField => f.write_str("field is identically zero"),
            Error::NotConverged { what, iterations, residual } => {
                write!(f, "{what} did not converge after {iterations} iterations (residual {residual:e})")
            }
            Error::BracketViolation { iteration, excess } => {
                write!(f, "monotone bracket violated at iteration {iteration} by {excess:e}")
            }
            Error::FaberKrahnViolation { sq_star, sq_omega } => write!(
                f,
                "S_q(Ω) = {sq_omega} is below the ball value {sq_star}; solver accuracy is insufficient"
            ),
            Error::Ode(why) => write!(f, "radial integration failed: {why}"),
        }
    }
}

impl core::error::Error for Error {}
