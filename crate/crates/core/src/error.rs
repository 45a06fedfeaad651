use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the curve-analysis kernels.
///
/// Location fields (`segment`, `component`) are filled in as the error
/// propagates up from the group kernel, so a caller can name the offending
/// joint and sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input to `vee` was not skew-symmetric.
    NotSkew { asymmetry: f64 },
    /// Matrix is not a rotation (orthogonality or determinant check failed).
    NotRotation { deviation: f64 },
    /// Rotation angle too close to π for a well-conditioned logarithm.
    AngleNearPi { angle: f64, component: Option<usize>, segment: Option<usize> },
    /// `dexpinv` evaluated at or beyond its pole at ‖u‖ = 2π.
    DexpinvPole { norm: f64 },
    /// A curve segment has vanishing discrete derivative.
    DegenerateSegment { segment: usize },
    /// An SRV value is zero.
    ZeroValue { segment: usize },
    /// Linear SRV interpolation passed through zero.
    ZeroCrossing { segment: usize },
    /// Grids of two curves/fields differ.
    GridMismatch,
    /// Product widths differ.
    WidthMismatch { expected: usize, found: usize },
    /// Lengths of paired sequences differ.
    LengthMismatch { expected: usize, found: usize },
    /// Grid is not strictly increasing from 0 to 1.
    InvalidGrid,
    /// Reparametrization knots violate monotonicity or endpoint conditions.
    InvalidWarp,
    /// Parameter outside `[0, 1]`.
    OutOfRange { t: f64 },
    /// Too few grid cells for matching.
    GridTooSmall { n: usize },
    /// Gradient flow kept increasing the functional.
    Diverged { iteration: usize },
    /// A numeric parameter failed validation.
    InvalidParameter(&'static str),
}

impl Error {
    /// Attach a segment index to errors that carry one.
    pub fn at_segment(self, index: usize) -> Self {
        match self {
            Error::AngleNearPi { angle, component, segment: None } => {
                Error::AngleNearPi { angle, component, segment: Some(index) }
            }
            other => other,
        }
    }

    /// Attach a product-component index to errors that carry one.
    pub fn at_component(self, index: usize) -> Self {
        match self {
            Error::AngleNearPi { angle, component: None, segment } => {
                Error::AngleNearPi { angle, component: Some(index), segment }
            }
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSkew { asymmetry } => write!(f, "matrix is not skew-symmetric (symmetric part {asymmetry:e})"),
            Error::NotRotation { deviation } => write!(f, "matrix is not a rotation (deviation {deviation:e})"),
            Error::AngleNearPi { angle, component, segment } => {
                write!(f, "rotation angle {angle} too close to pi for logarithm")?;
                if let Some(c) = component {
                    write!(f, " at component {c}")?;
                }
                if let Some(s) = segment {
                    write!(f, " at segment {s}")?;
                }
                Ok(())
            }
            Error::DexpinvPole { norm } => write!(f, "dexpinv undefined at |u| = {norm} (pole at 2*pi)"),
            Error::DegenerateSegment { segment } => write!(f, "degenerate segment {segment}: zero discrete derivative"),
            Error::ZeroValue { segment } => write!(f, "SRV value at segment {segment} is zero"),
            Error::ZeroCrossing { segment } => write!(f, "interpolated SRV value at segment {segment} crosses zero"),
            Error::GridMismatch => write!(f, "grids do not match"),
            Error::WidthMismatch { expected, found } => write!(f, "product width mismatch: expected {expected}, found {found}"),
            Error::LengthMismatch { expected, found } => write!(f, "length mismatch: expected {expected}, found {found}"),
            Error::InvalidGrid => write!(f, "grid must increase strictly from 0 to 1"),
            Error::InvalidWarp => write!(f, "reparametrization must be strictly increasing and fix 0 and 1"),
            Error::OutOfRange { t } => write!(f, "parameter {t} outside [0, 1]"),
            Error::GridTooSmall { n } => write!(f, "grid has {n} cells, need at least 2"),
            Error::Diverged { iteration } => write!(f, "gradient flow diverged at iteration {iteration}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
