use thiserror::Error;

/// Errors raised by the library. Every variant is a hard failure of the
/// requested computation; soft numerical problems are reported as [`Warning`]s.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}+{im}i lies outside the chart domain (1 + lambda|z|^2 <= 0)")]
    ChartDomain { re: f64, im: f64 },
    #[error("radius {r} is outside the admissible range for lambda = {lambda}")]
    RadiusDomain { r: f64, lambda: f64 },
    #[error("operation requires lambda > 0, got {lambda}")]
    UnsupportedGeometry { lambda: f64 },
    #[error("the antipode of the origin is the chart's point at infinity")]
    Pole,
    #[error("vortices {i} and {j} coincide")]
    Collision { i: usize, j: usize },
    #[error("vortex {i} sits at the antipode of vortex {j}")]
    AntipodalCollision { i: usize, j: usize },
    #[error("vortex {i} has zero vorticity")]
    ZeroVorticity { i: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("the ring lies on the equator (lambda r0^2 = 1)")]
    Equator,
    #[error("mode {ell} of the {n}-ring never degenerates for lambda r0^2 in (-1, 1]")]
    NoRoot { n: usize, ell: usize },
    #[error("invalid step size: {0}")]
    StepSize(String),
    #[error("quartic form is anisotropic on the critical mode (relative spread {spread:e})")]
    Anisotropy { spread: f64 },
    #[error("dihedral action requires equal vorticities")]
    UnequalVorticity,
    #[error("branch unavailable: {0}")]
    BranchUnavailable(String),
    #[error("degenerate normal-form parameters: {0}")]
    DegenerateParameter(String),
    #[error("unsupported Green's function for this operation: {0}")]
    UnsupportedGreens(String),
}

impl Error {
    /// True for errors caused by the geometry of the input (chart domain,
    /// equator, collisions) as opposed to malformed requests.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::ChartDomain { .. }
                | Error::RadiusDomain { .. }
                | Error::UnsupportedGeometry { .. }
                | Error::Pole
                | Error::Collision { .. }
                | Error::AntipodalCollision { .. }
                | Error::Equator
                | Error::NoRoot { .. }
                | Error::Anisotropy { .. }
                | Error::UnsupportedGreens(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// A non-fatal numerical diagnostic attached to a result.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Warning {
    pub source: String,
    pub message: String,
}

impl Warning {
    pub fn new(source: impl Into<String>, message: impl Into<String>) -> Self {
        Warning {
            source: source.into(),
            message: message.into(),
        }
    }
}
