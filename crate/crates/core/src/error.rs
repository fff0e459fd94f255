use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bend angle {0} deg is outside the open interval (0, 90)")]
    BendAngle(f64),

    #[error("incidence angle {0} rad must lie in [0, pi/2)")]
    IncidenceAngle(f64),

    #[error("relative permittivity {0} must be >= 1")]
    Permittivity(f64),

    #[error("{what} point ({x:.3}, {y:.3}, {z:.3}) is not inside the duct")]
    OutsideDuct {
        what: &'static str,
        x: f64,
        y: f64,
        z: f64,
    },

    #[error("max reflection order {0} is not supported (0, 1 or 2)")]
    MaxOrder(usize),

    #[error("direction vector is not unit length (|d| = {0})")]
    NonUnitDirection(f64),

    #[error("unknown antenna system preset `{0}` (expected system1, system2 or system3)")]
    UnknownPreset(String),

    #[error("power delay profile needs at least one tap")]
    EmptyProfile,

    #[error("sweep needs at least 2 samples, got {0}")]
    SampleCount(usize),

    #[error("invalid sweep range: {0}")]
    SweepRange(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("scenario error at `{path}`: {message}")]
    Scenario { path: String, message: String },

    #[error("csv error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scenario {
            path: path.into(),
            message: message.into(),
        }
    }
}
