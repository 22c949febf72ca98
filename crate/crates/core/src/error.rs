use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the simulation chain.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative temperature {0} K")]
    NegativeTemperature(f64),
    #[error("negative Kirchhoff potential {0} W/m")]
    NegativePotential(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mesh: {0}")]
    Mesh(String),
    #[error("region `{0}` contains no cells")]
    EmptyRegion(&'static str),
    #[error("Newton iteration diverged (last relative update {last_update:.3e}, residual {last_residual:.3e})")]
    NewtonDivergence { last_update: f64, last_residual: f64 },
    #[error("non-positive temperature in cell {cell}")]
    NonPositiveTemperature { cell: usize },
    #[error("end time {end} s is not after start time {start} s")]
    EndTimeBeforeStart { start: f64, end: f64 },
    #[error("temperature history has not saturated (last relative change {0:.3e})")]
    NotSaturated(f64),
    #[error("negative power {0} W")]
    NegativePower(f64),
    #[error("fidelity outside its domain: {0}")]
    InvalidDomain(String),
    #[error("objective is not finite at {0}")]
    NonFiniteObjective(f64),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with the name of the pipeline stage it came from.
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
