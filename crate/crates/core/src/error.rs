use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidLieType(String),

    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("Weyl group elements belong to different root systems")]
    TypeMismatch,

    #[error("coset enumeration exceeded the cap of {cap} elements")]
    ElementCap { cap: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("polynomials are over different variable sets")]
    VariableMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown Schubert class: {0}")]
    UnknownClass(String),

    #[error("classes come from different coset tables")]
    TableMismatch,

    #[error("structure matrix in degree {degree} has no unimodular maximal minor")]
    NoUnitMinor { degree: usize },

    #[error("generators do not surject onto degree {degree}")]
    NotSurjective { degree: usize },

    #[error("gluing constraint violated: {0}")]
    GlueConstraint(String),

    #[error("orbit exceeded the cap of {cap} weights")]
    OrbitCap { cap: usize },

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
