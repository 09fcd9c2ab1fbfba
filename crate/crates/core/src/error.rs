use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime level")]
    NotPrime(u64),
    #[error("invalid Manin symbol ({c}, {d}) at level {n}")]
    InvalidSymbol { c: i64, d: i64, n: u64 },
    #[error("row lattice is not contained in the given super-lattice")]
    NotASublattice,
    #[error("Hecke rows 1..{bound} span rank {rank}, expected {genus}")]
    RankDeficient { bound: usize, rank: usize, genus: usize },
    #[error("bound {bound} is below the Sturm bound {sturm}")]
    BelowSturmBound { bound: usize, sturm: usize },
    #[error("anemic rows up to {bound} span rank {rank} < {genus}; increase the bound")]
    BoundTooSmall { bound: usize, rank: usize, genus: usize },
    #[error("index and theta-kernel dimension still changing at bound {bound} (limit {limit})")]
    NoStabilization { bound: usize, limit: usize },
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("level {0} is not congruent to 3 mod 4")]
    WrongResidueClass(u64),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
