use std::fmt;

use thiserror::Error;

/// Why a prime was rejected for the multi-modular reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadPrimeReason {
    /// A generator's leading coefficient is divisible by the prime.
    LeadingCoefficientVanished { generator: usize },
    /// The ideal reduced to `{1}` modulo the prime.
    UnitIdeal,
    /// The quotient ring is not finite-dimensional modulo the prime.
    NotZeroDimensional,
    /// The recorded separating form no longer reaches full degree.
    FormDegreeDrop { degree: usize, dim: usize },
    /// No separating form was found among the tried candidates.
    NoSeparatingForm,
    /// The squarefree loop did not converge.
    RadicalizationExceeded,
    /// Leading monomials or quotient dimension disagree with the accepted primes.
    Incompatible,
    /// The prime was on the losing side of a compatibility vote.
    Outvoted,
    /// A reconstructed denominator is divisible by the prime.
    DenominatorVanished,
    /// The Hankel system of the parametrization is singular.
    SingularHankel,
}

impl fmt::Display for BadPrimeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadPrimeReason::LeadingCoefficientVanished { generator } => {
                write!(f, "leading coefficient of generator {generator} vanishes")
            }
            BadPrimeReason::UnitIdeal => write!(f, "ideal is the unit ideal"),
            BadPrimeReason::NotZeroDimensional => write!(f, "ideal is not zero-dimensional"),
            BadPrimeReason::FormDegreeDrop { degree, dim } => {
                write!(f, "minimal polynomial degree {degree} below dimension {dim}")
            }
            BadPrimeReason::NoSeparatingForm => write!(f, "no separating form found"),
            BadPrimeReason::RadicalizationExceeded => write!(f, "radicalization loop exceeded"),
            BadPrimeReason::Incompatible => write!(f, "incompatible leading monomials or dimension"),
            BadPrimeReason::Outvoted => write!(f, "outvoted by a larger compatible set of primes"),
            BadPrimeReason::DenominatorVanished => {
                write!(f, "prime divides a reconstructed denominator")
            }
            BadPrimeReason::SingularHankel => write!(f, "singular Hankel system"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RurError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the ideal is the unit ideal")]
    IdealIsUnit,
    #[error("the system is not zero-dimensional")]
    NotZeroDimensional,
    #[error("the system has no solutions")]
    EmptyVariety,
    #[error("no separating linear form found")]
    NoSeparatingForm,
    #[error("the Hankel matrix is singular")]
    SingularHankel,
    #[error("bad prime {prime}: {reason}")]
    BadPrime { prime: u64, reason: BadPrimeReason },
    #[error("prime {0} is incompatible with the accumulated primes")]
    IncompatiblePrime(u64),
    #[error("no rational reconstruction within the Farey bounds")]
    NoReconstruction,
    #[error("prime supply exhausted")]
    PrimesExhausted,
}

pub type Result<T> = std::result::Result<T, RurError>;
