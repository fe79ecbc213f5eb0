//! Binary cyclic codes built from 2-cyclotomic coset data, cyclic subcode
//! chains, and optimum distance profiles in the inverse dictionary order.
//!
//! The crate covers the full pipeline: GF(2^m) arithmetic and minimal
//! polynomials ([`gf2`]), cyclotomic cosets and chain counting ([`cosets`]),
//! cyclic code construction with exact minimum-distance and weight-distribution
//! enumeration ([`cyclic`]), subcode chain search under Standard I and
//! Standard II ([`chains`]), the punctured second-order Reed-Muller family
//! ([`rm2`]), and exponential sums of binary quadratic forms ([`quadsums`]).
//! Everything is exact integer arithmetic; there is no floating point.

pub mod chains;
pub mod cli;
pub mod cosets;
pub mod cyclic;
pub mod gf2;
pub mod numtheory;
pub mod quadsums;
pub mod rm2;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `q` and `n` share a factor where coprimality is required.
    NotCoprime { q: u64, n: u64 },
    /// An odd modulus is required.
    EvenModulus(u64),
    /// A precondition on an argument was violated.
    BadParameter(String),
    /// Exhaustive enumeration refused: dimension exceeds the configured limit.
    DimensionLimit { dimension: u32, limit: u32 },
    /// Division by the zero polynomial.
    ZeroDivision,
    /// A set of exponents is not closed under doubling modulo n.
    IncompleteCoset { n: u64, element: u64 },
    /// A leader does not name a cyclotomic coset of the given modulus.
    UnknownLeader { n: u64, leader: u64 },
    /// Profiles of different lengths cannot be compared.
    LengthMismatch { left: usize, right: usize },
    /// An internal cross-check failed (two routes to the same value disagree).
    Inconsistent(String),
    /// File I/O failure, with context.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotCoprime { q, n } => write!(f, "{q} and {n} are not coprime"),
            Error::EvenModulus(n) => write!(f, "modulus {n} must be odd"),
            Error::BadParameter(msg) => write!(f, "{msg}"),
            Error::DimensionLimit { dimension, limit } => write!(
                f,
                "dimension {dimension} exceeds the enumeration limit {limit}"
            ),
            Error::ZeroDivision => write!(f, "division by the zero polynomial"),
            Error::IncompleteCoset { n, element } => write!(
                f,
                "exponent set is not closed under doubling mod {n} (element {element})"
            ),
            Error::UnknownLeader { n, leader } => {
                write!(f, "{leader} is not a coset leader modulo {n}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "profile lengths differ: {left} vs {right}")
            }
            Error::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
