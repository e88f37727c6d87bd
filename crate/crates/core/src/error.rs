//! Error type shared by all modules.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A modulus was zero where a positive integer is required.
    ZeroModulus,
    /// Two objects that must live at the same modulus do not.
    ModulusMismatch { expected: u64, found: u64 },
    /// `n` was expected to divide `m`.
    NotADivisor { n: u64, m: u64 },
    /// Two moduli that must be coprime are not.
    NotCoprime { a: u64, b: u64 },
    /// A modulus exceeds the supported bound (2^20 by default).
    ModulusTooLarge { n: u64, max: u64 },
    /// A quadratic-cost operation was asked to run above its guard bound.
    QuadraticGuard { n: u64, max: u64 },
    /// A search or factorial level exceeds its configured maximum.
    LevelExceeded { requested: u64, max: u64 },
    /// A custom family was queried at a level not dividing its master modulus.
    LevelOutsideMaster { n: u64, master: u64 },
    /// An operation's stated precondition does not hold.
    Precondition(String),
    /// Szczuka duality is only defined for gamma(p) <= 1.
    DualityUnsupported { p: u64, gamma: u32 },
    /// No prime can split the coset into disjoint open pieces.
    NoSplittingPrime,
    /// A consistency condition the theory guarantees failed to verify.
    InternalConsistency(String),
    /// Greedy abundancy approximation ran out of primes; carries the value reached.
    EpsUnreachable { achieved: String },
    /// A function table does not cover the requested range.
    TableIncomplete { bound: u64 },
    /// Arithmetic overflowed the fixed-width integers used for function values.
    Overflow,
    /// `from_natural(0)` is not a supernatural number; use `from_zero`.
    ZeroNotNatural,
    /// A list that must be nonempty was empty.
    EmptyInput,
    /// Sieve cache file is malformed or does not match the requested limit.
    SieveCache(String),
    /// Malformed textual input (CLI spec strings, rationals, JSON schemas).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroModulus => write!(f, "modulus must be a positive integer"),
            Error::ModulusMismatch { expected, found } => {
                write!(f, "modulus mismatch: expected {expected}, found {found}")
            }
            Error::NotADivisor { n, m } => write!(f, "{n} does not divide {m}"),
            Error::NotCoprime { a, b } => write!(f, "moduli {a} and {b} are not coprime"),
            Error::ModulusTooLarge { n, max } => {
                write!(f, "modulus {n} exceeds supported bound {max}")
            }
            Error::QuadraticGuard { n, max } => {
                write!(f, "modulus {n} exceeds quadratic-operation guard {max}")
            }
            Error::LevelExceeded { requested, max } => {
                write!(f, "level {requested} exceeds configured maximum {max}")
            }
            Error::LevelOutsideMaster { n, master } => {
                write!(f, "level {n} does not divide master modulus {master}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::DualityUnsupported { p, gamma } => {
                write!(f, "dual is defined only for gamma <= 1; prime {p} has gamma {gamma}")
            }
            Error::NoSplittingPrime => write!(f, "no splitting prime available"),
            Error::InternalConsistency(msg) => write!(f, "internal consistency failure: {msg}"),
            Error::EpsUnreachable { achieved } => {
                write!(f, "prime limit reached before target; achieved h = {achieved}")
            }
            Error::TableIncomplete { bound } => {
                write!(f, "function table does not cover 1..={bound}")
            }
            Error::Overflow => write!(f, "arithmetic overflow"),
            Error::ZeroNotNatural => {
                write!(f, "0 is not a positive natural; use from_zero for rho(0)")
            }
            Error::EmptyInput => write!(f, "input list must be nonempty"),
            Error::SieveCache(msg) => write!(f, "sieve cache: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
