use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// `gcd(a, M) != 1`, so no modular inverse exists.
    NotInvertible,
    /// No witness exponent solves `l^e s = m^f r + a` for the given pair.
    NotAdmissible,
    /// A witness exists but violates `|a| < max(m^f, l^e)` at the requested height.
    Constraint,
    /// The argument does not satisfy the operation's residue precondition.
    Precondition(&'static str),
    /// A stage or precision index is past what has been computed.
    Range { requested: usize, available: usize },
    /// An algebraic identity that must hold exactly did not.
    Invariant(String),
    /// Cycle detection ran out of iterations.
    NoCycleFound { budget: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::NotInvertible => f.write_str("value is not invertible modulo the given modulus"),
            Error::NotAdmissible => f.write_str("pair is not admissible"),
            Error::Constraint => f.write_str("translation violates |a| < max(m^f, l^e)"),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
            Error::Range { requested, available } => {
                write!(f, "index {requested} out of range (only {available} available)")
            }
            Error::Invariant(msg) => write!(f, "invariant failure: {msg}"),
            Error::NoCycleFound { budget } => write!(f, "no cycle found within {budget} iterations"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
