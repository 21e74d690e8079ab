use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text did not parse under the polynomial grammar.
    Parse(String),
    /// Division by the zero polynomial or zero quasi-polynomial.
    DivisionByZero,
    /// A divisor quasi-polynomial has the zero polynomial as a constituent.
    ZeroConstituent { class: u64, period: u64 },
    /// A precondition on the mathematical domain of an operation failed.
    Domain(String),
    /// Modular inverse requested for non-coprime arguments; `class` is a
    /// witness residue class where the gcd is not 1.
    NotCoprime { class: u64, period: u64 },
    /// The polyhedron or solution set is eventually unbounded.
    Unbounded,
    /// Enumeration or elimination exceeded the configured desk-scale cap.
    CapExceeded(String),
    /// Certificate search exhausted its bound.
    SearchExhausted(String),
    /// Step budget exhausted; indicates a nontermination bug, not user error.
    FuelExhausted(String),
    /// Internal consistency check failed; indicates a bug, not user error.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroConstituent { class, period } => write!(
                f,
                "divisor has zero constituent on class {class} (mod {period})"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotCoprime { class, period } => write!(
                f,
                "arguments are not coprime on class {class} (mod {period})"
            ),
            Error::Unbounded => write!(f, "polyhedron is eventually unbounded"),
            Error::CapExceeded(msg) => write!(f, "desk-scale cap exceeded: {msg}"),
            Error::SearchExhausted(msg) => write!(f, "search exhausted: {msg}"),
            Error::FuelExhausted(msg) => write!(f, "step budget exhausted: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
