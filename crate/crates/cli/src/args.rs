use std::fmt;

use facmom::hypergeo::{format_rational, parse_rational};
use facmom::Rational;

/// Failure classes, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters: exit 2.
    Usage(String),
    /// The computation itself broke down: exit 1.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<facmom::Error> for CliError {
    fn from(e: facmom::Error) -> Self {
        use facmom::Error::*;
        match e {
            InvalidParameter(_) | OutOfRange(_) | Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub const MIN_PRECISION: u32 = 30;

/// Exact rational flag value; accepts `p/q`, integers and finite decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalArg(pub Rational);

impl std::str::FromStr for RationalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(RationalArg).map_err(|e| e.to_string())
    }
}

impl fmt::Display for RationalArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// An inclusive integer range: `3`, `0..5`, `0..=5`, or a list `1,2,7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeArg {
    pub values: Vec<u64>,
    pub text: String,
}

impl std::str::FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("{t:?} is not a nonnegative integer"));
        let values = if let Some((a, b)) = s.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (lo, hi) = (num(a)?, num(b)?);
            if lo > hi {
                return Err(format!("range {s} is empty"));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(format!("range {s} is empty"));
        }
        Ok(RangeArg { values, text: s.to_string() })
    }
}

impl fmt::Display for RangeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn require<T: Clone>(v: &Option<T>, flag: &str, what: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}
