use core::fmt;

use crate::rational::Fraction;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ZeroDenominator,
    /// `p > q`: the value lies outside `[0, 1]`.
    OutsideUnitInterval {
        num: u64,
        den: u64,
    },
    ParseFraction,
    ZeroOrder,
    /// `f(n)` and everything built on it needs `n >= 4`.
    OrderTooSmall {
        n: u64,
        min: u64,
    },
    /// The first argument must be strictly smaller than the second.
    NotIncreasing {
        left: Fraction,
        right: Fraction,
    },
    EndOfSequence,
    DenominatorMismatch {
        fraction: Fraction,
        expected: u64,
    },
    /// `0/1` and `1/1` have no two-sided neighborhood in `F_b`.
    Endpoint(Fraction),
    /// The constructive segment needs `n >= 5b - 1`.
    SegmentTooSmall {
        n: u64,
        den: u64,
    },
    InvalidRange {
        lo: u64,
        hi: u64,
    },
    /// No bad pair inside the upper-bound window: an internal invariant broke.
    NoBadPair {
        n: u64,
    },
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "denominator must be positive"),
            Error::OutsideUnitInterval { num, den } => {
                write!(f, "{num}/{den} lies outside [0, 1]")
            }
            Error::ParseFraction => write!(f, "expected a fraction of the form p/q"),
            Error::ZeroOrder => write!(f, "order must be at least 1"),
            Error::OrderTooSmall { n, min } => write!(f, "order {n} is below the minimum {min}"),
            Error::NotIncreasing { left, right } => {
                write!(f, "expected {left} < {right}")
            }
            Error::EndOfSequence => write!(f, "1/1 has no successor"),
            Error::DenominatorMismatch { fraction, expected } => {
                write!(f, "{fraction} does not have denominator {expected}")
            }
            Error::Endpoint(x) => write!(f, "{x} is an endpoint of the unit interval"),
            Error::SegmentTooSmall { n, den } => write!(
                f,
                "segment around a fraction with denominator {den} needs order >= {}, got {n}",
                5 * den - 1
            ),
            Error::InvalidRange { lo, hi } => write!(f, "invalid range {lo}:{hi}"),
            Error::NoBadPair { n } => {
                write!(
                    f,
                    "no bad pair found within the upper-bound window for n = {n}"
                )
            }
            Error::Overflow => write!(f, "integer overflow in exact comparison"),
        }
    }
}

impl core::error::Error for Error {}
