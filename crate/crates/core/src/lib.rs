//! Exact arithmetic on Farey sequences.
//!
//! Everything in this crate works on reduced fractions in `[0, 1]` with
//! integer components; no floating point is used for any decision. The
//! crate is `no_std` and only needs `alloc` for the window buffer, sieve
//! tables and materialized segments.
//!
//! * [`rational`]: the [`Fraction`] type, the similarly-ordered predicate
//!   and the Farey-neighbor criterion.
//! * [`generator`]: streaming `F_n`, neighbors in a lower order, and the
//!   arithmetic-progression segments around small-denominator fractions.
//! * [`counting`]: totient/Möbius sieve, `|F_n|`, exact rank `A_n(α)` and
//!   the two-sided discrepancy check.
//! * [`scanner`]: the exact similar-order threshold `f(n)`, its upper-bound
//!   witnesses and the conjecture/lower-bound checks.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod counting;
mod error;
pub mod generator;
pub mod rational;
pub mod scanner;

pub use counting::{CountReport, Sieve};
pub use error::{Error, Result};
pub use generator::{FareyStream, Segment};
pub use rational::{FareyOrder, Fraction};
pub use scanner::{BadPair, Classification, ConjectureReport, FResult};
