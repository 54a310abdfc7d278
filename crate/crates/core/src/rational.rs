//! Reduced fractions in `[0, 1]` and the two predicates everything else is
//! built on: similar ordering and Farey adjacency.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `0 <= num <= den` and `den >= 1`.
///
/// Equality is structural, which coincides with equality of value because
/// the representation is canonical. Ordering is by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Reduces `p/q`. Rejects `q = 0` and `p > q`.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        if p > q {
            return Err(Error::OutsideUnitInterval { num: p, den: q });
        }
        let g = p.gcd(&q);
        Ok(Fraction {
            num: p / g,
            den: q / g,
        })
    }

    /// Builds a fraction whose components are already known to be coprime.
    pub(crate) fn from_coprime(num: u64, den: u64) -> Self {
        debug_assert!(den >= 1 && num <= den && num.gcd(&den) == 1);
        Fraction { num, den }
    }

    #[inline]
    pub fn num(self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(self) -> u64 {
        self.den
    }

    /// `(other.num - self.num) * (other.den - self.den)`, exactly.
    #[inline]
    pub fn order_product(self, other: Fraction) -> i128 {
        (other.num as i128 - self.num as i128) * (other.den as i128 - self.den as i128)
    }

    /// `self.den * other.num - self.num * other.den`.
    #[inline]
    pub fn determinant(self, other: Fraction) -> i128 {
        self.den as i128 * other.num as i128 - self.num as i128 * other.den as i128
    }
}

/// True iff `(f2.num - f1.num) * (f2.den - f1.den) >= 0`. A zero product
/// counts as similarly ordered.
#[inline]
pub fn similarly_ordered(f1: Fraction, f2: Fraction) -> bool {
    f1.order_product(f2) >= 0
}

/// True iff the pair is not similarly ordered (strictly negative product).
#[inline]
pub fn is_bad_pair(f1: Fraction, f2: Fraction) -> bool {
    f1.order_product(f2) < 0
}

/// Consecutive-in-`F_n` test: `b*c - a*d = 1` and `max(b, d) <= n < b + d`
/// for `f1 = a/b < f2 = c/d`.
pub fn are_farey_neighbors(f1: Fraction, f2: Fraction, n: FareyOrder) -> Result<bool> {
    if f1 >= f2 {
        return Err(Error::NotIncreasing {
            left: f1,
            right: f2,
        });
    }
    let n = n.get();
    Ok(f1.determinant(f2) == 1
        && f1.den.max(f2.den) <= n
        && (n as u128) < f1.den as u128 + f2.den as u128)
}

/// Total order by value, decided by cross-multiplication in 128 bits.
#[inline]
pub fn compare_value(f1: Fraction, f2: Fraction) -> Ordering {
    let lhs = f1.num as u128 * f2.den as u128;
    let rhs = f2.num as u128 * f1.den as u128;
    lhs.cmp(&rhs)
}

impl Ord for Fraction {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        compare_value(*self, *other)
    }
}

impl PartialOrd for Fraction {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Parses `p/q`; the input need not be reduced.
    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s.trim().split_once('/').ok_or(Error::ParseFraction)?;
        let p = p.trim().parse().map_err(|_| Error::ParseFraction)?;
        let q = q.trim().parse().map_err(|_| Error::ParseFraction)?;
        Fraction::new(p, q)
    }
}

/// The order `n` of a Farey sequence, `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FareyOrder(pub(crate) u64);

impl FareyOrder {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            Err(Error::ZeroOrder)
        } else {
            Ok(FareyOrder(n))
        }
    }

    /// Like [`FareyOrder::new`] but also requires `n >= 4`, where `f(n)` is defined.
    pub fn for_threshold(n: u64) -> Result<Self> {
        if n < 4 {
            Err(Error::OrderTooSmall { n, min: 4 })
        } else {
            Ok(FareyOrder(n))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FareyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fr(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn order(n: u64) -> FareyOrder {
        FareyOrder::new(n).unwrap()
    }

    /// All of `F_n`, by enumeration and sort.
    fn brute_farey(n: u64) -> Vec<Fraction> {
        let mut v: Vec<_> = (1..=n)
            .flat_map(|q| {
                (0..=q)
                    .filter(move |&p| p.gcd(&q) == 1)
                    .map(move |p| fr(p, q))
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(fr(2, 4), Fraction::from_coprime(1, 2));
        assert_eq!(fr(0, 7), Fraction::ZERO);
        let x = fr(19, 40);
        assert_eq!((x.num(), x.den()), (19, 40));
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert_eq!(Fraction::new(1, 0), Err(Error::ZeroDenominator));
        assert_eq!(
            Fraction::new(5, 4),
            Err(Error::OutsideUnitInterval { num: 5, den: 4 })
        );
        assert_eq!(Fraction::new(0, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/8".parse::<Fraction>().unwrap().to_string(), "3/4");
        assert_eq!(" 1 / 1 ".parse::<Fraction>().unwrap(), Fraction::ONE);
        assert!("3".parse::<Fraction>().is_err());
        assert!("a/3".parse::<Fraction>().is_err());
        assert!("4/3".parse::<Fraction>().is_err());
    }

    #[test]
    fn similarly_ordered_examples() {
        assert!(similarly_ordered(fr(2, 5), fr(3, 7)));
        assert!(!similarly_ordered(fr(2, 5), fr(3, 4)));
        assert!(similarly_ordered(fr(1, 3), fr(1, 2)));
    }

    #[test]
    fn neighbor_examples() {
        assert!(are_farey_neighbors(fr(1, 3), fr(1, 2), order(4)).unwrap());
        assert!(!are_farey_neighbors(fr(1, 3), fr(1, 2), order(5)).unwrap());
        for n in 1..50 {
            assert!(are_farey_neighbors(Fraction::ZERO, fr(1, n), order(n)).unwrap());
        }
        assert!(matches!(
            are_farey_neighbors(fr(1, 2), fr(1, 3), order(4)),
            Err(Error::NotIncreasing { .. })
        ));
        assert!(are_farey_neighbors(fr(1, 2), fr(1, 2), order(4)).is_err());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_value(fr(1, 2), fr(2, 3)), Ordering::Less);
        assert_eq!(compare_value(fr(3, 7), fr(3, 7)), Ordering::Equal);
        // m = 10: 19/40 against 20/39, 19*39 = 741 < 800 = 20*40
        assert_eq!(compare_value(fr(19, 40), fr(20, 39)), Ordering::Less);
    }

    #[test]
    fn neighbor_criterion_matches_enumeration() {
        for n in 1..=30 {
            let f = brute_farey(n);
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    let adjacent = j == i + 1;
                    assert_eq!(
                        are_farey_neighbors(f[i], f[j], order(n)).unwrap(),
                        adjacent,
                        "{} {} in F_{n}",
                        f[i],
                        f[j]
                    );
                }
            }
        }
    }

    #[test]
    fn similarly_ordered_symmetric_and_reflexive() {
        for n in [1, 7, 23, 50] {
            let f = brute_farey(n);
            for &x in &f {
                assert!(similarly_ordered(x, x));
                for &y in &f {
                    assert_eq!(similarly_ordered(x, y), similarly_ordered(y, x));
                }
            }
        }
    }

    #[test]
    fn neighbors_stop_being_neighbors_at_mediant_order() {
        for n in 1..=40 {
            let f = brute_farey(n);
            for w in f.windows(2) {
                let sum = w[0].den() + w[1].den();
                for m in sum..sum + 5 {
                    assert!(!are_farey_neighbors(w[0], w[1], order(m)).unwrap());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ordering_agrees_with_rational_value(p1 in 0u64..10_000, q1 in 1u64..10_000,
                                               p2 in 0u64..10_000, q2 in 1u64..10_000) {
            prop_assume!(p1 <= q1 && p2 <= q2);
            let (a, b) = (fr(p1, q1), fr(p2, q2));
            let ratio = |x: Fraction| num_rational::Ratio::new(x.num() as i64, x.den() as i64);
            prop_assert_eq!(a.cmp(&b), ratio(a).cmp(&ratio(b)));
            prop_assert_eq!(a.to_string().parse::<Fraction>().unwrap(), a);
        }
    }
}
