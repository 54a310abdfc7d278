//! Generation of `F_n` and the local structure around a fraction.

use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::rational::{are_farey_neighbors, FareyOrder, Fraction};

/// Successor of `cur` in `F_n`, given its predecessor `prev`.
///
/// Uses the three-term recurrence `k = (n + prev.den) / cur.den`,
/// `next = (k*cur.num - prev.num) / (k*cur.den - prev.den)`.
pub fn farey_next(prev: Fraction, cur: Fraction, n: FareyOrder) -> Result<Fraction> {
    if cur == Fraction::ONE {
        return Err(Error::EndOfSequence);
    }
    if prev >= cur {
        return Err(Error::NotIncreasing {
            left: prev,
            right: cur,
        });
    }
    Ok(step(prev, cur, n.get()))
}

#[inline]
fn step(prev: Fraction, cur: Fraction, n: u64) -> Fraction {
    let k = (n + prev.den()) / cur.den();
    let next = Fraction::from_coprime(k * cur.num() - prev.num(), k * cur.den() - prev.den());
    debug_assert!(are_farey_neighbors(cur, next, FareyOrder::new(n).unwrap()).unwrap_or(false));
    next
}

/// Inverse of `a` modulo `b`, as a representative in `1..=b`.
fn inverse_mod(a: u64, b: u64) -> u64 {
    if b == 1 {
        return 1;
    }
    let e = (a as i128).extended_gcd(&(b as i128));
    debug_assert_eq!(e.gcd, 1);
    let inv = e.x.rem_euclid(b as i128) as u64;
    if inv == 0 {
        b
    } else {
        inv
    }
}

/// Largest integer `<= n` congruent to `r0` mod `b`, with `1 <= r0 <= b <= n`.
fn largest_in_class(r0: u64, b: u64, n: u64) -> u64 {
    r0 + b * ((n - r0) / b)
}

/// The fraction immediately before `f` in `F_n`.
pub fn predecessor_in(f: Fraction, n: FareyOrder) -> Result<Fraction> {
    let (a, b, n) = (f.num(), f.den(), n.get());
    if f == Fraction::ZERO {
        return Err(Error::Endpoint(f));
    }
    if b > n {
        return Err(Error::DenominatorMismatch {
            fraction: f,
            expected: n,
        });
    }
    // a*q - b*p = 1
    let q = largest_in_class(inverse_mod(a % b, b), b, n);
    let p = (a as u128 * q as u128 - 1) / b as u128;
    Ok(Fraction::from_coprime(p as u64, q))
}

/// The fraction immediately after `f` in `F_n`.
pub fn successor_in(f: Fraction, n: FareyOrder) -> Result<Fraction> {
    let (a, b, n) = (f.num(), f.den(), n.get());
    if f == Fraction::ONE {
        return Err(Error::EndOfSequence);
    }
    if b > n {
        return Err(Error::DenominatorMismatch {
            fraction: f,
            expected: n,
        });
    }
    // b*c - a*d = 1
    let inv = inverse_mod(a % b, b);
    let d0 = if inv == b { b } else { b - inv };
    let d = largest_in_class(d0, b, n);
    let c = (1 + a as u128 * d as u128) / b as u128;
    Ok(Fraction::from_coprime(c as u64, d))
}

/// Pull-based iterator over `F_n` in ascending order.
///
/// Holds only the last emitted fraction and the pending one.
#[derive(Debug, Clone)]
pub struct FareyStream {
    n: u64,
    prev: Option<Fraction>,
    pending: Option<Fraction>,
}

impl FareyStream {
    /// The whole of `F_n`, from `0/1` to `1/1`.
    pub fn new(n: FareyOrder) -> Self {
        FareyStream {
            n: n.get(),
            prev: None,
            pending: Some(Fraction::ZERO),
        }
    }

    /// The tail of `F_n` starting at `start`, which must have `den <= n`.
    pub fn starting_at(n: FareyOrder, start: Fraction) -> Result<Self> {
        if start.den() > n.get() {
            return Err(Error::DenominatorMismatch {
                fraction: start,
                expected: n.get(),
            });
        }
        Ok(FareyStream {
            n: n.get(),
            prev: None,
            pending: Some(start),
        })
    }

    pub fn order(&self) -> u64 {
        self.n
    }
}

impl Iterator for FareyStream {
    type Item = Fraction;

    #[inline]
    fn next(&mut self) -> Option<Fraction> {
        let cur = self.pending?;
        self.pending = if cur == Fraction::ONE {
            None
        } else {
            Some(match self.prev {
                Some(prev) => step(prev, cur, self.n),
                None => successor_in(cur, FareyOrder(self.n)).ok()?,
            })
        };
        self.prev = Some(cur);
        Some(cur)
    }
}

impl core::iter::FusedIterator for FareyStream {}

/// Convenience: `FareyStream::new(n)`.
pub fn farey_stream(n: FareyOrder) -> FareyStream {
    FareyStream::new(n)
}

/// The neighbors `(p/q, r/s)` of `f` in `F_b`, where `b = f.den`.
///
/// Computed from the modular inverse of the numerator, so `a*q - b*p = 1`
/// and `b*r - a*s = 1` with `q, s < b`.
pub fn neighbors_in_order(f: Fraction, b: FareyOrder) -> Result<(Fraction, Fraction)> {
    if f.den() != b.get() {
        return Err(Error::DenominatorMismatch {
            fraction: f,
            expected: b.get(),
        });
    }
    if f == Fraction::ZERO || f == Fraction::ONE {
        return Err(Error::Endpoint(f));
    }
    Ok((predecessor_in(f, b)?, successor_in(f, b)?))
}

/// The run of `F_n` around a fraction `a/b`: two arithmetic progressions
/// with common difference `(a, b)` on either side of the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub center: Fraction,
    /// Left neighbor `p/q` of the center in `F_b`.
    pub left_base: Fraction,
    /// Right neighbor `r/s` of the center in `F_b`.
    pub right_base: Fraction,
    /// `(p + j a)/(q + j b)` for `j = c..=d`, ascending.
    pub left: Vec<Fraction>,
    /// `(r + j a)/(s + j b)` for `j = d'..=c'` (descending `j`), ascending in value.
    pub right: Vec<Fraction>,
    pub c: u64,
    pub d: u64,
    pub c_prime: u64,
    pub d_prime: u64,
}

impl Segment {
    /// `left ++ [center] ++ right`: the segment as a run of `F_n`.
    pub fn run(&self) -> Vec<Fraction> {
        let mut out = Vec::with_capacity(self.left.len() + self.right.len() + 1);
        out.extend_from_slice(&self.left);
        out.push(self.center);
        out.extend_from_slice(&self.right);
        out
    }
}

/// Builds the segment of `F_n` around `f = a/b` for `n >= 5b - 1`, `b >= 2`.
///
/// Offsets: `c = (n - 2q - b) div 2b + 1`, `c' = (n - 2s - b) div 2b + 1`,
/// `d = (n - q) div b`, `d' = (n - s) div b`.
pub fn segment_around(f: Fraction, n: FareyOrder) -> Result<Segment> {
    let b = f.den();
    if b == 1 {
        return Err(Error::Endpoint(f));
    }
    let nv = n.get();
    if nv < 5 * b - 1 {
        return Err(Error::SegmentTooSmall { n: nv, den: b });
    }
    let a = f.num();
    let (left_base, right_base) = neighbors_in_order(f, FareyOrder(b))?;
    let (p, q) = (left_base.num(), left_base.den());
    let (r, s) = (right_base.num(), right_base.den());

    // n >= 5b - 1 and q, s <= b - 1 keep these numerators positive.
    let c = (nv - 2 * q - b) / (2 * b) + 1;
    let c_prime = (nv - 2 * s - b) / (2 * b) + 1;
    let d = (nv - q) / b;
    let d_prime = (nv - s) / b;

    let left = (c..=d)
        .map(|j| Fraction::from_coprime(p + j * a, q + j * b))
        .collect();
    let right = (c_prime..=d_prime)
        .rev()
        .map(|j| Fraction::from_coprime(r + j * a, s + j * b))
        .collect();
    Ok(Segment {
        center: f,
        left_base,
        right_base,
        left,
        right,
        c,
        d,
        c_prime,
        d_prime,
    })
}

/// `(n + b + 1) / (2b)` for `f = a/b`: pairs of `F_n` straddling `f` within
/// this index distance are similarly ordered.
pub fn similar_order_radius(f: Fraction, n: FareyOrder) -> Ratio<u64> {
    let b = f.den();
    Ratio::new(n.get() + b + 1, 2 * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::similarly_ordered;
    use alloc::vec;

    fn fr(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn order(n: u64) -> FareyOrder {
        FareyOrder::new(n).unwrap()
    }

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
    fn next_term_examples() {
        assert_eq!(farey_next(fr(0, 1), fr(1, 4), order(4)).unwrap(), fr(1, 3));
        assert_eq!(
            farey_next(fr(15, 19), fr(19, 24), order(40)).unwrap(),
            fr(23, 29)
        );
        assert_eq!(farey_next(fr(1, 2), fr(2, 3), order(4)).unwrap(), fr(3, 4));
        assert_eq!(
            farey_next(fr(3, 4), Fraction::ONE, order(4)),
            Err(Error::EndOfSequence)
        );
    }

    #[test]
    fn stream_examples() {
        assert_eq!(
            farey_stream(order(1)).collect::<Vec<_>>(),
            vec![Fraction::ZERO, Fraction::ONE]
        );
        let f4: Vec<_> = farey_stream(order(4)).collect();
        assert_eq!(
            f4,
            vec![
                fr(0, 1),
                fr(1, 4),
                fr(1, 3),
                fr(1, 2),
                fr(2, 3),
                fr(3, 4),
                fr(1, 1)
            ]
        );
        let f40: Vec<_> = farey_stream(order(40)).collect();
        let expected = [
            fr(15, 19),
            fr(19, 24),
            fr(23, 29),
            fr(27, 34),
            fr(31, 39),
            fr(4, 5),
            fr(29, 36),
            fr(25, 31),
            fr(21, 26),
            fr(17, 21),
        ];
        assert!(f40.windows(expected.len()).any(|w| w == expected));
    }

    #[test]
    fn stream_matches_enumeration() {
        for n in 1..=60 {
            assert_eq!(
                farey_stream(order(n)).collect::<Vec<_>>(),
                brute_farey(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn stream_consecutive_pairs_are_neighbors() {
        for n in 1..=200 {
            let v: Vec<_> = farey_stream(order(n)).collect();
            for w in v.windows(2) {
                assert!(are_farey_neighbors(w[0], w[1], order(n)).unwrap());
            }
        }
    }

    #[test]
    fn stream_from_interior_point() {
        for n in 1..=40 {
            let full = brute_farey(n);
            for (i, &start) in full.iter().enumerate() {
                let tail: Vec<_> = FareyStream::starting_at(order(n), start).unwrap().collect();
                assert_eq!(tail, full[i..]);
            }
        }
        assert!(FareyStream::starting_at(order(4), fr(1, 5)).is_err());
    }

    #[test]
    fn neighbors_examples() {
        assert_eq!(
            neighbors_in_order(fr(4, 5), order(5)).unwrap(),
            (fr(3, 4), fr(1, 1))
        );
        assert_eq!(
            neighbors_in_order(fr(1, 2), order(2)).unwrap(),
            (fr(0, 1), fr(1, 1))
        );
        assert_eq!(
            neighbors_in_order(fr(2, 5), order(5)).unwrap(),
            (fr(1, 3), fr(1, 2))
        );
        assert!(neighbors_in_order(fr(2, 5), order(6)).is_err());
        assert!(neighbors_in_order(Fraction::ONE, order(1)).is_err());
        assert!(neighbors_in_order(Fraction::ZERO, order(1)).is_err());
    }

    #[test]
    fn neighbors_match_enumeration() {
        for b in 2..=60 {
            let fb = brute_farey(b);
            for i in 1..fb.len() - 1 {
                let f = fb[i];
                if f.den() != b {
                    continue;
                }
                let (l, r) = neighbors_in_order(f, order(b)).unwrap();
                assert_eq!((l, r), (fb[i - 1], fb[i + 1]));
                assert!(l.den() < b && r.den() < b);
                assert_eq!(
                    f.num() as i128 * l.den() as i128 - b as i128 * l.num() as i128,
                    1
                );
                assert_eq!(
                    b as i128 * r.num() as i128 - f.num() as i128 * r.den() as i128,
                    1
                );
            }
        }
    }

    #[test]
    fn predecessor_and_successor_in_higher_order() {
        for n in 1..=40 {
            let full = brute_farey(n);
            for w in full.windows(2) {
                assert_eq!(successor_in(w[0], order(n)).unwrap(), w[1]);
                assert_eq!(predecessor_in(w[1], order(n)).unwrap(), w[0]);
            }
        }
    }

    #[test]
    fn segment_of_four_fifths_at_forty() {
        let seg = segment_around(fr(4, 5), order(40)).unwrap();
        assert_eq!(
            seg.left,
            vec![fr(15, 19), fr(19, 24), fr(23, 29), fr(27, 34), fr(31, 39)]
        );
        assert_eq!(
            seg.right,
            vec![fr(29, 36), fr(25, 31), fr(21, 26), fr(17, 21)]
        );
        assert_eq!((seg.c, seg.d, seg.d_prime, seg.c_prime), (3, 7, 7, 4));
    }

    #[test]
    fn segment_of_one_half_at_nine() {
        // q = s = 1, b = 2: c = (9-2-2) div 4 + 1 = 2, d = 8 div 2 = 4.
        let seg = segment_around(fr(1, 2), order(9)).unwrap();
        assert_eq!((seg.c, seg.d, seg.d_prime, seg.c_prime), (2, 4, 4, 2));
        let f9 = brute_farey(9);
        let run = seg.run();
        assert!(f9.windows(run.len()).any(|w| w == run));
        assert_eq!(
            run,
            vec![
                fr(2, 5),
                fr(3, 7),
                fr(4, 9),
                fr(1, 2),
                fr(5, 9),
                fr(4, 7),
                fr(3, 5)
            ]
        );
    }

    #[test]
    fn segment_errors() {
        assert_eq!(
            segment_around(fr(4, 5), order(23)),
            Err(Error::SegmentTooSmall { n: 23, den: 5 })
        );
        assert!(segment_around(fr(4, 5), order(24)).is_ok());
        assert_eq!(
            segment_around(Fraction::ONE, order(10)),
            Err(Error::Endpoint(Fraction::ONE))
        );
    }

    #[test]
    fn segment_cross_side_determinant_is_two() {
        for b in 2..=12u64 {
            for a in 1..b {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let seg = segment_around(fr(a, b), order(7 * b + 3)).unwrap();
                for x in &seg.left {
                    for y in &seg.right {
                        let det = b as i128 * (y.num() as i128 - x.num() as i128)
                            - a as i128 * (y.den() as i128 - x.den() as i128);
                        assert_eq!(det, 2);
                        assert!(similarly_ordered(*x, *y));
                    }
                }
            }
        }
    }

    #[test]
    fn radius_examples() {
        assert_eq!(similar_order_radius(fr(1, 2), order(40)), Ratio::new(43, 4));
        assert_eq!(similar_order_radius(fr(4, 5), order(40)), Ratio::new(23, 5));
        assert_eq!(
            similar_order_radius(Fraction::ZERO, order(10)),
            Ratio::from_integer(6)
        );
    }
}
