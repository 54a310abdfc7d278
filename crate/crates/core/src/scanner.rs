//! The similar-order threshold `f(n)` and the checks built around it.
//!
//! `f(n)` is the largest `m` such that every pair of `F_n` at index distance
//! at most `m` is similarly ordered, so it is one less than the smallest
//! index distance of a bad pair. The scan streams `F_n` once through a
//! window whose width starts at the explicit upper bound `⌊n/4⌋ + d(n) + 1`
//! and shrinks as closer bad pairs are found.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::counting::Sieve;
use crate::error::{Error, Result};
use crate::generator::FareyStream;
use crate::rational::{is_bad_pair, FareyOrder, Fraction};

/// The `n < 92` for which `f(n)` falls short of `⌊n/4⌋ + d(n)`.
pub const EXCEPTIONAL_ORDERS: [u64; 15] =
    [7, 9, 11, 15, 19, 23, 25, 27, 31, 35, 39, 49, 51, 63, 91];

/// From this order on, `f(n) = ⌊n/4⌋ + d(n)` is expected without exception.
pub const EQUALITY_FROM: u64 = 92;

/// A pair of `F_n` that is not similarly ordered; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BadPair {
    pub k_index: u64,
    pub l_index: u64,
    pub fk: Fraction,
    pub fl: Fraction,
}

impl BadPair {
    #[inline]
    pub fn distance(&self) -> u64 {
        self.l_index - self.k_index
    }

    /// Re-checks the stored pair: increasing in value, increasing in index,
    /// strictly negative product.
    pub fn is_valid(&self) -> bool {
        self.fk < self.fl && self.k_index < self.l_index && is_bad_pair(self.fk, self.fl)
    }

    /// Ordering key for choosing the canonical witness.
    #[inline]
    fn key(&self) -> (u64, u64, u64) {
        (self.distance(), self.k_index, self.l_index)
    }
}

/// `f(n)` together with the minimal bad pair that determines it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FResult {
    pub n: u64,
    pub f: u64,
    pub witness: BadPair,
    /// Wall time of the scan; filled in by callers that measure it.
    pub elapsed_millis: u64,
}

/// The additive offset `d` in `f(n) <= ⌊n/4⌋ + d`: 1, 2, 2, 4 for `n ≡ 0, 1, 2, 3 (mod 4)`.
pub fn d_offset(n: u64) -> u64 {
    match n % 4 {
        0 => 1,
        1 | 2 => 2,
        _ => 4,
    }
}

/// `⌊n/4⌋ + d(n)`.
pub fn upper_bound(n: u64) -> u64 {
    n / 4 + d_offset(n)
}

/// Scans a window-limited stream for the bad pair with the smallest distance.
///
/// `stream` yields consecutive fractions of `F_n` starting at 1-based index
/// `first_index`. Left members are taken while they are `< k_end` (all of them
/// when `k_end` is `None`); right members may run past `k_end`. Only pairs at
/// distance `<= max_distance` are considered. Ties go to the smaller `k_index`.
pub fn scan_window<I>(
    stream: I,
    first_index: u64,
    k_end: Option<Fraction>,
    max_distance: u64,
) -> Option<BadPair>
where
    I: Iterator<Item = Fraction>,
{
    let mut stream = stream.fuse();
    let mut limit = max_distance as usize;
    let mut buf: VecDeque<Fraction> = VecDeque::with_capacity(limit + 1);
    let mut k_index = first_index;
    let mut best = None;

    while limit > 0 {
        while buf.len() <= limit {
            match stream.next() {
                Some(x) => buf.push_back(x),
                None => break,
            }
        }
        let Some(&fk) = buf.front() else { break };
        if k_end.is_some_and(|end| fk >= end) {
            break;
        }
        if let Some(d) = first_bad_partner(&buf, limit) {
            let fl = buf[d];
            best = Some(BadPair {
                k_index,
                l_index: k_index + d as u64,
                fk,
                fl,
            });
            limit = d - 1;
        }
        buf.pop_front();
        k_index += 1;
    }
    best
}

/// Smallest `d in 1..=limit` with `(buf[0], buf[d])` a bad pair.
///
/// A bad partner `c/e` of `a/b` has `c >= a + 1` and `e <= b - 1`, hence
/// `c/e >= (a + 1)/(b - 1)`. The buffer is sorted, so only its tail above that
/// value needs the exact product test.
#[inline]
fn first_bad_partner(buf: &VecDeque<Fraction>, limit: usize) -> Option<usize> {
    let fk = buf[0];
    if fk.den() < 2 {
        return None;
    }
    let max_d = limit.min(buf.len() - 1);
    if max_d == 0 {
        return None;
    }
    let (tn, td) = (fk.num() as u128 + 1, fk.den() as u128 - 1);
    let below_target = |x: &Fraction| (x.num() as u128) * td < tn * x.den() as u128;
    if below_target(&buf[max_d]) {
        return None;
    }
    let start = buf.partition_point(below_target);
    (start..=max_d).find(|&d| is_bad_pair(fk, buf[d]))
}

/// Computes `f(n)` exactly, with its canonical witness.
pub fn f_of_n(n: FareyOrder) -> Result<FResult> {
    let n = FareyOrder::for_threshold(n.get())?;
    let ceiling = upper_bound(n.get()) + 1;
    let witness = scan_window(FareyStream::new(n), 1, None, ceiling)
        .ok_or(Error::NoBadPair { n: n.get() })?;
    Ok(FResult {
        n: n.get(),
        f: witness.distance() - 1,
        witness,
        elapsed_millis: 0,
    })
}

/// One slice of a split scan: left members in `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk {
    pub start: Fraction,
    pub end: Option<Fraction>,
    /// 1-based index of `start` in `F_n`.
    pub start_index: u64,
}

/// Splits `F_n` into `parts` value ranges with boundaries at `j/parts`.
///
/// Starting indices are exact ranks, so the chunks can be scanned
/// independently and merged with [`merge_witnesses`].
pub fn plan_chunks(n: FareyOrder, parts: u64, sieve: &Sieve) -> Vec<Chunk> {
    let parts = parts.clamp(1, n.get());
    let mut bounds: Vec<Fraction> = (0..parts)
        .map(|j| Fraction::new(j, parts).expect("j < parts"))
        .collect();
    bounds.dedup();
    let mut chunks = Vec::with_capacity(bounds.len());
    for (i, &start) in bounds.iter().enumerate() {
        let start_index = if start == Fraction::ZERO {
            1
        } else {
            sieve.rank(n, start) + 2
        };
        chunks.push(Chunk {
            start,
            end: bounds.get(i + 1).copied(),
            start_index,
        });
    }
    chunks
}

/// Scans one chunk with the given window ceiling.
pub fn scan_chunk(n: FareyOrder, chunk: &Chunk, max_distance: u64) -> Result<Option<BadPair>> {
    let stream = FareyStream::starting_at(n, chunk.start)?;
    Ok(scan_window(
        stream,
        chunk.start_index,
        chunk.end,
        max_distance,
    ))
}

/// The canonical witness among candidates: smallest distance, then `k_index`.
pub fn merge_witnesses<I: IntoIterator<Item = BadPair>>(candidates: I) -> Option<BadPair> {
    candidates.into_iter().min_by_key(BadPair::key)
}

/// The explicit bad pair for `n`, and the index distance it is claimed to sit at.
///
/// With `m = ⌊n/4⌋`: for `n = 4m`, `((2m-1)/4m, 2m/(4m-1))` at `m + 2`;
/// for `n = 4m+1, 4m+2`, `(2m/(4m+1), (2m+1)/4m)` at `m + 3`;
/// for `n = 4m+3`, the same pair at `m + 5`.
pub fn upper_witness(n: FareyOrder) -> Result<(Fraction, Fraction, u64)> {
    let n = FareyOrder::for_threshold(n.get())?.get();
    let m = n / 4;
    let (fk, fl, dist) = match n % 4 {
        0 => (
            Fraction::new(2 * m - 1, 4 * m)?,
            Fraction::new(2 * m, 4 * m - 1)?,
            m + 2,
        ),
        1 | 2 => (
            Fraction::new(2 * m, 4 * m + 1)?,
            Fraction::new(2 * m + 1, 4 * m)?,
            m + 3,
        ),
        _ => (
            Fraction::new(2 * m, 4 * m + 1)?,
            Fraction::new(2 * m + 1, 4 * m)?,
            m + 5,
        ),
    };
    Ok((fk, fl, dist))
}

/// Where the explicit witness pair actually sits in `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCheck {
    pub n: u64,
    pub fk: Fraction,
    pub fl: Fraction,
    pub expected_distance: u64,
    /// 1-based positions in `F_n`, if found.
    pub k_index: Option<u64>,
    pub l_index: Option<u64>,
}

impl WitnessCheck {
    pub fn observed_distance(&self) -> Option<u64> {
        Some(self.l_index? - self.k_index?)
    }

    pub fn passed(&self) -> bool {
        self.observed_distance() == Some(self.expected_distance)
            && is_bad_pair(self.fk, self.fl)
            && self.expected_distance == upper_bound(self.n) + 1
    }
}

/// Locates the explicit witness in a stream of `F_n`.
pub fn witness_check(n: FareyOrder) -> Result<WitnessCheck> {
    let (fk, fl, expected_distance) = upper_witness(n)?;
    let mut check = WitnessCheck {
        n: n.get(),
        fk,
        fl,
        expected_distance,
        k_index: None,
        l_index: None,
    };
    for (i, x) in FareyStream::new(n).enumerate() {
        if x == fk {
            check.k_index = Some(i as u64 + 1);
        } else if x == fl {
            check.l_index = Some(i as u64 + 1);
            break;
        }
    }
    Ok(check)
}

pub fn verify_witness(n: FareyOrder) -> Result<bool> {
    Ok(witness_check(n)?.passed())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `f(n) = ⌊n/4⌋ + d(n)`.
    Match,
    /// `f(n)` below the bound at one of [`EXCEPTIONAL_ORDERS`].
    Exceptional,
    Violation(ViolationKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `f(n)` above `⌊n/4⌋ + d(n)`.
    AboveUpperBound,
    /// `f(n)` below the bound at an order not in the exceptional list.
    BelowBound,
    /// A listed exceptional order reaches the bound.
    ListedButMatches,
    /// `f(n) <= n/4`.
    NotAboveQuarter,
}

/// Classifies one `(n, f(n))` against the conjectured formula.
pub fn classify(n: u64, f: u64) -> Classification {
    let bound = upper_bound(n);
    let listed = EXCEPTIONAL_ORDERS.contains(&n);
    if 4 * f <= n {
        Classification::Violation(ViolationKind::NotAboveQuarter)
    } else if f > bound {
        Classification::Violation(ViolationKind::AboveUpperBound)
    } else if f == bound {
        if listed {
            Classification::Violation(ViolationKind::ListedButMatches)
        } else {
            Classification::Match
        }
    } else if listed && n < EQUALITY_FROM {
        Classification::Exceptional
    } else {
        Classification::Violation(ViolationKind::BelowBound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub n: u64,
    pub f: u64,
    pub bound: u64,
    pub kind: ViolationKind,
}

/// Aggregate outcome of checking a range of orders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConjectureReport {
    pub matches: u64,
    pub exceptional: Vec<u64>,
    pub violations: Vec<Violation>,
}

impl ConjectureReport {
    /// Builds the report from `(n, f(n))` pairs in any order; lists come out sorted by `n`.
    pub fn from_values<I: IntoIterator<Item = (u64, u64)>>(values: I) -> Self {
        let mut report = ConjectureReport::default();
        for (n, f) in values {
            match classify(n, f) {
                Classification::Match => report.matches += 1,
                Classification::Exceptional => report.exceptional.push(n),
                Classification::Violation(kind) => report.violations.push(Violation {
                    n,
                    f,
                    bound: upper_bound(n),
                    kind,
                }),
            }
        }
        report.exceptional.sort_unstable();
        report.violations.sort_unstable_by_key(|v| v.n);
        report
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes `f(n)` sequentially for `lo..=hi` and classifies each.
pub fn verify_conjecture(lo: u64, hi: u64) -> Result<ConjectureReport> {
    if lo < 4 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for n in lo..=hi {
        values.push((n, f_of_n(FareyOrder(n))?.f));
    }
    Ok(ConjectureReport::from_values(values))
}

/// `distance > n·x/12 - n^(2/3)/3`, decided without floating point.
///
/// Rearranged as `4·Q·n^(2/3) > n·P - 12·Q·distance =: L` for `x = P/Q`,
/// which for `L >= 0` is `64·Q³·n² > L³`.
pub fn exceeds_density_bound(n: u64, distance: u64, x: Ratio<u128>) -> Result<bool> {
    let (p, q) = (*x.numer() as i128, *x.denom() as i128);
    let l = (n as i128)
        .checked_mul(p)
        .and_then(|np| np.checked_sub(12i128.checked_mul(q)?.checked_mul(distance as i128)?))
        .ok_or(Error::Overflow)?;
    if l < 0 {
        return Ok(true);
    }
    let l = l as u128;
    let q = q as u128;
    let lhs = q
        .checked_pow(3)
        .and_then(|q3| q3.checked_mul(64))
        .and_then(|v| v.checked_mul((n as u128).checked_pow(2)?))
        .ok_or(Error::Overflow)?;
    let rhs = l.checked_pow(3).ok_or(Error::Overflow)?;
    Ok(lhs > rhs)
}

/// `distance > (n/12)·(1 - 4/n^(1/3))`; vacuous for `n < 64` where the bound is negative.
pub fn lower_bound_check(result: &FResult) -> bool {
    if result.n < 64 {
        return true;
    }
    exceeds_density_bound(result.n, result.witness.distance(), Ratio::from_integer(1))
        .expect("order fits the exact comparison")
}

/// Outcome of the local-density dichotomy for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityCheck {
    /// `x = n·(fl - fk)`.
    pub x: Ratio<u128>,
    /// Smallest-denominator fraction `a/b` in `[fk, fl]` with `b < 6/x`, if any.
    pub small_denominator: Option<Fraction>,
    /// Whether `distance > n·x/12 - n^(2/3)/3`.
    pub distance_bound: bool,
}

impl DensityCheck {
    pub fn holds(&self) -> bool {
        self.small_denominator.is_some() || self.distance_bound
    }
}

/// Evaluates both branches of the local-density dichotomy for `pair` in `F_n`.
pub fn local_density(n: FareyOrder, pair: &BadPair) -> Result<DensityCheck> {
    let (fk, fl) = (pair.fk, pair.fl);
    if fk >= fl {
        return Err(Error::NotIncreasing {
            left: fk,
            right: fl,
        });
    }
    let nv = n.get() as u128;
    let gap_num = fk.determinant(fl) as u128;
    let gap_den = fk.den() as u128 * fl.den() as u128;
    let x = Ratio::new(nv * gap_num, gap_den);
    let (xp, xq) = (*x.numer(), *x.denom());

    let mut small_denominator = None;
    let mut b: u128 = 1;
    // b < 6/x  <=>  b·P < 6·Q
    while b * xp < 6 * xq && b <= nv {
        let lo = (b * fk.num() as u128).div_ceil(fk.den() as u128);
        let hi = b * fl.num() as u128 / fl.den() as u128;
        if lo <= hi {
            small_denominator = Some(Fraction::new(lo as u64, b as u64)?);
            break;
        }
        b += 1;
    }
    let distance_bound = exceeds_density_bound(n.get(), pair.distance(), x)?;
    Ok(DensityCheck {
        x,
        small_denominator,
        distance_bound,
    })
}

pub fn local_density_check(n: FareyOrder, pair: &BadPair) -> Result<bool> {
    Ok(local_density(n, pair)?.holds())
}
