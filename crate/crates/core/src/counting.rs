//! Cardinality of `F_n`, exact ranks, and the two-sided discrepancy check.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::rational::{FareyOrder, Fraction};

/// Linear sieve producing Euler's totient and the Möbius function up to a limit.
#[derive(Debug, Clone)]
pub struct Sieve {
    phi: Vec<u64>,
    mu: Vec<i8>,
    /// Prefix sums of `mu` (the Mertens function).
    mertens: Vec<i64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::ZeroOrder);
        }
        let limit = limit as usize;
        let mut phi = vec![0u64; limit + 1];
        let mut mu = vec![0i8; limit + 1];
        let mut primes: Vec<usize> = Vec::new();
        phi[1] = 1;
        mu[1] = 1;
        for i in 2..=limit {
            if phi[i] == 0 {
                phi[i] = i as u64 - 1;
                mu[i] = -1;
                primes.push(i);
            }
            for &p in &primes {
                let ip = i * p;
                if ip > limit {
                    break;
                }
                if i % p == 0 {
                    phi[ip] = phi[i] * p as u64;
                    mu[ip] = 0;
                    break;
                }
                phi[ip] = phi[i] * (p as u64 - 1);
                mu[ip] = -mu[i];
            }
        }
        let mut mertens = vec![0i64; limit + 1];
        for i in 1..=limit {
            mertens[i] = mertens[i - 1] + mu[i] as i64;
        }
        Ok(Sieve { phi, mu, mertens })
    }

    pub fn limit(&self) -> u64 {
        (self.phi.len() - 1) as u64
    }

    /// `φ(i)` for `1 <= i <= limit`.
    pub fn phi(&self, i: u64) -> u64 {
        self.phi[i as usize]
    }

    pub fn mu(&self, i: u64) -> i8 {
        self.mu[i as usize]
    }

    fn check(&self, n: FareyOrder) {
        assert!(
            n.get() <= self.limit(),
            "order {n} exceeds sieve limit {}",
            self.limit()
        );
    }

    /// `|F_n| = 1 + Σ φ(i)`, summed directly.
    pub fn farey_count_by_totients(&self, n: FareyOrder) -> u64 {
        self.check(n);
        1 + self.phi[1..=n.get() as usize].iter().sum::<u64>()
    }

    /// `|F_n| = 1 + ½ Σ μ(i)·⌊n/i⌋·(⌊n/i⌋+1)`, grouped over blocks of equal `⌊n/i⌋`.
    pub fn farey_count(&self, n: FareyOrder) -> u64 {
        self.check(n);
        let total = self.mobius_blocks(n.get(), |v| {
            let v = v as i128;
            v * (v + 1)
        });
        debug_assert!(total % 2 == 0);
        (1 + total / 2) as u64
    }

    /// `Σ_{i<=n} μ(i)·g(⌊n/i⌋)` in `O(√n)` calls to `g`.
    fn mobius_blocks(&self, n: u64, mut g: impl FnMut(u64) -> i128) -> i128 {
        let mut acc = 0i128;
        let mut lo = 1u64;
        while lo <= n {
            let v = n / lo;
            let hi = n / v;
            let weight = self.mertens[hi as usize] - self.mertens[lo as usize - 1];
            if weight != 0 {
                acc += weight as i128 * g(v);
            }
            lo = hi + 1;
        }
        acc
    }

    /// `A_n(α)`: the number of `a/b ∈ F_n` with `0 < a/b < α`, both ends excluded.
    ///
    /// Möbius inversion over `gcd(a, b)` reduces this to
    /// `Σ_d μ(d)·G(⌊n/d⌋)` with `G(m) = Σ_{b<=m} #{a >= 1 : a/b < α}`,
    /// and each `G` is a floor sum.
    pub fn rank(&self, n: FareyOrder, alpha: Fraction) -> u64 {
        self.check(n);
        let (p, q) = (alpha.num() as u128, alpha.den() as u128);
        if p == 0 {
            return 0;
        }
        // #{a >= 1 : a*q < p*b} = ⌊(p*b - 1)/q⌋
        let total = self.mobius_blocks(n.get(), |m| floor_sum(m as u128, q, p, p - 1) as i128);
        total as u64
    }

    pub fn dress_check(&self, n: FareyOrder, alpha: Fraction) -> CountReport {
        let total = self.farey_count(n);
        let rank = self.rank(n, alpha);
        let (p, q, nv) = (alpha.num() as i128, alpha.den() as i128, n.get() as i128);
        let big_n = total as i128;
        // N·(α ∓ 1/n) = N·(p·n ∓ q)/(q·n)
        let dress_lower = Ratio::new(big_n * (p * nv - q), q * nv);
        let dress_upper = Ratio::new(big_n * (p * nv + q), q * nv);
        let r = Ratio::from_integer(rank as i128);
        CountReport {
            n: n.get(),
            total,
            alpha,
            rank,
            dress_lower,
            dress_upper,
            holds: dress_lower <= r && r <= dress_upper,
        }
    }
}

/// `Σ_{i=0}^{count-1} ⌊(a·i + b)/m⌋` for non-negative arguments.
pub fn floor_sum(mut count: u128, mut m: u128, mut a: u128, mut b: u128) -> u128 {
    let mut ans = 0u128;
    loop {
        if a >= m {
            ans += count * (count.saturating_sub(1)) / 2 * (a / m);
            a %= m;
        }
        if b >= m {
            ans += count * (b / m);
            b %= m;
        }
        let y_max = a * count + b;
        if y_max < m {
            break;
        }
        count = y_max / m;
        b = y_max % m;
        core::mem::swap(&mut m, &mut a);
    }
    ans
}

/// Result of comparing `A_n(α)` with `N·(α - 1/n)` and `N·(α + 1/n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n: u64,
    /// `N = |F_n|`.
    pub total: u64,
    pub alpha: Fraction,
    pub rank: u64,
    pub dress_lower: Ratio<i128>,
    pub dress_upper: Ratio<i128>,
    pub holds: bool,
}

/// `[φ(1), ..., φ(limit)]`.
pub fn totient_sieve(limit: u64) -> Result<Vec<u64>> {
    let s = Sieve::new(limit)?;
    Ok(s.phi[1..].to_vec())
}

pub fn farey_count(n: FareyOrder) -> u64 {
    Sieve::new(n.get())
        .expect("order is positive")
        .farey_count(n)
}

pub fn farey_count_by_totients(n: FareyOrder) -> u64 {
    Sieve::new(n.get())
        .expect("order is positive")
        .farey_count_by_totients(n)
}

/// `4·N > n²`, in exact integers.
pub fn check_n_lower_bound(n: FareyOrder) -> bool {
    let total = farey_count(n) as u128;
    4 * total > (n.get() as u128).pow(2)
}

pub fn rank(n: FareyOrder, alpha: Fraction) -> u64 {
    Sieve::new(n.get())
        .expect("order is positive")
        .rank(n, alpha)
}

pub fn dress_check(n: FareyOrder, alpha: Fraction) -> CountReport {
    Sieve::new(n.get())
        .expect("order is positive")
        .dress_check(n, alpha)
}

/// The values of `F_k` together with the midpoints of consecutive values:
/// the α grid used for sweeping the discrepancy check.
pub fn dress_grid(k: FareyOrder) -> Vec<Fraction> {
    let values: Vec<Fraction> = crate::generator::FareyStream::new(k).collect();
    let mut grid = Vec::with_capacity(2 * values.len());
    for w in values.windows(2) {
        let (x, y) = (w[0], w[1]);
        grid.push(x);
        let num = x.num() * y.den() + y.num() * x.den();
        let den = 2 * x.den() * y.den();
        grid.push(Fraction::new(num, den).expect("midpoint lies in [0, 1]"));
    }
    grid.extend(values.last());
    grid
}
