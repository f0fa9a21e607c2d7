//! Permutation statistics and brute-force oracles.
//!
//! Permutations are in one-line notation over `1..=n`. The statistics here
//! are the ones whose distributions match tableau statistics: cycles and
//! right-to-left minima (unrestricted rows), descents (rows minus one),
//! ascents (columns), and occurrences of the pattern 31-2 and crossings
//! (superfluous 1s).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng::{rng_from_seed, Rng};
use crate::table::DistributionTable;

/// Longest `n` for [`exhaustive_distribution`].
pub const MAX_EXHAUSTIVE_LENGTH: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("length {n} is outside 1..={max}")]
    LengthOutOfRange { n: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(PermError::NotAPermutation {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(PermError::NotAPermutation {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn cycles(&self) -> usize {
        cycles(&self.0)
    }

    pub fn rl_minima(&self) -> usize {
        rl_minima(&self.0)
    }

    pub fn descents(&self) -> usize {
        descents(&self.0)
    }

    pub fn ascents(&self) -> usize {
        ascents(&self.0)
    }

    pub fn count_31_2(&self) -> u64 {
        count_31_2(&self.0)
    }

    pub fn crossings(&self) -> u64 {
        crossings(&self.0)
    }

    pub fn stat(&self, stat: PermStat) -> u64 {
        stat.eval(&self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, PermError> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| PermError::NotAPermutation {
                        n: 0,
                        reason: format!("bad entry `{}`", t.trim()),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(values)
    }
}

// The free functions below take one-line notation over 1..=n and assume it
// is a valid permutation.

pub fn cycles(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] - 1;
        }
    }
    count
}

/// Entries smaller than everything to their right.
pub fn rl_minima(p: &[usize]) -> usize {
    let mut min = usize::MAX;
    let mut count = 0;
    for &v in p.iter().rev() {
        if v < min {
            min = v;
            count += 1;
        }
    }
    count
}

pub fn descents(p: &[usize]) -> usize {
    p.windows(2).filter(|w| w[0] > w[1]).count()
}

pub fn ascents(p: &[usize]) -> usize {
    p.windows(2).filter(|w| w[0] < w[1]).count()
}

/// Occurrences of 31-2: pairs `i < j` (1-based, `i >= 2`) with
/// `p[i-1] > p[j] > p[i]`. Direct `O(n^2)` scan.
pub fn count_31_2_naive(p: &[usize]) -> u64 {
    let mut count = 0;
    for i in 1..p.len() {
        let (hi, lo) = (p[i - 1], p[i]);
        if hi <= lo {
            continue;
        }
        count += p[i + 1..].iter().filter(|&&v| lo < v && v < hi).count() as u64;
    }
    count
}

/// Same count in `O(n log n)`: scanning positions right to left, a Fenwick
/// tree over values holds everything to the right of the current position,
/// and each descent `(p[i-1], p[i])` contributes the number of those values
/// strictly between its two entries.
pub fn count_31_2(p: &[usize]) -> u64 {
    let n = p.len();
    let mut tree = Fenwick::new(n);
    let mut count = 0;
    for i in (1..n).rev() {
        if i + 1 < n {
            tree.add(p[i + 1]);
        }
        let (hi, lo) = (p[i - 1], p[i]);
        if hi > lo {
            count += tree.prefix(hi - 1) - tree.prefix(lo);
        }
    }
    count
}

/// Crossings: pairs `(i, j)` with `i < j <= p_i < p_j` or
/// `i > j > p_i > p_j`, positions 1-based. Definition scan, `O(n^2)`.
pub fn crossings(p: &[usize]) -> u64 {
    let n = p.len();
    let mut count = 0;
    for i in 1..=n {
        let pi = p[i - 1];
        for j in 1..=n {
            let pj = p[j - 1];
            if (i < j && j <= pi && pi < pj) || (i > j && j > pi && pi > pj) {
                count += 1;
            }
        }
    }
    count
}

/// Cumulative counts over values `1..=n`.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, value: usize) {
        let mut i = value;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of inserted values `<= value`.
    fn prefix(&self, value: usize) -> u64 {
        let mut i = value;
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermStat {
    Cycles,
    RlMinima,
    Descents,
    Ascents,
    Pattern31_2,
    Crossings,
}

impl PermStat {
    pub fn eval(self, p: &[usize]) -> u64 {
        match self {
            PermStat::Cycles => cycles(p) as u64,
            PermStat::RlMinima => rl_minima(p) as u64,
            PermStat::Descents => descents(p) as u64,
            PermStat::Ascents => ascents(p) as u64,
            PermStat::Pattern31_2 => count_31_2(p),
            PermStat::Crossings => crossings(p),
        }
    }
}

/// Rearranges `p` into the next permutation in lexicographic order;
/// returns false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&v| v > p[i])
        .expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Calls `f` on every permutation of `1..=n` whose first entry is `first`.
fn for_each_with_first(n: usize, first: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = std::iter::once(first)
        .chain((1..=n).filter(|&v| v != first))
        .collect();
    loop {
        f(&p);
        if !next_permutation(&mut p[1..]) {
            break;
        }
    }
}

/// Histogram of a statistic over all `n!` permutations.
pub fn exhaustive_distribution(n: usize, stat: PermStat) -> Result<DistributionTable, PermError> {
    exhaustive_distribution_by(n, |p| stat.eval(p))
}

/// [`exhaustive_distribution`] for an arbitrary statistic; blocks by first
/// entry run in parallel and merge by summation.
pub fn exhaustive_distribution_by<F>(n: usize, stat: F) -> Result<DistributionTable, PermError>
where
    F: Fn(&[usize]) -> u64 + Sync,
{
    if n == 0 || n > MAX_EXHAUSTIVE_LENGTH {
        return Err(PermError::LengthOutOfRange {
            n,
            max: MAX_EXHAUSTIVE_LENGTH,
        });
    }
    let blocks: Vec<DistributionTable> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut table = DistributionTable::new();
            for_each_with_first(n, first, |p| table.increment(stat(p)));
            table
        })
        .collect();
    let mut total = DistributionTable::new();
    for block in blocks {
        for (v, c) in block.iter() {
            total.add(v, c.clone());
        }
    }
    Ok(total)
}

/// Uniform random permutation of `1..=n` from a Fisher–Yates shuffle.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    random_permutation_with(n, &mut rng_from_seed(seed))
}

pub fn random_permutation_with(n: usize, rng: &mut Rng) -> Permutation {
    let mut values: Vec<usize> = (1..=n).collect();
    values.shuffle(rng);
    Permutation(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Vec<usize> {
        v.to_vec()
    }

    #[test]
    fn parse_and_display() {
        let p: Permutation = "2,3,1".parse().unwrap();
        assert_eq!(p.to_string(), "2,3,1");
        assert!("1,1".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
    }

    #[test]
    fn small_values() {
        assert_eq!(Permutation::identity(6).cycles(), 6);
        assert_eq!(cycles(&perm(&[2, 3, 1])), 1);
        assert_eq!(descents(&perm(&[1, 2, 3, 4])), 0);
        assert_eq!(descents(&perm(&[4, 3, 2, 1])), 3);
        assert_eq!(count_31_2_naive(&perm(&[3, 1, 2])), 1);
        assert_eq!(count_31_2(&perm(&[3, 1, 2])), 1);
        assert_eq!(count_31_2(&perm(&[1, 2, 3, 4, 5])), 0);
        assert_eq!(crossings(&perm(&[1, 2, 3, 4])), 0);
        // (2,3,1): only (i,j) = (1,2) satisfies 1 < 2 <= 2 < 3.
        assert_eq!(crossings(&perm(&[2, 3, 1])), 1);
        assert_eq!(rl_minima(&perm(&[2, 3, 1])), 1);
        assert_eq!(rl_minima(&perm(&[1, 2, 3])), 3);
    }

    #[test]
    fn exhaustive_histograms() {
        let d4 = exhaustive_distribution(4, PermStat::Descents).unwrap();
        assert_eq!(
            d4,
            DistributionTable::from_counts([(0u64, 1u32), (1, 11), (2, 11), (3, 1)])
        );
        assert_eq!(
            exhaustive_distribution(5, PermStat::Cycles).unwrap(),
            exhaustive_distribution(5, PermStat::RlMinima).unwrap()
        );
        assert!(exhaustive_distribution(10, PermStat::Cycles).is_err());
        assert!(exhaustive_distribution(0, PermStat::Cycles).is_err());
    }

    #[test]
    fn fast_and_naive_agree_on_large_random_inputs() {
        let mut rng = rng_from_seed(99);
        for k in 0..300 {
            let n = 1 + (k * 37) % 500;
            let p = random_permutation_with(n, &mut rng);
            assert_eq!(count_31_2(p.values()), count_31_2_naive(p.values()), "{p}");
        }
    }

    #[test]
    fn random_permutation_is_seeded() {
        assert_eq!(random_permutation(1, 4), Permutation::identity(1));
        assert_eq!(random_permutation(50, 8), random_permutation(50, 8));
        assert_ne!(random_permutation(50, 8), random_permutation(50, 9));
    }

    proptest! {
        #[test]
        fn descents_plus_ascents(n in 1usize..200, seed in any::<u64>()) {
            let p = random_permutation(n, seed);
            let v = p.values();
            prop_assert_eq!(descents(v) + ascents(v), n - 1);
            prop_assert_eq!(count_31_2(v), count_31_2_naive(v));
        }
    }
}
