//! The growth process: every tableau of length `k` arises from a unique
//! tableau of length `k - 1` by one move at the south-west corner.
//!
//! * A **south** move appends an empty row.
//! * A **west** move prepends a column spanning every row. Restricted rows
//!   get a 0. Among the `U` unrestricted rows (top to bottom) the new column
//!   has its topmost 1 at position `g`; unrestricted rows above it get 0,
//!   rows below it get an arbitrary 0/1, and those receiving a 0 become
//!   restricted.
//!
//! So a tableau with `U` unrestricted rows has `2^U` extensions, and the
//! extension with topmost position `g` and `j` ones below it has `g + j`
//! unrestricted rows, `j` more superfluous 1s, and one more first-row 1
//! exactly when `g = 1`.
//!
//! This module builds enumeration, completion counting, exact uniform
//! sampling and the statistic-level dynamic program on top of that rule.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::rng::{rng_from_seed, Rng};
use crate::table::DistributionTable;
use crate::tableau::{StatVector, Tableau, TableauStat};

/// Longest length [`enumerate`] accepts (`9! = 362880` tableaux).
pub const MAX_ENUMERATION_LENGTH: usize = 9;

/// Upper bound on the estimated state count of [`joint_distribution_dp`].
pub const DP_STATE_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GrowthError {
    #[error("length {n} is outside 1..={max}")]
    LengthOutOfRange { n: usize, max: usize },
    #[error("tableau has length {k}, longer than the target {n}")]
    TargetTooShort { k: usize, n: usize },
    #[error("estimated {estimate} dynamic-programming states exceeds the limit {limit}")]
    StateSpaceTooLarge { estimate: u128, limit: u128 },
    #[error("no statistic selected for tracking")]
    NothingTracked,
    #[error("the dynamic program does not track {0}")]
    Untracked(TableauStat),
    #[error("extension does not fit a tableau with {unrestricted} unrestricted rows")]
    BadExtension { unrestricted: usize },
}

/// One growth move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extension {
    South,
    /// `topmost` counts unrestricted rows from 1; `below` holds the entries
    /// for the unrestricted rows under it, top to bottom.
    West {
        topmost: usize,
        below: Vec<bool>,
    },
}

impl Extension {
    /// Unrestricted rows after applying the move to a tableau with `u`.
    pub fn new_unrestricted(&self, u: usize) -> usize {
        match self {
            Extension::South => u + 1,
            Extension::West { topmost, below } => topmost + below.iter().filter(|&&b| b).count(),
        }
    }

    /// Topmost-1 position; `u + 1` for a south move.
    pub fn topmost_position(&self, u: usize) -> usize {
        match self {
            Extension::South => u + 1,
            Extension::West { topmost, .. } => *topmost,
        }
    }

    fn fits(&self, u: usize) -> bool {
        match self {
            Extension::South => true,
            Extension::West { topmost, below } => {
                (1..=u).contains(topmost) && below.len() == u - topmost
            }
        }
    }
}

/// All `2^u` moves available with `u` unrestricted rows, in canonical
/// order: south first, then west by increasing topmost position, and for a
/// fixed position by the below-fill read as a binary number (top row most
/// significant) in increasing order.
pub fn extension_moves(u: usize) -> Vec<Extension> {
    let mut out = Vec::with_capacity(1 << u);
    out.push(Extension::South);
    for topmost in 1..=u {
        let free = u - topmost;
        for code in 0u64..(1u64 << free) {
            let below = (0..free).map(|i| code >> (free - 1 - i) & 1 == 1).collect();
            out.push(Extension::West { topmost, below });
        }
    }
    out
}

/// Applies one move.
pub fn apply_extension(t: &Tableau, ext: &Extension) -> Result<Tableau, GrowthError> {
    let restricted = t.restricted_rows();
    let u = restricted.iter().filter(|&&r| !r).count();
    if !ext.fits(u) {
        return Err(GrowthError::BadExtension { unrestricted: u });
    }
    let mut rows = t.rows().to_vec();
    match ext {
        Extension::South => rows.push(Vec::new()),
        Extension::West { topmost, below } => {
            let mut seen = 0;
            for (row, &is_restricted) in rows.iter_mut().zip(&restricted) {
                let cell = if is_restricted {
                    false
                } else {
                    seen += 1;
                    match seen.cmp(topmost) {
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => true,
                        std::cmp::Ordering::Greater => below[seen - topmost - 1],
                    }
                };
                row.insert(0, cell);
            }
        }
    }
    Ok(Tableau::from_parts_unchecked(rows))
}

/// The `2^U` tableaux one step longer than `t`, in canonical order.
pub fn extensions(t: &Tableau) -> Vec<Tableau> {
    let u = t.stats().unrestricted;
    extension_moves(u)
        .iter()
        .map(|e| apply_extension(t, e).expect("canonical moves fit"))
        .collect()
}

/// The move that produced `t` from its parent; `None` for length 1.
pub fn last_move(t: &Tableau) -> Option<Extension> {
    let p = parent(t)?;
    let restricted = p.restricted_rows();
    if t.num_rows() > p.num_rows() {
        return Some(Extension::South);
    }
    let column: Vec<bool> = t.rows().iter().map(|r| r[0]).collect();
    let unrestricted: Vec<bool> = column
        .iter()
        .zip(&restricted)
        .filter(|(_, &r)| !r)
        .map(|(&c, _)| c)
        .collect();
    let topmost = unrestricted.iter().position(|&c| c)? + 1;
    Some(Extension::West {
        topmost,
        below: unrestricted[topmost..].to_vec(),
    })
}

/// The unique tableau of length `len - 1` that `t` extends; `None` for the
/// length-1 tableau, whose parent is the empty tableau.
pub fn parent(t: &Tableau) -> Option<Tableau> {
    if t.length() <= 1 {
        return None;
    }
    let mut rows = t.rows().to_vec();
    if rows.last().is_some_and(Vec::is_empty) {
        rows.pop();
    } else {
        for row in &mut rows {
            row.remove(0);
        }
    }
    Some(Tableau::from_parts_unchecked(rows))
}

fn check_length(n: usize, max: usize) -> Result<(), GrowthError> {
    if n == 0 || n > max {
        return Err(GrowthError::LengthOutOfRange { n, max });
    }
    Ok(())
}

/// Depth-first stream over all `n!` tableaux of length `n`, children in
/// canonical move order.
pub fn enumerate(n: usize) -> Result<Enumerate, GrowthError> {
    check_length(n, MAX_ENUMERATION_LENGTH)?;
    Ok(Enumerate {
        target: n,
        stack: Vec::new(),
        root: Some(Tableau::single_row()),
    })
}

/// Iterator returned by [`enumerate`].
pub struct Enumerate {
    target: usize,
    stack: Vec<Frame>,
    root: Option<Tableau>,
}

struct Frame {
    tableau: Tableau,
    moves: Vec<Extension>,
    next: usize,
}

impl Frame {
    fn new(tableau: Tableau) -> Self {
        let moves = extension_moves(tableau.stats().unrestricted);
        Frame {
            tableau,
            moves,
            next: 0,
        }
    }
}

impl Iterator for Enumerate {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        if let Some(root) = self.root.take() {
            if self.target == 1 {
                return Some(root);
            }
            self.stack.push(Frame::new(root));
        }
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next == frame.moves.len() {
                self.stack.pop();
                continue;
            }
            let child = apply_extension(&frame.tableau, &frame.moves[frame.next])
                .expect("canonical moves fit");
            frame.next += 1;
            if child.length() == self.target {
                return Some(child);
            }
            self.stack.push(Frame::new(child));
        }
    }
}

/// Histogram of one statistic over all tableaux of length `n`.
pub fn exhaustive_stat_distribution(
    n: usize,
    stat: impl Fn(&StatVector) -> u64,
) -> Result<DistributionTable, GrowthError> {
    let mut table = DistributionTable::new();
    for t in enumerate(n)? {
        table.increment(stat(&t.stats()));
    }
    Ok(table)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of length-`n` tableaux descending from `t`:
/// `(n - k)! (n - k + 1)^U(t)` with `k` the length of `t`.
pub fn completions_count(t: &Tableau, n: usize) -> Result<BigUint, GrowthError> {
    let k = t.length();
    if k > n {
        return Err(GrowthError::TargetTooShort { k, n });
    }
    let u = t.stats().unrestricted as u32;
    Ok(factorial(n - k) * BigUint::from(n - k + 1).pow(u))
}

/// Target length and seed for [`sample_uniform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub seed: u64,
}

// Extending from length k to k + 1 with m = n - k steps still to go, an
// extension with U' unrestricted rows has m^U' completions up to a common
// factor. Walking the unrestricted rows top-down, each becomes the topmost 1
// with probability 1/(m+1) given that none above did; if none does the move
// is south. Each row below the topmost 1 gets a 1 with probability m/(m+1).
// All draws are exact integer draws.

fn draw_topmost(m: u64, u: usize, rng: &mut Rng) -> Option<usize> {
    debug_assert!(weights_consistent(m, u));
    (1..=u).find(|_| rng.gen_range(0..=m) == 0)
}

fn draw_below(m: u64, rng: &mut Rng) -> bool {
    rng.gen_range(0..=m) != 0
}

/// Checks `m^(U+1) + sum_g m^g (m+1)^(U-g) = m (m+1)^U` when it fits in
/// 128 bits.
fn weights_consistent(m: u64, u: usize) -> bool {
    let m = m as u128;
    let u = u as u32;
    let total = || -> Option<(u128, u128)> {
        let mut sum = m.checked_pow(u + 1)?;
        for g in 1..=u {
            sum = sum.checked_add(m.checked_pow(g)?.checked_mul((m + 1).checked_pow(u - g)?)?)?;
        }
        Some((sum, m.checked_mul((m + 1).checked_pow(u)?)?))
    };
    match total() {
        Some((lhs, rhs)) => lhs == rhs,
        None => true,
    }
}

/// Exactly uniform random tableau of length `cfg.n`.
pub fn sample_uniform(cfg: SamplerConfig) -> Tableau {
    sample_uniform_with(cfg.n, &mut rng_from_seed(cfg.seed))
}

/// [`sample_uniform`] drawing from a caller-supplied stream.
pub fn sample_uniform_with(n: usize, rng: &mut Rng) -> Tableau {
    assert!(n >= 1, "tableaux have length at least 1");
    // Rows are stored right to left so that west moves are pushes.
    let mut rows_rev: Vec<Vec<bool>> = vec![Vec::new()];
    let mut restricted = vec![false];
    for k in 1..n {
        let m = (n - k) as u64;
        let u = restricted.iter().filter(|&&r| !r).count();
        match draw_topmost(m, u, rng) {
            None => {
                rows_rev.push(Vec::new());
                restricted.push(false);
            }
            Some(g) => {
                let mut seen = 0;
                for (row, is_restricted) in rows_rev.iter_mut().zip(restricted.iter_mut()) {
                    let cell = if *is_restricted {
                        false
                    } else {
                        seen += 1;
                        if seen < g {
                            false
                        } else if seen == g {
                            true
                        } else {
                            let one = draw_below(m, rng);
                            if !one {
                                *is_restricted = true;
                            }
                            one
                        }
                    };
                    row.push(cell);
                }
            }
        }
    }
    let rows = rows_rev
        .into_iter()
        .map(|mut r| {
            r.reverse();
            r
        })
        .collect();
    Tableau::from_parts_unchecked(rows)
}

/// Statistics of a uniform random tableau of length `n`, drawn with the
/// same chain as [`sample_uniform_with`] but without building the fill.
pub fn sample_stats_with(n: usize, rng: &mut Rng) -> StatVector {
    assert!(n >= 1, "tableaux have length at least 1");
    let mut s = StatVector {
        rows: 1,
        unrestricted: 1,
        ..StatVector::default()
    };
    for k in 1..n {
        let m = (n - k) as u64;
        match draw_topmost(m, s.unrestricted, rng) {
            None => {
                s.rows += 1;
                s.unrestricted += 1;
            }
            Some(g) => {
                let ones = (0..s.unrestricted - g)
                    .filter(|_| draw_below(m, rng))
                    .count();
                s.columns += 1;
                s.first_row_ones += usize::from(g == 1);
                s.superfluous += ones;
                s.total_ones += ones + 1;
                s.unrestricted = g + ones;
            }
        }
    }
    s
}

/// Statistics the dynamic program can track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrackedStat {
    Unrestricted,
    Rows,
    FirstRow,
    Superfluous,
}

impl TrackedStat {
    pub const ALL: [TrackedStat; 4] = [
        TrackedStat::Unrestricted,
        TrackedStat::Rows,
        TrackedStat::FirstRow,
        TrackedStat::Superfluous,
    ];

    fn slot(self) -> usize {
        match self {
            TrackedStat::Unrestricted => 0,
            TrackedStat::Rows => 1,
            TrackedStat::FirstRow => 2,
            TrackedStat::Superfluous => 3,
        }
    }

    pub fn of(self, s: &StatVector) -> u64 {
        (match self {
            TrackedStat::Unrestricted => s.unrestricted,
            TrackedStat::Rows => s.rows,
            TrackedStat::FirstRow => s.first_row_ones,
            TrackedStat::Superfluous => s.superfluous,
        }) as u64
    }
}

/// Exact joint counts of the tracked statistics over all tableaux of one
/// length. Keys list values in the order of `tracked`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCountTable {
    pub n: usize,
    pub tracked: Vec<TrackedStat>,
    pub counts: BTreeMap<Vec<u64>, BigUint>,
}

impl JointCountTable {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn get(&self, key: &[u64]) -> BigUint {
        self.counts.get(key).cloned().unwrap_or_default()
    }

    /// Marginal of one tracked coordinate.
    pub fn marginal(&self, stat: TrackedStat) -> Option<DistributionTable> {
        let idx = self.tracked.iter().position(|&t| t == stat)?;
        Some(DistributionTable::from_counts(
            self.counts.iter().map(|(k, c)| (k[idx], c.clone())),
        ))
    }

    /// Histogram of tableaux of length `n` keyed like this table, by
    /// enumeration.
    pub fn from_enumeration(n: usize, tracked: &[TrackedStat]) -> Result<Self, GrowthError> {
        let tracked = normalize_tracking(tracked)?;
        let mut counts: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
        for t in enumerate(n)? {
            let s = t.stats();
            let key = tracked.iter().map(|k| k.of(&s)).collect();
            *counts.entry(key).or_default() += 1u32;
        }
        Ok(JointCountTable { n, tracked, counts })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(JointWire {
            n: self.n,
            tracked: self.tracked.clone(),
            counts: self
                .counts
                .iter()
                .map(|(k, c)| JointEntry {
                    key: k.clone(),
                    count: c.to_string(),
                })
                .collect(),
            total: self.total().to_string(),
        })
        .expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let wire: JointWire = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut counts = BTreeMap::new();
        for e in wire.counts {
            let c: BigUint = e
                .count
                .parse()
                .map_err(|_| format!("bad count {}", e.count))?;
            counts.insert(e.key, c);
        }
        let table = JointCountTable {
            n: wire.n,
            tracked: wire.tracked,
            counts,
        };
        if table.total().to_string() != wire.total {
            return Err(format!("total {} does not match the counts", wire.total));
        }
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct JointWire {
    n: usize,
    tracked: Vec<TrackedStat>,
    counts: Vec<JointEntry>,
    total: String,
}

#[derive(Serialize, Deserialize)]
struct JointEntry {
    key: Vec<u64>,
    count: String,
}

fn normalize_tracking(track: &[TrackedStat]) -> Result<Vec<TrackedStat>, GrowthError> {
    let mut t = track.to_vec();
    t.sort();
    t.dedup();
    if t.is_empty() {
        return Err(GrowthError::NothingTracked);
    }
    Ok(t)
}

type State = [u32; 4];

/// Count table of one statistic at length `n` from the dynamic program.
/// Columns come from rows as `n - R`; total 1s are not tracked.
pub fn distribution_dp(stat: TableauStat, n: usize) -> Result<DistributionTable, GrowthError> {
    let tracked = match stat {
        TableauStat::Unrestricted => TrackedStat::Unrestricted,
        TableauStat::FirstRow => TrackedStat::FirstRow,
        TableauStat::Rows | TableauStat::Columns => TrackedStat::Rows,
        TableauStat::Superfluous => TrackedStat::Superfluous,
        TableauStat::TotalOnes => return Err(GrowthError::Untracked(stat)),
    };
    let table = joint_distribution_dp(n, &[tracked])?
        .marginal(tracked)
        .expect("tracked coordinate present");
    Ok(if stat == TableauStat::Columns {
        DistributionTable::from_counts(table.iter().map(|(r, c)| (n as u64 - r, c.clone())))
    } else {
        table
    })
}

/// Exact joint distribution of the tracked statistics at length `n` by a
/// forward pass over growth steps. The unrestricted count is always part of
/// the state since it alone drives the transitions; the other statistics
/// only accumulate increments.
pub fn joint_distribution_dp(
    n: usize,
    track: &[TrackedStat],
) -> Result<JointCountTable, GrowthError> {
    let tracked = normalize_tracking(track)?;
    if n == 0 {
        return Err(GrowthError::LengthOutOfRange { n, max: usize::MAX });
    }
    let estimate = tracked
        .iter()
        .filter(|&&t| t != TrackedStat::Unrestricted)
        .fold(n as u128, |acc, t| {
            let range = match t {
                TrackedStat::Superfluous => (n * n / 4 + 1) as u128,
                _ => n as u128,
            };
            acc.saturating_mul(range)
        });
    if estimate > DP_STATE_LIMIT {
        return Err(GrowthError::StateSpaceTooLarge {
            estimate,
            limit: DP_STATE_LIMIT,
        });
    }
    let keep = |t: TrackedStat| tracked.contains(&t);
    let (keep_r, keep_f, keep_s) = (
        keep(TrackedStat::Rows),
        keep(TrackedStat::FirstRow),
        keep(TrackedStat::Superfluous),
    );
    let binom = pascal(n);

    let mut states: HashMap<State, BigUint> = HashMap::new();
    states.insert([1, u32::from(keep_r), 0, 0], BigUint::one());
    for _ in 1..n {
        let mut next: HashMap<State, BigUint> = HashMap::with_capacity(states.len() * 2);
        for (state, count) in &states {
            let [u, r, f, s] = *state;
            *next
                .entry([u + 1, r + u32::from(keep_r), f, s])
                .or_default() += count;
            for g in 1..=u {
                let f2 = f + u32::from(keep_f && g == 1);
                let free = (u - g) as usize;
                for j in 0..=free as u32 {
                    let s2 = if keep_s { s + j } else { 0 };
                    let slot = next.entry([g + j, r, f2, s2]).or_default();
                    if j == 0 || j as usize == free {
                        *slot += count;
                    } else {
                        *slot += count * &binom[free][j as usize];
                    }
                }
            }
        }
        states = next;
    }

    let mut counts: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    for (state, count) in states {
        let key = tracked.iter().map(|t| state[t.slot()] as u64).collect();
        *counts.entry(key).or_default() += count;
    }
    Ok(JointCountTable { n, tracked, counts })
}

fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|j| {
                let a = if j > 0 {
                    prev[j - 1].clone()
                } else {
                    BigUint::zero()
                };
                let b = prev.get(j).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        rows.push(row);
    }
    rows
}
