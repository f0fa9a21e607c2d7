// Brute-force oracles written from the definitions alone, compared with the
// library's enumeration, statistics, generating functions and samplers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use permtab::clt::{draw, Source, Statistic};
use permtab::dist::{distribution_pgf, factorial};
use permtab::growth::{
    completions_count, enumerate, exhaustive_stat_distribution, joint_distribution_dp, TrackedStat,
};
use permtab::perm::{
    count_31_2, crossings, exhaustive_distribution, random_permutation_with, PermStat,
};
use permtab::rng::{rng_from_seed, substream};
use permtab::tableau::{example_tableau, TableauStat};
use permtab::DistributionTable;

/// Weakly decreasing sequences of `rows` lengths, first entry exactly
/// `cols` (the first row spans every column), entries in `0..=cols`.
fn shapes(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur.push(l);
            rec(left - 1, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![cols];
    rec(rows - 1, cols, &mut cur, &mut out);
    out
}

fn is_tableau(shape: &[usize], cell: &dyn Fn(usize, usize) -> bool) -> bool {
    let cols = shape[0];
    for c in 0..cols {
        let height = shape.iter().filter(|&&l| l > c).count();
        if !(0..height).any(|r| cell(r, c)) {
            return false;
        }
    }
    for (r, &len) in shape.iter().enumerate() {
        for c in 0..len {
            if cell(r, c) {
                continue;
            }
            let above = (0..r).any(|q| cell(q, c));
            let left = (0..c).any(|d| cell(r, d));
            if above && left {
                return false;
            }
        }
    }
    true
}

/// Every valid filling of every shape of length `n`, as `/`-joined rows.
fn brute_force_tableaux(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for rows in 1..=n {
        let cols = n - rows;
        for shape in shapes(rows, cols) {
            let cells: usize = shape.iter().sum();
            for mask in 0u64..(1u64 << cells) {
                let mut offsets = vec![0; shape.len()];
                let mut acc = 0;
                for (r, &l) in shape.iter().enumerate() {
                    offsets[r] = acc;
                    acc += l;
                }
                let cell = |r: usize, c: usize| mask >> (offsets[r] + c) & 1 == 1;
                if is_tableau(&shape, &cell) {
                    let text: Vec<String> = shape
                        .iter()
                        .enumerate()
                        .map(|(r, &l)| (0..l).map(|c| if cell(r, c) { '1' } else { '0' }).collect())
                        .collect();
                    out.insert(text.join("/"));
                }
            }
        }
    }
    out
}

/// Statistics recomputed from the `/`-joined text.
fn oracle_stats(text: &str) -> BTreeMap<&'static str, u64> {
    let rows: Vec<Vec<bool>> = text
        .split('/')
        .map(|r| r.chars().map(|c| c == '1').collect())
        .collect();
    let one_above = |r: usize, c: usize| (0..r).any(|q| rows[q].get(c) == Some(&true));
    let unrestricted = (0..rows.len())
        .filter(|&r| (0..rows[r].len()).all(|c| rows[r][c] || !one_above(r, c)))
        .count();
    let superfluous = (0..rows.len())
        .flat_map(|r| (0..rows[r].len()).map(move |c| (r, c)))
        .filter(|&(r, c)| rows[r][c] && one_above(r, c))
        .count();
    BTreeMap::from([
        ("U", unrestricted as u64),
        ("F", rows[0].iter().filter(|&&b| b).count() as u64),
        ("R", rows.len() as u64),
        ("C", rows[0].len() as u64),
        ("S", superfluous as u64),
    ])
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=6 {
        let oracle = brute_force_tableaux(n);
        let listed: Vec<String> = enumerate(n).unwrap().map(|t| t.compact()).collect();
        let set: BTreeSet<String> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len(), "duplicates at n = {n}");
        assert_eq!(set, oracle, "n = {n}");
        assert_eq!(BigUint::from(oracle.len()), factorial(n));
    }
}

#[test]
fn statistics_match_oracle() {
    for n in 1..=6 {
        for t in enumerate(n).unwrap() {
            let s = t.stats();
            let o = oracle_stats(&t.compact());
            assert_eq!(o["U"], s.unrestricted as u64, "{}", t.compact());
            assert_eq!(o["F"], s.first_row_ones as u64);
            assert_eq!(o["R"], s.rows as u64);
            assert_eq!(o["C"], s.columns as u64);
            assert_eq!(o["S"], s.superfluous as u64);
            assert_eq!(s.total_ones, s.superfluous + s.columns);
        }
    }
    let o = oracle_stats(&example_tableau().compact());
    assert_eq!((o["R"], o["C"], o["U"], o["F"], o["S"]), (6, 7, 5, 3, 3));
}

#[test]
fn generating_functions_match_oracle_histograms() {
    let pairs = [
        (TableauStat::Unrestricted, "U"),
        (TableauStat::FirstRow, "F"),
        (TableauStat::Rows, "R"),
        (TableauStat::Columns, "C"),
        (TableauStat::Superfluous, "S"),
    ];
    for n in 1..=6 {
        let oracle = brute_force_tableaux(n);
        for (stat, key) in pairs {
            let mut h = DistributionTable::new();
            for t in &oracle {
                h.increment(oracle_stats(t)[key]);
            }
            assert_eq!(distribution_pgf(stat, n).unwrap(), h, "{stat} n = {n}");
        }
    }
}

#[test]
fn superfluous_total_at_length_four() {
    let t = exhaustive_stat_distribution(4, |s| s.superfluous as u64).unwrap();
    let sum: BigUint = t.iter().map(|(v, c)| c * v).sum();
    assert_eq!(sum, BigUint::from(12u8));
}

#[test]
fn joint_dp_matches_enumeration() {
    for n in 1..=7 {
        let dp = joint_distribution_dp(n, &TrackedStat::ALL).unwrap();
        let brute =
            permtab::growth::JointCountTable::from_enumeration(n, &TrackedStat::ALL).unwrap();
        assert_eq!(dp, brute, "n = {n}");
    }
}

#[test]
fn completions_partition_the_leaves() {
    let n = 6;
    for k in 1..=n {
        let total: BigUint = enumerate(k)
            .unwrap()
            .map(|t| completions_count(&t, n).unwrap())
            .sum();
        assert_eq!(total, factorial(n), "k = {k}");
    }
}

// Crossings by an independent reading of the definition over 0-based
// arrays.
fn crossings_oracle(p: &[usize]) -> u64 {
    let n = p.len();
    let mut c = 0;
    for a in 0..n {
        for b in 0..n {
            let (i, j, si, sj) = (a + 1, b + 1, p[a], p[b]);
            let up = i < j && j <= si && si < sj;
            let down = i > j && j > si && si > sj;
            c += u64::from(up || down);
        }
    }
    c
}

#[test]
fn permutation_oracles() {
    let mut rng = rng_from_seed(17);
    for n in 1..=60 {
        let p = random_permutation_with(n, &mut rng);
        assert_eq!(crossings(p.values()), crossings_oracle(p.values()));
    }
    assert_eq!(
        exhaustive_distribution(7, PermStat::Crossings).unwrap(),
        exhaustive_distribution(7, PermStat::Pattern31_2).unwrap()
    );
}

#[test]
fn random_permutations_of_three_are_uniform() {
    let draws = 1_000_000u32;
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    let mut rng = substream(2024, 0);
    for _ in 0..draws {
        *counts
            .entry(random_permutation_with(3, &mut rng).to_string())
            .or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let p = 1.0 / 6.0;
    let sd = (draws as f64 * p * (1.0 - p)).sqrt();
    for (perm, c) in counts {
        assert!(
            (c as f64 - draws as f64 * p).abs() < 5.0 * sd,
            "{perm}: {c}"
        );
    }
}

#[test]
fn mean_pattern_count_at_one_hundred() {
    let n = 100usize;
    let draws = 1_000_000;
    let mut rng = substream(7, 1);
    let mut sum = 0f64;
    for _ in 0..draws {
        sum += count_31_2(random_permutation_with(n, &mut rng).values()) as f64;
    }
    let mean = sum / draws as f64;
    let nf = n as f64;
    let expected = (nf - 1.0) * (nf - 2.0) / 12.0;
    let var = (nf - 2.0) * (2.0 * nf * nf + 11.0 * nf - 1.0) / 360.0;
    assert!(
        (mean - expected).abs() < 3.0 * (var / draws as f64).sqrt(),
        "{mean}"
    );
}

#[test]
fn total_ones_mean_near_quadratic() {
    // Y = S + C with E S = (n-1)(n-2)/12 and E C = (n-1)/2.
    let n = 1000;
    let trials = 2000;
    let mut rng = substream(99, 0);
    let ys: Vec<f64> = (0..trials)
        .map(|_| draw(Statistic::Y, Source::TableauSampler, n, &mut rng) as f64)
        .collect();
    let mean = ys.iter().sum::<f64>() / trials as f64;
    let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let nf = n as f64;
    let expected = (nf - 1.0) * (nf - 2.0) / 12.0 + (nf - 1.0) / 2.0;
    assert!(
        (mean - expected).abs() < 3.0 * (var / trials as f64).sqrt() + 1.0,
        "{mean} vs {expected}"
    );
}
