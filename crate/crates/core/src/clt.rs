//! Monte Carlo checks of the central limit behaviour of tableau statistics.
//!
//! An experiment draws `trials` independent values of a statistic, centers
//! and scales them, and reports empirical moments and the Kolmogorov–Smirnov
//! distance to the standard normal. Trials are cut into fixed blocks, each
//! with its own substream of the seed, so a report depends only on the
//! configuration and never on the number of worker threads.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dist::{format_rational, moment_formulas, to_f64};
use crate::growth::{enumerate, sample_stats_with, sample_uniform_with, GrowthError};
use crate::perm::{count_31_2, descents, random_permutation_with, rl_minima};
use crate::rng::{substream, Rng};
use crate::table::DistributionTable;

/// Trials per substream.
pub const BLOCK_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    U,
    F,
    R,
    S,
    Y,
    #[serde(rename = "pattern31_2")]
    Pattern31_2,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::U,
        Statistic::F,
        Statistic::R,
        Statistic::S,
        Statistic::Y,
        Statistic::Pattern31_2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::U => "U",
            Statistic::F => "F",
            Statistic::R => "R",
            Statistic::S => "S",
            Statistic::Y => "Y",
            Statistic::Pattern31_2 => "pattern31_2",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = CltError;
    fn from_str(s: &str) -> Result<Self, CltError> {
        let long = match s {
            "unrestricted" => Some(Statistic::U),
            "first-row" => Some(Statistic::F),
            "rows" => Some(Statistic::R),
            "superfluous" => Some(Statistic::S),
            "total-ones" => Some(Statistic::Y),
            _ => None,
        };
        long.or_else(|| {
            Statistic::ALL
                .into_iter()
                .find(|st| st.name().eq_ignore_ascii_case(s))
        })
        .ok_or_else(|| CltError::UnknownStatistic(s.to_string()))
    }
}

/// Where samples come from.
///
/// * `TableauSampler`: the exact uniform growth sampler; `Pattern31_2` is
///   not a tableau statistic.
/// * `Permutation`: uniform random permutations read through the matching
///   permutation statistic (RL minima for `U`, RL minima minus one for `F`,
///   descents plus one for `R`, 31-2 occurrences for `S`).
/// * `Indicators`: `U` (and `F = U - 1`) as a sum of independent
///   indicators with success probabilities `1/k`, `k = 1..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    TableauSampler,
    Permutation,
    Indicators,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::TableauSampler => "tableau-sampler",
            Source::Permutation => "permutation",
            Source::Indicators => "indicators",
        }
    }

    pub fn supports(self, stat: Statistic) -> bool {
        use Statistic::*;
        match self {
            Source::TableauSampler => stat != Pattern31_2,
            Source::Permutation => stat != Y,
            Source::Indicators => matches!(stat, U | F),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Source {
    type Err = CltError;
    fn from_str(s: &str) -> Result<Self, CltError> {
        [
            Source::TableauSampler,
            Source::Permutation,
            Source::Indicators,
        ]
        .into_iter()
        .find(|src| src.name() == s)
        .ok_or_else(|| CltError::UnknownSource(s.to_string()))
    }
}

/// Centering and scaling rule.
///
/// `Asymptotic` uses the leading-order mean and standard deviation from the
/// limit theorems. `Exact` uses the exact finite-`n` mean and variance,
/// which removes the lower-order bias the asymptotic centering leaves at
/// moderate `n` (for `S` at `n = 1000` that bias is about a tenth of a
/// standard deviation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    Asymptotic,
    Exact,
}

impl FromStr for Normalization {
    type Err = CltError;
    fn from_str(s: &str) -> Result<Self, CltError> {
        match s {
            "asymptotic" => Ok(Normalization::Asymptotic),
            "exact" => Ok(Normalization::Exact),
            _ => Err(CltError::UnknownNormalization(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CltError {
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("unknown source `{0}`")]
    UnknownSource(String),
    #[error("unknown normalization `{0}`")]
    UnknownNormalization(String),
    #[error("statistic {stat} cannot be drawn from source {src}")]
    Incompatible { stat: Statistic, src: Source },
    #[error("no exact normalization is available for {0}")]
    NoExactNormalization(Statistic),
    #[error("n = {0} is too small; need n >= 2")]
    TooSmall(usize),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Growth(#[from] GrowthError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub statistic: Statistic,
    pub source: Source,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CltError> {
        if self.n < 2 {
            return Err(CltError::TooSmall(self.n));
        }
        if self.trials == 0 {
            return Err(CltError::NoTrials);
        }
        if !self.source.supports(self.statistic) {
            return Err(CltError::Incompatible {
                stat: self.statistic,
                src: self.source,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub kind: Normalization,
    pub center: f64,
    pub scale: f64,
}

impl Normalizer {
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.center) / self.scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub normalization: Normalizer,
    /// Mean of the raw statistic.
    pub raw_mean: f64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub ks_distance: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Leading-order `(center, scale)` for a statistic at length `n`.
pub fn normalizers(stat: Statistic, n: usize) -> Result<(f64, f64), CltError> {
    if n < 2 {
        return Err(CltError::TooSmall(n));
    }
    let nf = n as f64;
    Ok(match stat {
        Statistic::U | Statistic::F => (nf.ln(), nf.ln().sqrt()),
        Statistic::R => ((nf + 1.0) / 2.0, ((nf + 1.0) / 12.0).sqrt()),
        Statistic::S | Statistic::Y | Statistic::Pattern31_2 => {
            (nf * nf / 12.0, (nf * nf * nf / 180.0).sqrt())
        }
    })
}

/// Exact finite-`n` mean and variance as `(mean, variance)`.
pub fn exact_moments(stat: Statistic, n: usize) -> Result<(BigRational, BigRational), CltError> {
    let m = moment_formulas(n);
    Ok(match stat {
        Statistic::U => (m.mean_unrestricted, m.var_unrestricted),
        Statistic::F => (m.mean_first_row, m.var_first_row),
        Statistic::R => (m.mean_rows, m.var_rows),
        Statistic::S | Statistic::Pattern31_2 => (m.mean_superfluous, m.var_superfluous),
        Statistic::Y => return Err(CltError::NoExactNormalization(stat)),
    })
}

/// Floating-point evaluation of the exact mean and variance, cheap for any
/// `n`; harmonic sums use compensated summation.
pub fn exact_moments_f64(stat: Statistic, n: usize) -> Result<(f64, f64), CltError> {
    if n < 2 {
        return Err(CltError::TooSmall(n));
    }
    let nf = n as f64;
    let h = || neumaier_sum((1..=n).rev().map(|k| 1.0 / k as f64));
    let h2 = || neumaier_sum((1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)));
    Ok(match stat {
        Statistic::U => (h(), h() - h2()),
        Statistic::F => (h() - 1.0, h() - h2()),
        Statistic::R => ((nf + 1.0) / 2.0, (nf + 1.0) / 12.0),
        Statistic::S | Statistic::Pattern31_2 => (
            (nf - 1.0) * (nf - 2.0) / 12.0,
            (nf - 2.0) * (2.0 * nf * nf + 11.0 * nf - 1.0) / 360.0,
        ),
        Statistic::Y => return Err(CltError::NoExactNormalization(stat)),
    })
}

pub fn normalizer(stat: Statistic, n: usize, kind: Normalization) -> Result<Normalizer, CltError> {
    let (center, scale) = match kind {
        Normalization::Asymptotic => normalizers(stat, n)?,
        Normalization::Exact => {
            let (mean, var) = exact_moments_f64(stat, n)?;
            (mean, var.sqrt())
        }
    };
    Ok(Normalizer {
        kind,
        center,
        scale,
    })
}

/// Number of successes among independent indicators with
/// `P(success at k) = 1/k`, `k = 1..=n`. After a success at `k` the next
/// one is at `floor(k / V) + 1` for `V` uniform on `(0, 1]`, since no
/// success in `k+1..=m` has probability `k / m`.
pub fn sample_indicator_sum(n: usize, rng: &mut Rng) -> u64 {
    let mut k = 1usize;
    let mut count = 1;
    loop {
        let v: f64 = 1.0 - rng.gen::<f64>();
        let next = (k as f64 / v).floor() + 1.0;
        if next > n as f64 {
            return count;
        }
        k = next as usize;
        count += 1;
    }
}

/// One raw draw of `stat` from `source`.
pub fn draw(stat: Statistic, source: Source, n: usize, rng: &mut Rng) -> u64 {
    match source {
        Source::TableauSampler => {
            let s = sample_stats_with(n, rng);
            (match stat {
                Statistic::U => s.unrestricted,
                Statistic::F => s.first_row_ones,
                Statistic::R => s.rows,
                Statistic::S => s.superfluous,
                Statistic::Y => s.total_ones,
                Statistic::Pattern31_2 => unreachable!("checked by validate"),
            }) as u64
        }
        Source::Permutation => {
            let p = random_permutation_with(n, rng);
            let v = p.values();
            match stat {
                Statistic::U => rl_minima(v) as u64,
                Statistic::F => rl_minima(v) as u64 - 1,
                Statistic::R => descents(v) as u64 + 1,
                Statistic::S | Statistic::Pattern31_2 => count_31_2(v),
                Statistic::Y => unreachable!("checked by validate"),
            }
        }
        Source::Indicators => {
            let u = sample_indicator_sum(n, rng);
            match stat {
                Statistic::U => u,
                _ => u - 1,
            }
        }
    }
}

/// Raw draws in trial order.
pub fn draw_samples(cfg: &ExperimentConfig) -> Result<Vec<u64>, CltError> {
    cfg.validate()?;
    let blocks = cfg.trials.div_ceil(BLOCK_SIZE);
    let chunks: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_SIZE.min(cfg.trials - b * BLOCK_SIZE);
            let mut rng = substream(cfg.seed, b as u64);
            (0..len)
                .map(|_| draw(cfg.statistic, cfg.source, cfg.n, &mut rng))
                .collect()
        })
        .collect();
    Ok(chunks.concat())
}

/// Runs an experiment; also returns the normalized samples in trial order.
pub fn run_mc_with_samples(
    cfg: &ExperimentConfig,
) -> Result<(ExperimentReport, Vec<f64>), CltError> {
    cfg.validate()?;
    let norm = normalizer(cfg.statistic, cfg.n, cfg.normalization)?;
    let raw = draw_samples(cfg)?;
    let raw_mean = neumaier_sum(raw.iter().map(|&x| x as f64)) / raw.len() as f64;
    let z: Vec<f64> = raw.iter().map(|&x| norm.apply(x as f64)).collect();
    let (mean, variance, skewness) = sample_moments(&z);
    let ks_distance = if z.len() >= 2 { ks_normal(&z)? } else { 1.0 };
    Ok((
        ExperimentReport {
            config: *cfg,
            normalization: norm,
            raw_mean,
            mean,
            variance,
            skewness,
            ks_distance,
        },
        z,
    ))
}

pub fn run_mc(cfg: &ExperimentConfig) -> Result<ExperimentReport, CltError> {
    run_mc_with_samples(cfg).map(|(r, _)| r)
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean, unbiased variance and sample skewness.
pub fn sample_moments(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = neumaier_sum(xs.iter().copied()) / n;
    let m2 = neumaier_sum(xs.iter().map(|x| (x - mean).powi(2))) / n;
    let m3 = neumaier_sum(xs.iter().map(|x| (x - mean).powi(3))) / n;
    let var = if xs.len() > 1 {
        m2 * n / (n - 1.0)
    } else {
        0.0
    };
    let skew = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    (mean, var, skew)
}

/// Standard normal CDF. `erfc` from `statrs` is accurate to about 1e-15
/// relative, which keeps this well past ten significant digits.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// the standard normal.
pub fn ks_normal(samples: &[f64]) -> Result<f64, CltError> {
    if samples.len() < 2 {
        return Err(CltError::TooFewSamples(samples.len()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    // Ties move the empirical CDF in one jump, so compare at group ends.
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let phi = normal_cdf(xs[i]);
        d = d
            .max((phi - i as f64 / n).abs())
            .max((j as f64 / n - phi).abs());
        i = j;
    }
    Ok(d)
}

/// KS distance between an exact integer distribution, normalized by
/// `norm`, and the standard normal.
pub fn ks_exact(table: &DistributionTable, norm: &Normalizer) -> f64 {
    let total = BigRational::from_integer(table.total().clone().into());
    let mut below = BigRational::zero();
    let mut d = 0.0f64;
    for (v, c) in table.iter() {
        let phi = normal_cdf(norm.apply(v as f64));
        let left = to_f64(&(&below / &total));
        below += BigRational::from_integer(c.clone().into());
        let right = to_f64(&(&below / &total));
        d = d.max((phi - left).abs()).max((right - phi).abs());
    }
    d
}

/// The six pair-indicator expectations behind the variance of the 31-2
/// count, with the assembled leading variance coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCovariances {
    /// `(label, E I I')` in a fixed order.
    pub expectations: Vec<(&'static str, BigRational)>,
    /// `E I_{i,j}` for a single pair.
    pub indicator_mean: BigRational,
    /// Coefficient `c` in `var = c n^3 + O(n^2)`.
    pub coefficient: BigRational,
}

impl PatternCovariances {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "expectations": self.expectations.iter().map(|(label, v)| {
                serde_json::json!({ "pair": label, "value": format_rational(v) })
            }).collect::<Vec<_>>(),
            "indicator_mean": format_rational(&self.indicator_mean),
            "coefficient": format_rational(&self.coefficient),
        })
    }
}

/// Pairs `((i, j), (k, l))` of indicators `I_{i,j} = [x_{i-1} > x_j > x_i]`
/// whose joint expectations enter the leading variance term.
type Pair = (usize, usize);

const PAIRS: [(&str, Pair, Pair); 6] = [
    ("I23*I24", (2, 3), (2, 4)),
    ("I25*I45", (2, 5), (4, 5)),
    ("I24*I35", (2, 4), (3, 5)),
    ("I25*I34", (2, 5), (3, 4)),
    ("I23*I45", (2, 3), (4, 5)),
    ("I24*I45", (2, 4), (4, 5)),
];

fn indicator(x: &[usize], (i, j): Pair) -> bool {
    x[i - 2] > x[j - 1] && x[j - 1] > x[i - 1]
}

fn orderings(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in orderings(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

/// Exact expectations over all 120 orderings of five exchangeable values.
pub fn pattern_covariances() -> PatternCovariances {
    let all = orderings(5);
    let total = all.len() as i64;
    let frac = |hits: usize| BigRational::new((hits as i64).into(), total.into());
    let indicator_mean = frac(all.iter().filter(|x| indicator(x, (2, 3))).count());
    let expectations: Vec<(&'static str, BigRational)> = PAIRS
        .iter()
        .map(|&(label, a, b)| {
            let hits = all
                .iter()
                .filter(|x| indicator(x, a) && indicator(x, b))
                .count();
            (label, frac(hits))
        })
        .collect();
    let sq = &indicator_mean * &indicator_mean;
    let cov_sum: BigRational = expectations.iter().map(|(_, e)| e - &sq).sum();
    let coefficient = cov_sum / BigRational::from_integer(3.into());
    PatternCovariances {
        expectations,
        indicator_mean,
        coefficient,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of `counts` against the uniform law on its
/// cells.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareResult {
    let k = counts.len();
    assert!(k >= 2, "need at least two cells");
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    let statistic = neumaier_sum(
        counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected),
    );
    let df = k - 1;
    let p_value = ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .sf(statistic);
    ChiSquareResult {
        statistic,
        degrees_of_freedom: df,
        p_value,
    }
}

/// Draws `draws` tableaux of length `n` from the uniform sampler and
/// tests the cell counts against uniform over all `n!` tableaux.
pub fn sampler_chi_square(n: usize, draws: usize, seed: u64) -> Result<ChiSquareResult, CltError> {
    let index: HashMap<String, usize> = enumerate(n)?
        .enumerate()
        .map(|(i, t)| (t.compact(), i))
        .collect();
    let cells = index.len();
    let blocks = draws.div_ceil(BLOCK_SIZE);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_SIZE.min(draws - b * BLOCK_SIZE);
            let mut rng = substream(seed, b as u64);
            let mut counts = vec![0u64; cells];
            for _ in 0..len {
                let t = sample_uniform_with(n, &mut rng);
                counts[index[&t.compact()]] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; cells],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(chi_square_uniform(&counts))
}

/// `var(S_n) / (n^3 / 180)` from the exact variance
/// `(n-2)(2n^2+11n-1)/360`, for `n >= 2`.
pub fn variance_ratio_superfluous(n: usize) -> f64 {
    let n = BigRational::from_integer((n as i64).into());
    let two = BigRational::from_integer(2.into());
    let var = (&n - &two)
        * (&two * &n * &n + BigRational::from_integer(11.into()) * &n - BigRational::one())
        / BigRational::from_integer(360.into());
    let scale = &n * &n * &n / BigRational::from_integer(180.into());
    (var / scale).to_f64().unwrap_or(f64::NAN)
}

/// Rational `1/d`.
pub fn unit_fraction(d: i64) -> BigRational {
    BigRational::new(One::one(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    #[test]
    fn normalizer_values() {
        assert_eq!(normalizers(Statistic::R, 11).unwrap(), (6.0, 1.0));
        let (c, s) = normalizers(Statistic::S, 60).unwrap();
        assert_eq!(c, 300.0);
        assert!((s - 1200.0f64.sqrt()).abs() < 1e-12);
        let (c, s) = normalizers(Statistic::U, 100).unwrap();
        assert!((c - 100f64.ln()).abs() < 1e-15 && (s * s - c).abs() < 1e-12);
        assert!(normalizers(Statistic::U, 1).is_err());
        assert!(normalizer(Statistic::Y, 10, Normalization::Exact).is_err());
        let e = normalizer(Statistic::S, 5, Normalization::Exact).unwrap();
        assert!((e.center - 1.0).abs() < 1e-15 && (e.scale.powi(2) - 13.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn float_moments_match_rationals() {
        for stat in [Statistic::U, Statistic::F, Statistic::R, Statistic::S] {
            for n in [2, 3, 10, 57] {
                let (m, v) = exact_moments(stat, n).unwrap();
                let (mf, vf) = exact_moments_f64(stat, n).unwrap();
                assert!((to_f64(&m) - mf).abs() < 1e-12 * mf.abs().max(1.0));
                assert!((to_f64(&v) - vf).abs() < 1e-12 * vf.abs().max(1.0));
            }
        }
    }

    #[test]
    fn ks_edge_cases() {
        assert_eq!(ks_normal(&[0.0; 10]).unwrap(), 0.5);
        assert!(ks_normal(&[1.0]).is_err());
        let a = [0.3, -1.2, 2.0, 0.0, -0.4];
        let mut b = a;
        b.reverse();
        assert_eq!(ks_normal(&a).unwrap(), ks_normal(&b).unwrap());
    }

    #[test]
    fn ks_of_normal_draws_is_small() {
        let mut rng = rng_from_seed(11);
        let xs: Vec<f64> = (0..200_000).map(|_| box_muller(&mut rng)).collect();
        assert!(ks_normal(&xs).unwrap() < 0.005);
    }

    // Box–Muller, only for the test above.
    fn box_muller(rng: &mut crate::rng::Rng) -> f64 {
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    #[test]
    fn covariance_constants() {
        let pc = pattern_covariances();
        let want = [12, 30, 120, 120, 40, 40];
        for ((_, e), d) in pc.expectations.iter().zip(want) {
            assert_eq!(e, &unit_fraction(d));
        }
        assert_eq!(pc.indicator_mean, unit_fraction(6));
        assert_eq!(pc.coefficient, unit_fraction(180));
    }

    #[test]
    fn indicator_sum_matches_exact_mean() {
        let mut rng = rng_from_seed(3);
        let n = 1000;
        let trials = 100_000;
        let sum: u64 = (0..trials).map(|_| sample_indicator_sum(n, &mut rng)).sum();
        let mean = sum as f64 / trials as f64;
        let m = moment_formulas(n);
        let sd = (to_f64(&m.var_unrestricted) / trials as f64).sqrt();
        assert!((mean - to_f64(&m.mean_unrestricted)).abs() < 5.0 * sd);
    }

    #[test]
    fn run_mc_is_deterministic_and_checks_config() {
        let cfg = ExperimentConfig {
            statistic: Statistic::S,
            source: Source::TableauSampler,
            n: 30,
            trials: 5000,
            seed: 1,
            normalization: Normalization::Exact,
        };
        let a = run_mc(&cfg).unwrap();
        assert_eq!(a, run_mc(&cfg).unwrap());
        assert!((0.0..=1.0).contains(&a.ks_distance));
        let bad = ExperimentConfig {
            statistic: Statistic::Pattern31_2,
            ..cfg
        };
        assert!(matches!(run_mc(&bad), Err(CltError::Incompatible { .. })));
        assert!(run_mc(&ExperimentConfig { trials: 0, ..cfg }).is_err());
    }

    #[test]
    fn sources_agree_in_mean() {
        for (stat, src) in [
            (Statistic::R, Source::Permutation),
            (Statistic::R, Source::TableauSampler),
            (Statistic::U, Source::Indicators),
            (Statistic::U, Source::Permutation),
            (Statistic::F, Source::TableauSampler),
        ] {
            let cfg = ExperimentConfig {
                statistic: stat,
                source: src,
                n: 40,
                trials: 20_000,
                seed: 5,
                normalization: Normalization::Exact,
            };
            let r = run_mc(&cfg).unwrap();
            // Normalized mean has sd 1/sqrt(trials).
            assert!(
                r.mean.abs() < 6.0 / (20_000f64).sqrt(),
                "{stat} {src}: {}",
                r.mean
            );
        }
    }

    #[test]
    fn variance_ratio_tends_to_one() {
        assert!((variance_ratio_superfluous(10_000) - 1.0).abs() < 0.01);
    }

    #[test]
    fn chi_square_on_uniform_counts() {
        let r = chi_square_uniform(&[100, 100, 100, 100]);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let skewed = chi_square_uniform(&[1000, 0]);
        assert!(skewed.p_value < 1e-10);
    }

    #[test]
    fn exact_ks_of_point_mass() {
        let t = DistributionTable::from_counts([(3u64, 1u32)]);
        let norm = Normalizer {
            kind: Normalization::Exact,
            center: 3.0,
            scale: 1.0,
        };
        assert!((ks_exact(&t, &norm) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ks_is_a_distance(xs in proptest::collection::vec(-5.0f64..5.0, 2..200)) {
            let d = ks_normal(&xs).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            let mut ys = xs.clone();
            ys.reverse();
            prop_assert_eq!(d, ks_normal(&ys).unwrap());
        }

        #[test]
        fn neumaier_matches_exact_on_integers(xs in proptest::collection::vec(-1000i32..1000, 0..300)) {
            let exact: i64 = xs.iter().map(|&x| x as i64).sum();
            prop_assert_eq!(neumaier_sum(xs.iter().map(|&x| x as f64)), exact as f64);
        }
    }
}
