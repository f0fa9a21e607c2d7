//! Named invariant suites, each checked exactly up to a size bound.
//!
//! A suite stops at the first disagreement and returns it as a
//! [`Counterexample`] that carries a command line reproducing it.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::clt::{pattern_covariances, unit_fraction};
use crate::dist::{
    distribution_pgf, format_rational, moment_formulas, moments_from_pgfs, pgf_rows_eulerian,
    pgf_rows_triangle, pgf_superfluous, pgf_superfluous_closed, DistError, MAX_CLOSED_FORM_LENGTH,
    MAX_PGF_LENGTH,
};
use crate::growth::{
    distribution_dp, enumerate, extensions, parent, GrowthError, MAX_ENUMERATION_LENGTH,
};
use crate::perm::{exhaustive_distribution, PermError, PermStat};
use crate::table::DistributionTable;
use crate::tableau::{Tableau, TableauStat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Equidistribution,
    PgfCross,
    MeasureChange,
    Moments,
    Covariances,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Equidistribution,
        Suite::PgfCross,
        Suite::MeasureChange,
        Suite::Moments,
        Suite::Covariances,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equidistribution => "equidistribution",
            Suite::PgfCross => "pgf-cross",
            Suite::MeasureChange => "measure-change",
            Suite::Moments => "moments",
            Suite::Covariances => "covariances",
        }
    }

    /// Largest accepted `nmax`.
    pub fn max_n(self) -> usize {
        match self {
            Suite::Equidistribution | Suite::MeasureChange => MAX_ENUMERATION_LENGTH,
            Suite::PgfCross | Suite::Moments => MAX_PGF_LENGTH,
            Suite::Covariances => usize::MAX,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub n: usize,
    pub check: String,
    pub detail: String,
    pub reproduce: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed at n = {}: {}: {}\nreproduce with: {}",
            self.suite, self.n, self.check, self.detail, self.reproduce
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("nmax = {nmax} is outside 1..={max} for suite {suite}")]
    BadBound {
        suite: Suite,
        nmax: usize,
        max: usize,
    },
    #[error("{0}")]
    Failure(Box<Counterexample>),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub nmax: usize,
    /// Number of individual equalities checked.
    pub checks: usize,
}

/// Runs one suite for all sizes up to `nmax`.
pub fn run_suite(suite: Suite, nmax: usize) -> Result<SuiteReport, VerifyError> {
    if nmax == 0 || nmax > suite.max_n() {
        return Err(VerifyError::BadBound {
            suite,
            nmax,
            max: suite.max_n(),
        });
    }
    let mut ctx = Ctx {
        suite,
        nmax,
        checks: 0,
    };
    match suite {
        Suite::Equidistribution => equidistribution(&mut ctx)?,
        Suite::PgfCross => pgf_cross(&mut ctx)?,
        Suite::MeasureChange => measure_change(&mut ctx)?,
        Suite::Moments => moments(&mut ctx)?,
        Suite::Covariances => covariances(&mut ctx)?,
    }
    Ok(SuiteReport {
        suite,
        nmax,
        checks: ctx.checks,
    })
}

struct Ctx {
    suite: Suite,
    nmax: usize,
    checks: usize,
}

impl Ctx {
    fn check<T: PartialEq + fmt::Debug>(
        &mut self,
        n: usize,
        check: impl Into<String>,
        left: &T,
        right: &T,
    ) -> Result<(), VerifyError> {
        self.checks += 1;
        if left == right {
            return Ok(());
        }
        Err(VerifyError::Failure(Box::new(Counterexample {
            suite: self.suite,
            n,
            check: check.into(),
            detail: format!("left = {left:?}, right = {right:?}"),
            reproduce: format!("permtab verify --suite {} --nmax {}", self.suite, self.nmax),
        })))
    }
}

/// Histograms of every tableau statistic at length `n` in one pass.
pub fn tableau_histograms(n: usize) -> Result<Vec<(TableauStat, DistributionTable)>, GrowthError> {
    let mut tables: Vec<(TableauStat, DistributionTable)> = TableauStat::ALL
        .into_iter()
        .map(|s| (s, DistributionTable::new()))
        .collect();
    for t in enumerate(n)? {
        let stats = t.stats();
        for (s, table) in &mut tables {
            table.increment(stats.get(*s) as u64);
        }
    }
    Ok(tables)
}

fn hist(tables: &[(TableauStat, DistributionTable)], stat: TableauStat) -> &DistributionTable {
    &tables
        .iter()
        .find(|(s, _)| *s == stat)
        .expect("all stats present")
        .1
}

fn equidistribution(ctx: &mut Ctx) -> Result<(), VerifyError> {
    use TableauStat as T;
    for n in 1..=ctx.nmax {
        let tab = tableau_histograms(n)?;
        let perm = |s| exhaustive_distribution(n, s);
        let u = hist(&tab, T::Unrestricted);
        ctx.check(n, "U vs cycles", u, &perm(PermStat::Cycles)?)?;
        ctx.check(n, "U vs RL minima", u, &perm(PermStat::RlMinima)?)?;
        ctx.check(
            n,
            "R vs descents + 1",
            hist(&tab, T::Rows),
            &perm(PermStat::Descents)?.shifted(1),
        )?;
        ctx.check(
            n,
            "C vs ascents",
            hist(&tab, T::Columns),
            &perm(PermStat::Ascents)?,
        )?;
        let s = hist(&tab, T::Superfluous);
        ctx.check(n, "S vs 31-2 occurrences", s, &perm(PermStat::Pattern31_2)?)?;
        ctx.check(n, "S vs crossings", s, &perm(PermStat::Crossings)?)?;
        ctx.check(n, "F vs U - 1", hist(&tab, T::FirstRow), &u.shifted(-1))?;
    }
    Ok(())
}

/// Statistics with both a generating function and a dynamic program.
const EXACT_STATS: [TableauStat; 5] = [
    TableauStat::Unrestricted,
    TableauStat::FirstRow,
    TableauStat::Rows,
    TableauStat::Columns,
    TableauStat::Superfluous,
];

fn pgf_cross(ctx: &mut Ctx) -> Result<(), VerifyError> {
    for n in 1..=ctx.nmax {
        let pgf_tables = EXACT_STATS
            .into_iter()
            .map(|s| distribution_pgf(s, n).map(|t| (s, t)))
            .collect::<Result<Vec<_>, _>>()?;
        if n <= 8 {
            let tab = tableau_histograms(n)?;
            for (s, t) in &pgf_tables {
                ctx.check(n, format!("{s}: pgf vs enumeration"), t, hist(&tab, *s))?;
            }
        }
        for (s, t) in &pgf_tables {
            ctx.check(
                n,
                format!("{s}: pgf vs dynamic program"),
                t,
                &distribution_dp(*s, n)?,
            )?;
        }
        if n <= 12.min(MAX_CLOSED_FORM_LENGTH) {
            ctx.check(
                n,
                "superfluous: recurrence vs closed form",
                &pgf_superfluous(n)?,
                &pgf_superfluous_closed(n)?,
            )?;
        }
        ctx.check(
            n,
            "rows: Eulerian vs triangle",
            &pgf_rows_eulerian(n)?,
            &pgf_rows_triangle(n)?,
        )?;
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Test functions for the measure-change identity.
type TestFn = fn(&Tableau) -> BigInt;

fn test_functions() -> Vec<(&'static str, TestFn)> {
    fn st(t: &Tableau, s: TableauStat) -> BigInt {
        BigInt::from(t.stats().get(s))
    }
    vec![
        ("1", |_| BigInt::one()),
        ("U", |t| st(t, TableauStat::Unrestricted)),
        ("R", |t| st(t, TableauStat::Rows)),
        ("F", |t| st(t, TableauStat::FirstRow)),
        ("S", |t| st(t, TableauStat::Superfluous)),
        ("2^U", |t| {
            BigInt::from(2).pow(t.stats().unrestricted as u32)
        }),
        ("3^U", |t| {
            BigInt::from(3).pow(t.stats().unrestricted as u32)
        }),
    ]
}

/// `sum over length-n descendants of t` of `z^U`.
fn descendant_pgf_sum(t: &Tableau, n: usize, z: &BigInt) -> BigInt {
    if t.length() == n {
        return z.pow(t.stats().unrestricted as u32);
    }
    extensions(t)
        .iter()
        .map(|c| descendant_pgf_sum(c, n, z))
        .sum()
}

fn measure_change(ctx: &mut Ctx) -> Result<(), VerifyError> {
    let fns = test_functions();
    for n in 2..=ctx.nmax {
        // Sum of X(parent(T')) over length n against sum of 2^U X(T) over
        // length n - 1.
        let parents: Vec<Tableau> = enumerate(n)?
            .map(|t| parent(&t).expect("length >= 2 has a parent"))
            .collect();
        let previous: Vec<Tableau> = enumerate(n - 1)?.collect();
        for (name, x) in &fns {
            let left: BigInt = parents.iter().map(x).sum();
            let right: BigInt = previous
                .iter()
                .map(|t| BigInt::from(2).pow(t.stats().unrestricted as u32) * x(t))
                .sum();
            ctx.check(n, format!("parent sum of {name}"), &left, &right)?;
        }
        // Extension counts by new U are binomial.
        for t in &previous {
            let u = t.stats().unrestricted;
            let mut by_u = vec![BigUint::zero(); u + 2];
            for c in extensions(t) {
                by_u[c.stats().unrestricted] += 1u32;
            }
            let want: Vec<BigUint> = (0..u + 2)
                .map(|v| {
                    if v == 0 {
                        BigUint::zero()
                    } else {
                        binomial(u, v - 1)
                    }
                })
                .collect();
            ctx.check(
                n,
                format!("extension counts of {}", t.compact()),
                &by_u,
                &want,
            )?;
        }
    }
    // Completion-weighted conditional pgf at z = 2, 3.
    for n in 1..=ctx.nmax {
        for k in 1..=n {
            for t in enumerate(k)? {
                let u = t.stats().unrestricted as u32;
                for z in [2i64, 3] {
                    let zb = BigInt::from(z);
                    let rising: BigInt = (0..(n - k) as i64).map(|i| BigInt::from(z + i)).product();
                    let want = rising * BigInt::from(z + (n - k) as i64).pow(u);
                    ctx.check(
                        n,
                        format!("conditional pgf at z = {z} from {} (k = {k})", t.compact()),
                        &descendant_pgf_sum(&t, n, &zb),
                        &want,
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn moments(ctx: &mut Ctx) -> Result<(), VerifyError> {
    for n in 1..=ctx.nmax {
        let from_pgf = moments_from_pgfs(n)?;
        let formula = moment_formulas(n);
        for ((name, a), (_, b)) in from_pgf.fields().into_iter().zip(formula.fields()) {
            ctx.check(n, name, &format_rational(a), &format_rational(b))?;
        }
    }
    Ok(())
}

fn covariances(ctx: &mut Ctx) -> Result<(), VerifyError> {
    let pc = pattern_covariances();
    for ((label, got), d) in pc.expectations.iter().zip([12, 30, 120, 120, 40, 40]) {
        ctx.check(5, format!("E {label}"), got, &unit_fraction(d))?;
    }
    ctx.check(5, "E I", &pc.indicator_mean, &unit_fraction(6))?;
    ctx.check(
        5,
        "variance coefficient",
        &pc.coefficient,
        &unit_fraction(180),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 5).unwrap();
            assert!(r.checks > 0, "{suite}");
        }
    }

    #[test]
    fn bounds_and_names() {
        assert!(matches!(
            run_suite(Suite::Equidistribution, 10),
            Err(VerifyError::BadBound { .. })
        ));
        assert!(run_suite(Suite::Moments, 0).is_err());
        assert!("nope".parse::<Suite>().is_err());
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn failure_carries_reproduction() {
        let mut ctx = Ctx {
            suite: Suite::Moments,
            nmax: 3,
            checks: 0,
        };
        let err = ctx.check(2, "demo", &1, &2).unwrap_err();
        let VerifyError::Failure(c) = err else {
            panic!("expected a failure")
        };
        assert_eq!(c.reproduce, "permtab verify --suite moments --nmax 3");
        assert!(c.to_string().contains("left = 1, right = 2"));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u8));
        assert_eq!(binomial(2, 3), BigUint::zero());
    }
}
