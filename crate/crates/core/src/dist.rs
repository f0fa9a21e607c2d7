//! Exact probability generating functions and moments of the tableau
//! statistics under the uniform measure on tableaux of length `n`.
//!
//! Writing `U, F, R, S` for unrestricted rows, first-row 1s, rows and
//! superfluous 1s:
//!
//! * `E z^U = prod_{j<n} (z + j)/(j + 1)`, the law of a sum of independent
//!   indicators with success probabilities `1/k`;
//! * `E z^F w^U = w prod_{k=2..n} (z + w + k - 2)/k`;
//! * `E z^R = (1/n!) sum_r <n, r-1> z^r` with Eulerian numbers `<n, k>`,
//!   equivalently `(z/n!) sum_m (m+1) a_{n-1,m} (z-1)^{n-1-m}` with the
//!   triangle `a_{k,m} = m a_{k-1,m-1} + (m+1) a_{k-1,m}`;
//! * `E z^S = (1/n!) sum_l c_{n-1,l} b_l` where `b_l = 1 + z + ... + z^l`
//!   and `c_{m+1,l} = c_{m,l} (1 - z^{-l-1}) b_l + c_{m,l-1} z^{-l} b_{l-1}`.
//!
//! Everything is computed with exact integers and rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::poly::{to_rational, BiPoly, ExactBiPoly, ExactPoly, Laurent, Poly};
use crate::table::DistributionTable;
use crate::tableau::TableauStat;

/// Largest `n` accepted by the generating-function builders.
pub const MAX_PGF_LENGTH: usize = 200;
/// Largest `n` accepted by [`pgf_superfluous_closed`].
pub const MAX_CLOSED_FORM_LENGTH: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DistError {
    #[error("length {n} is outside 1..={max}")]
    LengthOutOfRange { n: usize, max: usize },
    #[error("row generating function: Eulerian and triangle builds disagree at n = {n}")]
    RowsCrossCheck { n: usize },
    #[error("superfluous-ones recurrence left a z^{exponent} term at n = {n}")]
    NegativePowerResidue { n: usize, exponent: i64 },
    #[error("polynomial is not normalized: p(1) = {value}")]
    NotNormalized { value: String },
    #[error("no generating function is implemented for {0}")]
    NoGeneratingFunction(TableauStat),
    #[error("coefficient of z^{exponent} times {n}! is {value}, not a non-negative integer")]
    NonIntegerCount {
        n: usize,
        exponent: usize,
        value: String,
    },
}

fn check_n(n: usize, max: usize) -> Result<(), DistError> {
    if n == 0 || n > max {
        Err(DistError::LengthOutOfRange { n, max })
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn over_factorial(p: &Poly<BigInt>, n: usize) -> ExactPoly {
    let nf = BigRational::from_integer(factorial(n).into());
    to_rational(p).scale(&nf.recip())
}

/// `prod_{j=0}^{n-1} (z + j) / (j + 1)`.
pub fn pgf_unrestricted(n: usize) -> Result<ExactPoly, DistError> {
    check_n(n, MAX_PGF_LENGTH)?;
    let rising = (0..n).fold(Poly::<BigInt>::one(), |acc, j| {
        &acc * &Poly::from_coeffs(vec![BigInt::from(j), BigInt::one()])
    });
    Ok(over_factorial(&rising, n))
}

/// `w prod_{k=2}^{n} (z + w + k - 2) / k`; the `z` exponent counts
/// first-row 1s and the `w` exponent unrestricted rows.
pub fn pgf_joint_first_unrestricted(n: usize) -> Result<ExactBiPoly, DistError> {
    check_n(n, MAX_PGF_LENGTH)?;
    let mut acc = ExactBiPoly::w();
    for k in 2..=n {
        let mut factor = BiPoly::z() + BiPoly::w();
        factor.add_term(0, 0, int(k as u64 - 2));
        acc = (&acc * &factor).scale(&ratio(1, k as u64));
    }
    Ok(acc)
}

/// Law of first-row 1s: the joint generating function at `w = 1`.
pub fn pgf_first_row(n: usize) -> Result<ExactPoly, DistError> {
    Ok(pgf_joint_first_unrestricted(n)?.eval_w(&BigRational::one()))
}

/// Row `k` of the triangle `a_{k,m} = m a_{k-1,m-1} + (m+1) a_{k-1,m}`,
/// `a_{0,0} = 1`, for `m = 0..=k`.
pub fn rows_triangle(k: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for level in 1..=k {
        let next = (0..=level)
            .map(|m| {
                let left = if m >= 1 {
                    &row[m - 1] * m
                } else {
                    BigUint::zero()
                };
                let right = row.get(m).map(|a| a * (m + 1)).unwrap_or_default();
                left + right
            })
            .collect();
        row = next;
    }
    row
}

/// Eulerian numbers `<n, k>` for `k = 0..n` (`n >= 1`), from
/// `<n, k> = (k + 1) <n-1, k> + (n - k) <n-1, k-1>`.
pub fn eulerian_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for len in 2..=n {
        let next = (0..len)
            .map(|k| {
                let stay = row.get(k).map(|e| e * (k + 1)).unwrap_or_default();
                let grow = if k >= 1 {
                    &row[k - 1] * (len - k)
                } else {
                    BigUint::zero()
                };
                stay + grow
            })
            .collect();
        row = next;
    }
    row
}

/// Stirling numbers of the second kind `{n m}` for `m = 0..=n`.
pub fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for len in 1..=n {
        let next = (0..=len)
            .map(|m| {
                let stay = if m >= 1 {
                    row.get(m).map(|s| s * m).unwrap_or_default()
                } else {
                    BigUint::zero()
                };
                let grow = if m >= 1 {
                    row[m - 1].clone()
                } else {
                    BigUint::zero()
                };
                stay + grow
            })
            .collect();
        row = next;
    }
    row
}

/// `(1/n!) sum_{r=1}^{n} <n, r-1> z^r`.
pub fn pgf_rows_eulerian(n: usize) -> Result<ExactPoly, DistError> {
    check_n(n, MAX_PGF_LENGTH)?;
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(eulerian_row(n).into_iter().map(BigInt::from));
    Ok(over_factorial(&Poly::from_coeffs(coeffs), n))
}

/// `(z/n!) sum_{m=0}^{n-1} (m+1) a_{n-1,m} (z-1)^{n-1-m}`.
pub fn pgf_rows_triangle(n: usize) -> Result<ExactPoly, DistError> {
    check_n(n, MAX_PGF_LENGTH)?;
    let a = rows_triangle(n - 1);
    let z_minus_one = Poly::from_coeffs(vec![-BigInt::one(), BigInt::one()]);
    let mut sum = Poly::<BigInt>::zero();
    let mut power = Poly::<BigInt>::one();
    // m runs downward so the power of (z - 1) grows by one each step.
    for m in (0..n).rev() {
        let weight = BigInt::from(&a[m] * (m + 1));
        sum = &sum + &power.scale(&weight);
        power = &power * &z_minus_one;
    }
    Ok(over_factorial(&sum.shift_up(1), n))
}

/// Generating function of the row count, built from Eulerian numbers and
/// cross-checked against the triangle form; a mismatch is an error.
pub fn pgf_rows(n: usize) -> Result<ExactPoly, DistError> {
    let eulerian = pgf_rows_eulerian(n)?;
    if pgf_rows_triangle(n)? != eulerian {
        return Err(DistError::RowsCrossCheck { n });
    }
    Ok(eulerian)
}

/// Law of the column count `n - R`. The row law is symmetric about
/// `(n+1)/2`, so this is [`pgf_rows`] divided by `z`.
pub fn pgf_columns(n: usize) -> Result<ExactPoly, DistError> {
    let rows = pgf_rows(n)?;
    Ok(Poly::from_coeffs(
        rows.coeffs().iter().skip(1).cloned().collect(),
    ))
}

fn geometric(l: usize) -> Laurent<BigInt> {
    Laurent::from_poly(Poly::from_coeffs(vec![BigInt::one(); l + 1]))
}

/// The coefficient triangle of the superfluous-ones recurrence at level
/// `n - 1`: `c_{n-1,l}` for `l = 0..n`.
pub fn superfluous_coefficients(n: usize) -> Result<Vec<Laurent<BigInt>>, DistError> {
    check_n(n, MAX_PGF_LENGTH)?;
    let mut level: Vec<Laurent<BigInt>> = vec![Laurent::one()];
    for _ in 1..n {
        // d_l = c_{m,l} b_l, then c_{m+1,l} = d_l - z^{-l-1} d_l + z^{-l} d_{l-1}.
        let d: Vec<Laurent<BigInt>> = level
            .iter()
            .enumerate()
            .map(|(l, c)| c.mul_geometric(l))
            .collect();
        let mut next = Vec::with_capacity(d.len() + 1);
        for l in 0..=d.len() {
            let mut c = Laurent::zero();
            if let Some(dl) = d.get(l) {
                c = &(&c + dl) - &dl.shift(-(l as i64) - 1);
            }
            if l >= 1 {
                c = &c + &d[l - 1].shift(-(l as i64));
            }
            next.push(c);
        }
        level = next;
    }
    Ok(level)
}

/// Generating function of superfluous 1s via the coefficient recurrence.
/// Fails if negative powers of `z` survive in the final sum.
pub fn pgf_superfluous(n: usize) -> Result<ExactPoly, DistError> {
    let level = superfluous_coefficients(n)?;
    let sum = level
        .iter()
        .enumerate()
        .fold(Laurent::zero(), |acc, (l, c)| &acc + &c.mul_geometric(l));
    let poly = sum
        .into_poly()
        .map_err(|exponent| DistError::NegativePowerResidue { n, exponent })?;
    Ok(over_factorial(&poly, n))
}

/// `A_{n,r} = sum_{0 <= l_1 <= ... <= l_r <= n-1-r} prod_j (1 - z^{-l_j-1}) b_{l_j}`.
pub fn closed_form_a(n: usize, r: usize) -> Laurent<BigInt> {
    assert!(r < n, "A_{{n,r}} needs r < n");
    let top = n - 1 - r;
    let factors: Vec<Laurent<BigInt>> = (0..=top)
        .map(|l| {
            let b = geometric(l);
            &b - &b.shift(-(l as i64) - 1)
        })
        .collect();
    let mut total = Laurent::zero();
    // Depth-first over weakly increasing index sequences, sharing prefixes.
    fn walk(
        factors: &[Laurent<BigInt>],
        start: usize,
        left: usize,
        prefix: &Laurent<BigInt>,
        total: &mut Laurent<BigInt>,
    ) {
        if left == 0 {
            *total = &*total + prefix;
            return;
        }
        for l in start..factors.len() {
            let next = prefix * &factors[l];
            walk(factors, l, left - 1, &next, total);
        }
    }
    walk(&factors, 0, r, &Laurent::one(), &mut total);
    total
}

/// Generating function of superfluous 1s from the explicit sum
/// `(1/n!) sum_r z^{-C(n-r,2)} (prod_{k<n-r} b_k) A_{n,r}`.
pub fn pgf_superfluous_closed(n: usize) -> Result<ExactPoly, DistError> {
    check_n(n, MAX_CLOSED_FORM_LENGTH)?;
    let mut sum = Laurent::zero();
    for r in 0..n {
        let k = n - r;
        let product = (0..k).fold(Laurent::one(), |acc, j| acc.mul_geometric(j));
        let shift = -((k * (k - 1) / 2) as i64);
        sum = &sum + &(&product.shift(shift) * &closed_form_a(n, r));
    }
    let poly = sum
        .into_poly()
        .map_err(|exponent| DistError::NegativePowerResidue { n, exponent })?;
    Ok(over_factorial(&poly, n))
}

/// `a_{n-1,n-r-1} = (n-r-1)! sum_{1<=j_1<...<j_r<=n-1} j_1 (j_2 - 1) ... (j_r - (r-1))`
/// by direct summation over subsets.
pub fn rows_triangle_nested_sum(n: usize, r: usize) -> BigUint {
    assert!(n >= 1 && r < n, "need 0 <= r < n");
    fn walk(start: usize, depth: usize, left: usize, hi: usize) -> BigUint {
        if left == 0 {
            return BigUint::one();
        }
        (start..=hi)
            .map(|j| BigUint::from(j - depth) * walk(j + 1, depth + 1, left - 1, hi))
            .sum()
    }
    factorial(n - r - 1) * walk(1, 0, r, n - 1)
}

fn check_normalized(p: &ExactPoly) -> Result<(), DistError> {
    let at_one: BigRational = p.coeffs().iter().cloned().sum();
    if at_one != BigRational::one() {
        return Err(DistError::NotNormalized {
            value: format_rational(&at_one),
        });
    }
    Ok(())
}

/// `r`-th factorial moment `E X(X-1)...(X-r+1)`: the `r`-th derivative at
/// `z = 1` of a normalized generating function.
pub fn factorial_moment(p: &ExactPoly, r: usize) -> Result<BigRational, DistError> {
    check_normalized(p)?;
    Ok(p.terms()
        .map(|(k, c)| {
            let falling: BigInt = (0..r).map(|i| BigInt::from(k as i64 - i as i64)).product();
            c * BigRational::from_integer(falling)
        })
        .sum())
}

pub fn mean(p: &ExactPoly) -> Result<BigRational, DistError> {
    factorial_moment(p, 1)
}

pub fn variance(p: &ExactPoly) -> Result<BigRational, DistError> {
    let m1 = factorial_moment(p, 1)?;
    let m2 = factorial_moment(p, 2)?;
    Ok(&m2 + &m1 - &m1 * &m1)
}

/// Generating function of one statistic at length `n`.
pub fn pgf_of(stat: TableauStat, n: usize) -> Result<ExactPoly, DistError> {
    match stat {
        TableauStat::Unrestricted => pgf_unrestricted(n),
        TableauStat::FirstRow => pgf_first_row(n),
        TableauStat::Rows => pgf_rows(n),
        TableauStat::Columns => pgf_columns(n),
        TableauStat::Superfluous => pgf_superfluous(n),
        TableauStat::TotalOnes => Err(DistError::NoGeneratingFunction(stat)),
    }
}

/// Exact count table of one statistic at length `n` from its generating
/// function.
pub fn distribution_pgf(stat: TableauStat, n: usize) -> Result<DistributionTable, DistError> {
    distribution_from_pgf(&pgf_of(stat, n)?, n)
}

/// Counts `n! * [z^k] p`, which must be non-negative integers.
pub fn distribution_from_pgf(p: &ExactPoly, n: usize) -> Result<DistributionTable, DistError> {
    check_normalized(p)?;
    let nf = BigRational::from_integer(factorial(n).into());
    let mut table = DistributionTable::new();
    for (k, c) in p.terms() {
        let scaled = c * &nf;
        if !scaled.is_integer() || scaled.is_negative() {
            return Err(DistError::NonIntegerCount {
                n,
                exponent: k,
                value: format_rational(&scaled),
            });
        }
        let count = scaled.to_integer().to_biguint().expect("non-negative");
        table.add(k as u64, count);
    }
    Ok(table)
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn harmonic(n: usize) -> BigRational {
    (1..=n).map(|k| ratio(1, k as u64)).sum()
}

pub fn harmonic2(n: usize) -> BigRational {
    (1..=n).map(|k| ratio(1, (k * k) as u64)).sum()
}

/// Exact means, variances and the first-row/unrestricted covariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub n: usize,
    pub mean_unrestricted: BigRational,
    pub var_unrestricted: BigRational,
    pub mean_first_row: BigRational,
    pub var_first_row: BigRational,
    pub cov_first_row_unrestricted: BigRational,
    pub mean_rows: BigRational,
    pub var_rows: BigRational,
    pub mean_superfluous: BigRational,
    pub var_superfluous: BigRational,
    /// `E S(S-1)`.
    pub second_factorial_superfluous: BigRational,
}

impl MomentTable {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            mean_unrestricted: &'a str,
            var_unrestricted: &'a str,
            mean_first_row: &'a str,
            var_first_row: &'a str,
            cov_first_row_unrestricted: &'a str,
            mean_rows: &'a str,
            var_rows: &'a str,
            mean_superfluous: &'a str,
            var_superfluous: &'a str,
            second_factorial_superfluous: &'a str,
        }
        let f: Vec<String> = self
            .fields()
            .iter()
            .map(|(_, v)| format_rational(v))
            .collect();
        serde_json::to_value(Wire {
            n: self.n,
            mean_unrestricted: &f[0],
            var_unrestricted: &f[1],
            mean_first_row: &f[2],
            var_first_row: &f[3],
            cov_first_row_unrestricted: &f[4],
            mean_rows: &f[5],
            var_rows: &f[6],
            mean_superfluous: &f[7],
            var_superfluous: &f[8],
            second_factorial_superfluous: &f[9],
        })
        .expect("moments serialize")
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn fields(&self) -> [(&'static str, &BigRational); 10] {
        [
            ("mean_unrestricted", &self.mean_unrestricted),
            ("var_unrestricted", &self.var_unrestricted),
            ("mean_first_row", &self.mean_first_row),
            ("var_first_row", &self.var_first_row),
            (
                "cov_first_row_unrestricted",
                &self.cov_first_row_unrestricted,
            ),
            ("mean_rows", &self.mean_rows),
            ("var_rows", &self.var_rows),
            ("mean_superfluous", &self.mean_superfluous),
            ("var_superfluous", &self.var_superfluous),
            (
                "second_factorial_superfluous",
                &self.second_factorial_superfluous,
            ),
        ]
    }
}

/// Closed-form moments. The row-variance and superfluous-ones formulas
/// hold for `n >= 2`; at `n = 1` those entries are 0.
pub fn moment_formulas(n: usize) -> MomentTable {
    assert!(n >= 1, "tableaux have length at least 1");
    let h = harmonic(n);
    let h2 = harmonic2(n);
    let one = BigRational::one();
    let n_i = n as i64;
    let (mean_s, var_s, fact2_s) = if n >= 2 {
        (
            ratio((n_i - 1) * (n_i - 2), 12),
            ratio((n_i - 2) * (2 * n_i * n_i + 11 * n_i - 1), 360),
            ratio(
                BigInt::from((n_i - 2) * (n_i - 3)) * BigInt::from(5 * n_i * n_i - n_i - 16),
                720,
            ),
        )
    } else {
        (
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    };
    MomentTable {
        n,
        mean_unrestricted: h.clone(),
        var_unrestricted: &h - &h2,
        mean_first_row: &h - &one,
        var_first_row: &h - &h2,
        cov_first_row_unrestricted: -(&h2 - &one),
        mean_rows: ratio(n_i + 1, 2),
        var_rows: if n >= 2 {
            ratio(n_i + 1, 12)
        } else {
            BigRational::zero()
        },
        mean_superfluous: mean_s,
        var_superfluous: var_s,
        second_factorial_superfluous: fact2_s,
    }
}

/// The same table extracted from the generating functions.
pub fn moments_from_pgfs(n: usize) -> Result<MomentTable, DistError> {
    let pu = pgf_unrestricted(n)?;
    let joint = pgf_joint_first_unrestricted(n)?;
    let pf = joint.eval_w(&BigRational::one());
    let pr = pgf_rows(n)?;
    let ps = pgf_superfluous(n)?;
    let mean_f = mean(&pf)?;
    let mean_u = mean(&pu)?;
    let e_fu: BigRational = joint
        .terms()
        .map(|((a, b), c)| c * int((a * b) as u64))
        .sum();
    Ok(MomentTable {
        n,
        var_unrestricted: variance(&pu)?,
        var_first_row: variance(&pf)?,
        cov_first_row_unrestricted: e_fu - &mean_f * &mean_u,
        mean_unrestricted: mean_u,
        mean_first_row: mean_f,
        mean_rows: mean(&pr)?,
        var_rows: variance(&pr)?,
        mean_superfluous: mean(&ps)?,
        var_superfluous: variance(&ps)?,
        second_factorial_superfluous: factorial_moment(&ps, 2)?,
    })
}

/// Floating-point view of an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    // Scale down huge numerators and denominators together before dividing.
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}
