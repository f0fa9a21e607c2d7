//! Dense univariate polynomials, Laurent polynomials and sparse bivariate
//! polynomials over an exact coefficient ring.
//!
//! Every generating function in the crate lives in one of these types. The
//! coefficient ring is generic so that intermediate recurrences can run over
//! [`BigInt`] and only the final normalization pays for rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational polynomial in `z`.
pub type ExactPoly = Poly<BigRational>;
/// Exact rational Laurent polynomial in `z`.
pub type ExactLaurent = Laurent<BigRational>;
/// Exact rational polynomial in `(z, w)`.
pub type ExactBiPoly = BiPoly<BigRational>;

/// Coefficient ring for the polynomial types.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> std::ops::AddAssign<&'a Self>
    + for<'a> std::ops::SubAssign<&'a Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + for<'a> std::ops::AddAssign<&'a T>
        + for<'a> std::ops::SubAssign<&'a T>
{
}

/// Polynomial with coefficients indexed by exponent. Trailing zero
/// coefficients are never stored; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * z^exp`
    pub fn monomial(exp: usize, c: C) -> Self {
        let mut coeffs = vec![C::zero(); exp + 1];
        coeffs[exp] = c;
        Self::from_coeffs(coeffs)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(1, C::one())
    }

    /// Builds from coefficients in increasing exponent order.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^exp` (zero beyond the degree).
    pub fn coeff(&self, exp: usize) -> C {
        self.coeffs.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &C)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, factor: &C) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        )
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Multiplies by `1 + z + ... + z^len` using a running window sum.
    pub fn mul_geometric(&self, len: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let out_len = self.coeffs.len() + len;
        let mut out = Vec::with_capacity(out_len);
        let mut window = C::zero();
        for i in 0..out_len {
            if let Some(c) = self.coeffs.get(i) {
                window += c;
            }
            if i > len {
                window -= &self.coeffs[i - len - 1];
            }
            out.push(window.clone());
        }
        Self::from_coeffs(out)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * small::<C>(k as u64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division by a nonzero divisor whose leading coefficient is a
    /// unit of the ring. Returns `None` unless the remainder vanishes.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self>
    where
        C: std::ops::Div<Output = C>,
    {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let nd = self.degree()?;
        if nd < dd {
            return None;
        }
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            if q.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let t = q.clone() * d.clone();
                rem[k + i] -= &t;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::from_coeffs(quot))
        } else {
            None
        }
    }
}

fn small<C: Coeff>(k: u64) -> C {
    // Repeated doubling keeps this generic over rings without `From<u64>`.
    let mut acc = C::zero();
    let mut unit = C::one();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + unit.clone();
        }
        unit = unit.clone() + unit;
        k >>= 1;
    }
    acc
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), C::zero());
        }
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a.clone() * b.clone();
                coeffs[i + j] += &t;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Poly<C>) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().map(|(e, c)| (e as i64, c)))
    }
}

fn write_terms<'a, C: Coeff + fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a C)>,
) -> fmt::Result {
    let mut any = false;
    for (e, c) in terms {
        if any {
            f.write_str(" + ")?;
        }
        any = true;
        match e {
            0 => write!(f, "{c}")?,
            1 => write!(f, "({c})z")?,
            _ => write!(f, "({c})z^{e}")?,
        }
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// `z^low * body` with `body(0) != 0` whenever the value is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent<C> {
    low: i64,
    body: Poly<C>,
}

impl<C: Coeff> Laurent<C> {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            body: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    /// `c * z^exp` for any integer exponent.
    pub fn monomial(exp: i64, c: C) -> Self {
        Self::new(exp, Poly::constant(c))
    }

    pub fn new(low: i64, body: Poly<C>) -> Self {
        let mut l = Laurent { low, body };
        l.normalize();
        l
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        Self::new(0, p)
    }

    fn normalize(&mut self) {
        if self.body.is_zero() {
            self.low = 0;
            return;
        }
        let lead = self.body.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.body.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.body.degree().map(|d| self.low + d as i64)
    }

    pub fn coeff(&self, exp: i64) -> C {
        if exp < self.low {
            return C::zero();
        }
        self.body.coeff((exp - self.low) as usize)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        let low = self.low;
        self.body.terms().map(move |(e, c)| (low + e as i64, c))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            low: if self.is_zero() { 0 } else { self.low + k },
            body: self.body.clone(),
        }
    }

    /// Multiplies by `1 + z + ... + z^len`.
    pub fn mul_geometric(&self, len: usize) -> Self {
        Self::new(self.low, self.body.mul_geometric(len))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.low, self.body.map(f))
    }

    /// The polynomial part, provided there are no negative powers.
    pub fn into_poly(self) -> Result<Poly<C>, i64> {
        if self.low < 0 {
            return Err(self.low);
        }
        Ok(self.body.shift_up(self.low as usize))
    }
}

impl<C: Coeff> Default for Laurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Coeff> Add<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let a = self.body.shift_up((self.low - low) as usize);
        let b = rhs.body.shift_up((rhs.low - low) as usize);
        Laurent::new(low, &a + &b)
    }
}

impl<'a, C: Coeff> Sub<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        if rhs.is_zero() {
            return self.clone();
        }
        let low = if self.is_zero() {
            rhs.low
        } else {
            self.low.min(rhs.low)
        };
        let a = self.body.shift_up((self.low.max(low) - low) as usize);
        let b = rhs.body.shift_up((rhs.low - low) as usize);
        Laurent::new(low, &a - &b)
    }
}

impl<'a, C: Coeff> Mul<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        Laurent::new(self.low + rhs.low, &self.body * &rhs.body)
    }
}

impl<C: Coeff> Add for Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: Laurent<C>) -> Laurent<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: Laurent<C>) -> Laurent<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: Laurent<C>) -> Laurent<C> {
        &self * &rhs
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

/// Sparse polynomial in two variables `z` and `w`, keyed by
/// `(exp_z, exp_w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly<C> {
    terms: BTreeMap<(usize, usize), C>,
}

impl<C: Coeff> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, C::one())
    }

    pub fn monomial(exp_z: usize, exp_w: usize, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(exp_z, exp_w, c);
        p
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, C::one())
    }

    pub fn w() -> Self {
        Self::monomial(0, 1, C::one())
    }

    pub fn add_term(&mut self, exp_z: usize, exp_w: usize, c: C) {
        let slot = self.terms.entry((exp_z, exp_w)).or_insert_with(C::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(exp_z, exp_w));
        }
    }

    pub fn coeff(&self, exp_z: usize, exp_w: usize) -> C {
        self.terms
            .get(&(exp_z, exp_w))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, c.clone() * factor.clone());
        }
        out
    }

    /// Substitutes a value for `w`, leaving a polynomial in `z`.
    pub fn eval_w(&self, w: &C) -> Poly<C> {
        let mut coeffs: Vec<C> = Vec::new();
        for (&(a, b), c) in &self.terms {
            if coeffs.len() <= a {
                coeffs.resize(a + 1, C::zero());
            }
            let t = c.clone() * pow_scalar(w, b);
            coeffs[a] += &t;
        }
        Poly::from_coeffs(coeffs)
    }

    /// Substitutes a value for `z`, leaving a polynomial in `w`.
    pub fn eval_z(&self, z: &C) -> Poly<C> {
        let mut coeffs: Vec<C> = Vec::new();
        for (&(a, b), c) in &self.terms {
            if coeffs.len() <= b {
                coeffs.resize(b + 1, C::zero());
            }
            let t = c.clone() * pow_scalar(z, a);
            coeffs[b] += &t;
        }
        Poly::from_coeffs(coeffs)
    }
}

fn pow_scalar<C: Coeff>(x: &C, e: usize) -> C {
    (0..e).fold(C::one(), |acc, _| acc * x.clone())
}

impl<C: Coeff> Default for BiPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Coeff> Add<&'a BiPoly<C>> for &'a BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: &'a BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a BiPoly<C>> for &'a BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: &'a BiPoly<C>) -> BiPoly<C> {
        let mut out = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Add for BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: BiPoly<C>) -> BiPoly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Mul for BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: BiPoly<C>) -> BiPoly<C> {
        &self * &rhs
    }
}

/// Lifts an integer polynomial to rationals.
pub fn to_rational(p: &Poly<BigInt>) -> ExactPoly {
    p.map(|c| BigRational::from_integer(c.clone()))
}

// JSON wire format: {"var":"z","terms":[{"exp":..,"num":"..","den":".."}]},
// bivariate terms additionally carry "exp_w".

#[derive(Debug, Serialize, Deserialize)]
struct PolyWire {
    var: String,
    terms: Vec<TermWire>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermWire {
    exp: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    exp_w: Option<i64>,
    num: String,
    den: String,
}

/// Error raised when a polynomial JSON document does not parse.
#[derive(Debug, thiserror::Error)]
pub enum PolyJsonError {
    #[error("malformed polynomial JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational {num}/{den}")]
    BadRational { num: String, den: String },
    #[error("negative exponent {0} in a polynomial")]
    NegativeExponent(i64),
    #[error("term is missing exp_w")]
    MissingExpW,
}

fn term_wire(exp: i64, exp_w: Option<i64>, c: &BigRational) -> TermWire {
    TermWire {
        exp,
        exp_w,
        num: c.numer().to_string(),
        den: c.denom().to_string(),
    }
}

fn parse_rational(t: &TermWire) -> Result<BigRational, PolyJsonError> {
    let bad = || PolyJsonError::BadRational {
        num: t.num.clone(),
        den: t.den.clone(),
    };
    let num: BigInt = t.num.parse().map_err(|_| bad())?;
    let den: BigInt = t.den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl ExactPoly {
    pub fn to_json(&self) -> serde_json::Value {
        let wire = PolyWire {
            var: "z".into(),
            terms: self
                .terms()
                .map(|(e, c)| term_wire(e as i64, None, c))
                .collect(),
        };
        serde_json::to_value(wire).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PolyJsonError> {
        let wire: PolyWire = serde_json::from_str(text)?;
        let mut coeffs: Vec<BigRational> = Vec::new();
        for t in &wire.terms {
            if t.exp < 0 {
                return Err(PolyJsonError::NegativeExponent(t.exp));
            }
            let e = t.exp as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] += &parse_rational(t)?;
        }
        Ok(Poly::from_coeffs(coeffs))
    }
}

impl ExactLaurent {
    pub fn to_json(&self) -> serde_json::Value {
        let wire = PolyWire {
            var: "z".into(),
            terms: self.terms().map(|(e, c)| term_wire(e, None, c)).collect(),
        };
        serde_json::to_value(wire).expect("polynomial serializes")
    }
}

impl ExactBiPoly {
    pub fn to_json(&self) -> serde_json::Value {
        let wire = PolyWire {
            var: "z".into(),
            terms: self
                .terms()
                .map(|((a, b), c)| term_wire(a as i64, Some(b as i64), c))
                .collect(),
        };
        serde_json::to_value(wire).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PolyJsonError> {
        let wire: PolyWire = serde_json::from_str(text)?;
        let mut out = BiPoly::zero();
        for t in &wire.terms {
            let w = t.exp_w.ok_or(PolyJsonError::MissingExpW)?;
            if t.exp < 0 || w < 0 {
                return Err(PolyJsonError::NegativeExponent(t.exp.min(w)));
            }
            out.add_term(t.exp as usize, w as usize, parse_rational(t)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> Poly<BigInt> {
        Poly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(ip(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(ip(&[0, 0]).is_zero());
    }

    #[test]
    fn geometric_product_matches_generic_multiplication() {
        let p = ip(&[3, -1, 4, 1, -5]);
        for len in 0..6 {
            let b = ip(&vec![1; len + 1]);
            assert_eq!(p.mul_geometric(len), &p * &b);
        }
    }

    #[test]
    fn laurent_shift_and_poly_part() {
        let l = Laurent::new(-2, ip(&[1, 0, 1]));
        assert_eq!(l.min_exp(), Some(-2));
        assert_eq!(l.max_exp(), Some(0));
        assert_eq!(l.clone().into_poly(), Err(-2));
        assert_eq!(l.shift(2).into_poly().unwrap(), ip(&[1, 0, 1]));
        let cancel = &l - &l;
        assert!(cancel.is_zero());
    }

    #[test]
    fn exact_division() {
        let a = ip(&[1, 1]);
        let b = ip(&[2, 1]);
        let prod = &a * &b;
        let ra = to_rational(&a);
        assert_eq!(to_rational(&prod).div_exact(&ra), Some(to_rational(&b)));
        assert_eq!(to_rational(&ip(&[1, 0, 1])).div_exact(&ra), None);
    }

    #[test]
    fn derivative_of_power() {
        let p = ip(&[0, 0, 0, 5]);
        assert_eq!(p.derivative(), ip(&[0, 0, 15]));
    }

    #[test]
    fn json_round_trip() {
        let p = to_rational(&ip(&[0, 1, 4, 1])).scale(&BigRational::new(1.into(), 6.into()));
        let text = p.to_json().to_string();
        assert!(text.contains("\"var\":\"z\""));
        assert_eq!(ExactPoly::from_json(&text).unwrap(), p);

        let mut b = ExactBiPoly::zero();
        b.add_term(1, 2, BigRational::new(3.into(), 7.into()));
        let text = b.to_json().to_string();
        assert!(text.contains("exp_w"));
        assert_eq!(ExactBiPoly::from_json(&text).unwrap(), b);
    }

    fn arb_poly() -> impl Strategy<Value = Poly<BigInt>> {
        proptest::collection::vec(-20i64..20, 0..8).prop_map(|v| ip(&v))
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent<BigInt>> {
        (-6i64..6, arb_poly()).prop_map(|(low, p)| Laurent::new(low, p))
    }

    proptest! {
        #[test]
        fn multiplication_commutes_and_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_poly(), b in arb_poly(), x in -4i64..4) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn laurent_ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
