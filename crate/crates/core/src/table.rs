//! Exact histograms: value → count over a population of known size.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// Exact distribution of a non-negative integer statistic, stored as
/// counts. Values with zero count are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DistributionTable {
    counts: BTreeMap<u64, BigUint>,
    total: BigUint,
}

impl DistributionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I, C>(counts: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigUint>,
    {
        let mut t = Self::new();
        for (v, c) in counts {
            t.add(v, c.into());
        }
        t
    }

    pub fn add(&mut self, value: u64, count: BigUint) {
        if count.is_zero() {
            return;
        }
        self.total += &count;
        *self.counts.entry(value).or_default() += count;
    }

    pub fn increment(&mut self, value: u64) {
        self.add(value, BigUint::from(1u8));
    }

    pub fn get(&self, value: u64) -> BigUint {
        self.counts.get(&value).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.counts.iter().map(|(v, c)| (*v, c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Table of `X + delta`; panics if a value would become negative.
    pub fn shifted(&self, delta: i64) -> Self {
        Self::from_counts(self.counts.iter().map(|(&v, c)| {
            let nv = v as i64 + delta;
            assert!(nv >= 0, "shift makes value {v} negative");
            (nv as u64, c.clone())
        }))
    }

    fn moment(&self, k: u32) -> BigRational {
        let total = BigInt::from(self.total.clone());
        let sum: BigInt = self
            .counts
            .iter()
            .map(|(&v, c)| BigInt::from(v).pow(k) * BigInt::from(c.clone()))
            .sum();
        BigRational::new(sum, total)
    }

    pub fn mean(&self) -> BigRational {
        self.moment(1)
    }

    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        self.moment(2) - &m * &m
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            value: u64,
            count: String,
        }
        serde_json::json!({
            "counts": self
                .counts
                .iter()
                .map(|(&value, c)| Entry { value, count: c.to_string() })
                .collect::<Vec<_>>(),
            "total": self.total.to_string(),
        })
    }
}
