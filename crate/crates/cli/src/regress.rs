//! Frozen results as JSON lines, and comparison of fresh runs against them.

use std::fmt;
use std::str::FromStr;

use interval_garside::homology::Complex;
use interval_garside::words::cayley_distances;
use interval_garside::{Error, Garside, GroupParams, Interval, Method};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::grid::{group_pairs, Point};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionRecord {
    pub key: String,
    pub value: Value,
    pub version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    IntervalSize,
    LengthHistogram,
    H1,
    H2,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::IntervalSize => "interval_size",
            Quantity::LengthHistogram => "length_histogram",
            Quantity::H1 => "h1",
            Quantity::H2 => "h2",
        }
    }
}

/// What a record measures: a quantity at (e, n) or (e, n, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key {
    pub quantity: Quantity,
    pub e: u32,
    pub n: usize,
    pub k: Option<u32>,
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} e={} n={}", self.quantity.name(), self.e, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

impl FromStr for Key {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("malformed regression key {s:?}");
        let mut parts = s.split_whitespace();
        let quantity = match parts.next().ok_or_else(bad)? {
            "interval_size" => Quantity::IntervalSize,
            "length_histogram" => Quantity::LengthHistogram,
            "h1" => Quantity::H1,
            "h2" => Quantity::H2,
            _ => return Err(bad()),
        };
        let mut field = |name: &str| -> Result<Option<u64>, String> {
            match parts.next() {
                None => Ok(None),
                Some(p) => {
                    let v = p.strip_prefix(name).and_then(|v| v.strip_prefix('=')).ok_or_else(bad)?;
                    v.parse().map(Some).map_err(|_| bad())
                }
            }
        };
        let e = field("e")?.ok_or_else(bad)? as u32;
        let n = field("n")?.ok_or_else(bad)? as usize;
        let k = field("k")?.map(|k| k as u32);
        let needs_k = quantity != Quantity::LengthHistogram;
        if needs_k != k.is_some() {
            return Err(bad());
        }
        Ok(Key { quantity, e, n, k })
    }
}

/// The keys frozen for a list of points.
pub fn keys_for(points: &[Point]) -> Vec<Key> {
    let mut keys: Vec<Key> = group_pairs(points)
        .into_iter()
        .map(|(e, n)| Key { quantity: Quantity::LengthHistogram, e, n, k: None })
        .collect();
    for p in points {
        let k = Some(p.k);
        keys.push(Key { quantity: Quantity::IntervalSize, e: p.e, n: p.n, k });
        if p.n >= 3 {
            keys.push(Key { quantity: Quantity::H1, e: p.e, n: p.n, k });
            keys.push(Key { quantity: Quantity::H2, e: p.e, n: p.n, k });
        }
    }
    keys
}

/// Recomputes the value behind a key.
pub fn compute(key: &Key, group_cap: usize) -> Result<Value, Error> {
    let params = GroupParams::new(key.e, key.n)?;
    match (key.quantity, key.k) {
        (Quantity::LengthHistogram, _) => {
            let dist = cayley_distances(params, group_cap)?;
            let top = dist.values().copied().max().unwrap_or(0);
            let mut hist = vec![0usize; top + 1];
            for d in dist.values() {
                hist[*d] += 1;
            }
            Ok(to_value(&hist))
        }
        (quantity, Some(k)) => {
            params.check_k(k)?;
            let interval = Interval::build(params, k, group_cap)?;
            if quantity == Quantity::IntervalSize {
                return Ok(to_value(&interval.len()));
            }
            let g = Garside::build(interval, false)?;
            let complex = Complex::build(&g, Method::Closed, 0)?;
            let r = if quantity == Quantity::H1 { 1 } else { 2 };
            Ok(to_value(&complex.homology(r)?))
        }
        (_, None) => Err(Error::InvalidParams(format!("key {key} needs k"))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Computes all records for `points`, in key order.
pub fn freeze(points: &[Point], group_cap: usize) -> Result<Vec<RegressionRecord>, Error> {
    keys_for(points)
        .par_iter()
        .map(|key| {
            Ok(RegressionRecord {
                key: key.to_string(),
                value: compute(key, group_cap)?,
                version: VERSION.to_string(),
            })
        })
        .collect()
}

pub fn to_lines(records: &[RegressionRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

pub fn parse_lines(text: &str) -> Result<Vec<RegressionRecord>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|err| format!("line {}: {err}", i + 1))
        })
        .collect()
}

/// A record whose recomputed value differs from the frozen one.
#[derive(Debug, Clone)]
pub struct Drift {
    pub key: String,
    pub frozen: String,
    pub now: String,
}

/// Recomputes every record and reports those that changed.
pub fn regress(records: &[RegressionRecord], group_cap: usize) -> Result<Vec<Drift>, Error> {
    let results: Vec<Result<Option<Drift>, Error>> = records
        .par_iter()
        .map(|record| {
            let key: Key = record.key.parse().map_err(Error::InvalidParams)?;
            let now = compute(&key, group_cap)?;
            let (frozen, now) = (record.value.to_string(), now.to_string());
            Ok((frozen != now).then(|| Drift { key: record.key.clone(), frozen, now }))
        })
        .collect();
    let mut drifts = Vec::new();
    for r in results {
        drifts.extend(r?);
    }
    Ok(drifts)
}
