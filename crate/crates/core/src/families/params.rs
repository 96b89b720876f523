use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use super::FamilyError;
use crate::ring::{format_rational, Rational};

/// `key = value` fixture parameters; lists are comma separated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub(crate) fn reject_unknown(&self, allowed: &[&str]) -> Result<(), FamilyError> {
        let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(FamilyError::param(k, "unknown parameter")),
            None => Ok(()),
        }
    }

    pub(crate) fn int(&self, key: &str, default: Option<i64>) -> Result<i64, FamilyError> {
        match self.values.get(key) {
            Some(v) => v.trim().parse().map_err(|_| FamilyError::param(key, format!("expected an integer, got '{v}'"))),
            None => default.ok_or_else(|| FamilyError::param(key, "required")),
        }
    }

    pub(crate) fn int_list(&self, key: &str, default: Option<Vec<i64>>) -> Result<Vec<i64>, FamilyError> {
        match self.values.get(key) {
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| FamilyError::param(key, format!("expected integers, got '{x}'"))))
                .collect(),
            None => default.ok_or_else(|| FamilyError::param(key, "required")),
        }
    }

    pub(crate) fn rational_list(&self, key: &str, default: Vec<Rational>) -> Result<Vec<Rational>, FamilyError> {
        match self.values.get(key) {
            Some(v) => v.split(',').map(|x| parse_rational(key, x.trim())).collect(),
            None => Ok(default),
        }
    }
}

fn parse_rational(key: &str, text: &str) -> Result<Rational, FamilyError> {
    let bad = || FamilyError::param(key, format!("rational literals must be p/q, got '{text}'"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p: BigInt = num.trim().parse().map_err(|_| bad())?;
    let q: BigInt = den.trim().parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(FamilyError::param(key, "zero denominator"));
    }
    Ok(Rational::new(p, q))
}

pub(crate) fn rational_list_text(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
