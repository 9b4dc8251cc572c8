//! Exact generators for the Catalan family of sequences.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite prefix `s_0, ..., s_N` of a non-negative integer sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub name: String,
    pub params: BTreeMap<String, u64>,
    #[serde(with = "crate::decimal::seq")]
    values: Vec<BigUint>,
}

impl Sequence {
    pub fn new(name: impl Into<String>, values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            name: name.into(),
            params: BTreeMap::new(),
            values,
        })
    }

    /// Convenience constructor for small literal sequences.
    pub fn from_u64s(name: impl Into<String>, values: &[u64]) -> Result<Self> {
        Self::new(name, values.iter().copied().map(BigUint::from).collect())
    }

    pub fn with_param(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    /// Largest index held, `N`.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restricts the prefix to `s_0..=s_upto`.
    pub fn truncated(&self, upto: usize) -> Self {
        let mut out = self.clone();
        out.values.truncate(upto + 1);
        out
    }
}

/// Source of a sequence prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Catalan,
    Fuss { k: u64 },
    Super { m: u64 },
    Custom(Vec<BigUint>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Catalan => "catalan",
            Family::Fuss { .. } => "fuss",
            Family::Super { .. } => "super",
            Family::Custom(_) => "custom",
        }
    }

    /// `s_n` for the generator families; `None` for custom lists past their end.
    pub fn value(&self, n: usize) -> Result<Option<BigUint>> {
        Ok(match self {
            Family::Catalan => Some(catalan(n as u64)),
            Family::Fuss { k } => Some(fuss_catalan(n as u64, *k)?),
            Family::Super { m } => Some(super_catalan(*m, n as u64)),
            Family::Custom(values) => values.get(n).cloned(),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Catalan => f.write_str("catalan"),
            Family::Fuss { k } => write!(f, "fuss:{k}"),
            Family::Super { m } => write!(f, "super:{m}"),
            Family::Custom(values) => {
                f.write_str("custom:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `catalan`, `fuss:<k>`, `super:<m>` or `custom:<v0,v1,...>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        match (head, tail) {
            ("catalan", None) => Ok(Family::Catalan),
            ("fuss", Some(k)) => {
                let k = parse_param(k, "fuss")?;
                if k == 0 {
                    return Err(Error::InvalidParameter("fuss-catalan needs k >= 1".into()));
                }
                Ok(Family::Fuss { k })
            }
            ("super", Some(m)) => Ok(Family::Super {
                m: parse_param(m, "super")?,
            }),
            ("super", None) => Ok(Family::Super { m: 0 }),
            ("custom", Some(list)) => parse_custom(list).map(Family::Custom),
            _ => Err(Error::UnknownFamily(s.to_owned())),
        }
    }
}

fn parse_param(raw: &str, family: &str) -> Result<u64> {
    raw.trim()
        .parse()
        .map_err(|_| Error::UnknownFamily(format!("{family}:{raw}")))
}

fn parse_custom(list: &str) -> Result<Vec<BigUint>> {
    if list.trim().is_empty() {
        return Err(Error::MalformedCustom("empty list".into()));
    }
    list.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<BigUint>()
                .map_err(|_| Error::MalformedCustom(format!("`{item}` is not a non-negative integer")))
        })
        .collect()
}

/// Builds `s_0..=s_upto` from `family`.
pub fn sequence_prefix(family: &Family, upto: usize) -> Result<Sequence> {
    let values = match family {
        Family::Custom(values) => {
            if values.len() < upto + 1 {
                return Err(Error::CustomTooShort {
                    upto,
                    got: values.len(),
                });
            }
            values[..=upto].to_vec()
        }
        _ => (0..=upto)
            .map(|n| family.value(n).map(|v| v.expect("generator families are total")))
            .collect::<Result<_>>()?,
    };
    let seq = Sequence::new(family.name(), values)?;
    Ok(match family {
        Family::Fuss { k } => seq.with_param("k", *k),
        Family::Super { m } => seq.with_param("m", *m),
        _ => seq,
    })
}

/// Division that must leave no remainder. A remainder means a broken
/// closed form, which is a bug rather than a recoverable condition.
fn exact_div(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division {num} / {den}");
    q
}

/// `binom(n, k)` by the running product `prod (n-k+i)/i`; every partial
/// product is itself a binomial coefficient, so each division is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc = exact_div(&acc, &BigUint::from(i));
    }
    acc
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    exact_div(&binomial(2 * n, n), &BigUint::from(n + 1))
}

/// `C_{n,k} = binom(n(k+1), n) / (kn + 1)`.
pub fn fuss_catalan(n: u64, k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidParameter("fuss-catalan needs k >= 1".into()));
    }
    Ok(exact_div(
        &binomial(n * (k + 1), n),
        &BigUint::from(k * n + 1),
    ))
}

/// `S(m, n) = (2m)! (2n)! / (m! n! (m+n)!)`, evaluated as
/// `binom(2m, m) binom(2n, n) / binom(m+n, m)`.
pub fn super_catalan(m: u64, n: u64) -> BigUint {
    exact_div(
        &(binomial(2 * m, m) * binomial(2 * n, n)),
        &binomial(m + n, m),
    )
}
