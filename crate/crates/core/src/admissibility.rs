//! Root-adjacency counts and admissibility verdicts.
//!
//! A sequence `s` can only generate an action graph family if
//! `s_0 = 1` and the counts
//!
//! ```text
//! z_1 = s_1
//! z_n = s_n - sum_{i=1}^{n-1} z_i * s_{n-i}     (n >= 2)
//! ```
//!
//! are all strictly positive. `z_n` is the number of vertices labeled `n`
//! hanging directly off the root of `G_n`. Verdicts always refer to the
//! finite prefix that was examined.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{catalan, sequence_prefix, Family, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// `z_n <= 0`.
    Nonpositive,
    /// `s_0 != 1`.
    S0NotOne,
    /// `s_2 < s_1^2`, which forces `z_2 < 0`.
    S2Lemma,
}

/// First place where admissibility breaks down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    #[serde(with = "crate::decimal::one")]
    pub value: BigInt,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZResult {
    /// `z[i - 1]` holds `z_i`.
    #[serde(with = "crate::decimal::seq")]
    pub z: Vec<BigInt>,
    pub admissible_upto: usize,
    pub verdict: Verdict,
    pub failure: Option<Failure>,
}

impl ZResult {
    /// `z_i` for `i >= 1`.
    pub fn get(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(1).and_then(|j| self.z.get(j))
    }

    /// The counts `z_1..=z_upto`, provided the sequence is admissible that far.
    pub fn positive_prefix(&self, upto: usize) -> Result<Vec<BigUint>> {
        if let Some(f) = &self.failure {
            if f.reason == FailureReason::S0NotOne || f.index <= upto {
                return Err(Error::Inadmissible {
                    index: f.index,
                    value: f.value.clone(),
                });
            }
        }
        if upto > self.z.len() {
            return Err(Error::InvalidParameter(format!(
                "z is known up to index {}, but {upto} was requested",
                self.z.len()
            )));
        }
        Ok(self.z[..upto]
            .iter()
            .map(|v| v.to_biguint().expect("positive prefix"))
            .collect())
    }
}

/// Solves the root-adjacency recurrence over every index of `s`.
///
/// Rejected sequences still carry the full `z` vector.
pub fn compute_z(s: &Sequence) -> Result<ZResult> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    let values: Vec<BigInt> = s.values().iter().cloned().map(BigInt::from).collect();
    let n_max = values.len() - 1;

    let mut z: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut zn = values[n].clone();
        for i in 1..n {
            zn -= &z[i - 1] * &values[n - i];
        }
        z.push(zn);
    }

    let first_bad = z.iter().position(|v| !v.is_positive());
    let admissible_upto = first_bad.unwrap_or(z.len());

    let failure = if !values[0].is_one() {
        Some(Failure {
            index: 0,
            value: values[0].clone(),
            reason: FailureReason::S0NotOne,
        })
    } else {
        first_bad.map(|pos| {
            let index = pos + 1;
            let reason = if index == 2 && values[2] < &values[1] * &values[1] {
                FailureReason::S2Lemma
            } else {
                FailureReason::Nonpositive
            };
            Failure {
                index,
                value: z[pos].clone(),
                reason,
            }
        })
    };

    Ok(ZResult {
        z,
        admissible_upto,
        verdict: if failure.is_none() {
            Verdict::Admissible
        } else {
            Verdict::Rejected
        },
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Necessary conditions checked directly on the sequence: `s_0 = 1` and,
/// when `s_2` exists, `s_2 >= s_1^2`.
pub fn lemma_prefilter(s: &Sequence) -> Vec<LemmaCheck> {
    let mut checks = Vec::with_capacity(2);
    if let Some(s0) = s.get(0) {
        checks.push(LemmaCheck {
            name: "s0_is_one".into(),
            passed: s0.is_one(),
            detail: format!("s_0 = {s0}"),
        });
    }
    if let (Some(s1), Some(s2)) = (s.get(1), s.get(2)) {
        let sq = s1 * s1;
        checks.push(LemmaCheck {
            name: "s2_at_least_s1_squared".into(),
            passed: *s2 >= sq,
            detail: format!("s_2 = {s2}, s_1^2 = {sq}"),
        });
    }
    checks
}

/// Whether the root-adjacency counts of the Catalan numbers are the
/// shifted Catalan numbers, `z_j = C_{j-1}`, for `1 <= j <= upto`.
pub fn catalan_z_identity(upto: usize) -> bool {
    let Ok(prefix) = sequence_prefix(&Family::Catalan, upto) else {
        return false;
    };
    let Ok(z) = compute_z(&prefix) else {
        return false;
    };
    (1..=upto).all(|j| z.get(j) == Some(&BigInt::from(catalan(j as u64 - 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(values: &[u64]) -> Sequence {
        Sequence::from_u64s("custom", values).unwrap()
    }

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn catalan_prefix() {
        let r = compute_z(&seq(&[1, 1, 2, 5, 14])).unwrap();
        assert_eq!(r.z, ints(&[1, 1, 2, 5]));
        assert_eq!(r.verdict, Verdict::Admissible);
        assert_eq!(r.admissible_upto, 4);
        assert!(r.failure.is_none());
    }

    #[test]
    fn fuss_and_super_prefixes() {
        let r = compute_z(&seq(&[1, 1, 3, 12])).unwrap();
        assert_eq!(r.z, ints(&[1, 2, 7]));
        assert_eq!(r.verdict, Verdict::Admissible);

        let r = compute_z(&seq(&[1, 2, 6, 20])).unwrap();
        assert_eq!(&r.z[..3], &ints(&[2, 2, 4])[..]);
        assert_eq!(r.verdict, Verdict::Admissible);
    }

    #[test]
    fn zero_is_rejected() {
        let r = compute_z(&seq(&[1, 1, 1])).unwrap();
        assert_eq!(r.z, ints(&[1, 0]));
        assert_eq!(r.verdict, Verdict::Rejected);
        assert_eq!(r.admissible_upto, 1);
        let f = r.failure.unwrap();
        assert_eq!((f.index, f.value, f.reason), (2, BigInt::from(0), FailureReason::Nonpositive));
    }

    #[test]
    fn negative_is_rejected() {
        let r = compute_z(&seq(&[1, 2, 3])).unwrap();
        assert_eq!(r.z, ints(&[2, -1]));
        let f = r.failure.unwrap();
        assert_eq!((f.index, f.value, f.reason), (2, BigInt::from(-1), FailureReason::S2Lemma));
    }

    #[test]
    fn s0_must_be_one() {
        let r = compute_z(&seq(&[2, 1, 1])).unwrap();
        assert_eq!(r.verdict, Verdict::Rejected);
        assert_eq!(r.failure.as_ref().unwrap().reason, FailureReason::S0NotOne);
        assert!(r.positive_prefix(0).is_err());
    }

    #[test]
    fn zero_first_term() {
        let r = compute_z(&seq(&[1, 0, 4])).unwrap();
        assert_eq!(r.admissible_upto, 0);
        assert_eq!(r.failure.unwrap().index, 1);
    }

    #[test]
    fn single_term() {
        let r = compute_z(&seq(&[1])).unwrap();
        assert!(r.z.is_empty());
        assert_eq!(r.verdict, Verdict::Admissible);
        assert_eq!(r.admissible_upto, 0);
    }

    #[test]
    fn lemmas() {
        assert!(lemma_prefilter(&seq(&[1, 1, 2])).iter().all(|c| c.passed));

        let checks = lemma_prefilter(&seq(&[2, 1, 1]));
        assert!(!checks[0].passed);

        let checks = lemma_prefilter(&seq(&[1, 3, 8]));
        assert!(checks[0].passed);
        assert!(!checks[1].passed);
        let r = compute_z(&seq(&[1, 3, 8])).unwrap();
        assert_eq!(r.z[1], BigInt::from(-1));
        assert_eq!(r.verdict, Verdict::Rejected);

        assert_eq!(lemma_prefilter(&seq(&[1, 5])).len(), 1);
    }

    #[test]
    fn catalan_identity() {
        assert!(catalan_z_identity(1));
        assert!(catalan_z_identity(4));
        assert!(catalan_z_identity(15));
    }

    #[test]
    fn positive_prefix_respects_failure_index() {
        let r = compute_z(&seq(&[1, 1, 1, 9])).unwrap();
        assert_eq!(r.positive_prefix(1).unwrap(), vec![BigUint::from(1u8)]);
        assert!(matches!(r.positive_prefix(2), Err(Error::Inadmissible { index: 2, .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn lemma_failure_implies_rejection(values in prop::collection::vec(0u64..12, 1..6)) {
            let s = seq(&values);
            let lemma_failed = lemma_prefilter(&s).iter().any(|c| !c.passed);
            let r = compute_z(&s).unwrap();
            if lemma_failed {
                prop_assert_eq!(r.verdict, Verdict::Rejected);
            }
        }

        #[test]
        fn recurrence_reconstructs_sequence(z in prop::collection::vec(1u64..50, 1..10)) {
            // build s from z, then recover z and s independently
            let mut s = vec![BigInt::from(1)];
            for n in 1..=z.len() {
                let mut sn = BigInt::from(z[n - 1]);
                for i in 1..n {
                    sn += BigInt::from(z[i - 1]) * &s[n - i];
                }
                s.push(sn);
            }
            let seq = Sequence::new(
                "custom",
                s.iter().map(|v| v.to_biguint().unwrap()).collect(),
            ).unwrap();
            let r = compute_z(&seq).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Admissible);
            prop_assert_eq!(&r.z, &z.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
            for n in 2..s.len() {
                let rebuilt = &r.z[n - 1]
                    + (1..n).map(|i| &r.z[i - 1] * &s[n - i]).sum::<BigInt>();
                prop_assert_eq!(&rebuilt, &s[n]);
            }
        }

        #[test]
        fn verdict_ignores_values_after_failure(
            values in prop::collection::vec(0u64..6, 3..7),
            tail in prop::collection::vec(0u64..1000, 1..4),
        ) {
            let r = compute_z(&seq(&values)).unwrap();
            if let Some(f) = r.failure.clone() {
                let mut extended = values[..=f.index].to_vec();
                extended.extend(&tail);
                let r2 = compute_z(&seq(&extended)).unwrap();
                prop_assert_eq!(r2.verdict, Verdict::Rejected);
                prop_assert_eq!(r2.failure, Some(f));
            }
        }
    }
}
