//! Shape predicates and the violation score for the known h*-vector
//! inequalities.
//!
//! The inequalities, for a vector `h` with top index `d` and degree `s`:
//!
//! 1. `h_1 >= h_d`
//! 2. `h_2 + ... + h_i >= h_{d-1} + ... + h_{d-i+1}` for `2 <= i <= d/2`
//! 3. `h_0 + ... + h_i <= h_s + ... + h_{s-i}` for `0 <= i <= s/2`
//! 4. if `s = d`: `h_1 <= h_i` for `1 <= i <= d-1`
//! 5. if `s < d`: `h_0 + h_1 <= h_i + h_{i-1} + ... + h_{i-(d-s)}` for
//!    `1 <= i <= d-1`, terms with negative index omitted

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::BigRat;
use crate::transforms::HStarVector;

/// Rise-then-fall over the whole slot, trailing zeros included.
pub fn is_unimodal(h: &HStarVector) -> bool {
    is_unimodal_entries(h.entries())
}

pub fn is_unimodal_entries(a: &[BigInt]) -> bool {
    let mut i = 0;
    while i + 1 < a.len() && a[i] <= a[i + 1] {
        i += 1;
    }
    a[i..].windows(2).all(|w| w[0] >= w[1])
}

/// Positive through degree `s` and `a_i^2 >= a_{i-1} a_{i+1}` for
/// `1 <= i <= s - 1`. Zeros past `s` are ignored.
pub fn is_log_concave(h: &HStarVector) -> bool {
    let s = h.degree_s();
    let a = &h.entries()[..=s];
    a.iter().all(Signed::is_positive) && a.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

pub fn degree_s(h: &HStarVector) -> usize {
    h.degree_s()
}

/// Interior indices `i` with `a_i < a_{i-1}` and `a_i < a_{i+1}`.
pub fn strict_dips(h: &HStarVector) -> Vec<usize> {
    let a = h.entries();
    (1..a.len().saturating_sub(1))
        .filter(|&i| a[i] < a[i - 1] && a[i] < a[i + 1])
        .collect()
}

/// How to score the `s = d` branch of the fourth component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Phi4Mode {
    /// `max(0, h_1 - h_i)`, the violation of `h_1 <= h_i`.
    #[default]
    Corrected,
    /// `max(0, h_i - h_1)` as sometimes printed; for comparison runs only.
    Literal,
}

/// The four violation components and their normalized total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitnessReport {
    pub phi1: BigInt,
    pub phi2: BigInt,
    pub phi3: BigInt,
    pub phi4: BigInt,
    /// `(phi1 + phi2 + phi3 + phi4) / d`
    pub total: BigRat,
    pub s: usize,
    pub d: usize,
}

impl FitnessReport {
    pub fn is_solution(&self) -> bool {
        self.total.is_zero()
    }

    pub fn components(&self) -> [&BigInt; 4] {
        [&self.phi1, &self.phi2, &self.phi3, &self.phi4]
    }
}

impl fmt::Display for FitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phi = {} (phi1={}, phi2={}, phi3={}, phi4={}; d={}, s={})",
            self.total, self.phi1, self.phi2, self.phi3, self.phi4, self.d, self.s
        )
    }
}

fn positive_part(x: BigInt) -> BigInt {
    if x.is_positive() {
        x
    } else {
        BigInt::zero()
    }
}

pub fn fitness(h: &HStarVector) -> Result<FitnessReport> {
    fitness_with(h, Phi4Mode::Corrected)
}

pub fn fitness_with(h: &HStarVector, mode: Phi4Mode) -> Result<FitnessReport> {
    if h.len() < 2 {
        return Err(Error::TooShort {
            len: h.len(),
            min: 2,
        });
    }
    let a = h.entries();
    let d = h.d();
    let s = h.degree_s();

    // prefix[j] = a_0 + ... + a_{j-1}
    let mut prefix = Vec::with_capacity(a.len() + 1);
    prefix.push(BigInt::zero());
    for x in a {
        let next = prefix.last().unwrap() + x;
        prefix.push(next);
    }
    let range_sum = |lo: usize, hi: usize| -> BigInt {
        if lo > hi {
            BigInt::zero()
        } else {
            &prefix[hi + 1] - &prefix[lo]
        }
    };

    let phi1 = positive_part(&a[d] - &a[1]);

    let phi2 = (2..=d / 2)
        .map(|i| positive_part(range_sum(d - i + 1, d - 1) - range_sum(2, i)))
        .sum();

    let phi3 = (0..=s / 2)
        .map(|i| positive_part(range_sum(0, i) - range_sum(s - i, s)))
        .sum();

    let phi4 = if s == d {
        (1..d)
            .map(|i| match mode {
                Phi4Mode::Corrected => positive_part(&a[1] - &a[i]),
                Phi4Mode::Literal => positive_part(&a[i] - &a[1]),
            })
            .sum()
    } else {
        let gap = d - s;
        let base = &a[0] + &a[1];
        (1..d)
            .map(|i| positive_part(&base - range_sum(i.saturating_sub(gap), i)))
            .sum()
    };

    let sum: BigInt = &phi1 + &phi2 + &phi3 + &phi4;
    let total = BigRat::new(sum, BigInt::from(d));
    Ok(FitnessReport {
        phi1,
        phi2,
        phi3,
        phi4,
        total,
        s,
        d,
    })
}

/// Outcome of one inequality family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    /// 1 through 5.
    pub condition: u8,
    /// Conditions 4 and 5 apply only when `s = d` and `s < d` respectively.
    pub applicable: bool,
    pub passed: bool,
    /// Summed amount by which the violated instances miss.
    pub violation: BigInt,
    /// Indices `i` at which the inequality fails.
    pub failing_indices: Vec<usize>,
}

impl ConditionCheck {
    pub fn describe(&self) -> &'static str {
        match self.condition {
            1 => "h_1 >= h_d",
            2 => "h_2+..+h_i >= h_{d-1}+..+h_{d-i+1}, 2 <= i <= d/2",
            3 => "h_0+..+h_i <= h_s+..+h_{s-i}, 0 <= i <= s/2",
            4 => "s = d: h_1 <= h_i, 1 <= i <= d-1",
            5 => "s < d: h_0+h_1 <= h_i+..+h_{i-(d-s)}, 1 <= i <= d-1",
            _ => "unknown",
        }
    }
}

fn sum_indices(a: &[BigInt], idx: impl Iterator<Item = usize>) -> BigInt {
    idx.map(|j| &a[j]).sum()
}

/// `(i, lhs, rhs)` of one `lhs >= rhs` instance.
type Instance = (usize, BigInt, BigInt);

/// Each inequality family checked instance by instance. Independent of
/// [`fitness`]; all five pass exactly when the fitness total is zero.
pub fn check_conditions(h: &HStarVector) -> Result<Vec<ConditionCheck>> {
    if h.len() < 2 {
        return Err(Error::TooShort {
            len: h.len(),
            min: 2,
        });
    }
    let a = h.entries();
    let d = h.d();
    let s = h.degree_s();

    let mut families: Vec<(u8, bool, Vec<Instance>)> = Vec::new();

    families.push((1, true, vec![(1, a[1].clone(), a[d].clone())]));

    families.push((
        2,
        true,
        (2..=d / 2)
            .map(|i| {
                (
                    i,
                    sum_indices(a, 2..=i),
                    sum_indices(a, (d - i + 1)..=(d - 1)),
                )
            })
            .collect(),
    ));

    families.push((
        3,
        true,
        (0..=s / 2)
            .map(|i| (i, sum_indices(a, (s - i)..=s), sum_indices(a, 0..=i)))
            .collect(),
    ));

    families.push((
        4,
        s == d,
        if s == d {
            (1..d).map(|i| (i, a[i].clone(), a[1].clone())).collect()
        } else {
            Vec::new()
        },
    ));

    families.push((
        5,
        s < d,
        if s < d {
            (1..d)
                .map(|i| {
                    let lo = i as i64 - (d - s) as i64;
                    let window = (lo..=i as i64).filter(|&j| j >= 0).map(|j| j as usize);
                    (i, sum_indices(a, window), &a[0] + &a[1])
                })
                .collect()
        } else {
            Vec::new()
        },
    ));

    Ok(families
        .into_iter()
        .map(|(condition, applicable, instances)| {
            let mut violation = BigInt::zero();
            let mut failing_indices = Vec::new();
            for (i, lhs, rhs) in instances {
                if lhs < rhs {
                    violation += rhs - lhs;
                    failing_indices.push(i);
                }
            }
            ConditionCheck {
                condition,
                applicable,
                passed: failing_indices.is_empty(),
                violation,
                failing_indices,
            }
        })
        .collect())
}

pub fn satisfies_all_conditions(h: &HStarVector) -> Result<bool> {
    Ok(check_conditions(h)?.iter().all(|c| c.passed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hv(v: &[u64]) -> HStarVector {
        HStarVector::from_u64s(v).unwrap()
    }

    fn spike(k: usize, m: u64) -> HStarVector {
        let mut v = vec![1u64; k];
        v.push(m);
        v.extend(std::iter::repeat_n(0, k - 1));
        hv(&v)
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn unimodality_examples() {
        assert!(is_unimodal(&hv(&[1, 1, 1, 1, 1, 6])));
        assert!(!is_unimodal(&hv(&[
            1, 38, 300, 962, 2059, 7442, 7194, 7292, 4320, 854, 30
        ])));
        assert!(is_unimodal(&hv(&[1])));
        assert!(is_unimodal(&hv(&[1, 2, 2, 1, 0, 0])));
        // trailing zeros count: the final 1 comes after a drop to 0
        assert!(!is_unimodal(&hv(&[1, 2, 0, 1])));
    }

    #[test]
    fn log_concavity_examples() {
        assert!(is_log_concave(&hv(&[1, 2, 2, 1])));
        assert!(!is_log_concave(&hv(&[1, 1, 2])));
        assert!(!is_log_concave(&hv(&[1, 0, 1, 0])));
        assert!(is_log_concave(&hv(&[1, 2, 1, 0, 0])));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_s(&hv(&[1, 1, 12, 0, 0])), 2);
        assert_eq!(degree_s(&hv(&[1])), 0);
        assert_eq!(degree_s(&spike(14, 12)), 14);
    }

    #[test]
    fn dips() {
        assert_eq!(
            strict_dips(&hv(&[
                1, 38, 300, 962, 2059, 7442, 7194, 7292, 4320, 854, 30
            ])),
            vec![6]
        );
        assert!(strict_dips(&hv(&[1, 2, 2, 1])).is_empty());
        assert!(strict_dips(&hv(&[5])).is_empty());
    }

    #[test]
    fn fitness_of_starting_vector() {
        let r = fitness(&hv(&[1, 1, 1, 1, 1, 6])).unwrap();
        assert_eq!(
            (
                r.phi1.clone(),
                r.phi2.clone(),
                r.phi3.clone(),
                r.phi4.clone()
            ),
            (int(5), int(0), int(0), int(0))
        );
        assert_eq!(r.total, BigRat::from_integer(int(1)));
        assert_eq!((r.s, r.d), (5, 5));
    }

    #[test]
    fn fitness_zero_examples() {
        assert!(fitness(&spike(14, 12)).unwrap().is_solution());
        assert!(fitness(&hv(&[1, 2, 1])).unwrap().is_solution());
    }

    #[test]
    fn fitness_rejects_length_one() {
        assert!(matches!(
            fitness(&hv(&[1])),
            Err(Error::TooShort { len: 1, min: 2 })
        ));
        assert!(check_conditions(&hv(&[1])).is_err());
    }

    #[test]
    fn literal_phi4_differs_on_increasing_vectors() {
        let h = hv(&[1, 1, 2, 3, 1]);
        let corrected = fitness(&h).unwrap();
        let literal = fitness_with(&h, Phi4Mode::Literal).unwrap();
        assert_eq!(corrected.phi4, int(0));
        assert_eq!(literal.phi4, int(1 + 2));
    }

    #[test]
    fn conditions_examples() {
        let c = check_conditions(&hv(&[1, 1, 1, 1, 1, 6])).unwrap();
        assert!(!c[0].passed);
        assert_eq!(c[0].violation, int(5));
        assert!(c[1..].iter().all(|x| x.passed));

        let mut h6 = vec![1u64; 14];
        h6.push(9);
        h6.extend([0; 13]);
        assert!(satisfies_all_conditions(&hv(&h6)).unwrap());
        assert!(satisfies_all_conditions(&hv(&[1, 2, 1])).unwrap());
    }

    #[test]
    fn conditions_four_and_five_are_exclusive() {
        let full = check_conditions(&hv(&[1, 3, 2, 1])).unwrap();
        assert!(full[3].applicable && !full[4].applicable);
        let short = check_conditions(&hv(&[1, 3, 2, 0])).unwrap();
        assert!(!short[3].applicable && short[4].applicable);
    }

    #[test]
    fn condition_two_empty_below_dimension_four() {
        for v in [&[1u64, 0, 5, 9][..], &[1, 9]] {
            let h = hv(v);
            assert_eq!(fitness(&h).unwrap().phi2, int(0));
            assert!(check_conditions(&h).unwrap()[1].passed);
        }
    }

    fn all_vectors(len: usize, max: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![1u64]];
        for _ in 1..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=max).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn fitness_zero_iff_all_conditions_small_exhaustive() {
        for len in 2..=6 {
            for v in all_vectors(len, 3) {
                let h = hv(&v);
                if !is_unimodal(&h) {
                    continue;
                }
                let f = fitness(&h).unwrap();
                let c = check_conditions(&h).unwrap();
                assert_eq!(f.is_solution(), c.iter().all(|x| x.passed), "{h}");
            }
        }
    }

    #[test]
    fn log_concave_implies_unimodal_small_exhaustive() {
        for len in 1..=6 {
            for v in all_vectors(len, 4) {
                let h = hv(&v);
                if is_log_concave(&h) {
                    let s = h.degree_s();
                    let prefix = HStarVector::from_u64s(&v[..=s]).unwrap();
                    assert!(is_unimodal(&prefix), "{h}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fitness_agrees_with_conditions(v in prop::collection::vec(0u64..6, 1..40)) {
            let mut v = v;
            v.insert(0, 1);
            let h = hv(&v);
            let f = fitness(&h).unwrap();
            let c = check_conditions(&h).unwrap();
            prop_assert_eq!(f.is_solution(), c.iter().all(|x| x.passed));
            // per-family magnitudes agree with the components
            prop_assert_eq!(&c[0].violation, &f.phi1);
            prop_assert_eq!(&c[1].violation, &f.phi2);
            prop_assert_eq!(&c[2].violation, &f.phi3);
            prop_assert_eq!(&(&c[3].violation + &c[4].violation), &f.phi4);
        }

        #[test]
        fn raising_top_entry_raises_phi1_by_one(v in prop::collection::vec(0u64..6, 3..20), extra in 1u64..5) {
            let mut v = v;
            v[0] = 1;
            let last = v.len() - 1;
            v[last] = v[1] + extra;
            let before = fitness(&hv(&v)).unwrap().phi1;
            v[last] += 1;
            let after = fitness(&hv(&v)).unwrap().phi1;
            prop_assert_eq!(after - before, int(1));
        }

        #[test]
        fn degree_bounds(v in prop::collection::vec(0u64..3, 1..20)) {
            let mut v = v;
            v[0] = 1;
            let h = hv(&v);
            prop_assert!(h.degree_s() <= h.d());
            prop_assert_eq!(h.degree_s() == h.d(), *v.last().unwrap() != 0);
        }
    }
}
