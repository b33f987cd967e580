//! Conversions between Ehrhart coefficient vectors and h*-vectors, and the
//! product operator that gives the h*-vector of a Cartesian product.
//!
//! Vectors have a fixed length `d + 1` where `d` is the dimension of the
//! (would-be) polytope. Trailing zeros are significant.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{
    binomial, eulerian_coefficients, factorial, int_poly_mul, scaled_binomial_basis_table, BigRat,
    RationalPolynomial,
};

/// A finite vector of nonnegative integers `(h_0, ..., h_d)`, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HStarVector {
    entries: Vec<BigInt>,
}

impl HStarVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, e)| e.is_negative()) {
            return Err(Error::NegativeEntry {
                index,
                value: value.to_string(),
            });
        }
        if entries.iter().all(Zero::is_zero) {
            return Err(Error::AllZero);
        }
        Ok(Self { entries })
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_entries_unchecked(entries: Vec<BigInt>) -> Self {
        debug_assert!(!entries.is_empty());
        debug_assert!(entries.iter().all(|e| !e.is_negative()));
        debug_assert!(entries.iter().any(|e| !e.is_zero()));
        Self { entries }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Top index `d = len - 1`.
    pub fn d(&self) -> usize {
        self.entries.len() - 1
    }

    /// Index of the last nonzero entry.
    pub fn degree_s(&self) -> usize {
        self.entries
            .iter()
            .rposition(|e| !e.is_zero())
            .expect("h*-vectors are never all zero")
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.entries[i]
    }

    pub fn max_entry(&self) -> &BigInt {
        self.entries.iter().max().expect("nonempty")
    }

    /// Entries as `u64`, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| u64::try_from(e).ok()).collect()
    }
}

impl fmt::Display for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for HStarVector {
    type Err = Error;

    /// Comma-separated nonnegative integers, e.g. `1,1,1,1,1,6`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if tok.starts_with('-') {
                    return Err(Error::parse(tok, "entries must be nonnegative"));
                }
                tok.parse::<BigInt>()
                    .map_err(|_| Error::parse(tok, "not a nonnegative integer"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl Serialize for HStarVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            let n =
                serde_json::Number::from_str(&e.to_string()).map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for HStarVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<serde_json::Number>::deserialize(deserializer)?;
        let entries = raw
            .iter()
            .map(|n| n.to_string().parse::<BigInt>().map_err(de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        HStarVector::new(entries).map_err(de::Error::custom)
    }
}

/// Ehrhart polynomial coefficients `(c_0, ..., c_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EhrhartVector {
    entries: Vec<BigRat>,
}

impl EhrhartVector {
    pub fn new(entries: Vec<BigRat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self { entries })
    }

    pub fn from_integers<I, T>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(
            entries
                .into_iter()
                .map(|e| BigRat::from_integer(e.into()))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[BigRat] {
        &self.entries
    }

    pub fn d(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn to_polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::from_coefficients(self.entries.clone())
    }

    pub fn from_polynomial(p: RationalPolynomial) -> Self {
        Self {
            entries: p.into_coefficients(),
        }
    }

    /// Values of the polynomial at `t = 0, 1, ..., d`.
    pub fn values(&self) -> Vec<BigRat> {
        let p = self.to_polynomial();
        (0..=self.d())
            .map(|t| p.evaluate(&BigInt::from(t)))
            .collect()
    }
}

type EulerianBasis = Arc<Vec<Vec<BigInt>>>;

/// Row `i` holds the coefficients of `A_i(x) (1 - x)^(d - i)`, each of
/// length `d + 1`. Cached per `d`.
fn eulerian_basis_table(d: usize) -> EulerianBasis {
    static CACHE: OnceLock<Mutex<HashMap<usize, EulerianBasis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("eulerian basis cache poisoned").get(&d) {
        return Arc::clone(t);
    }
    let rows: Vec<Vec<BigInt>> = (0..=d)
        .map(|i| {
            let mut row = eulerian_coefficients(i).as_ref().clone();
            for _ in 0..(d - i) {
                row = int_poly_mul(&row, &[BigInt::one(), -BigInt::one()]);
            }
            row.resize(d + 1, BigInt::zero());
            row
        })
        .collect();
    let table = Arc::new(rows);
    cache
        .lock()
        .expect("eulerian basis cache poisoned")
        .entry(d)
        .or_insert(table)
        .clone()
}

/// Ehrhart coefficients to h*-coefficients: `sum_i c_i A_i(x) (1 - x)^(d - i)`.
///
/// The result is rational in general; it is integral whenever the input
/// polynomial is integer-valued.
pub fn w_transform(c: &EhrhartVector) -> Vec<BigRat> {
    let d = c.d();
    let table = eulerian_basis_table(d);
    let mut out = vec![BigRat::zero(); d + 1];
    for (ci, row) in c.entries.iter().zip(table.iter()) {
        if ci.is_zero() {
            continue;
        }
        for (o, w) in out.iter_mut().zip(row) {
            if !w.is_zero() {
                *o += ci * BigRat::from_integer(w.clone());
            }
        }
    }
    out
}

/// Same map as [`w_transform`], computed from the values `ehr(0..=d)` by
/// finite differences instead of the Eulerian basis.
pub fn w_transform_by_values(c: &EhrhartVector) -> Vec<BigRat> {
    hstar_from_values(&c.values())
}

/// h*-coefficients to Ehrhart coefficients: `sum_i h_i C(x + d - i, d)`.
pub fn e_transform(h: &HStarVector) -> EhrhartVector {
    let d = h.d();
    let table = scaled_binomial_basis_table(d);
    let scaled = combine_rows(h.entries(), &table, d + 1);
    let denom = factorial(d);
    EhrhartVector {
        entries: scaled
            .into_iter()
            .map(|c| BigRat::new(c, denom.clone()))
            .collect(),
    }
}

/// `h*_j = sum_{t <= j} (-1)^(j - t) C(d + 1, j - t) ehr(t)` where `values`
/// holds `ehr(0), ..., ehr(d)`.
pub fn hstar_from_values(values: &[BigRat]) -> Vec<BigRat> {
    let n = values.len();
    let signed: Vec<BigRat> = (0..n)
        .map(|k| {
            let b = BigRat::from_integer(binomial(n, k));
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    (0..n)
        .map(|j| {
            (0..=j)
                .map(|t| &signed[j - t] * &values[t])
                .fold(BigRat::zero(), |acc, x| acc + x)
        })
        .collect()
}

fn combine_rows(weights: &[BigInt], rows: &[Vec<BigInt>], width: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); width];
    for (w, row) in weights.iter().zip(rows) {
        if w.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !r.is_zero() {
                *o += w * r;
            }
        }
    }
    out
}

/// h*-vector of a Cartesian product, `W(E(h) E(g))`. Output length is
/// `len(h) + len(g) - 1`.
///
/// Evaluates both Ehrhart polynomials at `t = 0..=d1 + d2`, multiplies the
/// counts and takes finite differences, all in integers.
///
/// # Panics
///
/// If the result has a negative entry. That can only happen through an
/// arithmetic bug.
pub fn pi_product(h: &HStarVector, g: &HStarVector) -> HStarVector {
    let d = h.d() + g.d();
    let vh = integer_values(h, d + 1);
    let vg = integer_values(g, d + 1);
    let values: Vec<BigInt> = vh.iter().zip(&vg).map(|(a, b)| a * b).collect();
    let signed: Vec<BigInt> = (0..=d)
        .map(|k| {
            let b = binomial(d + 1, k);
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    let entries: Vec<BigInt> = (0..=d)
        .map(|j| {
            let mut acc = BigInt::zero();
            for t in 0..=j {
                acc += &signed[j - t] * &values[t];
            }
            assert!(
                !acc.is_negative(),
                "product h*-coefficient {j} is negative: {acc}"
            );
            acc
        })
        .collect();
    HStarVector::from_entries_unchecked(entries)
}

/// `ehr(t) = sum_i h_i C(t + d - i, d)` for `t = 0..n`.
fn integer_values(h: &HStarVector, n: usize) -> Vec<BigInt> {
    let d = h.d();
    // column[x] = C(x + d, d)
    let mut column = Vec::with_capacity(n);
    let mut c = BigInt::one();
    for x in 0..n {
        column.push(c.clone());
        c = c * (x + d + 1) / (x + 1);
    }
    (0..n)
        .map(|t| {
            let mut acc = BigInt::zero();
            for (i, hi) in h.entries().iter().enumerate().take(t + 1) {
                if !hi.is_zero() {
                    acc += hi * &column[t - i];
                }
            }
            acc
        })
        .collect()
}

/// Same map as [`pi_product`] through the Ehrhart polynomials themselves:
/// the Eulerian transform of `E(h) E(g)`.
///
/// Runs in scaled integer arithmetic: `d1! * E(h)` and `d2! * E(g)` are
/// integral, so the Eulerian transform of their product is `d1! d2!` times
/// the answer.
///
/// # Panics
///
/// If the result is not a nonnegative integer vector. That can only happen
/// through an arithmetic bug.
pub fn pi_product_scaled(h: &HStarVector, g: &HStarVector) -> HStarVector {
    let (d1, d2) = (h.d(), g.d());
    let eh = combine_rows(h.entries(), &scaled_binomial_basis_table(d1), d1 + 1);
    let eg = combine_rows(g.entries(), &scaled_binomial_basis_table(d2), d2 + 1);
    let product = int_poly_mul(&eh, &eg);
    let d = d1 + d2;
    let raw = combine_rows(&product, &eulerian_basis_table(d), d + 1);
    let scale = factorial(d1) * factorial(d2);
    let entries: Vec<BigInt> = raw
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let (q, r) = v.div_rem(&scale);
            assert!(
                r.is_zero(),
                "product h*-coefficient {k} is not an integer: {v}/{scale}"
            );
            assert!(
                !q.is_negative(),
                "product h*-coefficient {k} is negative: {q}"
            );
            q
        })
        .collect();
    HStarVector::from_entries_unchecked(entries)
}
