//! Exact polynomial arithmetic over the rationals.
//!
//! Everything here is arbitrary precision. A [`RationalPolynomial`] carries a
//! fixed number of coefficient slots; trailing zero slots are part of the
//! value and are only dropped by an explicit call to
//! [`RationalPolynomial::trimmed`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type BigRat = BigRational;

/// Polynomial with exact rational coefficients; index `i` holds the
/// coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRat>,
}

impl RationalPolynomial {
    /// Builds a polynomial from its coefficients. An empty list becomes the
    /// zero polynomial with a single slot.
    pub fn from_coefficients(coeffs: Vec<BigRat>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(1);
        }
        Self { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coefficients(
            coeffs
                .into_iter()
                .map(|c| BigRat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(slots: usize) -> Self {
        Self {
            coeffs: vec![BigRat::zero(); slots.max(1)],
        }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigRat::one()],
        }
    }

    /// Number of coefficient slots (degree bound + 1).
    pub fn slot_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<BigRat> {
        self.coeffs
    }

    /// Coefficient of `x^i`; zero past the last slot.
    pub fn coefficient(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Actual degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Drops trailing zero slots, keeping at least one slot.
    pub fn trimmed(&self) -> Self {
        let len = self.degree().map_or(1, |d| d + 1);
        Self {
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Extends with zero slots up to `slots`. Never truncates.
    pub fn padded(&self, slots: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < slots {
            coeffs.resize(slots, BigRat::zero());
        }
        Self { coeffs }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, factor: &BigRat) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, t: &BigInt) -> BigRat {
        let t = BigRat::from_integer(t.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * &t + c)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        poly_mul(self, rhs)
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    /// Slot size of the sum is the larger of the two slot sizes.
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.slot_size().max(rhs.slot_size());
        RationalPolynomial {
            coeffs: (0..n)
                .map(|i| self.coefficient(i) + rhs.coefficient(i))
                .collect(),
        }
    }
}

/// Exact product; slot size is `slot(p) + slot(q) - 1`.
pub fn poly_mul(p: &RationalPolynomial, q: &RationalPolynomial) -> RationalPolynomial {
    let mut out = vec![BigRat::zero(); p.slot_size() + q.slot_size() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    RationalPolynomial { coeffs: out }
}

pub fn evaluate_at_integer(p: &RationalPolynomial, t: &BigInt) -> BigRat {
    p.evaluate(t)
}

/// Integer polynomial product, used by the scaled integer paths.
pub(crate) fn int_poly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `C(n, k)` for nonnegative `n`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn eulerian_table() -> &'static Mutex<Vec<Arc<Vec<BigInt>>>> {
    static TABLE: OnceLock<Mutex<Vec<Arc<Vec<BigInt>>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Arc::new(vec![BigInt::one()])]))
}

/// Integer coefficients of `A_i(x)`, length `i + 1`, defined by
/// `sum_{t >= 0} t^i x^t = A_i(x) / (1 - x)^(i + 1)`. So `A_0 = 1`, `A_1 = x`.
pub fn eulerian_coefficients(i: usize) -> Arc<Vec<BigInt>> {
    let mut table = eulerian_table().lock().expect("eulerian table poisoned");
    while table.len() <= i {
        let n = table.len();
        let prev = Arc::clone(&table[n - 1]);
        // a(n, k) = k a(n-1, k) + (n - k + 1) a(n-1, k-1)
        let next: Vec<BigInt> = (0..=n)
            .map(|k| {
                let mut c = BigInt::zero();
                if k < prev.len() {
                    c += &prev[k] * BigInt::from(k);
                }
                if k >= 1 {
                    c += &prev[k - 1] * BigInt::from(n - k + 1);
                }
                c
            })
            .collect();
        table.push(Arc::new(next));
    }
    Arc::clone(&table[i])
}

/// The `i`-th Eulerian polynomial as a rational polynomial with `i + 1` slots.
pub fn eulerian_polynomial(i: usize) -> RationalPolynomial {
    RationalPolynomial::from_integers(eulerian_coefficients(i).iter().cloned())
}

/// `d! * C(x + d - i, d)` as integer coefficients, i.e. the product
/// `(x + d - i)(x + d - i - 1)...(x + 1 - i)`.
pub(crate) fn scaled_binomial_basis(d: usize, i: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for j in 0..d {
        // factor (x + (d - i - j))
        let shift = BigInt::from(d as i64 - i as i64 - j as i64);
        p = int_poly_mul(&p, &[shift, BigInt::one()]);
    }
    p
}

type BasisTable = Arc<Vec<Vec<BigInt>>>;

/// All `d! * C(x + d - i, d)` for `0 <= i <= d`, cached per `d`.
pub(crate) fn scaled_binomial_basis_table(d: usize) -> BasisTable {
    static CACHE: OnceLock<Mutex<HashMap<usize, BasisTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("basis cache poisoned").get(&d) {
        return Arc::clone(t);
    }
    let table: BasisTable = Arc::new((0..=d).map(|i| scaled_binomial_basis(d, i)).collect());
    cache
        .lock()
        .expect("basis cache poisoned")
        .entry(d)
        .or_insert(table)
        .clone()
}

/// The polynomial `C(x + d - i, d)` of degree `d`.
pub fn binomial_basis_polynomial(d: usize, i: usize) -> Result<RationalPolynomial> {
    if i > d {
        return Err(Error::IndexOutOfRange { index: i, bound: d });
    }
    let denom = factorial(d);
    let coeffs = scaled_binomial_basis(d, i)
        .into_iter()
        .map(|c| BigRat::new(c, denom.clone()))
        .collect();
    Ok(RationalPolynomial::from_coefficients(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(v.iter().copied())
    }

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn eulerian_small_cases() {
        assert_eq!(eulerian_polynomial(0), ints(&[1]));
        assert_eq!(eulerian_polynomial(1), ints(&[0, 1]));
        assert_eq!(eulerian_polynomial(3), ints(&[0, 1, 4, 1]));
    }

    #[test]
    fn eulerian_three_matches_series_expansion() {
        // (1 - x)^4 * sum_{t <= 6} t^3 x^t, truncated at degree 3
        let series: Vec<i64> = (0..=6).map(|t: i64| t.pow(3)).collect();
        let one_minus_x4 = [1i64, -4, 6, -4, 1];
        let expanded: Vec<i64> = (0..=3)
            .map(|k| {
                (0..=k)
                    .filter(|j| *j < one_minus_x4.len())
                    .map(|j| one_minus_x4[j] * series[k - j])
                    .sum()
            })
            .collect();
        assert_eq!(expanded, vec![0, 1, 4, 1]);
    }

    #[test]
    fn eulerian_coefficients_sum_to_factorial() {
        for i in 1..=12 {
            let a = eulerian_coefficients(i);
            assert_eq!(a.len(), i + 1);
            assert!(a[0].is_zero());
            assert!(a[1..].iter().all(|c| c.is_positive()), "A_{i}");
            let sum: BigInt = a.iter().sum();
            assert_eq!(sum, factorial(i));
        }
    }

    #[test]
    fn eulerian_matches_finite_differences() {
        // coefficient of x^t in A_i equals sum_j (-1)^j C(i+1, j) (t - j)^i,
        // restricted to t - j >= 0
        for i in 0..=10usize {
            let a = eulerian_coefficients(i);
            for t in 0..=i {
                let mut acc = BigInt::zero();
                for j in 0..=t.min(i + 1) {
                    let term = binomial(i + 1, j) * BigInt::from(t - j).pow(i as u32);
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                assert_eq!(acc, a[t], "A_{i} coefficient {t}");
            }
        }
    }

    #[test]
    fn eulerian_large_degree_exceeds_fixed_width() {
        let a = eulerian_coefficients(54);
        let max = a.iter().max().unwrap();
        assert!(*max > BigInt::from(10u8).pow(70));
    }

    #[test]
    fn binomial_basis_examples() {
        assert_eq!(binomial_basis_polynomial(1, 0).unwrap(), ints(&[1, 1]));
        assert_eq!(binomial_basis_polynomial(1, 1).unwrap(), ints(&[0, 1]));
        assert_eq!(binomial_basis_polynomial(0, 0).unwrap(), ints(&[1]));
        let c22 = binomial_basis_polynomial(2, 0).unwrap();
        assert_eq!(c22.coefficients(), &[rat(1, 1), rat(3, 2), rat(1, 2)]);
    }

    #[test]
    fn binomial_basis_rejects_out_of_range() {
        assert!(matches!(
            binomial_basis_polynomial(2, 3),
            Err(Error::IndexOutOfRange { index: 3, bound: 2 })
        ));
    }

    #[test]
    fn binomial_basis_is_integer_valued() {
        for d in 0..=30usize {
            for i in 0..=d {
                let p = binomial_basis_polynomial(d, i).unwrap();
                for t in -(d as i64)..=(2 * d as i64) {
                    let v = p.evaluate(&BigInt::from(t));
                    assert!(v.is_integer(), "C(x+{d}-{i},{d}) at {t} = {v}");
                }
            }
        }
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&ints(&[1, 1]), &ints(&[1])), ints(&[1, 1]));
        assert_eq!(poly_mul(&ints(&[1, 1]), &ints(&[1, 1])), ints(&[1, 2, 1]));
        let sq = poly_mul(&ints(&[1, 1]), &ints(&[1, 1]));
        assert_eq!(evaluate_at_integer(&sq, &BigInt::from(2)), rat(9, 1));
    }

    #[test]
    fn mul_slot_size_keeps_trailing_zeros() {
        let p = poly_mul(&ints(&[1, 0, 0]), &ints(&[1, 0]));
        assert_eq!(p.slot_size(), 4);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.trimmed().slot_size(), 1);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ints(&[1, 1]).evaluate(&BigInt::from(3)), rat(4, 1));
        assert_eq!(ints(&[1, 2, 1]).evaluate(&BigInt::from(0)), rat(1, 1));
        let seg = binomial_basis_polynomial(1, 0).unwrap();
        let square = &seg * &seg;
        assert_eq!(square.evaluate(&BigInt::from(1)), rat(4, 1));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(ints(&[0, 1, 4, 1]).to_string(), "x + 4*x^2 + x^3");
        assert_eq!(ints(&[1, -2]).to_string(), "1 - 2*x");
        assert_eq!(RationalPolynomial::zero(3).to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = RationalPolynomial> {
        prop::collection::vec((-20i64..20, 1i64..6), 1..7).prop_map(|cs| {
            RationalPolynomial::from_coefficients(cs.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn mul_commutes(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
        }

        #[test]
        fn mul_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn evaluation_is_multiplicative(p in arb_poly(), q in arb_poly(), t in -10i64..10) {
            let t = BigInt::from(t);
            prop_assert_eq!((&p * &q).evaluate(&t), p.evaluate(&t) * q.evaluate(&t));
        }

        #[test]
        fn evaluation_is_additive(p in arb_poly(), q in arb_poly(), t in -10i64..10) {
            let t = BigInt::from(t);
            prop_assert_eq!((&p + &q).evaluate(&t), p.evaluate(&t) + q.evaluate(&t));
        }
    }
}
