//! Closed-form h*-vectors of generalized Reeve simplices `R_{q,k}` and
//! their one-vertex extensions `P_{q,r,k}`, a brute-force lattice point
//! counter to check them, and the product verifier.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{check_conditions, fitness, is_unimodal, strict_dips};
use crate::error::{Error, Result};
use crate::exactpoly::BigRat;
use crate::transforms::{hstar_from_values, pi_product, HStarVector};

/// Default dimension cap for [`count_hstar_oracle`].
pub const ORACLE_MAX_DIM: usize = 5;

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 2, got {k}")));
    }
    Ok(())
}

/// `(1, 0^(k-1), q, 0^(k-1))`.
pub fn reeve_hstar(q: u64, k: usize) -> Result<HStarVector> {
    pqrk_hstar(q, 0, k)
}

/// `(1, r^(k-1), r + q, 0^(k-1))`.
pub fn pqrk_hstar(q: u64, r: u64, k: usize) -> Result<HStarVector> {
    check_k(k)?;
    let mut v = vec![1u64];
    v.extend(std::iter::repeat_n(r, k - 1));
    v.push(r + q);
    v.extend(std::iter::repeat_n(0, k - 1));
    HStarVector::from_u64s(&v)
}

/// Parameters `(q, r, k)` of `P_{q,r,k}`; `r = 0` is the Reeve simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PqrkParams {
    pub q: u64,
    pub r: u64,
    pub k: usize,
}

impl PqrkParams {
    pub fn new(q: u64, r: u64, k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self { q, r, k })
    }

    pub fn hstar(&self) -> HStarVector {
        pqrk_hstar(self.q, self.r, self.k).expect("k validated at construction")
    }

    pub fn dimension(&self) -> usize {
        2 * self.k - 1
    }
}

impl fmt::Display for PqrkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.q, self.r, self.k)
    }
}

impl std::str::FromStr for PqrkParams {
    type Err = Error;

    /// `q,r,k`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse(s, "expected q,r,k"));
        }
        let q = parts[0]
            .parse()
            .map_err(|_| Error::parse(parts[0], "q must be a nonnegative integer"))?;
        let r = parts[1]
            .parse()
            .map_err(|_| Error::parse(parts[1], "r must be a nonnegative integer"))?;
        let k = parts[2]
            .parse()
            .map_err(|_| Error::parse(parts[2], "k must be a positive integer"))?;
        Self::new(q, r, k)
    }
}

/// A lattice polytope given as the convex hull of integer points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexSpec {
    pub dimension: usize,
    pub vertices: Vec<Vec<i64>>,
}

/// Vertices `0, e_1, ..., e_(d-1), u` with `u = (1^(k-1), q^(k-1), q+1)`,
/// plus `v = (0^(k-1), (-r)^k)` when `r` is given. Here `d = 2k - 1`.
pub fn build_simplex(q: u64, r: Option<u64>, k: usize) -> Result<SimplexSpec> {
    check_k(k)?;
    let d = 2 * k - 1;
    let q = i64::try_from(q).map_err(|_| Error::InvalidParameter("q too large".into()))?;
    let mut vertices = vec![vec![0i64; d]];
    for i in 0..d - 1 {
        let mut e = vec![0i64; d];
        e[i] = 1;
        vertices.push(e);
    }
    let mut u = vec![1i64; k - 1];
    u.extend(std::iter::repeat_n(q, k - 1));
    u.push(q + 1);
    vertices.push(u);
    if let Some(r) = r {
        let r = i64::try_from(r).map_err(|_| Error::InvalidParameter("r too large".into()))?;
        let mut v = vec![0i64; k - 1];
        v.extend(std::iter::repeat_n(-r, k));
        vertices.push(v);
    }
    Ok(SimplexSpec {
        dimension: d,
        vertices,
    })
}

/// A full-dimensional simplex of the configuration, prepared for exact
/// membership tests of `p` in `t * S`.
struct Cell {
    base: Vec<i128>,
    /// `sign(det) * adj(M)` where the columns of `M` are the edge vectors.
    adj: Vec<Vec<i128>>,
    abs_det: i128,
}

impl Cell {
    /// `p in t*S` iff `adj (p - t*base)` is componentwise nonnegative with
    /// sum at most `t |det|`.
    fn contains(&self, p: &[i128], t: i128, scratch: &mut Vec<i128>) -> bool {
        scratch.clear();
        scratch.extend(p.iter().zip(&self.base).map(|(x, b)| x - t * b));
        let mut total = 0i128;
        for row in &self.adj {
            let lambda: i128 = row.iter().zip(scratch.iter()).map(|(a, y)| a * y).sum();
            if lambda < 0 {
                return false;
            }
            total += lambda;
        }
        total <= t * self.abs_det
    }
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if pivot != c {
            a.swap(pivot, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[n - 1][n - 1]
}

fn minor(m: &[Vec<i128>], row: usize, col: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| *x)
                .collect()
        })
        .collect()
}

fn cell(points: &[&Vec<i64>]) -> Option<Cell> {
    let base: Vec<i128> = points[0].iter().map(|&x| x as i128).collect();
    let n = base.len();
    // m[i][j] = coordinate i of edge j
    let m: Vec<Vec<i128>> = (0..n)
        .map(|i| points[1..].iter().map(|p| p[i] as i128 - base[i]).collect())
        .collect();
    let det = determinant(&m);
    if det == 0 {
        return None;
    }
    let sign = det.signum();
    let adj = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let c = determinant(&minor(&m, i, j));
                    let c = if (i + j) % 2 == 0 { c } else { -c };
                    sign * c
                })
                .collect()
        })
        .collect();
    Some(Cell {
        base,
        adj,
        abs_det: det.abs(),
    })
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Counts `|tP ∩ Z^d|` for `t = 0..=d` by enumerating the bounding box and
/// converts the counts into an h*-vector. A point lies in the convex hull
/// exactly when it lies in one of the full-dimensional simplices spanned
/// by `d + 1` of the given points.
pub fn count_hstar_oracle(spec: &SimplexSpec) -> Result<HStarVector> {
    count_hstar_oracle_with(spec, ORACLE_MAX_DIM)
}

pub fn count_hstar_oracle_with(spec: &SimplexSpec, max_dim: usize) -> Result<HStarVector> {
    let d = spec.dimension;
    if d > max_dim {
        return Err(Error::OracleDimension {
            dim: d,
            max: max_dim,
        });
    }
    if d == 0 || spec.vertices.iter().any(|v| v.len() != d) {
        return Err(Error::Degenerate);
    }
    let cells: Vec<Cell> = subsets(spec.vertices.len(), d + 1)
        .into_iter()
        .filter_map(|s| cell(&s.iter().map(|&i| &spec.vertices[i]).collect::<Vec<_>>()))
        .collect();
    if cells.is_empty() {
        return Err(Error::Degenerate);
    }
    let lo: Vec<i64> = (0..d)
        .map(|i| spec.vertices.iter().map(|v| v[i]).min().expect("vertices"))
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|i| spec.vertices.iter().map(|v| v[i]).max().expect("vertices"))
        .collect();

    let counts: Vec<BigRat> = (0..=d as i64)
        .map(|t| {
            let n = count_dilate(&cells, &lo, &hi, t);
            BigRat::from_integer(BigInt::from(n))
        })
        .collect();
    let h = hstar_from_values(&counts);
    let entries = h
        .into_iter()
        .map(|x| {
            assert!(x.is_integer(), "lattice point counts give integral h*");
            x.to_integer()
        })
        .collect();
    HStarVector::new(entries)
}

fn count_dilate(cells: &[Cell], lo: &[i64], hi: &[i64], t: i64) -> u64 {
    let d = lo.len();
    let first: Vec<i64> = (t * lo[0]..=t * hi[0]).collect();
    first
        .par_iter()
        .map(|&x0| {
            let mut p = vec![0i128; d];
            p[0] = x0 as i128;
            let mut scratch = Vec::with_capacity(d);
            let mut n = 0u64;
            count_rest(cells, lo, hi, t, 1, &mut p, &mut scratch, &mut n);
            n
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn count_rest(
    cells: &[Cell],
    lo: &[i64],
    hi: &[i64],
    t: i64,
    i: usize,
    p: &mut Vec<i128>,
    scratch: &mut Vec<i128>,
    n: &mut u64,
) {
    if i == p.len() {
        if cells.iter().any(|c| c.contains(p, t as i128, scratch)) {
            *n += 1;
        }
        return;
    }
    for x in t * lo[i]..=t * hi[i] {
        p[i] = x as i128;
        count_rest(cells, lo, hi, t, i + 1, p, scratch, n);
    }
}

/// One factor of a product, with its checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorReport {
    pub params: PqrkParams,
    pub hstar: HStarVector,
    pub unimodal: bool,
    /// Exact fitness as `n/d` (or `n`).
    pub fitness: String,
    pub conditions_pass: bool,
}

impl FactorReport {
    fn new(params: PqrkParams) -> Result<Self> {
        let hstar = params.hstar();
        let f = fitness(&hstar)?;
        let conditions_pass = check_conditions(&hstar)?.iter().all(|c| c.passed);
        Ok(Self {
            params,
            unimodal: is_unimodal(&hstar),
            fitness: f.total.to_string(),
            conditions_pass,
            hstar,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub a: FactorReport,
    pub b: FactorReport,
    pub product: HStarVector,
    pub product_unimodal: bool,
    /// Indices `i` with `h_i < h_(i-1)` and `h_i < h_(i+1)`.
    pub dips: Vec<usize>,
    pub dimension: usize,
}

impl CounterexampleReport {
    /// Both factors unimodal and the product not.
    pub fn is_counterexample(&self) -> bool {
        self.a.unimodal && self.b.unimodal && !self.product_unimodal
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, factor) in [("A", &self.a), ("B", &self.b)] {
            writeln!(
                f,
                "{name} = P({})  dim {}",
                factor.params,
                factor.params.dimension()
            )?;
            writeln!(f, "  h* = ({})", factor.hstar)?;
            writeln!(
                f,
                "  unimodal: {}  fitness: {}  conditions: {}",
                factor.unimodal,
                factor.fitness,
                if factor.conditions_pass {
                    "pass"
                } else {
                    "fail"
                }
            )?;
        }
        writeln!(f, "A x B  dim {}", self.dimension)?;
        let entries: Vec<String> = self
            .product
            .entries()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if self.dips.contains(&i) {
                    format!("[{x}]")
                } else {
                    x.to_string()
                }
            })
            .collect();
        writeln!(f, "  h* = ({})", entries.join(", "))?;
        writeln!(
            f,
            "  unimodal: {}  dips: {:?}",
            self.product_unimodal, self.dips
        )?;
        write!(
            f,
            "{}",
            if self.is_counterexample() {
                "counterexample: unimodal factors, non-unimodal product"
            } else {
                "not a counterexample"
            }
        )
    }
}

/// h*-vectors of `P_a`, `P_b` and `P_a x P_b`, with unimodality verdicts and
/// the strict dips of the product.
pub fn verify_counterexample(a: PqrkParams, b: PqrkParams) -> Result<CounterexampleReport> {
    let fa = FactorReport::new(a)?;
    let fb = FactorReport::new(b)?;
    let product = pi_product(&fa.hstar, &fb.hstar);
    Ok(CounterexampleReport {
        product_unimodal: is_unimodal(&product),
        dips: strict_dips(&product),
        dimension: a.dimension() + b.dimension(),
        product,
        a: fa,
        b: fb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(v: &[u64]) -> HStarVector {
        HStarVector::from_u64s(v).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(reeve_hstar(1, 2).unwrap(), hv(&[1, 0, 1, 0]));
        assert_eq!(reeve_hstar(0, 3).unwrap(), hv(&[1, 0, 0, 0, 0, 0]));
        assert_eq!(pqrk_hstar(2, 1, 2).unwrap(), hv(&[1, 1, 3, 0]));
        assert!(reeve_hstar(1, 1).is_err());
        assert!(pqrk_hstar(1, 1, 0).is_err());
    }

    #[test]
    fn reeve_vertices() {
        let s = build_simplex(1, None, 2).unwrap();
        assert_eq!(s.dimension, 3);
        assert_eq!(
            s.vertices,
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]
        );
        let p = build_simplex(1, Some(1), 2).unwrap();
        assert_eq!(p.vertices[..4], s.vertices[..]);
        assert_eq!(p.vertices[4], vec![0, -1, -1]);
        assert_eq!(
            build_simplex(0, None, 2).unwrap().vertices[3],
            vec![1, 0, 1]
        );
    }

    #[test]
    fn determinant_and_cells() {
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 4]];
        assert_eq!(determinant(&m), 18);
        let singular = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(determinant(&singular), 0);
        let unit: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let c = cell(&unit.iter().collect::<Vec<_>>()).unwrap();
        let mut s = Vec::new();
        assert!(c.contains(&[1, 1], 2, &mut s));
        assert!(!c.contains(&[2, 1], 2, &mut s));
        let flat: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert!(cell(&flat.iter().collect::<Vec<_>>()).is_none());
    }

    #[test]
    fn oracle_counts_unit_square() {
        // both triangles of the unit square
        let spec = SimplexSpec {
            dimension: 2,
            vertices: vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        };
        assert_eq!(count_hstar_oracle(&spec).unwrap(), hv(&[1, 1, 0]));
    }

    #[test]
    fn oracle_matches_closed_forms_in_dimension_three() {
        for q in 0..=3 {
            let spec = build_simplex(q, None, 2).unwrap();
            assert_eq!(
                count_hstar_oracle(&spec).unwrap(),
                reeve_hstar(q, 2).unwrap()
            );
        }
        let spec = build_simplex(2, Some(1), 2).unwrap();
        assert_eq!(count_hstar_oracle(&spec).unwrap(), hv(&[1, 1, 3, 0]));
    }

    #[test]
    fn oracle_rejects_large_or_flat_input() {
        let spec = build_simplex(1, None, 4).unwrap();
        assert!(matches!(
            count_hstar_oracle(&spec),
            Err(Error::OracleDimension { dim: 7, max: 5 })
        ));
        let flat = SimplexSpec {
            dimension: 2,
            vertices: vec![vec![0, 0], vec![1, 1], vec![2, 2]],
        };
        assert!(matches!(count_hstar_oracle(&flat), Err(Error::Degenerate)));
    }

    #[test]
    fn unimodular_product_is_a_negative_report() {
        let p = PqrkParams::new(0, 0, 2).unwrap();
        let r = verify_counterexample(p, p).unwrap();
        assert!(r.product_unimodal);
        assert!(r.dips.is_empty());
        assert!(!r.is_counterexample());
        assert_eq!(r.dimension, 6);
    }

    #[test]
    fn params_parse() {
        let p: PqrkParams = "13,1,13".parse().unwrap();
        assert_eq!(p, PqrkParams { q: 13, r: 1, k: 13 });
        assert!("13,1".parse::<PqrkParams>().is_err());
        assert!("13,x,2".parse::<PqrkParams>().is_err());
        assert!("1,1,1".parse::<PqrkParams>().is_err());
    }
}
