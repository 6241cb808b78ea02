//! Triangular sums, cross-term configurations, and the correspondence to
//! diagonal quadratic forms on odd vectors.
//!
//! The `x`-th triangular number is `T(x) = x(x+1)/2`, extended to all
//! integers; `T(-m) = T(m-1)`, so every value is taken exactly twice on `Z`.
//! A [`DiagonalSum`] is `sum_i b_i T(x_i)` with positive integer
//! coefficients. A [`CrossSum`] adds cross terms `c_ij (2 x_i x_j + x_i +
//! x_j)` (plus the constant `c_ij` whenever `c_ij < 0`, which makes the
//! unnormalized value sets invariant under sign flips of variables) and an
//! integer shift.
//!
//! Since `8 T(x) = (2x+1)^2 - 1`, a diagonal sum represents `n` exactly as
//! often as the quadratic form with the same coefficients represents
//! `8n + sum(b)` with all variables odd; [`OddFormCorrespondence`] carries
//! that translation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// `x(x+1)/2` for any machine integer; exact, never overflows.
pub fn tri(x: i64) -> u128 {
    let x = x as i128;
    let t = x * (x + 1) / 2;
    debug_assert!(t >= 0);
    t as u128
}

/// `x(x+1)/2` at arbitrary precision.
pub fn tri_big(x: &BigInt) -> BigInt {
    x * (x + BigInt::one()) / BigInt::from(2)
}

/// Largest `x >= 0` with `T(x) <= cap`.
pub fn tri_inv_floor(cap: u64) -> u64 {
    let r = num_integer::Roots::sqrt(&(8u128 * cap as u128 + 1));
    let mut x = ((r - 1) / 2) as u64;
    while tri(x as i64 + 1) <= cap as u128 {
        x += 1;
    }
    while tri(x as i64) > cap as u128 {
        x -= 1;
    }
    x
}

/// A sum `b_1 T(x_1) + ... + b_k T(x_k)` with positive coefficients, stored
/// sorted ascending. Permutations of the coefficients are the same sum.
///
/// The empty sum (the root of escalation) is allowed and represents only 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSum {
    b: Vec<u64>,
}

impl DiagonalSum {
    /// Build from positive coefficients; sorts them.
    pub fn new(coeffs: impl Into<Vec<u64>>) -> Result<Self> {
        let mut b = coeffs.into();
        if b.iter().any(|&v| v == 0) {
            return Err(Error::ZeroCoefficient);
        }
        b.sort_unstable();
        Ok(Self { b })
    }

    /// The empty sum, which represents only 0.
    pub fn empty() -> Self {
        Self { b: Vec::new() }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `B = b_1 + ... + b_k`, the offset of the odd-form correspondence.
    pub fn coeff_sum(&self) -> u64 {
        self.b.iter().sum()
    }

    /// The sum extended by one more coefficient (re-sorted).
    pub fn with_coefficient(&self, b: u64) -> Result<Self> {
        let mut v = self.b.clone();
        v.push(b);
        Self::new(v)
    }

    /// `sum_i b_i T(x_i)`.
    pub fn eval(&self, x: &[i64]) -> Result<BigUint> {
        if x.len() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.b.len(), got: x.len() });
        }
        let mut acc = BigUint::zero();
        for (&b, &xi) in self.b.iter().zip(x) {
            acc += BigUint::from(b) * BigUint::from(tri(xi));
        }
        Ok(acc)
    }

    /// Concatenation of variables; coefficients merge into sorted order.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut b = self.b.clone();
        b.extend_from_slice(&other.b);
        b.sort_unstable();
        Self { b }
    }

    /// The diagonal quadratic form reached through `8 T(x) = (2x+1)^2 - 1`.
    pub fn to_odd_form(&self) -> OddFormCorrespondence {
        OddFormCorrespondence { coeffs: self.b.clone(), offset: self.coeff_sum() }
    }
}

impl fmt::Display for DiagonalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for DiagonalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.b.len()))?;
        for b in &self.b {
            seq.serialize_element(b)?;
        }
        seq.end()
    }
}

/// The diagonal quadratic form `sum_i b_i X_i^2` restricted to odd vectors,
/// together with the target map `n -> 8n + sum(b)`.
///
/// Representations of `n` by the triangular sum over `Z^k` correspond
/// bijectively (via `X = 2x + 1`) to odd representations of `target(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddFormCorrespondence {
    coeffs: Vec<u64>,
    offset: u64,
}

impl OddFormCorrespondence {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `B = sum(b)`.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// The fixed scale of the correspondence.
    pub fn scale(&self) -> u64 {
        8
    }

    /// `8n + B`.
    pub fn target(&self, n: u64) -> u64 {
        8u64.checked_mul(n).and_then(|m| m.checked_add(self.offset)).expect("target overflows u64")
    }
}

/// A symmetric cross-term pattern `c = (c_ij)` on index pairs `i < j`
/// (0-based); absent entries are 0 and the diagonal is not part of the
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossConfig {
    dim: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl CrossConfig {
    /// Build from `(i, j, c_ij)` triples, 0-based; zero values are dropped,
    /// duplicates and diagonal entries rejected.
    pub fn new(dim: usize, entries: &[(usize, usize, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(i, j, v) in entries {
            if i >= dim || j >= dim {
                let index = i.max(j);
                return Err(Error::IndexOutOfRange { index, dim });
            }
            if i == j {
                return Err(Error::BadConfigEntry { i, j, reason: "diagonal entry" });
            }
            let key = (i.min(j), i.max(j));
            if v == 0 {
                continue;
            }
            if map.insert(key, v).is_some() {
                return Err(Error::BadConfigEntry { i, j, reason: "duplicate entry" });
            }
        }
        Ok(Self { dim, entries: map })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.is_empty()
    }

    /// `c_ij` (0 when absent). `i != j` required.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        assert!(i != j, "configuration has no diagonal entries");
        *self.entries.get(&(i.min(j), i.max(j))).unwrap_or(&0)
    }

    /// Nonzero entries as `((i, j), c_ij)` with `i < j`, ascending.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_abs(&self) -> u64 {
        self.entries.values().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// `sum_j |c_ij|` for one variable.
    pub fn weighted_degree(&self, i: usize) -> u64 {
        (0..self.dim).filter(|&j| j != i).map(|j| self.get(i, j).unsigned_abs()).sum()
    }

    /// True iff the graph with an edge wherever `c_ij != 0` is connected
    /// (the block condition). Dimensions 0 and 1 count as connected.
    pub fn is_connected(&self) -> bool {
        if self.dim <= 1 {
            return true;
        }
        let mut seen = vec![false; self.dim];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.dim {
                if j != i && !seen[j] && self.get(i, j) != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The configuration with all entries touching variable `i` negated
    /// (the effect of `x_i -> -x_i` on the quadratic form).
    pub fn negate_variable(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
        }
        let entries = self
            .entries
            .iter()
            .map(|(&(a, b), &v)| (a, b, if a == i || b == i { -v } else { v }))
            .collect::<Vec<_>>();
        Self::new(self.dim, &entries)
    }

    /// Block-diagonal union with `other` appended after `self`.
    pub fn block_sum(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (&(i, j), &v) in &other.entries {
            entries.insert((i + self.dim, j + self.dim), v);
        }
        Self { dim: self.dim + other.dim, entries }
    }

    /// Value of the cross-term part (including the `+c_ij` convention for
    /// negative entries) at a corner point, all coordinates in {0, -1}.
    /// This is independent of any diagonal coefficients.
    pub fn corner_value(&self, x: &[i64]) -> Result<i64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        assert!(x.iter().all(|&v| v == 0 || v == -1), "corner points have coordinates 0 or -1");
        let mut acc = 0i64;
        for (&(i, j), &c) in &self.entries {
            // 2 x_i x_j + x_i + x_j is 0 when x_i == x_j and -1 otherwise
            let cross = if x[i] == x[j] { 0 } else { -1 };
            acc += c * cross;
            if c < 0 {
                acc += c;
            }
        }
        Ok(acc)
    }
}

/// A triangular sum with cross terms.
///
/// The unnormalized polynomial is
/// `f~(x) = sum_i b_i T(x_i) + sum_{i<j} c_ij (2 x_i x_j + x_i + x_j) + sum_{c_ij<0} c_ij`
/// and the stored `shift` is added on top (`shift = -min f~` for normalized
/// forms, 0 for the bare `f~`). The associated quadratic form is
/// `Q = sum b_i X_i^2 + sum 4 c_ij X_i X_j`; its Gram matrix `diag(b) + 2c`
/// must be positive definite, which is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSum {
    b: Vec<u64>,
    config: CrossConfig,
    shift: i64,
}

impl CrossSum {
    pub fn new(b: impl Into<Vec<u64>>, config: CrossConfig, shift: i64) -> Result<Self> {
        let b = b.into();
        if b.iter().any(|&v| v == 0) {
            return Err(Error::ZeroCoefficient);
        }
        if b.len() != config.dim() {
            return Err(Error::DimensionMismatch { expected: config.dim(), got: b.len() });
        }
        let sum = Self { b, config, shift };
        if sum.dim() > 0 && !gram_positive_definite(&sum.gram()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(sum)
    }

    /// A diagonal sum viewed as a cross sum without cross terms.
    pub fn from_diagonal(f: &DiagonalSum) -> Self {
        Self { b: f.coeffs().to_vec(), config: CrossConfig::empty(f.dim()), shift: 0 }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.b
    }

    pub fn config(&self) -> &CrossConfig {
        &self.config
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn with_shift(&self, shift: i64) -> Self {
        Self { shift, ..self.clone() }
    }

    /// Gram matrix of the associated quadratic form: `diag(b) + 2c`.
    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        let k = self.dim();
        let mut a = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            a[i][i] = BigInt::from(self.b[i]);
            for j in 0..k {
                if j != i {
                    a[i][j] = BigInt::from(2 * self.config.get(i, j));
                }
            }
        }
        a
    }

    /// The unnormalized value `f~(x)`; the stored shift is ignored. May be
    /// negative.
    pub fn eval_tilde(&self, x: &[i64]) -> Result<BigInt> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let mut acc = BigInt::zero();
        for (&b, &xi) in self.b.iter().zip(x) {
            acc += BigInt::from(b) * BigInt::from(tri(xi));
        }
        for ((i, j), c) in self.config.entries() {
            let (xi, xj) = (BigInt::from(x[i]), BigInt::from(x[j]));
            let cross = BigInt::from(2) * &xi * &xj + &xi + &xj;
            acc += BigInt::from(c) * cross;
            if c < 0 {
                acc += BigInt::from(c);
            }
        }
        Ok(acc)
    }

    /// `f(x) = f~(x) + shift`.
    pub fn eval(&self, x: &[i64]) -> Result<BigInt> {
        Ok(self.eval_tilde(x)? + BigInt::from(self.shift))
    }

    /// Concatenates variables; configurations become block diagonal and
    /// shifts add.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut b = self.b.clone();
        b.extend_from_slice(&other.b);
        Self {
            b,
            config: self.config.block_sum(&other.config),
            shift: self.shift + other.shift,
        }
    }

    /// The equivalent form reached by `x_i -> -x_i`: entries touching `i`
    /// are negated, diagonal and shift unchanged. The value set of `f~` is
    /// preserved (that is the point of the `+c_ij` convention).
    pub fn flip_variable(&self, i: usize) -> Result<Self> {
        let config = self.config.negate_variable(i)?;
        Ok(Self { b: self.b.clone(), config, shift: self.shift })
    }
}

/// All leading principal minors positive, i.e. positive definite.
pub(crate) fn gram_positive_definite(a: &[Vec<BigInt>]) -> bool {
    symmetric_pivots(a).is_some()
}

/// Pivots of the symmetric (LDL-style) elimination of a rational-entry
/// symmetric matrix. Returns `None` unless every pivot is positive; the
/// pivots are the ratios of consecutive leading principal minors.
pub(crate) fn symmetric_pivots(a: &[Vec<BigInt>]) -> Option<Vec<BigRational>> {
    let k = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    let mut pivots = Vec::with_capacity(k);
    for i in 0..k {
        let d = m[i][i].clone();
        if !d.is_positive() {
            return None;
        }
        for r in (i + 1)..k {
            let factor = &m[r][i] / &d;
            for c in i..k {
                let sub = &factor * &m[i][c];
                m[r][c] -= sub;
            }
        }
        pivots.push(d);
    }
    Some(pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross(b: &[u64], entries: &[(usize, usize, i64)], shift: i64) -> CrossSum {
        let cfg = CrossConfig::new(b.len(), entries).unwrap();
        CrossSum::new(b.to_vec(), cfg, shift).unwrap()
    }

    #[test]
    fn tri_values_and_symmetry() {
        assert_eq!(tri(0), 0);
        assert_eq!(tri(3), 6);
        assert_eq!(tri(-4), 6);
        for x in -60i64..60 {
            assert_eq!(tri(x), tri(-x - 1));
            assert_eq!(tri_big(&BigInt::from(x)), BigInt::from(tri(x)));
        }
    }

    #[test]
    fn tri_inverse_floor() {
        for cap in 0u64..2000 {
            let x = tri_inv_floor(cap);
            assert!(tri(x as i64) <= cap as u128);
            assert!(tri(x as i64 + 1) > cap as u128);
        }
    }

    #[test]
    fn eval_diagonal_examples() {
        let f = DiagonalSum::new(vec![1, 1, 1]).unwrap();
        assert_eq!(f.eval(&[1, 1, 3]).unwrap(), BigUint::from(8u32));
        assert_eq!(f.eval(&[1, 1, 2]).unwrap(), BigUint::from(5u32));
        let g = DiagonalSum::new(vec![1, 2]).unwrap();
        assert_eq!(g.eval(&[0, 1]).unwrap(), BigUint::from(2u32));
        // brute-force oracle: the smallest x with value 3 for [1,1,3,3]
        let h = DiagonalSum::new(vec![1, 1, 3, 3]).unwrap();
        assert_eq!(h.eval(&[0, 0, 1, 0]).unwrap(), BigUint::from(3u32));
        assert!(matches!(h.eval(&[0, 0, 0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn odd_form_offsets() {
        for (b, offset) in [(vec![1, 1, 1], 3u64), (vec![1, 2, 4], 7), (vec![1, 1, 3, 3], 8)] {
            let f = DiagonalSum::new(b).unwrap();
            assert_eq!(f.to_odd_form().offset(), offset);
            assert_eq!(f.to_odd_form().target(1), 8 + offset);
        }
    }

    #[test]
    fn odd_square_identity() {
        // 8 * sum(b_i T(x_i)) + sum(b_i) = sum(b_i (2 x_i + 1)^2)
        let f = DiagonalSum::new(vec![2, 3, 7]).unwrap();
        for x0 in -4i64..4 {
            for x1 in -4i64..4 {
                for x2 in -4i64..4 {
                    let x = [x0, x1, x2];
                    let lhs = BigInt::from(8) * BigInt::from(f.eval(&x).unwrap())
                        + BigInt::from(f.coeff_sum());
                    let rhs: BigInt = f
                        .coeffs()
                        .iter()
                        .zip(&x)
                        .map(|(&b, &xi)| BigInt::from(b) * BigInt::from((2 * xi + 1) * (2 * xi + 1)))
                        .sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn eval_cross_tilde_examples() {
        let f30 = cross(&[30, 30], &[(0, 1, 1)], 0);
        assert_eq!(f30.eval_tilde(&[0, -1]).unwrap(), BigInt::from(-1));
        assert_eq!(f30.eval_tilde(&[-1, 0]).unwrap(), BigInt::from(-1));
        assert_eq!(f30.eval_tilde(&[0, 0]).unwrap(), BigInt::from(0));
        assert_eq!(f30.eval_tilde(&[-1, -1]).unwrap(), BigInt::from(0));
        // with a negative entry only the +c convention term fires at the origin
        let neg = cross(&[2, 3], &[(0, 1, -1)], 0);
        assert_eq!(neg.eval_tilde(&[0, 0]).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn positive_definiteness_is_checked() {
        // 2x^2 + 2y^2 - 4xy is only semidefinite
        let cfg = CrossConfig::new(2, &[(0, 1, -1)]).unwrap();
        assert!(matches!(
            CrossSum::new(vec![2, 2], cfg, 0),
            Err(Error::NotPositiveDefinite)
        ));
        let cfg = CrossConfig::new(2, &[(0, 1, 1)]).unwrap();
        assert!(CrossSum::new(vec![2, 3], cfg, 0).is_ok());
        let cfg = CrossConfig::new(2, &[(0, 1, 2)]).unwrap();
        assert!(CrossSum::new(vec![2, 3], cfg.clone(), 0).is_err()); // det = 6 - 16 < 0
    }

    #[test]
    fn direct_sum_shapes() {
        let a = DiagonalSum::new(vec![1]).unwrap();
        let b = DiagonalSum::new(vec![2]).unwrap();
        assert_eq!(a.direct_sum(&b).coeffs(), &[1, 2]);

        let f = cross(&[20, 20], &[(0, 1, 1)], 1);
        let g = f.direct_sum(&f);
        assert_eq!(g.dim(), 4);
        assert_eq!(g.shift(), 2);
        let edges: Vec<_> = g.config().entries().collect();
        assert_eq!(edges, vec![((0, 1), 1), ((2, 3), 1)]);
    }

    #[test]
    fn flip_negates_incident_entries_and_is_an_involution() {
        let f = cross(&[20, 20], &[(0, 1, 1)], 0);
        let flipped = f.flip_variable(0).unwrap();
        assert_eq!(flipped.config().get(0, 1), -1);
        assert_eq!(flipped.flip_variable(0).unwrap(), f);
        assert!(f.flip_variable(5).is_err());
    }

    #[test]
    fn flip_preserves_tilde_values_pointwise_under_reflection() {
        // f~ after flipping variable i agrees with f~ at x_i -> -x_i - 1
        let f = cross(&[5, 7, 9], &[(0, 1, 2), (1, 2, -1)], 0);
        for i in 0..3 {
            let flipped = f.flip_variable(i).unwrap();
            for x0 in -3i64..3 {
                for x1 in -3i64..3 {
                    for x2 in -3i64..3 {
                        let x = [x0, x1, x2];
                        let mut y = x;
                        y[i] = -x[i] - 1;
                        assert_eq!(flipped.eval_tilde(&y).unwrap(), f.eval_tilde(&x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn flip_preserves_value_sets_on_a_box() {
        // the box [-5, 4] is symmetric under the reflection x -> -x - 1, so
        // even the value multisets agree
        let f = cross(&[6, 6], &[(0, 1, 1)], 0);
        let flipped = f.flip_variable(0).unwrap();
        let values = |g: &CrossSum| {
            let mut v: Vec<BigInt> = Vec::new();
            for x in -5i64..=4 {
                for y in -5i64..=4 {
                    v.push(g.eval_tilde(&[x, y]).unwrap());
                }
            }
            v.sort();
            v
        };
        assert_eq!(values(&f), values(&flipped));
    }

    #[test]
    fn connectivity_flag() {
        let cfg = CrossConfig::new(3, &[(0, 1, 1), (1, 2, -2)]).unwrap();
        assert!(cfg.is_connected());
        let cfg = CrossConfig::new(3, &[(0, 1, 1)]).unwrap();
        assert!(!cfg.is_connected());
        assert!(CrossConfig::empty(1).is_connected());
    }

    #[test]
    fn config_rejects_bad_entries() {
        assert!(CrossConfig::new(2, &[(0, 0, 1)]).is_err());
        assert!(CrossConfig::new(2, &[(0, 1, 1), (1, 0, 1)]).is_err());
        assert!(CrossConfig::new(2, &[(0, 3, 1)]).is_err());
        // explicit zeros are simply dropped
        let cfg = CrossConfig::new(2, &[(0, 1, 0)]).unwrap();
        assert!(cfg.is_diagonal());
    }
}
