//! Truncated integer q-series: theta series of triangular and quadratic
//! forms, eta products, and the degeneracy operators `U(d)`, `V(d)`.
//!
//! A [`TruncatedSeries`] holds exact integer coefficients `a(0..=P)`; every
//! operation tracks the precision through which the result is valid
//! (minimum of the operands for sums and Cauchy products, `floor(P/d)` under
//! `U(d)`, `d*P` under `V(d)`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::forms::{CrossSum, DiagonalSum};
use crate::lattice::{self, CountConvention};
use crate::{Error, Result};

/// Integer coefficients `a(0..=P)` of a q-expansion, exact through `q^P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Wrap explicit coefficients; the precision is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "series carry at least the constant term");
        Self { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); precision + 1] }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncated(&self, precision: usize) -> Self {
        assert!(precision <= self.precision(), "cannot extend a truncated series");
        Self { coeffs: self.coeffs[..=precision].to_vec() }
    }

    fn common_precision(&self, rhs: &Self) -> usize {
        self.precision().min(rhs.precision())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.common_precision(rhs);
        Self { coeffs: (0..=p).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.common_precision(rhs);
        Self { coeffs: (0..=p).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }

    /// Cauchy product, truncated to the smaller operand precision.
    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.common_precision(rhs);
        let mut out = vec![BigInt::zero(); p + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(p + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(p + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiply by `q^d`; the result is valid through `q^(P+d)`.
    pub fn shift_up(&self, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `U(d)`: `a(n) -> a(dn)`, precision `floor(P/d)`.
    pub fn op_u(&self, d: usize) -> Self {
        assert!(d >= 1);
        let p = self.precision() / d;
        Self { coeffs: (0..=p).map(|n| self.coeffs[d * n].clone()).collect() }
    }

    /// `V(d)`: `q -> q^d`, precision `d*P`.
    pub fn op_v(&self, d: usize) -> Self {
        assert!(d >= 1);
        let mut coeffs = vec![BigInt::zero(); d * self.precision() + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[d * n] = c.clone();
        }
        Self { coeffs }
    }

    /// Multiplicative inverse; the constant term must be a unit (+-1).
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !(a0.is_one() || (-a0).is_one()) {
            return Err(Error::NonUnitConstantTerm);
        }
        let p = self.precision();
        let mut out = vec![BigInt::zero(); p + 1];
        out[0] = a0.clone(); // 1/a0 == a0 for units
        for n in 1..=p {
            let mut s = BigInt::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    s += &self.coeffs[i] * &out[n - i];
                }
            }
            out[n] = -a0 * s;
        }
        Ok(Self { coeffs: out })
    }

    /// Integer power; negative exponents require a unit constant term.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.precision());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }
}

/// Pointwise/Cauchy combination used by the command-line surface.
#[derive(Debug, Clone)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
    /// Multiply every coefficient of the left operand by a constant; the
    /// right operand is ignored.
    Scale(BigInt),
}

pub fn combine(lhs: &TruncatedSeries, rhs: &TruncatedSeries, op: CombineOp) -> TruncatedSeries {
    match op {
        CombineOp::Add => lhs.add(rhs),
        CombineOp::Sub => lhs.sub(rhs),
        CombineOp::Mul => lhs.mul(rhs),
        CombineOp::Scale(k) => lhs.scale(&k),
    }
}

// ---------------------------------------------------------------------------
// theta series
// ---------------------------------------------------------------------------

/// Theta series of a diagonal triangular sum: `a(n)` counts solutions of
/// `sum b_i T(x_i) = n` under `conv` (`Nonneg` or `All`).
pub fn theta_diagonal(
    f: &DiagonalSum,
    conv: CountConvention,
    precision: u64,
) -> Result<TruncatedSeries> {
    Ok(TruncatedSeries::from_counts(&lattice::series_diagonal(f, conv, precision)?))
}

/// Theta series of a cross-term sum over all integer vectors. The form must
/// take only nonnegative values.
pub fn theta_cross(f: &CrossSum, conv: CountConvention, precision: u64) -> Result<TruncatedSeries> {
    if conv != CountConvention::All {
        return Err(Error::InvalidConvention { convention: conv.name() });
    }
    Ok(TruncatedSeries::from_counts(&lattice::series_cross(f, precision)?))
}

/// Theta series of the diagonal quadratic form `sum b_i X_i^2` (`All` or
/// `Odd` vectors).
pub fn theta_quadratic(
    b: &[u64],
    conv: CountConvention,
    precision: u64,
) -> Result<TruncatedSeries> {
    Ok(TruncatedSeries::from_counts(&lattice::series_quadratic(b, conv, precision)?))
}

// ---------------------------------------------------------------------------
// eta products
// ---------------------------------------------------------------------------

/// `prod_n (1 - q^(d n))` through `q^P`, by the pentagonal number theorem.
fn euler_product(d: u64, precision: usize) -> TruncatedSeries {
    let mut coeffs = vec![BigInt::zero(); precision + 1];
    coeffs[0] = BigInt::one();
    let mut k = 1u64;
    loop {
        let e1 = d as u128 * (k as u128 * (3 * k as u128 - 1) / 2);
        let e2 = d as u128 * (k as u128 * (3 * k as u128 + 1) / 2);
        if e1 > precision as u128 {
            break;
        }
        let sign = if k % 2 == 1 { -1i32 } else { 1 };
        coeffs[e1 as usize] += sign;
        if e2 <= precision as u128 {
            coeffs[e2 as usize] += sign;
        }
        k += 1;
    }
    TruncatedSeries::new(coeffs)
}

/// Expand `prod eta(d z)^r` for the given `(d, r)` factors.
///
/// `eta(z) = q^(1/24) prod (1 - q^n)`, so the product carries the prefactor
/// `q^(sum d r / 24)`; that exponent must be an integer or the expansion is
/// rejected. Returns `(leading_power, series)` with the series normalized to
/// start at `q^0` with constant term 1.
pub fn eta_product(factors: &[(u64, i64)], precision: u64) -> Result<(i64, TruncatedSeries)> {
    let num: i128 = factors.iter().map(|&(d, r)| d as i128 * r as i128).sum();
    if num % 24 != 0 {
        return Err(Error::NonIntegralLeadingPower { num: num as i64 });
    }
    let leading = (num / 24) as i64;
    let p = precision as usize;
    let mut acc = TruncatedSeries::one(p);
    for &(d, r) in factors {
        if r == 0 {
            continue;
        }
        let base = euler_product(d, p);
        acc = acc.mul(&base.pow(r)?);
    }
    Ok((leading, acc))
}
