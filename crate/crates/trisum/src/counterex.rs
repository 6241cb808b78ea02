//! Cross-term sums that miss exactly one prescribed integer, and the
//! quadratic-growth witness for how late the first missed integer can be.
//!
//! The two-variable block with Gram matrix `[[N, 2], [2, N]]` is the
//! normalized polynomial `N T(x) + N T(y) + (2xy + x + y) + 1`. Its counting
//! series is `2 + 2q` followed by zeros through `q^(N-13)`: the only small
//! values come from the four corner points. Direct sums of such blocks
//! represent exactly `0..=j` among everything below `N - 12`, which makes
//! them the kernel of every construction here.

use num_traits::ToPrimitive;

use crate::forms::{tri, CrossConfig, CrossSum, DiagonalSum};
use crate::lattice::series_cross;
use crate::{Error, Result};

/// Smallest block parameter with a nonempty zero window.
pub const MIN_BLOCK_PARAM: u64 = 14;

/// The normalized two-variable block `N T(x) + N T(y) + (2xy+x+y) + 1`.
pub fn build_block(big_n: u64) -> Result<CrossSum> {
    if big_n < MIN_BLOCK_PARAM {
        return Err(Error::TooSmall { what: "the block parameter", n: big_n, limit: MIN_BLOCK_PARAM });
    }
    let cfg = CrossConfig::new(2, &[(0, 1, 1)])?;
    CrossSum::new(vec![big_n, big_n], cfg, 1)
}

/// Direct sum of `copies` blocks with the same parameter; the empty sum for
/// `copies = 0`.
pub fn block_power(copies: u64, big_n: u64) -> Result<CrossSum> {
    let empty = CrossSum::new(Vec::new(), CrossConfig::empty(0), 0)?;
    if copies == 0 {
        return Ok(empty);
    }
    let block = build_block(big_n)?;
    let mut acc = block.clone();
    for _ in 1..copies {
        acc = acc.direct_sum(&block);
    }
    Ok(acc)
}

/// A form built to represent every nonnegative integer except `missing`.
#[derive(Debug, Clone)]
pub struct CounterexampleSpec {
    /// The single integer the form does not represent.
    pub missing: u64,
    /// Block parameter; must exceed `missing + 13`.
    pub block_param: u64,
    pub assembled: CrossSum,
}

/// Default block parameter for a prescribed missing integer: the smallest
/// allowed, keeping enumeration cheap.
pub fn default_block_param(missing: u64) -> u64 {
    missing + 14
}

/// Assemble the form missing exactly `n`: `n - 1` blocks (which represent
/// `0..=n-1` and nothing else small) plus `(n+1)(T + T + T)` (which fills
/// every residue class mod `n+1` by threes of triangular numbers) plus
/// `(2n+1) T` (which rescues the class of `n` above `n` itself).
pub fn build_missing_one(n: u64, big_n: Option<u64>) -> Result<CounterexampleSpec> {
    if n == 0 {
        return Err(Error::TooSmall { what: "the missing integer", n, limit: 1 });
    }
    let big_n = big_n.unwrap_or_else(|| default_block_param(n));
    if big_n <= n + 13 {
        return Err(Error::TooSmall { what: "the block parameter", n: big_n, limit: n + 14 });
    }
    let blocks = block_power(n - 1, big_n)?;
    let tail = DiagonalSum::new(vec![n + 1, n + 1, n + 1, 2 * n + 1])?;
    let assembled = blocks.direct_sum(&CrossSum::from_diagonal(&tail));
    Ok(CounterexampleSpec { missing: n, block_param: big_n, assembled })
}

/// Outcome of checking a counterexample's counting series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked_to: u64,
    /// Values `m != missing` with count 0, and `missing` itself if its
    /// count is positive.
    pub failures: Vec<u64>,
    pub passed: bool,
}

/// Check that the assembled form represents every `m <= bound` except
/// exactly `missing`. Failures are reported, never raised.
pub fn verify_missing_one(spec: &CounterexampleSpec, bound: u64) -> Result<VerifyReport> {
    if bound < spec.missing {
        return Err(Error::TooSmall { what: "the verification bound", n: bound, limit: spec.missing });
    }
    let series = series_cross(&spec.assembled, bound)?;
    let mut failures = Vec::new();
    for (m, &count) in series.iter().enumerate() {
        let m = m as u64;
        if (m == spec.missing) != (count == 0) {
            failures.push(m);
        }
    }
    Ok(VerifyReport { checked_to: bound, passed: failures.is_empty(), failures })
}

/// A norm-`m` form whose smallest missed integer is quadratic in `m`.
#[derive(Debug, Clone)]
pub struct GapWitness {
    pub form: CrossSum,
    /// The predicted smallest missed integer, `T(m+1) - 1`.
    pub missed: u64,
    /// The smallest missed integer found by enumeration up to `T(m+1)`.
    pub smallest_missed: Option<u64>,
    pub verified: bool,
}

/// Smallest safe block parameter for the gap witness.
pub fn default_gap_block_param(m: u64) -> u64 {
    MIN_BLOCK_PARAM + tri(m as i64 + 1) as u64
}

/// `m - 1` blocks plus one bare triangular variable: the blocks cover
/// `0..=m-1` on top of each triangular number, so the coverage
/// `[T(r), T(r) + m - 1]` stays contiguous exactly until `T(m+1) - 1`,
/// which is the smallest missed integer. The claim is verified by
/// enumeration, not assumed.
pub fn max_gap_witness(m: u64, big_n: Option<u64>) -> Result<GapWitness> {
    if m == 0 {
        return Err(Error::TooSmall { what: "the norm budget", n: 0, limit: 1 });
    }
    let needed = default_gap_block_param(m);
    let big_n = big_n.unwrap_or(needed);
    if big_n < needed {
        return Err(Error::TooSmall { what: "the block parameter", n: big_n, limit: needed });
    }
    let blocks = block_power(m - 1, big_n)?;
    let form = blocks.direct_sum(&CrossSum::from_diagonal(&DiagonalSum::new(vec![1])?));
    let missed = tri(m as i64 + 1).to_u64().expect("fits") - 1;

    let series = series_cross(&form, missed + 1)?;
    let smallest_missed = series.iter().position(|&c| c == 0).map(|i| i as u64);
    Ok(GapWitness { form, missed, verified: smallest_missed == Some(missed), smallest_missed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{count_cross, minimize, CountConvention};
    use crate::qseries::theta_cross;

    #[test]
    fn block_requires_a_wide_window() {
        assert!(build_block(13).is_err());
        assert!(build_block(14).is_ok());
    }

    #[test]
    fn block_counting_series() {
        for big_n in [14u64, 20, 30] {
            let f = build_block(big_n).unwrap();
            let series = series_cross(&f, big_n - 13).unwrap();
            assert_eq!(series[0], 2, "N = {big_n}");
            assert_eq!(series[1], 2, "N = {big_n}");
            assert!(series[2..].iter().all(|&a| a == 0), "N = {big_n}");
        }
        // normalization constant is exactly 1
        let f = build_block(30).unwrap().with_shift(0);
        assert_eq!(minimize(&f, true).min_value, -1);
    }

    #[test]
    fn block_power_series_is_a_binomial_pattern() {
        let big_n = 18u64;
        let window = big_n - 13;
        for copies in 0..=4u64 {
            let g = block_power(copies, big_n).unwrap();
            let series = series_cross(&g, window).unwrap();
            for (i, &a) in series.iter().enumerate() {
                let expected = if (i as u64) <= copies {
                    2u64.pow(copies as u32) * binom(copies, i as u64)
                } else {
                    0
                };
                assert_eq!(a, expected, "copies {copies} coefficient {i}");
            }
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn block_power_matches_theta_power() {
        let big_n = 16u64;
        let window = big_n - 13;
        let block = theta_cross(&build_block(big_n).unwrap(), CountConvention::All, window).unwrap();
        for copies in 1..=3i64 {
            let g = block_power(copies as u64, big_n).unwrap();
            let direct = theta_cross(&g, CountConvention::All, window).unwrap();
            assert_eq!(direct, block.pow(copies).unwrap());
        }
    }

    #[test]
    fn missing_one_shapes() {
        let spec = build_missing_one(1, None).unwrap();
        assert_eq!(spec.block_param, 15);
        assert_eq!(spec.assembled.dim(), 4);
        assert!(spec.assembled.config().is_diagonal());
        let mut b = spec.assembled.coeffs().to_vec();
        b.sort_unstable();
        assert_eq!(b, vec![2, 2, 2, 3]);

        // one block plus the four diagonal variables
        let spec = build_missing_one(2, Some(16)).unwrap();
        assert_eq!(spec.assembled.dim(), 6);
        assert_eq!(spec.assembled.config().entries().count(), 1);
        assert_eq!(spec.assembled.shift(), 1);

        assert!(build_missing_one(2, Some(15)).is_err());
        assert!(build_missing_one(0, None).is_err());
    }

    #[test]
    fn missing_one_verifies_for_small_n() {
        let spec = build_missing_one(1, None).unwrap();
        let report = verify_missing_one(&spec, 200).unwrap();
        assert!(report.passed, "failures at {:?}", report.failures);
        assert_eq!(count_cross(&spec.assembled, 1).unwrap(), 0);

        let spec = build_missing_one(3, Some(17)).unwrap();
        let report = verify_missing_one(&spec, 120).unwrap();
        assert!(report.passed, "failures at {:?}", report.failures);
        assert_eq!(count_cross(&spec.assembled, 3).unwrap(), 0);
    }

    #[test]
    fn gap_witness_small_cases() {
        let w = max_gap_witness(1, Some(30)).unwrap();
        assert_eq!(w.missed, 2);
        assert!(w.verified);

        let w = max_gap_witness(2, Some(40)).unwrap();
        assert_eq!(w.missed, 5);
        assert!(w.verified);

        let w = max_gap_witness(3, Some(60)).unwrap();
        assert_eq!(w.missed, 9);
        assert!(w.verified);

        // defaults work too
        let w = max_gap_witness(2, None).unwrap();
        assert!(w.verified);

        assert!(max_gap_witness(0, None).is_err());
        assert!(max_gap_witness(3, Some(20)).is_err());
    }
}
