//! Reference constants that are documented rather than recomputed.

/// Candidate finite test set for norm-1 cross-term sums over the positive
/// integers, obtained by bounded computation; a proof is not known. Any
/// truant found by a bounded norm-1 escalation must land in this list.
pub const Y1_CANDIDATES: [u64; 49] = [
    1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14, 16, 17, 19, 20, 23, 24, 25, 26, 29, 32, 33, 34,
    35, 38, 41, 46, 47, 48, 50, 53, 54, 58, 62, 63, 75, 86, 96, 101, 102, 113, 117, 129, 162, 195,
    204, 233,
];

/// Documented sharp lower bounds on representation counts for two large
/// integers, as `(n, bound)`. Verifying them needs Hurwitz class numbers of
/// discriminants around 10^12 to 10^17, far beyond reduced-form
/// enumeration; they are reference data, not recomputed results.
pub const LARGE_BOUND_EXAMPLES: [(u64, u64); 2] =
    [(195_727_301_431, 270_390), (48_291_403_767_737_750, 90_542_761)];

/// `3^35 - 1`: the integer that universal sums through `[1,1,3,3]` are only
/// guaranteed to represent once (its successor is a pure power of 3).
pub const SINGLE_REPRESENTATION_EXAMPLE: u64 = 50_031_545_098_999_706;
