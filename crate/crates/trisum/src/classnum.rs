//! Hurwitz class numbers and the class-number expressions for the
//! representation counts of the escalation leaves.
//!
//! `H(N)` is the weighted number of reduced positive definite binary
//! quadratic forms `(a, b, c)` of discriminant `b^2 - 4ac = -N`, imprimitive
//! forms included, with weight 1/2 for forms proportional to `x^2 + y^2` and
//! 1/3 for forms proportional to `x^2 + xy + y^2`. Values are stored exactly
//! as the integer `6 H(N)`.
//!
//! The ternary and quaternary leaves of the escalation tree are alone in
//! their genus, so their counting functions are exact class-number
//! expressions (or inequalities obtained by specializing one variable);
//! [`identity_check`] evaluates both sides. The quaternary leaf `[1,1,3,3]`
//! instead satisfies a multiplicative formula in `n + 1`, implemented by
//! [`count_1133_formula`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forms::DiagonalSum;
use crate::lattice::{count_diagonal, CountConvention};
use crate::{Error, Result};

/// Largest `N` accepted by the reduced-form enumeration.
pub const HURWITZ_ENUMERATION_LIMIT: u64 = 10_000_000;

/// Default trial-division bound for factoring `n + 1`.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// `6 H(N)` stored exactly; `is_discriminant` is false when `-N` is not a
/// discriminant (`-N = 1 or 2 mod 4`), in which case `H(N) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hurwitz6 {
    pub n: u64,
    pub six_h: u64,
    pub is_discriminant: bool,
}

impl Hurwitz6 {
    /// `H(N)` as an exact rational.
    pub fn h(&self) -> BigRational {
        BigRational::new(BigInt::from(self.six_h), BigInt::from(6))
    }
}

/// `6 H(N)` by enumerating all reduced forms `(a, b, c)` with
/// `b^2 - 4ac = -N`, `|b| <= a <= c`, and `b >= 0` when `|b| = a` or
/// `a = c`.
pub fn hurwitz6(n: u64) -> Result<Hurwitz6> {
    if n == 0 {
        return Err(Error::TooSmall { what: "a Hurwitz class number", n, limit: 1 });
    }
    if n > HURWITZ_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "reduced-form enumeration",
            n,
            limit: HURWITZ_ENUMERATION_LIMIT,
        });
    }
    match n % 4 {
        1 | 2 => return Ok(Hurwitz6 { n, six_h: 0, is_discriminant: false }),
        _ => {}
    }
    let mut six_h = 0u64;
    // b^2 = -N mod 4 forces b even for N = 0 mod 4 and odd for N = 3 mod 4
    let mut b = if n % 4 == 0 { 0u64 } else { 1 };
    while 3 * b * b <= n {
        let m = (n + b * b) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                six_h += if b == 0 && a == c {
                    3 // proportional to x^2 + y^2, weight 1/2
                } else if b == a && a == c {
                    2 // proportional to x^2 + xy + y^2, weight 1/3
                } else if b == 0 || b == a || a == c {
                    6 // only b >= 0 is reduced
                } else {
                    12 // (a, b, c) and (a, -b, c)
                };
            }
            a += 1;
        }
        b += 2;
    }
    Ok(Hurwitz6 { n, six_h, is_discriminant: true })
}

// ---------------------------------------------------------------------------
// 3-adic profile
// ---------------------------------------------------------------------------

/// The 3-part of `n + 1`: `n + 1 = 3^v3 * cofactor` with `3` not dividing
/// the cofactor. The cofactor is the effective representation lower bound
/// `(n+1)^(1-a_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreeAdicProfile {
    pub n: u64,
    pub v3: u32,
    pub cofactor: u64,
}

pub fn three_adic_profile(n: u64) -> ThreeAdicProfile {
    let mut m = n.checked_add(1).expect("n + 1 overflows u64");
    let mut v3 = 0u32;
    while m % 3 == 0 {
        m /= 3;
        v3 += 1;
    }
    ThreeAdicProfile { n, v3, cofactor: m }
}

// ---------------------------------------------------------------------------
// factorization helpers
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the standard 12-base certificate).
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Full factorization of `m` into `(prime, exponent)` pairs, ascending, by
/// trial division up to `bound`; a prime cofactor beyond the bound is
/// certified by Miller-Rabin, anything else is an explicit error.
pub fn factor(m: u64, bound: u64) -> Result<Vec<(u64, u32)>> {
    let mut m = m;
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, e: u32, out: &mut Vec<(u64, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        push(p, e, &mut out);
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= bound && (d as u128) * (d as u128) <= m as u128 {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        push(d, e, &mut out);
        d += step;
        step = 6 - step;
    }
    if m > 1 {
        if is_prime_u64(m) {
            push(m, 1, &mut out);
        } else {
            return Err(Error::IncompleteFactorization { remaining: m });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// the multiplicative formula for [1,1,3,3]
// ---------------------------------------------------------------------------

fn formula_from_factors(factors: &[(u64, u32)]) -> BigUint {
    let mut acc = BigUint::one();
    for &(p, e) in factors {
        if p == 2 {
            acc <<= e;
        } else if p > 3 {
            // 1 + p + ... + p^e
            let mut geo = BigUint::zero();
            let mut term = BigUint::one();
            for _ in 0..=e {
                geo += &term;
                term *= BigUint::from(p);
            }
            acc *= geo;
        }
    }
    acc
}

/// Number of solutions of `T(x) + T(y) + 3 T(z) + 3 T(w) = n` over
/// nonnegative vectors, via the multiplicative formula
/// `2^e prod_(p>3) (p^(e_p + 1) - 1)/(p - 1)` for `n + 1 = 2^e 3^f prod p^(e_p)`.
pub fn count_1133_formula(n: u64, trial_bound: u64) -> Result<BigUint> {
    let m = n.checked_add(1).expect("n + 1 overflows u64");
    Ok(formula_from_factors(&factor(m, trial_bound)?))
}

/// Same formula with a caller-supplied factorization of `n + 1`; the
/// factorization is verified (primality and product) before use.
pub fn count_1133_formula_with(n: u64, factors: &[(u64, u32)]) -> Result<BigUint> {
    let m = n.checked_add(1).expect("n + 1 overflows u64");
    let mut prod: u128 = 1;
    for &(p, e) in factors {
        if !is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        for _ in 0..e {
            prod = prod.checked_mul(p as u128).ok_or(Error::BadFactorization {
                expected: m,
                got: u64::MAX,
            })?;
        }
    }
    if prod != m as u128 {
        return Err(Error::BadFactorization { expected: m, got: prod.try_into().unwrap_or(u64::MAX) });
    }
    Ok(formula_from_factors(factors))
}

/// The implemented effective part of the representation bound: every
/// universal diagonal sum whose escalation passes through `[1,1,3,3]`
/// represents `n` at least this often. Equals the exact `[1,1,3,3]` count
/// when `n + 1` can be factored, and the 3-adic cofactor `(n+1)/3^v3(n+1)`
/// (which needs no factorization) otherwise. The complementary
/// class-number term of the full theorem is ineffective and not computed.
pub fn rep_lower_bound(n: u64) -> BigUint {
    match count_1133_formula(n, DEFAULT_TRIAL_BOUND) {
        Ok(v) => v,
        Err(_) => BigUint::from(three_adic_profile(n).cofactor),
    }
}

// ---------------------------------------------------------------------------
// identity suite
// ---------------------------------------------------------------------------

/// The forms whose counting functions have class-number expressions.
///
/// `[1,1,3]` and `[1,3,6]` are not leaves of the escalation tree but carry
/// the identities the neighbouring leaves reduce to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Leaf {
    L111,
    L112,
    L114,
    L115,
    L122,
    L123,
    L124,
    L113,
    L1133,
    L1134,
    L1135,
    L1136,
    L1137,
    L1138,
    L136,
}

impl Leaf {
    pub const ALL: [Leaf; 15] = [
        Leaf::L111,
        Leaf::L112,
        Leaf::L114,
        Leaf::L115,
        Leaf::L122,
        Leaf::L123,
        Leaf::L124,
        Leaf::L113,
        Leaf::L1133,
        Leaf::L1134,
        Leaf::L1135,
        Leaf::L1136,
        Leaf::L1137,
        Leaf::L1138,
        Leaf::L136,
    ];

    pub fn coeffs(&self) -> &'static [u64] {
        match self {
            Leaf::L111 => &[1, 1, 1],
            Leaf::L112 => &[1, 1, 2],
            Leaf::L114 => &[1, 1, 4],
            Leaf::L115 => &[1, 1, 5],
            Leaf::L122 => &[1, 2, 2],
            Leaf::L123 => &[1, 2, 3],
            Leaf::L124 => &[1, 2, 4],
            Leaf::L113 => &[1, 1, 3],
            Leaf::L1133 => &[1, 1, 3, 3],
            Leaf::L1134 => &[1, 1, 3, 4],
            Leaf::L1135 => &[1, 1, 3, 5],
            Leaf::L1136 => &[1, 1, 3, 6],
            Leaf::L1137 => &[1, 1, 3, 7],
            Leaf::L1138 => &[1, 1, 3, 8],
            Leaf::L136 => &[1, 3, 6],
        }
    }

    pub fn name(&self) -> String {
        self.coeffs().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl std::str::FromStr for Leaf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().trim_start_matches('[').trim_end_matches(']');
        Leaf::ALL
            .into_iter()
            .find(|leaf| leaf.name() == cleaned)
            .ok_or_else(|| Error::UnknownLeaf(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Geq,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Geq => "geq",
        }
    }
}

/// Result of evaluating one identity at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityOutcome {
    Checked { lhs: u64, rhs: BigRational, relation: Relation, holds: bool },
    /// The identity's side condition excludes this `n`; nothing is asserted.
    SideCondition { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub leaf: Leaf,
    pub n: u64,
    pub outcome: IdentityOutcome,
}

/// `num/den * H(n_for_h)` as an exact rational.
fn class_expression(n_for_h: u64, num: u64, den: u64) -> Result<BigRational> {
    let h = hurwitz6(n_for_h)?;
    Ok(BigRational::new(
        BigInt::from(num) * BigInt::from(h.six_h),
        BigInt::from(den) * BigInt::from(6u32),
    ))
}

/// Evaluate the class-number identity of `leaf` at `n`: the left side is the
/// exact nonnegative-solutions count, the right side the class-number
/// expression, compared under the identity's relation. Side conditions are
/// reported, never silently skipped.
pub fn identity_check(leaf: Leaf, n: u64) -> Result<IdentityReport> {
    let side = |reason: String| {
        Ok(IdentityReport { leaf, n, outcome: IdentityOutcome::SideCondition { reason } })
    };

    let (rhs, relation) = match leaf {
        Leaf::L111 => (class_expression(8 * n + 3, 3, 1)?, Relation::Eq),
        Leaf::L112 => (class_expression(8 * (2 * n + 1), 1, 1)?, Relation::Eq),
        Leaf::L114 => (class_expression(4 * (8 * n + 6), 1, 2)?, Relation::Eq),
        Leaf::L115 => {
            if (8 * n + 7) % 5 == 0 {
                return side(format!("5 divides 8n+7 = {}", 8 * n + 7));
            }
            (class_expression(5 * (8 * n + 7), 1, 2)?, Relation::Eq)
        }
        Leaf::L122 => (class_expression(4 * (8 * n + 5), 1, 2)?, Relation::Eq),
        Leaf::L123 => (class_expression(12 * (4 * n + 3), 1, 4)?, Relation::Geq),
        Leaf::L124 => (class_expression(8 * (8 * n + 7), 1, 4)?, Relation::Eq),
        Leaf::L113 => {
            if (8 * n + 5) % 3 == 0 {
                return side(format!("3 divides 8n+5 = {}", 8 * n + 5));
            }
            (class_expression(3 * (8 * n + 5), 1, 2)?, Relation::Eq)
        }
        Leaf::L1133 => {
            let v = count_1133_formula(n, DEFAULT_TRIAL_BOUND)?;
            (BigRational::from(BigInt::from(v)), Relation::Eq)
        }
        Leaf::L1134 | Leaf::L1135 | Leaf::L1137 | Leaf::L1138 => {
            let k = *leaf.coeffs().last().unwrap();
            if n < k {
                return side(format!("n < {k}: the specialized variable has nothing to carry"));
            }
            if (8 * (n - k) + 5) % 3 == 0 {
                return side(format!("3 divides 8(n-{k})+5 = {}", 8 * (n - k) + 5));
            }
            (class_expression(3 * (8 * (n - k) + 5), 1, 2)?, Relation::Geq)
        }
        Leaf::L1136 => {
            if n % 3 != 2 {
                return side("n = 2 mod 3 required".to_string());
            }
            (class_expression(4 * (4 * (n - 1) + 5), 1, 4)?, Relation::Geq)
        }
        Leaf::L136 => {
            if n % 3 == 2 {
                return side("n != 2 mod 3 required".to_string());
            }
            (class_expression(4 * (4 * n + 5), 1, 4)?, Relation::Geq)
        }
    };

    let f = DiagonalSum::new(leaf.coeffs().to_vec()).expect("leaf coefficients are positive");
    let lhs = count_diagonal(&f, n, CountConvention::Nonneg)?;
    let lhs_rat = BigRational::from(BigInt::from(lhs));
    let holds = match relation {
        Relation::Eq => lhs_rat == rhs,
        Relation::Geq => lhs_rat >= rhs,
    };
    Ok(IdentityReport { leaf, n, outcome: IdentityOutcome::Checked { lhs, rhs, relation, holds } })
}
