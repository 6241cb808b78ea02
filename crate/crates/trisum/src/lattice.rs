//! Exact counting and minimization over integer lattice points.
//!
//! Representation numbers of diagonal sums are computed by convolving
//! per-variable value lists; cross-term sums are enumerated over their
//! sublevel sets with Fincke-Pohst style box bounds derived from an exact
//! rational LDL decomposition of the Gram matrix. No floating point is used
//! anywhere: interval endpoints come from integer square roots of scaled
//! rationals, so counts are exact by construction.
//!
//! All operations are pure; results are independent of call order and safe
//! for concurrent use.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::forms::{tri, CrossConfig, CrossSum, DiagonalSum, OddFormCorrespondence};
use crate::{Error, Result};

/// Which integer vectors are counted.
///
/// For diagonal triangular sums the count over all of `Z^k` is `2^k` times
/// the count over nonnegative vectors (pair `x` with `-x-1` in each
/// coordinate). `Odd` applies to quadratic forms only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountConvention {
    /// All `x_i >= 0`.
    Nonneg,
    /// All `x_i` in `Z`.
    All,
    /// All `x_i` odd (quadratic forms).
    Odd,
}

impl CountConvention {
    pub fn name(&self) -> &'static str {
        match self {
            CountConvention::Nonneg => "nonneg",
            CountConvention::All => "all",
            CountConvention::Odd => "odd",
        }
    }
}

// ---------------------------------------------------------------------------
// diagonal sums
// ---------------------------------------------------------------------------

/// Coefficients `a(0..=precision)` with `a(n)` the number of solutions of
/// `sum b_i T(x_i) = n` under the given convention.
pub fn series_diagonal(f: &DiagonalSum, conv: CountConvention, precision: u64) -> Result<Vec<u64>> {
    let mult = match conv {
        CountConvention::Nonneg => 1u64,
        CountConvention::All => 2u64,
        CountConvention::Odd => return Err(Error::InvalidConvention { convention: "odd" }),
    };
    let p = precision as usize;
    let mut acc = vec![0u64; p + 1];
    acc[0] = 1;
    for &b in f.coeffs() {
        let mut values = Vec::new();
        let mut x = 0u64;
        loop {
            let v = b as u128 * tri(x as i64);
            if v > precision as u128 {
                break;
            }
            values.push(v as usize);
            x += 1;
        }
        let mut next = vec![0u64; p + 1];
        for &v in &values {
            for n in v..=p {
                let add = acc[n - v].checked_mul(mult).expect("count overflow");
                next[n] = next[n].checked_add(add).expect("count overflow");
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Number of solutions of `sum b_i T(x_i) = n` under `conv`.
pub fn count_diagonal(f: &DiagonalSum, n: u64, conv: CountConvention) -> Result<u64> {
    Ok(series_diagonal(f, conv, n)?[n as usize])
}

// ---------------------------------------------------------------------------
// diagonal quadratic forms (all-integer and odd conventions)
// ---------------------------------------------------------------------------

/// Coefficients `r(0..=precision)` of the theta series of the diagonal form
/// `sum b_i X_i^2`, over all integer vectors (`All`) or all-odd vectors
/// (`Odd`).
pub fn series_quadratic(b: &[u64], conv: CountConvention, precision: u64) -> Result<Vec<u64>> {
    let p = precision as usize;
    let mut acc = vec![0u64; p + 1];
    acc[0] = 1;
    for &bi in b {
        let mut values = Vec::new();
        match conv {
            CountConvention::All => {
                values.push((0usize, 1u64));
                let mut x = 1u64;
                while bi as u128 * (x as u128 * x as u128) <= precision as u128 {
                    values.push(((bi * x * x) as usize, 2));
                    x += 1;
                }
            }
            CountConvention::Odd => {
                let mut x = 1u64;
                while bi as u128 * (x as u128 * x as u128) <= precision as u128 {
                    values.push(((bi * x * x) as usize, 2));
                    x += 2;
                }
            }
            CountConvention::Nonneg => {
                return Err(Error::InvalidConvention { convention: "nonneg" })
            }
        }
        let mut next = vec![0u64; p + 1];
        for &(v, mult) in &values {
            for n in v..=p {
                let add = acc[n - v].checked_mul(mult).expect("count overflow");
                next[n] = next[n].checked_add(add).expect("count overflow");
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `r_o(m)`: representations of `m` by the odd-form correspondence with all
/// variables odd.
pub fn count_odd(form: &OddFormCorrespondence, m: u64) -> u64 {
    series_quadratic(form.coeffs(), CountConvention::Odd, m)
        .expect("odd is valid for quadratic forms")[m as usize]
}

// ---------------------------------------------------------------------------
// exact Fincke-Pohst enumeration for cross-term sums
// ---------------------------------------------------------------------------

/// Sum-of-squares data for one positive definite quadratic polynomial
/// `f~(x) = 1/2 x^T A x + L^T x + c0`:
/// `f~(x) = vmin + sum_i d_i (x_i - center_i(x_{>i}))^2`.
struct FpForm {
    k: usize,
    d: Vec<BigRational>,
    /// `u[i][j - i - 1]` is the coefficient of `y_j` in the `i`-th square.
    u: Vec<Vec<BigRational>>,
    xstar: Vec<BigRational>,
    /// Real minimum of `f~`.
    vmin: BigRational,
}

fn big(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

impl FpForm {
    /// Ignores the stored shift: works on `f~`.
    fn build(f: &CrossSum) -> Self {
        let k = f.dim();
        let two = BigRational::from(BigInt::from(2));

        // m = A/2, the matrix of the quadratic part of f~
        let mut m: Vec<Vec<BigRational>> = f
            .gram()
            .iter()
            .map(|row| row.iter().map(|v| BigRational::from(v.clone()) / &two).collect())
            .collect();

        // linear part L_i = b_i/2 + sum_{j != i} c_ij, constant sum_{c<0} c
        let mut l: Vec<BigRational> = (0..k)
            .map(|i| {
                let mut v = BigRational::new(BigInt::from(f.coeffs()[i]), BigInt::from(2));
                for j in 0..k {
                    if j != i {
                        v += big(f.config().get(i, j));
                    }
                }
                v
            })
            .collect();
        let mut c0 = BigRational::zero();
        for (_, c) in f.config().entries() {
            if c < 0 {
                c0 += big(c);
            }
        }

        // solve A x* = -L by Gaussian elimination on a copy of m (scaled by 2)
        let xstar = {
            let mut a: Vec<Vec<BigRational>> = m
                .iter()
                .map(|row| row.iter().map(|v| v * &two).collect())
                .collect();
            let mut rhs: Vec<BigRational> = l.iter().map(|v| -v).collect();
            for i in 0..k {
                let piv = a[i][i].clone();
                for r in (i + 1)..k {
                    let factor = &a[r][i] / &piv;
                    for c in i..k {
                        let sub = &factor * &a[i][c];
                        a[r][c] -= sub;
                    }
                    let sub = &factor * &rhs[i];
                    rhs[r] -= sub;
                }
            }
            let mut x = vec![BigRational::zero(); k];
            for i in (0..k).rev() {
                let mut v = rhs[i].clone();
                for j in (i + 1)..k {
                    v -= &a[i][j] * &x[j];
                }
                x[i] = v / &a[i][i];
            }
            x
        };

        // vmin = c0 + 1/2 L^T x*
        let mut vmin = c0;
        for i in 0..k {
            vmin += &l[i] * &xstar[i] / &two;
        }
        l.clear();

        // sum-of-squares decomposition of m
        let mut d = Vec::with_capacity(k);
        let mut u = vec![Vec::new(); k];
        for i in 0..k {
            let piv = m[i][i].clone();
            debug_assert!(piv.is_positive());
            for j in (i + 1)..k {
                u[i].push(&m[i][j] / &piv);
            }
            for r in (i + 1)..k {
                for c in (i + 1)..k {
                    let sub = &m[i][r] * &m[i][c] / &piv;
                    m[r][c] -= sub;
                }
            }
            d.push(piv);
        }

        FpForm { k, d, u, xstar, vmin }
    }

    /// Visit every integer `x` with `f~(x) <= bound`, passing the exact
    /// value. Deterministic order: coordinates ascend, last index outermost.
    fn for_each_leq(&self, bound: &BigInt, visit: &mut dyn FnMut(&[i64], &BigInt)) {
        let budget = BigRational::from(bound.clone()) - &self.vmin;
        if budget.is_negative() {
            return;
        }
        if self.k == 0 {
            let v = self.vmin.to_integer();
            visit(&[], &v);
            return;
        }
        let mut x = vec![0i64; self.k];
        self.descend(self.k - 1, &BigRational::zero(), &budget, &mut x, visit);
    }

    fn descend(
        &self,
        level: usize,
        used: &BigRational,
        budget: &BigRational,
        x: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64], &BigInt),
    ) {
        // center of the allowed interval for x_level given the fixed tail
        let mut center = self.xstar[level].clone();
        for (idx, j) in ((level + 1)..self.k).enumerate() {
            let yj = big(x[j]) - &self.xstar[j];
            center -= &self.u[level][idx] * yj;
        }
        let rho = (budget - used) / &self.d[level];
        if rho.is_negative() {
            return;
        }
        let (lo, hi) = sqrt_interval(&center, &rho);
        let mut xi = lo;
        while xi <= hi {
            let xi64 = xi.to_i64().expect("lattice coordinate exceeds i64");
            x[level] = xi64;
            let dev = BigRational::from(xi.clone()) - &center;
            let term = &self.d[level] * (&dev * &dev);
            let new_used = used + term;
            if level == 0 {
                let value = &self.vmin + &new_used;
                debug_assert!(value.is_integer());
                visit(x, &value.to_integer());
            } else {
                self.descend(level - 1, &new_used, budget, x, visit);
            }
            xi += 1;
        }
    }

    /// Minimize by descent with a budget that shrinks to the best value
    /// found so far; points tying the running best are collected (capped).
    fn minimize_shrinking(&self, init: BigInt) -> (BigInt, Vec<Vec<i64>>, bool) {
        let mut best = BigRational::from(init.clone());
        let mut points: Vec<Vec<i64>> = Vec::new();
        let mut cap_hit = false;
        if self.k == 0 {
            return (BigInt::from(0), vec![Vec::new()], false);
        }
        let mut x = vec![0i64; self.k];
        self.descend_min(self.k - 1, &BigRational::zero(), &mut best, &mut points, &mut cap_hit, &mut x);
        debug_assert!(best.is_integer());
        (best.to_integer(), points, cap_hit)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend_min(
        &self,
        level: usize,
        used: &BigRational,
        best: &mut BigRational,
        points: &mut Vec<Vec<i64>>,
        cap_hit: &mut bool,
        x: &mut Vec<i64>,
    ) {
        let mut center = self.xstar[level].clone();
        for (idx, j) in ((level + 1)..self.k).enumerate() {
            let yj = big(x[j]) - &self.xstar[j];
            center -= &self.u[level][idx] * yj;
        }
        // interval from the budget at entry; shrinkage below is re-checked
        // per point, so late improvements only skip work, never points
        let rho = ((&*best - &self.vmin) - used) / &self.d[level];
        if rho.is_negative() {
            return;
        }
        let (lo, hi) = sqrt_interval(&center, &rho);
        let mut xi = lo;
        while xi <= hi {
            let xi64 = xi.to_i64().expect("lattice coordinate exceeds i64");
            x[level] = xi64;
            let dev = BigRational::from(xi.clone()) - &center;
            let new_used = used + &self.d[level] * (&dev * &dev);
            let floor = &self.vmin + &new_used;
            if floor <= *best {
                if level == 0 {
                    if floor < *best {
                        *best = floor;
                        points.clear();
                        *cap_hit = false;
                        points.push(x.clone());
                    } else if points.len() < MINIMIZER_CAP {
                        points.push(x.clone());
                    } else {
                        *cap_hit = true;
                    }
                } else {
                    self.descend_min(level - 1, &new_used, best, points, cap_hit, x);
                }
            }
            xi += 1;
        }
    }
}

/// Integer interval `[ceil(c - sqrt(rho)), floor(c + sqrt(rho))]`, exact.
fn sqrt_interval(c: &BigRational, rho: &BigRational) -> (BigInt, BigInt) {
    debug_assert!(!rho.is_negative());
    let p = rho.numer().clone();
    let q = rho.denom().clone();
    let s = (&p * &q).sqrt();

    let floor_c_plus_sqrt = |c: &BigRational| -> BigInt {
        let f1 = (c + BigRational::new(s.clone(), q.clone())).floor().to_integer();
        let f2 = (c + BigRational::new(&s + 1i32, q.clone())).floor().to_integer();
        if f1 == f2 {
            f1
        } else {
            let dev = BigRational::from(f2.clone()) - c;
            if !dev.is_positive() || &dev * &dev <= *rho {
                f2
            } else {
                f1
            }
        }
    };

    let hi = floor_c_plus_sqrt(c);
    let lo = -floor_c_plus_sqrt(&-c);
    (lo, hi)
}

// ---------------------------------------------------------------------------
// connected components
// ---------------------------------------------------------------------------

/// Indices of each connected component of the configuration graph, ascending.
fn components(config: &CrossConfig) -> Vec<Vec<usize>> {
    let k = config.dim();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if j != i && !seen[j] && config.get(i, j) != 0 {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// The sub-sum of `f~` on one component (shift 0).
fn component_form(f: &CrossSum, comp: &[usize]) -> CrossSum {
    let b: Vec<u64> = comp.iter().map(|&i| f.coeffs()[i]).collect();
    let mut entries = Vec::new();
    for (a, &i) in comp.iter().enumerate() {
        for (bpos, &j) in comp.iter().enumerate().skip(a + 1) {
            let c = f.config().get(i, j);
            if c != 0 {
                entries.push((a, bpos, c));
            }
        }
    }
    let cfg = CrossConfig::new(comp.len(), &entries).expect("component config is valid");
    CrossSum::new(b, cfg, 0).expect("component of a positive definite form is positive definite")
}

// ---------------------------------------------------------------------------
// minimization and normalization
// ---------------------------------------------------------------------------

/// Witness cap for [`MinimizationResult::minimizers`].
pub const MINIMIZER_CAP: usize = 64;

/// Exact global minimum of a cross-term sum with a capped list of
/// minimizing vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizationResult {
    pub min_value: i64,
    /// Minimizers in deterministic order, at most [`MINIMIZER_CAP`].
    pub minimizers: Vec<Vec<i64>>,
    pub cap_hit: bool,
}

struct ComponentMin {
    min: i64,
    points: Vec<Vec<i64>>,
    cap_hit: bool,
}

/// Minimize `f~` on one component. The search radius starts from the best
/// corner value (all coordinates in {0,-1}), which already bounds the
/// minimum from above since the diagonal terms vanish there, and shrinks
/// as the descent finds smaller values.
fn minimize_component(f: &CrossSum) -> ComponentMin {
    let k = f.dim();
    let mut corner_best = i64::MAX;
    for mask in 0u64..(1u64 << k) {
        let x: Vec<i64> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 0 }).collect();
        let v = f.config().corner_value(&x).expect("corner dims match");
        corner_best = corner_best.min(v);
    }

    let fp = FpForm::build(f);
    let (best, mut points, cap_hit) = fp.minimize_shrinking(BigInt::from(corner_best));
    points.sort_unstable();
    ComponentMin { min: best.to_i64().expect("minimum fits i64"), points, cap_hit }
}

/// Exact global integer minimum of `f~` (plus the stored shift unless
/// `ignore_shift`), with minimizing vectors capped at [`MINIMIZER_CAP`].
pub fn minimize(f: &CrossSum, ignore_shift: bool) -> MinimizationResult {
    let comps = components(f.config());
    let mins: Vec<ComponentMin> = comps.iter().map(|c| minimize_component(&component_form(f, c))).collect();

    let mut min_value: i64 = mins.iter().map(|m| m.min).sum();
    if !ignore_shift {
        min_value += f.shift();
    }

    // Cartesian product of the per-component minimizers, capped.
    let mut minimizers: Vec<Vec<i64>> = vec![vec![0i64; f.dim()]];
    let mut cap_hit = mins.iter().any(|m| m.cap_hit);
    for (comp, m) in comps.iter().zip(&mins) {
        let mut next = Vec::new();
        'outer: for base in &minimizers {
            for point in &m.points {
                if next.len() >= MINIMIZER_CAP {
                    cap_hit = true;
                    break 'outer;
                }
                let mut v = base.clone();
                for (&idx, &coord) in comp.iter().zip(point) {
                    v[idx] = coord;
                }
                next.push(v);
            }
        }
        minimizers = next;
    }
    minimizers.sort_unstable();

    MinimizationResult { min_value, minimizers, cap_hit }
}

/// A cross sum together with the normalization constant that was added.
#[derive(Debug, Clone)]
pub struct NormalizedForm {
    pub form: CrossSum,
    /// `m~ = -min f~`, the distance between `f~` and its normalization.
    pub m_tilde: u64,
}

/// Replace the shift by `-min f~`, so the resulting polynomial has minimum
/// exactly 0.
pub fn normalize(f: &CrossSum) -> NormalizedForm {
    let min = minimize(f, true).min_value;
    debug_assert!(min <= 0, "f~ vanishes on the corner lattice");
    NormalizedForm { form: f.with_shift(-min), m_tilde: (-min) as u64 }
}

/// True iff the stored shift makes the minimum exactly 0.
pub fn is_normalized(f: &CrossSum) -> bool {
    minimize(f, false).min_value == 0
}

// ---------------------------------------------------------------------------
// counting for cross-term sums
// ---------------------------------------------------------------------------

/// Value histogram of `f~` on one component up to `bound`: `(offset, counts)`
/// with `counts[i]` the number of points of value `offset + i`.
fn component_histogram(f: &CrossSum, bound: i64) -> (i64, Vec<u64>) {
    let min = minimize(f, true).min_value;
    if bound < min {
        return (min, Vec::new());
    }
    let len = (bound - min + 1) as usize;
    let mut counts = vec![0u64; len];
    let fp = FpForm::build(f);
    fp.for_each_leq(&BigInt::from(bound), &mut |_, v| {
        let idx = (v.to_i64().expect("value fits i64") - min) as usize;
        counts[idx] = counts[idx].checked_add(1).expect("count overflow");
    });
    (min, counts)
}

/// Coefficients `a(0..=precision)` with `a(n) = #{x in Z^k : f(x) = n}`,
/// where `f = f~ + shift`. Errors if `f` takes negative values.
///
/// The configuration graph is split into connected components; each
/// component is enumerated once over its sublevel set and the histograms
/// are convolved, so direct sums cost the sum, not the product, of their
/// parts.
pub fn series_cross(f: &CrossSum, precision: u64) -> Result<Vec<u64>> {
    let comps = components(f.config());
    let comp_forms: Vec<CrossSum> = comps.iter().map(|c| component_form(f, c)).collect();
    let comp_mins: Vec<i64> = comp_forms.iter().map(|g| minimize(g, true).min_value).collect();
    let total_min: i64 = comp_mins.iter().sum::<i64>() + f.shift();
    if total_min < 0 {
        return Err(Error::NegativeValues { min: total_min });
    }

    let p = precision as i64;
    // start with the histogram of the empty product: value 0 once
    let mut offset = f.shift();
    let mut counts: Vec<u64> = vec![1];
    for (g, &gmin) in comp_forms.iter().zip(&comp_mins) {
        let others: i64 = comp_mins.iter().sum::<i64>() - gmin;
        let budget = p - f.shift() - others;
        let (goff, gcounts) = component_histogram(g, budget);
        // convolve
        let new_offset = offset + goff;
        let new_len = ((p - new_offset + 1).max(0)) as usize;
        let mut next = vec![0u64; new_len];
        for (i, &a) in counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in gcounts.iter().enumerate() {
                let idx = i + j;
                if idx < new_len {
                    next[idx] = next[idx].checked_add(a.checked_mul(b).expect("count overflow")).expect("count overflow");
                }
            }
        }
        offset = new_offset;
        counts = next;
    }

    let mut out = vec![0u64; precision as usize + 1];
    for (i, &a) in counts.iter().enumerate() {
        let n = offset + i as i64;
        if (0..=p).contains(&n) {
            out[n as usize] = a;
        }
    }
    Ok(out)
}

/// `#{x : f(x) = n}` for a normalized cross sum (minimum exactly 0).
pub fn count_cross(f: &CrossSum, n: u64) -> Result<u64> {
    let min = minimize(f, false).min_value;
    if min != 0 {
        return Err(Error::NotNormalized { min });
    }
    Ok(series_cross(f, n)?[n as usize])
}

// ---------------------------------------------------------------------------
// norm estimate over the odd-preserving class
// ---------------------------------------------------------------------------

/// An upper bound on the norm `m = min |m~|` over the odd-preserving
/// equivalence class. Always flagged `upper_bound_only`: no exact algorithm
/// for the infinite class is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormEstimate {
    pub value: u64,
    pub upper_bound_only: bool,
    /// Number of equivalent forms whose `m~` was evaluated.
    pub forms_examined: usize,
}

/// Minimum of `|m~|` over equivalent forms reachable within `depth`.
///
/// Depth 0 is the orbit under signed permutations of variables; those leave
/// the value set of `f~` unchanged (permutations relabel, and sign flips are
/// exactly what the negative-entry convention makes invisible), so the
/// depth-0 value is `m~` itself. Depth `d >= 2` additionally explores
/// unimodular substitutions `x_j -> x_j + t x_i` with `t` even, `|t| <= d`
/// (these keep all row sums odd, hence map odd vectors to odd vectors),
/// composed while the transform entries stay within `d`, keeping only
/// results that stay in the even-cross-term class.
pub fn norm_estimate(f: &CrossSum, depth: u64) -> NormEstimate {
    let base = minimize(f, true).min_value;
    let mut value = base.unsigned_abs();
    let mut examined = 1usize;
    if depth < 2 {
        return NormEstimate { value, upper_bound_only: true, forms_examined: examined };
    }

    let k = f.dim();
    let d_bound = BigInt::from(depth);
    let mut seen = std::collections::BTreeSet::new();
    let gram_key = |g: &Vec<Vec<BigInt>>| -> Vec<BigInt> { g.iter().flatten().cloned().collect() };

    let identity: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let gram0 = f.gram();
    seen.insert(gram_key(&gram0));
    let mut frontier = vec![(identity, gram0)];
    const VISIT_CAP: usize = 512;

    while let Some((u_mat, _)) = frontier.pop() {
        if seen.len() >= VISIT_CAP {
            break;
        }
        let mut ts = Vec::new();
        let mut t = 2i64;
        while BigInt::from(t) <= d_bound {
            ts.push(t);
            ts.push(-t);
            t += 2;
        }
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for &t in &ts {
                    // column operation: x_j -> x_j + t x_i, i.e. U' = U * (I + t E_ij)
                    let mut u_new = u_mat.clone();
                    for r in 0..k {
                        let add = &u_mat[r][i] * BigInt::from(t);
                        u_new[r][j] += add;
                    }
                    if u_new.iter().flatten().any(|e| e.magnitude() > d_bound.magnitude()) {
                        continue;
                    }
                    // gram of the substituted form: U'^T A U'
                    let a = f.gram();
                    let mut au = vec![vec![BigInt::zero(); k]; k];
                    for r in 0..k {
                        for c in 0..k {
                            let mut s = BigInt::zero();
                            for l in 0..k {
                                s += &a[r][l] * &u_new[l][c];
                            }
                            au[r][c] = s;
                        }
                    }
                    let mut gram = vec![vec![BigInt::zero(); k]; k];
                    for r in 0..k {
                        for c in 0..k {
                            let mut s = BigInt::zero();
                            for l in 0..k {
                                s += &u_new[l][r] * &au[l][c];
                            }
                            gram[r][c] = s;
                        }
                    }
                    if !seen.insert(gram_key(&gram)) {
                        continue;
                    }
                    // must stay in the class: even off-diagonal entries
                    let in_class = (0..k).all(|r| {
                        (0..k).all(|c| r == c || (&gram[r][c] % 2i32).is_zero())
                    });
                    if !in_class {
                        continue;
                    }
                    let b: Option<Vec<u64>> = (0..k).map(|r| gram[r][r].to_u64()).collect();
                    let Some(b) = b else { continue };
                    let mut entries = Vec::new();
                    let mut ok = true;
                    for r in 0..k {
                        for c in (r + 1)..k {
                            match (&gram[r][c] / 2i32).to_i64() {
                                Some(v) if v != 0 => entries.push((r, c, v)),
                                Some(_) => {}
                                None => ok = false,
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let Ok(cfg) = CrossConfig::new(k, &entries) else { continue };
                    let Ok(g) = CrossSum::new(b, cfg, 0) else { continue };
                    let m = minimize(&g, true).min_value.unsigned_abs();
                    examined += 1;
                    if m < value {
                        value = m;
                    }
                    frontier.push((u_new, gram));
                }
            }
        }
    }

    NormEstimate { value, upper_bound_only: true, forms_examined: examined }
}
