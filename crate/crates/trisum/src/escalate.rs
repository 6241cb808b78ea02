//! Truants, escalator trees, and the decision procedure for universality
//! of diagonal triangular sums.
//!
//! A diagonal sum represents every nonnegative integer if and only if it
//! represents 1, 2, 4, 5 and 8, so universality is decidable by five finite
//! searches ([`is_universal_diagonal`]). Escalation grows a sum one
//! coefficient at a time: a node whose smallest unrepresented target (its
//! *truant*) is `t` gets children `b_k` in `[b_(k-1), t]` — a larger
//! coefficient could never help represent `t`, since a new variable
//! contributes at least `b_k` when it contributes at all.
//!
//! Cross-term blocks escalate too, but with infinite breadth (any diagonal
//! coefficients); [`norm_one_smoke_search`] explores the norm-1 fragment of
//! that tree under explicit caps.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::forms::{tri, CrossConfig, CrossSum, DiagonalSum};
use crate::lattice::{self, minimize, CountConvention};
use crate::{Error, Result};

/// The five targets whose representability decides universality.
pub const REQUIRED_TARGETS: [u64; 5] = [1, 2, 4, 5, 8];

// ---------------------------------------------------------------------------
// representability bitsets
// ---------------------------------------------------------------------------

fn bitset(cap: u64) -> Vec<u64> {
    vec![0u64; cap as usize / 64 + 1]
}

fn bit(bits: &[u64], i: u64) -> bool {
    bits[i as usize / 64] >> (i % 64) & 1 == 1
}

/// `dst |= src << shift` over bit arrays of equal length.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (words, bits) = (shift / 64, shift % 64);
    for w in (words..dst.len()).rev() {
        let mut v = src[w - words] << bits;
        if bits > 0 && w > words {
            v |= src[w - words - 1] >> (64 - bits);
        }
        dst[w] |= v;
    }
}

/// Bitset of the values `<= cap` represented by `f`.
fn representable(f: &DiagonalSum, cap: u64) -> Vec<u64> {
    let mut cur = bitset(cap);
    cur[0] = 1;
    for &b in f.coeffs() {
        let mut next = bitset(cap);
        let mut x = 0i64;
        while b as u128 * tri(x) <= cap as u128 {
            or_shifted(&mut next, &cur, (b as u128 * tri(x)) as usize);
            x += 1;
        }
        cur = next;
    }
    cur
}

/// Exact decision: does `f` take the value `n` at an integer point?
pub fn represents(f: &DiagonalSum, n: u64) -> bool {
    bit(&representable(f, n), n)
}

// ---------------------------------------------------------------------------
// truants and the universality decision
// ---------------------------------------------------------------------------

/// The set of integers a form is asked to represent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSet {
    /// Every nonnegative integer.
    AllNonneg,
    /// An explicit finite set.
    Explicit(Vec<u64>),
}

impl TargetSet {
    pub fn explicit(mut targets: Vec<u64>) -> Self {
        targets.sort_unstable();
        targets.dedup();
        TargetSet::Explicit(targets)
    }

    fn first_missed(&self, repr: &[u64], cap: u64) -> Option<u64> {
        match self {
            TargetSet::AllNonneg => (0..=cap).find(|&z| !bit(repr, z)),
            TargetSet::Explicit(zs) => {
                zs.iter().copied().take_while(|&z| z <= cap).find(|&z| !bit(repr, z))
            }
        }
    }
}

/// Smallest target `<= cap` not represented by `f`. `None` means every
/// target up to the cap is represented — for [`TargetSet::AllNonneg`] that
/// is *not* a universality proof; use [`is_universal_diagonal`].
pub fn truant(f: &DiagonalSum, targets: &TargetSet, cap: u64) -> Option<u64> {
    targets.first_missed(&representable(f, cap), cap)
}

/// True iff `f` represents 1, 2, 4, 5 and 8; by the theorem of eight this
/// decides universality exactly.
pub fn is_universal_diagonal(f: &DiagonalSum) -> bool {
    first_missed_required_target(f).is_none()
}

/// The first of 1, 2, 4, 5, 8 that `f` misses, if any — the concrete
/// witness behind a negative universality decision.
pub fn first_missed_required_target(f: &DiagonalSum) -> Option<u64> {
    let repr = representable(f, 8);
    REQUIRED_TARGETS.into_iter().find(|&t| !bit(&repr, t))
}

// ---------------------------------------------------------------------------
// escalator trees
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    /// Represents every target (certified by the theorem of eight for
    /// [`TargetSet::AllNonneg`], by exhaustion for explicit sets).
    LeafUniversal,
    Internal,
    /// The depth cap stopped expansion; children are unexplored.
    TruncatedAtCap,
}

/// One node of an escalator tree; serializes as
/// `{path, truant, status, children}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscalatorNode {
    pub path: DiagonalSum,
    pub truant: Option<u64>,
    pub status: NodeStatus,
    pub children: Vec<EscalatorNode>,
}

impl EscalatorNode {
    /// All truants in the tree, ascending.
    pub fn truants(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        self.collect_truants(&mut out);
        out
    }

    fn collect_truants(&self, out: &mut BTreeSet<u64>) {
        if let Some(t) = self.truant {
            out.insert(t);
        }
        for c in &self.children {
            c.collect_truants(out);
        }
    }

    /// Paths of all universal leaves, sorted.
    pub fn leaves(&self) -> Vec<DiagonalSum> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<DiagonalSum>) {
        if self.status == NodeStatus::LeafUniversal {
            out.push(self.path.clone());
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }
}

/// Build the full escalator tree over `targets`.
///
/// Children of a node with truant `t` extend the path by one coefficient
/// in `[b_(k-1), t]`. `depth_cap` bounds the number of coefficients; nodes
/// stopped by it are marked, never silently dropped. With `threads > 1` the
/// root's child subtrees are built concurrently; the tree is identical to a
/// sequential run.
pub fn escalator_tree(
    targets: &TargetSet,
    truant_cap: u64,
    depth_cap: usize,
    threads: usize,
) -> Result<EscalatorNode> {
    if depth_cap == 0 || truant_cap == 0 {
        return Err(Error::InvalidParameter("caps must be positive".into()));
    }
    match targets {
        TargetSet::AllNonneg => {
            if truant_cap < 8 {
                return Err(Error::InvalidParameter(
                    "truant_cap below 8 cannot certify leaves over all nonnegative integers".into(),
                ));
            }
        }
        TargetSet::Explicit(zs) => {
            if zs.iter().any(|&z| z > truant_cap) {
                return Err(Error::InvalidParameter(
                    "explicit targets beyond truant_cap are undecidable".into(),
                ));
            }
        }
    }
    Ok(build_node(DiagonalSum::empty(), targets, truant_cap, depth_cap, threads))
}

fn node_truant(path: &DiagonalSum, targets: &TargetSet, truant_cap: u64) -> Option<u64> {
    match targets {
        // universality is decidable, and a non-universal sum misses one of
        // the five targets, so its truant is at most 8
        TargetSet::AllNonneg => {
            if is_universal_diagonal(path) {
                None
            } else {
                let t = truant(path, targets, truant_cap.min(8));
                debug_assert!(t.is_some());
                t
            }
        }
        TargetSet::Explicit(_) => truant(path, targets, truant_cap),
    }
}

fn build_node(
    path: DiagonalSum,
    targets: &TargetSet,
    truant_cap: u64,
    depth_cap: usize,
    threads: usize,
) -> EscalatorNode {
    let Some(t) = node_truant(&path, targets, truant_cap) else {
        return EscalatorNode {
            path,
            truant: None,
            status: NodeStatus::LeafUniversal,
            children: Vec::new(),
        };
    };
    if path.dim() >= depth_cap {
        return EscalatorNode {
            path,
            truant: Some(t),
            status: NodeStatus::TruncatedAtCap,
            children: Vec::new(),
        };
    }
    let lo = path.coeffs().last().copied().unwrap_or(1);
    let coeffs: Vec<u64> = (lo..=t).collect();
    // parallelize the first few levels, where the fan-out lives; children
    // are joined in coefficient order, so the tree is identical either way
    let parallel = threads > 1 && coeffs.len() > 1 && path.dim() < 3;
    let children: Vec<EscalatorNode> = if parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = coeffs
                .iter()
                .map(|&b| {
                    let child = path.with_coefficient(b).expect("coefficient is positive");
                    scope.spawn(move || build_node(child, targets, truant_cap, depth_cap, threads))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("child build panicked")).collect()
        })
    } else {
        coeffs
            .iter()
            .map(|&b| {
                let child = path.with_coefficient(b).expect("coefficient is positive");
                build_node(child, targets, truant_cap, depth_cap, 1)
            })
            .collect()
    };
    EscalatorNode { path, truant: Some(t), status: NodeStatus::Internal, children }
}

// ---------------------------------------------------------------------------
// relative representation S/T
// ---------------------------------------------------------------------------

/// A relative representation target: `f` represents `S/T` when every
/// `s` in `S` has a positive coefficient in `q^T * theta(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeTarget {
    s: Vec<u64>,
    t: Vec<u64>,
}

impl RelativeTarget {
    pub fn new(mut s: Vec<u64>, mut t: Vec<u64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidParameter("T must be nonempty".into()));
        }
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        Ok(Self { s, t })
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn t(&self) -> &[u64] {
        &self.t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeReport {
    /// `(s, represented)` for each element of `S`, ascending.
    pub per_target: Vec<(u64, bool)>,
    pub all_represented: bool,
}

/// The definitional check of relative representation: positivity of the
/// coefficient of `q^s` in `q^T * theta(f)` for each `s` in `S`.
pub fn represents_s_mod_t(
    f: &DiagonalSum,
    target: &RelativeTarget,
    precision: u64,
) -> Result<RelativeReport> {
    if let Some(&max_s) = target.s.last() {
        if max_s > precision {
            return Err(Error::InvalidParameter(format!(
                "target {max_s} exceeds the precision {precision}"
            )));
        }
    }
    let counts = lattice::series_diagonal(f, CountConvention::Nonneg, precision)?;
    let per_target: Vec<(u64, bool)> = target
        .s
        .iter()
        .map(|&s| {
            let hit = target.t.iter().take_while(|&&t| t <= s).any(|&t| counts[(s - t) as usize] > 0);
            (s, hit)
        })
        .collect();
    let all = per_target.iter().all(|&(_, hit)| hit);
    Ok(RelativeReport { per_target, all_represented: all })
}

// ---------------------------------------------------------------------------
// block machinery
// ---------------------------------------------------------------------------

/// The corner point produced by the recursive assignment, the guaranteed
/// bound `-max(max |c_ij|, k-1)`, and the achieved value of the cross part
/// (diagonal-independent since every coordinate is 0 or -1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyAssignment {
    pub x: Vec<i64>,
    pub bound: i64,
    pub value: i64,
}

/// The recursive corner assignment for a connected configuration: start at
/// `x_0 = 0`; each later variable looks at its strongest already-assigned
/// neighbour and picks the corner value that makes that cross term
/// contribute `-|c|`. The result is at most `-max(max |c_ij|, k-1)`.
pub fn greedy_block_assignment(cfg: &CrossConfig) -> Result<GreedyAssignment> {
    let k = cfg.dim();
    if k < 2 {
        return Err(Error::TooSmall { what: "a block assignment", n: k as u64, limit: 2 });
    }
    if !cfg.is_connected() {
        return Err(Error::NotConnected);
    }

    // breadth-first order from variable 0: every later variable has an
    // earlier nonzero neighbour
    let mut order = vec![0usize];
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        head += 1;
        for j in 0..k {
            if j != i && !seen[j] && cfg.get(i, j) != 0 {
                seen[j] = true;
                order.push(j);
            }
        }
    }
    debug_assert_eq!(order.len(), k);

    let mut x = vec![0i64; k];
    let mut assigned = vec![false; k];
    assigned[0] = true;
    for &j in order.iter().skip(1) {
        let i = (0..k)
            .filter(|&i| i != j && assigned[i] && cfg.get(i, j) != 0)
            .max_by_key(|&i| (cfg.get(i, j).unsigned_abs(), std::cmp::Reverse(i)))
            .expect("breadth-first order guarantees an assigned neighbour");
        let c = cfg.get(i, j);
        x[j] = match (x[i], c > 0) {
            (0, true) => -1,
            (0, false) => 0,
            (_, true) => 0,
            (_, false) => -1,
        };
        assigned[j] = true;
    }

    let bound = -(cfg.max_abs().max(k as u64 - 1) as i64);
    let value = cfg.corner_value(&x)?;
    Ok(GreedyAssignment { x, bound, value })
}

/// Largest `m` accepted by [`enumerate_block_configs`]; beyond it the raw
/// assignment space (|c| <= m over C(m+2, 2) edges) is out of reach.
pub const BLOCK_ENUMERATION_LIMIT: u64 = 3;

/// All connected configurations of dimension `2..=m+1` with
/// `0 < max |c_ij| <= m`, one representative per orbit under signed
/// permutations of the variables. Sorted deterministically.
pub fn enumerate_block_configs(m: u64) -> Result<Vec<CrossConfig>> {
    if m > BLOCK_ENUMERATION_LIMIT {
        return Err(Error::TooLarge { what: "block enumeration", n: m, limit: BLOCK_ENUMERATION_LIMIT });
    }
    let mut canonical: BTreeSet<(usize, Vec<i64>)> = BTreeSet::new();
    for k in 2..=(m as usize + 1) {
        let pairs: Vec<(usize, usize)> =
            (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
        let e = pairs.len();
        let mut values = vec![-(m as i64); e];
        loop {
            if values.iter().any(|&v| v != 0) {
                let entries: Vec<(usize, usize, i64)> = pairs
                    .iter()
                    .zip(&values)
                    .filter(|(_, &v)| v != 0)
                    .map(|(&(i, j), &v)| (i, j, v))
                    .collect();
                let cfg = CrossConfig::new(k, &entries).expect("entries are valid");
                if cfg.is_connected() {
                    canonical.insert((k, canonical_key(&cfg, &pairs)));
                }
            }
            // odometer over [-m, m]^e
            let mut pos = 0;
            loop {
                if pos == e {
                    break;
                }
                if values[pos] < m as i64 {
                    values[pos] += 1;
                    break;
                }
                values[pos] = -(m as i64);
                pos += 1;
            }
            if pos == e {
                break;
            }
        }
    }
    let mut out = Vec::new();
    for (k, key) in canonical {
        let pairs: Vec<(usize, usize)> =
            (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
        let entries: Vec<(usize, usize, i64)> = pairs
            .iter()
            .zip(&key)
            .filter(|(_, &v)| v != 0)
            .map(|(&(i, j), &v)| (i, j, v))
            .collect();
        out.push(CrossConfig::new(k, &entries).expect("canonical entries are valid"));
    }
    Ok(out)
}

/// Lexicographically largest entry vector over all signed permutations.
fn canonical_key(cfg: &CrossConfig, pairs: &[(usize, usize)]) -> Vec<i64> {
    let k = cfg.dim();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Vec<i64>> = None;
    permute(&mut perm, 0, &mut |p| {
        for signs in 0u32..(1 << k) {
            let key: Vec<i64> = pairs
                .iter()
                .map(|&(i, j)| {
                    let (pi, pj) = (p[i], p[j]);
                    let s = if (signs >> i & 1) ^ (signs >> j & 1) == 1 { -1 } else { 1 };
                    s * cfg.get(pi, pj)
                })
                .collect();
            if best.as_ref().map_or(true, |b| key > *b) {
                best = Some(key);
            }
        }
    });
    best.expect("at least one permutation")
}

fn permute(perm: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == perm.len() {
        visit(perm);
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute(perm, at + 1, visit);
        perm.swap(at, i);
    }
}

/// Per-variable diagonal thresholds `M_base + 6 sum_j |c_ij|`: with the
/// diagonal coefficients at least this large, points outside the corner
/// lattice cannot take values `<= M_base` (after normalization).
pub fn bound_mx0(cfg: &CrossConfig, m_base: u64) -> Vec<u64> {
    (0..cfg.dim()).map(|i| m_base + 6 * cfg.weighted_degree(i)).collect()
}

// ---------------------------------------------------------------------------
// bounded escalation over norm-1 blocks
// ---------------------------------------------------------------------------

/// Outcome of [`norm_one_smoke_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmokeSearchReport {
    /// Every truant encountered anywhere in the bounded tree, ascending.
    pub truants: Vec<u64>,
    /// Number of two-dimensional block roots explored (plus the diagonal root).
    pub block_roots: usize,
    pub nodes: usize,
    /// Paths stopped by the depth cap.
    pub depth_capped: usize,
}

/// Bounded escalation over forms of norm at most 1: one optional
/// two-dimensional norm-1 block (`c_12 = 1`, diagonal coefficients up to
/// `diag_cap`, positive definite, normalization constant exactly 1)
/// followed by one-dimensional escalation with coefficients bounded by the
/// current truant and `diag_cap`. Truants above `truant_cap` end a path.
///
/// The breadth of the true block escalation is infinite (any diagonal
/// coefficients are allowed); this explores a finite fragment and therefore
/// produces a subset of the truants of the full analysis.
pub fn norm_one_smoke_search(diag_cap: u64, truant_cap: u64, depth_cap: usize) -> SmokeSearchReport {
    let cap = truant_cap as usize;
    let mut truants = BTreeSet::new();
    let mut nodes = 0usize;
    let mut depth_capped = 0usize;

    // the diagonal-only root: represents 0 alone
    let mut diag_root = vec![false; cap + 1];
    diag_root[0] = true;
    escalate_bool(
        &diag_root,
        1,
        0,
        diag_cap,
        truant_cap,
        depth_cap,
        &mut truants,
        &mut nodes,
        &mut depth_capped,
    );

    let mut block_roots = 1usize;
    for m1 in 1..=diag_cap {
        for m2 in m1..=diag_cap {
            if m1 * m2 <= 4 {
                continue; // not positive definite with the c = 1 cross term
            }
            let cfg = CrossConfig::new(2, &[(0, 1, 1)]).expect("single edge");
            let block = CrossSum::new(vec![m1, m2], cfg, 0).expect("positive definite");
            if minimize(&block, true).min_value != -1 {
                continue; // norm exceeds 1
            }
            block_roots += 1;
            let series = lattice::series_cross(&block.with_shift(1), truant_cap)
                .expect("normalized block has nonnegative values");
            let repr: Vec<bool> = series.iter().map(|&a| a > 0).collect();
            escalate_bool(
                &repr,
                1,
                0,
                diag_cap,
                truant_cap,
                depth_cap,
                &mut truants,
                &mut nodes,
                &mut depth_capped,
            );
        }
    }

    SmokeSearchReport { truants: truants.into_iter().collect(), block_roots, nodes, depth_capped }
}

#[allow(clippy::too_many_arguments)]
fn escalate_bool(
    repr: &[bool],
    last_b: u64,
    depth: usize,
    diag_cap: u64,
    truant_cap: u64,
    depth_cap: usize,
    truants: &mut BTreeSet<u64>,
    nodes: &mut usize,
    depth_capped: &mut usize,
) {
    *nodes += 1;
    let Some(t) = repr.iter().position(|&r| !r) else {
        return; // everything up to the cap is represented
    };
    let t = t as u64;
    truants.insert(t);
    if depth >= depth_cap {
        *depth_capped += 1;
        return;
    }
    for b in last_b..=t.min(diag_cap) {
        // convolve with the indicator of multiples b*T(x)
        let mut child = vec![false; repr.len()];
        let mut x = 0u64;
        while b as u128 * tri(x as i64) <= truant_cap as u128 {
            let v = (b as u128 * tri(x as i64)) as usize;
            for n in v..child.len() {
                child[n] |= repr[n - v];
            }
            x += 1;
        }
        escalate_bool(
            &child,
            b,
            depth + 1,
            diag_cap,
            truant_cap,
            depth_cap,
            truants,
            nodes,
            depth_capped,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn sum(b: &[u64]) -> DiagonalSum {
        DiagonalSum::new(b.to_vec()).unwrap()
    }

    #[test]
    fn represents_examples() {
        assert!(!represents(&sum(&[1, 2]), 4));
        assert!(!represents(&sum(&[1, 1, 3]), 8));
        assert!(represents(&sum(&[1, 1, 1]), 8));
        // oracle for [1,2]: no T(a) + 2 T(b) equals 4
        for a in 0..=3i64 {
            for b in 0..=2i64 {
                assert_ne!(tri(a) + 2 * tri(b), 4);
            }
        }
    }

    #[test]
    fn truant_examples() {
        let all = TargetSet::AllNonneg;
        assert_eq!(truant(&DiagonalSum::empty(), &all, 100), Some(1));
        assert_eq!(truant(&sum(&[1, 1]), &all, 100), Some(5));
        assert_eq!(truant(&sum(&[1, 2]), &all, 100), Some(4));
        assert_eq!(truant(&sum(&[1, 1, 1]), &all, 10_000), None);
    }

    #[test]
    fn universality_examples() {
        assert!(is_universal_diagonal(&sum(&[1, 1, 3, 5])));
        assert!(!is_universal_diagonal(&sum(&[1, 1, 6])));
        assert_eq!(first_missed_required_target(&sum(&[1, 1, 6])), Some(5));
        assert!(!is_universal_diagonal(&sum(&[2, 2, 2])));
        assert_eq!(first_missed_required_target(&sum(&[2, 2, 2])), Some(1));
    }

    #[test]
    fn tree_structure_matches_the_eight_theorem() {
        let tree = escalator_tree(&TargetSet::AllNonneg, 10_000, 8, 1).unwrap();
        assert_eq!(tree.truant, Some(1));
        assert_eq!(tree.children.len(), 1);
        let one = &tree.children[0];
        assert_eq!(one.path.coeffs(), &[1]);
        assert_eq!(one.truant, Some(2));
        let one_one = &one.children[0];
        assert_eq!(one_one.truant, Some(5));
        assert_eq!(one_one.children.len(), 5);
        let one_one_three = &one_one.children[2];
        assert_eq!(one_one_three.path.coeffs(), &[1, 1, 3]);
        assert_eq!(one_one_three.truant, Some(8));
        let kids: Vec<&[u64]> =
            one_one_three.children.iter().map(|c| c.path.coeffs()).collect();
        assert_eq!(
            kids,
            vec![&[1, 1, 3, 3][..], &[1, 1, 3, 4], &[1, 1, 3, 5], &[1, 1, 3, 6], &[1, 1, 3, 7], &[1, 1, 3, 8]]
        );
        assert_eq!(tree.truants().into_iter().collect::<Vec<_>>(), vec![1, 2, 4, 5, 8]);
        // threads do not change the tree
        let threaded = escalator_tree(&TargetSet::AllNonneg, 10_000, 8, 4).unwrap();
        assert_eq!(tree, threaded);
    }

    #[test]
    fn tree_is_sound() {
        let tree = escalator_tree(&TargetSet::AllNonneg, 10_000, 8, 1).unwrap();
        fn walk(node: &EscalatorNode) {
            if let Some(t) = node.truant {
                assert!(!represents(&node.path, t), "{} represents its truant {t}", node.path);
                for z in 0..t {
                    assert!(represents(&node.path, z), "{} misses {z} below its truant", node.path);
                }
            } else {
                // universal leaves have no truant below 10^4 either
                assert_eq!(truant(&node.path, &TargetSet::AllNonneg, 10_000), None);
            }
            for c in &node.children {
                walk(c);
            }
        }
        walk(&tree);
    }

    #[test]
    fn corner_values_ignore_diagonal_coefficients() {
        let cfg = CrossConfig::new(3, &[(0, 1, 2), (1, 2, -3)]).unwrap();
        let g = greedy_block_assignment(&cfg).unwrap();
        for b in [[20u64, 30, 40], [17, 50, 23], [100, 100, 100]] {
            let f = CrossSum::new(b.to_vec(), cfg.clone(), 0).unwrap();
            assert_eq!(f.eval_tilde(&g.x).unwrap(), BigInt::from(g.value));
        }
    }

    #[test]
    fn tree_over_explicit_targets_terminates() {
        let targets = TargetSet::explicit(vec![1, 2, 3]);
        let tree = escalator_tree(&targets, 10, 6, 1).unwrap();
        assert_eq!(tree.truant, Some(1));
        let leaves = tree.leaves();
        assert!(!leaves.is_empty());
        for leaf in &leaves {
            for z in [1, 2, 3] {
                assert!(represents(leaf, z));
            }
        }
    }

    #[test]
    fn depth_cap_is_reported() {
        let tree = escalator_tree(&TargetSet::AllNonneg, 10_000, 2, 1).unwrap();
        fn any_truncated(n: &EscalatorNode) -> bool {
            n.status == NodeStatus::TruncatedAtCap || n.children.iter().any(any_truncated)
        }
        assert!(any_truncated(&tree));
    }

    #[test]
    fn relative_representation_examples() {
        // T = {0} reduces to plain representability
        let f = sum(&[1, 2]);
        let tgt = RelativeTarget::new(vec![3, 4], vec![0]).unwrap();
        let r = represents_s_mod_t(&f, &tgt, 10).unwrap();
        assert_eq!(r.per_target, vec![(3, true), (4, false)]);
        assert!(!r.all_represented);

        let f = sum(&[1]);
        let tgt = RelativeTarget::new(vec![2], vec![1]).unwrap();
        assert!(represents_s_mod_t(&f, &tgt, 10).unwrap().all_represented);

        let f = sum(&[2]);
        let tgt = RelativeTarget::new(vec![1], vec![0]).unwrap();
        assert!(!represents_s_mod_t(&f, &tgt, 10).unwrap().all_represented);

        assert!(RelativeTarget::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn greedy_assignment_examples() {
        let cfg = CrossConfig::new(2, &[(0, 1, 5)]).unwrap();
        let g = greedy_block_assignment(&cfg).unwrap();
        assert_eq!(g.bound, -5);
        assert!(g.value <= -5);

        let cfg = CrossConfig::new(2, &[(0, 1, -1)]).unwrap();
        let g = greedy_block_assignment(&cfg).unwrap();
        assert_eq!(g.x, vec![0, 0]);
        assert_eq!(g.value, -1);

        // path on four vertices, all entries 1
        let cfg = CrossConfig::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let g = greedy_block_assignment(&cfg).unwrap();
        assert_eq!(g.bound, -3);
        assert!(g.value <= -3);
        // oracle: best corner value over {0,-1}^4
        let mut best = i64::MAX;
        for mask in 0u32..16 {
            let x: Vec<i64> = (0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 0 }).collect();
            best = best.min(cfg.corner_value(&x).unwrap());
        }
        assert_eq!(best, -3);

        let disconnected = CrossConfig::new(3, &[(0, 1, 1)]).unwrap();
        assert!(matches!(greedy_block_assignment(&disconnected), Err(Error::NotConnected)));
    }

    #[test]
    fn greedy_bound_holds_exhaustively_small() {
        // all connected configs with k <= 4 and |c| <= 2
        for k in 2..=4usize {
            let pairs: Vec<(usize, usize)> =
                (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
            let e = pairs.len();
            let mut values = vec![-2i64; e];
            loop {
                if values.iter().any(|&v| v != 0) {
                    let entries: Vec<(usize, usize, i64)> = pairs
                        .iter()
                        .zip(&values)
                        .filter(|(_, &v)| v != 0)
                        .map(|(&(i, j), &v)| (i, j, v))
                        .collect();
                    let cfg = CrossConfig::new(k, &entries).unwrap();
                    if cfg.is_connected() {
                        let g = greedy_block_assignment(&cfg).unwrap();
                        assert!(g.value <= g.bound, "cfg {entries:?}: {} > {}", g.value, g.bound);
                    }
                }
                let mut pos = 0;
                loop {
                    if pos == e {
                        break;
                    }
                    if values[pos] < 2 {
                        values[pos] += 1;
                        break;
                    }
                    values[pos] = -2;
                    pos += 1;
                }
                if pos == e {
                    break;
                }
            }
        }
    }

    #[test]
    fn block_config_enumeration() {
        assert!(enumerate_block_configs(0).unwrap().is_empty());
        let one = enumerate_block_configs(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].dim(), 2);
        assert_eq!(one[0].get(0, 1), 1);

        let two = enumerate_block_configs(2).unwrap();
        for cfg in &two {
            assert!(cfg.is_connected());
            assert!(cfg.max_abs() >= 1 && cfg.max_abs() <= 2);
            assert!(cfg.dim() >= 2 && cfg.dim() <= 3);
            let g = greedy_block_assignment(cfg).unwrap();
            assert!(g.bound >= -2);
        }
        // dimension 2: c in {1, 2} up to sign; dimension 3 classes come on top
        assert_eq!(two.iter().filter(|c| c.dim() == 2).count(), 2);

        assert!(enumerate_block_configs(BLOCK_ENUMERATION_LIMIT + 1).is_err());
    }

    #[test]
    fn bound_mx0_values() {
        let cfg = CrossConfig::empty(3);
        assert_eq!(bound_mx0(&cfg, 7), vec![7, 7, 7]);
        let cfg = CrossConfig::new(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(bound_mx0(&cfg, 10), vec![22, 22]);
    }

    #[test]
    fn cross_term_lower_bound_inequality() {
        // c (2xy + x + y) >= -|c| (2 T(|x|) + 2 T(|y|)) on a box
        for c in -4i64..=4 {
            for x in -6i64..=6 {
                for y in -6i64..=6 {
                    let lhs = c * (2 * x * y + x + y);
                    let rhs = -c.abs() * 2 * (tri(x.abs()) as i64 + tri(y.abs()) as i64);
                    assert!(lhs >= rhs, "c={c} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn bound_mx0_forces_large_values_off_the_corner_lattice() {
        let configs = [
            CrossConfig::new(2, &[(0, 1, 3)]).unwrap(),
            CrossConfig::new(3, &[(0, 1, 1), (1, 2, -5)]).unwrap(),
            CrossConfig::new(3, &[(0, 1, 2), (0, 2, -1), (1, 2, 1)]).unwrap(),
        ];
        for cfg in &configs {
            for m_base in [0u64, 5, 11] {
                let bounds = bound_mx0(cfg, m_base);
                let f = CrossSum::new(bounds.clone(), cfg.clone(), 0).unwrap();
                let m_tilde = -minimize(&f, true).min_value;
                let k = cfg.dim();
                let coords: Vec<i64> = (-4..=4).collect();
                let mut idx = vec![0usize; k];
                loop {
                    let x: Vec<i64> = idx.iter().map(|&i| coords[i]).collect();
                    let off_corner = x.iter().any(|&v| v != 0 && v != -1);
                    if off_corner {
                        let v = f.eval_tilde(&x).unwrap() + BigInt::from(m_tilde);
                        assert!(
                            v > BigInt::from(m_base),
                            "cfg {:?} m_base {m_base} x {:?}",
                            cfg,
                            x
                        );
                        // with every coordinate off the corner lattice even the
                        // unnormalized value clears the threshold
                        if x.iter().all(|&v| v != 0 && v != -1) {
                            assert!(f.eval_tilde(&x).unwrap() > BigInt::from(m_base));
                        }
                    }
                    let mut pos = 0;
                    loop {
                        if pos == k {
                            break;
                        }
                        if idx[pos] + 1 < coords.len() {
                            idx[pos] += 1;
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                    if pos == k {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn smoke_search_small() {
        let report = norm_one_smoke_search(6, 40, 10);
        assert!(report.truants.contains(&1));
        assert!(report.truants.contains(&8));
        assert!(report.block_roots > 1);
        // deterministic
        let again = norm_one_smoke_search(6, 40, 10);
        assert_eq!(report, again);
    }
}
