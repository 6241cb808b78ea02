//! Exact arithmetic for sums of triangular numbers.
//!
//! A *triangular sum* is a polynomial `b_1*T(x_1) + ... + b_k*T(x_k)` with
//! positive integer coefficients, where `T(x) = x(x+1)/2`. This crate decides
//! and quantifies which integers such sums represent:
//!
//! - [`forms`] — the domain types: diagonal sums, cross-term sums, and the
//!   correspondence `8*T(x) = (2x+1)^2 - 1` to diagonal quadratic forms on
//!   odd vectors;
//! - [`lattice`] — exact lattice-point counting and minimization (all bounds
//!   are exact rationals, no floating point);
//! - [`qseries`] — truncated integer q-series: theta series, eta products,
//!   `U`/`V` operators;
//! - [`classnum`] — Hurwitz class numbers by reduced-form enumeration and the
//!   class-number identities satisfied by the ternary/quaternary leaves;
//! - [`escalate`] — truants, escalator trees, and the eight-theorem decision
//!   procedure (universal iff 1, 2, 4, 5, 8 are represented);
//! - [`counterex`] — the cross-term family that misses exactly one prescribed
//!   integer, and the quadratic-growth gap witness;
//! - [`reference`](mod@reference) — numeric reference data too large to
//!   recompute here.
//!
//! Everything is deterministic: repeated runs produce identical results.

pub mod classnum;
pub mod counterex;
mod error;
pub mod escalate;
pub mod forms;
pub mod lattice;
pub mod qseries;
pub mod reference;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
