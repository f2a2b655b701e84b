//! Twin fringe subtrees in uniformly random rooted labeled (Cayley) trees.
//!
//! Two fringe subtrees are *twins* when they have the same counts of
//! vertices by out-degree. This crate computes the expected number of twin
//! pairs exactly, checks it against brute force and simulation, and
//! evaluates the analytic machinery used to locate the size threshold at
//! which twins stop appearing:
//!
//! * [`profile_enum`]: degree profiles, `M(r)`, `N(k)` by two independent
//!   routes, `S_n(k)` and `m_n(k)` in exact arithmetic.
//! * [`tree_lab`]: uniform sampling of rooted labeled trees, fringe-subtree
//!   profiles, twin counting, an exhaustive oracle for tiny `n`, and Monte
//!   Carlo estimation with reproducible per-trial random streams.
//! * [`asymptotics`]: high-precision evaluation of `H(z) = I₀(2√z)`, the
//!   Chernoff bound and the two-dimensional Cauchy integral for `N(k)`, the
//!   `W` landscape, size thresholds and expectation envelopes.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

#[allow(non_snake_case)]
pub mod asymptotics;
mod error;
pub mod hp;
pub mod profile_enum;
pub mod tree_lab;

pub use error::{Error, Result};
