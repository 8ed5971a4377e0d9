//! Day-ahead unit commitment under demand and PV uncertainty, with fair
//! curtailment of PV units.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`model`] — problem data (generators, PVs, loads, budgets) and
//!    scenario arithmetic.
//! 2. [`milp`] — a solver-agnostic linear model plus a bundled
//!    simplex/branch-and-bound solver and a pluggable backend seam.
//! 3. [`uc`] — the deterministic unit-commitment MILP for a fixed
//!    scenario, with an optional fairness penalty on per-PV delivered
//!    energy.
//! 4. [`recourse`] — the worst-case second stage for a fixed commitment,
//!    solved in dualized, linearized MILP form over binary uncertainty.
//! 5. [`benders`] — the cutting-plane loop: master problem, cut
//!    generation, convergence bookkeeping, final dispatch.
//! 6. [`fairness`] / [`stats`] / [`eval`] — delivered-energy fairness
//!    metrics (L1 deviation, Gini index), the hypothesis-test battery,
//!    and the Monte-Carlo evaluation protocol.
//!
//! The crate is `no_std` (with `alloc`); all file formats and IO live in
//! the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;


pub mod benders;
pub mod eval;
pub mod fairness;
mod math;
pub mod milp;
pub mod model;
pub mod recourse;
pub mod stats;
pub mod uc;
