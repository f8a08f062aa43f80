//! Exact and Monte Carlo machinery for the probability that two random
//! permutations of prescribed cycle types generate a transitive subgroup of
//! `S_n` (or one containing `A_n`).
//!
//! Module map:
//! - [`perm`]: permutations, cycle types, conjugacy-class sampling, orbits.
//! - [`recognition`]: transitivity, exact group order (Schreier–Sims), and
//!   the `G >= A_n` test.
//! - [`exact`]: exact rational `E N_k` at finite `n` with a brute-forced
//!   transitive-pair probability table.
//! - [`asymptotics`]: the limiting probability formula, limiting `E N`, and
//!   the application constants.
//! - [`partitions`]: partition counting, Hardy–Ramanujan, uniform random
//!   partitions, and the tail-probability limit.
//! - [`harness`]: seeded, thread-count-independent Monte Carlo experiments
//!   with machine-readable reports.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod harness;
pub mod partitions;
pub mod perm;
pub mod recognition;

pub use error::{Error, Result};
