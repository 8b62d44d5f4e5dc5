//! Exact local factors and rigorous densities for k-tuples of positive
//! integers under pairwise-coprimality constraints.
//!
//! A constraint system is a graph on vertices 1..=k: each edge {i, j}
//! requires gcd(n_i, n_j) = 1. The density of tuples satisfying all
//! constraints is an Euler product over primes of a local factor
//! polynomial in 1/p; this crate computes those polynomials exactly
//! (integer coefficients, by three independent routes), evaluates the
//! products with rigorous tail and rounding error bounds, assembles
//! inclusion-exclusion densities for "exactly r" / "at least r" coprime
//! pairs, and cross-checks everything against exact tuple counting and
//! seeded Monte Carlo estimation.
//!
//! With the default `parallel` feature, prime blocks, exact counts and
//! Monte Carlo sampling run on rayon; results are bit-identical to the
//! serial build.

pub mod density;
pub mod empirical;
pub mod error;
pub mod euler;
pub mod graph;
pub mod local_factor;
pub mod report;

pub(crate) mod arith;

pub use error::{Error, Result};

/// Caps the global rayon thread pool. Takes effect only on first call and
/// only with the `parallel` feature; a no-op otherwise.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) {
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Caps the global rayon thread pool. Takes effect only on first call and
/// only with the `parallel` feature; a no-op otherwise.
#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) {}
