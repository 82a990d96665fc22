//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use wonderful::Lattice;

/// The subspace lattice of P^n over GF(q), panicking on unsupported input.
pub fn lattice(q: u64, n: usize) -> Arc<Lattice> {
    Arc::new(Lattice::for_params(q, n).expect("benchmark parameters are in range"))
}
