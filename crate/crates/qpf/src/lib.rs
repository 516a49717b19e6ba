//! Variational quantum power flow toolkit.
//!
//! Solves AC power flow with a fast-decoupled scheme whose linear subsystems
//! are handled by a variational quantum linear solver running on a built-in
//! statevector simulator. Classical Newton-Raphson and fast-decoupled solvers
//! serve as references, a configurable noise model emulates NISQ hardware,
//! and a Monte Carlo layer extends the solver to stochastic power flow.

pub mod casefile;
pub mod driver;
pub mod error;
pub mod pauli;
pub mod powerflow;
pub mod report;
pub mod sim;
pub mod stochastic;
pub mod vqls;

pub use error::{Error, Result};

/// Derives an independent RNG stream seed from a root seed and a stream tag
/// (SplitMix64 finalizer).
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
