//! Statevector simulator: parameterized circuits, exact expectation values,
//! shot sampling, Hadamard tests and a configurable NISQ-style noise model.

mod circuit;
mod hadamard;
mod noise;
mod state;

pub use circuit::{Angle, CircuitStats, Gate, ParamCircuit};
pub use hadamard::{hadamard_test, hadamard_test_imag, HadamardMode};
pub use noise::{noisy_distribution, sample, sample_distribution, MeasurementCounts, NoiseModel};
pub use state::{expectation, simulate, StateVector};
