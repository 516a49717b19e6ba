//! Statevector representation and exact circuit execution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliDecomposition;
use crate::sim::circuit::{Gate, ParamCircuit};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Normalized 2^n-amplitude quantum state. Qubit `q` maps to bit `q` of the
/// basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state |0...0>.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// Wraps an amplitude vector, requiring a power-of-two length and unit
    /// norm within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeCount {
                len,
                n_qubits: len.max(1).trailing_zeros() as usize,
            });
        }
        let n_qubits = len.trailing_zeros() as usize;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Measurement probabilities |a_k|^2.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a gate; `control` restricts the action to the subspace where
    /// that qubit is 1 (used by the Hadamard-test construction).
    pub(crate) fn apply_gate(&mut self, gate: &Gate, params: &[f64], control: Option<usize>) {
        let dim = self.amps.len();
        let ctrl_mask = control.map(|c| 1usize << c).unwrap_or(0);
        let active = |k: usize| ctrl_mask == 0 || (k & ctrl_mask) != 0;
        match *gate {
            Gate::Ry { qubit, angle } => {
                let half = angle.resolve(params) / 2.0;
                let (s, c) = half.sin_cos();
                let bit = 1usize << qubit;
                for k0 in 0..dim {
                    if k0 & bit == 0 && active(k0) && active(k0 | bit) {
                        let k1 = k0 | bit;
                        let a0 = self.amps[k0];
                        let a1 = self.amps[k1];
                        self.amps[k0] = a0 * c - a1 * s;
                        self.amps[k1] = a0 * s + a1 * c;
                    }
                }
            }
            Gate::Rz { qubit, angle } => {
                let half = angle.resolve(params) / 2.0;
                let phase0 = Complex64::from_polar(1.0, -half);
                let phase1 = Complex64::from_polar(1.0, half);
                let bit = 1usize << qubit;
                for k in 0..dim {
                    if active(k) {
                        self.amps[k] *= if k & bit == 0 { phase0 } else { phase1 };
                    }
                }
            }
            Gate::H { qubit } => {
                let bit = 1usize << qubit;
                for k0 in 0..dim {
                    if k0 & bit == 0 && active(k0) && active(k0 | bit) {
                        let k1 = k0 | bit;
                        let a0 = self.amps[k0];
                        let a1 = self.amps[k1];
                        self.amps[k0] = (a0 + a1) * FRAC_1_SQRT_2;
                        self.amps[k1] = (a0 - a1) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::X { qubit } => {
                let bit = 1usize << qubit;
                for k0 in 0..dim {
                    if k0 & bit == 0 && active(k0) && active(k0 | bit) {
                        self.amps.swap(k0, k0 | bit);
                    }
                }
            }
            Gate::Cz { a, b } => {
                let mask = (1usize << a) | (1usize << b);
                for k in 0..dim {
                    if k & mask == mask && active(k) {
                        self.amps[k] = -self.amps[k];
                    }
                }
            }
            Gate::Cnot { control: c, target } => {
                let cbit = 1usize << c;
                let tbit = 1usize << target;
                for k in 0..dim {
                    if k & cbit != 0 && k & tbit == 0 && active(k) && active(k | tbit) {
                        self.amps.swap(k, k | tbit);
                    }
                }
            }
        }
    }
}

/// Runs a circuit on |0...0> and returns the exact, noiseless state.
pub fn simulate(circuit: &ParamCircuit, params: &[f64]) -> Result<StateVector> {
    if params.len() != circuit.n_params() {
        return Err(Error::ParamCountMismatch {
            expected: circuit.n_params(),
            got: params.len(),
        });
    }
    let mut state = StateVector::zero_state(circuit.n_qubits());
    for gate in circuit.gates() {
        state.apply_gate(gate, params, None);
    }
    Ok(state)
}

/// <psi| O |psi> for a Hermitian operator given as a Pauli decomposition.
pub fn expectation(state: &StateVector, observable: &PauliDecomposition) -> Result<f64> {
    if state.n_qubits() != observable.n_qubits() {
        return Err(Error::QubitCountMismatch {
            left: state.n_qubits(),
            right: observable.n_qubits(),
        });
    }
    let amps = state.amplitudes();
    let mut acc = 0.0;
    for (c, s) in observable.terms() {
        acc += c * s.expectation_with(amps).re;
    }
    Ok(acc)
}
