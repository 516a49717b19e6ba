//! Ancilla-based Hadamard tests estimating Re<b| P U(w) |0>.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::sim::circuit::ParamCircuit;
use crate::sim::state::{simulate, StateVector};

/// Evaluation mode for a Hadamard test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HadamardMode {
    /// Inner product computed directly from statevectors.
    Exact,
    /// Ancilla construction with the Z-basis ancilla measurement sampled.
    Shots { shots: u64, seed: u64 },
}

fn check_operands(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
) -> Result<usize> {
    let n = ansatz.n_qubits();
    if unitary_a.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            left: unitary_a.n_qubits(),
            right: n,
        });
    }
    if prep_b.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            left: prep_b.n_qubits(),
            right: n,
        });
    }
    if prep_b.n_params() != 0 {
        return Err(Error::ParamCountMismatch {
            expected: 0,
            got: prep_b.n_params(),
        });
    }
    Ok(n)
}

/// <b| P U(w) |0> from direct statevector simulation.
fn exact_inner(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
    params: &[f64],
) -> Result<Complex64> {
    let psi = simulate(ansatz, params)?;
    let applied = unitary_a.apply(psi.amplitudes());
    let b = simulate(prep_b, &[])?;
    Ok(b
        .amplitudes()
        .iter()
        .zip(&applied)
        .map(|(bk, vk)| bk.conj() * vk)
        .sum())
}

/// Probability of measuring the ancilla in |0> for the controlled
/// construction H_a . c-[B^dag P U] . (S^dag_a) . H_a |0>|0...0>.
fn ancilla_p0(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
    params: &[f64],
    imaginary: bool,
) -> Result<f64> {
    let n = ansatz.n_qubits();
    let anc = n;
    let anc_bit = 1usize << anc;
    let mut state = StateVector::zero_state(n + 1);

    // Ancilla into superposition.
    state.apply_gate(
        &crate::sim::circuit::Gate::H { qubit: anc },
        &[],
        None,
    );
    if imaginary {
        // S^dag on the ancilla turns the test into an Im
        // estimator.
        let amps = state.amplitudes_mut();
        for (k, amp) in amps.iter_mut().enumerate() {
            if k & anc_bit != 0 {
                *amp *= Complex64::new(0.0, -1.0);
            }
        }
    }

    // Controlled ansatz U(w).
    let bound = ansatz.bind(params)?;
    for gate in bound.gates() {
        state.apply_gate(gate, &[], Some(anc));
    }

    // Controlled Pauli string.
    {
        let dim = 1usize << (n + 1);
        let amps = state.amplitudes_mut();
        let sub: Vec<Complex64> = (0..(dim >> 1)).map(|k| amps[k | anc_bit]).collect();
        for (k, v) in unitary_a.apply(&sub).into_iter().enumerate() {
            amps[k | anc_bit] = v;
        }
    }

    // Controlled B^dag.
    let b_inv = prep_b.inverse()?;
    for gate in b_inv.gates() {
        state.apply_gate(gate, &[], Some(anc));
    }

    state.apply_gate(
        &crate::sim::circuit::Gate::H { qubit: anc },
        &[],
        None,
    );

    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| k & anc_bit == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

fn run(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
    params: &[f64],
    mode: HadamardMode,
    imaginary: bool,
) -> Result<f64> {
    check_operands(unitary_a, prep_b, ansatz)?;
    match mode {
        HadamardMode::Exact => {
            let inner = exact_inner(unitary_a, prep_b, ansatz, params)?;
            Ok(if imaginary { inner.im } else { inner.re })
        }
        HadamardMode::Shots { shots, seed } => {
            if shots == 0 {
                return Err(Error::ZeroShots);
            }
            let p0 = ancilla_p0(unitary_a, prep_b, ansatz, params, imaginary)?
                .clamp(0.0, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n0 = Binomial::new(shots, p0)
                .expect("p0 clamped to [0,1]")
                .sample(&mut rng);
            // (counts_0 - counts_1) / shots = 2 p0_hat - 1.
            Ok((2 * n0) as f64 / shots as f64 - 1.0)
        }
    }
}

/// Estimates Re<b| P U(w) |0> where |b> is prepared by `prep_b`.
///
/// Exact mode computes the inner product from statevectors; shot mode runs
/// the ancilla-controlled construction and returns the sampled ancilla
/// expectation (counts_0 - counts_1)/shots.
pub fn hadamard_test(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
    params: &[f64],
    mode: HadamardMode,
) -> Result<f64> {
    run(unitary_a, prep_b, ansatz, params, mode, false)
}

/// Imaginary-part variant used when expanding |<b|A|psi>|^2 into
/// measurable terms.
pub fn hadamard_test_imag(
    unitary_a: &PauliString,
    prep_b: &ParamCircuit,
    ansatz: &ParamCircuit,
    params: &[f64],
    mode: HadamardMode,
) -> Result<f64> {
    run(unitary_a, prep_b, ansatz, params, mode, true)
}
