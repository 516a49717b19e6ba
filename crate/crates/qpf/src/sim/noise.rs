//! Shot sampling and the NISQ-style noise model: two-qubit depolarizing
//! errors after each entangling gate plus independent readout bit flips.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sim::circuit::{Gate, ParamCircuit};
use crate::sim::state::StateVector;

/// Error-branch weights below this are pruned from the depolarizing mixture;
/// the retained mass is renormalized.
const BRANCH_PRUNE_THRESHOLD: f64 = 1e-12;

/// Depolarizing + readout noise parameters. The defaults are the median
/// two-qubit gate and readout error rates of a representative 5-qubit
/// superconducting device.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseModel {
    /// Probability that each entangling gate is followed by a uniformly
    /// random non-identity two-qubit Pauli error.
    pub two_qubit_depolarizing: f64,
    /// Per-bit readout flip probability.
    pub readout_flip: f64,
    pub enabled: bool,
}

impl NoiseModel {
    pub fn disabled() -> Self {
        Self {
            two_qubit_depolarizing: 0.0,
            readout_flip: 0.0,
            enabled: false,
        }
    }

    /// Median error rates of a 5-qubit NISQ device: 1.235e-2 per entangling
    /// gate, 2.85e-2 per readout bit.
    pub fn nisq_defaults() -> Self {
        Self {
            two_qubit_depolarizing: 1.235e-2,
            readout_flip: 2.85e-2,
            enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.two_qubit_depolarizing) {
            return Err(Error::InvalidProbability {
                name: "two_qubit_depolarizing",
                value: self.two_qubit_depolarizing,
            });
        }
        if !(0.0..=1.0).contains(&self.readout_flip) {
            return Err(Error::InvalidProbability {
                name: "readout_flip",
                value: self.readout_flip,
            });
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::disabled()
    }
}

/// Histogram of measured basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementCounts {
    counts: BTreeMap<usize, u64>,
    shots: u64,
}

impl MeasurementCounts {
    pub fn new(counts: BTreeMap<usize, u64>) -> Result<Self> {
        let shots: u64 = counts.values().sum();
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { counts, shots })
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Empirical probability of basis state `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        self.get(k) as f64 / self.shots as f64
    }
}

fn draw_index(cdf: &[f64], u: f64) -> usize {
    // Binary search for the first cumulative weight above u.
    match cdf.binary_search_by(|w| w.partial_cmp(&u).unwrap()) {
        Ok(i) => (i + 1).min(cdf.len() - 1),
        Err(i) => i.min(cdf.len() - 1),
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p.max(0.0);
            acc
        })
        .collect();
    // Guard against drifting totals so the final bin always catches u ~ 1.
    if let Some(last) = cdf.last_mut() {
        *last = f64::MAX;
    }
    cdf
}

/// Multinomial sample of `shots` outcomes from an explicit distribution.
pub fn sample_distribution(probs: &[f64], shots: u64, seed: u64) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf = cumulative(probs);
    let total: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random();
        let k = draw_index(&cdf, u * total);
        *counts.entry(k).or_insert(0) += 1;
    }
    MeasurementCounts::new(counts)
}

/// Samples `shots` measurements of a state. With noise enabled, each measured
/// bit independently flips with the readout probability. Deterministic for a
/// fixed seed.
pub fn sample(
    state: &StateVector,
    shots: u64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    noise.validate()?;
    let probs = state.probabilities();
    let total: f64 = probs.iter().sum();
    let cdf = cumulative(&probs);
    let n_qubits = state.n_qubits();
    let flip = if noise.enabled { noise.readout_flip } else { 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random();
        let mut k = draw_index(&cdf, u * total);
        if flip > 0.0 {
            for q in 0..n_qubits {
                if rng.random::<f64>() < flip {
                    k ^= 1 << q;
                }
            }
        }
        *counts.entry(k).or_insert(0) += 1;
    }
    MeasurementCounts::new(counts)
}

/// Fifteen non-identity two-qubit Pauli errors applied in place.
fn apply_two_qubit_pauli(state: &mut StateVector, code: usize, qa: usize, qb: usize) {
    let ops = [code % 4, code / 4];
    for (op, &q) in ops.iter().zip([qa, qb].iter()) {
        let bit = 1usize << q;
        let amps = state.amplitudes_mut();
        match op {
            0 => {}
            1 => {
                for k in 0..amps.len() {
                    if k & bit == 0 {
                        amps.swap(k, k | bit);
                    }
                }
            }
            2 => {
                let i = Complex64::new(0.0, 1.0);
                for k in 0..amps.len() {
                    if k & bit == 0 {
                        let a0 = amps[k];
                        let a1 = amps[k | bit];
                        amps[k] = -i * a1;
                        amps[k | bit] = i * a0;
                    }
                }
            }
            _ => {
                for (k, amp) in amps.iter_mut().enumerate() {
                    if k & bit != 0 {
                        *amp = -*amp;
                    }
                }
            }
        }
    }
}

fn depolarizing_dfs(
    gates: &[Gate],
    params: &[f64],
    mut state: StateVector,
    weight: f64,
    p: f64,
    probs: &mut [f64],
) {
    let mut weight = weight;
    for (i, gate) in gates.iter().enumerate() {
        state.apply_gate(gate, params, None);
        if p > 0.0 && gate.is_entangling() {
            let (qa, qb) = gate.qubits();
            let qb = qb.expect("entangling gates have two qubits");
            let branch_weight = weight * p / 15.0;
            if branch_weight >= BRANCH_PRUNE_THRESHOLD {
                for code in 1..16 {
                    let mut branch = state.clone();
                    apply_two_qubit_pauli(&mut branch, code, qa, qb);
                    depolarizing_dfs(&gates[i + 1..], params, branch, branch_weight, p, probs);
                }
            }
            weight *= 1.0 - p;
        }
    }
    for (k, amp) in state.amplitudes().iter().enumerate() {
        probs[k] += weight * amp.norm_sqr();
    }
}

/// Exact output distribution of a circuit under the noise model: the
/// depolarizing mixture is enumerated branch-by-branch (tiny branches are
/// pruned and the mass renormalized) and the readout channel is applied
/// analytically per bit.
pub fn noisy_distribution(
    circuit: &ParamCircuit,
    params: &[f64],
    noise: &NoiseModel,
) -> Result<Vec<f64>> {
    noise.validate()?;
    if params.len() != circuit.n_params() {
        return Err(Error::ParamCountMismatch {
            expected: circuit.n_params(),
            got: params.len(),
        });
    }
    let dim = 1usize << circuit.n_qubits();
    let mut probs = vec![0.0; dim];
    let p = if noise.enabled {
        noise.two_qubit_depolarizing
    } else {
        0.0
    };
    depolarizing_dfs(
        circuit.gates(),
        params,
        StateVector::zero_state(circuit.n_qubits()),
        1.0,
        p,
        &mut probs,
    );
    let total: f64 = probs.iter().sum();
    if total > 0.0 {
        for v in &mut probs {
            *v /= total;
        }
    }
    if noise.enabled && noise.readout_flip > 0.0 {
        let q = noise.readout_flip;
        for bit_idx in 0..circuit.n_qubits() {
            let bit = 1usize << bit_idx;
            let old = probs.clone();
            for k in 0..dim {
                probs[k] = (1.0 - q) * old[k] + q * old[k ^ bit];
            }
        }
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::circuit::Angle;
    use crate::sim::state::simulate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn deterministic_state_samples_one_bucket() {
        let state = StateVector::zero_state(1);
        let counts = sample(&state, 1000, &NoiseModel::disabled(), 3).unwrap();
        assert_eq!(counts.get(0), 1000);
        assert_eq!(counts.get(1), 0);
        assert_eq!(counts.shots(), 1000);
    }

    #[test]
    fn uniform_two_qubit_counts_within_three_sigma() {
        let mut c = ParamCircuit::new(2);
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::H { qubit: 1 }).unwrap();
        let state = simulate(&c, &[]).unwrap();
        let shots = 1_000_000u64;
        let counts = sample(&state, shots, &NoiseModel::disabled(), 77).unwrap();
        // Binomial(1e6, 0.25): sigma = sqrt(n p (1-p)) ~ 433.
        let sigma = (shots as f64 * 0.25 * 0.75).sqrt();
        for k in 0..4 {
            let dev = (counts.get(k) as f64 - 250_000.0).abs();
            assert!(dev < 3.0 * sigma, "count {k} off by {dev}");
        }
    }

    #[test]
    fn readout_flip_rate_matches_model() {
        let state = StateVector::zero_state(1);
        let noise = NoiseModel {
            two_qubit_depolarizing: 0.0,
            readout_flip: 2.85e-2,
            enabled: true,
        };
        let shots = 100_000u64;
        let counts = sample(&state, shots, &noise, 5).unwrap();
        // Binomial(1e5, 0.0285): mean 2850, sigma ~ 52.6.
        let sigma = (shots as f64 * 0.0285 * (1.0 - 0.0285)).sqrt();
        let dev = (counts.get(1) as f64 - 2850.0).abs();
        assert!(dev < 3.0 * sigma, "flip count off by {dev}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut c = ParamCircuit::new(2);
        c.push(Gate::Ry { qubit: 0, angle: Angle::Bound(1.1) }).unwrap();
        c.push(Gate::Ry { qubit: 1, angle: Angle::Bound(0.4) }).unwrap();
        let state = simulate(&c, &[]).unwrap();
        let a = sample(&state, 5000, &NoiseModel::nisq_defaults(), 9).unwrap();
        let b = sample(&state, 5000, &NoiseModel::nisq_defaults(), 9).unwrap();
        assert_eq!(a, b);
        let c2 = sample(&state, 5000, &NoiseModel::nisq_defaults(), 10).unwrap();
        assert_ne!(a, c2);
    }

    #[test]
    fn noisy_distribution_reduces_to_exact_when_disabled() {
        let mut c = ParamCircuit::new(2);
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let dist = noisy_distribution(&c, &[], &NoiseModel::disabled()).unwrap();
        let exact = simulate(&c, &[]).unwrap().probabilities();
        for (a, b) in dist.iter().zip(exact.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn depolarizing_spreads_probability() {
        // Bell-state circuit: exact distribution has zero mass on |01>,|10>;
        // a depolarizing error after the CNOT moves mass there.
        let mut c = ParamCircuit::new(2);
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let noise = NoiseModel {
            two_qubit_depolarizing: 0.1,
            readout_flip: 0.0,
            enabled: true,
        };
        let dist = noisy_distribution(&c, &[], &noise).unwrap();
        assert_abs_diff_eq!(dist.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        assert!(dist[1] > 1e-3);
        assert!(dist[2] > 1e-3);
        // Mixture: (1-p) on the Bell distribution plus p spread over Pauli
        // branches; 8 of the 15 branches keep mass on {00,11}.
        let bell_mass = dist[0] + dist[3];
        assert_abs_diff_eq!(bell_mass, 0.9 + 0.1 * 8.0 / 15.0, epsilon = 1e-9);
    }

    #[test]
    fn readout_channel_matches_per_shot_flips() {
        let mut c = ParamCircuit::new(2);
        c.push(Gate::Ry { qubit: 0, angle: Angle::Bound(0.9) }).unwrap();
        let noise = NoiseModel {
            two_qubit_depolarizing: 0.0,
            readout_flip: 0.05,
            enabled: true,
        };
        let dist = noisy_distribution(&c, &[], &noise).unwrap();
        let state = simulate(&c, &[]).unwrap();
        let shots = 400_000u64;
        let counts = sample(&state, shots, &noise, 21).unwrap();
        for k in 0..4 {
            let p = dist[k];
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            let dev = (counts.frequency(k) - p).abs();
            assert!(dev < 4.0 * sigma + 1e-9, "bucket {k}: dev {dev}, sigma {sigma}");
        }
    }

    #[test]
    fn rejects_bad_probabilities_and_zero_shots() {
        let state = StateVector::zero_state(1);
        let bad = NoiseModel {
            two_qubit_depolarizing: 1.5,
            readout_flip: 0.0,
            enabled: true,
        };
        assert!(sample(&state, 10, &bad, 0).is_err());
        assert!(sample(&state, 0, &NoiseModel::disabled(), 0).is_err());
    }
}
