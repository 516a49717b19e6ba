//! Variational quantum linear solver: hardware-efficient ansatz construction,
//! the overlap cost function, derivative-free parameter optimization and
//! solution-norm recovery.

mod nelder_mead;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive_seed;
use crate::error::{Error, Result};
use crate::pauli::PauliDecomposition;
use crate::sim::{
    expectation, hadamard_test, hadamard_test_imag, simulate, Gate, HadamardMode, ParamCircuit,
};

/// Entangling-layer pattern of the ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Entangler {
    /// CZ between neighbours 0-1, 1-2, ...
    CzLinear,
    /// Linear pattern closed into a ring (identical to linear below 3 qubits).
    CzRing,
}

/// Hardware-efficient ansatz layout: an RY encoding layer followed by
/// `n_layers` repetitions of an entangling pattern plus an RY layer, for
/// `n_qubits * (n_layers + 1)` free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AnsatzConfig {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub entangler: Entangler,
}

impl AnsatzConfig {
    /// Two entangling layers with the linear CZ pattern; for 3 qubits this is
    /// 4 entangling gates at native depth 7.
    pub fn default_for(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            n_layers: 2,
            entangler: Entangler::CzLinear,
        }
    }

    pub fn param_count(&self) -> usize {
        self.n_qubits * (self.n_layers + 1)
    }
}

/// Builds the ansatz circuit for a layout.
pub fn build_ansatz(config: &AnsatzConfig) -> Result<ParamCircuit> {
    if config.n_layers == 0 {
        return Err(Error::ZeroLayers);
    }
    let n = config.n_qubits;
    let mut c = ParamCircuit::new(n);
    for q in 0..n {
        c.push_ry_param(q)?;
    }
    for _ in 0..config.n_layers {
        for q in 0..n.saturating_sub(1) {
            c.push(Gate::Cz { a: q, b: q + 1 })?;
        }
        if config.entangler == Entangler::CzRing && n >= 3 {
            c.push(Gate::Cz { a: n - 1, b: 0 })?;
        }
        for q in 0..n {
            c.push_ry_param(q)?;
        }
    }
    Ok(c)
}

/// A linear system in quantum-operator form: the Pauli decomposition of the
/// (symmetric, nonsingular) system matrix, a state-preparation circuit for
/// the right-hand side, and the pre-padding dimension.
#[derive(Debug, Clone)]
pub struct VqlsProblem {
    a: PauliDecomposition,
    /// Decomposition of A^T A, used for norm recovery and the shot-mode cost
    /// denominator.
    ata: PauliDecomposition,
    b_prep: ParamCircuit,
    original_dim: usize,
}

impl VqlsProblem {
    pub fn new(a_matrix: &DMatrix<f64>, b_prep: ParamCircuit, original_dim: usize) -> Result<Self> {
        let a = PauliDecomposition::decompose_matrix(a_matrix)?;
        let ata = PauliDecomposition::decompose_matrix(&(a_matrix.transpose() * a_matrix))?;
        if b_prep.n_qubits() != a.n_qubits() {
            return Err(Error::QubitCountMismatch {
                left: b_prep.n_qubits(),
                right: a.n_qubits(),
            });
        }
        if b_prep.n_params() != 0 {
            return Err(Error::ParamCountMismatch {
                expected: 0,
                got: b_prep.n_params(),
            });
        }
        if original_dim == 0 || original_dim > a.dim() {
            return Err(Error::DimensionMismatch {
                dim: a.dim(),
                vec_len: original_dim,
            });
        }
        Ok(Self {
            a,
            ata,
            b_prep,
            original_dim,
        })
    }

    pub fn a(&self) -> &PauliDecomposition {
        &self.a
    }

    pub fn ata(&self) -> &PauliDecomposition {
        &self.ata
    }

    pub fn b_prep(&self) -> &ParamCircuit {
        &self.b_prep
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn n_qubits(&self) -> usize {
        self.a.n_qubits()
    }
}

/// Cost evaluation mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostMode {
    Exact,
    /// Every Hadamard-test term is estimated with this many shots; the seed
    /// fixes the noise realization for the whole evaluation.
    Shots { shots: u64, seed: u64 },
}

/// Overlap cost 1 - |<b|Psi>|^2 with |Psi> = A U(w)|0> / ||A U(w)|0>||.
///
/// Exact mode works on statevectors; shot mode expands both the numerator
/// |<b|A|psi>|^2 and the denominator <psi|A^T A|psi> into Hadamard tests over
/// the Pauli terms and clips the result into [0, 1].
pub fn cost(
    problem: &VqlsProblem,
    ansatz: &ParamCircuit,
    params: &[f64],
    mode: CostMode,
) -> Result<f64> {
    match mode {
        CostMode::Exact => {
            let psi = simulate(ansatz, params)?;
            let v = problem.a.apply(psi.amplitudes());
            let denom: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if denom < 1e-12 {
                return Err(Error::SingularDirection);
            }
            let b = simulate(problem.b_prep(), &[])?;
            let overlap: num_complex::Complex64 = b
                .amplitudes()
                .iter()
                .zip(&v)
                .map(|(bk, vk)| bk.conj() * vk)
                .sum();
            Ok((1.0 - overlap.norm_sqr() / denom).clamp(0.0, 1.0))
        }
        CostMode::Shots { shots, seed } => {
            let bound = ansatz.bind(params)?;
            let mut stream = 0u64;
            let mut next_mode = |stream: &mut u64| {
                *stream += 1;
                HadamardMode::Shots {
                    shots,
                    seed: derive_seed(seed, *stream),
                }
            };
            let mut num_re = 0.0;
            let mut num_im = 0.0;
            for (c, s) in problem.a.terms() {
                num_re +=
                    c * hadamard_test(s, problem.b_prep(), ansatz, params, next_mode(&mut stream))?;
                num_im += c
                    * hadamard_test_imag(s, problem.b_prep(), ansatz, params, next_mode(&mut stream))?;
            }
            let numerator = num_re * num_re + num_im * num_im;
            let mut denom = 0.0;
            for (c, s) in problem.ata.terms() {
                denom += c * hadamard_test(s, &bound, ansatz, params, next_mode(&mut stream))?;
            }
            if denom < 1e-12 {
                return Err(Error::SingularDirection);
            }
            Ok((1.0 - numerator / denom).clamp(0.0, 1.0))
        }
    }
}

/// Physical solution norm ||x|| = ||b|| / sqrt(<0|U^T A^T A U|0>), evaluated
/// through the expectation of the A^T A decomposition. The preparation
/// circuit output is a unit vector, so ||b|| = 1.
pub fn solution_norm(problem: &VqlsProblem, ansatz: &ParamCircuit, params: &[f64]) -> Result<f64> {
    let psi = simulate(ansatz, params)?;
    let denom = expectation(&psi, problem.ata())?;
    if denom < 1e-12 {
        return Err(Error::SingularDirection);
    }
    Ok(1.0 / denom.sqrt())
}

/// Optimizer configuration surfaced through the run configuration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptimizerSettings {
    /// Evaluation budget per restart (including polish stages).
    pub max_evals: usize,
    /// Number of independent random starts.
    pub restarts: usize,
    /// Stop as soon as the cost drops to this value.
    pub target_cost: f64,
    /// Shot count per Hadamard-test term when not optimizing exactly.
    pub shots: u64,
    /// Use shot-based cost evaluations instead of exact ones.
    pub shot_mode: bool,
    pub seed: u64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            max_evals: 20_000,
            restarts: 5,
            target_cost: 1e-8,
            shots: 100_000,
            shot_mode: false,
            seed: 0x5EED,
        }
    }
}

/// Optimization record: best parameters, reached cost, the cost value at
/// every evaluation and whether the target was met.
#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    pub final_cost: f64,
    pub cost_trace: Vec<(usize, f64)>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Multi-start Nelder-Mead search over the ansatz parameters. Each restart
/// draws uniform angles in [0, 2pi), runs the simplex, then re-runs it from
/// the incumbent with progressively smaller simplex steps to polish the tail.
/// Returns the best restart; `converged` reports whether the cost target was
/// reached (callers decide how to treat a miss).
pub fn optimize(
    problem: &VqlsProblem,
    config: &AnsatzConfig,
    opt: &OptimizerSettings,
) -> Result<OptimizeResult> {
    let ansatz = build_ansatz(config)?;
    let n_params = ansatz.n_params();
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let mut trace: Vec<(usize, f64)> = Vec::new();
    let mut total_evals = 0usize;
    let mut best: Option<(Vec<f64>, f64)> = None;

    for restart in 0..opt.restarts.max(1) {
        let mode = if opt.shot_mode {
            CostMode::Shots {
                shots: opt.shots,
                // Common random numbers within a restart keep the surrogate
                // objective deterministic for the simplex.
                seed: derive_seed(opt.seed, 0xC0DE + restart as u64),
            }
        } else {
            CostMode::Exact
        };
        let mut evals_this_restart = 0usize;
        let mut objective = |x: &[f64]| {
            evals_this_restart += 1;
            total_evals += 1;
            let value = cost(problem, &ansatz, x, mode).unwrap_or(2.0);
            trace.push((total_evals, value));
            value
        };

        let x0: Vec<f64> = (0..n_params)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let mut incumbent = nelder_mead::minimize(&mut objective, &x0, 0.8, opt.max_evals, opt.target_cost);
        for step in [0.15, 0.03, 0.006, 0.0012] {
            if incumbent.f <= opt.target_cost || evals_this_restart >= opt.max_evals {
                break;
            }
            let budget = opt.max_evals - evals_this_restart;
            let polished =
                nelder_mead::minimize(&mut objective, &incumbent.x, step, budget, opt.target_cost);
            if polished.f < incumbent.f {
                incumbent = polished;
            }
        }

        let better = best.as_ref().map_or(true, |(_, f)| incumbent.f < *f);
        if better {
            best = Some((incumbent.x, incumbent.f));
        }
        if best.as_ref().unwrap().1 <= opt.target_cost {
            break;
        }
    }

    let (params, final_cost) = best.expect("at least one restart runs");
    Ok(OptimizeResult {
        converged: final_cost <= opt.target_cost,
        params,
        final_cost,
        cost_trace: trace,
        evaluations: total_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};

    fn identity_problem(n: usize) -> VqlsProblem {
        let m = DMatrix::<f64>::identity(1 << n, 1 << n);
        VqlsProblem::new(&m, ParamCircuit::basis_state(n, 0).unwrap(), 1 << n).unwrap()
    }

    #[test]
    fn ansatz_shapes_match_layout() {
        let c = build_ansatz(&AnsatzConfig {
            n_qubits: 1,
            n_layers: 1,
            entangler: Entangler::CzLinear,
        })
        .unwrap();
        assert_eq!(c.n_params(), 2);
        assert_eq!(c.depth_and_gate_report().entangling_gates, 0);

        let c = build_ansatz(&AnsatzConfig {
            n_qubits: 2,
            n_layers: 1,
            entangler: Entangler::CzLinear,
        })
        .unwrap();
        assert_eq!(c.n_params(), 4);
        let stats = c.depth_and_gate_report();
        assert_eq!(stats.entangling_gates, 1);
        assert!(stats.depth <= 5);

        let c = build_ansatz(&AnsatzConfig {
            n_qubits: 3,
            n_layers: 2,
            entangler: Entangler::CzLinear,
        })
        .unwrap();
        assert_eq!(c.n_params(), 9);
        let stats = c.depth_and_gate_report();
        assert_eq!(stats.entangling_gates, 4);
        assert!(stats.depth <= 24);
    }

    #[test]
    fn ring_entangler_closes_loop_only_above_two_qubits() {
        let ring3 = build_ansatz(&AnsatzConfig {
            n_qubits: 3,
            n_layers: 1,
            entangler: Entangler::CzRing,
        })
        .unwrap();
        assert_eq!(ring3.depth_and_gate_report().entangling_gates, 3);
        let ring2 = build_ansatz(&AnsatzConfig {
            n_qubits: 2,
            n_layers: 1,
            entangler: Entangler::CzRing,
        })
        .unwrap();
        assert_eq!(ring2.depth_and_gate_report().entangling_gates, 1);
    }

    #[test]
    fn cost_zero_for_exact_match_and_one_for_orthogonal() {
        let problem = identity_problem(1);
        let identity_circuit = ParamCircuit::new(1);
        let c = cost(&problem, &identity_circuit, &[], CostMode::Exact).unwrap();
        assert_abs_diff_eq!(c, 0.0, epsilon = 1e-12);

        let mut flip = ParamCircuit::new(1);
        flip.push(Gate::X { qubit: 0 }).unwrap();
        let c = cost(&problem, &flip, &[], CostMode::Exact).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cost_detects_sign_flip_through_z() {
        // A = Z, |b> = |+>, U|0> = |+>: A|+> = |->, orthogonal to |b>.
        let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let mut h = ParamCircuit::new(1);
        h.push(Gate::H { qubit: 0 }).unwrap();
        let problem = VqlsProblem::new(&z, h.clone(), 2).unwrap();
        let c = cost(&problem, &h, &[], CostMode::Exact).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cost_stays_in_unit_interval() {
        use rand::{Rng, SeedableRng};
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                5.0, -1.0, 0.5, 0.0, //
                -1.0, 4.0, -0.5, 0.3, //
                0.5, -0.5, 6.0, -1.2, //
                0.0, 0.3, -1.2, 3.0,
            ],
        );
        let problem = VqlsProblem::new(&m, ParamCircuit::basis_state(2, 1).unwrap(), 4).unwrap();
        let ansatz = build_ansatz(&AnsatzConfig::default_for(2)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let params: Vec<f64> = (0..ansatz.n_params())
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let c = cost(&problem, &ansatz, &params, CostMode::Exact).unwrap();
            assert!((0.0..=1.0).contains(&c), "cost {c} out of range");
        }
    }

    #[test]
    fn optimize_identity_system_is_instant() {
        let problem = identity_problem(2);
        let out = optimize(
            &problem,
            &AnsatzConfig::default_for(2),
            &OptimizerSettings::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.final_cost < 1e-8, "cost {}", out.final_cost);
    }

    #[test]
    fn optimize_recovers_dense_solution_direction_and_norm() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                20.0, -10.0, 0.0, -4.0, //
                -10.0, 24.0, -8.0, 0.0, //
                0.0, -8.0, 18.0, -6.0, //
                -4.0, 0.0, -6.0, 16.0,
            ],
        );
        let problem = VqlsProblem::new(&m, ParamCircuit::basis_state(2, 0).unwrap(), 4).unwrap();
        let config = AnsatzConfig::default_for(2);
        let opt = OptimizerSettings {
            target_cost: 1e-10,
            ..OptimizerSettings::default()
        };
        let out = optimize(&problem, &config, &opt).unwrap();
        assert!(out.converged, "cost stalled at {}", out.final_cost);

        // Dense oracle.
        let e0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let x = m.clone().lu().solve(&e0).unwrap();
        let x_hat = &x / x.norm();

        let ansatz = build_ansatz(&config).unwrap();
        let psi = simulate(&ansatz, &out.params).unwrap();
        let fidelity: f64 = psi
            .amplitudes()
            .iter()
            .zip(x_hat.iter())
            .map(|(a, b)| a.re * b)
            .sum::<f64>()
            .abs();
        assert!(fidelity > 1.0 - 1e-6, "fidelity {fidelity}");

        let norm = solution_norm(&problem, &ansatz, &out.params).unwrap();
        assert_abs_diff_eq!(norm, x.norm(), epsilon = 1e-6);

        // Zero-cost soundness: A U(w)|0> is proportional to |b>.
        let v = problem.a().apply(psi.amplitudes());
        let scale: f64 = (v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        assert!((v[0].re.abs() / scale - 1.0).abs() < 1e-6);
        for k in 1..4 {
            assert!(v[k].norm() / scale < 1e-5, "residual component {k}");
        }
    }

    #[test]
    fn solution_norm_trivial_scalings() {
        let problem = identity_problem(1);
        let identity_circuit = ParamCircuit::new(1);
        assert_abs_diff_eq!(
            solution_norm(&problem, &identity_circuit, &[]).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let double = DMatrix::<f64>::identity(2, 2) * 2.0;
        let problem = VqlsProblem::new(&double, ParamCircuit::basis_state(1, 0).unwrap(), 2).unwrap();
        assert_abs_diff_eq!(
            solution_norm(&problem, &identity_circuit, &[]).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn shot_mode_cost_tracks_exact_value() {
        let m = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let problem = VqlsProblem::new(&m, ParamCircuit::basis_state(1, 0).unwrap(), 2).unwrap();
        let ansatz = build_ansatz(&AnsatzConfig {
            n_qubits: 1,
            n_layers: 1,
            entangler: Entangler::CzLinear,
        })
        .unwrap();
        let params = [0.7, -0.3];
        let exact = cost(&problem, &ansatz, &params, CostMode::Exact).unwrap();
        let shots = 100_000u64;
        let est = cost(
            &problem,
            &ansatz,
            &params,
            CostMode::Shots { shots, seed: 31 },
        )
        .unwrap();
        // Each Hadamard term has sigma <= 1/sqrt(shots); with coefficient
        // magnitudes ~3 the propagated three-sigma band is ~0.05.
        assert!((est - exact).abs() < 0.05, "exact {exact}, shot {est}");
    }

    #[test]
    fn singular_direction_is_reported() {
        // A maps |0> to zero: use a projector-like symmetric matrix.
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let problem = VqlsProblem::new(&m, ParamCircuit::basis_state(1, 0).unwrap(), 2).unwrap();
        let identity_circuit = ParamCircuit::new(1);
        assert!(matches!(
            cost(&problem, &identity_circuit, &[], CostMode::Exact),
            Err(Error::SingularDirection)
        ));
        assert!(matches!(
            solution_norm(&problem, &identity_circuit, &[]),
            Err(Error::SingularDirection)
        ));
    }
}
