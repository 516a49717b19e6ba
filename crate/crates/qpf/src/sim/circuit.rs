//! Parameterized quantum circuits over the native gate set
//! {RY, RZ, H, X, CZ, CNOT}.

use crate::error::{Error, Result};

/// Rotation angle: either a bound constant or a reference into the
/// circuit's parameter vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Bound(f64),
    Param(usize),
}

impl Angle {
    pub(crate) fn resolve(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Bound(v) => v,
            Angle::Param(i) => params[i],
        }
    }
}

/// One gate application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Ry { qubit: usize, angle: Angle },
    Rz { qubit: usize, angle: Angle },
    H { qubit: usize },
    X { qubit: usize },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::H { qubit } | Gate::X { qubit } => {
                (qubit, None)
            }
            Gate::Cz { a, b } => (a, Some(b)),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    /// CZ and CNOT both count as entangling gates.
    pub fn is_entangling(&self) -> bool {
        matches!(self, Gate::Cz { .. } | Gate::Cnot { .. })
    }
}

/// Depth and gate-count summary of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CircuitStats {
    /// Longest dependency chain under greedy layering, one slot per gate.
    pub depth: usize,
    /// Number of two-qubit (CZ or CNOT) gates.
    pub entangling_gates: usize,
    pub total_gates: usize,
}

/// An ordered list of gates on `n_qubits` qubits, with rotation angles that
/// are either bound or dense references `0..n_params` into a parameter
/// vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl ParamCircuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            n_params: 0,
        }
    }

    /// Circuit preparing the computational basis state `|j>` with X gates.
    pub fn basis_state(n_qubits: usize, j: usize) -> Result<Self> {
        if j >= (1usize << n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: j,
                n_qubits,
            });
        }
        let mut c = Self::new(n_qubits);
        for q in 0..n_qubits {
            if (j >> q) & 1 == 1 {
                c.push(Gate::X { qubit: q })?;
            }
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Appends a gate, validating qubit indices and tracking the parameter
    /// count for `Angle::Param` references.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (q0, q1) = gate.qubits();
        self.check_qubit(q0)?;
        if let Some(q1) = q1 {
            self.check_qubit(q1)?;
            if q0 == q1 {
                return Err(Error::DuplicateQubits(q0));
            }
        }
        let angle = match gate {
            Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        };
        if let Some(Angle::Param(i)) = angle {
            self.n_params = self.n_params.max(i + 1);
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends an RY gate referencing a freshly allocated parameter slot and
    /// returns its index.
    pub fn push_ry_param(&mut self, qubit: usize) -> Result<usize> {
        let idx = self.n_params;
        self.push(Gate::Ry {
            qubit,
            angle: Angle::Param(idx),
        })?;
        Ok(idx)
    }

    /// Binds all parameter references to the supplied values, yielding a
    /// parameter-free circuit.
    pub fn bind(&self, params: &[f64]) -> Result<ParamCircuit> {
        if params.len() != self.n_params {
            return Err(Error::ParamCountMismatch {
                expected: self.n_params,
                got: params.len(),
            });
        }
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Ry { qubit, angle } => Gate::Ry {
                    qubit,
                    angle: Angle::Bound(angle.resolve(params)),
                },
                Gate::Rz { qubit, angle } => Gate::Rz {
                    qubit,
                    angle: Angle::Bound(angle.resolve(params)),
                },
                other => other,
            })
            .collect();
        Ok(ParamCircuit {
            n_qubits: self.n_qubits,
            gates,
            n_params: 0,
        })
    }

    /// Inverse of a parameter-free circuit: gates reversed, rotation angles
    /// negated (H, X, CZ and CNOT are self-inverse).
    pub fn inverse(&self) -> Result<ParamCircuit> {
        if self.n_params != 0 {
            return Err(Error::ParamCountMismatch {
                expected: 0,
                got: self.n_params,
            });
        }
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match *g {
                Gate::Ry { qubit, angle } => Gate::Ry {
                    qubit,
                    angle: Angle::Bound(-angle.resolve(&[])),
                },
                Gate::Rz { qubit, angle } => Gate::Rz {
                    qubit,
                    angle: Angle::Bound(-angle.resolve(&[])),
                },
                other => other,
            })
            .collect();
        Ok(ParamCircuit {
            n_qubits: self.n_qubits,
            gates,
            n_params: 0,
        })
    }

    /// Greedy-layered depth plus entangling and total gate counts.
    pub fn depth_and_gate_report(&self) -> CircuitStats {
        let mut front = vec![0usize; self.n_qubits];
        let mut entangling = 0;
        for gate in &self.gates {
            let (q0, q1) = gate.qubits();
            let layer = match q1 {
                Some(q1) => front[q0].max(front[q1]) + 1,
                None => front[q0] + 1,
            };
            front[q0] = layer;
            if let Some(q1) = q1 {
                front[q1] = layer;
            }
            if gate.is_entangling() {
                entangling += 1;
            }
        }
        CircuitStats {
            depth: front.iter().copied().max().unwrap_or(0),
            entangling_gates: entangling,
            total_gates: self.gates.len(),
        }
    }
}
