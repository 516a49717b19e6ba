//! Pauli-string algebra: weighted sums of tensor products of single-qubit
//! Pauli operators, and the trace-inner-product decomposition that turns the
//! real coefficient matrices of the decoupled power-flow subsystems into
//! operators a variational linear solver can consume.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped from decompositions;
/// below the numerical noise of double-precision trace accumulation.
pub const COEFF_PRUNE_THRESHOLD: f64 = 1e-14;

/// Single-qubit Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(PauliOp::I),
            'X' => Ok(PauliOp::X),
            'Y' => Ok(PauliOp::Y),
            'Z' => Ok(PauliOp::Z),
            other => Err(Error::InvalidPauliLabel(other)),
        }
    }

    fn to_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Pauli operators.
///
/// Character `i` of the label addresses qubit `i`, and qubit `i` maps to bit
/// `i` of a basis-state index, so `"XI"` applies X on qubit 0 and identity on
/// qubit 1. The induced 2^n x 2^n matrix is unitary and Hermitian.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<PauliOp>,
}

impl PauliString {
    pub fn new(ops: Vec<PauliOp>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyPauliLabel);
        }
        Ok(Self { ops })
    }

    /// All-identity string on `n` qubits.
    pub fn identity(n: usize) -> Self {
        Self {
            ops: vec![PauliOp::I; n],
        }
    }

    /// Parses a label such as `"IXZ"`. Rejects empty labels and any character
    /// outside `{I, X, Y, Z}`.
    pub fn from_label(label: &str) -> Result<Self> {
        if label.is_empty() {
            return Err(Error::EmptyPauliLabel);
        }
        let ops = label.chars().map(PauliOp::from_char).collect::<Result<_>>()?;
        Ok(Self { ops })
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[PauliOp] {
        &self.ops
    }

    pub fn y_count(&self) -> usize {
        self.ops.iter().filter(|&&op| op == PauliOp::Y).count()
    }

    /// Bit mask of qubits whose operator flips the basis state (X or Y).
    fn x_mask(&self) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &op)| op == PauliOp::X || op == PauliOp::Y)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Bit mask of qubits whose operator contributes a (-1)^bit phase (Z or Y).
    fn phase_mask(&self) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &op)| op == PauliOp::Z || op == PauliOp::Y)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Phase picked up by basis state `k`: P|k> = phase(k) |k ^ x_mask>.
    fn phase(&self, k: usize, i_pow_y: Complex64, phase_mask: usize) -> Complex64 {
        if (k & phase_mask).count_ones() % 2 == 0 {
            i_pow_y
        } else {
            -i_pow_y
        }
    }

    fn i_pow_y(&self) -> Complex64 {
        match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Applies the operator to an amplitude vector of length 2^n.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let x_mask = self.x_mask();
        let phase_mask = self.phase_mask();
        let i_pow_y = self.i_pow_y();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (k, &a) in amps.iter().enumerate() {
            out[k ^ x_mask] = self.phase(k, i_pow_y, phase_mask) * a;
        }
        out
    }

    /// <psi| P |psi> for an amplitude vector of length 2^n.
    pub fn expectation_with(&self, amps: &[Complex64]) -> Complex64 {
        let x_mask = self.x_mask();
        let phase_mask = self.phase_mask();
        let i_pow_y = self.i_pow_y();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &a) in amps.iter().enumerate() {
            acc += amps[k ^ x_mask].conj() * self.phase(k, i_pow_y, phase_mask) * a;
        }
        acc
    }

    /// Tr(P . M) exploiting that each Pauli row holds a single nonzero entry.
    pub fn trace_with(&self, m: &DMatrix<f64>) -> Complex64 {
        let x_mask = self.x_mask();
        let phase_mask = self.phase_mask();
        let i_pow_y = self.i_pow_y();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..m.nrows() {
            acc += self.phase(k, i_pow_y, phase_mask) * m[(k, k ^ x_mask)];
        }
        acc
    }

    /// Dense 2^n x 2^n matrix of the operator.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits();
        let x_mask = self.x_mask();
        let phase_mask = self.phase_mask();
        let i_pow_y = self.i_pow_y();
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k ^ x_mask, k)] = self.phase(k, i_pow_y, phase_mask);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{}", op.to_char())?;
        }
        Ok(())
    }
}

/// A real matrix expressed as a weighted sum of Pauli strings.
///
/// Invariants: term strings are unique, coefficients are real with magnitude
/// at least [`COEFF_PRUNE_THRESHOLD`], and summing `c_l * matrix(P_l)`
/// reproduces the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    terms: Vec<(f64, PauliString)>,
    n_qubits: usize,
}

impl PauliDecomposition {
    /// Decomposes a real symmetric matrix of dimension 2^n into Pauli terms
    /// with coefficients `c_l = Tr(P_l . M) / 2^n`, enumerating all 4^n
    /// strings and dropping coefficients below the pruning threshold.
    pub fn decompose_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let max_abs = m.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let sym_tol = 1e-9 * (1.0 + max_abs);
        for row in 0..dim {
            for col in (row + 1)..dim {
                let diff = (m[(row, col)] - m[(col, row)]).abs();
                if diff > sym_tol {
                    return Err(Error::NotSymmetric { row, col, diff });
                }
            }
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let mut terms = Vec::new();
        for code in 0..(1usize << (2 * n_qubits)) {
            let ops = (0..n_qubits)
                .map(|q| match (code >> (2 * q)) & 3 {
                    0 => PauliOp::I,
                    1 => PauliOp::X,
                    2 => PauliOp::Y,
                    _ => PauliOp::Z,
                })
                .collect();
            let string = PauliString { ops };
            // Tr(P.M) is real for Hermitian M; the imaginary part only carries
            // round-off and the antisymmetric residue already bounded above.
            let coeff = string.trace_with(m).re / dim as f64;
            if coeff.abs() >= COEFF_PRUNE_THRESHOLD {
                terms.push((coeff, string));
            }
        }
        Ok(Self { terms, n_qubits })
    }

    /// Builds a decomposition from explicit terms; merges duplicate strings
    /// and prunes small coefficients.
    pub fn from_terms(n_qubits: usize, raw: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut terms: Vec<(f64, PauliString)> = Vec::new();
        for (c, s) in raw {
            if s.n_qubits() != n_qubits {
                return Err(Error::QubitCountMismatch {
                    left: n_qubits,
                    right: s.n_qubits(),
                });
            }
            match terms.iter_mut().find(|(_, t)| *t == s) {
                Some((existing, _)) => *existing += c,
                None => terms.push((c, s)),
            }
        }
        terms.retain(|(c, _)| c.abs() >= COEFF_PRUNE_THRESHOLD);
        Ok(Self { terms, n_qubits })
    }

    /// The identity operator on `n` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            terms: vec![(1.0, PauliString::identity(n_qubits))],
            n_qubits,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense matrix of the operator; exact inverse of [`decompose_matrix`].
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut acc: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
        for (c, s) in &self.terms {
            acc += s.to_matrix() * Complex64::new(*c, 0.0);
        }
        acc.map(|z| z.re)
    }

    /// Applies the operator to an amplitude vector: sum_l c_l P_l |psi>.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (c, s) in &self.terms {
            for (k, v) in s.apply(amps).into_iter().enumerate() {
                out[k] += v * c;
            }
        }
        out
    }
}

/// Embeds a square system into the next power-of-two dimension: the matrix
/// goes in the top-left block, added diagonal entries are 1 and added
/// right-hand-side entries are 0, so the padded solution restricted to the
/// original indices equals the original solution. Returns the padded matrix,
/// padded vector and the original dimension.
pub fn pad_to_power_of_two(
    m: &DMatrix<f64>,
    rhs: &DVector<f64>,
) -> Result<(DMatrix<f64>, DVector<f64>, usize)> {
    let dim = m.nrows();
    if dim != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if rhs.len() != dim {
        return Err(Error::DimensionMismatch {
            dim,
            vec_len: rhs.len(),
        });
    }
    if dim == 0 {
        return Err(Error::NotPowerOfTwo(0));
    }
    let target = dim.next_power_of_two();
    if target == dim {
        return Ok((m.clone(), rhs.clone(), dim));
    }
    let mut mp = DMatrix::zeros(target, target);
    mp.view_mut((0, 0), (dim, dim)).copy_from(m);
    for k in dim..target {
        mp[(k, k)] = 1.0;
    }
    let mut vp = DVector::zeros(target);
    vp.view_mut((0, 0), (dim, 1)).copy_from(rhs);
    Ok((mp, vp, dim))
}
