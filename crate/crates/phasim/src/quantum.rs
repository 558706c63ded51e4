//! Dense complex linear algebra for few-qubit states.
//!
//! States are kept small (1..=4 qubits) and dense. Basis ordering is
//! big-endian: qubit 0 is the most significant bit of a computational
//! basis index, and by convention it is the first-measured photon (the
//! double-passed mode-C qubit in the three-resource protocol).
//!
//! The protocol engine works on density matrices throughout, so mixed
//! inputs (e.g. tomography reconstructions supplied by a user) run through
//! the same code path as ideal pure states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities (normalization, Hermiticity, unitarity).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for eigenvalue positivity of density matrices.
pub const EIGENVALUE_TOL: f64 = 1e-10;

const MIN_QUBITS: usize = 1;
const MAX_QUBITS: usize = 4;

fn check_qubit_count(n: usize) -> Result<()> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(Error::UnsupportedQubitCount(n, MIN_QUBITS, MAX_QUBITS));
    }
    Ok(())
}

/// X-basis measurement result: diagonal (`d`) or antidiagonal (`a`)
/// polarization, the eigenstates (|0⟩ ± |1⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XOutcome {
    Diagonal,
    Antidiagonal,
}

impl XOutcome {
    /// Bit value used in estimate arithmetic: d → 0, a → 1.
    pub fn bit(self) -> u8 {
        match self {
            XOutcome::Diagonal => 0,
            XOutcome::Antidiagonal => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            XOutcome::Diagonal => "d",
            XOutcome::Antidiagonal => "a",
        }
    }

    fn eigenstate(self) -> [Complex64; 2] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            XOutcome::Diagonal => [h, h],
            XOutcome::Antidiagonal => [h, -h],
        }
    }
}

/// Outcome of a projective X-basis measurement on one qubit.
///
/// `collapsed` is the reduced trace-one state of the remaining qubits;
/// it is `None` when the measured qubit was the last one.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub result: XOutcome,
    pub probability: f64,
    pub collapsed: Option<DensityMatrix>,
}

/// Normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Build a state from its 2^n complex amplitudes, validating
    /// normalization to within [`ALGEBRA_TOL`]. Zero-norm or otherwise
    /// unnormalized inputs are rejected, never silently rescaled.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > ALGEBRA_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self {
            num_qubits,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Computational basis state |index⟩.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(num_qubits, amplitudes)
    }

    /// Tensor product of single-qubit states, each given as normalized
    /// (amp0, amp1) pairs; qubit 0 of the result is the first pair.
    pub fn product(qubits: &[[Complex64; 2]]) -> Result<Self> {
        check_qubit_count(qubits.len())?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for q in qubits {
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for a in &amplitudes {
                next.push(a * q[0]);
                next.push(a * q[1]);
            }
            amplitudes = next;
        }
        Self::new(qubits.len(), amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    /// CNOT on the computational basis: |c, t⟩ → |c, t ⊕ c⟩.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::ControlTargetClash(control));
        }
        for &q in &[control, target] {
            if q >= self.num_qubits {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        let control_mask = 1usize << (self.num_qubits - 1 - control);
        let target_mask = 1usize << (self.num_qubits - 1 - target);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let j = if i & control_mask != 0 {
                i ^ target_mask
            } else {
                i
            };
            out[j] = *amp;
        }
        Self::new(self.num_qubits, out)
    }
}

/// Unitary operator, validated so that ‖UU† − I‖_max < [`ALGEBRA_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let dim = matrix.nrows();
        let gram = &matrix * matrix.adjoint();
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                deviation = deviation.max((gram[(i, j)] - target).norm());
            }
        }
        if !deviation.is_finite() || deviation > ALGEBRA_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    /// Multipass phase gate diag(1, e^{ipφ}): the unknown phase sampled
    /// coherently `p` times by one photon.
    pub fn phase_gate(passes: u32, phi: f64) -> Result<Self> {
        if passes < 1 {
            return Err(Error::InvalidPassCount(passes));
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite(phi));
        }
        let one = Complex64::new(1.0, 0.0);
        let phase = Complex64::from_polar(1.0, passes as f64 * phi);
        Self::new(DMatrix::from_row_slice(
            2,
            2,
            &[one, 0.0.into(), 0.0.into(), phase],
        ))
    }

    /// Controllable reference phase diag(e^{iθ}, 1) on the reference arm.
    pub fn reference_phase(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite(theta));
        }
        let one = Complex64::new(1.0, 0.0);
        let phase = Complex64::from_polar(1.0, theta);
        Self::new(DMatrix::from_row_slice(
            2,
            2,
            &[phase, 0.0.into(), 0.0.into(), one],
        ))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &Unitary) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Self::new(&self.matrix * &other.matrix)
    }
}

/// Mixed state: Hermitian, trace-one, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validate and wrap a candidate density matrix. The three invariants
    /// are checked in a fixed order (Hermiticity, unit trace, positivity)
    /// and the first violated one is reported.
    pub fn new(num_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let mut herm_dev = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                herm_dev = herm_dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if !herm_dev.is_finite() || herm_dev > ALGEBRA_TOL {
            return Err(Error::NotHermitian {
                deviation: herm_dev,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > ALGEBRA_TOL || trace.im.abs() > ALGEBRA_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let eigenvalues = matrix.clone().symmetric_eigen().eigenvalues;
        if let Some(min) = eigenvalues.iter().cloned().reduce(f64::min) {
            if min < -EIGENVALUE_TOL {
                return Err(Error::NotPositiveSemidefinite { eigenvalue: min });
            }
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Promote a pure state to its rank-one density matrix |ψ⟩⟨ψ|.
    pub fn from_pure(state: &PureState) -> Self {
        let dim = state.dim();
        let mut matrix = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix[(i, j)] = state.amplitude(i) * state.amplitude(j).conj();
            }
        }
        Self {
            num_qubits: state.num_qubits(),
            matrix,
        }
    }

    /// I / 2^n: the state carrying no phase information at all.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let matrix =
            DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self { num_qubits, matrix })
    }

    /// Convex mixture (1 − λ)·self + λ·other.
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::ProbabilityOutOfRange(lambda));
        }
        let w0 = Complex64::new(1.0 - lambda, 0.0);
        let w1 = Complex64::new(lambda, 0.0);
        Self::new(self.num_qubits, &self.matrix * w0 + &other.matrix * w1)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr ρ², in [1/2^n, 1].
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Overlap ⟨ψ|ρ|ψ⟩ with a pure reference state.
    pub fn fidelity(&self, reference: &PureState) -> Result<f64> {
        if reference.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: reference.dim(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += reference.amplitude(i).conj() * self.matrix[(i, j)] * reference.amplitude(j);
            }
        }
        Ok(acc.re)
    }

    /// Apply a single-qubit gate on `qubit`: ρ → (I⊗…⊗U⊗…⊗I) ρ (…)†.
    pub fn apply_on_qubit(&self, gate: &Unitary, qubit: usize) -> Result<Self> {
        if gate.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: gate.dim(),
            });
        }
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let embedded = embed_single_qubit_gate(gate.matrix(), qubit, self.num_qubits);
        let rho = &embedded * &self.matrix * embedded.adjoint();
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: rho,
        })
    }

    /// Probabilities of the two X-basis outcomes on `qubit`.
    pub fn x_probabilities(&self, qubit: usize) -> Result<(f64, f64)> {
        let p_d = self.x_outcome_probability(qubit, XOutcome::Diagonal)?;
        let p_a = self.x_outcome_probability(qubit, XOutcome::Antidiagonal)?;
        Ok((p_d, p_a))
    }

    fn x_outcome_probability(&self, qubit: usize, outcome: XOutcome) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let v = outcome.eigenstate();
        let shift = self.num_qubits - 1 - qubit;
        let mut p = Complex64::new(0.0, 0.0);
        // Tr[ρ (|r⟩⟨r| ⊗ I)] contracted without forming the projector.
        for rest in 0..(self.dim() >> 1) {
            for (b, vb) in v.iter().enumerate() {
                for (bp, vbp) in v.iter().enumerate() {
                    let row = splice_bit(rest, shift, bp);
                    let col = splice_bit(rest, shift, b);
                    p += vbp.conj() * self.matrix[(row, col)] * vb;
                }
            }
        }
        Ok(p.re)
    }

    /// Deterministically project `qubit` onto the given X outcome,
    /// returning its probability and the reduced state of the remaining
    /// qubits (normalized; `None` collapsed state if probability is zero
    /// or no qubits remain).
    pub fn project_x(&self, qubit: usize, outcome: XOutcome) -> Result<MeasurementOutcome> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let trace_dev = (self.trace() - 1.0).abs();
        if trace_dev > 1e-9 {
            return Err(Error::TraceNotOne {
                trace: self.trace(),
            });
        }
        let v = outcome.eigenstate();
        let shift = self.num_qubits - 1 - qubit;
        let reduced_dim = self.dim() >> 1;
        let mut reduced = DMatrix::<Complex64>::zeros(reduced_dim, reduced_dim);
        for i in 0..reduced_dim {
            for j in 0..reduced_dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, vb) in v.iter().enumerate() {
                    for (bp, vbp) in v.iter().enumerate() {
                        acc += vb.conj()
                            * self.matrix[(splice_bit(i, shift, b), splice_bit(j, shift, bp))]
                            * vbp;
                    }
                }
                reduced[(i, j)] = acc;
            }
        }
        let probability = reduced.trace().re.clamp(0.0, 1.0);
        let collapsed = if self.num_qubits == 1 || probability <= 0.0 {
            None
        } else {
            let scale = Complex64::new(1.0 / probability, 0.0);
            Some(DensityMatrix {
                num_qubits: self.num_qubits - 1,
                matrix: reduced * scale,
            })
        };
        Ok(MeasurementOutcome {
            result: outcome,
            probability,
            collapsed,
        })
    }

    /// Sample an X-basis measurement on `qubit` with one uniform draw in
    /// [0, 1): outcome d when `draw < P_d`, else a.
    pub fn measure_x(&self, qubit: usize, draw: f64) -> Result<MeasurementOutcome> {
        if !(0.0..1.0).contains(&draw) {
            return Err(Error::ProbabilityOutOfRange(draw));
        }
        let p_d = self.x_outcome_probability(qubit, XOutcome::Diagonal)?;
        let outcome = if draw < p_d {
            XOutcome::Diagonal
        } else {
            XOutcome::Antidiagonal
        };
        self.project_x(qubit, outcome)
    }
}

/// Index with bit `b` spliced in at position `shift` (counting from the
/// least significant bit), the remaining bits of `rest` packed around it.
fn splice_bit(rest: usize, shift: usize, b: usize) -> usize {
    let low = rest & ((1 << shift) - 1);
    let high = rest >> shift;
    (high << (shift + 1)) | (b << shift) | low
}

/// I ⊗ … ⊗ U ⊗ … ⊗ I with `U` at `qubit` (big-endian), as a dense matrix.
pub fn embed_single_qubit_gate(
    gate: &DMatrix<Complex64>,
    qubit: usize,
    num_qubits: usize,
) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    let shift = num_qubits - 1 - qubit;
    let mut out = DMatrix::zeros(dim, dim);
    for rest in 0..(dim >> 1) {
        for b_out in 0..2 {
            for b_in in 0..2 {
                out[(
                    splice_bit(rest, shift, b_out),
                    splice_bit(rest, shift, b_in),
                )] = gate[(b_out, b_in)];
            }
        }
    }
    out
}
