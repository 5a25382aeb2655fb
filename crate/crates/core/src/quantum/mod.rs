//! Dense complex operators and state vectors for a handful of qubits.
//!
//! Qubit 0 is the most significant bit of a basis index, matching the line
//! order used by [`crate::circuit`]. A gate acting on targets `[a, b]`
//! treats `a` as the high bit of its local index.

mod program;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::ops::Mul;

use num_complex::Complex64;

use crate::circuit::GateKind;
use crate::error::{Error, Result};

pub use program::{Branch, Execution, Instruction, Program};

/// Largest supported register.
pub const MAX_QUBITS: usize = 10;

/// Tolerance for exact-form gates.
pub const EXACT_TOL: f64 = 1e-10;

/// Tolerance for composed round trips.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// Outcomes at or below this probability are not reported by [`measure`].
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square `2^q × 2^q` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Result<Self> {
        Self::new(N, rows.into_iter().flatten().collect())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![ONE; dim])
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let dim = entries.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, &d) in entries.iter().enumerate() {
            data[i * dim + i] = d;
        }
        Self::new(dim, data)
    }

    /// Permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut data = vec![ZERO; dim * dim];
        let mut seen = vec![false; dim];
        for (j, &i) in perm.iter().enumerate() {
            if i >= dim || std::mem::replace(&mut seen[i], true) {
                return Err(Error::DimensionMismatch(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            data[i * dim + j] = ONE;
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let data = (0..n * n)
            .map(|k| self.data[(k % n) * n + k / n].conj())
            .collect();
        ComplexMatrix { dim: n, data }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn try_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(ComplexMatrix { dim: n, data })
    }

    /// Full `2^num_qubits` operator of `self` acting on `targets`.
    pub fn lift(&self, targets: &[usize], num_qubits: usize) -> Result<ComplexMatrix> {
        let dim = 1usize << num_qubits;
        check_dim(dim)?;
        let mut data = vec![ZERO; dim * dim];
        for col in 0..dim {
            let mut basis = vec![ZERO; dim];
            basis[col] = ONE;
            let image = apply_raw(self, &basis, targets, num_qubits)?;
            for (row, z) in image.into_iter().enumerate() {
                data[row * dim + col] = z;
            }
        }
        ComplexMatrix::new(dim, data)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// # Panics
    ///
    /// Panics on a dimension mismatch; use [`ComplexMatrix::try_mul`] to
    /// get an error instead.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimensions differ")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    if dim > 1 << MAX_QUBITS {
        return Err(Error::TooWide {
            width: dim.trailing_zeros() as usize,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Amplitudes over the `2^q` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that already have unit norm (within [`EXACT_TOL`]).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let s = StateVector { amplitudes };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(s)
    }

    /// Rescales arbitrary amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let n = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(StateVector {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions differ");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// The gates of the rotation/phase family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateName {
    Rx,
    H,
    Izz,
    T,
}

impl GateName {
    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Rx => "RX",
            GateName::H => "H",
            GateName::Izz => "IZZ",
            GateName::T => "T",
        }
    }
}

/// Matrix of a named gate.
///
/// `RX` and `IZZ` take an angle in radians; `H` and `T` take none. `IZZ`
/// keeps its global phase `e^{iθ/2}`. `T` is `diag(1, e^{iπ/2})`, which is
/// the matrix usually called `S`; the name is kept as printed in the
/// gate table this crate reproduces.
pub fn gate_matrix(name: GateName, theta: Option<f64>) -> Result<ComplexMatrix> {
    let i = Complex64::i();
    match (name, theta) {
        (GateName::Rx, Some(theta)) => {
            let c = Complex64::new((theta / 2.0).cos(), 0.0);
            let s = -i * (theta / 2.0).sin();
            ComplexMatrix::from_rows([[c, s], [s, c]])
        }
        (GateName::H, None) => {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            ComplexMatrix::from_rows([[h, h], [h, -h]])
        }
        (GateName::Izz, Some(theta)) => {
            let minus = (-i * theta / 2.0).exp();
            let plus = (i * theta / 2.0).exp();
            ComplexMatrix::diagonal(&[minus, plus, plus, minus]).map(|m| m.scale(plus))
        }
        (GateName::T, None) => ComplexMatrix::diagonal(&[ONE, (i * FRAC_PI_2).exp()]),
        (GateName::Rx | GateName::Izz, None) => Err(Error::MissingParameter(name.as_str())),
        (GateName::H | GateName::T, Some(_)) => Err(Error::UnexpectedParameter(name.as_str())),
    }
}

/// Permutation matrix of a classical reversible gate, operands in
/// controls-first order.
pub fn classical_gate_matrix(kind: GateKind) -> ComplexMatrix {
    let perm: &[usize] = match kind {
        GateKind::Not => &[1, 0],
        GateKind::Cnot => &[0b00, 0b01, 0b11, 0b10],
        GateKind::Toffoli => &[0, 1, 2, 3, 4, 5, 0b111, 0b110],
        GateKind::Fredkin => &[0, 1, 2, 3, 4, 0b110, 0b101, 7],
    };
    ComplexMatrix::permutation(perm).expect("fixed permutation is valid")
}

/// True iff every entry of `m·m† − I` has modulus at most `tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    let product = m * &m.adjoint();
    let id = ComplexMatrix::identity(m.dim()).expect("dimension already validated");
    product.max_abs_diff(&id) <= tol
}

/// Inverse of a unitary operator (its conjugate transpose).
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !is_unitary(m, EXACT_TOL) {
        return Err(Error::NotUnitary);
    }
    Ok(m.adjoint())
}

/// Applies `m` to the qubits `targets` of `s`.
///
/// Norm is preserved when `m` is unitary; otherwise the returned amplitudes
/// are left unnormalized.
pub fn apply(m: &ComplexMatrix, s: &StateVector, targets: &[usize]) -> Result<StateVector> {
    let amplitudes = apply_raw(m, &s.amplitudes, targets, s.num_qubits())?;
    Ok(StateVector { amplitudes })
}

fn apply_raw(
    m: &ComplexMatrix,
    amps: &[Complex64],
    targets: &[usize],
    num_qubits: usize,
) -> Result<Vec<Complex64>> {
    let k = targets.len();
    if m.dim() != 1 << k {
        return Err(Error::DimensionMismatch(format!(
            "{0}x{0} operator cannot act on {k} target qubit(s)",
            m.dim()
        )));
    }
    if k > num_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{k}-qubit operator on a {num_qubits}-qubit state"
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "target qubit {t} out of range for {num_qubits} qubits"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::DimensionMismatch(format!(
                "repeated target qubit {t}"
            )));
        }
    }

    // Bit of the global index carrying local bit `j` (local bit k-1 is targets[0]).
    let masks: Vec<usize> = targets
        .iter()
        .rev()
        .map(|&t| 1usize << (num_qubits - 1 - t))
        .collect();
    let target_mask: usize = masks.iter().sum();
    let spread = |local: usize| -> usize {
        masks
            .iter()
            .enumerate()
            .filter(|(j, _)| local >> j & 1 == 1)
            .map(|(_, &mask)| mask)
            .sum()
    };
    let offsets: Vec<usize> = (0..m.dim()).map(spread).collect();

    let mut out = vec![ZERO; amps.len()];
    let mut local = vec![ZERO; m.dim()];
    for base in (0..amps.len()).filter(|b| b & target_mask == 0) {
        for (c, &off) in offsets.iter().enumerate() {
            local[c] = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            out[base | off] = (0..m.dim()).map(|c| m.get(r, c) * local[c]).sum();
        }
    }
    Ok(out)
}

/// One possible result of measuring a qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub qubit: usize,
    /// Measured bit value.
    pub basis_index: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

impl MeasurementOutcome {
    /// Classical bits erased by the measurement: always one. The collapse
    /// is non-unitary and cannot be undone.
    pub const DISSIPATED_BITS: u64 = 1;
}

/// Measures `qubit` in the computational basis.
///
/// Returns every outcome with probability above [`NEGLIGIBLE_PROBABILITY`],
/// ordered by bit value, each with its renormalized post-measurement state.
pub fn measure(s: &StateVector, qubit: usize) -> Result<Vec<MeasurementOutcome>> {
    let n = s.num_qubits();
    if qubit >= n {
        return Err(Error::DimensionMismatch(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let total = s.norm_sqr();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let mask = 1usize << (n - 1 - qubit);
    let mut outcomes = Vec::with_capacity(2);
    for bit in 0..2 {
        let projected: Vec<Complex64> = s
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, &z)| {
                if (idx & mask != 0) == (bit == 1) {
                    z
                } else {
                    ZERO
                }
            })
            .collect();
        let weight: f64 = projected.iter().map(|z| z.norm_sqr()).sum();
        let probability = weight / total;
        if probability <= NEGLIGIBLE_PROBABILITY {
            continue;
        }
        outcomes.push(MeasurementOutcome {
            qubit,
            basis_index: bit,
            probability,
            post_state: StateVector::normalized(projected)?,
        });
    }
    Ok(outcomes)
}
