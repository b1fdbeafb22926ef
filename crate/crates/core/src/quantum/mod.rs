//! Dense complex linear algebra for registers of at most three qubits.
//!
//! Qubits are numbered from 1 and the leftmost qubit is the most significant
//! bit of a basis index, so `|q1 q2 q3>` sits at index `4*q1 + 2*q2 + q3`.
//! All values are immutable; every operation returns a fresh value.

mod operator;
mod spectral;
mod state;

pub use operator::{
    bloch_vector, fidelity_pure, partial_trace, BlochVector, DensityMatrix, HermitianOperator,
    Operator,
};
pub use spectral::{eig_hermitian, eigh, evolve, hermitian_power, Spectrum};
pub use state::{ket_from_angles, PureState};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for algebraic identities (norms, traces, Hermiticity).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for spectral checks (eigenvalue signs, reconstructions).
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Largest register handled by this crate.
pub const MAX_QUBITS: usize = 3;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Number of qubits for a Hilbert-space dimension in {2, 4, 8}.
pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::Domain(format!(
            "dimension {dim} is not 2^n for n in 1..={MAX_QUBITS}"
        ))),
    }
}

/// Places the bits of `local` (most significant first) onto the register
/// positions `qubits` (0-based from the left) of an `n`-qubit index.
pub(crate) fn scatter_bits(local: usize, qubits: &[usize], n: usize) -> usize {
    let k = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
        let bit = (local >> (k - 1 - pos)) & 1;
        acc | (bit << (n - 1 - q))
    })
}

/// Inverse of [`scatter_bits`]: reads the bits at `qubits` out of `index`.
pub(crate) fn gather_bits(index: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
}

/// Maximum entrywise deviation `max |m - m^†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Maximum entrywise magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U^† U - 1|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Single-qubit Pauli and ladder matrices.
pub mod pauli {
    use super::{c, real, CMatrix, Complex64};

    fn m2(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[a, b, c_, d])
    }

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn x() -> CMatrix {
        m2(real(0.0), real(1.0), real(1.0), real(0.0))
    }

    pub fn y() -> CMatrix {
        m2(real(0.0), c(0.0, -1.0), c(0.0, 1.0), real(0.0))
    }

    pub fn z() -> CMatrix {
        m2(real(1.0), real(0.0), real(0.0), real(-1.0))
    }

    /// Adds one excitation: `|1><0| = (σx - iσy)/2`.
    pub fn raising() -> CMatrix {
        m2(real(0.0), real(0.0), real(1.0), real(0.0))
    }

    /// Removes one excitation: `|0><1| = (σx + iσy)/2`.
    pub fn lowering() -> CMatrix {
        m2(real(0.0), real(1.0), real(0.0), real(0.0))
    }
}

/// Either operand kind accepted by [`tensor`].
#[derive(Debug, Clone, PartialEq)]
pub enum QObject {
    State(PureState),
    Operator(Operator),
}

/// Kronecker product with the left factor most significant.
pub fn tensor(a: &QObject, b: &QObject) -> Result<QObject> {
    match (a, b) {
        (QObject::State(x), QObject::State(y)) => x.kron(y).map(QObject::State),
        (QObject::Operator(x), QObject::Operator(y)) => x.kron(y).map(QObject::Operator),
        _ => Err(Error::KindMismatch),
    }
}
