use std::f64::consts::SQRT_2;

use super::propagator::eqneighbor_propagator;
use crate::error::{Error, Result};
use crate::quantum::{gather_bits, pauli, real, CMatrix, Complex64, PureState};

/// Number of qubits in the simulated register.
pub const REGISTER: usize = 3;
const DIM: usize = 1 << REGISTER;

/// Control pattern of a doubly controlled rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Fires when both controls are `|1>`.
    Ones,
    /// Fires when both controls are `|0>`.
    Zeros,
}

/// Gates acting on a three-qubit register; qubits are numbered 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `[[cos γ/2, -sin γ/2], [sin γ/2, cos γ/2]]`.
    RotY { target: usize, gamma: f64 },
    Cnot { control: usize, target: usize },
    Not { target: usize },
    /// Controlled Hadamard.
    Ch { control: usize, target: usize },
    /// Controlled `R(φ) = diag(e^{-iφ/2}, e^{iφ/2})`.
    Cr { control: usize, target: usize, phi: f64 },
    /// `R(φ)` on `target` when both controls match `polarity`.
    Ccr {
        controls: [usize; 2],
        target: usize,
        polarity: Polarity,
        phi: f64,
    },
    /// `exp(-iHt)` for equal exchange coupling `κ` between all three qubits.
    EqNeighborEvolve { t: f64, kappa: f64 },
}

impl Gate {
    /// Qubits touched by the gate, in the order they appear in its definition.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::RotY { target, .. } | Gate::Not { target } => vec![target],
            Gate::Cnot { control, target }
            | Gate::Ch { control, target }
            | Gate::Cr {
                control, target, ..
            } => vec![control, target],
            Gate::Ccr {
                controls, target, ..
            } => vec![controls[0], controls[1], target],
            Gate::EqNeighborEvolve { .. } => vec![1, 2, 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let qubits = self.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if !(1..=REGISTER).contains(&q) {
                return Err(Error::InvalidGate(format!("qubit {q} is outside 1..=3")));
            }
            if qubits[..k].contains(&q) {
                return Err(Error::InvalidGate(format!("qubit {q} is used twice")));
            }
        }
        let angles: &[f64] = match self {
            Gate::RotY { gamma, .. } => &[*gamma],
            Gate::Cr { phi, .. } | Gate::Ccr { phi, .. } => &[*phi],
            Gate::EqNeighborEvolve { t, kappa } => &[*t, *kappa],
            _ => &[],
        };
        if let Some(x) = angles.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidGate(format!("non-finite parameter {x}")));
        }
        Ok(())
    }

    /// The 8×8 matrix of the gate on the full register.
    pub fn matrix(&self) -> Result<CMatrix> {
        self.validate()?;
        let q = self.qubits();
        Ok(match *self {
            Gate::RotY { gamma, .. } => embed(&rot_y(gamma), &q),
            Gate::Not { .. } => embed(&pauli::x(), &q),
            Gate::Cnot { .. } => embed(&controlled(&pauli::x()), &q),
            Gate::Ch {
                control, target, ..
            } => {
                // A X A on the target, conjugating a CNOT.
                let a = embed(&hadamard_factor(), &[target]);
                let cx = embed(&controlled(&pauli::x()), &[control, target]);
                &a * cx * &a
            }
            Gate::Cr { phi, .. } => embed(&controlled(&rz_phase(phi)), &q),
            Gate::Ccr { polarity, phi, .. } => embed(&doubly_controlled(phi, polarity), &q),
            Gate::EqNeighborEvolve { t, kappa } => eqneighbor_propagator(t, kappa)?.into_matrix(),
        })
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.dim() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                found: psi.dim(),
            });
        }
        Ok(PureState::from_vector_unchecked(self.matrix()? * psi.amplitudes()))
    }
}

/// Embeds a `2^k`-dimensional operator acting on `qubits` (1-based, most
/// significant first) into the three-qubit register.
pub(crate) fn embed(local: &CMatrix, qubits: &[usize]) -> CMatrix {
    let q0: Vec<usize> = qubits.iter().map(|q| q - 1).collect();
    let mask = q0
        .iter()
        .fold(0usize, |m, &q| m | (1 << (REGISTER - 1 - q)));
    CMatrix::from_fn(DIM, DIM, |i, j| {
        if i & !mask != j & !mask {
            return real(0.0);
        }
        local[(gather_bits(i, &q0, REGISTER), gather_bits(j, &q0, REGISTER))]
    })
}

pub(crate) fn rot_y(gamma: f64) -> CMatrix {
    let (s, c) = (0.5 * gamma).sin_cos();
    CMatrix::from_row_slice(2, 2, &[real(c), real(-s), real(s), real(c)])
}

/// `R(φ) = diag(e^{-iφ/2}, e^{iφ/2})`.
pub(crate) fn rz_phase(phi: f64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, -0.5 * phi),
            real(0.0),
            real(0.0),
            Complex64::from_polar(1.0, 0.5 * phi),
        ],
    )
}

/// The real involution `A` with `A X A = H`.
pub fn hadamard_factor() -> CMatrix {
    let n = 1.0 / (4.0 + 2.0 * SQRT_2).sqrt();
    let d = 1.0 + SQRT_2;
    CMatrix::from_row_slice(2, 2, &[real(n), real(n * d), real(n * d), real(-n)])
}

/// `|0><0| ⊗ 1 + |1><1| ⊗ u`.
fn controlled(u: &CMatrix) -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m.view_mut((2, 2), (2, 2)).copy_from(u);
    m
}

fn doubly_controlled(phi: f64, polarity: Polarity) -> CMatrix {
    let (block, r) = match polarity {
        Polarity::Ones => (3, rz_phase(phi)),
        Polarity::Zeros => (0, rz_phase(phi)),
    };
    let mut m = CMatrix::identity(8, 8);
    m.view_mut((2 * block, 2 * block), (2, 2)).copy_from(&r);
    m
}

/// Two-qubit realisation of a doubly controlled rotation:
/// `CR(2→3, φ/2) · CNOT(1→2) · CR(2→3, -φ/2) · CNOT(1→2) · CR(1→3, φ/2)`
/// in application order, with controls 1, 2 and target 3. The zero-polarity
/// form is wrapped in `X` on both controls.
pub fn decompose_ccr(phi: f64, polarity: Polarity) -> Vec<Gate> {
    let core = [
        Gate::Cr {
            control: 2,
            target: 3,
            phi: 0.5 * phi,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        Gate::Cr {
            control: 2,
            target: 3,
            phi: -0.5 * phi,
        },
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        Gate::Cr {
            control: 1,
            target: 3,
            phi: 0.5 * phi,
        },
    ];
    match polarity {
        Polarity::Ones => core.to_vec(),
        Polarity::Zeros => {
            let flips = [Gate::Not { target: 1 }, Gate::Not { target: 2 }];
            flips.iter().chain(&core).chain(&flips).copied().collect()
        }
    }
}
