//! Gate-level circuits realising the optimal mirror cloner on three qubits.
//!
//! Qubits 1 and 2 carry the clones and qubit 3 is the ancilla. The input
//! qubit enters on qubit 1 with the other two prepared in `|0>`.

mod gate;
mod propagator;
mod text;

pub use gate::{decompose_ccr, hadamard_factor, Gate, Polarity, REGISTER};
pub use propagator::{
    eqneighbor_hamiltonian, eqneighbor_propagator, interaction_time, propagator_coefficients,
    EvolutionParams,
};
pub use text::{parse_circuit, write_circuit};

use crate::error::{check_polar, Error, Result};
use crate::models::optimal_lambda;
use crate::quantum::{CMatrix, CVector, Complex64, PureState};

/// Ordered gate list, applied first to last.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate()?;
        }
        Ok(Self { gates })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit made of the first `n` gates.
    pub fn prefix(&self, n: usize) -> Circuit {
        Circuit {
            gates: self.gates[..n.min(self.gates.len())].to_vec(),
        }
    }

    /// `U_last ⋯ U_first`.
    pub fn matrix(&self) -> Result<CMatrix> {
        self.gates
            .iter()
            .try_fold(CMatrix::identity(8, 8), |acc, g| Ok(g.matrix()? * acc))
    }
}

/// Applies the gates of `c` to `psi` in order.
pub fn run_circuit(c: &Circuit, psi: &PureState) -> Result<PureState> {
    if psi.dim() != 1 << REGISTER {
        return Err(Error::DimensionMismatch {
            expected: 1 << REGISTER,
            found: psi.dim(),
        });
    }
    let mut amps: CVector = psi.amplitudes().clone();
    for g in &c.gates {
        amps = g.matrix()? * amps;
    }
    Ok(PureState::from_vector_unchecked(amps))
}

/// `a|0> + b|1>` on qubit 1, followed by `|00>`.
pub fn register_input(psi: &PureState) -> Result<PureState> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    psi.kron(&PureState::basis(2, 0)?)
}

/// Rotation, controlled Hadamard and three CNOTs.
pub fn circuit_mpcc_v1(theta: f64) -> Result<Circuit> {
    check_polar(theta)?;
    let gamma = 2.0 * optimal_lambda(theta).clamp(-1.0, 1.0).acos();
    Circuit::new(vec![
        Gate::RotY { target: 3, gamma },
        Gate::Ch {
            control: 3,
            target: 2,
        },
        Gate::Cnot {
            control: 1,
            target: 3,
        },
        Gate::Cnot {
            control: 2,
            target: 1,
        },
        Gate::Cnot {
            control: 3,
            target: 2,
        },
    ])
}

/// Encoding, exchange evolution for `t_θ`, and two doubly controlled phase
/// corrections.
pub fn circuit_mpcc_v2(theta: f64, kappa: f64) -> Result<Circuit> {
    let p = EvolutionParams::new(theta, kappa)?;
    Circuit::new(vec![
        Gate::Cnot {
            control: 1,
            target: 2,
        },
        Gate::Cnot {
            control: 1,
            target: 3,
        },
        Gate::Not { target: 3 },
        Gate::EqNeighborEvolve { t: p.t, kappa },
        Gate::Ccr {
            controls: [1, 2],
            target: 3,
            polarity: Polarity::Ones,
            phi: p.phi,
        },
        Gate::Ccr {
            controls: [1, 2],
            target: 3,
            polarity: Polarity::Zeros,
            phi: -p.phi,
        },
        Gate::Not { target: 3 },
    ])
}

/// `(|<a|b>| ≥ 1 - tol, 1 - |<a|b>|)`.
pub fn equal_up_to_global_phase(a: &PureState, b: &PureState, tol: f64) -> Result<(bool, f64)> {
    let overlap: Complex64 = a.inner(b)?;
    let residual = 1.0 - overlap.norm();
    Ok((residual <= tol, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{mpcc_fidelity, mpcc_isometry_apply};
    use crate::quantum::{fidelity_pure, ket_from_angles, partial_trace, real, unitarity_defect};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn equator_input() -> PureState {
        PureState::new(vec![real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2)]).unwrap()
    }

    fn residual(a: &PureState, b: &PureState) -> f64 {
        equal_up_to_global_phase(a, b, 0.0).unwrap().1
    }

    #[test]
    fn run_circuit_basics() {
        let k = PureState::basis(3, 0b000).unwrap();
        let out = run_circuit(&Circuit::default(), &k).unwrap();
        assert_eq!(out, k);
        let c = Circuit::new(vec![Gate::Not { target: 3 }]).unwrap();
        assert_eq!(run_circuit(&c, &k).unwrap().amplitude(0b001), real(1.0));
        assert!(run_circuit(&c, &PureState::basis(1, 0).unwrap()).is_err());
        assert!(Circuit::new(vec![Gate::Not { target: 5 }]).is_err());
    }

    #[test]
    fn global_phase_comparison() {
        let psi = ket_from_angles(1.0, 0.3).unwrap();
        let (ok, r) = equal_up_to_global_phase(&psi, &psi.with_global_phase(PI / 7.0), 1e-12).unwrap();
        assert!(ok && r.abs() < 1e-15);
        let (ok, r) = equal_up_to_global_phase(
            &PureState::basis(1, 0).unwrap(),
            &PureState::basis(1, 1).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!(!ok && r == 1.0);
        assert!(equal_up_to_global_phase(&psi, &PureState::basis(2, 0).unwrap(), 1e-12).is_err());
    }

    #[test]
    fn v1_poles() {
        let c = circuit_mpcc_v1(0.0).unwrap();
        let out = run_circuit(&c, &PureState::basis(3, 0b000).unwrap()).unwrap();
        assert!((out.amplitude(0b000) - real(1.0)).norm() < 1e-12);
        let out = run_circuit(&c, &PureState::basis(3, 0b100).unwrap()).unwrap();
        assert!((out.amplitude(0b111) - real(1.0)).norm() < 1e-12);
        assert!(circuit_mpcc_v1(-0.1).is_err());
    }

    #[test]
    fn v1_reproduces_isometry_images_exactly() {
        for k in 0..=18 {
            let t = PI * k as f64 / 18.0;
            let c = circuit_mpcc_v1(t).unwrap();
            for b in 0..2 {
                let input = PureState::basis(1, b).unwrap();
                let out = run_circuit(&c, &register_input(&input).unwrap()).unwrap();
                let target = mpcc_isometry_apply(t, &input).unwrap();
                let diff = (out.amplitudes() - target.amplitudes()).camax();
                assert!(diff < 1e-12, "theta {t} basis {b}: {diff}");
            }
        }
    }

    #[test]
    fn equator_examples() {
        let psi = equator_input();
        let target = mpcc_isometry_apply(FRAC_PI_2, &psi).unwrap();
        let input = register_input(&psi).unwrap();
        let v1 = run_circuit(&circuit_mpcc_v1(FRAC_PI_2).unwrap(), &input).unwrap();
        assert!(residual(&v1, &target) < 1e-10);
        let v2 = run_circuit(&circuit_mpcc_v2(FRAC_PI_2, 1.0).unwrap(), &input).unwrap();
        assert!(residual(&v2, &target) < 1e-10);
    }

    #[test]
    fn v2_pole_and_intermediate_state() {
        let k0 = PureState::basis(3, 0).unwrap();
        let out = run_circuit(&circuit_mpcc_v2(0.0, 1.0).unwrap(), &k0).unwrap();
        assert!(residual(&out, &k0) < 1e-12);

        let psi = ket_from_angles(1.2, 0.7).unwrap();
        let (a, b) = (psi.amplitude(0), psi.amplitude(1));
        let c = circuit_mpcc_v2(1.2, 1.0).unwrap();
        let mid = run_circuit(&c.prefix(3), &register_input(&psi).unwrap()).unwrap();
        for idx in 0..8 {
            let expect = match idx {
                0b001 => a,
                0b110 => b,
                _ => real(0.0),
            };
            assert_eq!(mid.amplitude(idx), expect);
        }
        assert!(circuit_mpcc_v2(1.0, 0.0).is_err());
    }

    #[test]
    fn v2_at_third_of_pi() {
        let psi = ket_from_angles(PI / 3.0, 0.4).unwrap();
        let target = mpcc_isometry_apply(PI / 3.0, &psi).unwrap();
        let out = run_circuit(&circuit_mpcc_v2(PI / 3.0, 0.7).unwrap(), &register_input(&psi).unwrap()).unwrap();
        let (ok, r) = equal_up_to_global_phase(&out, &target, 1e-10).unwrap();
        assert!(ok, "residual {r}");
    }

    #[test]
    fn circuit_matrices_are_unitary() {
        for k in 0..=18 {
            let t = PI * k as f64 / 18.0;
            assert!(unitarity_defect(&circuit_mpcc_v1(t).unwrap().matrix().unwrap()) < 1e-10);
            assert!(unitarity_defect(&circuit_mpcc_v2(t, 1.3).unwrap().matrix().unwrap()) < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn circuits_clone_optimally(theta in 0.0f64..=PI, polar in 0.0f64..=PI, phi in 0.0f64..std::f64::consts::TAU, kappa in 0.2f64..3.0) {
            let psi = ket_from_angles(polar, phi).unwrap();
            let target = mpcc_isometry_apply(theta, &psi).unwrap();
            let input = register_input(&psi).unwrap();
            for c in [circuit_mpcc_v1(theta).unwrap(), circuit_mpcc_v2(theta, kappa).unwrap()] {
                let out = run_circuit(&c, &input).unwrap();
                prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
                prop_assert!(residual(&out, &target) <= 1e-10);
            }
        }

        #[test]
        fn circuit_clones_reach_optimal_fidelity(theta in 0.0f64..=PI, phi in 0.0f64..std::f64::consts::TAU) {
            let psi = ket_from_angles(theta, phi).unwrap();
            let input = register_input(&psi).unwrap();
            for c in [circuit_mpcc_v1(theta).unwrap(), circuit_mpcc_v2(theta, 1.0).unwrap()] {
                let rho = run_circuit(&c, &input).unwrap().density();
                for q in [1, 2] {
                    let f = fidelity_pure(&psi, &partial_trace(&rho, &[q]).unwrap()).unwrap();
                    prop_assert!((f - mpcc_fidelity(theta)).abs() <= 1e-10);
                }
            }
        }
    }
}
