//! Exchange dynamics of three equally coupled qubits.

use crate::error::{check_finite, check_polar, domain, Result};
use crate::models::optimal_lambda;
use crate::quantum::{pauli, real, CMatrix, Complex64, HermitianOperator, Operator};

use super::gate::embed;

/// `H = κ Σ_{n<m} (σ₊⁽ⁿ⁾σ₋⁽ᵐ⁾ + σ₋⁽ⁿ⁾σ₊⁽ᵐ⁾)`; conserves the number of excitations.
pub fn eqneighbor_hamiltonian(kappa: f64) -> Result<HermitianOperator> {
    check_finite("kappa", kappa)?;
    let hop = pauli::raising().kronecker(&pauli::lowering())
        + pauli::lowering().kronecker(&pauli::raising());
    let mut h = CMatrix::zeros(8, 8);
    for (n, m) in [(1, 2), (1, 3), (2, 3)] {
        h += embed(&hop, &[n, m]);
    }
    HermitianOperator::new(h * real(kappa))
}

/// `exp(-iHt)` by eigendecomposition.
pub fn eqneighbor_propagator(t: f64, kappa: f64) -> Result<Operator> {
    check_finite("time", t)?;
    Ok(eqneighbor_hamiltonian(kappa)?.propagator(t))
}

/// Closed-form amplitudes `(C₀, C₁)`: a single excitation stays put with
/// amplitude `C₀` and hops to each other site with `C₁`. The same pair
/// governs the two-excitation sector.
pub fn propagator_coefficients(t: f64, kappa: f64) -> (Complex64, Complex64) {
    let x = kappa * t;
    let c0 = (Complex64::from_polar(1.0, -2.0 * x) + Complex64::from_polar(2.0, x)) / 3.0;
    let c1 = Complex64::from_polar(
        2.0 / 3.0 * (1.5 * x).sin(),
        -0.5 * (std::f64::consts::PI + x),
    );
    (c0, c1)
}

/// Time at which `√2 |C₁| = Λ̄(θ)`:
/// `t = (2/(3κ)) arcsin(3Λ̄ / (2√2))`.
pub fn interaction_time(theta: f64, kappa: f64) -> Result<f64> {
    check_polar(theta)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(domain(format!("coupling must be positive, got {kappa}")));
    }
    let lambda = optimal_lambda(theta);
    let lbar = (1.0 - lambda * lambda).max(0.0).sqrt();
    let arg = 3.0 * lbar / (2.0 * std::f64::consts::SQRT_2);
    Ok(2.0 / (3.0 * kappa) * arg.asin())
}

/// Evolution step of the exchange-based circuit at one `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub kappa: f64,
    pub t: f64,
    pub c0: Complex64,
    pub c1: Complex64,
    pub phi0: f64,
    pub phi1: f64,
    /// Phase-correction angle `2(φ₀ - φ₁)`.
    pub phi: f64,
}

impl EvolutionParams {
    pub fn new(theta: f64, kappa: f64) -> Result<Self> {
        let t = interaction_time(theta, kappa)?;
        let (c0, c1) = propagator_coefficients(t, kappa);
        let phi0 = c0.arg();
        // C₁ vanishes at t = 0; its phase is then irrelevant.
        let phi1 = if c1.norm() > 0.0 { c1.arg() } else { phi0 };
        Ok(Self {
            kappa,
            t,
            c0,
            c1,
            phi0,
            phi1,
            phi: 2.0 * (phi0 - phi1),
        })
    }

    /// `|C₀|² + 2|C₁|²`.
    pub fn norm(&self) -> f64 {
        self.c0.norm_sqr() + 2.0 * self.c1.norm_sqr()
    }
}
