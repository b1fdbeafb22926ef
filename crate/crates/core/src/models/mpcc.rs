//! Closed-form optimal mirror phase-covariant cloner.
//!
//! The cloner is fixed by a single amplitude `Λ(θ)`: the isometry
//!
//! ```text
//! |0> ↦ Λ|00>|0> + Λ̄|ψ+>|1>,    |1> ↦ Λ|11>|1> + Λ̄|ψ+>|0>
//! ```
//!
//! with `Λ̄ = sqrt(1 - Λ²)` and `|ψ+> = (|01> + |10>)/√2`. Its Choi matrix has
//! entries `A = Λ²`, `B = Λ̄²/2` and `C = ΛΛ̄/√2` on a fixed sparsity pattern.

use std::f64::consts::SQRT_2;

use super::choi::{ChoiMatrix, CHOI_DIM};
use crate::error::{check_polar, Error, Result};
use crate::quantum::{
    fidelity_pure, real, BlochVector, CMatrix, CVector, Complex64, DensityMatrix, PureState,
    ALGEBRAIC_TOL,
};

/// `P(θ) = 2 - 4cos²θ + 3cos⁴θ`.
pub fn p_of_theta(theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    2.0 - 4.0 * c2 + 3.0 * c2 * c2
}

/// The four stationary points of the fidelity in `Λ`, indexed `i + 2j` with
/// `Λ_{i+2j} = (-1)^i sqrt(1/2 + (-1)^j cos²θ / (2 sqrt P))`.
pub fn lambda_candidates(theta: f64) -> [f64; 4] {
    let shift = theta.cos().powi(2) / (2.0 * p_of_theta(theta).sqrt());
    let plus = (0.5 + shift).clamp(0.0, 1.0).sqrt();
    let minus = (0.5 - shift).clamp(0.0, 1.0).sqrt();
    [plus, -plus, minus, -minus]
}

/// Single-clone fidelity of the symmetric cloner with amplitude `Λ`, for
/// inputs with polar angle `θ` (or `π - θ`):
/// `(1 + Λ²)/2 - sin²θ (Λ² - Λ sqrt(2 - 2Λ²)) / 2`.
pub fn fidelity_of_lambda(theta: f64, lambda: f64) -> f64 {
    let s2 = theta.sin().powi(2);
    let l2 = lambda * lambda;
    0.5 * (1.0 + l2) - 0.5 * s2 * (l2 - lambda * (2.0 - 2.0 * l2).max(0.0).sqrt())
}

/// Optimal amplitude `Λ = Λ₀`.
pub fn optimal_lambda(theta: f64) -> f64 {
    lambda_candidates(theta)[0]
}

fn complement(lambda: f64) -> f64 {
    (1.0 - lambda * lambda).max(0.0).sqrt()
}

/// Closed-form fidelity `½(1 + Λ²cos²θ + √2 ΛΛ̄ sin²θ)` of both clones.
pub fn mpcc_fidelity(theta: f64) -> f64 {
    let lambda = optimal_lambda(theta);
    let lbar = complement(lambda);
    0.5 * (1.0 + lambda * lambda * theta.cos().powi(2)
        + SQRT_2 * lambda * lbar * theta.sin().powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpccParams {
    pub theta: f64,
    pub p: f64,
    pub candidates: [f64; 4],
    pub lambda: f64,
    pub lambda_bar: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MpccParams {
    /// Parameters of the optimal cloner at `θ ∈ [0, π]`.
    ///
    /// Fails with [`Error::Consistency`] if any of the four stationary points
    /// beats the selected root by more than 1e-12.
    pub fn new(theta: f64) -> Result<Self> {
        check_polar(theta)?;
        let candidates = lambda_candidates(theta);
        let lambda = candidates[0];
        let best = fidelity_of_lambda(theta, lambda);
        for (k, &cand) in candidates.iter().enumerate().skip(1) {
            let f = fidelity_of_lambda(theta, cand);
            if f > best + 1e-12 {
                return Err(Error::Consistency(format!(
                    "candidate Λ{k} = {cand} gives F = {f} > {best} at theta = {theta}"
                )));
            }
        }
        let lambda_bar = complement(lambda);
        let a = lambda * lambda;
        let b = 0.5 * lambda_bar * lambda_bar;
        let c = lambda * lambda_bar / SQRT_2;
        Ok(Self {
            theta,
            p: p_of_theta(theta),
            candidates,
            lambda,
            lambda_bar,
            a,
            b,
            c,
        })
    }

    pub fn fidelity(&self) -> f64 {
        mpcc_fidelity(self.theta)
    }
}

pub fn mpcc_params(theta: f64) -> Result<MpccParams> {
    MpccParams::new(theta)
}

/// Choi matrix of the symmetric cloner with amplitude `Λ ∈ [0, 1]`.
pub fn symmetric_cloner_choi(lambda: f64) -> Result<ChoiMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("Λ = {lambda} is outside [0, 1]")));
    }
    let lbar = complement(lambda);
    let a = real(lambda * lambda);
    let b = real(0.5 * lbar * lbar);
    let c = real(lambda * lbar / SQRT_2);
    let mut m = CMatrix::zeros(CHOI_DIM, CHOI_DIM);
    m[(0, 0)] = a;
    m[(7, 7)] = a;
    for i in [1, 2] {
        for j in [1, 2] {
            m[(i, j)] = b;
            m[(i + 4, j + 4)] = b;
        }
    }
    for (i, j) in [(0, 5), (0, 6), (1, 7), (2, 7)] {
        m[(i, j)] = c;
        m[(j, i)] = c;
    }
    ChoiMatrix::new(m)
}

/// Choi matrix of the optimal cloner at `θ`.
pub fn mpcc_choi(theta: f64) -> Result<ChoiMatrix> {
    let params = MpccParams::new(theta)?;
    symmetric_cloner_choi(params.lambda)
}

/// Images of `|0>` and `|1>` under the symmetric-cloner isometry, ordered
/// (clone 1, clone 2, ancilla).
pub fn symmetric_cloner_images(lambda: f64) -> [PureState; 2] {
    let lbar = complement(lambda);
    let h = lbar / SQRT_2;
    let mut v0 = CVector::zeros(8);
    v0[0b000] = real(lambda);
    v0[0b011] = real(h);
    v0[0b101] = real(h);
    let mut v1 = CVector::zeros(8);
    v1[0b111] = real(lambda);
    v1[0b010] = real(h);
    v1[0b100] = real(h);
    [
        PureState::from_vector_unchecked(v0),
        PureState::from_vector_unchecked(v1),
    ]
}

/// Applies the optimal isometry at `θ` to a single-qubit input; the result is
/// ordered (clone 1, clone 2, ancilla).
pub fn mpcc_isometry_apply(theta: f64, psi: &PureState) -> Result<PureState> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    let params = MpccParams::new(theta)?;
    let [v0, v1] = symmetric_cloner_images(params.lambda);
    let out = v0.amplitudes() * psi.amplitude(0) + v1.amplitudes() * psi.amplitude(1);
    Ok(PureState::from_vector_unchecked(out))
}

/// Reduced clone state predicted in closed form for input `(θ, φ)`.
pub fn mpcc_clone_density(theta: f64, phi: f64) -> Result<DensityMatrix> {
    let params = MpccParams::new(theta)?;
    let (l, lb) = (params.lambda, params.lambda_bar);
    let diag = l * l * theta.cos();
    let off = l * lb * theta.sin() / SQRT_2;
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            real(0.5 * (1.0 + diag)),
            Complex64::from_polar(off, -phi),
            Complex64::from_polar(off, phi),
            real(0.5 * (1.0 - diag)),
        ],
    );
    DensityMatrix::new(m)
}

/// Bloch vector of either clone: `(√2ΛΛ̄ sinθ cosφ, √2ΛΛ̄ sinθ sinφ, Λ² cosθ)`.
pub fn mpcc_clone_bloch(theta: f64, phi: f64) -> BlochVector {
    let lambda = optimal_lambda(theta);
    let transverse = SQRT_2 * lambda * complement(lambda);
    BlochVector::new(
        transverse * theta.sin() * phi.cos(),
        transverse * theta.sin() * phi.sin(),
        lambda * lambda * theta.cos(),
    )
}

/// Joint and single-clone output states of a cloning channel.
#[derive(Debug, Clone)]
pub struct CloneOutput {
    pub joint: DensityMatrix,
    pub clone1: DensityMatrix,
    pub clone2: DensityMatrix,
}

impl CloneOutput {
    /// `(F₁, F₂)` against the ideal input.
    pub fn fidelities(&self, psi: &PureState) -> Result<(f64, f64)> {
        Ok((
            fidelity_pure(psi, &self.clone1)?,
            fidelity_pure(psi, &self.clone2)?,
        ))
    }
}

/// Runs `χ` on the pure input `ψ` and reduces to each clone.
pub fn clone(psi: &PureState, chi: &ChoiMatrix) -> Result<CloneOutput> {
    let joint = chi.apply(&psi.density())?;
    let clone1 = joint.partial_trace(&[1])?;
    let clone2 = joint.partial_trace(&[2])?;
    debug_assert!((clone1.trace() - 1.0).abs() < 1e3 * ALGEBRAIC_TOL);
    Ok(CloneOutput {
        joint,
        clone1,
        clone2,
    })
}
