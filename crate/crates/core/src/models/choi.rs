use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quantum::{
    eigh, hermitian_power, hermiticity_defect, CMatrix, Complex64, DensityMatrix, PureState,
    SPECTRAL_TOL,
};

/// Dimension of `H_in ⊗ H_out1 ⊗ H_out2`.
pub const CHOI_DIM: usize = 8;

/// Relative eigenvalue cutoff used when inverting square roots of the
/// input-space marginal.
pub(crate) const PINV_CUTOFF: f64 = 1e-12;

/// Choi matrix of a 1→2 qubit channel on `in ⊗ out1 ⊗ out2`, basis index
/// `4*q_in + 2*q_out1 + q_out2`.
///
/// Convention: `χ = Σ_ij |i><j| ⊗ E(|i><j|)`, so the channel acts as
/// `E(ρ) = Tr_in[χ (ρ^T ⊗ 1)]` with the transpose taken in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    m: CMatrix,
}

impl ChoiMatrix {
    /// Validates Hermiticity, positivity and trace preservation, each within
    /// [`SPECTRAL_TOL`].
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.shape() != (CHOI_DIM, CHOI_DIM) {
            return Err(Error::DimensionMismatch {
                expected: CHOI_DIM,
                found: m.nrows(),
            });
        }
        let herm = hermiticity_defect(&m);
        if herm > SPECTRAL_TOL {
            return Err(Error::InvalidChoi(format!("not Hermitian ({herm:e})")));
        }
        let min = eigh(&m)?.min();
        if min < -SPECTRAL_TOL {
            return Err(Error::InvalidChoi(format!("negative eigenvalue {min:e}")));
        }
        let tp = tp_defect_of(&m);
        if tp > SPECTRAL_TOL {
            return Err(Error::InvalidChoi(format!(
                "not trace preserving (defect {tp:e})"
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// `max |Tr_out χ - 1|`.
    pub fn tp_defect(&self) -> f64 {
        tp_defect_of(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.m).map(|s| s.min()).unwrap_or(f64::NAN)
    }

    /// Choi matrix of the isometry `|i> ↦ images[i]`, where each image is a
    /// three-qubit state ordered (clone 1, clone 2, ancilla).
    pub fn from_isometry(image0: &PureState, image1: &PureState) -> Result<Self> {
        for img in [image0, image1] {
            if img.dim() != 8 {
                return Err(Error::DimensionMismatch {
                    expected: 8,
                    found: img.dim(),
                });
            }
        }
        let images = [image0.amplitudes(), image1.amplitudes()];
        let mut m = CMatrix::zeros(CHOI_DIM, CHOI_DIM);
        for (i, vi) in images.iter().enumerate() {
            for (j, vj) in images.iter().enumerate() {
                // E(|i><j|) = Tr_anc |v_i><v_j|, ancilla is the last qubit.
                for a in 0..4 {
                    for b in 0..4 {
                        let e = (0..2)
                            .map(|anc| vi[2 * a + anc] * vj[2 * b + anc].conj())
                            .sum::<Complex64>();
                        m[(4 * i + a, 4 * j + b)] = e;
                    }
                }
            }
        }
        ChoiMatrix::new(m)
    }

    /// Random channel: a complex Ginibre matrix `G G^†` congruence-normalised
    /// to trace preservation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let g = CMatrix::from_fn(CHOI_DIM, CHOI_DIM, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let m = &g * g.adjoint();
        let m = normalize_trace_preserving(&m).expect("Ginibre Choi matrix is Hermitian");
        Self { m }
    }

    /// `ρ_out = Tr_in[χ (ρ_in^T ⊗ 1_out)]`.
    pub fn apply(&self, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
        if rho_in.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho_in.dim(),
            });
        }
        let rt = rho_in.matrix().transpose();
        let mut out = CMatrix::zeros(4, 4);
        // Tr_in[χ (ρ^T ⊗ 1)]_{ab} = Σ_{ij} χ_{(i,a),(j,b)} ρ^T_{ji}
        for i in 0..2 {
            for j in 0..2 {
                let w = rt[(j, i)];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for a in 0..4 {
                    for b in 0..4 {
                        out[(a, b)] += self.m[(4 * i + a, 4 * j + b)] * w;
                    }
                }
            }
        }
        let out = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

/// `Tr_out` of an 8×8 matrix on `in ⊗ out`, as a 2×2 matrix on `in`.
pub(crate) fn trace_out_outputs(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| (0..4).map(|a| m[(4 * i + a, 4 * j + a)]).sum())
}

/// `T ⊗ 1_4` for a 2×2 `T`.
pub(crate) fn lift_input(t: &CMatrix) -> CMatrix {
    t.kronecker(&CMatrix::identity(4, 4))
}

fn tp_defect_of(m: &CMatrix) -> f64 {
    let t = trace_out_outputs(m);
    (t - CMatrix::identity(2, 2))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `(T^{-1/2} ⊗ 1) m (T^{-1/2} ⊗ 1)` with `T = Tr_out m`: the congruence that
/// restores `Tr_out = 1` while keeping positivity.
pub(crate) fn normalize_trace_preserving(m: &CMatrix) -> Result<CMatrix> {
    let t = trace_out_outputs(m);
    let k = lift_input(&hermitian_power(&t, -0.5, PINV_CUTOFF)?);
    let out = &k * m * &k;
    Ok((&out + out.adjoint()) * Complex64::new(0.5, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_channels_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let chi = ChoiMatrix::random(&mut rng);
            assert!(ChoiMatrix::new(chi.matrix().clone()).is_ok());
            assert!(chi.tp_defect() < 1e-12);
        }
    }

    #[test]
    fn validation_rejects_non_trace_preserving() {
        let m = CMatrix::identity(8, 8);
        assert!(matches!(ChoiMatrix::new(m), Err(Error::InvalidChoi(_))));
        assert!(matches!(
            ChoiMatrix::new(CMatrix::identity(4, 4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_on_first_clone() {
        // E(ρ) = ρ ⊗ |0><0|
        let k0 = PureState::basis(3, 0b000).unwrap();
        let k1 = PureState::basis(3, 0b100).unwrap();
        let chi = ChoiMatrix::from_isometry(&k0, &k1).unwrap();
        let psi = crate::quantum::ket_from_angles(1.1, 0.4).unwrap();
        let out = chi.apply(&psi.density()).unwrap();
        let expect = psi.density().matrix().kronecker(&PureState::basis(1, 0).unwrap().outer());
        assert!(max_abs_diff(out.matrix(), &expect) < 1e-15);
        assert!((out.trace() - 1.0).abs() < 1e-15);
    }
}
