use super::{qubits_for_dim, CMatrix, CVector, Complex64, DensityMatrix, ALGEBRAIC_TOL};
use crate::error::{check_finite, Error, Result};

/// Normalised pure state of one to three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting anything that is not unit-norm
    /// within [`ALGEBRAIC_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amps.len())?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::Domain(format!(
                "state is not normalised: squared norm {norm_sqr}"
            )));
        }
        Ok(Self {
            amps: CVector::from_vec(amps),
        })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!("cannot normalise a vector of norm {norm}")));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            amps: CVector::from_vec(amps),
        })
    }

    pub(crate) fn from_vector_unchecked(amps: CVector) -> Self {
        debug_assert!(qubits_for_dim(amps.len()).is_ok());
        Self { amps }
    }

    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        qubits_for_dim(dim)?;
        if index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn kron(&self, other: &PureState) -> Result<PureState> {
        let dim = self.dim() * other.dim();
        qubits_for_dim(dim)?;
        Ok(Self {
            amps: self.amps.kronecker(&other.amps),
        })
    }

    /// `|ψ><ψ|` as a raw matrix.
    pub fn outer(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.outer())
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> PureState {
        let f = Complex64::from_polar(1.0, phase);
        Self {
            amps: self.amps.map(|a| a * f),
        }
    }
}

/// `cos(ϑ/2)|0> + e^{iφ} sin(ϑ/2)|1>`.
pub fn ket_from_angles(polar: f64, azimuth: f64) -> Result<PureState> {
    check_finite("polar angle", polar)?;
    check_finite("azimuthal angle", azimuth)?;
    let half = 0.5 * polar;
    Ok(PureState::from_vector_unchecked(CVector::from_vec(vec![
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), azimuth),
    ])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-15
    }

    #[test]
    fn poles_and_equator() {
        let n = ket_from_angles(0.0, 0.0).unwrap();
        assert!(close(n.amplitude(0), 1.0, 0.0) && close(n.amplitude(1), 0.0, 0.0));
        let s = ket_from_angles(PI, 0.0).unwrap();
        assert!(close(s.amplitude(0), 0.0, 0.0) && close(s.amplitude(1), 1.0, 0.0));
        let e = ket_from_angles(FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(close(e.amplitude(0), FRAC_1_SQRT_2, 0.0));
        assert!(close(e.amplitude(1), 0.0, FRAC_1_SQRT_2));
    }

    #[test]
    fn non_finite_angles_rejected() {
        assert!(matches!(ket_from_angles(f64::NAN, 0.0), Err(Error::Domain(_))));
        assert!(matches!(ket_from_angles(0.0, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn constructor_validates() {
        let bad = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(PureState::new(bad.clone()).is_err());
        assert!((PureState::normalized(bad).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(PureState::new(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(PureState::basis(4, 0).is_err());
    }

    #[test]
    fn inner_dimension_mismatch() {
        let a = PureState::basis(1, 0).unwrap();
        let b = PureState::basis(2, 0).unwrap();
        assert_eq!(
            a.inner(&b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 4
            })
        );
    }
}
