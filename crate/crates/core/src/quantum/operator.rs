use super::{
    hermiticity_defect, pauli, qubits_for_dim, real, scatter_bits, CMatrix,
    Complex64, PureState, Spectrum, ALGEBRAIC_TOL, SPECTRAL_TOL,
};
use crate::error::{Error, Result};

/// Square complex matrix on one to three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: CMatrix,
}

impl Operator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        qubits_for_dim(m.nrows())?;
        Ok(Self { m })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            m: CMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        Operator::new(self.m.kronecker(&other.m))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.same_dim(other.dim())?;
        Ok(Operator {
            m: &self.m * &other.m,
        })
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `U|ψ>`, renormalised only through the caller's guarantee that `U` is unitary.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        self.same_dim(psi.dim())?;
        Ok(PureState::from_vector_unchecked(&self.m * psi.amplitudes()))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        Ok(Operator {
            m: partial_trace_matrix(&self.m, keep)?,
        })
    }

    fn same_dim(&self, found: usize) -> Result<()> {
        if self.dim() == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }
}

/// Traces out every qubit not listed in `keep` (1-based). The kept qubits
/// appear in ascending order in the result.
pub(crate) fn partial_trace_matrix(m: &CMatrix, keep: &[usize]) -> Result<CMatrix> {
    let n = qubits_for_dim(m.nrows())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::Domain("duplicate qubit in keep set".into()));
    }
    if kept.is_empty() || kept.len() >= n {
        return Err(Error::Domain(format!(
            "keep set must be a nonempty strict subset of 1..={n}, got {keep:?}"
        )));
    }
    if let Some(&q) = kept.iter().find(|&&q| q == 0 || q > n) {
        return Err(Error::Domain(format!("qubit {q} out of range 1..={n}")));
    }
    let kept0: Vec<usize> = kept.iter().map(|q| q - 1).collect();
    let traced0: Vec<usize> = (0..n).filter(|q| !kept0.contains(q)).collect();
    let dk = 1 << kept0.len();
    let dt = 1 << traced0.len();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        let bi = scatter_bits(i, &kept0, n);
        for j in 0..dk {
            let bj = scatter_bits(j, &kept0, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..dt {
                let bt = scatter_bits(t, &traced0, n);
                acc += m[(bi | bt, bj | bt)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Operator verified Hermitian within [`ALGEBRAIC_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    op: Operator,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        let op = Operator::new(m)?;
        let deviation = hermiticity_defect(op.matrix());
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { op })
    }

    pub fn zero(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            op: Operator {
                m: CMatrix::zeros(d, d),
            },
        }
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn eig(&self) -> Spectrum {
        // Hermiticity was checked on construction, so this cannot fail.
        super::eigh(self.matrix()).expect("verified Hermitian operator")
    }

    /// `exp(-i H t)` via the eigendecomposition.
    pub fn propagator(&self, t: f64) -> Operator {
        let spec = self.eig();
        Operator {
            m: spec.apply_fn(|e| Complex64::from_polar(1.0, -e * t)),
        }
    }

    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        self.op.same_dim(psi.dim())?;
        let v = self.matrix() * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&v).re)
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let op = Operator::new(m)?;
        let deviation = hermiticity_defect(op.matrix());
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let tr = op.trace();
        if (tr - real(1.0)).norm() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let min = super::eigh(op.matrix())?.min();
        if min < -SPECTRAL_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { m: op.m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            m: CMatrix::identity(d, d) * real(1.0 / d as f64),
        }
    }

    /// `(1 + r·σ)/2`.
    pub fn from_bloch(r: BlochVector) -> Result<Self> {
        let m = (pauli::identity()
            + pauli::x() * real(r.x)
            + pauli::y() * real(r.y)
            + pauli::z() * real(r.z))
            * real(0.5);
        DensityMatrix::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Entrywise transpose in the computational basis.
    pub fn transpose(&self) -> DensityMatrix {
        Self {
            m: self.m.transpose(),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        Ok(Self {
            m: partial_trace_matrix(&self.m, keep)?,
        })
    }
}

/// Reduced state on the qubits in `keep` (1-based).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

/// `<ψ|ρ|ψ>`.
pub fn fidelity_pure(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi.dim(),
        });
    }
    let v = rho.matrix() * psi.amplitudes();
    let f = psi.amplitudes().dotc(&v);
    debug_assert!(f.im.abs() <= ALGEBRAIC_TOL, "imaginary residue {}", f.im);
    Ok(f.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector of a pure state with polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

/// `(Tr ρσx, Tr ρσy, Tr ρσz)` of a single-qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    Ok(BlochVector::new(
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ))
}
