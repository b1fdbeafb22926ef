use super::{
    hermiticity_defect, CMatrix, Complex64, HermitianOperator, PureState, SPECTRAL_TOL,
};
use crate::error::{check_finite, Error, Result};

/// Eigendecomposition `H = V diag(values) V^†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    /// `V diag(f(values)) V^†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &e) in self.values.iter().enumerate() {
            let fk = f(e);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fk);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(|e| Complex64::new(e, 0.0))
    }
}

/// Hermitian eigensolver on raw matrices; accepts deviations up to
/// [`SPECTRAL_TOL`] and symmetrises before solving.
pub fn eigh(m: &CMatrix) -> Result<Spectrum> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let deviation = hermiticity_defect(m);
    if deviation > SPECTRAL_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok(Spectrum { values, vectors })
}

pub fn eig_hermitian(h: &HermitianOperator) -> Spectrum {
    h.eig()
}

/// `m^p` for a positive-semidefinite `m`, with eigenvalues below
/// `rel_cutoff * max_eigenvalue` mapped to zero (a pseudo-inverse power
/// when `p < 0`).
pub fn hermitian_power(m: &CMatrix, p: f64, rel_cutoff: f64) -> Result<CMatrix> {
    let spec = eigh(m)?;
    let cutoff = rel_cutoff * spec.max().abs();
    Ok(spec.apply_fn(|e| {
        if e > cutoff {
            Complex64::new(e.powf(p), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `exp(-i H t)|ψ>`.
pub fn evolve(h: &HermitianOperator, t: f64, psi: &PureState) -> Result<PureState> {
    check_finite("time", t)?;
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.dim(),
        });
    }
    h.propagator(t).apply(psi)
}
