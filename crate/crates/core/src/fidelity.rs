//! Average single-clone fidelity as a linear functional `F(χ) = Tr(χR)`.
//!
//! The score operator `R` lives on `in ⊗ out1 ⊗ out2` and is built either in
//! closed form or by direct quadrature over the input prior.

use std::f64::consts::{PI, TAU};

use crate::error::{check_polar, domain, Error, Result};
use crate::models::{clone, ChoiMatrix, CHOI_DIM};
use crate::quantum::{fidelity_pure, ket_from_angles, real, CMatrix, ALGEBRAIC_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorKind {
    Universal,
    PhaseCovariant,
    MirrorPhaseCovariant,
}

/// Distribution of input states: uniform in the azimuth, and either a set of
/// polar-angle atoms or the uniform density `sin ϑ / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorDistribution {
    kind: PriorKind,
    theta: Option<f64>,
    atoms: Vec<(f64, f64)>,
}

impl PriorDistribution {
    pub fn universal() -> Self {
        Self {
            kind: PriorKind::Universal,
            theta: None,
            atoms: Vec::new(),
        }
    }

    /// Single latitude `θ`.
    pub fn phase_covariant(theta: f64) -> Result<Self> {
        check_polar(theta)?;
        Ok(Self {
            kind: PriorKind::PhaseCovariant,
            theta: Some(theta),
            atoms: vec![(theta, 1.0)],
        })
    }

    /// Latitudes `θ` and `π - θ` with equal weight.
    pub fn mirror(theta: f64) -> Result<Self> {
        check_polar(theta)?;
        Ok(Self {
            kind: PriorKind::MirrorPhaseCovariant,
            theta: Some(theta),
            atoms: vec![(theta, 0.5), (PI - theta, 0.5)],
        })
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    /// Polar-angle atoms `(ϑ, weight)`; empty for the universal prior.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Polar nodes and weights used to integrate over this prior.
    fn polar_nodes(&self, n_polar: usize) -> Vec<(f64, f64)> {
        match self.kind {
            PriorKind::Universal => {
                let (x, w) = gauss_legendre(n_polar);
                x.iter()
                    .zip(&w)
                    .map(|(&x, &w)| (x.clamp(-1.0, 1.0).acos(), 0.5 * w))
                    .collect()
            }
            _ => self.atoms.clone(),
        }
    }
}

/// Real symmetric 8×8 score operator on `in ⊗ out1 ⊗ out2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityOperator {
    m: CMatrix,
    theta: Option<f64>,
}

impl FidelityOperator {
    /// Rejects non-real or non-symmetric input beyond [`ALGEBRAIC_TOL`].
    pub fn new(m: CMatrix, theta: Option<f64>) -> Result<Self> {
        if m.shape() != (CHOI_DIM, CHOI_DIM) {
            return Err(Error::DimensionMismatch {
                expected: CHOI_DIM,
                found: m.nrows(),
            });
        }
        let imag = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let asym = (0..CHOI_DIM)
            .flat_map(|i| (0..CHOI_DIM).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)].re - m[(j, i)].re).abs())
            .fold(0.0, f64::max);
        if imag > ALGEBRAIC_TOL || asym > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian {
                deviation: imag.max(asym),
            });
        }
        Ok(Self {
            m: m.map(|z| real(z.re)),
            theta,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    /// Real entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)].re
    }
}

/// Score operator of the single latitude `θ`.
pub fn r_theta(theta: f64) -> Result<FidelityOperator> {
    check_polar(theta)?;
    let s1 = theta.sin();
    let c2 = (0.5 * theta).cos();
    let s2 = (0.5 * theta).sin();
    let mut m = CMatrix::zeros(CHOI_DIM, CHOI_DIM);
    let diag = [
        c2.powi(4),
        0.5 * c2 * c2,
        0.5 * c2 * c2,
        0.25 * s1 * s1,
        0.25 * s1 * s1,
        0.5 * s2 * s2,
        0.5 * s2 * s2,
        s2.powi(4),
    ];
    for (k, d) in diag.into_iter().enumerate() {
        m[(k, k)] = real(d);
    }
    for (i, j) in [(0, 5), (0, 6), (1, 7), (2, 7)] {
        m[(i, j)] = real(s1 * s1 / 8.0);
        m[(j, i)] = real(s1 * s1 / 8.0);
    }
    FidelityOperator::new(m, Some(theta))
}

/// Closed-form score operator for the atomic priors; the universal prior is
/// integrated with [`Quadrature::default`].
pub fn score_operator(g: &PriorDistribution) -> Result<FidelityOperator> {
    match g.kind {
        PriorKind::Universal => score_operator_quadrature(g, &Quadrature::default()),
        _ => {
            let mut m = CMatrix::zeros(CHOI_DIM, CHOI_DIM);
            for &(theta, w) in &g.atoms {
                m += r_theta(theta)?.m * real(w);
            }
            FidelityOperator::new(m, g.theta)
        }
    }
}

/// Node counts for direct integration over the prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Trapezoidal nodes in the azimuth (at least 8).
    pub n_phi: usize,
    /// Origin of the azimuthal grid.
    pub phi_offset: f64,
    /// Gauss-Legendre nodes in `cos ϑ` for the universal prior (at least 32).
    pub n_polar: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            n_phi: 64,
            phi_offset: 0.0,
            n_polar: 32,
        }
    }
}

impl Quadrature {
    pub fn with_phi(n_phi: usize) -> Self {
        Self {
            n_phi,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_phi < 8 {
            return Err(domain(format!("n_phi = {} is below 8", self.n_phi)));
        }
        if self.n_polar < 32 {
            return Err(domain(format!("n_polar = {} is below 32", self.n_polar)));
        }
        if !self.phi_offset.is_finite() {
            return Err(domain("phi offset must be finite"));
        }
        Ok(())
    }

    fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_phi).map(move |k| self.phi_offset + TAU * k as f64 / self.n_phi as f64)
    }

    /// `(ϑ, φ, weight)` nodes whose weights sum to one.
    fn nodes(&self, g: &PriorDistribution) -> Vec<(f64, f64, f64)> {
        let wphi = 1.0 / self.n_phi as f64;
        g.polar_nodes(self.n_polar)
            .into_iter()
            .flat_map(|(theta, w)| self.phis().map(move |phi| (theta, phi, w * wphi)))
            .collect()
    }
}

/// `R = Σ w · ½ ρ^T ⊗ (|ψ><ψ| ⊗ 1 + 1 ⊗ |ψ><ψ|)` summed over quadrature nodes.
pub fn score_operator_quadrature(
    g: &PriorDistribution,
    quad: &Quadrature,
) -> Result<FidelityOperator> {
    quad.validate()?;
    let id = CMatrix::identity(2, 2);
    let mut m = CMatrix::zeros(CHOI_DIM, CHOI_DIM);
    for (theta, phi, w) in quad.nodes(g) {
        let p = ket_from_angles(theta, phi)?.outer();
        let both = p.kronecker(&id) + id.kronecker(&p);
        m += p.transpose().kronecker(&both) * real(0.5 * w);
    }
    FidelityOperator::new(m, g.theta)
}

/// `Tr(χR)`.
pub fn average_fidelity(chi: &ChoiMatrix, r: &FidelityOperator) -> Result<f64> {
    let t = (chi.matrix() * r.matrix()).trace();
    if t.im.abs() > ALGEBRAIC_TOL {
        return Err(Error::Consistency(format!(
            "Tr(chi R) has imaginary part {:e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// Prior average of `½(F₁ + F₂)`, obtained by running the channel on every
/// quadrature input.
pub fn average_fidelity_direct(
    chi: &ChoiMatrix,
    g: &PriorDistribution,
    quad: &Quadrature,
) -> Result<f64> {
    quad.validate()?;
    let mut total = 0.0;
    for (theta, phi, w) in quad.nodes(g) {
        let psi = ket_from_angles(theta, phi)?;
        let out = clone(&psi, chi)?;
        let f = 0.5 * (fidelity_pure(&psi, &out.clone1)? + fidelity_pure(&psi, &out.clone2)?);
        total += w * f;
    }
    Ok(total)
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
