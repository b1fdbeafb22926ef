//! Reference cloners: the phase-covariant cloner for a single latitude and
//! the universal symmetric cloner.

use std::f64::consts::{PI, SQRT_2};

use super::choi::ChoiMatrix;
use super::mpcc::{mpcc_clone_bloch, mpcc_fidelity, symmetric_cloner_choi, MpccParams};
use crate::error::{check_finite, check_polar, domain, Result};
use crate::quantum::BlochVector;

/// `sgn(π - 2θ)`, with the equator mapped to `+1`.
pub fn s_theta(theta: f64) -> f64 {
    if 2.0 * theta > PI {
        -1.0
    } else {
        1.0
    }
}

/// Clone Bloch vector of the phase-covariant cloner tuned to latitude `θ`.
pub fn pcc_clone_bloch(theta: f64, phi: f64) -> BlochVector {
    let s = theta.sin() / SQRT_2;
    BlochVector::new(
        s * phi.cos(),
        s * phi.sin(),
        0.5 * (s_theta(theta) + theta.cos()),
    )
}

/// `½[1 + sin²θ/√2 + cosθ (s_θ + cosθ)/2]`.
pub fn pcc_fidelity(theta: f64) -> f64 {
    let c = theta.cos();
    0.5 * (1.0 + theta.sin().powi(2) / SQRT_2 + 0.5 * c * (s_theta(theta) + c))
}

/// `(2M + 1)/(3M)` for the universal `1 → M` cloner.
pub fn uc_fidelity(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(domain("number of copies must be at least 1"));
    }
    let m = m as f64;
    Ok((2.0 * m + 1.0) / (3.0 * m))
}

/// Isotropic shrinking factor `(M + 2)/(3M)` of the universal cloner.
pub fn uc_shrink(m: u64) -> Result<f64> {
    Ok(2.0 * uc_fidelity(m)? - 1.0)
}

/// Universal `1 → 2` clone: the input Bloch vector scaled by 2/3.
pub fn uc_clone_bloch(theta: f64, phi: f64) -> BlochVector {
    BlochVector::from_angles(theta, phi).scale(2.0 / 3.0)
}

/// Choi matrix of the universal `1 → 2` cloner.
pub fn uc_choi() -> ChoiMatrix {
    symmetric_cloner_choi((2.0f64 / 3.0).sqrt()).expect("Λ = sqrt(2/3) lies in [0, 1]")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClonerModel {
    Mpcc(MpccParams),
    Pcc { theta: f64, s_theta: f64 },
    Uc { copies: u64 },
}

impl ClonerModel {
    pub fn mpcc(theta: f64) -> Result<Self> {
        Ok(Self::Mpcc(MpccParams::new(theta)?))
    }

    pub fn pcc(theta: f64) -> Result<Self> {
        check_polar(theta)?;
        Ok(Self::Pcc {
            theta,
            s_theta: s_theta(theta),
        })
    }

    pub fn uc(copies: u64) -> Result<Self> {
        uc_fidelity(copies)?;
        Ok(Self::Uc { copies })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Mpcc(_) => "mpcc",
            Self::Pcc { .. } => "pcc",
            Self::Uc { .. } => "uc",
        }
    }

    /// Single-clone fidelity for inputs on the model's design latitude.
    pub fn fidelity(&self) -> f64 {
        match *self {
            Self::Mpcc(p) => mpcc_fidelity(p.theta),
            Self::Pcc { theta, .. } => pcc_fidelity(theta),
            Self::Uc { copies } => uc_fidelity(copies).expect("validated at construction"),
        }
    }

    /// Clone Bloch vector for the input `(θ, φ)`; the MPCC and PCC models use
    /// their own design latitude.
    pub fn clone_bloch(&self, phi: f64) -> Result<BlochVector> {
        check_finite("phi", phi)?;
        Ok(match *self {
            Self::Mpcc(p) => mpcc_clone_bloch(p.theta, phi),
            Self::Pcc { theta, .. } => pcc_clone_bloch(theta, phi),
            Self::Uc { copies } => {
                // Universal clones shrink every input equally.
                BlochVector::from_angles(0.0, phi).scale(uc_shrink(copies)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::clone;
    use crate::quantum::{bloch_vector, ket_from_angles};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn theta_grid() -> impl Iterator<Item = f64> {
        (0..=180).map(|k| PI * k as f64 / 180.0)
    }

    #[test]
    fn pcc_examples() {
        assert!(pcc_clone_bloch(0.0, 0.7).max_abs_diff(&BlochVector::new(0.0, 0.0, 1.0)) < 1e-15);
        assert!((pcc_fidelity(0.0) - 1.0).abs() < 1e-15);
        assert!((pcc_fidelity(PI) - 1.0).abs() < 1e-15);
        assert!((pcc_fidelity(FRAC_PI_2) - (0.5 + SQRT_2 / 4.0)).abs() < 1e-15);
        assert!((pcc_fidelity(FRAC_PI_2) - mpcc_fidelity(FRAC_PI_2)).abs() < 1e-12);
        let t = PI / 3.0;
        let direct = 0.5 * (1.0 + 0.75 / SQRT_2 + 0.5 * 0.5 * 1.5);
        assert!((pcc_fidelity(t) - direct).abs() < 1e-15);
        assert!(pcc_fidelity(t) >= mpcc_fidelity(t));
    }

    #[test]
    fn pcc_equator_is_independent_of_sign() {
        let c = FRAC_PI_2.cos();
        for s in [-1.0, 0.0, 1.0] {
            let f = 0.5 * (1.0 + 1.0 / SQRT_2 + 0.5 * c * (s + c));
            assert!((f - pcc_fidelity(FRAC_PI_2)).abs() < 1e-15);
        }
    }

    #[test]
    fn pcc_fidelity_is_projection_of_bloch_vector() {
        for t in theta_grid() {
            let r = pcc_clone_bloch(t, 0.4);
            let n = BlochVector::from_angles(t, 0.4);
            assert!((0.5 * (1.0 + r.dot(&n)) - pcc_fidelity(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn uc_examples() {
        assert!((uc_fidelity(2).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((uc_fidelity(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((uc_fidelity(1_000_000).unwrap() - 2.0 / 3.0).abs() < 1e-6);
        assert!(uc_fidelity(0).is_err());
        assert!((uc_shrink(2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(uc_clone_bloch(FRAC_PI_2, 0.0).max_abs_diff(&BlochVector::new(2.0 / 3.0, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn dominance_on_grid() {
        let edge = (3f64.sqrt() / 3.0).acos();
        for t in theta_grid() {
            let f = mpcc_fidelity(t);
            assert!(pcc_fidelity(t) >= f - 1e-12, "theta {t}");
            assert!(f >= 5.0 / 6.0 - 1e-12, "theta {t}");
            if (f - 5.0 / 6.0).abs() < 1e-6 {
                let near = (t - edge).abs().min((t - (PI - edge)).abs());
                assert!(near < 0.02, "unexpected near-equality at theta {t}");
            }
        }
    }

    #[test]
    fn model_dispatch() {
        let m = ClonerModel::mpcc(FRAC_PI_2).unwrap();
        assert_eq!(m.name(), "mpcc");
        assert!((m.fidelity() - mpcc_fidelity(FRAC_PI_2)).abs() < 1e-15);
        let p = ClonerModel::pcc(2.0).unwrap();
        assert!(matches!(p, ClonerModel::Pcc { s_theta, .. } if s_theta == -1.0));
        assert!(ClonerModel::pcc(-1.0).is_err());
        assert!(ClonerModel::uc(0).is_err());
        let u = ClonerModel::uc(2).unwrap();
        assert!((u.fidelity() - 5.0 / 6.0).abs() < 1e-15);
        assert!((u.clone_bloch(0.0).unwrap().z - 2.0 / 3.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn uc_channel_shrinks_isotropically(theta in 0.0f64..=PI, phi in 0.0f64..std::f64::consts::TAU) {
            let psi = ket_from_angles(theta, phi).unwrap();
            let out = clone(&psi, &uc_choi()).unwrap();
            for rho in [&out.clone1, &out.clone2] {
                let r = bloch_vector(rho).unwrap();
                prop_assert!(r.max_abs_diff(&uc_clone_bloch(theta, phi)) < 1e-12);
            }
            let (f1, _) = out.fidelities(&psi).unwrap();
            prop_assert!((f1 - 5.0 / 6.0).abs() < 1e-12);
        }
    }
}
