//! Dual certificate for the mirror cloner and a fixed-point maximiser of
//! `Tr(χR)` over trace-preserving completely positive maps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_polar, domain, Error, Result};
use crate::fidelity::{average_fidelity, score_operator, FidelityOperator, PriorDistribution};
use crate::models::{
    lift_input, mpcc_choi, mpcc_fidelity, mpcc_params, normalize_trace_preserving,
    trace_out_outputs, ChoiMatrix, CHOI_DIM, PINV_CUTOFF,
};
use crate::quantum::{eigh, hermitian_power, max_abs_diff, real, CMatrix, SPECTRAL_TOL};

/// `λ = Tr_out(Rχ)` as a 2×2 matrix on the input.
pub fn lagrange_operator(chi: &ChoiMatrix, r: &FidelityOperator) -> CMatrix {
    trace_out_outputs(&(r.matrix() * chi.matrix()))
}

/// `max |λ - (Tr λ / 2) 1|`: zero iff `λ` is proportional to the identity.
pub fn proportionality_defect(lambda: &CMatrix) -> f64 {
    let mean = (lambda[(0, 0)] + lambda[(1, 1)]) * 0.5;
    max_abs_diff(lambda, &(CMatrix::identity(2, 2) * mean))
}

/// Numerical and closed-form ingredients of the optimality proof at one `θ`.
#[derive(Debug, Clone)]
pub struct OptimalityCertificate {
    pub theta: f64,
    /// Closed-form optimal fidelity.
    pub fidelity: f64,
    pub lambda: CMatrix,
    /// Coefficient of the identity in `λ`.
    pub lambda_scalar: f64,
    /// `Tr λ - F`.
    pub trace_gap: f64,
    /// Distance of `λ` from `¼[(1 + cos²θ)A + 2B + 2 sin²θ C] 1`.
    pub coefficient_residual: f64,
    /// Distance of `λ` from `(F/2) 1`.
    pub half_fidelity_residual: f64,
    pub proportionality_defect: f64,
    /// Ascending eigenvalues of `Δ = λ ⊗ 1 - R`.
    pub delta_spectrum: [f64; 8],
    /// `(δ₁, δ₂, δ₃, δ₄)`.
    pub delta_values: [f64; 4],
    /// The four closed-form values, each twice, ascending.
    pub delta_closed_form: [f64; 8],
    pub spectrum_residual: f64,
    /// `|F - R₁₁ - R₂₂ - R̄|`.
    pub eq23_residual: f64,
    /// `|δ₃ - (F - (3 - sin²θ)/4)|`.
    pub delta3_residual: f64,
    pub psd_ok: bool,
    pub saturation_ok: bool,
    pub spectrum_ok: bool,
}

impl OptimalityCertificate {
    /// True when positivity, saturation, the spectral match and the
    /// element identity all hold within `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.delta_spectrum[0] >= -tol
            && self.trace_gap.abs() <= tol
            && self.spectrum_residual <= tol
            && self.eq23_residual <= tol
    }
}

/// Builds the certificate for the closed-form cloner at `θ`; failed checks are
/// recorded in the flags rather than returned as errors.
pub fn certificate(theta: f64) -> Result<OptimalityCertificate> {
    check_polar(theta)?;
    let params = mpcc_params(theta)?;
    let f = mpcc_fidelity(theta);
    let r = score_operator(&PriorDistribution::mirror(theta)?)?;
    let chi = mpcc_choi(theta)?;

    let lambda = lagrange_operator(&chi, &r);
    let trace = (lambda[(0, 0)] + lambda[(1, 1)]).re;
    let lambda_scalar = 0.5 * trace;
    let (c1, s1) = (theta.cos(), theta.sin());
    let coeff = 0.25
        * ((1.0 + c1 * c1) * params.a + 2.0 * params.b + 2.0 * s1 * s1 * params.c);
    let id = CMatrix::identity(2, 2);
    let coefficient_residual = max_abs_diff(&lambda, &(&id * real(coeff)));
    let half_fidelity_residual = max_abs_diff(&lambda, &(&id * real(0.5 * f)));

    let delta = lift_input(&lambda) - r.matrix();
    let spec = eigh(&delta)?;
    let mut delta_spectrum = [0.0; 8];
    delta_spectrum.copy_from_slice(&spec.values);

    let (r11, r22, r16) = (r.get(0, 0), r.get(1, 1), r.get(0, 5));
    let rbar = ((r11 - r22).powi(2) + 8.0 * r16 * r16).sqrt();
    let delta_values = [
        0.5 * (f - 0.5),
        0.5 * (f - 0.5 * s1 * s1),
        0.5 * (f - r11 - r22 + rbar),
        0.5 * (f - r11 - r22 - rbar),
    ];
    let mut delta_closed_form = [0.0; 8];
    for (k, d) in delta_values.iter().enumerate() {
        delta_closed_form[2 * k] = *d;
        delta_closed_form[2 * k + 1] = *d;
    }
    delta_closed_form.sort_by(f64::total_cmp);
    let spectrum_residual = delta_spectrum
        .iter()
        .zip(&delta_closed_form)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let eq23_residual = (f - r11 - r22 - rbar).abs();
    let delta3_residual = (delta_values[2] - (f - 0.25 * (3.0 - s1 * s1))).abs();
    let trace_gap = trace - f;

    Ok(OptimalityCertificate {
        theta,
        fidelity: f,
        proportionality_defect: proportionality_defect(&lambda),
        lambda,
        lambda_scalar,
        trace_gap,
        coefficient_residual,
        half_fidelity_residual,
        delta_spectrum,
        delta_values,
        delta_closed_form,
        spectrum_residual,
        eq23_residual,
        delta3_residual,
        psd_ok: delta_spectrum[0] >= -SPECTRAL_TOL,
        saturation_ok: trace_gap.abs() <= SPECTRAL_TOL,
        spectrum_ok: spectrum_residual <= SPECTRAL_TOL,
    })
}

/// Outcome of one fixed-point run.
#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub chi_star: ChoiMatrix,
    pub f_star: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `|ΔF|` of the last iteration.
    pub residual: f64,
    /// `Tr(χR)` after every iteration, starting with the initial map.
    pub history: Vec<f64>,
    /// Largest trace-preservation defect seen along the run.
    pub max_tp_defect: f64,
    /// Smallest eigenvalue of any iterate.
    pub min_eigenvalue: f64,
}

/// Local symmetries of the problem that are imposed on every iterate when the
/// score operator respects them.
#[derive(Debug, Clone, Copy)]
struct Twirls {
    charge: bool,
    flip: bool,
    swap: bool,
}

fn charge(index: usize) -> i32 {
    let q_in = (index >> 2) & 1;
    let q1 = (index >> 1) & 1;
    let q2 = index & 1;
    q1 as i32 + q2 as i32 - q_in as i32
}

fn dephase(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(CHOI_DIM, CHOI_DIM, |i, j| {
        if charge(i) == charge(j) {
            m[(i, j)]
        } else {
            real(0.0)
        }
    })
}

/// Conjugation by a basis permutation, averaged with the identity.
fn permute_average(m: &CMatrix, perm: impl Fn(usize) -> usize) -> CMatrix {
    CMatrix::from_fn(CHOI_DIM, CHOI_DIM, |i, j| {
        (m[(i, j)] + m[(perm(i), perm(j))]) * 0.5
    })
}

fn flip_all(i: usize) -> usize {
    i ^ 0b111
}

fn swap_outputs(i: usize) -> usize {
    (i & 0b100) | ((i & 0b010) >> 1) | ((i & 0b001) << 1)
}

impl Twirls {
    fn detect(r: &CMatrix) -> Self {
        let tol = 1e-12;
        Self {
            charge: max_abs_diff(&dephase(r), r) < tol,
            flip: max_abs_diff(&permute_average(r, flip_all), r) < tol,
            swap: max_abs_diff(&permute_average(r, swap_outputs), r) < tol,
        }
    }

    fn apply(&self, m: CMatrix) -> CMatrix {
        let mut m = m;
        if self.charge {
            m = dephase(&m);
        }
        if self.flip {
            m = permute_average(&m, flip_all);
        }
        if self.swap {
            m = permute_average(&m, swap_outputs);
        }
        m
    }
}

/// Maximises `Tr(χR)` from a seeded random start with the iteration
/// `χ ← (L⁻¹ ⊗ 1) RχR (L⁻¹ ⊗ 1)`, `L = (Tr_out RχR)^{1/2}`.
///
/// Each iterate is averaged over the symmetries that `R` has and then
/// renormalised to exact trace preservation. Stops once `|ΔF| < tol`.
pub fn optimize_map(
    r: &FidelityOperator,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<OptimizeResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let rm = r.matrix();
    let twirls = Twirls::detect(rm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = ChoiMatrix::random(&mut rng);

    let mut chi = normalize_trace_preserving(&twirls.apply(start.matrix().clone()))?;
    let mut f = fidelity_of(&chi, rm);
    let mut history = vec![f];
    let mut best = (f, chi.clone());
    let mut max_tp_defect = tp_defect(&chi);
    let mut min_eigenvalue = eigh(&chi)?.min();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        let rcr = rm * &chi * rm;
        let l_inv = lift_input(&hermitian_power(&trace_out_outputs(&rcr), -0.5, PINV_CUTOFF)?);
        let next = &l_inv * rcr * &l_inv;
        let next = (&next + next.adjoint()) * real(0.5);
        chi = normalize_trace_preserving(&twirls.apply(next))?;

        max_tp_defect = max_tp_defect.max(tp_defect(&chi));
        min_eigenvalue = min_eigenvalue.min(eigh(&chi)?.min());
        let f_next = fidelity_of(&chi, rm);
        if !f_next.is_finite() {
            return Err(Error::Consistency(format!(
                "fidelity became {f_next} at iteration {iterations}"
            )));
        }
        history.push(f_next);
        residual = (f_next - f).abs();
        f = f_next;
        if f > best.0 {
            best = (f, chi.clone());
        }
        if residual < tol {
            converged = true;
            break;
        }
    }

    let chi_star = ChoiMatrix::new(best.1)?;
    let f_star = average_fidelity(&chi_star, r)?;
    Ok(OptimizeResult {
        chi_star,
        f_star,
        iterations,
        converged,
        residual,
        history,
        max_tp_defect,
        min_eigenvalue,
    })
}

/// Runs [`optimize_map`] once per seed.
pub fn optimize_multistart(
    r: &FidelityOperator,
    seeds: impl IntoIterator<Item = u64>,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<OptimizeResult>> {
    seeds
        .into_iter()
        .map(|s| optimize_map(r, s, tol, max_iter))
        .collect()
}

/// `max_ij ||a_ij| - |b_ij||`: distance between sparsity patterns, blind to
/// entrywise phases.
pub fn pattern_deviation(a: &ChoiMatrix, b: &ChoiMatrix) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max)
}

fn fidelity_of(chi: &CMatrix, r: &CMatrix) -> f64 {
    (chi * r).trace().re
}

fn tp_defect(chi: &CMatrix) -> f64 {
    max_abs_diff(&trace_out_outputs(chi), &CMatrix::identity(2, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn grid() -> impl Iterator<Item = f64> {
        (0..=180).map(|k| PI * k as f64 / 180.0)
    }

    fn mirror_r(t: f64) -> FidelityOperator {
        score_operator(&PriorDistribution::mirror(t).unwrap()).unwrap()
    }

    #[test]
    fn lagrange_examples() {
        let l0 = lagrange_operator(&mpcc_choi(0.0).unwrap(), &mirror_r(0.0));
        assert!(max_abs_diff(&l0, &(CMatrix::identity(2, 2) * real(0.5))) < 1e-15);
        let l = lagrange_operator(&mpcc_choi(FRAC_PI_2).unwrap(), &mirror_r(FRAC_PI_2));
        let expect = CMatrix::identity(2, 2) * real(0.25 + SQRT_2 / 8.0);
        assert!(max_abs_diff(&l, &expect) < 1e-15);
    }

    #[test]
    fn lagrange_of_non_optimal_map_is_not_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let chi = ChoiMatrix::random(&mut rng);
        let l = lagrange_operator(&chi, &mirror_r(0.7));
        assert!(proportionality_defect(&l) > 1e-3);
    }

    #[test]
    fn equator_certificate() {
        let c = certificate(FRAC_PI_2).unwrap();
        let d = SQRT_2 / 8.0;
        let expect = [d, d, 2.0 * d, 0.0];
        for (a, b) in c.delta_values.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(c.psd_ok && c.saturation_ok && c.spectrum_ok);
    }

    #[test]
    fn pole_certificate_is_saturated() {
        let c = certificate(0.0).unwrap();
        assert_eq!(c.trace_gap, 0.0);
        assert!(c.passes(1e-10));
        assert!(certificate(PI + 0.1).is_err());
    }

    #[test]
    fn certificate_on_grid() {
        for t in grid().chain([(3f64.sqrt() / 3.0).acos()]) {
            let c = certificate(t).unwrap();
            assert!(c.psd_ok, "theta {t}: min {}", c.delta_spectrum[0]);
            assert!(c.saturation_ok, "theta {t}: gap {}", c.trace_gap);
            assert!(c.spectrum_ok, "theta {t}: {}", c.spectrum_residual);
            assert!(c.eq23_residual <= 1e-10 && c.delta3_residual <= 1e-10);
            assert!(c.coefficient_residual <= 1e-12 && c.half_fidelity_residual <= 1e-12);
            assert!(c.proportionality_defect <= 1e-12);
            assert!((c.lambda_scalar - 0.5 * c.fidelity).abs() <= 1e-12);
        }
    }

    #[test]
    fn charge_of_score_entries() {
        for (i, j) in [(0, 5), (0, 6), (1, 7), (2, 7)] {
            assert_eq!(charge(i), charge(j));
        }
        assert_eq!(swap_outputs(0b010), 0b001);
        assert_eq!(flip_all(0b100), 0b011);
    }

    #[test]
    fn twirls_detected_for_mirror_only() {
        let t = Twirls::detect(mirror_r(0.6).matrix());
        assert!(t.charge && t.flip && t.swap);
        let pcc = score_operator(&PriorDistribution::phase_covariant(0.6).unwrap()).unwrap();
        let t = Twirls::detect(pcc.matrix());
        assert!(t.charge && !t.flip && t.swap);
    }

    #[test]
    fn optimizer_examples() {
        let res = optimize_map(&mirror_r(FRAC_PI_2), 1, 1e-12, 500).unwrap();
        assert!(res.converged);
        assert!((res.f_star - (0.5 + SQRT_2 / 4.0)).abs() < 1e-6);
        let res = optimize_map(&mirror_r(0.0), 1, 1e-12, 500).unwrap();
        assert!((res.f_star - 1.0).abs() < 1e-8);
        let r = mirror_r(PI / 3.0);
        let runs = optimize_multistart(&r, 0..5, 1e-12, 500).unwrap();
        let fs: Vec<f64> = runs.iter().map(|r| r.f_star).collect();
        let spread = fs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - fs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-8, "{fs:?}");
        assert!(optimize_map(&r, 0, 0.0, 10).is_err());
    }

    #[test]
    fn optimizer_respects_bound_and_feasibility() {
        for k in 0..=12 {
            let t = PI * k as f64 / 12.0;
            let bound = mpcc_fidelity(t);
            let res = optimize_map(&mirror_r(t), 7, 1e-12, 500).unwrap();
            assert!(res.history.iter().all(|&f| f <= bound + 1e-9), "theta {t}");
            assert!(res.f_star >= bound - 1e-6, "theta {t}: {}", res.f_star);
            assert!(res.max_tp_defect <= 1e-9 && res.min_eigenvalue >= -1e-9);
            let direct = average_fidelity(&res.chi_star, &mirror_r(t)).unwrap();
            assert!((direct - res.f_star).abs() <= 1e-12);
        }
    }

    #[test]
    fn optimum_matches_closed_form_pattern() {
        let t = 1.0;
        let res = optimize_map(&mirror_r(t), 3, 1e-14, 2000).unwrap();
        assert!(pattern_deviation(&res.chi_star, &mpcc_choi(t).unwrap()) < 1e-4);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let res = optimize_map(&mirror_r(0.9), 2, 1e-300, 3).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 3);
        assert_eq!(res.history.len(), 4);
    }
}
