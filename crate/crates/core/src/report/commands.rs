use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::table::{fmt_g17, Cell, Table};
use crate::circuit::{
    circuit_mpcc_v1, circuit_mpcc_v2, equal_up_to_global_phase, register_input, run_circuit,
    write_circuit, Circuit,
};
use crate::error::{domain, Result};
use crate::fidelity::{score_operator, PriorDistribution};
use crate::models::{
    mpcc_clone_bloch, mpcc_choi, mpcc_fidelity, mpcc_isometry_apply, mpcc_params,
    pcc_clone_bloch, pcc_fidelity, uc_clone_bloch, uc_fidelity,
};
use crate::optimality::{certificate, optimize_multistart, pattern_deviation};
use crate::quantum::{fidelity_pure, ket_from_angles, partial_trace, BlochVector};

/// Polar angle where the mirror cloner's fidelity touches 5/6.
pub fn edge_angle() -> f64 {
    (3f64.sqrt() / 3.0).acos()
}

/// Common sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta_min: 0.0,
            theta_max: PI,
            steps: 181,
            tol: 1e-10,
            seed: 42,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let in_range = |x: f64| (0.0..=PI).contains(&x);
        if !(in_range(self.theta_min) && in_range(self.theta_max)) {
            return Err(domain("theta range must lie within [0, pi]"));
        }
        if self.theta_min >= self.theta_max {
            return Err(domain("theta-min must be below theta-max"));
        }
        if self.steps < 2 {
            return Err(domain("steps must be at least 2"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(domain("tol must be positive"));
        }
        Ok(())
    }

    /// `θ_i = θ_min + (θ_max - θ_min) i/(steps - 1)`; both ends are exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        let span = self.theta_max - self.theta_min;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.theta_max
                } else {
                    self.theta_min + span * (i as f64 / n as f64)
                }
            })
            .collect()
    }

    /// The grid plus the two 5/6 angles when they fall inside the range.
    pub fn grid_with_edges(&self) -> Vec<f64> {
        let mut g = self.grid();
        for e in [edge_angle(), PI - edge_angle()] {
            if e >= self.theta_min && e <= self.theta_max && !g.contains(&e) {
                g.push(e);
            }
        }
        g.sort_by(f64::total_cmp);
        g
    }
}

/// A table plus the list of failed checks; an empty list means success.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let mut table = Table::new(&["theta", "F_mpcc", "F_pcc", "F_uc", "Lambda", "A", "B", "C"]);
    let f_uc = uc_fidelity(2)?;
    for t in cfg.grid() {
        let p = mpcc_params(t)?;
        table.push(vec![
            t.into(),
            mpcc_fidelity(t).into(),
            pcc_fidelity(t).into(),
            f_uc.into(),
            p.lambda.into(),
            p.a.into(),
            p.b.into(),
            p.c.into(),
        ]);
    }
    Ok(CommandOutput {
        table,
        failures: Vec::new(),
    })
}

/// Cross-section of the clone Bloch vectors in the plane of azimuth `phi`;
/// `rx_*` is the component along `(cos φ, sin φ, 0)`.
pub fn cmd_bloch(cfg: &SweepConfig, phi: f64) -> Result<CommandOutput> {
    cfg.validate()?;
    if !phi.is_finite() {
        return Err(domain("phi must be finite"));
    }
    let mut table = Table::new(&[
        "theta",
        "rx_mpcc",
        "rz_mpcc",
        "rx_pcc",
        "rz_pcc",
        "rx_uc",
        "rz_uc",
        "rx_perfect",
        "rz_perfect",
    ]);
    let radial = |r: &BlochVector| r.x * phi.cos() + r.y * phi.sin();
    let mut failures = Vec::new();
    for t in cfg.grid() {
        let vs = [
            mpcc_clone_bloch(t, phi),
            pcc_clone_bloch(t, phi),
            uc_clone_bloch(t, phi),
            BlochVector::from_angles(t, phi),
        ];
        if let Some(v) = vs.iter().find(|v| v.norm() > 1.0 + 1e-12) {
            failures.push(format!("theta {}: |r| = {}", fmt_g17(t), fmt_g17(v.norm())));
        }
        let mut row: Vec<Cell> = vec![t.into()];
        for v in &vs {
            row.push(radial(v).into());
            row.push(v.z.into());
        }
        table.push(row);
    }
    Ok(CommandOutput { table, failures })
}

pub fn cmd_certify(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let mut table = Table::new(&[
        "theta",
        "F",
        "lambda_scalar",
        "trace_gap",
        "delta_min",
        "delta_1",
        "delta_2",
        "delta_3",
        "delta_4",
        "spectrum_residual",
        "eq23_residual",
        "psd_ok",
        "saturation_ok",
        "spectrum_ok",
    ]);
    let mut failures = Vec::new();
    for t in cfg.grid_with_edges() {
        let c = certificate(t)?;
        if !(c.psd_ok && c.saturation_ok && c.eq23_residual <= cfg.tol) {
            failures.push(format!(
                "theta {}: psd_ok={} saturation_ok={} eq23_residual={}",
                fmt_g17(t),
                c.psd_ok,
                c.saturation_ok,
                fmt_g17(c.eq23_residual)
            ));
        }
        let [d1, d2, d3, d4] = c.delta_values;
        table.push(vec![
            t.into(),
            c.fidelity.into(),
            c.lambda_scalar.into(),
            c.trace_gap.into(),
            c.delta_spectrum[0].into(),
            d1.into(),
            d2.into(),
            d3.into(),
            d4.into(),
            c.spectrum_residual.into(),
            c.eq23_residual.into(),
            c.psd_ok.into(),
            c.saturation_ok.into(),
            c.spectrum_ok.into(),
        ]);
    }
    Ok(CommandOutput { table, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    V1,
    V2,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::V1 => "v1",
            Variant::V2 => "v2",
        }
    }

    pub fn build(&self, theta: f64, kappa: f64) -> Result<Circuit> {
        match self {
            Variant::V1 => circuit_mpcc_v1(theta),
            Variant::V2 => circuit_mpcc_v2(theta, kappa),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOptions {
    pub variants: Vec<Variant>,
    pub kappa: f64,
    /// Haar-random inputs per angle, in addition to `|0>` and `|1>`.
    pub samples: usize,
}

impl Default for CircuitOptions {
    fn default() -> Self {
        Self {
            variants: vec![Variant::V1, Variant::V2],
            kappa: 1.0,
            samples: 8,
        }
    }
}

/// Haar-random qubit `(ϑ, φ)`.
fn haar_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    ((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(), TAU * v)
}

/// Circuit residuals against the cloner isometry, and the circuits
/// themselves in text form under `# variant=.. theta=..` headers.
pub fn cmd_circuits(cfg: &SweepConfig, opts: &CircuitOptions) -> Result<(CommandOutput, String)> {
    cfg.validate()?;
    if opts.variants.is_empty() {
        return Err(domain("no circuit variant selected"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = Table::new(&[
        "theta", "variant", "input", "polar", "azimuth", "residual", "F1", "F2", "F_mpcc",
    ]);
    let mut dump = String::new();
    let mut failures = Vec::new();
    for t in cfg.grid_with_edges() {
        let mut inputs = vec![(0.0, 0.0), (PI, 0.0)];
        inputs.extend((0..opts.samples).map(|_| haar_angles(&mut rng)));
        let f_opt = mpcc_fidelity(t);
        for v in &opts.variants {
            let circuit = v.build(t, opts.kappa)?;
            dump.push_str(&format!("# variant={} theta={}\n", v.name(), fmt_g17(t)));
            dump.push_str(&write_circuit(&circuit));
            for (k, &(polar, azimuth)) in inputs.iter().enumerate() {
                let psi = ket_from_angles(polar, azimuth)?;
                let out = run_circuit(&circuit, &register_input(&psi)?)?;
                let target = mpcc_isometry_apply(t, &psi)?;
                let (ok, residual) = equal_up_to_global_phase(&out, &target, cfg.tol)?;
                if !ok {
                    failures.push(format!(
                        "theta {} {} input {k}: residual {}",
                        fmt_g17(t),
                        v.name(),
                        fmt_g17(residual)
                    ));
                }
                let rho = out.density();
                let f1 = fidelity_pure(&psi, &partial_trace(&rho, &[1])?)?;
                let f2 = fidelity_pure(&psi, &partial_trace(&rho, &[2])?)?;
                table.push(vec![
                    t.into(),
                    v.name().into(),
                    k.into(),
                    polar.into(),
                    azimuth.into(),
                    residual.into(),
                    f1.into(),
                    f2.into(),
                    f_opt.into(),
                ]);
            }
        }
    }
    Ok((CommandOutput { table, failures }, dump))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub seeds: usize,
    pub max_iter: usize,
    /// Largest accepted `|F* - F|`.
    pub gap_tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            seeds: 5,
            max_iter: 2000,
            gap_tol: 1e-6,
        }
    }
}

/// Fixed-point optimum from `seeds` random starts against the closed form.
pub fn cmd_optimize(cfg: &SweepConfig, opts: &OptimizeOptions) -> Result<CommandOutput> {
    cfg.validate()?;
    if opts.seeds == 0 {
        return Err(domain("at least one seed is required"));
    }
    let mut table = Table::new(&[
        "theta",
        "F_star",
        "F_mpcc",
        "gap",
        "iterations",
        "converged",
        "pattern_deviation",
        "seed_spread",
    ]);
    let mut failures = Vec::new();
    let seeds = (0..opts.seeds as u64).map(|k| cfg.seed.wrapping_add(k));
    let seeds: Vec<u64> = seeds.collect();
    for t in cfg.grid_with_edges() {
        let r = score_operator(&PriorDistribution::mirror(t)?)?;
        let runs = optimize_multistart(&r, seeds.iter().copied(), cfg.tol, opts.max_iter)?;
        let best = runs
            .iter()
            .max_by(|a, b| a.f_star.total_cmp(&b.f_star))
            .expect("at least one run");
        let lo = runs.iter().map(|r| r.f_star).fold(f64::INFINITY, f64::min);
        let f = mpcc_fidelity(t);
        let gap = best.f_star - f;
        if gap.abs() > opts.gap_tol {
            failures.push(format!("theta {}: gap {}", fmt_g17(t), fmt_g17(gap)));
        }
        table.push(vec![
            t.into(),
            best.f_star.into(),
            f.into(),
            gap.into(),
            best.iterations.into(),
            runs.iter().all(|r| r.converged).into(),
            pattern_deviation(&best.chi_star, &mpcc_choi(t)?).into(),
            (best.f_star - lo).into(),
        ]);
    }
    Ok(CommandOutput { table, failures })
}
