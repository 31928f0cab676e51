//! Named cross-check suite: every closed form is checked against the
//! truncated-Fock numeric engine, plus randomized equivalence checks between
//! the factorized and brute-force evaluation paths. All randomness is seeded,
//! so the report is deterministic.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{self, DetectorVariant, RadarParams};
use crate::experiments::{
    kernel_study_grid, run_image_band_study, run_kernel_convergence, run_number_variance_study,
    run_snr_sweep, ExperimentError, Normalization, OracleMode, SweepSpec, SweptParameter,
};
use crate::fock::{self, SingleModeSpec};
use crate::operator::{
    brute_force_expectation, build_signal_operator_infinite, expectation, square, variance,
    CutoffChoice, ModeGrid, OperatorSum, PhaseConvention, ProductState, SignalOperatorSpec,
    LadderFactor, Term,
};

const SUITE_SEED: u64 = 0x5133_7A6F;

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn default_params(alpha: C64, xi: C64, beta: C64, theta_h: f64) -> RadarParams {
    RadarParams::new(
        alpha,
        xi,
        beta,
        theta_h,
        101.0,
        100.0,
        1.0,
        DetectorVariant::Single,
    )
    .expect("static parameters are valid")
}

fn check<F>(name: &'static str, body: F) -> CheckResult
where
    F: FnOnce() -> Result<(bool, f64), ExperimentError>,
{
    match body() {
        Ok((passed, max_deviation)) => CheckResult {
            name,
            passed,
            max_deviation,
        },
        Err(_) => CheckResult {
            name,
            passed: false,
            max_deviation: f64::INFINITY,
        },
    }
}

/// Outcome of the randomized factorized-vs-brute-force suite.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSuiteOutcome {
    pub instances: usize,
    /// Largest relative deviation between the two evaluation paths.
    pub max_relative_deviation: f64,
    /// Smallest Hermitian variance encountered (must be ≥ 0).
    pub min_variance: f64,
}

/// Runs `instances` randomized (state, operator) draws on grids of ≤ 3 modes
/// and compares the factorized expectation against the brute-force tensor
/// oracle, for the operator and for its square; Hermitian variances are
/// collected along the way.
pub fn random_oracle_suite(
    instances: usize,
    seed: u64,
) -> Result<OracleSuiteOutcome, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel = 0.0f64;
    let mut min_var = f64::INFINITY;

    for _ in 0..instances {
        let n_modes = rng.gen_range(2..=3usize);
        let freqs: Vec<f64> = (0..n_modes)
            .map(|i| 50.0 * (i + 1) as f64 + rng.gen_range(0.0..10.0))
            .collect();
        let lo = rng.gen_range(0..n_modes);
        let target = (lo + 1 + rng.gen_range(0..n_modes - 1)) % n_modes;
        let grid = ModeGrid::new(freqs, lo, target, 1.0)?;

        let specs: Vec<SingleModeSpec> = (0..n_modes)
            .map(|_| {
                let kind: f64 = rng.gen();
                if kind < 0.25 {
                    SingleModeSpec::Vacuum
                } else if kind < 0.625 {
                    SingleModeSpec::Coherent {
                        beta: C64::from_polar(
                            rng.gen_range(0.0..1.5),
                            rng.gen_range(0.0..std::f64::consts::TAU),
                        ),
                    }
                } else {
                    SingleModeSpec::SqueezedCoherent {
                        alpha: C64::from_polar(
                            rng.gen_range(0.0..1.2),
                            rng.gen_range(0.0..std::f64::consts::TAU),
                        ),
                        xi: C64::from_polar(
                            rng.gen_range(0.0..0.6),
                            rng.gen_range(0.0..std::f64::consts::TAU),
                        ),
                    }
                }
            })
            .collect();
        let cutoff = rng.gen_range(8..=16usize);
        let state = ProductState::realize_unchecked(&grid, specs, CutoffChoice::Explicit(cutoff))?;

        // Hermitian operator: two random monomials plus their conjugates
        let mut terms = Vec::new();
        for _ in 0..2 {
            let degree = rng.gen_range(1..=2usize);
            let monomial: Vec<LadderFactor> = (0..degree)
                .map(|_| LadderFactor {
                    mode: rng.gen_range(0..n_modes),
                    dagger: rng.gen(),
                })
                .collect();
            let coeff = C64::from_polar(
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            terms.push(Term {
                coeff,
                monomial: monomial.clone(),
            });
            terms.push(Term {
                coeff: coeff.conj(),
                monomial: monomial
                    .iter()
                    .rev()
                    .map(|f| LadderFactor {
                        mode: f.mode,
                        dagger: !f.dagger,
                    })
                    .collect(),
            });
        }
        let op = OperatorSum::new(terms);
        let sq = square(&op);

        for target_op in [&op, &sq] {
            let fast = expectation(&state, target_op)?;
            let slow = brute_force_expectation(&state, target_op, 3, 30)?;
            let rel = (fast - slow).norm() / slow.norm().max(1.0);
            max_rel = max_rel.max(rel);
        }
        min_var = min_var.min(variance(&state, &op)?);
    }

    Ok(OracleSuiteOutcome {
        instances,
        max_relative_deviation: max_rel,
        min_variance: min_var,
    })
}

fn check_zero_mean() -> Result<(bool, f64), ExperimentError> {
    let grid = ModeGrid::heterodyne_default(100.0, 1.0, 1.0)?;
    let spec = SignalOperatorSpec::infinite(1.0, 0.0)?;
    let op = build_signal_operator_infinite(&grid, &spec)?;
    let mut max_dev = 0.0f64;
    for r in [0.0, 0.5] {
        let lo = SingleModeSpec::SqueezedCoherent {
            alpha: c(2.0, 0.0),
            xi: c(r, 0.0),
        };
        let state = ProductState::target_absent(&grid, lo, CutoffChoice::Auto)?;
        max_dev = max_dev.max(expectation(&state, &op)?.norm());
    }
    Ok((max_dev <= 1e-12, max_dev))
}

fn check_signal_mean_grid() -> Result<(bool, f64), ExperimentError> {
    let grid = ModeGrid::heterodyne_default(100.0, 1.0, 1.0)?;
    let mut max_rel = 0.0f64;
    for &alpha_mag in &[0.5, 1.0, 2.0] {
        for &beta_mag in &[0.5, 1.0, 1.5] {
            for &offset in &[0.0, 0.4, 0.8] {
                let p = default_params(c(alpha_mag, 0.0), c(0.0, 0.0), c(beta_mag, 0.0), offset);
                let spec = SignalOperatorSpec::infinite(1.0, offset)?;
                let op = build_signal_operator_infinite(&grid, &spec)?;
                let state = ProductState::target_present(
                    &grid,
                    p.lo_spec(),
                    p.beta(),
                    CutoffChoice::Auto,
                )?;
                let numeric = expectation(&state, &op)?.re;
                let closed = analytic::mean_s_present(&p);
                max_rel = max_rel.max((numeric - closed).abs() / closed.abs());
            }
        }
    }
    Ok((max_rel <= 1e-6, max_rel))
}

fn check_variance_exact_grid() -> Result<(bool, f64), ExperimentError> {
    let grid = ModeGrid::heterodyne_default(100.0, 1.0, 1.0)?;
    let spec = SignalOperatorSpec::infinite(1.0, 0.0)?;
    let op = build_signal_operator_infinite(&grid, &spec)?;
    let mut max_rel = 0.0f64;
    for r in [0.0, 0.5] {
        let p = default_params(c(2.0, 0.0), c(r, 0.0), c(1.0, 0.0), 0.0);
        let state = ProductState::target_absent(&grid, p.lo_spec(), CutoffChoice::Auto)?;
        let numeric = variance(&state, &op)?;
        let closed = analytic::var0_s_exact(&p, &[99.0, 101.0]);
        max_rel = max_rel.max((numeric - closed).abs() / closed);
    }
    Ok((max_rel <= 1e-6, max_rel))
}

fn check_image_band_ratio() -> Result<(bool, f64), ExperimentError> {
    let mut max_rel = 0.0f64;
    for &(omega_lo, omega_h) in &[(100.0, 1.0), (100.0, 0.5), (200.0, 2.0)] {
        let p = RadarParams::new(
            c(2.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            0.0,
            omega_lo + omega_h,
            omega_lo,
            1.0,
            DetectorVariant::Single,
        )?;
        let with = ModeGrid::heterodyne_default(omega_lo, omega_h, 1.0)?;
        let without = ModeGrid::heterodyne_without_image(omega_lo, omega_h, 1.0)?;
        let report = run_image_band_study(&with, &without, &p)?;
        max_rel = max_rel
            .max((report.ratio - report.predicted_ratio).abs() / report.predicted_ratio);
    }
    Ok((max_rel <= 1e-6, max_rel))
}

fn check_snr_ratio_curve() -> Result<(bool, f64), ExperimentError> {
    let spec = SweepSpec {
        swept: SweptParameter::SqueezeMagnitude,
        values: vec![0.0, 0.25, 0.5, 1.0],
        held: default_params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0),
        grid: ModeGrid::heterodyne_default(100.0, 1.0, 1.0)?,
        normalization: Normalization::FixedNbarLo,
        oracle: OracleMode::Spot,
        cutoff: CutoffChoice::Auto,
    };
    let rows = run_snr_sweep(&spec)?;
    let base = rows[0].snr_numeric;
    let mut max_dev = 0.0f64;
    let mut decreasing = true;
    for (i, row) in rows.iter().enumerate() {
        let expected = 1.0 - row.value.sinh().powi(2) / 4.0;
        max_dev = max_dev.max((row.snr_numeric / base - expected).abs());
        if i > 0 && row.snr_numeric >= rows[i - 1].snr_numeric {
            decreasing = false;
        }
    }
    Ok((max_dev <= 1e-4 && decreasing, max_dev))
}

fn check_squeezed_photon_number() -> Result<(bool, f64), ExperimentError> {
    let mut max_dev = 0.0f64;
    for &mag in &[0.0, 1.0, 2.0] {
        for alpha in [c(mag, 0.0), c(0.0, mag)] {
            for &r in &[0.0, 0.25, 0.5, 1.0] {
                let xi = C64::from_polar(r, 0.4);
                let state = fock::build_squeezed_coherent(alpha, xi, fock::auto_cutoff(alpha, xi))
                    .map_err(ExperimentError::from_fock)?;
                let exact = alpha.norm_sqr() + r.sinh().powi(2);
                max_dev =
                    max_dev.max((state.mean_photon_number() - exact).abs() / exact.max(1.0));
            }
        }
    }
    Ok((max_dev <= 1e-6, max_dev))
}

fn check_mean_field_displacement() -> Result<(bool, f64), ExperimentError> {
    let mut max_dev = 0.0f64;
    for &(re, im) in &[(1.0, 0.0), (0.0, 2.0), (1.0, -1.0)] {
        for &r in &[0.0, 0.5, 1.0] {
            let alpha = c(re, im);
            let xi = C64::from_polar(r, 1.2);
            let state = fock::build_squeezed_coherent(alpha, xi, fock::auto_cutoff(alpha, xi))
                .map_err(ExperimentError::from_fock)?;
            let m = fock::moments(&state);
            max_dev = max_dev.max((m.entry(0, 1) - alpha).norm());
        }
    }
    Ok((max_dev <= 1e-6, max_dev))
}

fn check_number_variance_contrast() -> Result<(bool, f64), ExperimentError> {
    // at fixed n̄_LO, find (r ≤ 0.5, θ_ξ) with Var₀S′ at least 5% below its
    // coherent value while Var₀S is unchanged
    let grid = ModeGrid::heterodyne_default(100.0, 1.0, 1.0)?;
    let held = default_params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0);
    let base_spec = SweepSpec {
        swept: SweptParameter::SqueezeMagnitude,
        values: vec![0.0],
        held,
        grid: grid.clone(),
        normalization: Normalization::FixedNbarLo,
        oracle: OracleMode::Spot,
        cutoff: CutoffChoice::Auto,
    };
    let baseline = &run_number_variance_study(&base_spec)?[0];

    let mut best_drop = 0.0f64;
    let mut var_s_stable = false;
    for i in 0..16 {
        let theta = i as f64 * std::f64::consts::TAU / 16.0;
        let held_theta = default_params(
            c(2.0, 0.0),
            C64::from_polar(1e-12, theta),
            c(1.0, 0.0),
            0.0,
        );
        let spec = SweepSpec {
            values: (1..=5).map(|k| 0.1 * k as f64).collect(),
            held: held_theta,
            grid: grid.clone(),
            ..base_spec.clone()
        };
        for row in run_number_variance_study(&spec)? {
            let drop = 1.0 - row.var0_sprime_numeric / baseline.var0_sprime_numeric;
            if drop > best_drop {
                best_drop = drop;
                var_s_stable = (row.var0_s_numeric - baseline.var0_s_numeric).abs()
                    <= 1e-8 * baseline.var0_s_numeric;
            }
        }
    }
    Ok((best_drop >= 0.05 && var_s_stable, best_drop))
}

fn check_kernel_reduction() -> Result<(bool, f64), ExperimentError> {
    let spec = SweepSpec {
        swept: SweptParameter::Tau,
        values: vec![100.0, 1000.0, 10000.0],
        held: default_params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0),
        grid: kernel_study_grid(100.0, 1.0, 1.0)?,
        normalization: Normalization::FixedAlpha,
        oracle: OracleMode::Spot,
        cutoff: CutoffChoice::Auto,
    };
    let report = run_kernel_convergence(&spec)?;
    let devs: Vec<f64> = report
        .rows
        .iter()
        .map(|r| r.deviation_kernel_only)
        .collect();
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let last = *devs.last().expect("three rows");
    Ok((decreasing && last <= 1e-3, last))
}

fn check_kernel_phase_convention() -> Result<(bool, f64), ExperimentError> {
    let spec = SweepSpec {
        swept: SweptParameter::Tau,
        values: vec![100.0, 1000.0, 10000.0],
        held: default_params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), std::f64::consts::PI / 3.0),
        grid: kernel_study_grid(100.0, 1.0, 1.0)?,
        normalization: Normalization::FixedAlpha,
        oracle: OracleMode::Spot,
        cutoff: CutoffChoice::Auto,
    };
    let report = run_kernel_convergence(&spec)?;
    let last = report.rows.last().expect("three rows");
    let gap = last.deviation_sign_prefactor.unwrap_or(f64::INFINITY)
        - last.deviation_kernel_only;
    Ok((
        report.reducing_convention == Some(PhaseConvention::KernelOnly) && gap > 0.1,
        last.deviation_kernel_only,
    ))
}

fn check_oracle_equivalence() -> Result<(bool, f64), ExperimentError> {
    let outcome = random_oracle_suite(60, SUITE_SEED)?;
    Ok((
        outcome.max_relative_deviation <= 1e-8,
        outcome.max_relative_deviation,
    ))
}

fn check_variance_nonnegative() -> Result<(bool, f64), ExperimentError> {
    let outcome = random_oracle_suite(60, SUITE_SEED ^ 0xFF)?;
    Ok((outcome.min_variance >= 0.0, (-outcome.min_variance).max(0.0)))
}

fn check_balanced_complementarity() -> Result<(bool, f64), ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 0xB4);
    let mut max_dev = 0.0f64;
    for _ in 0..10 {
        let theta_h = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta_lo = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta_t = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = rng.gen_range(0.0..1.0);
        let alpha = C64::from_polar(2.0, theta_lo);
        let beta = C64::from_polar(1.3, theta_t);
        let single = RadarParams::new(
            alpha,
            c(r, 0.0),
            beta,
            theta_h,
            101.0,
            100.0,
            1.0,
            DetectorVariant::Single,
        )?;
        let balanced = RadarParams::new(
            alpha,
            c(r, 0.0),
            beta,
            theta_h,
            101.0,
            100.0,
            1.0,
            DetectorVariant::Balanced,
        )?;
        let total = analytic::snr(&single)? + analytic::snr(&balanced)?;
        let expected =
            2.0 * (1.0 - r.sinh().powi(2) / single.n_lo()) * single.n_target();
        max_dev = max_dev.max((total - expected).abs());
    }
    Ok((max_dev <= 1e-10, max_dev))
}

fn check_scale_invariance() -> Result<(bool, f64), ExperimentError> {
    let mut snrs = Vec::new();
    for &g in &[0.1, 1.0, 10.0] {
        let p = RadarParams::new(
            c(2.0, 0.0),
            c(0.4, 0.0),
            c(1.0, 0.0),
            0.2,
            101.0,
            100.0,
            g,
            DetectorVariant::Single,
        )?;
        let mean1 = analytic::mean_s_present(&p);
        let var0 = analytic::var0_s_exact(&p, &[99.0, 101.0]);
        snrs.push(analytic::snr_definition(mean1, 0.0, var0)?);
    }
    let max_dev = snrs
        .iter()
        .map(|s| (s - snrs[1]).abs() / snrs[1])
        .fold(0.0f64, f64::max);
    Ok((max_dev <= 1e-12, max_dev))
}

fn check_phase_covariance() -> Result<(bool, f64), ExperimentError> {
    let grid = ModeGrid::new(vec![101.0, 100.0], 1, 0, 1.0)?;
    let beta = C64::from_polar(1.0, 0.3);
    let evaluate = |theta_h: f64, alpha: C64| -> Result<C64, ExperimentError> {
        let spec = SignalOperatorSpec::infinite(1.0, theta_h)?;
        let op = build_signal_operator_infinite(&grid, &spec)?;
        let lo = SingleModeSpec::SqueezedCoherent {
            alpha,
            xi: c(0.4, 0.0),
        };
        let state = ProductState::target_present(&grid, lo, beta, CutoffChoice::Auto)?;
        Ok(expectation(&state, &op)?)
    };
    let alpha = C64::from_polar(2.0, 1.1);
    let base = evaluate(0.5, alpha)?;
    let mut max_dev = 0.0f64;
    for &delta in &[0.3, 1.7, -0.9] {
        let shifted = evaluate(0.5 + delta, alpha * C64::from_polar(1.0, delta))?;
        max_dev = max_dev.max((base - shifted).norm() / base.norm());
    }
    Ok((max_dev <= 1e-10, max_dev))
}

fn check_poissonian_baseline() -> Result<(bool, f64), ExperimentError> {
    let mut max_dev = 0.0f64;
    for &mag in &[0.5, 1.0, 2.0, 3.0] {
        let beta = C64::from_polar(mag, 0.7);
        let state = fock::build_coherent(beta, fock::auto_cutoff(beta, c(0.0, 0.0)))
            .map_err(ExperimentError::from_fock)?;
        max_dev = max_dev.max((fock::number_variance(&state) - beta.norm_sqr()).abs());
    }
    Ok((max_dev <= 1e-8, max_dev))
}

impl ExperimentError {
    fn from_fock(e: fock::FockError) -> Self {
        ExperimentError::Engine(e.into())
    }
}

/// Runs the full suite in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("zero_mean_target_absent", check_zero_mean),
        check("signal_mean_grid", check_signal_mean_grid),
        check("variance_exact_grid", check_variance_exact_grid),
        check("image_band_ratio", check_image_band_ratio),
        check("snr_ratio_curve", check_snr_ratio_curve),
        check("squeezed_photon_number", check_squeezed_photon_number),
        check("mean_field_displacement", check_mean_field_displacement),
        check("number_variance_contrast", check_number_variance_contrast),
        check("kernel_reduction", check_kernel_reduction),
        check("kernel_phase_convention", check_kernel_phase_convention),
        check("oracle_equivalence", check_oracle_equivalence),
        check("variance_nonnegative", check_variance_nonnegative),
        check("balanced_complementarity", check_balanced_complementarity),
        check("scale_invariance", check_scale_invariance),
        check("phase_covariance", check_phase_covariance),
        check("poissonian_baseline", check_poissonian_baseline),
    ]
}
