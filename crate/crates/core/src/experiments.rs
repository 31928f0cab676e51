//! Parameter-sweep studies pairing the closed forms with the numeric engine.
//!
//! Every sweep row is computed twice — through the analytic module and
//! through the operator engine — and carries an agreement flag. The studies
//! realize the substance of the result as data: the SNR ratio curve
//! `1 − sinh²r/n̄_LO`, the contrast between `Var₀S` (insensitive to squeezing
//! at fixed `n̄_LO`) and `Var₀S′` (which amplitude squeezing can push below
//! the coherent value), the image-band factor, and the finite-`τ` reduction
//! of the general signal operator.
//!
//! Detection curves under equal-variance Gaussian hypotheses are included as
//! radar-facing plumbing on top of the SNR.

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::analytic::{self, AnalyticError, RadarParams};
use crate::operator::{
    brute_force_expectation, build_signal_operator_finite, build_signal_operator_infinite,
    build_sprime, expectation, expectation_real, square, variance, CutoffChoice, EngineError,
    ModeGrid, OperatorSum, PhaseConvention, ProductState, SignalOperatorSpec,
};

/// Relative tolerance of the per-row analytic/numeric agreement flag.
pub const AGREEMENT_TOL: f64 = 1e-5;
/// Absolute floor under the relative agreement comparison.
pub const AGREEMENT_FLOOR: f64 = 1e-9;
/// Relative tolerance of the brute-force spot checks.
pub const ORACLE_TOL: f64 = 1e-8;
/// Uniform cutoff used for brute-force spot-check replicas.
pub const ORACLE_CUTOFF: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle mismatch in {context}: relative error {relative_error}")]
    OracleMismatch { context: String, relative_error: f64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    /// `r = |ξ|`.
    SqueezeMagnitude,
    /// `θ_ξ = arg ξ`.
    SqueezePhase,
    /// Combined offset `θ_T − θ_LO + θ_H` (moved via `θ_H`).
    PhaseOffset,
    /// `|α|`.
    AlphaMagnitude,
    /// Integration time, in heterodyne periods (kernel study only).
    Tau,
}

/// What is held fixed while the squeeze varies: the bare displacement or the
/// total LO photon number. Conflating the two is the classic way to misread
/// the result, so both are first-class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    FixedAlpha,
    FixedNbarLo,
}

/// Brute-force spot-check cadence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// First, middle and last sweep points.
    Spot,
    /// Every sweep point.
    Full,
}

/// A sweep: the swept knob and its values, a baseline parameter point, the
/// mode grid, and evaluation policy.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub swept: SweptParameter,
    pub values: Vec<f64>,
    pub held: RadarParams,
    pub grid: ModeGrid,
    pub normalization: Normalization,
    pub oracle: OracleMode,
    pub cutoff: CutoffChoice,
}

/// One evaluated sweep point: analytic and numeric values side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub snr_analytic: f64,
    pub snr_numeric: f64,
    pub snr_ratio: f64,
    pub var0_s_analytic: f64,
    pub var0_s_numeric: f64,
    pub var0_sprime_analytic: f64,
    pub var0_sprime_numeric: f64,
    pub agree: bool,
}

fn within_agreement(analytic: f64, numeric: f64) -> bool {
    (analytic - numeric).abs() <= AGREEMENT_TOL * analytic.abs().max(AGREEMENT_FLOOR)
}

/// Moves the swept knob of `held` to `value` under the given normalization.
fn point_params(
    held: &RadarParams,
    swept: SweptParameter,
    value: f64,
    normalization: Normalization,
) -> Result<RadarParams, ExperimentError> {
    if !value.is_finite() {
        return Err(ExperimentError::InvalidArgument(
            "sweep values must be finite".into(),
        ));
    }
    let (alpha, xi, theta_h) = match swept {
        SweptParameter::SqueezeMagnitude => {
            if value < 0.0 {
                return Err(ExperimentError::InvalidArgument(
                    "squeeze magnitude must be nonnegative".into(),
                ));
            }
            let xi = C64::from_polar(value, held.xi().arg());
            let alpha = match normalization {
                Normalization::FixedAlpha => held.alpha(),
                Normalization::FixedNbarLo => {
                    let target = held.n_lo();
                    let remaining = target - value.sinh().powi(2);
                    if remaining < 0.0 {
                        return Err(ExperimentError::Configuration(format!(
                            "sinh²({value}) exceeds the held n̄_LO = {target}"
                        )));
                    }
                    C64::from_polar(remaining.sqrt(), held.theta_lo())
                }
            };
            (alpha, xi, held.theta_h())
        }
        SweptParameter::SqueezePhase => {
            // n̄_LO does not depend on θ_ξ: both normalizations keep α
            let xi = C64::from_polar(held.r(), value);
            (held.alpha(), xi, held.theta_h())
        }
        SweptParameter::PhaseOffset => {
            let theta_h = value - held.theta_t() + held.theta_lo();
            (held.alpha(), held.xi(), theta_h)
        }
        SweptParameter::AlphaMagnitude => {
            if value < 0.0 {
                return Err(ExperimentError::InvalidArgument(
                    "alpha magnitude must be nonnegative".into(),
                ));
            }
            if normalization == Normalization::FixedNbarLo {
                return Err(ExperimentError::Configuration(
                    "an alpha-magnitude sweep contradicts the fixed-n̄_LO normalization".into(),
                ));
            }
            (
                C64::from_polar(value, held.theta_lo()),
                held.xi(),
                held.theta_h(),
            )
        }
        SweptParameter::Tau => {
            return Err(ExperimentError::Configuration(
                "tau sweeps apply to the kernel-convergence study".into(),
            ));
        }
    };
    Ok(RadarParams::new(
        alpha,
        xi,
        held.beta(),
        theta_h,
        held.omega_t(),
        held.omega_lo(),
        held.g(),
        held.variant(),
    )?)
}

/// Grid frequencies `ω_k` with `|ω_LO − ω_k| = ω_H`.
fn matching_band_freqs(grid: &ModeGrid, omega_h: f64) -> Vec<f64> {
    let lo = grid.omega_lo();
    grid.freqs()
        .iter()
        .copied()
        .filter(|&w| ((w - lo).abs() - omega_h).abs() <= 1e-9 * omega_h)
        .collect()
}

/// Checks that the grid realizes the radar configuration of `p`: matching
/// LO/target frequencies, matching scale constant, and an image mode.
fn check_grid(grid: &ModeGrid, p: &RadarParams) -> Result<(), ExperimentError> {
    let tol = 1e-9 * p.omega_lo();
    if (grid.omega_lo() - p.omega_lo()).abs() > tol {
        return Err(ExperimentError::Configuration(format!(
            "grid LO frequency {} does not match parameters ({})",
            grid.omega_lo(),
            p.omega_lo()
        )));
    }
    if (grid.omega_target() - p.omega_t()).abs() > tol {
        return Err(ExperimentError::Configuration(format!(
            "grid target frequency {} does not match parameters ({})",
            grid.omega_target(),
            p.omega_t()
        )));
    }
    if (grid.scale_g() - p.g()).abs() > 1e-12 * p.g() {
        return Err(ExperimentError::Configuration(
            "grid scale constant does not match parameters".into(),
        ));
    }
    let image = p.omega_lo() - p.omega_h();
    if !grid.freqs().iter().any(|&w| (w - image).abs() <= tol) {
        return Err(ExperimentError::Configuration(format!(
            "grid lacks the image mode at {image}"
        )));
    }
    Ok(())
}

/// Factorized-vs-brute-force consistency check on reduced-cutoff replicas of
/// the sweep states.
fn oracle_spot_check(
    grid: &ModeGrid,
    state0: &ProductState,
    state1: &ProductState,
    op: &OperatorSum,
) -> Result<(), ExperimentError> {
    let sq = square(op);
    for (state, target, context) in [
        (state1, op, "signal mean"),
        (state0, &sq, "signal second moment"),
    ] {
        let replica = ProductState::realize_unchecked(
            grid,
            state.specs().to_vec(),
            CutoffChoice::Explicit(ORACLE_CUTOFF),
        )?;
        let fast = expectation(&replica, target)?;
        let slow = brute_force_expectation(&replica, target, 3, ORACLE_CUTOFF)?;
        let rel = (fast - slow).norm() / slow.norm().max(1.0);
        if rel > ORACLE_TOL {
            return Err(ExperimentError::OracleMismatch {
                context: context.into(),
                relative_error: rel,
            });
        }
    }
    Ok(())
}

fn evaluate_point(
    grid: &ModeGrid,
    p: &RadarParams,
    cutoff: CutoffChoice,
    run_oracle: bool,
) -> Result<SweepRow, ExperimentError> {
    let op_spec = SignalOperatorSpec::infinite(p.omega_h(), p.theta_h())?;
    let s_op = build_signal_operator_infinite(grid, &op_spec)?;
    let sprime_op = build_sprime(grid);

    let state0 = ProductState::target_absent(grid, p.lo_spec(), cutoff)?;
    let state1 = ProductState::target_present(grid, p.lo_spec(), p.beta(), cutoff)?;

    let mean0 = expectation_real(&state0, &s_op)?;
    let mean1 = expectation_real(&state1, &s_op)?;
    let var0_num = variance(&state0, &s_op)?;
    let var0_sprime_num = variance(&state0, &sprime_op)?;
    let snr_num = analytic::snr_definition(mean1, mean0, var0_num)?;

    let band = matching_band_freqs(grid, p.omega_h());
    let snr_an = analytic::snr_exact_grid(p)?;
    let var0_an = analytic::var0_s_exact(p, &band);
    let var0_sprime_an = analytic::number_variance_closed(p)?;
    let snr_ratio = analytic::snr_ratio_vs_coherent(p)?;

    if run_oracle {
        oracle_spot_check(grid, &state0, &state1, &s_op)?;
    }

    let agree = within_agreement(snr_an, snr_num)
        && within_agreement(var0_an, var0_num)
        && within_agreement(var0_sprime_an, var0_sprime_num);

    Ok(SweepRow {
        value: f64::NAN, // filled by the caller
        snr_analytic: snr_an,
        snr_numeric: snr_num,
        snr_ratio,
        var0_s_analytic: var0_an,
        var0_s_numeric: var0_num,
        var0_sprime_analytic: var0_sprime_an,
        var0_sprime_numeric: var0_sprime_num,
        agree,
    })
}

fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, ExperimentError> {
    if spec.values.is_empty() {
        return Err(ExperimentError::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    check_grid(&spec.grid, &spec.held)?;
    let last = spec.values.len() - 1;
    let spot_points = [0, last / 2, last];
    let mut rows = Vec::with_capacity(spec.values.len());
    for (idx, &value) in spec.values.iter().enumerate() {
        let p = point_params(&spec.held, spec.swept, value, spec.normalization)?;
        let run_oracle = match spec.oracle {
            OracleMode::Full => true,
            OracleMode::Spot => spot_points.contains(&idx),
        };
        let mut row = evaluate_point(&spec.grid, &p, spec.cutoff, run_oracle)?;
        row.value = value;
        rows.push(row);
    }
    Ok(rows)
}

/// SNR sweep: one row per value, each computed through both the analytic
/// module and the operator engine, with brute-force spot checks.
pub fn run_snr_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, ExperimentError> {
    run_sweep(spec)
}

/// Variance-contrast study between the heterodyne statistic `S` and the
/// zero-frequency statistic `S′`; restricted to squeeze sweeps, where the
/// two variances diverge.
pub fn run_number_variance_study(spec: &SweepSpec) -> Result<Vec<SweepRow>, ExperimentError> {
    if !matches!(
        spec.swept,
        SweptParameter::SqueezeMagnitude | SweptParameter::SqueezePhase
    ) {
        return Err(ExperimentError::Configuration(
            "the number-variance study sweeps the squeeze magnitude or phase".into(),
        ));
    }
    run_sweep(spec)
}

/// Outcome of the image-band accounting study.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBandReport {
    pub var_with_numeric: f64,
    pub var_without_numeric: f64,
    pub var_with_analytic: f64,
    pub var_without_analytic: f64,
    /// `Var(with) / Var(without)`.
    pub ratio: f64,
    /// `(ω₊ + ω₋)/ω₊`, the exact prediction; ≈ 2 in the narrowband regime.
    pub predicted_ratio: f64,
}

/// Compares `Var₀S` on two grids that differ only by the image-band mode.
pub fn run_image_band_study(
    grid_with: &ModeGrid,
    grid_without: &ModeGrid,
    p: &RadarParams,
) -> Result<ImageBandReport, ExperimentError> {
    check_grid(grid_with, p)?;
    let tol = 1e-9 * p.omega_lo();
    let image = p.omega_lo() - p.omega_h();
    let mut expected: Vec<f64> = grid_with
        .freqs()
        .iter()
        .copied()
        .filter(|&w| (w - image).abs() > tol)
        .collect();
    let mut actual: Vec<f64> = grid_without.freqs().to_vec();
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    actual.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let same = expected.len() == actual.len()
        && expected
            .iter()
            .zip(actual.iter())
            .all(|(a, b)| (a - b).abs() <= tol);
    if !same || grid_without.len() != grid_with.len() - 1 {
        return Err(ExperimentError::Configuration(
            "grids must be identical except for the image-band mode".into(),
        ));
    }
    if (grid_without.omega_lo() - p.omega_lo()).abs() > tol
        || (grid_without.omega_target() - p.omega_t()).abs() > tol
        || (grid_without.scale_g() - p.g()).abs() > 1e-12 * p.g()
    {
        return Err(ExperimentError::Configuration(
            "image-free grid does not match the radar parameters".into(),
        ));
    }

    let spec = SignalOperatorSpec::infinite(p.omega_h(), p.theta_h())?;
    let mut vars = [0.0f64; 2];
    let mut analytic_vars = [0.0f64; 2];
    for (slot, grid) in [grid_with, grid_without].iter().enumerate() {
        let op = build_signal_operator_infinite(grid, &spec)?;
        let state = ProductState::target_absent(grid, p.lo_spec(), CutoffChoice::Auto)?;
        vars[slot] = variance(&state, &op)?;
        analytic_vars[slot] = analytic::var0_s_exact(p, &matching_band_freqs(grid, p.omega_h()));
    }
    let omega_plus = p.omega_t();
    let omega_minus = p.omega_lo() - p.omega_h();
    Ok(ImageBandReport {
        var_with_numeric: vars[0],
        var_without_numeric: vars[1],
        var_with_analytic: analytic_vars[0],
        var_without_analytic: analytic_vars[1],
        ratio: vars[0] / vars[1],
        predicted_ratio: (omega_plus + omega_minus) / omega_plus,
    })
}

/// Four-mode grid for the kernel-convergence study: image, LO and target
/// bands plus a spectator detuned by `√2·ω_H`, incommensurate with the
/// heterodyne period so that finite-`τ` residuals genuinely decay like `1/τ`
/// instead of vanishing identically at whole-period integration times.
pub fn kernel_study_grid(omega_lo: f64, omega_h: f64, scale_g: f64) -> Result<ModeGrid, EngineError> {
    ModeGrid::new(
        vec![
            omega_lo - omega_h,
            omega_lo,
            omega_lo + omega_h,
            omega_lo + SQRT_2 * omega_h,
        ],
        1,
        2,
        scale_g,
    )
}

/// One integration time of the reduction study. Deviations are measured on
/// the dimensionless kernel scale: per ordered pair, `|c_fin − c_inf|`
/// divided by `g√(ω_l ω_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConvergenceRow {
    /// Integration time in heterodyne periods `2π/ω_H`.
    pub tau_periods: f64,
    /// Max term-wise deviation with the kernel-only phase bookkeeping.
    pub deviation_kernel_only: f64,
    /// Same with the extra outer sign prefactor; `None` when `θ_H = 0`
    /// (the conventions coincide).
    pub deviation_sign_prefactor: Option<f64>,
}

/// Result of the finite-`τ` reduction study.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConvergenceReport {
    pub rows: Vec<KernelConvergenceRow>,
    /// Least-squares `C` in `deviation ≈ C/τ` for the kernel-only column
    /// (`τ` in heterodyne periods).
    pub decay_constant: f64,
    /// The convention whose long-time limit reproduces the restricted-sum
    /// operator; reported only when `θ_H ≠ 0` distinguishes them.
    pub reducing_convention: Option<PhaseConvention>,
}

fn max_term_deviation(
    grid: &ModeGrid,
    finite: &OperatorSum,
    infinite: &OperatorSum,
) -> f64 {
    let inf_map = infinite.canonical_terms();
    let fin_map = finite.canonical_terms();
    let zero = C64::new(0.0, 0.0);
    let mut max_dev = 0.0f64;
    for monomial in fin_map.keys().chain(inf_map.keys()) {
        let f = fin_map.get(monomial).unwrap_or(&zero);
        let i = inf_map.get(monomial).unwrap_or(&zero);
        let wl = grid.freqs()[monomial[0].mode];
        let wk = grid.freqs()[monomial[1].mode];
        let scale = grid.scale_g() * (wl * wk).sqrt();
        max_dev = max_dev.max((f - i).norm() / scale);
    }
    max_dev
}

/// Finite-`τ` reduction study: term-wise deviation of the general operator
/// from the restricted-sum operator across the given integration times
/// (in heterodyne periods), under both phase conventions when `θ_H ≠ 0`.
pub fn run_kernel_convergence(spec: &SweepSpec) -> Result<KernelConvergenceReport, ExperimentError> {
    if spec.swept != SweptParameter::Tau {
        return Err(ExperimentError::Configuration(
            "the kernel study sweeps the integration time".into(),
        ));
    }
    if spec.values.is_empty() {
        return Err(ExperimentError::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    let omega_h = spec.held.omega_h();
    let theta_h = spec.held.theta_h();
    let infinite = build_signal_operator_infinite(
        &spec.grid,
        &SignalOperatorSpec::infinite(omega_h, theta_h)?,
    )?;
    let split_conventions = theta_h != 0.0;

    let mut rows = Vec::with_capacity(spec.values.len());
    for &periods in &spec.values {
        if periods <= 0.0 || !periods.is_finite() {
            return Err(ExperimentError::InvalidArgument(
                "integration times must be positive".into(),
            ));
        }
        let tau = periods * TAU / omega_h;
        let op_spec = SignalOperatorSpec::finite(omega_h, theta_h, tau)?;
        let kernel_only = build_signal_operator_finite(
            &spec.grid,
            &op_spec,
            PhaseConvention::KernelOnly,
        )?;
        let dev_kernel = max_term_deviation(&spec.grid, &kernel_only, &infinite);
        let dev_prefactor = if split_conventions {
            let prefactor = build_signal_operator_finite(
                &spec.grid,
                &op_spec,
                PhaseConvention::SignPrefactor,
            )?;
            Some(max_term_deviation(&spec.grid, &prefactor, &infinite))
        } else {
            None
        };
        rows.push(KernelConvergenceRow {
            tau_periods: periods,
            deviation_kernel_only: dev_kernel,
            deviation_sign_prefactor: dev_prefactor,
        });
    }

    // dev = C/τ through the origin: C = Σ(dev/τ)/Σ(1/τ²)
    let mut num = 0.0;
    let mut den = 0.0;
    for row in &rows {
        num += row.deviation_kernel_only / row.tau_periods;
        den += 1.0 / (row.tau_periods * row.tau_periods);
    }
    let decay_constant = if den > 0.0 { num / den } else { 0.0 };

    let reducing_convention = if split_conventions {
        let last = rows.last().expect("at least one row");
        let kernel = last.deviation_kernel_only;
        let prefactor = last.deviation_sign_prefactor.expect("split conventions");
        Some(if kernel <= prefactor {
            PhaseConvention::KernelOnly
        } else {
            PhaseConvention::SignPrefactor
        })
    } else {
        None
    };

    Ok(KernelConvergenceReport {
        rows,
        decay_constant,
        reducing_convention,
    })
}

/// Standard normal tail function `Q(x)`.
pub fn normal_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Inverse of [`normal_tail`] on `(0, 1)`: rational initial guess refined by
/// two Newton steps against `Q` itself.
pub fn normal_tail_inv(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "normal_tail_inv domain is (0, 1)");
    // Acklam's approximation for Φ⁻¹(p); Q⁻¹(p) = −Φ⁻¹(p) by symmetry.
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    let phi_inv = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let mut x = -phi_inv;
    for _ in 0..2 {
        let density = (-0.5 * x * x).exp() / (TAU.sqrt());
        if density == 0.0 {
            break;
        }
        x += (normal_tail(x) - p) / density;
    }
    x
}

/// Detection probability versus false-alarm probability under equal-variance
/// Gaussian hypotheses separated by deflection `√SNR`:
/// `pd = Q(Q⁻¹(pfa) − √snr)`.
pub fn gaussian_detection_curve(
    snr: f64,
    pfa_values: &[f64],
) -> Result<Vec<(f64, f64)>, ExperimentError> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(ExperimentError::InvalidArgument(
            "snr must be finite and nonnegative".into(),
        ));
    }
    let deflection = snr.sqrt();
    pfa_values
        .iter()
        .map(|&pfa| {
            if pfa <= 0.0 || pfa >= 1.0 || pfa.is_nan() {
                return Err(ExperimentError::InvalidArgument(format!(
                    "pfa {pfa} outside (0, 1)"
                )));
            }
            Ok((pfa, normal_tail(normal_tail_inv(pfa) - deflection)))
        })
        .collect()
}
