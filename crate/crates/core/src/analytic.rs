//! Closed-form means, variances and SNR for the heterodyne radar statistic.
//!
//! These are the comparison targets for the numeric operator engine. With
//! `g = κħ/(2ε₀V)` lumped into one scale constant, the target-present signal
//! mean is `g√(ω_T ω_LO)|α||β|cos(θ_T − θ_LO + θ_H)`, the target-absent
//! variance is `(g/2)² n̄_LO ω_LO Σ ω_k` over the two sideband modes, and the
//! narrowband SNR collapses to
//!
//! ```text
//! SNR = 2 (1 − sinh²r / n̄_LO) n̄_T cos²(θ_T − θ_LO + θ_H),
//! ```
//!
//! which is maximal at `r = 0`: squeezing the local oscillator can only
//! reduce it. A balanced two-detector arrangement gives the same result with
//! `cos²` replaced by `sin²`.
//!
//! The zero-frequency statistic `S′` is different: its variance tracks the
//! LO photon-number variance, which amplitude squeezing can push below the
//! coherent (Poissonian) value. That contrast is the reason the headline
//! result looks surprising, and it is reproduced here by delegating the
//! number variance to the truncated-basis sum.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{self, FockError, SingleModeSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("undefined SNR: {0}")]
    UndefinedSnr(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Single-detector or balanced two-detector readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorVariant {
    Single,
    Balanced,
}

/// Physical parameter point: LO displacement/squeeze, target-return
/// amplitude, phases, frequencies, and the lumped scale constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarParams {
    alpha: C64,
    xi: C64,
    beta: C64,
    theta_h: f64,
    omega_t: f64,
    omega_lo: f64,
    g: f64,
    variant: DetectorVariant,
}

impl RadarParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: C64,
        xi: C64,
        beta: C64,
        theta_h: f64,
        omega_t: f64,
        omega_lo: f64,
        g: f64,
        variant: DetectorVariant,
    ) -> Result<Self, AnalyticError> {
        if omega_lo <= 0.0 || !omega_lo.is_finite() || !omega_t.is_finite() {
            return Err(AnalyticError::InvalidArgument(
                "frequencies must be positive and finite".into(),
            ));
        }
        if omega_t <= omega_lo {
            // sign convention: the target return sits above the LO
            return Err(AnalyticError::InvalidArgument(
                "omega_t must exceed omega_lo".into(),
            ));
        }
        if g <= 0.0 || !g.is_finite() {
            return Err(AnalyticError::InvalidArgument(
                "scale constant g must be positive".into(),
            ));
        }
        if !theta_h.is_finite() {
            return Err(AnalyticError::InvalidArgument(
                "theta_h must be finite".into(),
            ));
        }
        Ok(Self {
            alpha,
            xi,
            beta,
            theta_h,
            omega_t,
            omega_lo,
            g,
            variant,
        })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn xi(&self) -> C64 {
        self.xi
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn theta_h(&self) -> f64 {
        self.theta_h
    }

    pub fn omega_t(&self) -> f64 {
        self.omega_t
    }

    pub fn omega_lo(&self) -> f64 {
        self.omega_lo
    }

    pub fn omega_h(&self) -> f64 {
        self.omega_t - self.omega_lo
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn variant(&self) -> DetectorVariant {
        self.variant
    }

    /// Squeezing parameter `r = |ξ|`.
    pub fn r(&self) -> f64 {
        self.xi.norm()
    }

    pub fn theta_t(&self) -> f64 {
        self.beta.arg()
    }

    pub fn theta_lo(&self) -> f64 {
        self.alpha.arg()
    }

    /// Combined phase offset `θ_T − θ_LO + θ_H`.
    pub fn phase_offset(&self) -> f64 {
        self.theta_t() - self.theta_lo() + self.theta_h
    }

    /// Target-return photon number `n̄_T = |β|²`.
    pub fn n_target(&self) -> f64 {
        self.beta.norm_sqr()
    }

    /// LO photon number `n̄_LO = |α|² + sinh²r`.
    pub fn n_lo(&self) -> f64 {
        self.alpha.norm_sqr() + self.r().sinh().powi(2)
    }

    /// The LO mode preparation implied by these parameters.
    pub fn lo_spec(&self) -> SingleModeSpec {
        if self.xi.norm() == 0.0 && self.alpha.norm_sqr() == 0.0 {
            SingleModeSpec::Vacuum
        } else if self.xi.norm() == 0.0 {
            SingleModeSpec::Coherent { beta: self.alpha }
        } else {
            SingleModeSpec::SqueezedCoherent {
                alpha: self.alpha,
                xi: self.xi,
            }
        }
    }

    fn phase_factor(&self) -> f64 {
        match self.variant {
            DetectorVariant::Single => self.phase_offset().cos(),
            // π/2 phase shift of the reflected light at the beam splitter
            DetectorVariant::Balanced => self.phase_offset().sin(),
        }
    }
}

/// Target-present signal mean `g√(ω_T ω_LO)|α||β| cos(θ_T − θ_LO + θ_H)`
/// (`sin` for the balanced variant).
pub fn mean_s_present(p: &RadarParams) -> f64 {
    p.g() * (p.omega_t() * p.omega_lo()).sqrt() * p.alpha.norm() * p.beta.norm() * p.phase_factor()
}

/// Exact target-absent variance `(g/2)² n̄_LO ω_LO Σ_k ω_k`, summed over the
/// grid frequencies with `|ω_LO − ω_k| = ω_H`.
pub fn var0_s_exact(p: &RadarParams, matching_freqs: &[f64]) -> f64 {
    let band_sum: f64 = matching_freqs.iter().sum();
    (0.5 * p.g()).powi(2) * p.n_lo() * p.omega_lo() * band_sum
}

/// Narrowband (`ω_T ≈ ω_LO ≡ ω`) variance `g²ω² n̄_LO / 2`, the factor 2 in
/// the numerator of `2(gω/2)² n̄_LO` coming from the image band.
pub fn var0_s_narrowband(p: &RadarParams) -> f64 {
    0.5 * (p.g() * p.omega_lo()).powi(2) * p.n_lo()
}

/// Narrowband SNR, `2 (1 − sinh²r/n̄_LO) n̄_T cos²(θ_T − θ_LO + θ_H)`
/// (`sin²` for the balanced variant).
pub fn snr(p: &RadarParams) -> Result<f64, AnalyticError> {
    let n_lo = p.n_lo();
    if n_lo <= 0.0 {
        return Err(AnalyticError::UndefinedSnr(
            "n_lo = 0 makes the target-absent variance vanish".into(),
        ));
    }
    let ratio = 1.0 - p.r().sinh().powi(2) / n_lo;
    Ok(2.0 * ratio * p.n_target() * p.phase_factor().powi(2))
}

/// SNR without the narrowband approximation: the exact signal mean and
/// image-band sum leave an extra factor `ω_T/ω_LO` on the narrowband form.
pub fn snr_exact_grid(p: &RadarParams) -> Result<f64, AnalyticError> {
    Ok(snr(p)? * p.omega_t() / p.omega_lo())
}

/// Fraction of the coherent-LO SNR retained at squeeze `r` and fixed
/// `n̄_LO`: `1 − sinh²r/n̄_LO`.
pub fn snr_ratio_vs_coherent(p: &RadarParams) -> Result<f64, AnalyticError> {
    let n_lo = p.n_lo();
    if n_lo <= 0.0 {
        return Err(AnalyticError::UndefinedSnr(
            "n_lo = 0 makes the target-absent variance vanish".into(),
        ));
    }
    Ok(1.0 - p.r().sinh().powi(2) / n_lo)
}

/// The defining ratio `(mean₁ − mean₀)² / var₀`.
pub fn snr_definition(mean1: f64, mean0: f64, var0: f64) -> Result<f64, AnalyticError> {
    if var0 <= 0.0 || var0.is_nan() {
        return Err(AnalyticError::UndefinedSnr(format!(
            "target-absent variance {var0} is not positive"
        )));
    }
    Ok((mean1 - mean0).powi(2) / var0)
}

/// Zero-frequency-statistic variance `Var₀S′ = (g ω_LO)² · var n_LO`.
///
/// The LO number variance has no closed form in general; it is computed by
/// the truncated-basis sum on the constructed LO state.
pub fn number_variance_closed(p: &RadarParams) -> Result<f64, AnalyticError> {
    let spec = p.lo_spec();
    let state = spec.realize(spec.auto_cutoff())?;
    Ok((p.g() * p.omega_lo()).powi(2) * fock::number_variance(&state))
}

/// Analytic/numeric pairing for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrReport {
    pub mean_s0: f64,
    pub mean_s1: f64,
    pub var0: f64,
    pub mean_s0_num: Option<f64>,
    pub mean_s1_num: Option<f64>,
    pub var0_num: Option<f64>,
    pub snr_analytic: f64,
    pub snr_numeric: Option<f64>,
    pub snr_ratio_vs_coherent: f64,
}

impl SnrReport {
    /// Closed-form side of the report; the numeric mirrors start empty.
    pub fn analytic(p: &RadarParams, matching_freqs: &[f64]) -> Result<Self, AnalyticError> {
        Ok(Self {
            mean_s0: 0.0,
            mean_s1: mean_s_present(p),
            var0: var0_s_exact(p, matching_freqs),
            mean_s0_num: None,
            mean_s1_num: None,
            var0_num: None,
            snr_analytic: snr(p)?,
            snr_numeric: None,
            snr_ratio_vs_coherent: snr_ratio_vs_coherent(p)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params(alpha: C64, xi: C64, beta: C64, theta_h: f64, variant: DetectorVariant) -> RadarParams {
        RadarParams::new(alpha, xi, beta, theta_h, 101.0, 100.0, 1.0, variant).unwrap()
    }

    #[test]
    fn rejects_wrong_frequency_order() {
        assert!(RadarParams::new(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            0.0,
            100.0,
            101.0,
            1.0,
            DetectorVariant::Single
        )
        .is_err());
    }

    #[test]
    fn mean_without_lo_vanishes() {
        let p = params(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_eq!(mean_s_present(&p), 0.0);
    }

    #[test]
    fn mean_matches_direct_arithmetic() {
        // g√(ω_T ω_LO)|α||β| = 2√10100 = 200.9975...
        let p = params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_abs_diff_eq!(mean_s_present(&p), 200.9975124224178, epsilon = 1e-10);
    }

    #[test]
    fn balanced_variant_swaps_quadrature() {
        let single = params(
            c(2.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            PI / 2.0,
            DetectorVariant::Single,
        );
        let balanced = params(
            c(2.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            PI / 2.0,
            DetectorVariant::Balanced,
        );
        assert!(mean_s_present(&single).abs() < 1e-13 * 201.0);
        assert_abs_diff_eq!(mean_s_present(&balanced), 200.9975124224178, epsilon = 1e-9);
    }

    #[test]
    fn var0_zero_photons() {
        let p = params(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_eq!(var0_s_exact(&p, &[99.0, 101.0]), 0.0);
    }

    #[test]
    fn var0_coherent_lo() {
        let p = params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_abs_diff_eq!(var0_s_exact(&p, &[99.0, 101.0]), 20_000.0, epsilon = 1e-9);
        // exact and narrowband agree identically: ω₊ + ω₋ = 2ω_LO
        assert_abs_diff_eq!(
            var0_s_narrowband(&p),
            var0_s_exact(&p, &[99.0, 101.0]),
            epsilon = 1e-9
        );
    }

    #[test]
    fn var0_squeezed_lo() {
        // n̄_LO = 4 + sinh²(0.5) = 4.2715403..., Var₀S = 5000·n̄_LO
        let p = params(c(2.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        let expected = 5000.0 * (4.0 + 0.5f64.sinh().powi(2));
        assert_abs_diff_eq!(p.n_lo(), 4.2715403174, epsilon = 1e-9);
        assert_abs_diff_eq!(var0_s_exact(&p, &[99.0, 101.0]), expected, epsilon = 1e-8);
        assert_abs_diff_eq!(expected, 21_357.7015871, epsilon = 1e-4);
    }

    #[test]
    fn snr_at_reference_points() {
        // r = 0, phases 0, n̄_T = 1 → 2
        let p = params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_abs_diff_eq!(snr(&p).unwrap(), 2.0, epsilon = 1e-12);

        // r = 0.5 → 2(1 − sinh²r/(4 + sinh²r))
        let p = params(c(2.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        let s = 0.5f64.sinh().powi(2);
        let expected = 2.0 * (1.0 - s / (4.0 + s));
        assert_abs_diff_eq!(snr(&p).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 1.8728616, epsilon = 1e-6);

        // squeezed-vacuum LO: 1 − sinh²r/sinh²r = 0
        let p = params(c(0.0, 0.0), c(0.7, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert_eq!(snr(&p).unwrap(), 0.0);
    }

    #[test]
    fn snr_undefined_for_empty_lo() {
        let p = params(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        assert!(matches!(snr(&p), Err(AnalyticError::UndefinedSnr(_))));
    }

    #[test]
    fn snr_definition_arithmetic() {
        assert_abs_diff_eq!(snr_definition(2.0, 0.0, 4.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(snr_definition(0.0, 0.0, 5.0).unwrap(), 0.0);
        assert!(snr_definition(1.0, 0.0, 0.0).is_err());
        assert!(snr_definition(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn snr_definition_consistent_with_closed_form() {
        // (mean₁)²/Var₀ = snr · ω_T/ω_LO on the exact grid
        let p = params(c(2.0, 0.0), c(0.3, 0.0), c(1.3, 0.0), 0.2, DetectorVariant::Single);
        let mean1 = mean_s_present(&p);
        let var0 = var0_s_exact(&p, &[99.0, 101.0]);
        let from_definition = snr_definition(mean1, 0.0, var0).unwrap();
        let exact = snr_exact_grid(&p).unwrap();
        assert_abs_diff_eq!(from_definition, exact, epsilon = 1e-9 * exact.abs());
    }

    #[test]
    fn number_variance_closed_poissonian_at_r0() {
        let p = params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        let expected = (1.0f64 * 100.0).powi(2) * 4.0;
        let got = number_variance_closed(&p).unwrap();
        assert!((got - expected).abs() <= 1e-8 * expected);
    }

    #[test]
    fn number_variance_closed_sub_poissonian() {
        let p = params(c(2.0, 0.0), c(0.3, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        let got = number_variance_closed(&p).unwrap();
        let poisson_scale = (100.0f64).powi(2) * p.n_lo();
        assert!(got < poisson_scale, "expected sub-Poissonian: {got} vs {poisson_scale}");
        assert!(got > 0.0);
    }

    #[test]
    fn report_assembles_both_sides() {
        let p = params(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
        let rep = SnrReport::analytic(&p, &[99.0, 101.0]).unwrap();
        assert_eq!(rep.mean_s0, 0.0);
        assert!(rep.snr_numeric.is_none());
        assert_abs_diff_eq!(rep.snr_ratio_vs_coherent, 1.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn snr_monotonically_degrades_with_squeezing(
            n_lo in 0.5f64..9.0,
            r1 in 0.01f64..0.6,
            dr in 0.01f64..0.6,
        ) {
            // fixed n̄_LO: larger r strictly reduces the SNR
            let r2 = r1 + dr;
            prop_assume!(r2.sinh().powi(2) < n_lo);
            let make = |r: f64| {
                let mag = (n_lo - r.sinh().powi(2)).sqrt();
                params(c(mag, 0.0), c(r, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single)
            };
            let s1 = snr(&make(r1)).unwrap();
            let s2 = snr(&make(r2)).unwrap();
            prop_assert!(s2 < s1);
            prop_assert!(snr(&make(0.0)).unwrap() > s1);
        }

        #[test]
        fn snr_is_independent_of_scale_constant(
            alpha_mag in 0.2f64..2.5,
            r in 0.0f64..1.0,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let mut values = Vec::new();
            for &g in &[0.1, 1.0, 10.0] {
                let p = RadarParams::new(
                    C64::from_polar(alpha_mag, theta),
                    c(r, 0.0),
                    c(1.0, 0.0),
                    0.0,
                    101.0,
                    100.0,
                    g,
                    DetectorVariant::Single,
                ).unwrap();
                let mean1 = mean_s_present(&p);
                let var0 = var0_s_exact(&p, &[99.0, 101.0]);
                values.push(snr_definition(mean1, 0.0, var0).unwrap());
            }
            prop_assert!((values[0] - values[1]).abs() <= 1e-12 * values[1].abs().max(1e-300));
            prop_assert!((values[2] - values[1]).abs() <= 1e-12 * values[1].abs().max(1e-300));
        }

        #[test]
        fn variant_complementarity(
            phase in 0.0f64..std::f64::consts::TAU,
            r in 0.0f64..1.0,
            beta_mag in 0.1f64..2.0,
        ) {
            // cos² + sin² = 1: Single + Balanced = 2(1 − sinh²r/n̄_LO)n̄_T
            let alpha = c(2.0, 0.0);
            let beta = C64::from_polar(beta_mag, phase);
            let single = params(alpha, c(r, 0.0), beta, 0.3, DetectorVariant::Single);
            let balanced = params(alpha, c(r, 0.0), beta, 0.3, DetectorVariant::Balanced);
            let total = snr(&single).unwrap() + snr(&balanced).unwrap();
            let expected = 2.0
                * (1.0 - r.sinh().powi(2) / single.n_lo())
                * beta_mag.powi(2);
            prop_assert!((total - expected).abs() <= 1e-10 * expected.max(1.0));
        }

        #[test]
        fn ratio_bound(
            alpha_mag in 0.1f64..3.0,
            r in 0.0f64..1.2,
        ) {
            let p = params(c(alpha_mag, 0.0), c(r, 0.0), c(1.0, 0.0), 0.0, DetectorVariant::Single);
            let ratio = snr_ratio_vs_coherent(&p).unwrap();
            prop_assert!((0.0..=1.0).contains(&ratio));
            if r == 0.0 {
                prop_assert!(ratio == 1.0);
            } else {
                prop_assert!(ratio < 1.0);
            }
        }
    }
}
