//! Heterodyne signal operators over a multimode grid.
//!
//! The photocurrent statistic read out at the heterodyne frequency `ω_H` is,
//! in the long-integration limit, a restricted sum of `a†_l a_k` terms over
//! mode pairs whose frequencies differ by exactly `ω_H`; for finite
//! integration time `τ` every ordered pair contributes with a sinc-like
//! kernel weight. Operators are kept as explicit weighted ladder-monomial
//! sums and evaluated numerically with the operator ordering preserved: no
//! symbolic normal-ordering is performed, so the textbook commutator
//! manipulations become testable consequences instead of code paths.
//!
//! Expectation values in product states factorize over modes; a brute-force
//! tensor-product evaluator over occupation tuples provides an independent
//! oracle for that factorization on small grids.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{FockError, FockVector, Ladder, SingleModeSpec};

/// Coefficient-scale tolerance used by the Hermiticity checker.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Relative imaginary residue tolerated (then discarded) by [`variance`].
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;
/// Hard mode-count guard of the brute-force evaluator.
pub const BRUTE_FORCE_MAX_MODES: usize = 3;
/// Hard per-mode cutoff guard of the brute-force evaluator.
pub const BRUTE_FORCE_MAX_CUTOFF: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no mode pair matches the heterodyne frequency {omega_h}")]
    EmptyOperator { omega_h: f64 },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Ordered set of positive mode frequencies with designated LO and target
/// roles, plus the lumped field-scale constant `g = κħ/(2ε₀V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    freqs: Vec<f64>,
    lo_index: usize,
    target_index: usize,
    scale_g: f64,
}

impl ModeGrid {
    pub fn new(
        freqs: Vec<f64>,
        lo_index: usize,
        target_index: usize,
        scale_g: f64,
    ) -> Result<Self, EngineError> {
        if freqs.is_empty() {
            return Err(EngineError::InvalidArgument("empty frequency list".into()));
        }
        if freqs.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(EngineError::InvalidArgument(
                "mode frequencies must be positive and finite".into(),
            ));
        }
        for i in 0..freqs.len() {
            for j in i + 1..freqs.len() {
                if freqs[i] == freqs[j] {
                    return Err(EngineError::InvalidArgument(format!(
                        "mode frequencies must be pairwise distinct (index {i} and {j})"
                    )));
                }
            }
        }
        if lo_index >= freqs.len() || target_index >= freqs.len() {
            return Err(EngineError::InvalidArgument(
                "LO/target index out of range".into(),
            ));
        }
        if lo_index == target_index {
            return Err(EngineError::InvalidArgument(
                "LO and target must be distinct modes".into(),
            ));
        }
        if !scale_g.is_finite() || scale_g <= 0.0 {
            return Err(EngineError::InvalidArgument(
                "scale constant g must be positive".into(),
            ));
        }
        Ok(Self {
            freqs,
            lo_index,
            target_index,
            scale_g,
        })
    }

    /// Standard three-mode radar grid `{ω_LO − ω_H, ω_LO, ω_LO + ω_H}`
    /// (image, LO, target).
    pub fn heterodyne_default(omega_lo: f64, omega_h: f64, scale_g: f64) -> Result<Self, EngineError> {
        if omega_h <= 0.0 || omega_h.is_nan() || omega_h >= omega_lo {
            return Err(EngineError::InvalidArgument(
                "need 0 < omega_h < omega_lo".into(),
            ));
        }
        Self::new(
            vec![omega_lo - omega_h, omega_lo, omega_lo + omega_h],
            1,
            2,
            scale_g,
        )
    }

    /// Two-mode grid `{ω_LO, ω_LO + ω_H}` with the image band removed.
    pub fn heterodyne_without_image(
        omega_lo: f64,
        omega_h: f64,
        scale_g: f64,
    ) -> Result<Self, EngineError> {
        if omega_h <= 0.0 || omega_h.is_nan() {
            return Err(EngineError::InvalidArgument("need omega_h > 0".into()));
        }
        Self::new(vec![omega_lo, omega_lo + omega_h], 0, 1, scale_g)
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn lo_index(&self) -> usize {
        self.lo_index
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn scale_g(&self) -> f64 {
        self.scale_g
    }

    pub fn omega_lo(&self) -> f64 {
        self.freqs[self.lo_index]
    }

    pub fn omega_target(&self) -> f64 {
        self.freqs[self.target_index]
    }
}

/// Integration time of the signal statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationTime {
    Infinite,
    Finite(f64),
}

/// Heterodyne readout parameters: frequency, phase, integration time, and the
/// tolerance for matching `|ω_l − ω_k| = ω_H` on float grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalOperatorSpec {
    omega_h: f64,
    theta_h: f64,
    tau: IntegrationTime,
    pair_tolerance: f64,
}

impl SignalOperatorSpec {
    pub fn infinite(omega_h: f64, theta_h: f64) -> Result<Self, EngineError> {
        Self::with_tau(omega_h, theta_h, IntegrationTime::Infinite)
    }

    pub fn finite(omega_h: f64, theta_h: f64, tau: f64) -> Result<Self, EngineError> {
        Self::with_tau(omega_h, theta_h, IntegrationTime::Finite(tau))
    }

    fn with_tau(omega_h: f64, theta_h: f64, tau: IntegrationTime) -> Result<Self, EngineError> {
        if !omega_h.is_finite() || omega_h <= 0.0 {
            return Err(EngineError::InvalidArgument(
                "heterodyne frequency must be positive".into(),
            ));
        }
        if !theta_h.is_finite() {
            return Err(EngineError::InvalidArgument(
                "heterodyne phase must be finite".into(),
            ));
        }
        if let IntegrationTime::Finite(t) = tau {
            if !t.is_finite() || t <= 0.0 {
                return Err(EngineError::InvalidArgument(
                    "integration time must be positive".into(),
                ));
            }
        }
        Ok(Self {
            omega_h,
            theta_h,
            tau,
            pair_tolerance: 1e-9 * omega_h,
        })
    }

    pub fn with_pair_tolerance(mut self, tol: f64) -> Result<Self, EngineError> {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(EngineError::InvalidArgument(
                "pair tolerance must be positive".into(),
            ));
        }
        self.pair_tolerance = tol;
        Ok(self)
    }

    pub fn omega_h(&self) -> f64 {
        self.omega_h
    }

    pub fn theta_h(&self) -> f64 {
        self.theta_h
    }

    pub fn tau(&self) -> IntegrationTime {
        self.tau
    }

    pub fn pair_tolerance(&self) -> f64 {
        self.pair_tolerance
    }
}

/// One ladder factor attached to a grid mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LadderFactor {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderFactor {
    pub fn raise(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn lower(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }

    fn ladder(&self) -> Ladder {
        if self.dagger {
            Ladder::Raise
        } else {
            Ladder::Lower
        }
    }
}

/// One weighted ladder monomial; the factor list is an operator product read
/// left to right (the rightmost factor acts on the ket first).
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub monomial: Vec<LadderFactor>,
}

/// Finite weighted sum of ordered ladder monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorSum {
    terms: Vec<Term>,
}

impl OperatorSum {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial length in the sum.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.monomial.len()).max().unwrap_or(0)
    }

    /// Merges duplicate monomials, keyed canonically.
    pub fn canonical_terms(&self) -> BTreeMap<Vec<LadderFactor>, C64> {
        let mut map: BTreeMap<Vec<LadderFactor>, C64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.monomial.clone()).or_insert(C64::new(0.0, 0.0)) += t.coeff;
        }
        map
    }

    /// Hermitian conjugate: per term, reverse the factor order, flip daggers,
    /// conjugate the coefficient.
    pub fn hermitian_conjugate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.conj(),
                monomial: t
                    .monomial
                    .iter()
                    .rev()
                    .map(|f| LadderFactor {
                        mode: f.mode,
                        dagger: !f.dagger,
                    })
                    .collect(),
            })
            .collect();
        Self { terms }
    }

    /// Checks that every monomial's Hermitian-conjugate partner is present
    /// with the conjugated coefficient, to `tol` relative to the largest
    /// coefficient in the sum.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let map = self.canonical_terms();
        let conj_map = self.hermitian_conjugate().canonical_terms();
        let scale = map
            .values()
            .map(|c| c.norm())
            .fold(1.0f64, f64::max);
        let zero = C64::new(0.0, 0.0);
        map.keys().chain(conj_map.keys()).all(|monomial| {
            let a = map.get(monomial).unwrap_or(&zero);
            let b = conj_map.get(monomial).unwrap_or(&zero);
            (a - b).norm() <= tol * scale
        })
    }
}

/// Which phase bookkeeping the finite-`τ` builder uses for `θ_H ≠ 0`.
///
/// The finite-time kernel already carries `e^{±iθ_H}` factors inside; the
/// printed general form carries an additional outer `exp(−i ε(Δ) θ_H)` on
/// top of those. Both are implemented so the long-time reduction test can
/// report which one actually converges to the restricted-sum operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    /// Phase carried only by the kernel.
    KernelOnly,
    /// Kernel phase times the outer sign-dependent prefactor.
    SignPrefactor,
}

/// Restricted-sum signal operator in the `τ → ∞` limit: one term per ordered
/// mode pair `(l, k)` with `|ω_l − ω_k| = ω_H`, coefficient
/// `(g/2)√(ω_l ω_k) exp(−i sign(ω_l−ω_k) θ_H)`.
pub fn build_signal_operator_infinite(
    grid: &ModeGrid,
    spec: &SignalOperatorSpec,
) -> Result<OperatorSum, EngineError> {
    let g = grid.scale_g();
    let mut terms = Vec::new();
    for (l, &wl) in grid.freqs().iter().enumerate() {
        for (k, &wk) in grid.freqs().iter().enumerate() {
            if l == k {
                continue;
            }
            let delta = wl - wk;
            if (delta.abs() - spec.omega_h()).abs() > spec.pair_tolerance() {
                continue;
            }
            let coeff = C64::from_polar(
                0.5 * g * (wl * wk).sqrt(),
                -delta.signum() * spec.theta_h(),
            );
            terms.push(Term {
                coeff,
                monomial: vec![LadderFactor::raise(l), LadderFactor::lower(k)],
            });
        }
    }
    if terms.is_empty() {
        return Err(EngineError::EmptyOperator {
            omega_h: spec.omega_h(),
        });
    }
    Ok(OperatorSum::new(terms))
}

/// Zero-frequency statistic: the diagonal sum `Σ_k g ω_k a†_k a_k`.
pub fn build_sprime(grid: &ModeGrid) -> OperatorSum {
    let g = grid.scale_g();
    let terms = grid
        .freqs()
        .iter()
        .enumerate()
        .map(|(k, &wk)| Term {
            coeff: C64::new(g * wk, 0.0),
            monomial: vec![LadderFactor::raise(k), LadderFactor::lower(k)],
        })
        .collect();
    OperatorSum::new(terms)
}

/// `e^{ixτ/2}·sinc(xτ/2)·iτ = (e^{ixτ} − 1)/x`, continued through `x = 0`.
fn phase_sinc(x: f64, tau: f64) -> C64 {
    let half = 0.5 * x * tau;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    C64::from_polar(1.0, half) * sinc
}

/// Finite-`τ` weight of the ordered pair `(ω_l, ω_k)`:
///
/// ```text
/// (1/2iτ) { e^{iθ_H} [e^{i(Δ+ω_H)τ}−1]/(Δ+ω_H)
///         + e^{−iθ_H} [e^{i(Δ−ω_H)τ}−1]/(Δ−ω_H) },   Δ = ω_l − ω_k,
/// ```
///
/// the removable singularities at `Δ = ∓ω_H` evaluated by their limits
/// (the singular term tends to `e^{±iθ_H}/2`). Numerically each bracket is
/// computed as `e^{ixτ/2} sinc(xτ/2)/2`, which is uniformly accurate.
pub fn finite_tau_kernel(
    omega_l: f64,
    omega_k: f64,
    spec: &SignalOperatorSpec,
) -> Result<C64, EngineError> {
    let tau = match spec.tau() {
        IntegrationTime::Finite(t) => t,
        IntegrationTime::Infinite => {
            return Err(EngineError::InvalidArgument(
                "finite_tau_kernel requires a finite integration time".into(),
            ));
        }
    };
    let delta = omega_l - omega_k;
    let plus = phase_sinc(delta + spec.omega_h(), tau);
    let minus = phase_sinc(delta - spec.omega_h(), tau);
    let e_plus = C64::from_polar(1.0, spec.theta_h());
    let e_minus = C64::from_polar(1.0, -spec.theta_h());
    Ok(0.5 * (e_plus * plus + e_minus * minus))
}

/// General finite-`τ` signal operator: one term per ordered pair `(l, k)`
/// (no frequency restriction), coefficient `g √(ω_l ω_k) · phase · kernel`.
pub fn build_signal_operator_finite(
    grid: &ModeGrid,
    spec: &SignalOperatorSpec,
    convention: PhaseConvention,
) -> Result<OperatorSum, EngineError> {
    if !matches!(spec.tau(), IntegrationTime::Finite(_)) {
        return Err(EngineError::InvalidArgument(
            "build_signal_operator_finite requires a finite integration time".into(),
        ));
    }
    let g = grid.scale_g();
    let mut terms = Vec::new();
    for (l, &wl) in grid.freqs().iter().enumerate() {
        for (k, &wk) in grid.freqs().iter().enumerate() {
            let kernel = finite_tau_kernel(wl, wk, spec)?;
            let outer = match convention {
                PhaseConvention::KernelOnly => C64::new(1.0, 0.0),
                PhaseConvention::SignPrefactor => {
                    let delta = wl - wk;
                    let sign = if delta == 0.0 { 0.0 } else { delta.signum() };
                    C64::from_polar(1.0, -sign * spec.theta_h())
                }
            };
            terms.push(Term {
                coeff: g * (wl * wk).sqrt() * outer * kernel,
                monomial: vec![LadderFactor::raise(l), LadderFactor::lower(k)],
            });
        }
    }
    Ok(OperatorSum::new(terms))
}

/// Formal square: concatenated monomials with multiplied coefficients. No
/// commutator simplification is performed; numeric evaluation handles the
/// operator ordering exactly.
pub fn square(op: &OperatorSum) -> OperatorSum {
    let mut terms = Vec::with_capacity(op.terms().len() * op.terms().len());
    for left in op.terms() {
        for right in op.terms() {
            let mut monomial = Vec::with_capacity(left.monomial.len() + right.monomial.len());
            monomial.extend_from_slice(&left.monomial);
            monomial.extend_from_slice(&right.monomial);
            terms.push(Term {
                coeff: left.coeff * right.coeff,
                monomial,
            });
        }
    }
    OperatorSum::new(terms)
}

/// Per-mode prepared product state aligned with a mode grid.
#[derive(Debug, Clone)]
pub struct ProductState {
    specs: Vec<SingleModeSpec>,
    modes: Vec<FockVector>,
}

/// Cutoff policy for realizing product states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffChoice {
    /// Largest per-mode adequacy-rule cutoff, applied uniformly.
    Auto,
    /// Fixed uniform cutoff.
    Explicit(usize),
}

impl ProductState {
    /// Realizes one Fock vector per spec at a uniform cutoff, with the
    /// constructor adequacy checks.
    pub fn realize(
        grid: &ModeGrid,
        specs: Vec<SingleModeSpec>,
        cutoff: CutoffChoice,
    ) -> Result<Self, EngineError> {
        Self::build(grid, specs, cutoff, false)
    }

    /// As [`ProductState::realize`] but skipping the adequacy checks; see
    /// [`SingleModeSpec::realize_unchecked`].
    pub fn realize_unchecked(
        grid: &ModeGrid,
        specs: Vec<SingleModeSpec>,
        cutoff: CutoffChoice,
    ) -> Result<Self, EngineError> {
        Self::build(grid, specs, cutoff, true)
    }

    fn build(
        grid: &ModeGrid,
        specs: Vec<SingleModeSpec>,
        cutoff: CutoffChoice,
        unchecked: bool,
    ) -> Result<Self, EngineError> {
        if specs.len() != grid.len() {
            return Err(EngineError::InvalidArgument(format!(
                "{} mode specs for a grid of {} modes",
                specs.len(),
                grid.len()
            )));
        }
        let n = match cutoff {
            CutoffChoice::Auto => specs.iter().map(|s| s.auto_cutoff()).max().unwrap_or(2),
            CutoffChoice::Explicit(n) => n,
        };
        let modes = specs
            .iter()
            .map(|s| {
                if unchecked {
                    s.realize_unchecked(n)
                } else {
                    s.realize(n)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { specs, modes })
    }

    /// Target-absent configuration: every mode in vacuum except the LO.
    pub fn target_absent(
        grid: &ModeGrid,
        lo: SingleModeSpec,
        cutoff: CutoffChoice,
    ) -> Result<Self, EngineError> {
        let mut specs = vec![SingleModeSpec::Vacuum; grid.len()];
        specs[grid.lo_index()] = lo;
        Self::realize(grid, specs, cutoff)
    }

    /// Target-present configuration: coherent `|β⟩` in the target mode on
    /// top of the target-absent preparation.
    pub fn target_present(
        grid: &ModeGrid,
        lo: SingleModeSpec,
        beta: C64,
        cutoff: CutoffChoice,
    ) -> Result<Self, EngineError> {
        let mut specs = vec![SingleModeSpec::Vacuum; grid.len()];
        specs[grid.lo_index()] = lo;
        specs[grid.target_index()] = SingleModeSpec::Coherent { beta };
        Self::realize(grid, specs, cutoff)
    }

    pub fn specs(&self) -> &[SingleModeSpec] {
        &self.specs
    }

    pub fn modes(&self) -> &[FockVector] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Uniform per-mode cutoff.
    pub fn cutoff(&self) -> usize {
        self.modes[0].cutoff()
    }
}

/// `⟨ψ|O|ψ⟩` by per-mode factorization: every monomial's factors are grouped
/// by mode (order preserved within each mode — operators on different tensor
/// factors commute exactly), each group is evaluated on its single-mode
/// state, and the per-mode values multiply.
pub fn expectation(state: &ProductState, op: &OperatorSum) -> Result<C64, EngineError> {
    let mut total = C64::new(0.0, 0.0);
    for term in op.terms() {
        if term.monomial.len() > 4 {
            return Err(EngineError::InvalidArgument(format!(
                "monomial degree {} exceeds 4",
                term.monomial.len()
            )));
        }
        let mut grouped: BTreeMap<usize, Vec<Ladder>> = BTreeMap::new();
        for factor in &term.monomial {
            if factor.mode >= state.len() {
                return Err(EngineError::InvalidArgument(format!(
                    "monomial references mode {} on a {}-mode state",
                    factor.mode,
                    state.len()
                )));
            }
            grouped.entry(factor.mode).or_default().push(factor.ladder());
        }
        let mut value = term.coeff;
        for (mode, factors) in grouped {
            if value == C64::new(0.0, 0.0) {
                break;
            }
            value *= crate::fock::ladder_string_expectation(&state.modes[mode], &factors)?;
        }
        total += value;
    }
    Ok(total)
}

/// Real expectation value of a Hermitian operator; the imaginary residue is
/// checked against [`IMAG_RESIDUE_TOL`] and discarded.
pub fn expectation_real(state: &ProductState, op: &OperatorSum) -> Result<f64, EngineError> {
    let value = expectation(state, op)?;
    let scale = value.norm().max(1.0);
    if value.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(EngineError::InvalidArgument(format!(
            "imaginary residue {} on a supposedly Hermitian expectation",
            value.im
        )));
    }
    Ok(value.re)
}

/// `⟨ψ|O²|ψ⟩ − ⟨ψ|O|ψ⟩²` for Hermitian `O`.
///
/// Rejects operators that fail the Hermiticity checker, and rejects results
/// whose imaginary residue exceeds [`IMAG_RESIDUE_TOL`] relative to the
/// second moment (a Hermiticity bug, not float noise). Small negative
/// residues are clamped to zero.
pub fn variance(state: &ProductState, op: &OperatorSum) -> Result<f64, EngineError> {
    if !op.is_hermitian(HERMITICITY_TOL) {
        return Err(EngineError::InvalidArgument(
            "variance requires a Hermitian operator".into(),
        ));
    }
    let second = expectation(state, &square(op))?;
    let first = expectation(state, op)?;
    let value = second - first * first;
    let scale = second.norm().max(1.0);
    if value.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(EngineError::InvalidArgument(format!(
            "imaginary residue {} in variance exceeds tolerance",
            value.im
        )));
    }
    if value.re < -IMAG_RESIDUE_TOL * scale {
        return Err(EngineError::InvalidArgument(format!(
            "variance {} is negative beyond tolerance",
            value.re
        )));
    }
    Ok(value.re.max(0.0))
}

/// Independent oracle: expectation by explicit tensor-product evaluation.
///
/// The full product state is expanded into a sparse occupation-tuple map and
/// each monomial factor is applied by its explicit ladder action (same
/// projective-truncation boundary as the per-mode path). Guarded by
/// `max_modes`/`max_cutoff`, themselves capped at
/// [`BRUTE_FORCE_MAX_MODES`]/[`BRUTE_FORCE_MAX_CUTOFF`].
pub fn brute_force_expectation(
    state: &ProductState,
    op: &OperatorSum,
    max_modes: usize,
    max_cutoff: usize,
) -> Result<C64, EngineError> {
    let max_modes = max_modes.min(BRUTE_FORCE_MAX_MODES);
    let max_cutoff = max_cutoff.min(BRUTE_FORCE_MAX_CUTOFF);
    if state.len() > max_modes {
        return Err(EngineError::ResourceBound(format!(
            "{} modes exceeds the brute-force bound {max_modes}",
            state.len()
        )));
    }
    if state.cutoff() > max_cutoff {
        return Err(EngineError::ResourceBound(format!(
            "cutoff {} exceeds the brute-force bound {max_cutoff}",
            state.cutoff()
        )));
    }

    // dense-per-occupied-mode expansion; vacuum modes contribute one index
    let mut base: BTreeMap<Vec<u16>, C64> = BTreeMap::new();
    base.insert(Vec::new(), C64::new(1.0, 0.0));
    for mode in state.modes() {
        let mut next = BTreeMap::new();
        for (occ, amp) in &base {
            for (n, a) in mode.amps().iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let mut key = occ.clone();
                key.push(n as u16);
                next.insert(key, amp * a);
            }
        }
        base = next;
    }

    let cutoff = state.cutoff() as u16;
    let mut total = C64::new(0.0, 0.0);
    for term in op.terms() {
        for factor in &term.monomial {
            if factor.mode >= state.len() {
                return Err(EngineError::InvalidArgument(format!(
                    "monomial references mode {} on a {}-mode state",
                    factor.mode,
                    state.len()
                )));
            }
        }
        let mut ket = base.clone();
        for factor in term.monomial.iter().rev() {
            let mut next: BTreeMap<Vec<u16>, C64> = BTreeMap::new();
            for (occ, amp) in &ket {
                let n = occ[factor.mode];
                if factor.dagger {
                    if n < cutoff {
                        let mut key = occ.clone();
                        key[factor.mode] = n + 1;
                        *next.entry(key).or_insert(C64::new(0.0, 0.0)) +=
                            amp * ((n + 1) as f64).sqrt();
                    }
                    // raising the top level leaks out of the truncated space
                } else if n > 0 {
                    let mut key = occ.clone();
                    key[factor.mode] = n - 1;
                    *next.entry(key).or_insert(C64::new(0.0, 0.0)) += amp * (n as f64).sqrt();
                }
            }
            ket = next;
        }
        let mut inner = C64::new(0.0, 0.0);
        for (occ, amp) in &ket {
            if let Some(bra) = base.get(occ) {
                inner += bra.conj() * amp;
            }
        }
        total += term.coeff * inner;
    }
    Ok(total)
}
