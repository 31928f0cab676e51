//! Single bosonic modes in a truncated number basis.
//!
//! A mode is a normalized amplitude vector over the occupation states
//! `|0⟩ .. |N⟩`. Ladder operators act with the standard matrix elements,
//! with one deliberate boundary rule: raising the top retained level drops
//! the amplitude (projective truncation) instead of erroring. Constructors
//! guard against meaningful leakage through that boundary with tail and
//! photon-number adequacy checks.
//!
//! Squeezed-coherent states follow the convention `|α,ξ⟩ = D(α) S(ξ) |0⟩`
//! with `D(α) = exp(α a† − α* a)` and `S(ξ) = exp((ξ* a² − ξ a†²)/2)`,
//! the unique common choice for which `⟨a⟩ = α` and
//! `⟨a†a⟩ = |α|² + sinh²|ξ|` hold simultaneously. Both generators stay
//! anti-Hermitian after truncation, so the states are built by applying
//! exactly unitary (up to roundoff) truncated exponentials to the vacuum.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Unit-norm tolerance for constructed states.
pub const NORM_TOL: f64 = 1e-12;
/// Longest ladder string accepted by [`ladder_string_expectation`].
pub const MAX_LADDER_STRING: usize = 8;
/// Largest supported squeeze magnitude `r = |ξ|`.
pub const MAX_SQUEEZE: f64 = 3.0;
/// Number-distribution tail targeted by the automatic cutoff rule.
pub const TAIL_TARGET: f64 = 1e-10;
/// Tolerance of the post-construction mean-photon-number check.
pub const PHOTON_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cutoff {given} too small; minimal adequate cutoff is {required}")]
    CutoffTooSmall { given: usize, required: usize },
}

/// A single ladder-operator factor: `a` (Lower) or `a†` (Raise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Normalized single-mode state over occupations `0..=cutoff`.
#[derive(Debug, Clone)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    /// Wraps raw amplitudes, checking the cutoff bound and unit norm.
    pub fn from_amps(amps: Vec<C64>) -> Result<Self, FockError> {
        if amps.len() < 2 {
            return Err(FockError::InvalidArgument(
                "cutoff must be at least 1".into(),
            ));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(FockError::InvalidArgument(format!(
                "amplitudes have squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Highest retained occupation number `N`.
    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    /// Amplitudes indexed by occupation, `0..=cutoff`.
    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `Σ_n n |amps[n]|²`.
    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

/// Cached `⟨a†ᵖ aᑫ⟩` for `p, q ∈ {0, 1, 2}`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    entries: [[C64; 3]; 3],
}

impl MomentTable {
    /// `⟨a†ᵖ aᑫ⟩`; panics if `p` or `q` exceeds 2.
    pub fn entry(&self, p: usize, q: usize) -> C64 {
        assert!(p <= 2 && q <= 2, "moment order out of range");
        self.entries[p][q]
    }
}

/// Declarative preparation of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleModeSpec {
    Vacuum,
    Coherent { beta: C64 },
    SqueezedCoherent { alpha: C64, xi: C64 },
}

impl SingleModeSpec {
    /// Squeezing parameter `r = |ξ|` (zero for vacuum and coherent modes).
    pub fn squeeze_magnitude(&self) -> f64 {
        match self {
            SingleModeSpec::SqueezedCoherent { xi, .. } => xi.norm(),
            _ => 0.0,
        }
    }

    /// Exact `⟨a⟩` of the untruncated state.
    pub fn mean_field(&self) -> C64 {
        match self {
            SingleModeSpec::Vacuum => C64::new(0.0, 0.0),
            SingleModeSpec::Coherent { beta } => *beta,
            SingleModeSpec::SqueezedCoherent { alpha, .. } => *alpha,
        }
    }

    /// Exact `⟨a†a⟩` of the untruncated state: `|α|² + sinh²r`.
    pub fn exact_mean_photon(&self) -> f64 {
        match self {
            SingleModeSpec::Vacuum => 0.0,
            SingleModeSpec::Coherent { beta } => beta.norm_sqr(),
            SingleModeSpec::SqueezedCoherent { alpha, xi } => {
                alpha.norm_sqr() + xi.norm().sinh().powi(2)
            }
        }
    }

    /// Default cutoff for this mode per the adequacy rule (see [`auto_cutoff`]).
    pub fn auto_cutoff(&self) -> usize {
        match self {
            SingleModeSpec::Vacuum => 2,
            SingleModeSpec::Coherent { beta } => auto_cutoff(*beta, C64::new(0.0, 0.0)),
            SingleModeSpec::SqueezedCoherent { alpha, xi } => auto_cutoff(*alpha, *xi),
        }
    }

    /// Builds the state at `cutoff` with the constructor adequacy checks.
    pub fn realize(&self, cutoff: usize) -> Result<FockVector, FockError> {
        match self {
            SingleModeSpec::Vacuum => build_vacuum(cutoff),
            SingleModeSpec::Coherent { beta } => build_coherent(*beta, cutoff),
            SingleModeSpec::SqueezedCoherent { alpha, xi } => {
                build_squeezed_coherent(*alpha, *xi, cutoff)
            }
        }
    }

    /// Builds the state at `cutoff` without the adequacy checks.
    ///
    /// The result is the exact truncated-space state either way; only the
    /// guarantee that it approximates the infinite-dimensional state is
    /// waived. Evaluation cross-checks that compare two routes through the
    /// same truncated space use this.
    pub fn realize_unchecked(&self, cutoff: usize) -> Result<FockVector, FockError> {
        match self {
            SingleModeSpec::Vacuum => build_vacuum(cutoff),
            SingleModeSpec::Coherent { beta } => coherent_unchecked(*beta, cutoff),
            SingleModeSpec::SqueezedCoherent { alpha, xi } => {
                squeezed_coherent_unchecked(*alpha, *xi, cutoff)
            }
        }
    }
}

/// Default cutoff rule for a squeezed-coherent (or coherent, `ξ = 0`) mode.
///
/// The displacement part is covered by `4(|α| + sinh r + 1)²`. The squeeze
/// part of the number distribution decays only geometrically, one factor of
/// `tanh²r` per photon pair, so for `r > 0` enough extra levels are added to
/// push that tail below [`TAIL_TARGET`] with margin.
pub fn auto_cutoff(alpha: C64, xi: C64) -> usize {
    let r = xi.norm();
    let base = 4.0 * (alpha.norm() + r.sinh() + 1.0).powi(2);
    let squeeze_extra = if r > 0.0 {
        let decay_per_pair = -2.0 * r.tanh().ln(); // -ln(tanh²r)
        2.0 * (27.631 / decay_per_pair).ceil() // ln(1e12) per-pair budget
    } else {
        0.0
    };
    (base + squeeze_extra).ceil() as usize
}

/// Smallest cutoff for which the Poisson tail of `|β⟩` is below [`TAIL_TARGET`].
pub fn coherent_min_cutoff(beta: C64) -> usize {
    let lambda = beta.norm_sqr();
    let mut p = (-lambda).exp();
    let mut cumulative = p;
    let mut n = 0usize;
    while 1.0 - cumulative >= TAIL_TARGET && n < 100_000 {
        n += 1;
        p *= lambda / n as f64;
        cumulative += p;
    }
    n.max(1)
}

/// `|0⟩` at the given cutoff.
pub fn build_vacuum(cutoff: usize) -> Result<FockVector, FockError> {
    if cutoff < 1 {
        return Err(FockError::InvalidArgument(
            "cutoff must be at least 1".into(),
        ));
    }
    let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
    amps[0] = C64::new(1.0, 0.0);
    Ok(FockVector { amps })
}

/// Coherent state `|β⟩`, amplitudes `βⁿ/√(n!)`, renormalized after truncation.
///
/// Errors with the minimal adequate cutoff if the Poisson tail beyond
/// `cutoff` is not below [`TAIL_TARGET`].
pub fn build_coherent(beta: C64, cutoff: usize) -> Result<FockVector, FockError> {
    let required = coherent_min_cutoff(beta);
    if cutoff < required {
        return Err(FockError::CutoffTooSmall {
            given: cutoff,
            required,
        });
    }
    coherent_unchecked(beta, cutoff)
}

fn coherent_unchecked(beta: C64, cutoff: usize) -> Result<FockVector, FockError> {
    if cutoff < 1 {
        return Err(FockError::InvalidArgument(
            "cutoff must be at least 1".into(),
        ));
    }
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(a);
    for n in 1..=cutoff {
        a *= beta / (n as f64).sqrt();
        amps.push(a);
    }
    renormalize(&mut amps);
    Ok(FockVector { amps })
}

/// Squeezed-coherent state `D(α) S(ξ) |0⟩` built from truncated-generator
/// exponentials.
///
/// After construction the mean photon number is checked against
/// `|α|² + sinh²r`; failure reports the adequacy-rule cutoff as the minimal
/// adequate one.
pub fn build_squeezed_coherent(alpha: C64, xi: C64, cutoff: usize) -> Result<FockVector, FockError> {
    let state = squeezed_coherent_unchecked(alpha, xi, cutoff)?;
    let exact = alpha.norm_sqr() + xi.norm().sinh().powi(2);
    let got = state.mean_photon_number();
    if (got - exact).abs() > PHOTON_CHECK_TOL * exact.max(1.0) {
        return Err(FockError::CutoffTooSmall {
            given: cutoff,
            required: auto_cutoff(alpha, xi).max(cutoff + 1),
        });
    }
    Ok(state)
}

/// Same construction as [`build_squeezed_coherent`] without the photon-number
/// adequacy check.
pub fn squeezed_coherent_unchecked(
    alpha: C64,
    xi: C64,
    cutoff: usize,
) -> Result<FockVector, FockError> {
    if cutoff < 1 {
        return Err(FockError::InvalidArgument(
            "cutoff must be at least 1".into(),
        ));
    }
    let r = xi.norm();
    if !r.is_finite() || !alpha.norm().is_finite() {
        return Err(FockError::InvalidArgument(
            "state parameters must be finite".into(),
        ));
    }
    if r > MAX_SQUEEZE {
        return Err(FockError::InvalidArgument(format!(
            "squeeze magnitude {r} exceeds the supported envelope {MAX_SQUEEZE}"
        )));
    }
    let dim = cutoff + 1;
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[0] = C64::new(1.0, 0.0);

    if r > 0.0 {
        // S(ξ): generator (ξ* a² − ξ a†²)/2
        let half_conj = xi.conj() * 0.5;
        let half = xi * 0.5;
        let bound = r * dim as f64;
        v = exp_apply(v, bound, |src, dst| {
            for (n, slot) in dst.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                if n + 2 < src.len() {
                    let w = (((n + 1) * (n + 2)) as f64).sqrt();
                    acc += half_conj * w * src[n + 2];
                }
                if n >= 2 {
                    let w = ((n * (n - 1)) as f64).sqrt();
                    acc -= half * w * src[n - 2];
                }
                *slot = acc;
            }
        });
    }
    if alpha.norm_sqr() > 0.0 {
        // D(α): generator α a† − α* a
        let conj = alpha.conj();
        let bound = 2.0 * alpha.norm() * (dim as f64).sqrt();
        v = exp_apply(v, bound, |src, dst| {
            for (n, slot) in dst.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                if n >= 1 {
                    acc += alpha * (n as f64).sqrt() * src[n - 1];
                }
                if n + 1 < src.len() {
                    acc -= conj * ((n + 1) as f64).sqrt() * src[n + 1];
                }
                *slot = acc;
            }
        });
    }
    renormalize(&mut v);
    Ok(FockVector { amps: v })
}

/// Applies `exp(G)` to `v` by substepped Taylor series. `norm_bound` must
/// dominate the operator norm of `G`; each substep then has norm ≤ 2 and the
/// series converges without cancellation blowup.
fn exp_apply<F>(v: Vec<C64>, norm_bound: f64, apply_gen: F) -> Vec<C64>
where
    F: Fn(&[C64], &mut [C64]),
{
    let substeps = ((norm_bound / 2.0).ceil() as usize).max(1);
    let scale = 1.0 / substeps as f64;
    let dim = v.len();
    let mut state = v;
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..substeps {
        term.copy_from_slice(&state);
        let mut acc = state.clone();
        for k in 1..=60 {
            apply_gen(&term, &mut next);
            let factor = scale / k as f64;
            for (t, n) in term.iter_mut().zip(next.iter()) {
                *t = *n * factor;
            }
            let mut term_sq = 0.0;
            for (a, t) in acc.iter_mut().zip(term.iter()) {
                *a += *t;
                term_sq += t.norm_sqr();
            }
            if term_sq < 1e-36 {
                break;
            }
        }
        state = acc;
    }
    state
}

fn renormalize(amps: &mut [C64]) {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in amps.iter_mut() {
            *a /= norm;
        }
    }
}

pub(crate) fn apply_ladder(amps: &[C64], op: Ladder) -> Vec<C64> {
    let n_levels = amps.len();
    let mut out = vec![C64::new(0.0, 0.0); n_levels];
    match op {
        // a† |n⟩ = √(n+1) |n+1⟩; the top level leaks out and is dropped
        Ladder::Raise => {
            for n in 1..n_levels {
                out[n] = (n as f64).sqrt() * amps[n - 1];
            }
        }
        // a |n⟩ = √n |n−1⟩
        Ladder::Lower => {
            for n in 0..n_levels - 1 {
                out[n] = ((n + 1) as f64).sqrt() * amps[n + 1];
            }
        }
    }
    out
}

/// `⟨ψ| O |ψ⟩` for the ordered product `O` of ladder factors, applied
/// right-to-left to the ket.
pub fn ladder_string_expectation(state: &FockVector, factors: &[Ladder]) -> Result<C64, FockError> {
    if factors.len() > MAX_LADDER_STRING {
        return Err(FockError::InvalidArgument(format!(
            "ladder string length {} exceeds {MAX_LADDER_STRING}",
            factors.len()
        )));
    }
    let mut ket = state.amps.clone();
    for op in factors.iter().rev() {
        ket = apply_ladder(&ket, *op);
    }
    Ok(state
        .amps
        .iter()
        .zip(ket.iter())
        .map(|(bra, k)| bra.conj() * k)
        .sum())
}

/// All `⟨a†ᵖ aᑫ⟩` with `p, q ≤ 2`, computed independently per entry.
pub fn moments(state: &FockVector) -> MomentTable {
    let mut entries = [[C64::new(0.0, 0.0); 3]; 3];
    for (p, row) in entries.iter_mut().enumerate() {
        for (q, entry) in row.iter_mut().enumerate() {
            if p == 0 && q == 0 {
                *entry = C64::new(1.0, 0.0);
                continue;
            }
            let mut factors = vec![Ladder::Raise; p];
            factors.extend(std::iter::repeat_n(Ladder::Lower, q));
            *entry = ladder_string_expectation(state, &factors)
                .expect("moment strings are within the length bound");
        }
    }
    MomentTable { entries }
}

/// `⟨(a†a)²⟩ − ⟨a†a⟩²` computed directly in the number basis.
pub fn number_variance(state: &FockVector) -> f64 {
    let mut mean = 0.0;
    let mut mean_sq = 0.0;
    for (n, a) in state.amps.iter().enumerate() {
        let w = a.norm_sqr();
        mean += n as f64 * w;
        mean_sq += (n * n) as f64 * w;
    }
    (mean_sq - mean * mean).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Independent Poisson-sum oracle for coherent-state number moments.
    fn poisson_moment(lambda: f64, cutoff: usize, power: u32) -> f64 {
        let mut p = (-lambda).exp();
        let mut norm = 0.0;
        let mut acc = 0.0;
        for n in 0..=cutoff {
            if n > 0 {
                p *= lambda / n as f64;
            }
            norm += p;
            acc += (n as f64).powi(power as i32) * p;
        }
        acc / norm
    }

    #[test]
    fn vacuum_amplitudes() {
        let v = build_vacuum(4).unwrap();
        assert_eq!(v.cutoff(), 4);
        assert_eq!(v.amps()[0], c(1.0, 0.0));
        assert!(v.amps()[1..].iter().all(|a| *a == c(0.0, 0.0)));
        let m = moments(&v);
        assert_eq!(m.entry(1, 1), c(0.0, 0.0));
        assert_eq!(m.entry(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn vacuum_rejects_zero_cutoff() {
        assert!(matches!(build_vacuum(0), Err(FockError::InvalidArgument(_))));
    }

    #[test]
    fn coherent_zero_displacement_is_vacuum() {
        let v = build_coherent(c(0.0, 0.0), 3).unwrap();
        assert_eq!(v.amps()[0], c(1.0, 0.0));
        assert!(v.amps()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn coherent_eigenvalue_relation() {
        // ⟨β|a|β⟩ = β
        let v = build_coherent(c(1.0, 0.0), 30).unwrap();
        let m = moments(&v);
        assert_abs_diff_eq!(m.entry(0, 1).re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.entry(0, 1).im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_photon_number_against_poisson_sum() {
        let v = build_coherent(c(2.0, 0.0), 40).unwrap();
        let m = moments(&v);
        let oracle = poisson_moment(4.0, 40, 1);
        assert_abs_diff_eq!(m.entry(1, 1).re, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(m.entry(1, 1).re, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.entry(1, 1).im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_cutoff_too_small_reports_requirement() {
        match build_coherent(c(2.0, 0.0), 5) {
            Err(FockError::CutoffTooSmall { given, required }) => {
                assert_eq!(given, 5);
                // the reported cutoff must itself be adequate
                assert!(build_coherent(c(2.0, 0.0), required).is_ok());
                assert!(required > 5);
            }
            other => panic!("expected CutoffTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn squeezed_with_no_parameters_is_vacuum() {
        let v = build_squeezed_coherent(c(0.0, 0.0), c(0.0, 0.0), 4).unwrap();
        assert_abs_diff_eq!(v.amps()[0].re, 1.0, epsilon = 1e-14);
        for a in &v.amps()[1..] {
            assert!(a.norm() < 1e-14);
        }
    }

    #[test]
    fn squeezed_r0_reduces_to_coherent() {
        let sq = build_squeezed_coherent(c(2.0, 0.0), c(0.0, 0.0), 40).unwrap();
        let coh = build_coherent(c(2.0, 0.0), 40).unwrap();
        for (a, b) in sq.amps().iter().zip(coh.amps().iter()) {
            assert!((a - b).norm() < 1e-10, "amplitude mismatch: {a} vs {b}");
        }
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        // ⟨a†a⟩ = sinh²(1) for r = 1, α = 0
        let v = build_squeezed_coherent(c(0.0, 0.0), c(1.0, 0.0), 60).unwrap();
        let m = moments(&v);
        let expected = 1.0f64.sinh().powi(2);
        assert_abs_diff_eq!(m.entry(1, 1).re, expected, epsilon = 1e-6);
        // odd occupations stay empty
        for n in (1..=59).step_by(2) {
            assert!(v.amps()[n].norm() < 1e-12);
        }
    }

    #[test]
    fn squeezed_inadequate_cutoff_errors() {
        match build_squeezed_coherent(c(0.0, 0.0), c(1.0, 0.0), 8) {
            Err(FockError::CutoffTooSmall { given: 8, required }) => {
                assert!(build_squeezed_coherent(c(0.0, 0.0), c(1.0, 0.0), required).is_ok());
            }
            other => panic!("expected CutoffTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn squeeze_envelope_is_enforced() {
        let res = build_squeezed_coherent(c(0.0, 0.0), c(3.5, 0.0), 100);
        assert!(matches!(res, Err(FockError::InvalidArgument(_))));
    }

    #[test]
    fn ladder_annihilator_kills_vacuum() {
        let v = build_vacuum(4).unwrap();
        let e = ladder_string_expectation(&v, &[Ladder::Lower]).unwrap();
        assert_eq!(e, c(0.0, 0.0));
    }

    #[test]
    fn ladder_coherent_mean_field() {
        let v = build_coherent(c(1.0, 0.0), 30).unwrap();
        let e = ladder_string_expectation(&v, &[Ladder::Lower]).unwrap();
        assert!((e - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn ladder_squeezed_photon_number() {
        // α = 1, ξ = 0.5: ⟨a†a⟩ = 1 + sinh²(0.5) = 1.2715403...
        let alpha = c(1.0, 0.0);
        let xi = c(0.5, 0.0);
        let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
        let e = ladder_string_expectation(&v, &[Ladder::Raise, Ladder::Lower]).unwrap();
        let expected = 1.0 + 0.5f64.sinh().powi(2);
        assert_abs_diff_eq!(expected, 1.2715403174, epsilon = 1e-9);
        assert_abs_diff_eq!(e.re, expected, epsilon = 1e-6);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn ladder_string_length_bound() {
        let v = build_vacuum(2).unwrap();
        let too_long = vec![Ladder::Raise; MAX_LADDER_STRING + 1];
        assert!(matches!(
            ladder_string_expectation(&v, &too_long),
            Err(FockError::InvalidArgument(_))
        ));
    }

    #[test]
    fn moments_coherent_eigenrelation_all_orders() {
        let beta = c(0.7, 0.3);
        let v = build_coherent(beta, 40).unwrap();
        let m = moments(&v);
        for p in 0..=2 {
            for q in 0..=2 {
                let expected = beta.conj().powu(p as u32) * beta.powu(q as u32);
                assert!(
                    (m.entry(p, q) - expected).norm() < 1e-9,
                    "entry({p},{q}) = {}, expected {expected}",
                    m.entry(p, q)
                );
            }
        }
    }

    #[test]
    fn moments_squeezed_vacuum_pair_correlation() {
        // ⟨a²⟩ = −e^{iθ_ξ} sinh r cosh r; checked against the brute-force
        // basis sum Σ √((n+1)(n+2)) conj(c_n) c_{n+2} as the oracle.
        let theta = 0.9f64;
        let xi = C64::from_polar(1.0, theta);
        let v = build_squeezed_coherent(c(0.0, 0.0), xi, auto_cutoff(c(0.0, 0.0), xi)).unwrap();
        let m = moments(&v);
        let mut oracle = c(0.0, 0.0);
        for n in 0..=v.cutoff() - 2 {
            let w = (((n + 1) * (n + 2)) as f64).sqrt();
            oracle += v.amps()[n].conj() * v.amps()[n + 2] * w;
        }
        assert!((m.entry(0, 2) - oracle).norm() < 1e-12);
        let closed = -C64::from_polar(1.0f64.sinh() * 1.0f64.cosh(), theta);
        assert!(
            (m.entry(0, 2) - closed).norm() < 1e-6,
            "⟨a²⟩ = {}, closed form {closed}",
            m.entry(0, 2)
        );
    }

    #[test]
    fn number_variance_vacuum_and_coherent() {
        assert_eq!(number_variance(&build_vacuum(3).unwrap()), 0.0);
        let v = build_coherent(c(2.0, 0.0), 50).unwrap();
        let oracle = {
            let m1 = poisson_moment(4.0, 50, 1);
            let m2 = poisson_moment(4.0, 50, 2);
            m2 - m1 * m1
        };
        assert_abs_diff_eq!(number_variance(&v), oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(number_variance(&v), 4.0, epsilon = 1e-9);
    }

    #[test]
    fn amplitude_squeezing_is_sub_poissonian() {
        // real α, θ_ξ = 0: var n = α²e^{−2r} + 2 sinh²r cosh²r < n̄ for small r
        let alpha = c(2.0, 0.0);
        let xi = c(0.3, 0.0);
        let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
        let var = number_variance(&v);
        let mean = v.mean_photon_number();
        assert!(
            var < mean,
            "expected sub-Poissonian statistics: var = {var}, mean = {mean}"
        );
        let closed = 4.0 * (-0.6f64).exp() + 2.0 * 0.3f64.sinh().powi(2) * 0.3f64.cosh().powi(2);
        assert_abs_diff_eq!(var, closed, epsilon = 1e-6);
    }

    #[test]
    fn photon_number_constraint_across_envelope() {
        // n̄ = |α|² + sinh²r on the supported grid
        for &mag in &[0.0, 1.0, 2.0] {
            for alpha in [c(mag, 0.0), c(0.0, mag)] {
                for &r in &[0.0, 0.25, 0.5, 1.0] {
                    let xi = C64::from_polar(r, 0.4);
                    let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
                    let exact = alpha.norm_sqr() + r.sinh().powi(2);
                    assert!(
                        (v.mean_photon_number() - exact).abs() <= 1e-6 * exact.max(1.0),
                        "n̄ mismatch at α={alpha}, r={r}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn constructors_preserve_norm(
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
            r in 0.0f64..1.2,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let alpha = c(re, im);
            let xi = C64::from_polar(r, theta);
            let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
            let norm_sqr: f64 = v.amps().iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((norm_sqr - 1.0).abs() < NORM_TOL);
        }

        #[test]
        fn moments_are_hermitian(
            re in -1.5f64..1.5,
            im in -1.5f64..1.5,
            r in 0.0f64..0.8,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let alpha = c(re, im);
            let xi = C64::from_polar(r, theta);
            let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
            let m = moments(&v);
            for p in 0..=2 {
                for q in 0..=2 {
                    prop_assert!((m.entry(p, q) - m.entry(q, p).conj()).norm() < 1e-12);
                }
            }
            prop_assert!(m.entry(0, 0) == C64::new(1.0, 0.0));
            prop_assert!(m.entry(1, 1).re >= 0.0);
            prop_assert!(m.entry(1, 1).im.abs() < 1e-12);
        }

        #[test]
        fn mean_field_matches_displacement(
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
            r in 0.0f64..1.0,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let alpha = c(re, im);
            let xi = C64::from_polar(r, theta);
            let v = build_squeezed_coherent(alpha, xi, auto_cutoff(alpha, xi)).unwrap();
            let m = moments(&v);
            prop_assert!((m.entry(0, 1) - alpha).norm() < 1e-6);
        }

        #[test]
        fn coherent_number_variance_is_poissonian(
            mag in 0.0f64..3.0,
            phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let beta = C64::from_polar(mag, phase);
            let v = build_coherent(beta, auto_cutoff(beta, c(0.0, 0.0))).unwrap();
            prop_assert!((number_variance(&v) - beta.norm_sqr()).abs() < 1e-8);
        }
    }
}
