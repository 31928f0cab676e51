//! Truncated-Fock-space simulator and closed-form calculator for heterodyne
//! laser radar with a squeezed local oscillator.
//!
//! The headline result this crate reproduces, numerically and analytically:
//! squeezing the local oscillator cannot improve the heterodyne SNR. At
//! fixed LO photon number the SNR scales as `1 − sinh²r/n̄_LO`, strictly
//! decreasing in the squeezing parameter `r`, even though the LO
//! photon-number variance (the variance of the *zero-frequency* statistic)
//! can be pushed below its coherent value by amplitude squeezing.
//!
//! Everything is computed twice: closed forms in [`analytic`], and a
//! truncated-Fock operator engine ([`fock`], [`operator`]) that evaluates
//! the signal operator's mean and variance with no symbolic simplification,
//! cross-checked by a brute-force tensor-product oracle. [`experiments`]
//! packages the parameter sweeps, [`verify`] the named cross-check suite,
//! and [`cli`] a thin CSV-emitting command-line front end.
//!
//! ## Runnable examples
//!
//! One example per capability; run with `cargo run -p hetsnr --example <name>`:
//!
//! - **`fock_states`** — vacuum/coherent/squeezed-coherent construction,
//!   moment tables, sub-Poissonian photon statistics
//! - **`signal_operator`** — the restricted-sum signal operator on a mode
//!   grid; means, variances, image-band accounting, brute-force cross-check
//! - **`snr_sweep`** — SNR vs squeezing at fixed LO photon number
//! - **`variance_contrast`** — Var S vs Var S′: why squeezing looks like it
//!   should help but does not
//! - **`kernel_convergence`** — finite-integration-time operator reducing to
//!   the long-time limit, plus the phase-convention report
//! - **`detection_curves`** — Gaussian detection curves (pd vs pfa) at the
//!   predicted SNRs
//!
//! The same studies are scriptable through the `hetsnr` binary
//! (`verify`, `sweep-snr`, `sweep-numvar`, `image-band`, `kernel`, `roc`).

pub mod analytic;
pub mod cli;
pub mod experiments;
pub mod fock;
pub mod operator;
pub mod verify;
