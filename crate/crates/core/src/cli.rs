//! Command-line front door: config parsing, experiment dispatch, CSV output.
//!
//! Commands: `verify`, `sweep-snr`, `sweep-numvar`, `image-band`, `kernel`,
//! `roc`. Parameters come from `--key value` flags, optionally seeded from a
//! plain-text config file (`key = value` per line, `#` comments) given with
//! `--config`; flags override file values. Output is CSV with a header row,
//! floats printed in shortest round-trip form, no timestamps — identical
//! configurations produce byte-identical files.
//!
//! Exit codes: 0 success, 1 failed verification check, 2 usage/configuration
//! error, 3 output I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_complex::Complex64 as C64;

use crate::analytic::{self, DetectorVariant, RadarParams};
use crate::experiments::{
    self, kernel_study_grid, run_image_band_study, run_kernel_convergence,
    run_number_variance_study, run_snr_sweep, Normalization, OracleMode, SweepSpec,
    SweptParameter,
};
use crate::operator::{CutoffChoice, ModeGrid, PhaseConvention};
use crate::verify;

const USAGE: &str = "usage: hetsnr <verify|sweep-snr|sweep-numvar|image-band|kernel|roc> \
[--config FILE] [--key value ...]\n\
keys: alpha_re alpha_im xi_re xi_im beta_re beta_im theta_h omega_lo omega_h g \
cutoff normalization values output_path oracle_mode";

const KNOWN_KEYS: &[&str] = &[
    "alpha_re",
    "alpha_im",
    "xi_re",
    "xi_im",
    "beta_re",
    "beta_im",
    "theta_h",
    "omega_lo",
    "omega_h",
    "g",
    "cutoff",
    "normalization",
    "values",
    "output_path",
    "oracle_mode",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    SweepSnr,
    SweepNumvar,
    ImageBand,
    Kernel,
    Roc,
}

impl Command {
    fn parse(word: &str) -> Option<Self> {
        match word {
            "verify" => Some(Command::Verify),
            "sweep-snr" => Some(Command::SweepSnr),
            "sweep-numvar" => Some(Command::SweepNumvar),
            "image-band" => Some(Command::ImageBand),
            "kernel" => Some(Command::Kernel),
            "roc" => Some(Command::Roc),
            _ => None,
        }
    }
}

/// Fully validated run configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: C64,
    pub xi: C64,
    pub beta: C64,
    pub theta_h: f64,
    pub omega_lo: f64,
    pub omega_h: f64,
    pub g: f64,
    pub cutoff: Option<usize>,
    pub normalization: Normalization,
    pub values: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
    pub oracle_mode: OracleMode,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}\n{USAGE}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

fn parse_f64(key: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| CliError::Usage(format!("key '{key}': cannot parse '{raw}' as a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("key '{key}': value must be finite")));
    }
    Ok(v)
}

fn parse_values(raw: &str) -> Result<Vec<f64>, CliError> {
    let vals: Result<Vec<f64>, _> = raw
        .split(',')
        .map(|tok| tok.trim().parse::<f64>())
        .collect();
    match vals {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(CliError::Usage(format!(
            "key 'values': cannot parse '{raw}' as comma-separated reals"
        ))),
    }
}

/// Parses the command line (and optional config file) into a [`RunConfig`].
pub fn parse_config(args: &[String]) -> Result<RunConfig, CliError> {
    let command_word = args
        .first()
        .ok_or_else(|| CliError::Usage("missing command".into()))?;
    let command = Command::parse(command_word)
        .ok_or_else(|| CliError::Usage(format!("unknown command '{command_word}'")))?;

    // file assignments first, then flags on top
    let mut assignments: Vec<(String, String)> = Vec::new();
    let mut flags: Vec<(String, String)> = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let token = &args[i];
        let key = token
            .strip_prefix("--")
            .ok_or_else(|| CliError::Usage(format!("expected a --key, found '{token}'")))?;
        let value = args
            .get(i + 1)
            .ok_or_else(|| CliError::Usage(format!("key '{key}' is missing a value")))?;
        if key == "config" {
            let text = fs::read_to_string(value).map_err(|e| {
                CliError::Usage(format!("cannot read config file '{value}': {e}"))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let stripped = line.split('#').next().unwrap_or("").trim();
                if stripped.is_empty() {
                    continue;
                }
                let (k, v) = stripped.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!(
                        "config line {}: expected 'key = value', found '{stripped}'",
                        lineno + 1
                    ))
                })?;
                assignments.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else {
            flags.push((key.to_string(), value.clone()));
        }
        i += 2;
    }
    assignments.extend(flags);

    let mut config = RunConfig {
        command,
        alpha: C64::new(2.0, 0.0),
        xi: C64::new(0.0, 0.0),
        beta: C64::new(1.0, 0.0),
        theta_h: 0.0,
        omega_lo: 100.0,
        omega_h: 1.0,
        g: 1.0,
        cutoff: None,
        normalization: Normalization::FixedNbarLo,
        values: None,
        output_path: None,
        oracle_mode: OracleMode::Spot,
    };

    for (key, raw) in assignments {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown key '{key}'")));
        }
        match key.as_str() {
            "alpha_re" => config.alpha.re = parse_f64(&key, &raw)?,
            "alpha_im" => config.alpha.im = parse_f64(&key, &raw)?,
            "xi_re" => config.xi.re = parse_f64(&key, &raw)?,
            "xi_im" => config.xi.im = parse_f64(&key, &raw)?,
            "beta_re" => config.beta.re = parse_f64(&key, &raw)?,
            "beta_im" => config.beta.im = parse_f64(&key, &raw)?,
            "theta_h" => config.theta_h = parse_f64(&key, &raw)?,
            "omega_lo" => config.omega_lo = parse_f64(&key, &raw)?,
            "omega_h" => config.omega_h = parse_f64(&key, &raw)?,
            "g" => config.g = parse_f64(&key, &raw)?,
            "cutoff" => {
                config.cutoff = Some(raw.parse::<usize>().map_err(|_| {
                    CliError::Usage(format!(
                        "key 'cutoff': cannot parse '{raw}' as a positive integer"
                    ))
                })?);
            }
            "normalization" => {
                config.normalization = match raw.as_str() {
                    "fixed-alpha" => Normalization::FixedAlpha,
                    "fixed-nbar-lo" => Normalization::FixedNbarLo,
                    _ => {
                        return Err(CliError::Usage(format!(
                            "key 'normalization': expected fixed-alpha or fixed-nbar-lo, found '{raw}'"
                        )));
                    }
                };
            }
            "values" => config.values = Some(parse_values(&raw)?),
            "output_path" => config.output_path = Some(PathBuf::from(raw)),
            "oracle_mode" => {
                config.oracle_mode = match raw.as_str() {
                    "spot" => OracleMode::Spot,
                    "full" => OracleMode::Full,
                    _ => {
                        return Err(CliError::Usage(format!(
                            "key 'oracle_mode': expected spot or full, found '{raw}'"
                        )));
                    }
                };
            }
            _ => unreachable!("key set checked above"),
        }
    }

    if config.omega_h <= 0.0 {
        // ω_T − ω_LO > 0 by convention: the target return sits above the LO
        return Err(CliError::Usage(
            "key 'omega_h': the heterodyne frequency must be positive".into(),
        ));
    }
    if config.omega_lo <= config.omega_h {
        return Err(CliError::Usage(
            "key 'omega_lo': must exceed omega_h so the image band exists".into(),
        ));
    }
    if config.g <= 0.0 {
        return Err(CliError::Usage(
            "key 'g': the scale constant must be positive".into(),
        ));
    }
    if config.cutoff == Some(0) {
        return Err(CliError::Usage("key 'cutoff': must be at least 1".into()));
    }
    Ok(config)
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn radar_params(config: &RunConfig) -> Result<RadarParams, String> {
    RadarParams::new(
        config.alpha,
        config.xi,
        config.beta,
        config.theta_h,
        config.omega_lo + config.omega_h,
        config.omega_lo,
        config.g,
        DetectorVariant::Single,
    )
    .map_err(|e| e.to_string())
}

fn sweep_spec(config: &RunConfig, swept: SweptParameter, default_values: &[f64]) -> Result<SweepSpec, String> {
    Ok(SweepSpec {
        swept,
        values: config
            .values
            .clone()
            .unwrap_or_else(|| default_values.to_vec()),
        held: radar_params(config)?,
        grid: match swept {
            SweptParameter::Tau => kernel_study_grid(config.omega_lo, config.omega_h, config.g)
                .map_err(|e| e.to_string())?,
            _ => ModeGrid::heterodyne_default(config.omega_lo, config.omega_h, config.g)
                .map_err(|e| e.to_string())?,
        },
        normalization: config.normalization,
        oracle: config.oracle_mode,
        cutoff: match config.cutoff {
            Some(n) => CutoffChoice::Explicit(n),
            None => CutoffChoice::Auto,
        },
    })
}

fn render_verify(results: &[verify::CheckResult]) -> (String, bool) {
    let mut out = String::from("check,status,max_deviation\n");
    let mut all_passed = true;
    for r in results {
        let status = if r.passed { "pass" } else { "fail" };
        all_passed &= r.passed;
        let _ = writeln!(out, "{},{},{}", r.name, status, fmt_f64(r.max_deviation));
    }
    (out, all_passed)
}

fn render_snr_sweep(rows: &[experiments::SweepRow]) -> String {
    let mut out = String::from("value,snr_analytic,snr_numeric,snr_ratio,var0_s,var0_sprime,agree\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.snr_analytic),
            fmt_f64(r.snr_numeric),
            fmt_f64(r.snr_ratio),
            fmt_f64(r.var0_s_numeric),
            fmt_f64(r.var0_sprime_numeric),
            r.agree
        );
    }
    out
}

fn render_numvar_sweep(rows: &[experiments::SweepRow]) -> String {
    let mut out = String::from(
        "value,var0_s_analytic,var0_s_numeric,var0_sprime_analytic,var0_sprime_numeric,agree\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.var0_s_analytic),
            fmt_f64(r.var0_s_numeric),
            fmt_f64(r.var0_sprime_analytic),
            fmt_f64(r.var0_sprime_numeric),
            r.agree
        );
    }
    out
}

fn render_image_band(report: &experiments::ImageBandReport) -> String {
    let mut out = String::from("var_with_image,var_without_image,ratio,predicted_ratio\n");
    let _ = writeln!(
        out,
        "{},{},{},{}",
        fmt_f64(report.var_with_numeric),
        fmt_f64(report.var_without_numeric),
        fmt_f64(report.ratio),
        fmt_f64(report.predicted_ratio)
    );
    out
}

fn render_kernel(report: &experiments::KernelConvergenceReport) -> String {
    let convention = match report.reducing_convention {
        Some(PhaseConvention::KernelOnly) => "kernel-only",
        Some(PhaseConvention::SignPrefactor) => "sign-prefactor",
        None => "",
    };
    let mut out =
        String::from("tau_periods,deviation_kernel_only,deviation_sign_prefactor,reducing_convention\n");
    for r in &report.rows {
        let prefactor = r
            .deviation_sign_prefactor
            .map(fmt_f64)
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r.tau_periods),
            fmt_f64(r.deviation_kernel_only),
            prefactor,
            convention
        );
    }
    out
}

fn render_roc(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("pfa,pd\n");
    for (pfa, pd) in curve {
        let _ = writeln!(out, "{},{}", fmt_f64(*pfa), fmt_f64(*pd));
    }
    out
}

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Executes a parsed configuration; returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let rendered: Result<(String, i32), String> = match config.command {
        Command::Verify => {
            let (text, all_passed) = render_verify(&verify::run_all());
            Ok((text, if all_passed { 0 } else { 1 }))
        }
        Command::SweepSnr => sweep_spec(config, SweptParameter::SqueezeMagnitude, &[0.0, 0.25, 0.5, 1.0])
            .and_then(|spec| run_snr_sweep(&spec).map_err(|e| e.to_string()))
            .map(|rows| (render_snr_sweep(&rows), 0)),
        Command::SweepNumvar => sweep_spec(config, SweptParameter::SqueezeMagnitude, &[0.0, 0.25, 0.5, 1.0])
            .and_then(|spec| run_number_variance_study(&spec).map_err(|e| e.to_string()))
            .map(|rows| (render_numvar_sweep(&rows), 0)),
        Command::ImageBand => (|| {
            let p = radar_params(config)?;
            let with = ModeGrid::heterodyne_default(config.omega_lo, config.omega_h, config.g)
                .map_err(|e| e.to_string())?;
            let without =
                ModeGrid::heterodyne_without_image(config.omega_lo, config.omega_h, config.g)
                    .map_err(|e| e.to_string())?;
            let report = run_image_band_study(&with, &without, &p).map_err(|e| e.to_string())?;
            Ok((render_image_band(&report), 0))
        })(),
        Command::Kernel => sweep_spec(config, SweptParameter::Tau, &[100.0, 1000.0, 10000.0])
            .and_then(|spec| run_kernel_convergence(&spec).map_err(|e| e.to_string()))
            .map(|report| (render_kernel(&report), 0)),
        Command::Roc => (|| {
            let p = radar_params(config)?;
            let snr = analytic::snr(&p).map_err(|e| e.to_string())?;
            let default_pfa = [0.001, 0.01, 0.05, 0.1, 0.2, 0.5];
            let pfa = config
                .values
                .clone()
                .unwrap_or_else(|| default_pfa.to_vec());
            let curve =
                experiments::gaussian_detection_curve(snr, &pfa).map_err(|e| e.to_string())?;
            Ok((render_roc(&curve), 0))
        })(),
    };

    match rendered {
        Ok((text, code)) => match emit(config, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("{e}");
                3
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Parses and runs; the binary's whole body.
pub fn main_entry(args: &[String]) -> i32 {
    match parse_config(args) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}
