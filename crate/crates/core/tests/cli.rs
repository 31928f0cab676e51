//! End-to-end tests of the `hetsnr` binary: exit codes, config-file
//! precedence, CSV shape, and file output.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hetsnr")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn temp_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hetsnr_it_{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn no_command_is_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
}

#[test]
fn unknown_key_is_usage_error_naming_the_key() {
    let out = run(&["sweep-snr", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn negative_omega_h_is_usage_error() {
    let out = run(&["sweep-snr", "--omega_h", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega_h"));
}

#[test]
fn unwritable_output_path_is_io_error() {
    let out = run(&[
        "roc",
        "--output_path",
        "/nonexistent_dir_hetsnr/out.csv",
        "--values",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn roc_zero_snr_rows_are_diagonal() {
    let out = run(&["roc", "--beta_re", "0", "--values", "0.1,0.25,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pfa,pd"));
    for line in lines {
        let mut cells = line.split(',');
        let pfa: f64 = cells.next().unwrap().parse().unwrap();
        let pd: f64 = cells.next().unwrap().parse().unwrap();
        assert!((pd - pfa).abs() < 1e-12, "pd {pd} != pfa {pfa}");
    }
}

#[test]
fn sweep_snr_single_point() {
    let out = run(&["sweep-snr", "--values", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "value,snr_analytic,snr_numeric,snr_ratio,var0_s,var0_sprime,agree"
    );
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[0], "0");
    assert_eq!(cells[3], "1"); // snr_ratio
    assert_eq!(cells[6], "true");
}

#[test]
fn config_file_with_flag_override() {
    let dir = temp_dir();
    let cfg = dir.join("run.cfg");
    fs::write(
        &cfg,
        "# sweep configuration\nalpha_re = 1.5\ntheta_h = 0.5\nvalues = 0\n",
    )
    .unwrap();
    let with_file = run(&["sweep-snr", "--config", cfg.to_str().unwrap()]);
    assert_eq!(with_file.status.code(), Some(0));

    // flag overrides the file's theta_h; alpha_re from the file still applies
    let overridden = run(&[
        "sweep-snr",
        "--config",
        cfg.to_str().unwrap(),
        "--theta_h",
        "0",
    ]);
    assert_eq!(overridden.status.code(), Some(0));
    let a = String::from_utf8(with_file.stdout).unwrap();
    let b = String::from_utf8(overridden.stdout).unwrap();
    assert_ne!(a, b, "theta_h override must change the SNR");

    let missing = run(&["sweep-snr", "--config", "/no/such/file.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn output_path_writes_the_same_bytes_as_stdout() {
    let dir = temp_dir();
    let path = dir.join("image_band.csv");
    let to_file = run(&["image-band", "--output_path", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    let to_stdout = run(&["image-band"]);
    assert_eq!(fs::read(&path).unwrap(), to_stdout.stdout);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("var_with_image,var_without_image,ratio,predicted_ratio\n"));
}

#[test]
fn verify_passes_and_reports_all_checks() {
    let out = run(&["verify"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "verify failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "check,status,max_deviation");
    let checks = &lines[1..];
    assert!(checks.len() >= 12, "only {} checks reported", checks.len());
    for line in checks {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[1], "pass", "check {} did not pass", cells[0]);
        let dev: f64 = cells[2].parse().unwrap();
        assert!(dev.is_finite());
    }
}

#[test]
fn kernel_reports_convention_for_nonzero_phase() {
    let out = run(&["kernel", "--theta_h", "1.047197551"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .starts_with("tau_periods,deviation_kernel_only,deviation_sign_prefactor,reducing_convention"));
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",kernel-only"));
    }
}
