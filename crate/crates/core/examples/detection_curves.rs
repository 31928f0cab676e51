//! Gaussian detection curves at the SNRs the radar model predicts: squeezing
//! the LO lowers the SNR, which lowers the detection probability at every
//! false-alarm rate.

use hetsnr::analytic::{snr, DetectorVariant, RadarParams};
use hetsnr::experiments::gaussian_detection_curve;
use num_complex::Complex64 as C64;

fn main() {
    let pfa = [0.0001, 0.001, 0.01, 0.05, 0.1, 0.3];
    let n_lo = 4.0f64;
    let n_t = 4.0f64;

    println!("pd vs pfa at n̄_LO = {n_lo}, n̄_T = {n_t} (equal-variance Gaussian model):");
    print!("  {:>8}", "pfa");
    let mut curves = Vec::new();
    for &r in &[0.0f64, 0.5, 1.0] {
        let alpha_mag = (n_lo - r.sinh().powi(2)).sqrt();
        let p = RadarParams::new(
            C64::new(alpha_mag, 0.0),
            C64::new(r, 0.0),
            C64::new(n_t.sqrt(), 0.0),
            0.0,
            101.0,
            100.0,
            1.0,
            DetectorVariant::Single,
        )
        .unwrap();
        let s = snr(&p).unwrap();
        print!("  pd(r={r}, snr={s:.3})");
        curves.push(gaussian_detection_curve(s, &pfa).unwrap());
    }
    println!();

    for (i, &p) in pfa.iter().enumerate() {
        print!("  {p:>8}");
        for curve in &curves {
            print!("  {:>17.6}", curve[i].1);
        }
        println!();
    }
    println!("\nevery column to the right (more squeezing) detects less.");
}
