//! Certifies the default thresholds for d = 2..5 and prints a summary.
use pjensen_core::certifier::{certify_threshold, leading_constant, CertificateConfig};

fn main() {
    let ds: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    for d in if ds.is_empty() { vec![2, 3, 4, 5] } else { ds } {
        let t0 = std::time::Instant::now();
        let cert = certify_threshold(&CertificateConfig::new(d)).unwrap();
        println!("d={d} verified={} n0={} prec={} [{:?}]", cert.verified, cert.threshold_n0, cert.config.precision, t0.elapsed());
        for m in &cert.per_m {
            let lc = leading_constant(d, m.m, 128).unwrap();
            println!(
                "  m={} k={} c0={:.6e} (limit {:.6e}) c1={:.4e} lower0={:.6e} value@eps={:.4e} changes={} residual={:.2e} ncoef={}",
                m.m, m.k, m.c0.to_f64(), lc.to_f64(), m.c1.to_f64(), m.coefficients[0].to_f64(), m.value_at_epsilon.to_f64(), m.sign_changes,
                m.cancellation_residual.to_f64(), m.coefficients.len()
            );
        }
        for d in &cert.diagnostics { println!("  ! {d}"); }
    }
}
