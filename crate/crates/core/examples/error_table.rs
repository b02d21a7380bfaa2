//! Prints the Taylor error bounds used by the default certificates.
use pjensen_core::asymptotics::ShiftRatio;
use pjensen_core::certifier::{taylor_error_bound, SupStrategy};
use pjensen_core::Interval;

fn main() {
    let cases = [(2, "0.0295"), (3, "0.021"), (4, "0.0163"), (5, "0.0081"), (3, "0.001")];
    for (d, e) in cases {
        let eps = Interval::from_decimal(e, 128).unwrap();
        for j in 1..=d {
            let t0 = std::time::Instant::now();
            let b = taylor_error_bound(&ShiftRatio::new(j, 128), 10, &eps, SupStrategy::BranchAndBound).unwrap();
            println!(
                "d={d} eps={e} j={j}: derivative {:.6e} (witness {:.6e}, boxes {}, converged {}) ratio {:.6e} [{:?}]",
                b.derivative.upper.to_f64(),
                b.derivative.witness.to_f64(),
                b.derivative.boxes,
                b.derivative.converged,
                b.ratio.to_f64(),
                t0.elapsed()
            );
        }
    }
}
