//! Repeated application of the same gate: entropy growth and revival.

use std::f64::consts::PI;
use rydkick::gate::{iterate_cycles, GateParams};

fn main() {
    let t_ho = 2.0 * PI;
    for (label, theta_ho, x0) in [
        ("A", 0.05, 20.0),
        ("B", 0.05, 40.0),
        ("C", 0.1, 20.0),
        ("D", 0.1, 40.0),
    ] {
        let params = GateParams::from_duration(-PI, theta_ho * t_ho, x0, 1e-4 * t_ho).unwrap();
        let start = std::time::Instant::now();
        let records = iterate_cycles(&params, 12).unwrap();
        print!("set {label} (theta = {theta_ho} T_ho, x0 = {x0}): ");
        for rec in &records {
            if rec.n <= 6 || rec.entropy < 0.05 {
                print!("S({}) = {:.3} F = {:.4}  ", rec.n, rec.entropy, rec.fidelity);
            }
        }
        println!("  [{:.2?}]", start.elapsed());
    }
}
