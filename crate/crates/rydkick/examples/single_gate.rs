//! Run one full gate on the motional ground state and print its metrics.

use std::f64::consts::PI;
use rydkick::gate::{run_gate, GateParams};

fn main() {
    let t_ho = 2.0 * PI;
    for (theta_ho, x0) in [(0.1, 40.0), (0.05, 40.0), (0.1, 20.0), (0.05, 20.0)] {
        let start = std::time::Instant::now();
        let params = GateParams::from_duration(-PI, theta_ho * t_ho, x0, 1e-4 * t_ho).unwrap();
        let outcome = run_gate(&params, 0).unwrap();
        println!(
            "theta = {theta_ho:>4} T_ho  x0 = {x0:>4}  F0 = {:.6}  |a00| = {:.6}  phi00 = {:+.6}  tau = {:.4}  loss = {:.2e}  untrusted = {}  ({:.2?})",
            outcome.f_k,
            outcome.alpha_kk.norm(),
            outcome.phi_kk,
            outcome.tau,
            outcome.alpha_row.truncation_loss(),
            outcome.untrusted,
            start.elapsed(),
        );
    }
}
