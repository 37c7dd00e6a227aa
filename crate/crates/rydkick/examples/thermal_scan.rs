//! Gate fidelity for thermal motional states at increasing temperature.

use std::f64::consts::PI;
use rydkick::gate::{fidelity_thermal, run_gate, GateParams};

fn main() {
    let t_ho = 2.0 * PI;
    for (theta_ho, x0) in [(0.05, 20.0), (0.05, 40.0), (0.1, 20.0), (0.1, 40.0)] {
        let params = GateParams::from_duration(-PI, theta_ho * t_ho, x0, 1e-4 * t_ho).unwrap();
        let anchor = run_gate(&params, 0).unwrap();
        print!("theta = {theta_ho} T_ho, x0 = {x0:>4}:  F(T->0) = {:.4}", anchor.f_k);
        for k_bt in [0.5, 1.0, 2.0, 3.0] {
            let thermal = fidelity_thermal(&params, k_bt).unwrap();
            print!("  F({k_bt}) = {:.4} [{} levels]", thermal.fidelity, thermal.density.levels());
        }
        println!();
    }
}
