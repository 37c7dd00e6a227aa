//! Closed-form protocol design: solve the kick duration for a target phase,
//! assemble the timed pulse train, and split the phase budget.

use std::f64::consts::PI;
use rydkick::phasespace::{build_schedule, phase_budget, reduce_train, solve_kick_time};

fn main() {
    let t_ho = 2.0 * PI;
    let (phi, theta, x0, alpha) = (-PI, 0.1 * t_ho, 40.0, 7.9438610533e8);

    let dt1 = solve_kick_time(phi, theta, x0, alpha).unwrap();
    println!("phi = {phi:.6}, theta = {theta:.6}, x0 = {x0}, alpha_plus_sq = {alpha:.4e}");
    println!("  dt1 = {dt1:.6e} (the reference runs fix 1e-4 T_ho = {:.6e})", 1e-4 * t_ho);

    let (schedule, train) = build_schedule(phi, theta, x0, alpha).unwrap();
    println!("  kick displacements: p1 = {:.5}, p2 = {:.5}, p3 = {:.5}", schedule.p1, schedule.p2, schedule.p3);
    println!("  durations: dt1 = {:.4e}, dt2 = dt1 cos(theta) = {:.4e}", schedule.dt1, schedule.dt2);

    let budget = phase_budget(&schedule, alpha);
    println!("  phi_dyn  = {:+.6}", budget.phi_dyn);
    println!("  phi_geom = {:+.6}", budget.phi_geom);
    println!("  total    = {:+.6} (target {:+.6})", budget.phi_total, schedule.phi_target);
    println!("  gate time tau = {:.6} = {:.4} T_ho", budget.gate_time, budget.gate_time / t_ho);

    let red = reduce_train(&train);
    println!("  triangle closure residual = {:.3e}", red.net.label.norm());

    // The fast-gate limit: the geometric term dominates as theta shrinks.
    for theta in [0.3, 0.1, 0.03, 0.01] {
        let (schedule, _) = build_schedule(phi, theta, x0, alpha).unwrap();
        let budget = phase_budget(&schedule, alpha);
        println!(
            "  theta = {theta:>5}: phi_dyn = {:+.4e}, phi_geom = {:+.6}",
            budget.phi_dyn, budget.phi_geom
        );
    }
}
