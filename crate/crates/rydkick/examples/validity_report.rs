//! Dimensional worked example: Rb-87 hardware reduced to oscillator units,
//! the fast-gate operating point, and the approximation-validity margins.

use std::f64::consts::PI;
use rydkick::gate::rydberg_design_report;
use rydkick::physical::{derive_scales, PhysicalConfig};

fn main() {
    let cfg = PhysicalConfig::rubidium87_example();
    let scales = derive_scales(&cfg).unwrap();
    println!("Rb-87, omega = 2 pi x 100 kHz, n = q + 1 = 50:");
    println!("  a_ho          = {:.4e} m", scales.osc_length);
    println!("  alpha_plus_sq = {:.4e}", scales.alpha_plus_sq);

    let report = rydberg_design_report(&cfg, -PI).unwrap();
    let t_ho = 2.0 * PI;
    println!("fast-gate design point:");
    println!("  theta = {:.4} rad", report.design.theta);
    println!("  x0    = {:.2} a_ho", report.design.x0);
    println!("  tau   ~ 2 theta = {:.4} T_ho (full schedule {:.4} T_ho)",
        report.design.tau_estimate / t_ho, report.tau_full / t_ho);
    println!("margins:");
    for (name, value, _, pass) in report.report.rows() {
        println!("  {name:<34} = {value:<12.4e} {}", if pass { "PASS" } else { "WARN" });
    }
    if let Some(lattice) = &report.lattice {
        println!("800 nm lattice spacing gives x0 = {:.2} a_ho:", lattice.x0_lattice);
        for (name, value, _, pass) in lattice.report.rows() {
            println!("  {name:<34} = {value:<12.4e} {}", if pass { "PASS" } else { "WARN" });
        }
    }
}
