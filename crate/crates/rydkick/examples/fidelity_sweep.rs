//! Small in-process fidelity sweep over (theta, x0) with contour extraction.
//!
//! The CLI `sweep` subcommand produces the full CSV outputs; this example
//! renders a coarse text map instead.

use rydkick::config::RunConfig;
use rydkick::sweep::{reference_curve, run_sweep};

const CONFIG: &str = r#"
[protocol]
theta_range = { start = 0.03, stop = 0.15, count = 8 }
theta_units = "t_ho"
x0_range = { start = 15.0, stop = 55.0, count = 8 }
dt1 = 6.283185307179586e-4
"#;

fn main() {
    let cfg = RunConfig::from_toml(CONFIG).unwrap();
    let result = run_sweep(&cfg).unwrap();

    println!("F0 over (theta rows, x0 columns):");
    print!("{:>10}", "theta\\x0");
    for x0 in &result.x0s {
        print!("{x0:>9.1}");
    }
    println!();
    let nb = result.x0s.len();
    for (i, theta) in result.thetas.iter().enumerate() {
        print!("{:>10.4}", theta);
        for j in 0..nb {
            print!("{:>9.4}", result.records[i * nb + j].f0);
        }
        println!();
    }

    let contours = result.contours(0.99);
    println!("\nF = 0.99 contour polylines: {}", contours.len());
    for (theta, x0_ref) in reference_curve(cfg.phi_target(), &result.thetas) {
        println!("  reference x0(theta = {theta:.4}) = {x0_ref:.2}");
    }
}
