//! Phase-space displacement algebra: composition phases, rotating-frame
//! reduction of a kick train, and the area law for the geometric phase.

use num_complex::Complex64;
use rydkick::phasespace::{
    close_triangle, compose, reduce_train, rotate, Displacement, PulseElement, PulseTrain,
};
use rydkick::physical::DipoleOrientation;

fn main() {
    // Non-commutativity: D(i) D(1) vs D(1) D(i).
    let a = Displacement::new(Complex64::new(0.0, 1.0));
    let b = Displacement::new(Complex64::new(1.0, 0.0));
    println!("D(i)D(1): label = {}, phase = {:+.3}", compose(a, b).label, compose(a, b).accumulated_phase);
    println!("D(1)D(i): label = {}, phase = {:+.3}", compose(b, a).label, compose(b, a).accumulated_phase);

    // Free evolution rotates labels clockwise.
    let rotated = rotate(b, std::f64::consts::FRAC_PI_2);
    println!("e^(-i pi/2) . 1 = {}", rotated.label);

    // A closed symmetric kick triangle and its geometric phase.
    let (p1, theta) = (1.0, std::f64::consts::FRAC_PI_4);
    let (p2, p3) = close_triangle(p1, theta).unwrap();
    let train = PulseTrain::new(vec![
        PulseElement::Kick { p_tilde: p1, duration: 0.0, orientation: DipoleOrientation::Perpendicular },
        PulseElement::Free { angle: theta },
        PulseElement::Kick { p_tilde: -p2, duration: 0.0, orientation: DipoleOrientation::Parallel },
        PulseElement::Free { angle: theta },
        PulseElement::Kick { p_tilde: p3, duration: 0.0, orientation: DipoleOrientation::Perpendicular },
    ])
    .unwrap();
    let red = reduce_train(&train);
    println!("triangle p1 = {p1}, theta = {theta:.4}:");
    println!("  closed            = {}", train.is_closed());
    println!("  net displacement  = {:.3e}", red.net.label.norm());
    println!("  phi_geom          = {:+.6} (closed form -p1^2 sin 2 theta = {:+.6})",
        red.phi_geom, -p1 * p1 * (2.0 * theta).sin());
    println!("  total rotation    = {:.6}", red.total_rotation);
}
