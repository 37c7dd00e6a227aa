//! Closed-form design and bookkeeping of the three-kick protocol.
//!
//! Everything here is exact displacement-operator algebra on the relative
//! motion oscillator: a kick of momentum `p` is the displacement
//! `D(i p_tilde)` with `p_tilde = p / sqrt(2)`, free evolution rotates
//! displacement labels as `e^{-i t}`, and composing displacements accumulates
//! the geometric phase through `D(a) D(b) = D(a + b) e^{i Im(a b*)}`.
//!
//! The symmetric triangle protocol closes the phase-space path with
//! `p2 = 2 p1 cos(theta)`, `p3 = p1` and picks up
//! `phi_geom = -p1_tilde^2 sin(2 theta)` on top of the dynamical phase from
//! the dipole energy shift at the well separation.

use num_complex::Complex64;
use thiserror::Error;

use crate::physical::DipoleOrientation;

/// Net displacements below this modulus count as a closed path.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("free-evolution angle theta = {0} outside (0, pi/2]")]
    ThetaOutOfRange(f64),
    #[error("well separation x0 = {0} must be strictly positive")]
    NonPositiveSeparation(f64),
    #[error("dipole coupling alpha_plus_sq = {0} must be strictly positive")]
    NonPositiveCoupling(f64),
    #[error("kick duration dt1 = {0} must be strictly positive")]
    NonPositiveDuration(f64),
    #[error("pulse train element has negative {name}: {value}")]
    NegativeElement { name: &'static str, value: f64 },
}

/// A phase-space displacement operator `D(label)` together with the scalar
/// phase accumulated while commuting displacements past each other.
///
/// The phase is stored unreduced (not mod 2 pi) so that repeated gate cycles
/// never alias.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Displacement {
    pub label: Complex64,
    pub accumulated_phase: f64,
}

impl Displacement {
    pub fn new(label: Complex64) -> Self {
        Displacement { label, accumulated_phase: 0.0 }
    }

    pub fn identity() -> Self {
        Displacement::new(Complex64::new(0.0, 0.0))
    }

    /// Momentum kick `e^{i p x} = D(i p_tilde)` with signed `p_tilde`.
    pub fn kick(p_tilde: f64) -> Self {
        Displacement::new(Complex64::new(0.0, p_tilde))
    }
}

/// Operator product `a . b` (`b` acts first):
/// label `a + b`, phase increased by `Im(label_a conj(label_b))`.
pub fn compose(a: Displacement, b: Displacement) -> Displacement {
    Displacement {
        label: a.label + b.label,
        accumulated_phase: a.accumulated_phase
            + b.accumulated_phase
            + (a.label * b.label.conj()).im,
    }
}

/// Commute a free evolution of angle `t` from the left of `d` to its right:
/// `U(t) D(label) = D(e^{-i t} label) U(t)`. The phase is untouched.
pub fn rotate(d: Displacement, t: f64) -> Displacement {
    Displacement {
        label: d.label * Complex64::cis(-t),
        accumulated_phase: d.accumulated_phase,
    }
}

/// One element of a timed pulse train.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseElement {
    /// Dipole kick with signed momentum displacement `p_tilde` (units of
    /// `1/sqrt(2)` momenta), finite duration, and dipole orientation.
    Kick { p_tilde: f64, duration: f64, orientation: DipoleOrientation },
    /// Free harmonic evolution by `angle` (dimensionless time = radians).
    Free { angle: f64 },
}

/// Ordered pulse train; the first element acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseTrain {
    elements: Vec<PulseElement>,
}

impl PulseTrain {
    pub fn new(elements: Vec<PulseElement>) -> Result<Self, ProtocolError> {
        for el in &elements {
            match *el {
                PulseElement::Kick { duration, .. } if duration < 0.0 => {
                    return Err(ProtocolError::NegativeElement {
                        name: "duration",
                        value: duration,
                    });
                }
                PulseElement::Free { angle } if angle < 0.0 => {
                    return Err(ProtocolError::NegativeElement { name: "angle", value: angle });
                }
                _ => {}
            }
        }
        Ok(PulseTrain { elements })
    }

    pub fn elements(&self) -> &[PulseElement] {
        &self.elements
    }

    /// Total wall-clock duration: kick durations plus free angles.
    pub fn total_time(&self) -> f64 {
        self.elements
            .iter()
            .map(|el| match *el {
                PulseElement::Kick { duration, .. } => duration,
                PulseElement::Free { angle } => angle,
            })
            .sum()
    }

    /// True when the net rotating-frame displacement vanishes.
    pub fn is_closed(&self) -> bool {
        reduce_train(self).net.label.norm() < CLOSURE_TOLERANCE
    }
}

/// Result of commuting all free evolutions of a train to the left.
///
/// The train operator equals
/// `U_ho(total_rotation) D(net.label) e^{i phi_geom}`.
#[derive(Clone, Copy, Debug)]
pub struct TrainReduction {
    pub net: Displacement,
    pub phi_geom: f64,
    pub total_rotation: f64,
}

/// Reduce a pulse train to a single rotation, displacement, and phase.
///
/// For the closed symmetric triangle this reproduces
/// `phi_geom = -p1_tilde^2 sin(2 theta)`; in general the phase equals minus
/// twice the oriented area swept by the rotating-frame trajectory.
pub fn reduce_train(train: &PulseTrain) -> TrainReduction {
    let mut acc = Displacement::identity();
    let mut rotation = 0.0;
    for el in train.elements() {
        match *el {
            PulseElement::Free { angle } => rotation += angle,
            PulseElement::Kick { p_tilde, .. } => {
                // A kick arriving after rotation T picks up e^{+iT} when the
                // rotation is commuted to its left.
                let kicked = rotate(Displacement::kick(p_tilde), -rotation);
                acc = compose(kicked, acc);
            }
        }
    }
    TrainReduction { net: acc, phi_geom: acc.accumulated_phase, total_rotation: rotation }
}

/// Solve the symmetric triangle closure for the second and third kick:
/// `p2 = 2 p1 cos(theta)`, `p3 = p1`.
pub fn close_triangle(p1: f64, theta: f64) -> Result<(f64, f64), ProtocolError> {
    check_theta(theta)?;
    Ok((2.0 * p1 * theta.cos(), p1))
}

fn check_theta(theta: f64) -> Result<(), ProtocolError> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(ProtocolError::ThetaOutOfRange(theta));
    }
    Ok(())
}

/// Kick impulse `alpha_plus_sq * dt1` realizing a total phase of magnitude
/// `|phi_target|` at angle `theta` and separation `x0`.
///
/// This is the non-negative branch of the quadratic
/// `|phi| = 2 (y/x0^3)(1 - cos theta) + (9/2)(y^2/x0^8) sin(2 theta)`
/// in `y = alpha_plus_sq * dt1`, written in the rationalized form
/// `y = x0^3 |phi| / [(1 - cos theta) + sqrt((1 - cos theta)^2
///      + (9/2)(sin 2 theta / x0^2)|phi|)]`,
/// which stays finite and cancellation-free through the `theta = pi/2`
/// endpoint where it reduces to `y = |phi| x0^3 / 2`.
pub fn kick_impulse(phi_target: f64, theta: f64, x0: f64) -> Result<f64, ProtocolError> {
    check_theta(theta)?;
    if !(x0 > 0.0) {
        return Err(ProtocolError::NonPositiveSeparation(x0));
    }
    let phi = phi_target.abs();
    let c = 1.0 - theta.cos();
    let s2 = (2.0 * theta).sin();
    let denom = c + (c * c + 4.5 * s2 / (x0 * x0) * phi).sqrt();
    if denom == 0.0 {
        // phi = 0 together with theta -> 0 underflow; no kick needed.
        return Ok(0.0);
    }
    Ok(x0.powi(3) * phi / denom)
}

/// Duration of the first kick for a given dipole coupling.
pub fn solve_kick_time(
    phi_target: f64,
    theta: f64,
    x0: f64,
    alpha_plus_sq: f64,
) -> Result<f64, ProtocolError> {
    if !(alpha_plus_sq > 0.0) {
        return Err(ProtocolError::NonPositiveCoupling(alpha_plus_sq));
    }
    Ok(kick_impulse(phi_target, theta, x0)? / alpha_plus_sq)
}

/// Dipole coupling required when the kick duration is fixed instead.
pub fn solve_kick_strength(
    phi_target: f64,
    theta: f64,
    x0: f64,
    dt1: f64,
) -> Result<f64, ProtocolError> {
    if !(dt1 > 0.0) {
        return Err(ProtocolError::NonPositiveDuration(dt1));
    }
    Ok(kick_impulse(phi_target, theta, x0)? / dt1)
}

/// Fully timed symmetric-triangle schedule.
#[derive(Clone, Copy, Debug)]
pub struct ProtocolSchedule {
    /// Free-evolution angle between kicks (radians), `theta1 = theta2`.
    pub theta: f64,
    /// Well separation in oscillator lengths.
    pub x0: f64,
    /// Duration of kicks 1 and 3.
    pub dt1: f64,
    /// Duration of kick 2, `dt1 cos(theta)`.
    pub dt2: f64,
    /// Displacement magnitudes of the three kicks.
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// Signed design phase realized by the protocol, `-|phi_target|`.
    pub phi_target: f64,
}

/// Phase ledger of a schedule.
#[derive(Clone, Copy, Debug)]
pub struct PhaseBudget {
    pub phi_dyn: f64,
    pub phi_geom: f64,
    pub phi_total: f64,
    /// Full gate time `dt1 (2 + cos theta) + 2 theta`.
    pub gate_time: f64,
}

/// Dynamical and geometric phases plus the gate time for a schedule.
pub fn phase_budget(schedule: &ProtocolSchedule, alpha_plus_sq: f64) -> PhaseBudget {
    let y = alpha_plus_sq * schedule.dt1;
    let x0 = schedule.x0;
    let theta = schedule.theta;
    let phi_dyn = -2.0 * y / x0.powi(3) * (1.0 - theta.cos());
    let phi_geom = -schedule.p1 * schedule.p1 * (2.0 * theta).sin();
    PhaseBudget {
        phi_dyn,
        phi_geom,
        phi_total: phi_dyn + phi_geom,
        gate_time: schedule.dt1 * (2.0 + theta.cos()) + 2.0 * theta,
    }
}

/// Build the standard symmetric protocol for a given dipole coupling.
///
/// Kick pattern: repulsive (perpendicular dipoles), attractive (parallel),
/// repulsive, so that every kick uses the same Rydberg level and only the
/// field orientation alternates. The realized total phase is `-|phi_target|`.
pub fn build_schedule(
    phi_target: f64,
    theta: f64,
    x0: f64,
    alpha_plus_sq: f64,
) -> Result<(ProtocolSchedule, PulseTrain), ProtocolError> {
    let dt1 = solve_kick_time(phi_target, theta, x0, alpha_plus_sq)?;
    schedule_with_duration(phi_target, theta, x0, dt1, alpha_plus_sq)
}

/// Same protocol with the kick duration fixed and the coupling implied.
pub fn build_schedule_from_duration(
    phi_target: f64,
    theta: f64,
    x0: f64,
    dt1: f64,
) -> Result<(f64, ProtocolSchedule, PulseTrain), ProtocolError> {
    let alpha_plus_sq = solve_kick_strength(phi_target, theta, x0, dt1)?;
    let (schedule, train) = schedule_with_duration(phi_target, theta, x0, dt1, alpha_plus_sq)?;
    Ok((alpha_plus_sq, schedule, train))
}

/// Assemble the kick pattern for explicitly given duration and coupling.
///
/// No phase-condition consistency is enforced between `dt1` and
/// `alpha_plus_sq`; the realized total phase is whatever the budget says.
pub fn schedule_with_duration(
    phi_target: f64,
    theta: f64,
    x0: f64,
    dt1: f64,
    alpha_plus_sq: f64,
) -> Result<(ProtocolSchedule, PulseTrain), ProtocolError> {
    // Momentum transfer from the classical impulse dp = -V'(x0) dt:
    // p1_tilde = (3/sqrt(2)) (alpha_plus_sq / x0^4) dt1.
    let p1 = 3.0 / std::f64::consts::SQRT_2 * alpha_plus_sq / x0.powi(4) * dt1;
    let (p2, p3) = close_triangle(p1, theta)?;
    let dt2 = dt1 * theta.cos();
    let schedule = ProtocolSchedule {
        theta,
        x0,
        dt1,
        dt2,
        p1,
        p2,
        p3,
        phi_target: -phi_target.abs(),
    };
    let train = PulseTrain::new(vec![
        PulseElement::Kick {
            p_tilde: p1,
            duration: dt1,
            orientation: DipoleOrientation::Perpendicular,
        },
        PulseElement::Free { angle: theta },
        PulseElement::Kick {
            p_tilde: -p2,
            duration: dt2,
            orientation: DipoleOrientation::Parallel,
        },
        PulseElement::Free { angle: theta },
        PulseElement::Kick {
            p_tilde: p3,
            duration: dt1,
            orientation: DipoleOrientation::Perpendicular,
        },
    ])?;
    Ok((schedule, train))
}

/// Fast-gate operating point for a hardware-limited coupling: the smallest
/// `theta` keeping both fast-gate conditions satisfied by a factor of ten,
/// `theta = [(10 sqrt(|phi|))^5 / (6 alpha_plus_sq)]^(2/7)`, together with
/// `x0 = 10 sqrt(|phi|/theta)` and `dt1 = theta / 5`.
#[derive(Clone, Copy, Debug)]
pub struct FastGateDesign {
    pub theta: f64,
    pub x0: f64,
    pub dt1: f64,
    /// Leading-order gate time `2 theta`, the estimate quoted for the worked
    /// example (kick durations neglected).
    pub tau_estimate: f64,
}

pub fn fast_gate_design(phi_target: f64, alpha_plus_sq: f64) -> Result<FastGateDesign, ProtocolError> {
    if !(alpha_plus_sq > 0.0) {
        return Err(ProtocolError::NonPositiveCoupling(alpha_plus_sq));
    }
    let phi = phi_target.abs();
    let theta = ((10.0 * phi.sqrt()).powi(5) / (6.0 * alpha_plus_sq)).powf(2.0 / 7.0);
    Ok(FastGateDesign {
        theta,
        x0: 10.0 * (phi / theta).sqrt(),
        dt1: theta / 5.0,
        tau_estimate: 2.0 * theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const C0: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn compose_identity() {
        let d = Displacement::new(Complex64::new(0.3, -0.7));
        let composed = compose(d, Displacement::identity());
        assert_eq!(composed.label, d.label);
        assert_eq!(composed.accumulated_phase, 0.0);
    }

    #[test]
    fn compose_noncommutative_phase() {
        let a = Displacement::new(Complex64::new(0.0, 1.0));
        let b = Displacement::new(Complex64::new(1.0, 0.0));
        let ab = compose(a, b);
        assert_eq!(ab.label, Complex64::new(1.0, 1.0));
        assert!((ab.accumulated_phase - 1.0).abs() < 1e-15);
        let ba = compose(b, a);
        assert_eq!(ba.label, Complex64::new(1.0, 1.0));
        assert!((ba.accumulated_phase + 1.0).abs() < 1e-15);
    }

    #[test]
    fn compose_phase_additive() {
        let mut a = Displacement::new(Complex64::new(0.2, 0.1));
        a.accumulated_phase = 2.5;
        let mut b = Displacement::new(Complex64::new(-0.4, 0.9));
        b.accumulated_phase = -1.25;
        let got = compose(a, b).accumulated_phase;
        let expect = 2.5 - 1.25 + (a.label * b.label.conj()).im;
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn compose_is_associative() {
        let a = Displacement::new(Complex64::new(0.2, 0.1));
        let b = Displacement::new(Complex64::new(-0.4, 0.9));
        let c = Displacement::new(Complex64::new(1.1, -0.3));
        let left = compose(compose(a, b), c);
        let right = compose(a, compose(b, c));
        assert!((left.label - right.label).norm() < 1e-15);
        assert!((left.accumulated_phase - right.accumulated_phase).abs() < 1e-15);
    }

    #[test]
    fn rotate_quarter_turn() {
        let d = rotate(Displacement::new(Complex64::new(1.0, 0.0)), FRAC_PI_2);
        assert!((d.label - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let same = rotate(Displacement::new(Complex64::new(0.3, 0.4)), 0.0);
        assert_eq!(same.label, Complex64::new(0.3, 0.4));
    }

    #[test]
    fn rotate_composes_angles() {
        let d = Displacement::new(Complex64::new(0.6, -0.2));
        let twice = rotate(rotate(d, 0.37), 0.37);
        let once = rotate(d, 0.74);
        assert!((twice.label - once.label).norm() < 1e-15);
    }

    #[test]
    fn close_triangle_examples() {
        let (p2, p3) = close_triangle(1.0, PI / 3.0).unwrap();
        assert!((p2 - 1.0).abs() < 1e-15);
        assert_eq!(p3, 1.0);
        assert_eq!(close_triangle(0.0, 0.5).unwrap(), (0.0, 0.0));
        // Degenerate two-kick protocol at theta = pi/2.
        let (p2, p3) = close_triangle(1.0, FRAC_PI_2).unwrap();
        assert!(p2.abs() < 1e-15);
        assert_eq!(p3, 1.0);
        assert!(close_triangle(1.0, 0.0).is_err());
        assert!(close_triangle(1.0, 2.0).is_err());
    }

    fn symmetric_train(p1: f64, theta: f64) -> PulseTrain {
        let (p2, p3) = close_triangle(p1, theta).unwrap();
        PulseTrain::new(vec![
            PulseElement::Kick {
                p_tilde: p1,
                duration: 0.0,
                orientation: DipoleOrientation::Perpendicular,
            },
            PulseElement::Free { angle: theta },
            PulseElement::Kick {
                p_tilde: -p2,
                duration: 0.0,
                orientation: DipoleOrientation::Parallel,
            },
            PulseElement::Free { angle: theta },
            PulseElement::Kick {
                p_tilde: p3,
                duration: 0.0,
                orientation: DipoleOrientation::Perpendicular,
            },
        ])
        .unwrap()
    }

    #[test]
    fn reduce_symmetric_triangle() {
        let train = symmetric_train(1.0, PI / 4.0);
        let red = reduce_train(&train);
        assert!(red.net.label.norm() < CLOSURE_TOLERANCE);
        assert!((red.phi_geom + 1.0).abs() < 1e-12);
        assert!((red.total_rotation - PI / 2.0).abs() < 1e-15);
        assert!(train.is_closed());
    }

    #[test]
    fn reduce_zero_kicks() {
        let train = PulseTrain::new(vec![
            PulseElement::Kick {
                p_tilde: 0.0,
                duration: 0.1,
                orientation: DipoleOrientation::Perpendicular,
            },
            PulseElement::Free { angle: 1.3 },
            PulseElement::Kick {
                p_tilde: 0.0,
                duration: 0.2,
                orientation: DipoleOrientation::Parallel,
            },
        ])
        .unwrap();
        let red = reduce_train(&train);
        assert_eq!(red.net.label, C0);
        assert_eq!(red.phi_geom, 0.0);
    }

    /// Oriented area of the rotating-frame polygon, positive for the
    /// standard kick pattern (clockwise in (x, p) under e^{-i t} rotation).
    fn oriented_area(vertices: &[Complex64]) -> f64 {
        let n = vertices.len();
        let mut twice = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            twice += (a * b.conj()).im;
        }
        twice / 2.0
    }

    fn rotating_frame_vertices(train: &PulseTrain) -> Vec<Complex64> {
        let mut verts = vec![C0];
        let mut acc = Displacement::identity();
        let mut rotation = 0.0;
        for el in train.elements() {
            match *el {
                PulseElement::Free { angle } => rotation += angle,
                PulseElement::Kick { p_tilde, .. } => {
                    acc = compose(rotate(Displacement::kick(p_tilde), -rotation), acc);
                    verts.push(acc.label);
                }
            }
        }
        verts.pop();
        verts
    }

    #[test]
    fn geometric_phase_is_minus_twice_area() {
        // Symmetric and asymmetric closed triangles alike.
        for (p1, th) in [(1.0, PI / 4.0), (0.7, 0.3), (1.8, 1.1), (0.05, FRAC_PI_2)] {
            let train = symmetric_train(p1, th);
            let red = reduce_train(&train);
            let area = oriented_area(&rotating_frame_vertices(&train));
            assert!(
                (red.phi_geom + 2.0 * area).abs() < 1e-10,
                "p1={p1} th={th}: phi={} area={area}",
                red.phi_geom
            );
        }
        // Asymmetric closure: p3 = p1 sin(t1)/sin(t2), p2 = p1 cos(t1) + p3 cos(t2).
        let (p1, t1, t2): (f64, f64, f64) = (0.9, 0.6, 1.0);
        let p3 = p1 * t1.sin() / t2.sin();
        let p2 = p1 * t1.cos() + p3 * t2.cos();
        let train = PulseTrain::new(vec![
            PulseElement::Kick {
                p_tilde: p1,
                duration: 0.0,
                orientation: DipoleOrientation::Perpendicular,
            },
            PulseElement::Free { angle: t1 },
            PulseElement::Kick {
                p_tilde: -p2,
                duration: 0.0,
                orientation: DipoleOrientation::Parallel,
            },
            PulseElement::Free { angle: t2 },
            PulseElement::Kick {
                p_tilde: p3,
                duration: 0.0,
                orientation: DipoleOrientation::Perpendicular,
            },
        ])
        .unwrap();
        let red = reduce_train(&train);
        assert!(red.net.label.norm() < 1e-12, "net = {}", red.net.label);
        let area = oriented_area(&rotating_frame_vertices(&train));
        assert!((red.phi_geom + 2.0 * area).abs() < 1e-10);
    }

    #[test]
    fn kick_time_zero_phase() {
        assert_eq!(solve_kick_time(0.0, 0.4, 30.0, 1e6).unwrap(), 0.0);
    }

    #[test]
    fn kick_time_near_right_angle_limit() {
        // Analytic endpoint value |phi| x0^3 / 2 at theta = pi/2.
        let x0 = 25.0;
        let y_end = kick_impulse(-PI, FRAC_PI_2, x0).unwrap();
        assert!((y_end - PI * x0.powi(3) / 2.0).abs() / y_end < 1e-12);
        let y_near = kick_impulse(-PI, FRAC_PI_2 - 1e-6, x0).unwrap();
        assert!((y_near - y_end).abs() / y_end < 1e-4);
        // Continuity right through the old series switchover scale.
        let y_a = kick_impulse(-PI, FRAC_PI_2 - 1e-9, x0).unwrap();
        let y_b = kick_impulse(-PI, FRAC_PI_2 - 2e-9, x0).unwrap();
        assert!((y_a - y_b).abs() / y_end < 1e-6);
    }

    #[test]
    fn kick_time_fast_gate_asymptote() {
        let x0 = 40.0;
        let theta = 1e-4;
        let y = kick_impulse(-PI, theta, x0).unwrap();
        let asymptote = x0.powi(4) / 3.0 * (PI / theta).sqrt();
        assert!((y - asymptote).abs() / asymptote < 0.01);
    }

    #[test]
    fn kick_time_back_substitution() {
        for (phi, theta, x0) in
            [(-PI, 0.3, 40.0), (-PI, 0.62832, 20.0), (-0.5, 1.2, 15.0), (-2.0, FRAC_PI_2, 33.0)]
        {
            let y = kick_impulse(phi, theta, x0).unwrap();
            let phi_dyn = -2.0 * y / x0.powi(3) * (1.0 - theta.cos());
            let phi_geom = -4.5 * y * y / x0.powi(8) * (2.0 * theta).sin();
            assert!(
                (phi_dyn + phi_geom - -phi.abs()).abs() < 1e-10,
                "phi={phi} theta={theta}"
            );
        }
    }

    #[test]
    fn budget_matches_target_and_time() {
        let (schedule, train) = build_schedule(-PI, 0.1 * 2.0 * PI, 40.0, 5e8).unwrap();
        let budget = phase_budget(&schedule, 5e8);
        assert!((budget.phi_total - schedule.phi_target).abs() < 1e-10);
        assert!((budget.gate_time - train.total_time()).abs() < 1e-12);
        assert!(budget.phi_geom <= 0.0);
        assert!((schedule.dt2 - schedule.dt1 * schedule.theta.cos()).abs() < 1e-12);
        assert!((schedule.p2 - 2.0 * schedule.p1 * schedule.theta.cos()).abs() < 1e-12);
        assert_eq!(schedule.p3, schedule.p1);
    }

    #[test]
    fn budget_fast_gate_split() {
        // theta -> 0: phi_dyn -> -(x0/3) theta^(3/2) sqrt(|phi|), phi_geom -> phi.
        let x0 = 50.0;
        let theta = 1e-5;
        let (schedule, _) = build_schedule(-PI, theta, x0, 1e9).unwrap();
        let budget = phase_budget(&schedule, 1e9);
        let dyn_limit = -(x0 / 3.0) * theta.powf(1.5) * PI.sqrt();
        assert!((budget.phi_dyn - dyn_limit).abs() / dyn_limit.abs() < 0.01);
        assert!((budget.phi_geom + PI).abs() < 1e-2);
    }

    #[test]
    fn budget_no_kicks() {
        let schedule = ProtocolSchedule {
            theta: 0.7,
            x0: 30.0,
            dt1: 0.0,
            dt2: 0.0,
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
            phi_target: 0.0,
        };
        let budget = phase_budget(&schedule, 1e8);
        assert_eq!(budget.phi_dyn, 0.0);
        assert_eq!(budget.phi_geom, 0.0);
        assert!((budget.gate_time - 1.4).abs() < 1e-15);
    }

    #[test]
    fn built_train_is_closed_with_expected_pattern() {
        let (schedule, train) = build_schedule(-PI, 0.3, 25.0, 2e8).unwrap();
        assert!(train.is_closed());
        let kicks: Vec<_> = train
            .elements()
            .iter()
            .filter_map(|el| match *el {
                PulseElement::Kick { p_tilde, duration, orientation } => {
                    Some((p_tilde, duration, orientation))
                }
                PulseElement::Free { .. } => None,
            })
            .collect();
        assert_eq!(kicks.len(), 3);
        assert_eq!(kicks[0].2, DipoleOrientation::Perpendicular);
        assert_eq!(kicks[1].2, DipoleOrientation::Parallel);
        assert_eq!(kicks[2].2, DipoleOrientation::Perpendicular);
        assert!(kicks[0].0 > 0.0 && kicks[1].0 < 0.0 && kicks[2].0 > 0.0);
        assert!((kicks[1].1 - schedule.dt2).abs() < 1e-15);
    }

    #[test]
    fn schedule_p1_matches_scalar_recompute() {
        // Independent arithmetic for the fidelity-surface conventions:
        // theta given as 0.1 trap periods, x0 = 40.
        let theta = 0.1 * 2.0 * PI;
        let x0: f64 = 40.0;
        let alpha = 7e8;
        let (schedule, _) = build_schedule(-PI, theta, x0, alpha).unwrap();
        let c = 1.0 - theta.cos();
        let disc = (c * c + 4.5 * (2.0 * theta).sin() / (x0 * x0) * PI).sqrt();
        let y = 2.0 / 9.0 * x0.powi(5) / (2.0 * theta).sin() * (-c + disc);
        let p1 = 3.0 / std::f64::consts::SQRT_2 * y / x0.powi(4);
        assert!((schedule.p1 - p1).abs() / p1 < 1e-10);
    }

    #[test]
    fn fast_gate_design_rubidium_point() {
        let design = fast_gate_design(-PI, 1.2e9).unwrap();
        assert!((design.theta - 0.09).abs() < 0.005, "theta = {}", design.theta);
        assert!((design.x0 - 58.0).abs() < 1.0, "x0 = {}", design.x0);
        let tau_over_period = design.tau_estimate / (2.0 * PI);
        assert!((tau_over_period - 0.03).abs() < 0.005, "tau = {tau_over_period}");
    }
}
