//! Approximation-validity margins and the dimensional worked example.
//!
//! Every margin is a dimensionless ratio estimated for a ground-state start
//! using the coherent bound `R = p1_tilde`. Small-is-good margins pass below
//! 0.1, large-is-good margins pass above 10 (the factor-of-ten convention).

use crate::gate::{GateError, GateParams};
use crate::phasespace::{self, FastGateDesign};
use crate::physical::{self, DerivedScales, PhysicalConfig};

/// Direction in which a margin counts as comfortably satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginKind {
    SmallGood,
    LargeGood,
}

impl MarginKind {
    pub fn passes(self, value: f64) -> bool {
        match self {
            // Exact factor-ten design points must not fail on a final ulp.
            MarginKind::SmallGood => value <= 0.1 * (1.0 + 1e-12),
            MarginKind::LargeGood => value >= 10.0 * (1.0 - 1e-12),
        }
    }
}

/// Validity margins of the impulse, phase, and linearization conditions.
#[derive(Clone, Copy, Debug)]
pub struct ValidityReport {
    /// `<H0> / |<V_dip>|`; small keeps the kick impulsive.
    pub impulse_margin: f64,
    /// `<H0> dt1 / |phi|`; small keeps the trap out of the gate phase.
    pub phase_margin: f64,
    /// `(|<x> - x0| + <dx>) / x0`; small keeps the dipole force linear.
    pub linear_margin: f64,
    /// `x0 / sqrt(|phi| / theta)`; large is the fast-gate distance condition.
    pub fast_x0_margin: f64,
    /// `2 theta / dt1`; large is the fast-gate duration condition.
    pub fast_dt_margin: f64,
    /// `Omega / (2 alpha_plus_sq / x0^3)` when hardware is known; `inf`
    /// means unconditionally valid.
    pub rabi_margin: Option<f64>,
    /// Coherent-state excursion bound `R = p1_tilde` for a ground-state
    /// start; informational.
    pub r_bound: f64,
}

impl ValidityReport {
    /// `(name, value, kind, pass)` rows in a fixed order for printing.
    pub fn rows(&self) -> Vec<(&'static str, f64, MarginKind, bool)> {
        let mut rows = vec![
            ("impulse <H0>/|<Vdip>|", self.impulse_margin, MarginKind::SmallGood),
            ("phase <H0>dt1/|phi|", self.phase_margin, MarginKind::SmallGood),
            ("linear (|<x>-x0|+<dx>)/x0", self.linear_margin, MarginKind::SmallGood),
            ("fast-gate x0/sqrt(|phi|/theta)", self.fast_x0_margin, MarginKind::LargeGood),
            ("fast-gate 2*theta/dt1", self.fast_dt_margin, MarginKind::LargeGood),
        ];
        if let Some(rabi) = self.rabi_margin {
            rows.push(("rabi Omega/(2V+(x0))", rabi, MarginKind::LargeGood));
        }
        rows.into_iter().map(|(n, v, k)| (n, v, k, k.passes(v))).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.rows().iter().all(|r| r.3)
    }
}

/// Margins for a protocol, optionally with the Rabi frequency (in units of
/// the trap frequency) from the hardware configuration.
pub fn check_validity(params: &GateParams, rabi_freq_unit: Option<f64>) -> ValidityReport {
    let phi = params.phi_target.abs();
    let x0 = params.x0;
    let theta = params.theta;
    let dt1 = params.dt1;
    // Ground-state coherent bound: R = p1_tilde = (3/sqrt(2)) V+(x0) dt1 / x0.
    let v_plus = params.alpha_plus_sq / x0.powi(3);
    let r = 3.0 / std::f64::consts::SQRT_2 * v_plus * dt1 / x0;
    let h0 = r * r + 0.5;
    let impulse_margin = if v_plus > 0.0 { h0 / v_plus } else { f64::INFINITY };
    let phase_margin = if phi > 0.0 { h0 * dt1 / phi } else { 0.0 };
    let linear_margin = (std::f64::consts::SQRT_2 * r + 1.0 / std::f64::consts::SQRT_2) / x0;
    let fast_x0_margin =
        if phi > 0.0 { x0 / (phi / theta).sqrt() } else { f64::INFINITY };
    let fast_dt_margin = if dt1 > 0.0 { 2.0 * theta / dt1 } else { f64::INFINITY };
    let rabi_margin = rabi_freq_unit.map(|omega| {
        let shift = 2.0 * params.alpha_plus_sq / x0.powi(3);
        if shift == 0.0 { f64::INFINITY } else { omega / shift }
    });
    ValidityReport {
        impulse_margin,
        phase_margin,
        linear_margin,
        fast_x0_margin,
        fast_dt_margin,
        rabi_margin,
        r_bound: r,
    }
}

/// Margins for the same protocol moved to a lattice-limited separation.
#[derive(Clone, Debug)]
pub struct LatticeComparison {
    /// Neighbouring-site separation `(lambda/2) / a_ho` in oscillator units.
    pub x0_lattice: f64,
    pub report: ValidityReport,
}

/// Dimensional pipeline for a hardware configuration: derived scales, the
/// factor-of-ten fast-gate operating point, the consistent kick schedule,
/// its margins, and the lattice-spacing comparison.
#[derive(Clone, Debug)]
pub struct DesignReport {
    pub scales: DerivedScales,
    pub design: FastGateDesign,
    /// Kick duration solving the phase condition exactly at the design point.
    pub dt1: f64,
    /// Full gate time of that schedule.
    pub tau_full: f64,
    pub report: ValidityReport,
    pub lattice: Option<LatticeComparison>,
}

pub fn rydberg_design_report(
    cfg: &PhysicalConfig,
    phi_target: f64,
) -> Result<DesignReport, GateError> {
    let scales = physical::derive_scales(cfg)?;
    let design = phasespace::fast_gate_design(phi_target, scales.alpha_plus_sq)?;
    let (schedule, train) = phasespace::build_schedule(
        phi_target,
        design.theta,
        design.x0,
        scales.alpha_plus_sq,
    )?;
    let params = GateParams::from_parts(
        phi_target,
        design.theta,
        design.x0,
        schedule.dt1,
        scales.alpha_plus_sq,
    );
    let report = check_validity(&params, Some(scales.rabi_freq_unit));
    let lattice = cfg.lattice_wavelength.map(|wl| {
        let x0_lattice = (wl / 2.0) / scales.osc_length;
        let mut lattice_params = params;
        lattice_params.x0 = x0_lattice;
        lattice_params.dt1 = phasespace::solve_kick_time(
            phi_target,
            design.theta,
            x0_lattice,
            scales.alpha_plus_sq,
        )
        .unwrap_or(design.dt1);
        LatticeComparison {
            x0_lattice,
            report: check_validity(&lattice_params, Some(scales.rabi_freq_unit)),
        }
    });
    Ok(DesignReport {
        scales,
        design,
        dt1: schedule.dt1,
        tau_full: train.total_time(),
        report,
        lattice,
    })
}
