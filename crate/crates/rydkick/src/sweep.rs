//! Parameter sweeps over `(theta, x0)` and the deterministic CSV emitters
//! shared by all subcommands.
//!
//! Grid points are evaluated in parallel and gathered into a pre-sized table
//! in row-major order (theta outer, x0 inner), so output bytes do not depend
//! on the worker count. Floats are printed with 12 significant digits.

use rayon::prelude::*;

use crate::config::{ConfigError, RunConfig};
use crate::contour::{extract_contours, Field2d, Polyline};
use crate::gate::{check_validity, run_gate, GateOutcome, ValidityReport};
use crate::phasespace;

/// One evaluated sweep point.
#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub theta: f64,
    pub x0: f64,
    pub dt1: f64,
    pub lambda: f64,
    pub alpha_plus_sq: f64,
    /// Ground-state gate fidelity; NaN when the point failed to evaluate.
    pub f0: f64,
    pub phi_dyn: f64,
    pub phi_geom: f64,
    pub tau: f64,
    pub impulse_margin: f64,
    pub phase_margin: f64,
    pub linear_margin: f64,
    pub fast_x0_margin: f64,
    pub fast_dt_margin: f64,
    /// NaN in dimensionless mode (no Rabi frequency known).
    pub rabi_margin: f64,
    pub truncation_loss: f64,
    pub untrusted: bool,
}

impl SweepRecord {
    pub const HEADER: &'static str = "theta,x0,dt1,lambda,alpha_plus_sq,f0,phi_dyn,phi_geom,\
tau,impulse_margin,phase_margin,linear_margin,fast_x0_margin,fast_dt_margin,rabi_margin,\
truncation_loss,untrusted";

    pub fn to_csv_row(&self) -> String {
        let f = fmt_float;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            f(self.theta),
            f(self.x0),
            f(self.dt1),
            f(self.lambda),
            f(self.alpha_plus_sq),
            f(self.f0),
            f(self.phi_dyn),
            f(self.phi_geom),
            f(self.tau),
            f(self.impulse_margin),
            f(self.phase_margin),
            f(self.linear_margin),
            f(self.fast_x0_margin),
            f(self.fast_dt_margin),
            f(self.rabi_margin),
            f(self.truncation_loss),
            self.untrusted,
        )
    }
}

/// Fixed CSV float format: 12 significant digits, scientific.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Result of a full grid sweep, retaining the grid shape for contours.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub thetas: Vec<f64>,
    pub x0s: Vec<f64>,
    /// Row-major: `records[i * x0s.len() + j]` for `(thetas[i], x0s[j])`.
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn any_untrusted(&self) -> bool {
        self.records.iter().any(|r| r.untrusted)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SweepRecord::HEADER);
        out.push('\n');
        for record in &self.records {
            out.push_str(&record.to_csv_row());
            out.push('\n');
        }
        out
    }

    /// Fidelity as a field over `(theta, x0)` for contour extraction.
    pub fn fidelity_field(&self) -> Field2d {
        let nb = self.x0s.len();
        let values = (0..self.thetas.len())
            .map(|i| (0..nb).map(|j| self.records[i * nb + j].f0).collect())
            .collect();
        Field2d { axis_a: self.thetas.clone(), axis_b: self.x0s.clone(), values }
    }

    pub fn contours(&self, level: f64) -> Vec<Polyline> {
        extract_contours(&self.fidelity_field(), level)
    }
}

/// Evaluate one `(theta, x0)` point of a configured sweep.
pub fn evaluate_point(cfg: &RunConfig, theta: f64, x0: f64) -> Result<SweepRecord, ConfigError> {
    let params = cfg.gate_params_at(theta, x0)?;
    let rabi = cfg.physical.as_ref().map(|sec| {
        let hw = sec.to_physical_config();
        hw.rabi_freq / hw.trap_freq
    });
    let report = check_validity(&params, rabi);
    let (schedule, _) = params.schedule()?;
    let budget = phasespace::phase_budget(&schedule, params.alpha_plus_sq);
    let outcome: Option<GateOutcome> = run_gate(&params, 0).ok();
    Ok(build_record(&params, &report, budget, outcome))
}

fn build_record(
    params: &crate::gate::GateParams,
    report: &ValidityReport,
    budget: phasespace::PhaseBudget,
    outcome: Option<GateOutcome>,
) -> SweepRecord {
    let (f0, tau, loss, untrusted) = match &outcome {
        Some(o) => (o.f_k, o.tau, o.alpha_row.truncation_loss(), o.untrusted),
        None => (f64::NAN, budget.gate_time, f64::NAN, true),
    };
    SweepRecord {
        theta: params.theta,
        x0: params.x0,
        dt1: params.dt1,
        lambda: params.lambda,
        alpha_plus_sq: params.alpha_plus_sq,
        f0,
        phi_dyn: budget.phi_dyn,
        phi_geom: budget.phi_geom,
        tau,
        impulse_margin: report.impulse_margin,
        phase_margin: report.phase_margin,
        linear_margin: report.linear_margin,
        fast_x0_margin: report.fast_x0_margin,
        fast_dt_margin: report.fast_dt_margin,
        rabi_margin: report.rabi_margin.unwrap_or(f64::NAN),
        truncation_loss: loss,
        untrusted,
    }
}

/// Run the configured `(theta, x0)` grid in parallel.
///
/// Points whose protocol cannot be solved or propagated are recorded with
/// NaN fidelity and the untrusted flag; genuine configuration mistakes
/// abort the sweep.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, ConfigError> {
    let thetas = cfg.theta_values();
    let x0s = cfg.x0_values();
    let points: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|t| x0s.iter().map(move |x| (*t, *x)))
        .collect();
    let records: Result<Vec<SweepRecord>, ConfigError> = points
        .par_iter()
        .map(|(theta, x0)| match evaluate_point(cfg, *theta, *x0) {
            Ok(record) => Ok(record),
            Err(ConfigError::Gate(crate::gate::GateError::Protocol(_))) => {
                Ok(failed_record(cfg, *theta, *x0))
            }
            Err(other) => Err(other),
        })
        .collect();
    Ok(SweepResult { thetas, x0s, records: records? })
}

fn failed_record(cfg: &RunConfig, theta: f64, x0: f64) -> SweepRecord {
    SweepRecord {
        theta,
        x0,
        dt1: cfg.protocol.dt1.unwrap_or(f64::NAN),
        lambda: cfg.protocol.lambda,
        alpha_plus_sq: f64::NAN,
        f0: f64::NAN,
        phi_dyn: f64::NAN,
        phi_geom: f64::NAN,
        tau: f64::NAN,
        impulse_margin: f64::NAN,
        phase_margin: f64::NAN,
        linear_margin: f64::NAN,
        fast_x0_margin: f64::NAN,
        fast_dt_margin: f64::NAN,
        rabi_margin: f64::NAN,
        truncation_loss: f64::NAN,
        untrusted: true,
    }
}

/// The fast-gate reference separation `x0 = 10 sqrt(|phi| / theta)` sampled
/// on the sweep's theta axis.
pub fn reference_curve(phi_target: f64, thetas: &[f64]) -> Vec<(f64, f64)> {
    thetas
        .iter()
        .map(|t| (*t, 10.0 * (phi_target.abs() / t).sqrt()))
        .collect()
}

pub fn reference_curve_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("theta,x0_ref\n");
    for (theta, x0) in curve {
        out.push_str(&format!("{},{}\n", fmt_float(*theta), fmt_float(*x0)));
    }
    out
}

pub fn contours_csv(level: f64, polylines: &[Polyline]) -> String {
    let mut out = String::from("level,polyline,theta,x0\n");
    for (idx, line) in polylines.iter().enumerate() {
        for (theta, x0) in line {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_float(level),
                idx,
                fmt_float(*theta),
                fmt_float(*x0)
            ));
        }
    }
    out
}

/// `thermal.csv` rows: one anchor row (`k_bt = 0`, fidelity `F_0`) then one
/// row per requested temperature.
pub fn thermal_csv(rows: &[ThermalRow]) -> String {
    let mut out = String::from("theta,x0,k_bt,levels,fidelity,untrusted\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(row.theta),
            fmt_float(row.x0),
            fmt_float(row.k_bt),
            row.levels,
            fmt_float(row.fidelity),
            row.untrusted,
        ));
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct ThermalRow {
    pub theta: f64,
    pub x0: f64,
    pub k_bt: f64,
    pub levels: usize,
    pub fidelity: f64,
    pub untrusted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CycleRow {
    pub theta: f64,
    pub x0: f64,
    pub n: usize,
    pub entropy: f64,
    pub fidelity: f64,
    pub truncation_loss: f64,
    pub untrusted: bool,
}

pub fn cycles_csv(rows: &[CycleRow]) -> String {
    let mut out = String::from("theta,x0,n,entropy,fidelity,truncation_loss,untrusted\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(row.theta),
            fmt_float(row.x0),
            row.n,
            fmt_float(row.entropy),
            fmt_float(row.fidelity),
            fmt_float(row.truncation_loss),
            row.untrusted,
        ));
    }
    out
}
