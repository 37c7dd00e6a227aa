//! Full gate execution on motional states and the quality metrics derived
//! from it: per-level fidelities, thermal averages, repeated-cycle density
//! matrices, and entropy.
//!
//! A gate run propagates the `|gg>` motional branch through the timed pulse
//! train with the full potentials (trap, optional quartic correction, full
//! `1/x^3` dipole term during kicks), then projects onto oscillator levels.
//! The overlap row is reported in the interaction picture of the free
//! evolution, `alpha_kk' = <k'|psi(tau)> e^{+i (k' + 1/2) tau}`, so an ideal
//! gate has `alpha_kk = e^{i phi}`.

mod validity;

pub use validity::{
    check_validity, rydberg_design_report, DesignReport, LatticeComparison, MarginKind,
    ValidityReport,
};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{
    evolve_split_step, init_fock_on_grid, project_to_fock, EngineError, FockVector, GridSpec,
    PotentialSpec, WaveFunction,
};
use crate::phasespace::{self, ProtocolError, ProtocolSchedule, PulseElement, PulseTrain};

#[derive(Debug, Error)]
pub enum GateError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Physical(#[from] crate::physical::PhysicalError),
    #[error("temperature k_BT = {0} must be strictly positive")]
    NonPositiveTemperature(f64),
    #[error("cycle count must be at least 1")]
    ZeroCycles,
}

/// How kicks are realized during propagation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KickModel {
    /// Full dynamics: trap + full dipole potential for the kick duration.
    Full,
    /// Impulse surrogate: instantaneous phase
    /// `exp(i [dp (x - x0) - V(x0) dt])`, the elementary kick operator of
    /// the linearized impulse approximation.
    ImpulseLinear,
}

/// Everything needed to run one gate.
#[derive(Clone, Copy, Debug)]
pub struct GateParams {
    /// Target controlled phase; the protocol realizes `-|phi_target|`.
    pub phi_target: f64,
    /// Free-evolution angle (radians).
    pub theta: f64,
    /// Well separation (oscillator lengths).
    pub x0: f64,
    /// First/third kick duration (units of `1/omega`).
    pub dt1: f64,
    /// Dimensionless dipole coupling.
    pub alpha_plus_sq: f64,
    /// Quartic lattice correction, active during kicks and free segments.
    pub lambda: f64,
    pub kick_model: KickModel,
    /// Grid override; `None` uses [`GateParams::default_grid`].
    pub grid: Option<GridSpec>,
    /// Fock cutoff for projections.
    pub n_max: usize,
    /// Substeps per kick segment.
    pub kick_substeps: usize,
}

pub const DEFAULT_N_MAX: usize = 25;
pub const DEFAULT_KICK_SUBSTEPS: usize = 200;

impl GateParams {
    fn base(phi_target: f64, theta: f64, x0: f64, dt1: f64, alpha_plus_sq: f64) -> Self {
        GateParams {
            phi_target,
            theta,
            x0,
            dt1,
            alpha_plus_sq,
            lambda: 0.0,
            kick_model: KickModel::Full,
            grid: None,
            n_max: DEFAULT_N_MAX,
            kick_substeps: DEFAULT_KICK_SUBSTEPS,
        }
    }

    /// Fixed kick duration; the dipole coupling is implied by the phase
    /// condition (the parameterization of the fidelity surfaces).
    pub fn from_duration(
        phi_target: f64,
        theta: f64,
        x0: f64,
        dt1: f64,
    ) -> Result<Self, GateError> {
        let alpha = phasespace::solve_kick_strength(phi_target, theta, x0, dt1)?;
        Ok(GateParams::base(phi_target, theta, x0, dt1, alpha))
    }

    /// Fixed hardware coupling; the kick duration is implied.
    pub fn from_coupling(
        phi_target: f64,
        theta: f64,
        x0: f64,
        alpha_plus_sq: f64,
    ) -> Result<Self, GateError> {
        let dt1 = phasespace::solve_kick_time(phi_target, theta, x0, alpha_plus_sq)?;
        Ok(GateParams::base(phi_target, theta, x0, dt1, alpha_plus_sq))
    }

    /// Both knobs fixed by the caller; no phase-condition consistency is
    /// enforced (a miscalibrated gate is representable).
    pub fn from_parts(
        phi_target: f64,
        theta: f64,
        x0: f64,
        dt1: f64,
        alpha_plus_sq: f64,
    ) -> Self {
        GateParams::base(phi_target, theta, x0, dt1, alpha_plus_sq)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_kick_model(mut self, model: KickModel) -> Self {
        self.kick_model = model;
        self
    }

    /// Default grid: 20 oscillator lengths either side of the well
    /// separation (clipped away from the dipole singularity), 2048 points,
    /// free-segment step of 1e-3 trap periods.
    pub fn default_grid(&self) -> Result<GridSpec, GateError> {
        let x_min = (self.x0 - 20.0).max(0.5);
        Ok(GridSpec::new(x_min, self.x0 + 20.0, 2048, 1e-3 * 2.0 * std::f64::consts::PI)?)
    }

    pub fn grid_spec(&self) -> Result<GridSpec, GateError> {
        match self.grid {
            Some(g) => {
                g.validate()?;
                Ok(g)
            }
            None => self.default_grid(),
        }
    }

    pub fn schedule(&self) -> Result<(ProtocolSchedule, PulseTrain), GateError> {
        Ok(phasespace::schedule_with_duration(
            self.phi_target,
            self.theta,
            self.x0,
            self.dt1,
            self.alpha_plus_sq,
        )?)
    }
}

/// Outcome of one gate applied to oscillator level `k`.
#[derive(Clone, Debug)]
pub struct GateOutcome {
    pub input_level: usize,
    pub final_state: WaveFunction,
    /// Interaction-picture overlap row `alpha_kk'` for `k' = 0..=n_max`.
    pub alpha_row: FockVector,
    /// Diagonal overlap `alpha_kk`.
    pub alpha_kk: Complex64,
    /// Accumulated gate phase `arg(alpha_kk)`.
    pub phi_kk: f64,
    /// Worst-case single-gate fidelity for this level.
    pub f_k: f64,
    /// Full gate time `dt1 (2 + cos theta) + 2 theta`.
    pub tau: f64,
    /// Set when boundary leakage was detected during propagation.
    pub untrusted: bool,
}

impl GateOutcome {
    /// `sum_k' |alpha_kk'|^2`, one for a complete expansion.
    pub fn completeness(&self) -> f64 {
        self.alpha_row.norm_sq()
    }
}

/// Propagate a state through the pulse train; returns the gate time.
pub fn propagate_train(
    params: &GateParams,
    train: &PulseTrain,
    psi: &mut WaveFunction,
) -> Result<f64, GateError> {
    let mut tau = 0.0;
    for el in train.elements() {
        match *el {
            PulseElement::Free { angle } => {
                let pot = PotentialSpec {
                    harmonic: true,
                    lambda: params.lambda,
                    dipole: None,
                    center: params.x0,
                };
                evolve_split_step(psi, &pot, angle, psi.grid().dt)?;
                tau += angle;
            }
            PulseElement::Kick { p_tilde, duration, orientation } => {
                match params.kick_model {
                    KickModel::Full => {
                        if duration > 0.0 {
                            let pot = PotentialSpec {
                                harmonic: true,
                                lambda: params.lambda,
                                dipole: Some((params.alpha_plus_sq, orientation)),
                                center: params.x0,
                            };
                            let dt = duration / params.kick_substeps as f64;
                            evolve_split_step(psi, &pot, duration, dt)?;
                        }
                    }
                    KickModel::ImpulseLinear => {
                        let dp = std::f64::consts::SQRT_2 * p_tilde;
                        let u0 = orientation.prefactor() * params.alpha_plus_sq
                            / params.x0.powi(3);
                        let x0 = params.x0;
                        let grid = *psi.grid();
                        for (j, a) in psi.amplitudes_mut().iter_mut().enumerate() {
                            let x = grid.point(j);
                            *a *= Complex64::cis(dp * (x - x0) - u0 * duration);
                        }
                    }
                }
                tau += duration;
            }
        }
    }
    Ok(tau)
}

/// Run the full gate on oscillator level `k`.
pub fn run_gate(params: &GateParams, k: usize) -> Result<GateOutcome, GateError> {
    let (schedule, train) = params.schedule()?;
    let grid = params.grid_spec()?;
    let mut psi = init_fock_on_grid(k, &grid, params.x0)?;
    let tau = propagate_train(params, &train, &mut psi)?;

    let n_max = params.n_max.max(k);
    let raw = project_to_fock(&psi, n_max, params.x0);
    let mut coeffs = raw.coeffs().to_vec();
    for (kk, c) in coeffs.iter_mut().enumerate() {
        *c *= Complex64::cis((kk as f64 + 0.5) * tau);
    }
    let alpha_row = FockVector::new(coeffs, raw.truncation_loss());
    let alpha_kk = alpha_row.coeff(k);
    let phi_kk = alpha_kk.arg();
    let f_k = fidelity_from_overlap(alpha_kk, schedule.phi_target);
    let untrusted = psi.leak_warning();
    Ok(GateOutcome {
        input_level: k,
        final_state: psi,
        alpha_row,
        alpha_kk,
        phi_kk,
        f_k,
        tau,
        untrusted,
    })
}

/// Worst-case fidelity over internal superpositions,
/// `F_k = (1 + |alpha_kk| cos(phi - phi_kk)) / 2`, clamped against the
/// sub-1e-9 norm drift of the propagated overlap.
pub fn fidelity_from_overlap(alpha_kk: Complex64, phi: f64) -> f64 {
    ((1.0 + alpha_kk.norm() * (phi - alpha_kk.arg()).cos()) / 2.0).clamp(0.0, 1.0)
}

/// Same minimum recomputed from a gate outcome against a target phase.
pub fn fidelity_pure(outcome: &GateOutcome, phi: f64) -> f64 {
    fidelity_from_overlap(outcome.alpha_kk, phi)
}

/// Surface-plot fidelity `(1 + Re <psi_id|psi_num>) / 2`.
pub fn fidelity_state(psi_num: &WaveFunction, psi_id: &WaveFunction) -> f64 {
    (1.0 + psi_id.inner(psi_num).re) / 2.0
}

/// Diagonal motional density operator.
#[derive(Clone, Debug)]
pub struct MotionalDensity {
    weights: Vec<f64>,
    pub label: DensityLabel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityLabel {
    Thermal { k_bt: f64 },
    Cycle { n: usize },
}

impl MotionalDensity {
    /// Canonical thermal weights `w_k = (1 - e^{-1/k_BT}) e^{-k/k_BT}`
    /// (the closed form of `2 sinh(E0/k_BT) e^{-E_k/k_BT}`), truncated at
    /// `E_k >= 5 k_BT` with at least three levels, then renormalized.
    pub fn thermal(k_bt: f64) -> Result<Self, GateError> {
        if !(k_bt > 0.0) {
            return Err(GateError::NonPositiveTemperature(k_bt));
        }
        let k_max = ((5.0 * k_bt - 0.5).ceil() as isize).max(2) as usize;
        let x = 1.0 / k_bt;
        let mut weights: Vec<f64> =
            (0..=k_max).map(|k| (-(k as f64) * x).exp() * (1.0 - (-x).exp())).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(MotionalDensity { weights, label: DensityLabel::Thermal { k_bt } })
    }

    /// Weights from a Fock expansion, renormalized; the dropped norm is
    /// returned alongside.
    pub fn from_fock(v: &FockVector, label: DensityLabel) -> (Self, f64) {
        let mut weights = v.weights();
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            for w in &mut weights {
                *w /= total;
            }
        }
        (MotionalDensity { weights, label }, v.truncation_loss())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn levels(&self) -> usize {
        self.weights.len()
    }

    /// Von Neumann entropy `-sum w ln w` in units of k_B, with 0 ln 0 = 0.
    pub fn entropy(&self) -> f64 {
        entropy(&self.weights)
    }
}

/// `-sum w ln w` with `0 ln 0 = 0`.
pub fn entropy(weights: &[f64]) -> f64 {
    -weights.iter().filter(|w| **w > 0.0).map(|w| w * w.ln()).sum::<f64>()
}

/// Thermal-state gate fidelity and the distribution it used.
#[derive(Clone, Debug)]
pub struct ThermalFidelity {
    pub k_bt: f64,
    pub fidelity: f64,
    pub density: MotionalDensity,
    pub untrusted: bool,
}

/// `F(T) = sum_k w_k(T) F_k`, with per-level gates run concurrently and
/// summed in level order.
pub fn fidelity_thermal(params: &GateParams, k_bt: f64) -> Result<ThermalFidelity, GateError> {
    let density = MotionalDensity::thermal(k_bt)?;
    let f_k = per_level_fidelities(params, density.levels() - 1)?;
    let fidelity = weighted_fidelity(density.weights(), &f_k);
    Ok(ThermalFidelity {
        k_bt,
        fidelity,
        untrusted: f_k.iter().any(|f| f.1),
        density,
    })
}

/// `(F_k, untrusted)` for levels `0..=k_max`, deterministic order.
///
/// A level whose eigenfunction does not fit on the grid gets `(NaN, true)`;
/// its fidelity is undefined rather than fatal, and poisons downstream
/// weighted sums only where that level actually carries weight.
pub fn per_level_fidelities(
    params: &GateParams,
    k_max: usize,
) -> Result<Vec<(f64, bool)>, GateError> {
    let results: Vec<Result<(f64, bool), GateError>> = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            // Levels near the cutoff need room above them for the overlap row.
            let mut p = *params;
            p.n_max = params.n_max.max(k + 5);
            match run_gate(&p, k) {
                Ok(o) => Ok((o.f_k, o.untrusted)),
                Err(GateError::Engine(EngineError::FockLeaksGrid { .. })) => {
                    Ok((f64::NAN, true))
                }
                Err(other) => Err(other),
            }
        })
        .collect();
    results.into_iter().collect()
}

/// Weighted per-level sum skipping zero-weight levels, so an undefined
/// fidelity on an unoccupied level cannot poison the total.
fn weighted_fidelity(weights: &[f64], f_k: &[(f64, bool)]) -> f64 {
    weights
        .iter()
        .zip(f_k)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, f)| w * f.0)
        .sum()
}

/// One row of a repeated-gate scan.
#[derive(Clone, Debug)]
pub struct CycleRecord {
    pub n: usize,
    pub density: MotionalDensity,
    pub entropy: f64,
    pub fidelity: f64,
    pub truncation_loss: f64,
    pub untrusted: bool,
}

/// Apply the gate `n_cycles` times to the motional ground state of the
/// `|gg>` branch, recording the diagonal density, entropy, and the
/// fidelity estimate `F(N) = sum_k |alpha_0k(N tau)|^2 F_k` after each
/// cycle. Inter-gate free phases ride along in the continuous propagation.
pub fn iterate_cycles(
    params: &GateParams,
    n_cycles: usize,
) -> Result<Vec<CycleRecord>, GateError> {
    if n_cycles == 0 {
        return Err(GateError::ZeroCycles);
    }
    let (_, train) = params.schedule()?;
    let grid = params.grid_spec()?;
    let f_k = per_level_fidelities(params, params.n_max)?;

    let mut psi = init_fock_on_grid(0, &grid, params.x0)?;
    let mut records = Vec::with_capacity(n_cycles);
    for n in 1..=n_cycles {
        propagate_train(params, &train, &mut psi)?;
        let projection = project_to_fock(&psi, params.n_max, params.x0);
        let (density, loss) = MotionalDensity::from_fock(&projection, DensityLabel::Cycle { n });
        let fidelity = weighted_fidelity(density.weights(), &f_k);
        // Losing more than 1e-4 of the norm past the Fock cutoff means the
        // diagonal density no longer represents the state.
        let untrusted = psi.leak_warning() || loss > 1e-4 || f_k.iter().any(|f| f.1);
        records.push(CycleRecord {
            n,
            entropy: density.entropy(),
            fidelity,
            truncation_loss: loss,
            untrusted,
            density,
        });
    }
    Ok(records)
}
