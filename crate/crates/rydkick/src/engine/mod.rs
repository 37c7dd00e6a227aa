//! Relative-motion quantum propagator on a uniform 1D grid.
//!
//! States live on a periodic spatial grid in oscillator units; kinetic terms
//! act in the spectral (momentum) domain. The relative coordinate of the two
//! atoms is strictly positive, so grids must keep `x_min > 0`, which also
//! keeps the `1/x^3` dipole potential finite everywhere.

mod evolve;
mod fock;

pub use evolve::evolve_split_step;
pub use fock::{evolve_harmonic_fock, init_fock_on_grid, project_to_fock};

use num_complex::Complex64;
use thiserror::Error;

use crate::physical::DipoleOrientation;

/// Edge amplitudes above this mark a wavefunction as leaking.
pub const LEAK_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("grid field {field} invalid: {reason}")]
    Grid { field: &'static str, reason: String },
    #[error("amplitude buffer length {got} does not match grid size {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("Fock state k = {k} does not fit on the grid (edge amplitude {edge:.3e})")]
    FockLeaksGrid { k: usize, edge: f64 },
    #[error("quartic coefficient lambda = {0} must be non-negative")]
    NegativeLambda(f64),
    #[error("observable requires support at x > 0 but the grid reaches x = {0}")]
    NonPositiveSupport(f64),
}

/// Uniform spatial grid with the default time step for free segments.
///
/// Points are `x_j = x_min + j dx` for `j = 0..n_points` with
/// `dx = (x_max - x_min) / n_points` (periodic convention; `x_max` itself is
/// not a grid point).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    /// Default time step for free-evolution segments.
    pub dt: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, dt: f64) -> Result<Self, EngineError> {
        let spec = GridSpec { x_min, x_max, n_points, dt };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.x_min > 0.0) {
            return Err(EngineError::Grid {
                field: "x_min",
                reason: format!("must be strictly positive, got {}", self.x_min),
            });
        }
        if !(self.x_max > self.x_min) {
            return Err(EngineError::Grid {
                field: "x_max",
                reason: format!("must exceed x_min, got {}", self.x_max),
            });
        }
        if self.n_points < 256 || !self.n_points.is_power_of_two() {
            return Err(EngineError::Grid {
                field: "n_points",
                reason: format!("must be a power of two >= 256, got {}", self.n_points),
            });
        }
        if self.spacing() > 0.1 {
            return Err(EngineError::Grid {
                field: "n_points",
                reason: format!(
                    "grid spacing {:.4} exceeds 0.1 oscillator lengths",
                    self.spacing()
                ),
            });
        }
        if !(self.dt > 0.0) {
            return Err(EngineError::Grid {
                field: "dt",
                reason: format!("must be strictly positive, got {}", self.dt),
            });
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.point(j))
    }

    /// FFT-ordered momenta `p_j = 2 pi f_j / L`.
    pub fn momenta(&self) -> Vec<f64> {
        let n = self.n_points;
        let length = self.x_max - self.x_min;
        let dp = 2.0 * std::f64::consts::PI / length;
        (0..n)
            .map(|j| {
                let f = if j < n / 2 { j as isize } else { j as isize - n as isize };
                f as f64 * dp
            })
            .collect()
    }
}

/// Relative-motion state sampled on a [`GridSpec`].
#[derive(Clone, Debug)]
pub struct WaveFunction {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
    leak_warning: bool,
}

impl WaveFunction {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self, EngineError> {
        grid.validate()?;
        if amplitudes.len() != grid.n_points {
            return Err(EngineError::LengthMismatch {
                got: amplitudes.len(),
                expected: grid.n_points,
            });
        }
        Ok(WaveFunction { grid, amplitudes, leak_warning: false })
    }

    /// Sample `f(x)` on the grid; the caller normalizes if needed.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self, EngineError> {
        let amplitudes = (0..grid.n_points).map(|j| f(grid.point(j))).collect();
        WaveFunction::new(grid, amplitudes)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Mutable amplitude access for building custom states; the caller is
    /// responsible for re-normalizing.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid.spacing() * self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amplitudes {
                *a /= n;
            }
        }
    }

    /// Quadrature inner product `<self|other>`.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        debug_assert_eq!(self.grid.n_points, other.grid.n_points);
        self.grid.spacing()
            * self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
    }

    /// Largest amplitude magnitude at the two grid edges.
    pub fn edge_amplitude(&self) -> f64 {
        let first = self.amplitudes.first().map_or(0.0, |a| a.norm());
        let last = self.amplitudes.last().map_or(0.0, |a| a.norm());
        first.max(last)
    }

    /// Sticky flag set once any propagation step sees edge amplitude above
    /// [`LEAK_THRESHOLD`].
    pub fn leak_warning(&self) -> bool {
        self.leak_warning
    }

    pub(crate) fn check_leak(&mut self) {
        if self.edge_amplitude() > LEAK_THRESHOLD {
            self.leak_warning = true;
        }
    }
}

/// Fock-space view of a state: coefficients over oscillator levels
/// `k = 0..=n_max` plus the norm missing from the truncated expansion.
#[derive(Clone, Debug)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
    truncation_loss: f64,
}

impl FockVector {
    pub fn new(coeffs: Vec<Complex64>, truncation_loss: f64) -> Self {
        FockVector { coeffs, truncation_loss }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        let loss = 1.0 - coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
        FockVector { coeffs, truncation_loss: loss }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Norm unaccounted for by the truncated expansion.
    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }
}

/// Potential terms active during a propagation segment, all centered on the
/// trap minimum `x0` of the relative coordinate.
#[derive(Clone, Copy, Debug)]
pub struct PotentialSpec {
    /// Harmonic trap `(x - x0)^2 / 2` on/off.
    pub harmonic: bool,
    /// Quartic lattice correction `-lambda (x - x0)^4 / 2`.
    pub lambda: f64,
    /// Dipole-dipole term `pref * alpha_plus_sq / x^3`.
    pub dipole: Option<(f64, DipoleOrientation)>,
    pub center: f64,
}

impl PotentialSpec {
    pub fn free() -> Self {
        PotentialSpec { harmonic: false, lambda: 0.0, dipole: None, center: 0.0 }
    }

    pub fn harmonic(center: f64) -> Self {
        PotentialSpec { harmonic: true, lambda: 0.0, dipole: None, center }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.lambda < 0.0 {
            return Err(EngineError::NegativeLambda(self.lambda));
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = x - self.center;
        let mut v = 0.0;
        if self.harmonic {
            v += 0.5 * u * u;
        }
        if self.lambda != 0.0 {
            v -= 0.5 * self.lambda * u.powi(4);
        }
        if let Some((alpha_sq, orient)) = self.dipole {
            v += orient.prefactor() * alpha_sq / (x * x * x);
        }
        v
    }
}

/// Observables measurable on a grid state.
#[derive(Clone, Copy, Debug)]
pub enum Observable {
    /// Harmonic-oscillator energy `p^2/2 + (x - center)^2/2`.
    Energy { center: f64 },
    Position,
    /// `x - center`.
    Displacement { center: f64 },
    /// Root-mean-square spread `sqrt(<x^2> - <x>^2)`.
    PositionSpread,
    DipolePotential { alpha_plus_sq: f64, orientation: DipoleOrientation },
}

/// Expectation value of `obs` in the (normalized) state `psi`.
pub fn expectation(psi: &WaveFunction, obs: Observable) -> Result<f64, EngineError> {
    let dx = psi.grid().spacing();
    let density = |f: &dyn Fn(f64) -> f64| -> f64 {
        psi.grid()
            .points()
            .zip(psi.amplitudes())
            .map(|(x, a)| f(x) * a.norm_sqr())
            .sum::<f64>()
            * dx
    };
    match obs {
        Observable::Position => Ok(density(&|x| x)),
        Observable::Displacement { center } => Ok(density(&|x| x - center)),
        Observable::PositionSpread => {
            let mean = density(&|x| x);
            let mean_sq = density(&|x| x * x);
            Ok((mean_sq - mean * mean).max(0.0).sqrt())
        }
        Observable::DipolePotential { alpha_plus_sq, orientation } => {
            if psi.grid().x_min <= 0.0 {
                return Err(EngineError::NonPositiveSupport(psi.grid().x_min));
            }
            Ok(density(&|x| orientation.prefactor() * alpha_plus_sq / (x * x * x)))
        }
        Observable::Energy { center } => {
            let potential = 0.5 * density(&|x| (x - center) * (x - center));
            Ok(potential + kinetic_energy(psi))
        }
    }
}

/// `<p^2/2>` evaluated spectrally.
fn kinetic_energy(psi: &WaveFunction) -> f64 {
    let n = psi.grid().n_points;
    let mut buf: Vec<Complex64> = psi.amplitudes().to_vec();
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    // Parseval: sum |psi|^2 dx = (dx / n) sum |psi_tilde|^2.
    let weight = psi.grid().spacing() / n as f64;
    psi.grid()
        .momenta()
        .iter()
        .zip(&buf)
        .map(|(p, a)| 0.5 * p * p * a.norm_sqr())
        .sum::<f64>()
        * weight
}
