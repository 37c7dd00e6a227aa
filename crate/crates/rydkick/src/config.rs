//! Run configuration: a strict TOML document with four sections
//! (`[physical]`, `[protocol]`, `[numerics]`, `[analysis]`). Unknown keys are
//! rejected, ranges are `{ start, stop, count }` inline tables, and every
//! semantic error names the offending field.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::engine::GridSpec;
use crate::gate::{GateError, GateParams, KickModel};
use crate::phasespace;
use crate::physical::PhysicalConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config field {field}: {reason}")]
    Field { field: &'static str, reason: String },
    #[error(transparent)]
    Gate(#[from] GateError),
}

fn field_err(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, reason: reason.into() }
}

/// `(start, stop, count)` linspace, endpoints included.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + i as f64 * step).collect()
    }

    fn validate(&self, field: &'static str) -> Result<(), ConfigError> {
        if self.count < 2 {
            return Err(field_err(field, format!("count must be >= 2, got {}", self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(field_err(field, "endpoints must be finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    pub mass_amu: f64,
    /// Ordinary trap frequency nu in Hz; omega = 2 pi nu.
    pub trap_freq_hz: f64,
    pub rydberg_trap_freq_hz: Option<f64>,
    pub n1: u32,
    pub q1: u32,
    pub n2: u32,
    pub q2: u32,
    pub rabi_freq_hz: f64,
    pub lattice_wavelength_nm: Option<f64>,
}

impl PhysicalSection {
    pub fn to_physical_config(&self) -> PhysicalConfig {
        PhysicalConfig {
            atom_mass: self.mass_amu * crate::constants::ATOMIC_MASS_UNIT,
            trap_freq: 2.0 * PI * self.trap_freq_hz,
            rydberg_trap_freq: 2.0 * PI * self.rydberg_trap_freq_hz.unwrap_or(self.trap_freq_hz),
            n1: self.n1,
            q1: self.q1,
            n2: self.n2,
            q2: self.q2,
            rabi_freq: 2.0 * PI * self.rabi_freq_hz,
            lattice_wavelength: self.lattice_wavelength_nm.map(|nm| nm * 1e-9),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ThetaUnits {
    #[default]
    Radians,
    /// Trap periods; multiplied by 2 pi internally.
    THo,
}

impl ThetaUnits {
    fn to_radians(self, value: f64) -> f64 {
        match self {
            ThetaUnits::Radians => value,
            ThetaUnits::THo => value * 2.0 * PI,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum KickModelKey {
    #[default]
    Full,
    Impulse,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    /// Target controlled phase in radians; default -pi.
    pub phi_target: Option<f64>,
    pub theta: Option<f64>,
    pub theta_range: Option<Range>,
    #[serde(default)]
    pub theta_units: ThetaUnits,
    pub x0: Option<f64>,
    pub x0_range: Option<Range>,
    /// First-kick duration in units of 1/omega (always dimensionless time).
    pub dt1: Option<f64>,
    pub alpha_plus_sq: Option<f64>,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub kick_model: KickModelKey,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    /// Free-segment time step; default 1e-3 trap periods.
    pub dt_free: Option<f64>,
    pub kick_substeps: Option<usize>,
    pub n_max: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisMode {
    Gate,
    Sweep,
    Thermal,
    Cycles,
    Validity,
}

impl std::fmt::Display for AnalysisMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AnalysisMode::Gate => "gate",
            AnalysisMode::Sweep => "sweep",
            AnalysisMode::Thermal => "thermal",
            AnalysisMode::Cycles => "cycles",
            AnalysisMode::Validity => "validity",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub mode: Option<AnalysisMode>,
    #[serde(default)]
    pub temperatures: Vec<f64>,
    pub n_cycles: Option<usize>,
    pub contour_levels: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physical: Option<PhysicalSection>,
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RunConfig::from_toml(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.protocol.theta.is_some() && self.protocol.theta_range.is_some() {
            return Err(field_err("protocol.theta", "give either theta or theta_range, not both"));
        }
        if self.protocol.theta.is_none() && self.protocol.theta_range.is_none() {
            return Err(field_err("protocol.theta", "one of theta or theta_range is required"));
        }
        if self.protocol.x0.is_some() && self.protocol.x0_range.is_some() {
            return Err(field_err("protocol.x0", "give either x0 or x0_range, not both"));
        }
        if self.protocol.x0.is_none() && self.protocol.x0_range.is_none() {
            return Err(field_err("protocol.x0", "one of x0 or x0_range is required"));
        }
        if let Some(r) = self.protocol.theta_range {
            r.validate("protocol.theta_range")?;
        }
        if let Some(r) = self.protocol.x0_range {
            r.validate("protocol.x0_range")?;
        }
        if self.physical.is_some() && self.protocol.alpha_plus_sq.is_some() {
            return Err(field_err(
                "protocol.alpha_plus_sq",
                "conflicts with [physical]; the coupling is derived from hardware",
            ));
        }
        if self.physical.is_none()
            && self.protocol.alpha_plus_sq.is_none()
            && self.protocol.dt1.is_none()
        {
            return Err(field_err(
                "protocol.dt1",
                "dimensionless mode needs dt1 or alpha_plus_sq (or a [physical] section)",
            ));
        }
        if let Some(alpha) = self.protocol.alpha_plus_sq {
            if !(alpha > 0.0) {
                return Err(field_err("protocol.alpha_plus_sq", "must be strictly positive"));
            }
        }
        if let Some(dt1) = self.protocol.dt1 {
            if !(dt1 > 0.0) {
                return Err(field_err("protocol.dt1", "must be strictly positive"));
            }
        }
        if self.protocol.lambda < 0.0 {
            return Err(field_err("protocol.lambda", "must be non-negative"));
        }
        if let Some(x_min) = self.numerics.x_min {
            if !(x_min > 0.0) {
                return Err(field_err("numerics.x_min", "must be strictly positive"));
            }
        }
        if let Some(levels) = &self.analysis.contour_levels {
            if levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
                return Err(field_err("analysis.contour_levels", "levels must lie in (0, 1)"));
            }
        }
        for t in &self.analysis.temperatures {
            if !(*t > 0.0) {
                return Err(field_err("analysis.temperatures", "temperatures must be positive"));
            }
        }
        if let Some(cfg) = &self.physical {
            cfg.to_physical_config()
                .validate()
                .map_err(|e| field_err("physical", e.to_string()))?;
        }
        Ok(())
    }

    /// Enforce the analysis-mode key against the invoked subcommand.
    pub fn expect_mode(&self, invoked: AnalysisMode) -> Result<(), ConfigError> {
        match self.analysis.mode {
            Some(mode) if mode != invoked => Err(field_err(
                "analysis.mode",
                format!("config says {mode} but the {invoked} subcommand was invoked"),
            )),
            _ => Ok(()),
        }
    }

    pub fn phi_target(&self) -> f64 {
        self.protocol.phi_target.unwrap_or(-PI)
    }

    /// Protocol angles in radians.
    pub fn theta_values(&self) -> Vec<f64> {
        let units = self.protocol.theta_units;
        match (self.protocol.theta, self.protocol.theta_range) {
            (Some(t), _) => vec![units.to_radians(t)],
            (None, Some(r)) => r.values().into_iter().map(|t| units.to_radians(t)).collect(),
            (None, None) => unreachable!("validated"),
        }
    }

    pub fn x0_values(&self) -> Vec<f64> {
        match (self.protocol.x0, self.protocol.x0_range) {
            (Some(x), _) => vec![x],
            (None, Some(r)) => r.values(),
            (None, None) => unreachable!("validated"),
        }
    }

    pub fn require_ranges(&self) -> Result<(), ConfigError> {
        if self.protocol.theta_range.is_none() {
            return Err(field_err("protocol.theta_range", "sweep mode requires a theta range"));
        }
        if self.protocol.x0_range.is_none() {
            return Err(field_err("protocol.x0_range", "sweep mode requires an x0 range"));
        }
        Ok(())
    }

    pub fn require_single_point(&self) -> Result<(f64, f64), ConfigError> {
        match (self.protocol.theta, self.protocol.x0) {
            (Some(t), Some(x)) => Ok((self.protocol.theta_units.to_radians(t), x)),
            (None, _) => Err(field_err("protocol.theta", "this mode needs a scalar theta")),
            (_, None) => Err(field_err("protocol.x0", "this mode needs a scalar x0")),
        }
    }

    /// Hardware coupling when a `[physical]` section is present.
    pub fn derived_alpha(&self) -> Result<Option<f64>, ConfigError> {
        match &self.physical {
            None => Ok(None),
            Some(sec) => {
                let scales = crate::physical::derive_scales(&sec.to_physical_config())
                    .map_err(|e| field_err("physical", e.to_string()))?;
                Ok(Some(scales.alpha_plus_sq))
            }
        }
    }

    /// Gate parameters for one `(theta, x0)` grid point, radians in.
    pub fn gate_params_at(&self, theta: f64, x0: f64) -> Result<GateParams, ConfigError> {
        let phi = self.phi_target();
        let alpha = match self.derived_alpha()? {
            Some(a) => Some(a),
            None => self.protocol.alpha_plus_sq,
        };
        let mut params = match (self.protocol.dt1, alpha) {
            (Some(dt1), None) => GateParams::from_duration(phi, theta, x0, dt1)?,
            (None, Some(alpha)) => GateParams::from_coupling(phi, theta, x0, alpha)?,
            (Some(dt1), Some(alpha)) => {
                let y = phasespace::kick_impulse(phi, theta, x0).map_err(GateError::Protocol)?;
                if (alpha * dt1 - y).abs() > 1e-6 * y.max(f64::MIN_POSITIVE) {
                    return Err(field_err(
                        "protocol.dt1",
                        format!(
                            "inconsistent with alpha_plus_sq: alpha*dt1 = {:e} but the phase \
                             condition needs {:e}; drop one of the two",
                            alpha * dt1,
                            y
                        ),
                    ));
                }
                GateParams::from_parts(phi, theta, x0, dt1, alpha)
            }
            (None, None) => unreachable!("validated"),
        };
        params.lambda = self.protocol.lambda;
        params.kick_model = match self.protocol.kick_model {
            KickModelKey::Full => KickModel::Full,
            KickModelKey::Impulse => KickModel::ImpulseLinear,
        };
        if let Some(n_max) = self.numerics.n_max {
            params.n_max = n_max;
        }
        if let Some(sub) = self.numerics.kick_substeps {
            if sub == 0 {
                return Err(field_err("numerics.kick_substeps", "must be at least 1"));
            }
            params.kick_substeps = sub;
        }
        params.grid = self.grid_override(&params)?;
        Ok(params)
    }

    fn grid_override(&self, params: &GateParams) -> Result<Option<GridSpec>, ConfigError> {
        let n = &self.numerics;
        if n.x_min.is_none() && n.x_max.is_none() && n.n_points.is_none() && n.dt_free.is_none() {
            return Ok(None);
        }
        let default = params.default_grid()?;
        let spec = GridSpec::new(
            n.x_min.unwrap_or(default.x_min),
            n.x_max.unwrap_or(default.x_max),
            n.n_points.unwrap_or(default.n_points),
            n.dt_free.unwrap_or(default.dt),
        )
        .map_err(|e| match e {
            crate::engine::EngineError::Grid { field, reason } => ConfigError::Field {
                field: match field {
                    "x_min" => "numerics.x_min",
                    "x_max" => "numerics.x_max",
                    "n_points" => "numerics.n_points",
                    "dt" => "numerics.dt_free",
                    other => other,
                },
                reason,
            },
            other => ConfigError::Gate(GateError::Engine(other)),
        })?;
        Ok(Some(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[protocol]
theta = 0.1
theta_units = "t_ho"
x0 = 40.0
dt1 = 6.283185307179586e-4
"#;

    #[test]
    fn parses_minimal_dimensionless_config() {
        let cfg = RunConfig::from_toml(BASE).unwrap();
        assert!((cfg.phi_target() + PI).abs() < 1e-15);
        let thetas = cfg.theta_values();
        assert_eq!(thetas.len(), 1);
        assert!((thetas[0] - 0.1 * 2.0 * PI).abs() < 1e-15);
        let params = cfg.gate_params_at(thetas[0], 40.0).unwrap();
        assert!(params.alpha_plus_sq > 0.0);
        assert_eq!(params.n_max, 25);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = format!("{BASE}\n[numerics]\nn_pionts = 2048\n");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("n_pionts"), "{err}");
    }

    #[test]
    fn rejects_nonpositive_x_min() {
        let text = format!("{BASE}\n[numerics]\nx_min = -1.0\n");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("numerics.x_min"), "{err}");
    }

    #[test]
    fn rejects_missing_alpha_and_dt1() {
        let text = "[protocol]\ntheta = 0.3\nx0 = 30.0\n";
        let err = RunConfig::from_toml(text).unwrap_err();
        assert!(err.to_string().contains("protocol.dt1"), "{err}");
    }

    #[test]
    fn rejects_theta_and_range_together() {
        let text = "[protocol]\ntheta = 0.3\ntheta_range = { start = 0.1, stop = 0.2, count = 3 }\nx0 = 30.0\ndt1 = 1e-4\n";
        let err = RunConfig::from_toml(text).unwrap_err();
        assert!(err.to_string().contains("protocol.theta"), "{err}");
    }

    #[test]
    fn kick_model_key_maps_to_impulse_surrogate() {
        let text = format!("{BASE}kick_model = \"impulse\"\n");
        let cfg = RunConfig::from_toml(&text).unwrap();
        let params = cfg.gate_params_at(0.1 * 2.0 * PI, 40.0).unwrap();
        assert_eq!(params.kick_model, KickModel::ImpulseLinear);
    }

    #[test]
    fn zero_target_phase_gives_zero_coupling() {
        let text = format!("{BASE}phi_target = 0.0\n");
        let cfg = RunConfig::from_toml(&text).unwrap();
        let params = cfg.gate_params_at(0.1 * 2.0 * PI, 40.0).unwrap();
        assert_eq!(params.alpha_plus_sq, 0.0);
        assert!(params.dt1 > 0.0);
    }

    #[test]
    fn range_values_inclusive() {
        let r = Range { start: 1.0, stop: 2.0, count: 3 };
        assert_eq!(r.values(), vec![1.0, 1.5, 2.0]);
        let degenerate = Range { start: 2.0, stop: 2.0, count: 2 };
        assert_eq!(degenerate.values(), vec![2.0, 2.0]);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let text = format!("{BASE}\n[analysis]\nmode = \"sweep\"\n");
        let cfg = RunConfig::from_toml(&text).unwrap();
        assert!(cfg.expect_mode(AnalysisMode::Sweep).is_ok());
        let err = cfg.expect_mode(AnalysisMode::Gate).unwrap_err();
        assert!(err.to_string().contains("analysis.mode"), "{err}");
    }

    #[test]
    fn physical_section_conflicts_with_explicit_alpha() {
        let text = r#"
[physical]
mass_amu = 87.0
trap_freq_hz = 100e3
n1 = 50
q1 = 49
n2 = 50
q2 = 49
rabi_freq_hz = 10e6

[protocol]
theta = 0.09
x0 = 58.0
alpha_plus_sq = 1.2e9
"#;
        let err = RunConfig::from_toml(text).unwrap_err();
        assert!(err.to_string().contains("alpha_plus_sq"), "{err}");
    }

    #[test]
    fn inconsistent_dt1_alpha_pair_rejected() {
        let text = r#"
[protocol]
theta = 0.6283185307179586
x0 = 40.0
dt1 = 6.283185307179586e-4
alpha_plus_sq = 1.0e9
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        let err = cfg.gate_params_at(0.6283185307179586, 40.0).unwrap_err();
        assert!(err.to_string().contains("inconsistent"), "{err}");
    }
}
