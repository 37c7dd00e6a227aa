//! Simulator and analysis toolkit for three-kick Rydberg controlled-phase
//! gates on trapped neutral atoms.
//!
//! Two atoms sit in separate harmonic wells; briefly exciting both to a
//! Rydberg level switches on a strong dipole-dipole force that kicks their
//! relative motion. Three kicks alternated with free evolution drive the
//! relative coordinate around a closed phase-space triangle, imprinting a
//! controlled phase that combines a dynamical and a geometric contribution.
//!
//! The crate provides, in oscillator units throughout:
//!
//! - [`physical`]: dimensional hardware parameters reduced to the
//!   dimensionless dipole coupling and oscillator scales;
//! - [`phasespace`]: exact displacement-operator design of the kick
//!   protocol (closure, phases, kick times) in closed form;
//! - [`engine`]: split-step Fourier propagation of the relative-motion
//!   wavefunction under the full potentials, plus Fock-basis projections;
//! - [`gate`]: gate execution and quality metrics (worst-case fidelities,
//!   thermal averages, repeated-cycle entropy, validity margins);
//! - [`sweep`], [`config`], [`cli`]: parameter sweeps over the protocol
//!   angle and well separation with CSV/contour output, driven by a strict
//!   TOML run configuration.
//!
//! The `examples/` directory holds one runnable program per capability; the
//! `rydkick` binary exposes the same machinery as `gate`, `sweep`,
//! `thermal`, `cycles`, and `validity` subcommands.

// Validation deliberately writes `!(x > 0.0)` so NaN inputs fail closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod constants;
pub mod contour;
pub mod engine;
pub mod gate;
pub mod phasespace;
pub mod physical;
pub mod sweep;
