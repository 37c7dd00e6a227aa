//! Harmonic-oscillator eigenfunctions on the grid and Fock-basis operations.

use num_complex::Complex64;

use super::{EngineError, FockVector, GridSpec, WaveFunction, LEAK_THRESHOLD};

/// Normalized Hermite functions `phi_0(u) .. phi_k_max(u)` via the
/// three-term recurrence
/// `phi_k = sqrt(2/k) u phi_{k-1} - sqrt((k-1)/k) phi_{k-2}`,
/// stable far beyond the k ~ 100 needed here.
fn hermite_functions(u: f64, k_max: usize) -> Vec<f64> {
    let mut phi = Vec::with_capacity(k_max + 1);
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-u * u / 2.0).exp();
    phi.push(phi0);
    if k_max == 0 {
        return phi;
    }
    phi.push(std::f64::consts::SQRT_2 * u * phi0);
    for k in 2..=k_max {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * u * phi[k - 1] - ((kf - 1.0) / kf).sqrt() * phi[k - 2];
        phi.push(next);
    }
    phi
}

/// The `k`-th eigenstate of the relative-motion oscillator centered at `x0`.
pub fn init_fock_on_grid(k: usize, grid: &GridSpec, x0: f64) -> Result<WaveFunction, EngineError> {
    grid.validate()?;
    let amplitudes: Vec<Complex64> = grid
        .points()
        .map(|x| Complex64::new(*hermite_functions(x - x0, k).last().unwrap(), 0.0))
        .collect();
    let psi = WaveFunction::new(*grid, amplitudes)?;
    let edge = psi.edge_amplitude();
    if edge > LEAK_THRESHOLD {
        return Err(EngineError::FockLeaksGrid { k, edge });
    }
    Ok(psi)
}

/// Project a grid state onto oscillator levels `0..=n_max` centered at `x0`.
///
/// The reported truncation loss is `|psi|^2 - sum_k |c_k|^2`.
pub fn project_to_fock(psi: &WaveFunction, n_max: usize, x0: f64) -> FockVector {
    let dx = psi.grid().spacing();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for (x, a) in psi.grid().points().zip(psi.amplitudes()) {
        let phi = hermite_functions(x - x0, n_max);
        for (c, p) in coeffs.iter_mut().zip(&phi) {
            *c += p * a;
        }
    }
    for c in &mut coeffs {
        *c *= dx;
    }
    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    FockVector::new(coeffs, psi.norm_sq() - captured)
}

/// Exact free evolution in the Fock basis: `c_k <- c_k e^{-i (k + 1/2) t}`.
pub fn evolve_harmonic_fock(v: &FockVector, t: f64) -> FockVector {
    let mut out = v.clone();
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= Complex64::cis(-(k as f64 + 0.5) * t);
    }
    out
}
