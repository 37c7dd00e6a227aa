//! Shared test oracles, independent of the library's algebra and
//! propagation paths.

#![allow(dead_code)]

use num_complex::Complex64;

/// Generalized Laguerre polynomial `L_n^{(a)}(x)` by the stable three-term
/// recurrence.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm2 = 1.0;
    let mut lm1 = 1.0 + a - x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 + a - x) * lm1 - (kf - 1.0 + a) * lm2) / kf;
        lm2 = lm1;
        lm1 = next;
    }
    lm1
}

/// Matrix element `<m|D(alpha)|n>` of the displacement operator in the
/// number basis.
pub fn displacement_element(m: usize, n: usize, alpha: Complex64) -> Complex64 {
    let x = alpha.norm_sqr();
    let gauss = (-x / 2.0).exp();
    if m >= n {
        let d = m - n;
        // sqrt(n!/m!) = prod_{j=n+1..m} 1/sqrt(j)
        let mut ratio = 1.0;
        for j in (n + 1)..=m {
            ratio /= (j as f64).sqrt();
        }
        alpha.powu(d as u32) * ratio * gauss * laguerre(n, d as f64, x)
    } else {
        let d = n - m;
        let mut ratio = 1.0;
        for j in (m + 1)..=n {
            ratio /= (j as f64).sqrt();
        }
        (-alpha.conj()).powu(d as u32) * ratio * gauss * laguerre(m, d as f64, x)
    }
}

/// Full truncated displacement matrix, `dim x dim`.
pub fn displacement_matrix(alpha: Complex64, dim: usize) -> Vec<Vec<Complex64>> {
    (0..dim)
        .map(|m| (0..dim).map(|n| displacement_element(m, n, alpha)).collect())
        .collect()
}

pub fn apply_matrix(matrix: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
        .collect()
}

/// Apply `U_ho(t) = diag(e^{-i (n + 1/2) t})` to a number-basis vector.
pub fn apply_free_evolution(v: &mut [Complex64], t: f64) {
    for (n, amp) in v.iter_mut().enumerate() {
        *amp *= Complex64::cis(-(n as f64 + 0.5) * t);
    }
}

/// Difference of two angles wrapped to `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % (2.0 * std::f64::consts::PI);
    if d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    }
    if d <= -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    d
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn displacement_matrix_is_unitary_on_low_block() {
        let d = displacement_matrix(Complex64::new(0.4, -0.7), 40);
        // Columns of a (well-truncated) unitary are orthonormal.
        for i in 0..10 {
            for j in 0..10 {
                let dot: Complex64 =
                    d.iter().map(|row| row[i].conj() * row[j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-10, "({i},{j}) -> {dot}");
            }
        }
    }

    #[test]
    fn displacement_of_vacuum_is_poisson() {
        let alpha = Complex64::new(0.0, 1.2);
        let d = displacement_matrix(alpha, 40);
        let mut expect = 1.0f64;
        for (k, row) in d.iter().take(10).enumerate() {
            if k > 0 {
                expect *= alpha.norm_sqr() / k as f64;
            }
            let poisson = expect * (-alpha.norm_sqr()).exp();
            assert!((row[0].norm_sqr() - poisson).abs() < 1e-12, "k = {k}");
        }
    }
}
