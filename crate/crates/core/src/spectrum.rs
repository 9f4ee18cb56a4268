//! Spectrum of the circulant second-difference matrix B.
//!
//! Two independent routes: the circulant closed form `2 - 2cos(2πj/M)` and a
//! dense symmetric eigensolve of the explicit matrix. Both are kept so the
//! closed form can serve as oracle for the dense path.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::b_matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub period: usize,
    /// Closed-form eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Dense-solver eigenvalues, ascending.
    pub dense_eigenvalues: Vec<f64>,
    pub lambda_min_nonzero: f64,
    pub lambda_max: f64,
    /// Largest gap between the two routes.
    pub route_gap: f64,
}

/// `2(1 - cos(2π/M))`.
pub fn lambda_min_nonzero(period: usize) -> f64 {
    2.0 * (1.0 - (2.0 * PI / period as f64).cos())
}

/// 4 for even M, `2(1 + cos(π/M))` for odd M.
pub fn lambda_max(period: usize) -> f64 {
    if period % 2 == 0 {
        4.0
    } else {
        2.0 * (1.0 + (PI / period as f64).cos())
    }
}

/// `{2 - 2cos(2πj/M) : j = 0..M-1}`, ascending.
pub fn closed_form_eigenvalues(period: usize) -> Vec<f64> {
    let m = period as f64;
    let mut ev: Vec<f64> = (0..period)
        .map(|j| 2.0 - 2.0 * (2.0 * PI * j as f64 / m).cos())
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn b_spectrum(period: usize) -> Result<Spectrum> {
    if period < 3 {
        return Err(Error::PeriodTooSmall { min: 3, got: period });
    }
    let eigenvalues = closed_form_eigenvalues(period);
    let mut dense_eigenvalues: Vec<f64> = SymmetricEigen::new(b_matrix(period))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    dense_eigenvalues.sort_by(f64::total_cmp);
    let route_gap = eigenvalues
        .iter()
        .zip(&dense_eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Spectrum {
        period,
        eigenvalues,
        dense_eigenvalues,
        lambda_min_nonzero: lambda_min_nonzero(period),
        lambda_max: lambda_max(period),
        route_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{b_quadratic_form, PeriodicSequence};

    #[test]
    fn period_six() {
        let s = b_spectrum(6).unwrap();
        let expected = [0.0, 1.0, 1.0, 3.0, 3.0, 4.0];
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
        for (a, b) in s.dense_eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((s.lambda_min_nonzero - 1.0).abs() < 1e-10);
        assert_eq!(s.lambda_max, 4.0);
    }

    #[test]
    fn period_three() {
        let s = b_spectrum(3).unwrap();
        assert!((s.lambda_min_nonzero - 3.0).abs() < 1e-10);
        assert!((s.lambda_max - 3.0).abs() < 1e-10);
        assert!((s.eigenvalues[2] - s.lambda_max).abs() < 1e-10);
    }

    #[test]
    fn rejects_small_period() {
        assert_eq!(b_spectrum(2), Err(Error::PeriodTooSmall { min: 3, got: 2 }));
    }

    #[test]
    fn constant_is_null_vector() {
        for m in 3..=12 {
            let c = PeriodicSequence::constant(m, 1.0);
            assert_eq!(c.apply_b(), PeriodicSequence::zeros(m));
            assert!(b_spectrum(m).unwrap().eigenvalues[0].abs() < 1e-12);
        }
    }

    #[test]
    fn rayleigh_bound() {
        let u = PeriodicSequence::new(vec![1.0, -3.0, 2.0, 0.5, -0.25, 7.0, 1.0]).unwrap();
        assert!(b_quadratic_form(&u) <= lambda_max(7) * u.norm_squared() + 1e-12);
    }
}
