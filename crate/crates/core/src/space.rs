//! The space of M-periodic real sequences.
//!
//! A [`PeriodicSequence`] stores one period `u_1..u_M`. Public indexing is
//! 1-based; position `n` maps to the internal slot `(n - 1) mod M`, so
//! `u_0 = u_M` and `u_{M+1} = u_1` fall out of the modular index.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PeriodicSequence {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PeriodicSequence {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<PeriodicSequence> for Vec<f64> {
    fn from(u: PeriodicSequence) -> Self {
        u.values
    }
}

impl PeriodicSequence {
    /// One period of values; the period is `values.len()`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::PeriodTooSmall { min: 1, got: 0 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn zeros(period: usize) -> Self {
        assert!(period > 0, "period must be positive");
        Self { values: vec![0.0; period] }
    }

    pub fn constant(period: usize, c: f64) -> Self {
        assert!(period > 0, "period must be positive");
        Self { values: vec![c; period] }
    }

    /// Builds a sequence from a 1-based generator `n -> u_n`.
    pub fn from_fn(period: usize, mut f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new((1..=period).map(&mut f).collect())
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn slot(&self, n: i64) -> usize {
        let m = self.values.len() as i64;
        (n - 1).rem_euclid(m) as usize
    }

    /// Wraparound access: any integer `n` is reduced modulo the period.
    pub fn at(&self, n: i64) -> f64 {
        self.values[self.slot(n)]
    }

    /// Strict 1-based access.
    pub fn get(&self, n: i64) -> Result<f64> {
        self.check_index(n)?;
        Ok(self.at(n))
    }

    pub(crate) fn check_index(&self, n: i64) -> Result<()> {
        if n < 1 || n > self.period() as i64 {
            return Err(Error::IndexOutOfRange { index: n, period: self.period() });
        }
        Ok(())
    }

    pub(crate) fn set(&mut self, n: i64, value: f64) {
        let slot = self.slot(n);
        self.values[slot] = value;
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self { values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| factor * v)
    }

    /// `self + alpha * other`; panics on period mismatch (internal use).
    pub fn axpy(&self, alpha: f64, other: &Self) -> Self {
        assert_eq!(self.period(), other.period(), "period mismatch");
        Self::from_raw(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    /// Cyclic shift: result_n = u_{n+k}.
    pub fn shifted(&self, k: i64) -> Self {
        let m = self.period() as i64;
        Self::from_raw((1..=m).map(|n| self.at(n + k)).collect())
    }

    /// Reflection n -> c - n.
    pub fn reflected(&self, c: i64) -> Self {
        let m = self.period() as i64;
        Self::from_raw((1..=m).map(|n| self.at(c - n)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Forward differences `Δu_s = u_{s+1} - u_s`, s = 1..M.
    pub fn forward_difference(&self) -> Self {
        let m = self.period() as i64;
        Self::from_raw((1..=m).map(|s| self.at(s + 1) - self.at(s)).collect())
    }

    /// `Δ²u_{n-1} = u_{n+1} - 2u_n + u_{n-1}` for 1 <= n <= M.
    pub fn second_difference(&self, n: i64) -> Result<f64> {
        self.check_index(n)?;
        Ok(self.second_difference_unchecked(n))
    }

    pub(crate) fn second_difference_unchecked(&self, n: i64) -> f64 {
        self.at(n + 1) - 2.0 * self.at(n) + self.at(n - 1)
    }

    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        if self.period() != other.period() {
            return Err(Error::PeriodMismatch { left: self.period(), right: other.period() });
        }
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `(Σ|x_j|^β)^{1/β}` for β >= 1.
    pub fn beta_norm(&self, beta: f64) -> Result<f64> {
        if !(beta >= 1.0) || !beta.is_finite() {
            return Err(Error::InvalidExponent(beta));
        }
        if beta == 2.0 {
            return Ok(self.norm());
        }
        let s: f64 = self.values.iter().map(|v| v.abs().powf(beta)).sum();
        Ok(s.powf(1.0 / beta))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// `(Bu)_s = 2u_s - u_{s+1} - u_{s-1}`.
    pub fn apply_b(&self) -> Self {
        let m = self.period() as i64;
        Self::from_raw(
            (1..=m)
                .map(|s| -self.second_difference_unchecked(s))
                .collect(),
        )
    }
}

/// The quadratic form `uᵀBu = Σ(Δu_s)²`, evaluated as a sum of squared
/// differences. [`b_quadratic_form_dense`] is the matrix route.
pub fn b_quadratic_form(u: &PeriodicSequence) -> f64 {
    u.forward_difference().norm_squared()
}

/// `uᵀBu` through the dense circulant matrix.
pub fn b_quadratic_form_dense(u: &PeriodicSequence) -> f64 {
    let b = b_matrix(u.period());
    let x = nalgebra::DVector::from_column_slice(u.values());
    (x.transpose() * &b * &x)[(0, 0)]
}

/// The M×M circulant matrix with 2 on the diagonal and -1 on the two cyclic
/// off-diagonals. For M = 1 and M = 2 the wraparound entries accumulate.
pub fn b_matrix(period: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(period, period);
    for i in 0..period {
        b[(i, i)] += 2.0;
        b[(i, (i + 1) % period)] -= 1.0;
        b[(i, (i + period - 1) % period)] -= 1.0;
    }
    b
}
