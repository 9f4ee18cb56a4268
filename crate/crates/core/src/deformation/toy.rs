//! Low-dimensional landscapes with closed-form level-set distances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToyKind {
    /// `φ(v) = v₁`.
    Linear,
    /// `φ(v) = ½(v₁² - v₂²)`; only bands away from level 0 satisfy the
    /// gradient hypothesis.
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyLandscape {
    pub kind: ToyKind,
    pub dimension: usize,
}

impl ToyLandscape {
    pub fn new(kind: ToyKind, dimension: usize) -> Result<Self> {
        let min = match kind {
            ToyKind::Linear => 1,
            ToyKind::Saddle => 2,
        };
        if dimension < min || dimension > 3 {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: format!("{kind:?} landscape needs dimension in {min}..=3, got {dimension}"),
            });
        }
        Ok(Self { kind, dimension })
    }

    pub fn linear(dimension: usize) -> Result<Self> {
        Self::new(ToyKind::Linear, dimension)
    }

    pub fn saddle(dimension: usize) -> Result<Self> {
        Self::new(ToyKind::Saddle, dimension)
    }

    pub fn value(&self, v: &[f64]) -> f64 {
        match self.kind {
            ToyKind::Linear => v[0],
            ToyKind::Saddle => 0.5 * (v[0] * v[0] - v[1] * v[1]),
        }
    }

    pub fn gradient(&self, v: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dimension];
        match self.kind {
            ToyKind::Linear => g[0] = 1.0,
            ToyKind::Saddle => {
                g[0] = v[0];
                g[1] = -v[1];
            }
        }
        g
    }

    /// Exact distance from `v` to the level set `{φ = k}`.
    pub fn level_distance(&self, v: &[f64], k: f64) -> f64 {
        match self.kind {
            ToyKind::Linear => (v[0] - k).abs(),
            ToyKind::Saddle => hyperbola_distance(v[0].abs(), v[1].abs(), 2.0 * k),
        }
    }

    /// Exact `dist(v, φ⁻¹([a, b]))`.
    pub fn band_distance(&self, v: &[f64], a: f64, b: f64) -> f64 {
        let p = self.value(v);
        if p < a {
            self.level_distance(v, a)
        } else if p > b {
            self.level_distance(v, b)
        } else {
            0.0
        }
    }

    /// `dist(v, {φ <= a})`.
    pub fn sublevel_distance(&self, v: &[f64], a: f64) -> f64 {
        if self.value(v) <= a { 0.0 } else { self.level_distance(v, a) }
    }

    /// `dist(v, {φ >= b})`.
    pub fn superlevel_distance(&self, v: &[f64], b: f64) -> f64 {
        if self.value(v) >= b { 0.0 } else { self.level_distance(v, b) }
    }

    /// A random point with `φ = level`; free coordinates uniform in
    /// `[-spread, spread]`.
    pub fn point_at_level(&self, level: f64, spread: f64, rng: &mut impl Rng) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.dimension).map(|_| rng.random_range(-spread..=spread)).collect();
        match self.kind {
            ToyKind::Linear => v[0] = level,
            ToyKind::Saddle => {
                // x² - y² = 2·level, solved for whichever coordinate is real.
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let x2 = 2.0 * level + v[1] * v[1];
                if x2 >= 0.0 {
                    v[0] = sign * x2.sqrt();
                } else {
                    v[1] = sign * (v[0] * v[0] - 2.0 * level).sqrt();
                }
            }
        }
        v
    }
}

/// Distance from `(p, q)`, `p, q >= 0`, to the hyperbola `x² - y² = s`.
///
/// The nearest point is `(p/(1-ν), q/(1+ν))` where `ν ∈ (-1, 1)` solves
/// `p²/(1-ν)² - q²/(1+ν)² = s`; the left side is increasing in ν. When
/// `p = 0` or `q = 0` the root may sit at `ν = ±1`, where one coordinate
/// becomes free.
pub(crate) fn hyperbola_distance(p: f64, q: f64, s: f64) -> f64 {
    if s == 0.0 {
        return (p - q).abs().min(p + q) / std::f64::consts::SQRT_2;
    }
    if p == 0.0 && q == 0.0 {
        return s.abs().sqrt();
    }
    if p == 0.0 {
        // g ranges over (-inf, -q²/4).
        if s < -q * q / 4.0 {
            return ((-s).sqrt() - q).abs();
        }
        let x = (s + q * q / 4.0).sqrt();
        return (x * x + q * q / 4.0).sqrt();
    }
    if q == 0.0 {
        // g ranges over (p²/4, inf).
        if s > p * p / 4.0 {
            return (s.sqrt() - p).abs();
        }
        let y = (p * p / 4.0 - s).sqrt();
        return (p * p / 4.0 + y * y).sqrt();
    }
    // Work in α = 1 - ν or β = 1 + ν, whichever stays away from 2, so the
    // small one is resolved to full relative precision.
    let g = |alpha: f64, beta: f64| p * p / (alpha * alpha) - q * q / (beta * beta) - s;
    let (x, y) = if g(1.0, 1.0) >= 0.0 {
        // Root has ν <= 0: search β in (0, 1].
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..1100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(2.0 - mid, mid) >= 0.0 { hi = mid } else { lo = mid }
        }
        (p / (2.0 - hi), q / hi)
    } else {
        // Root has ν > 0: search α in (0, 1).
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..1100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid, 2.0 - mid) >= 0.0 { lo = mid } else { hi = mid }
        }
        (p / lo.max(f64::MIN_POSITIVE), q / (2.0 - lo))
    };
    ((x - p).powi(2) + (y - q).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force distance: dense parametrisation of both branches.
    fn sampled_hyperbola_distance(p: f64, q: f64, s: f64) -> f64 {
        let mut best = f64::INFINITY;
        let n = 200_000;
        for i in 0..=n {
            let t = -6.0 + 12.0 * i as f64 / n as f64;
            let pts = if s > 0.0 {
                let r = s.sqrt();
                [(r * t.cosh(), r * t.sinh()), (-r * t.cosh(), r * t.sinh())]
            } else {
                let r = (-s).sqrt();
                [(r * t.sinh(), r * t.cosh()), (r * t.sinh(), -r * t.cosh())]
            };
            for (x, y) in pts {
                best = best.min(((x - p).powi(2) + (y - q).powi(2)).sqrt());
            }
        }
        best
    }

    #[test]
    fn hyperbola_distance_matches_dense_sampling() {
        let cases = [
            (1.0, 0.5, 0.7),
            (0.2, 1.5, 0.7),
            (0.2, 1.5, -0.7),
            (2.0, 0.1, -1.0),
            (0.0, 0.3, 0.7),
            (0.0, 3.0, -0.5),
            (0.4, 0.0, 2.0),
            (3.0, 0.0, 1.0),
            (1e-9, 0.5, 1.0),
            (0.5, 1e-9, -1.0),
        ];
        for (p, q, s) in cases {
            let exact = hyperbola_distance(p, q, s);
            let sampled = sampled_hyperbola_distance(p, q, s);
            assert!(exact <= sampled + 1e-12, "{p} {q} {s}: {exact} > {sampled}");
            assert!(sampled - exact < 1e-6, "{p} {q} {s}: {exact} vs {sampled}");
        }
    }

    #[test]
    fn on_level_distance_is_zero() {
        let land = ToyLandscape::saddle(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for level in [-1.2, 0.4, 1.0] {
            let v = land.point_at_level(level, 1.0, &mut rng);
            assert!((land.value(&v) - level).abs() < 1e-12);
            assert!(land.level_distance(&v, level) < 1e-6);
        }
    }

    #[test]
    fn linear_band_distance() {
        let land = ToyLandscape::linear(2).unwrap();
        assert!((land.band_distance(&[-0.5, 3.0], -0.1, 0.2) - 0.4).abs() < 1e-15);
        assert_eq!(land.band_distance(&[0.0, 3.0], -0.1, 0.2), 0.0);
        assert!((land.band_distance(&[0.7, 3.0], -0.1, 0.2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for land in [ToyLandscape::linear(3).unwrap(), ToyLandscape::saddle(3).unwrap()] {
            for _ in 0..50 {
                let v: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
                let g = land.gradient(&v);
                for i in 0..3 {
                    let h = 1e-6;
                    let mut a = v.clone();
                    let mut b = v.clone();
                    a[i] += h;
                    b[i] -= h;
                    let fd = (land.value(&a) - land.value(&b)) / (2.0 * h);
                    assert!((fd - g[i]).abs() <= 1e-8 * (1.0 + g[i].abs()));
                }
            }
        }
    }

    #[test]
    fn dimension_limits() {
        assert!(ToyLandscape::saddle(1).is_err());
        assert!(ToyLandscape::linear(4).is_err());
        assert!(ToyLandscape::linear(0).is_err());
    }
}
