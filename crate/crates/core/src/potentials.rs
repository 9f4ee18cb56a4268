//! Potentials `F(n, x) = g(x)·(ρ(n) + K)` and sampling-based condition checks.
//!
//! The periodic weight is called ρ here; the functional owns the name φ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::lambda_max;

/// Number of points used to verify `|ρ| < K` at construction.
const WEIGHT_SAMPLES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Constant,
    Cosine,
}

/// The M-periodic weight ρ: either a constant or `amplitude·cos(2πt/M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub amplitude: f64,
    pub period: usize,
}

impl WeightFunction {
    pub fn zero(period: usize) -> Self {
        Self { kind: WeightKind::Constant, amplitude: 0.0, period }
    }

    pub fn cosine(amplitude: f64, period: usize) -> Self {
        Self { kind: WeightKind::Cosine, amplitude, period }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Constant => self.amplitude,
            WeightKind::Cosine => self.amplitude * (2.0 * PI * t / self.period as f64).cos(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitude.abs()
    }

    pub fn is_constant(&self) -> bool {
        self.kind == WeightKind::Constant || self.amplitude == 0.0
    }
}

/// The scalar profile g with `F = g·(ρ + K)`. The two worked examples fold
/// their amplitude `a` into g.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `a(x²/2 + cos x - 1)`
    Example1 { a: f64 },
    /// `a(μx² + cos x - 1)`
    Example2 { a: f64, mu: f64 },
    /// `Σ c_k x^k`; an empty list is the zero profile.
    Polynomial { coefficients: Vec<f64> },
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Profile::Example1 { a } => a * (0.5 * x * x + x.cos() - 1.0),
            Profile::Example2 { a, mu } => a * (mu * x * x + x.cos() - 1.0),
            Profile::Polynomial { coefficients } => horner(coefficients, x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Profile::Example1 { a } => a * (x - x.sin()),
            Profile::Example2 { a, mu } => a * (2.0 * mu * x - x.sin()),
            Profile::Polynomial { coefficients } => horner(&derive(coefficients), x),
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match self {
            Profile::Example1 { a } => a * (1.0 - x.cos()),
            Profile::Example2 { a, mu } => a * (2.0 * mu - x.cos()),
            Profile::Polynomial { coefficients } => horner(&derive(&derive(coefficients)), x),
        }
    }

    /// Whether g(-x) = g(x). Exact for the examples, coefficient test for
    /// polynomials.
    pub fn is_even(&self) -> bool {
        match self {
            Profile::Example1 { .. } | Profile::Example2 { .. } => true,
            Profile::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .all(|(k, c)| k % 2 == 0 || *c == 0.0),
        }
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derive(coefficients: &[f64]) -> Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub profile: Profile,
    #[serde(rename = "K")]
    pub k: f64,
    pub weight: WeightFunction,
    pub period: usize,
}

impl PotentialSpec {
    /// Validates the parameter ranges of the worked examples and `|ρ| < K`.
    pub fn new(profile: Profile, k: f64, weight: WeightFunction, period: usize) -> Result<Self> {
        let spec = Self { profile, k, weight, period };
        spec.validate()?;
        Ok(spec)
    }

    pub fn example1(a: f64, k: f64, weight: WeightFunction, period: usize) -> Result<Self> {
        Self::new(Profile::Example1 { a }, k, weight, period)
    }

    pub fn example2(a: f64, mu: f64, k: f64, weight: WeightFunction, period: usize) -> Result<Self> {
        Self::new(Profile::Example2 { a, mu }, k, weight, period)
    }

    /// `F ≡ 0` on period M.
    pub fn zero(period: usize) -> Self {
        Self {
            profile: Profile::Polynomial { coefficients: vec![] },
            k: 1.0,
            weight: WeightFunction::zero(period),
            period,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.period;
        if m < 1 {
            return Err(Error::PeriodTooSmall { min: 1, got: m });
        }
        if self.weight.period != m {
            return Err(invalid("weight.period", format!("{} differs from period {m}", self.weight.period)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(invalid("K", format!("must be positive, got {}", self.k)));
        }
        if !self.weight.amplitude.is_finite() {
            return Err(invalid("weight.amplitude", "must be finite".into()));
        }
        for i in 0..WEIGHT_SAMPLES {
            let t = m as f64 * i as f64 / WEIGHT_SAMPLES as f64;
            let rho = self.weight.value(t);
            if rho.abs() >= self.k {
                return Err(invalid("weight", format!("|rho({t})| = {} is not below K = {}", rho.abs(), self.k)));
            }
        }
        let threshold = example_amplitude_threshold(m);
        match &self.profile {
            Profile::Example1 { a } => {
                if m < 3 {
                    return Err(Error::PeriodTooSmall { min: 3, got: m });
                }
                if !(*a > threshold) {
                    return Err(invalid("a", format!("must exceed {threshold} for M = {m}, got {a}")));
                }
            }
            Profile::Example2 { a, mu } => {
                if m < 6 {
                    return Err(Error::PeriodTooSmall { min: 6, got: m });
                }
                if !(*mu > 0.5) {
                    return Err(invalid("mu", format!("must exceed 1/2, got {mu}")));
                }
                if !(*a > threshold) {
                    return Err(invalid("a", format!("must exceed {threshold} for M = {m}, got {a}")));
                }
            }
            Profile::Polynomial { coefficients } => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("coefficients", "must be finite".into()));
                }
            }
        }
        Ok(())
    }

    fn factor(&self, n: i64) -> f64 {
        self.weight.value(n as f64) + self.k
    }

    /// `F(n, x)`.
    pub fn eval(&self, n: i64, x: f64) -> f64 {
        self.profile.value(x) * self.factor(n)
    }

    /// `∂F/∂x (n, x)`.
    pub fn grad(&self, n: i64, x: f64) -> f64 {
        self.profile.derivative(x) * self.factor(n)
    }

    /// `∂²F/∂x² (n, x)`.
    pub fn hess(&self, n: i64, x: f64) -> f64 {
        self.profile.second_derivative(x) * self.factor(n)
    }

    /// Whether every cyclic shift in n is a symmetry of F.
    pub fn is_autonomous(&self) -> bool {
        self.weight.is_constant()
    }
}

/// Lower bound on the amplitude a of the worked examples: 2 for even M,
/// `2(1 + cos(π/M))` for odd M.
pub fn example_amplitude_threshold(period: usize) -> f64 {
    if period % 2 == 0 {
        2.0
    } else {
        2.0 * (1.0 + (PI / period as f64).cos())
    }
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

pub fn potential_eval(p: &PotentialSpec, n: i64, x: f64) -> f64 {
    p.eval(n, x)
}

pub fn potential_grad(p: &PotentialSpec, n: i64, x: f64) -> f64 {
    p.grad(n, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionId {
    A1,
    A2,
    A3,
    W1,
    W2,
}

impl ConditionId {
    pub const ALL: [ConditionId; 5] =
        [ConditionId::A1, ConditionId::A2, ConditionId::A3, ConditionId::W1, ConditionId::W2];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSample,
    Fails,
}

/// A sampled point with `F(n, x)` and the threshold it was compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: i64,
    pub x: f64,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedConstants {
    None,
    A2 {
        alpha: f64,
        delta: f64,
        /// `max_n F''(n,0)/2`, the small-x limit of `F/x²`.
        taylor_limit: f64,
        /// `1 - cos(2π/M)`, the upper end of the admissible α range.
        alpha_bound: f64,
    },
    A3 { w1: f64, w2: f64, w3: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub constants: FittedConstants,
    pub points_checked: usize,
}

/// Uniform grid on `[-x_max, x_max]` crossed with n = 1..=M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub x_max: f64,
    pub points: usize,
}

impl SamplingGrid {
    fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points;
        (0..n).map(move |i| {
            if n == 1 {
                0.0
            } else {
                -self.x_max + 2.0 * self.x_max * i as f64 / (n - 1) as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum A3Candidate {
    Given { w1: f64, w2: f64, w3: f64 },
    /// Fit w3 and w2 for the given w1, leaving `margin` below the
    /// asymptotic growth rate.
    Auto { w1: f64, margin: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    pub grid: SamplingGrid,
    /// Radius δ for (A2).
    pub delta: f64,
    pub a3: A3Candidate,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            grid: SamplingGrid { x_max: 100.0, points: 20001 },
            delta: 1e-2,
            a3: A3Candidate::Auto { w1: 1.0, margin: 0.1 },
        }
    }
}

const ZERO_TOL: f64 = 1e-12;

pub fn check_condition(p: &PotentialSpec, id: ConditionId, params: &CheckParams) -> Result<ConditionReport> {
    if params.grid.points == 0 || !(params.grid.x_max > 0.0) {
        return Err(Error::EmptyGrid);
    }
    match id {
        ConditionId::A1 => {
            if p.period < 3 {
                return Err(Error::PeriodTooSmall { min: 3, got: p.period });
            }
            Ok(check_nonnegative_periodic(p, id, &params.grid))
        }
        ConditionId::W1 => Ok(check_nonnegative_periodic(p, id, &params.grid)),
        ConditionId::W2 => Ok(check_zero_at_origin(p)),
        ConditionId::A2 => check_a2(p, params),
        ConditionId::A3 => check_a3(p, params),
    }
}

fn report(id: ConditionId, witness: Option<Witness>, constants: FittedConstants, points: usize) -> ConditionReport {
    ConditionReport {
        id,
        verdict: if witness.is_some() { Verdict::Fails } else { Verdict::HoldsOnSample },
        witness,
        constants,
        points_checked: points,
    }
}

fn check_nonnegative_periodic(p: &PotentialSpec, id: ConditionId, grid: &SamplingGrid) -> ConditionReport {
    let m = p.period as i64;
    let mut points = 0;
    for n in 1..=m {
        for x in grid.xs() {
            points += 1;
            let value = p.eval(n, x);
            if value < -ZERO_TOL {
                return report(id, Some(Witness { n, x, value, threshold: 0.0 }), FittedConstants::None, points);
            }
            let shifted = p.eval(n + m, x);
            if (shifted - value).abs() > ZERO_TOL * (1.0 + value.abs()) {
                return report(
                    id,
                    Some(Witness { n: n + m, x, value: shifted, threshold: value }),
                    FittedConstants::None,
                    points,
                );
            }
        }
    }
    report(id, None, FittedConstants::None, points)
}

fn check_zero_at_origin(p: &PotentialSpec) -> ConditionReport {
    let m = p.period as i64;
    let witness = (1..=m)
        .map(|n| Witness { n, x: 0.0, value: p.eval(n, 0.0), threshold: 0.0 })
        .find(|w| w.value.abs() > ZERO_TOL);
    report(ConditionId::W2, witness, FittedConstants::None, p.period)
}

fn check_a2(p: &PotentialSpec, params: &CheckParams) -> Result<ConditionReport> {
    let delta = params.delta;
    if !(delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    let m = p.period as i64;
    let alpha_bound = 1.0 - (2.0 * PI / p.period as f64).cos();
    let taylor_limit = (1..=m).map(|n| 0.5 * p.hess(n, 0.0)).fold(f64::NEG_INFINITY, f64::max);

    // Fine points near the origin plus a log-spaced sweep up to delta.
    let mut radii: Vec<f64> = [1e-3, 1e-2].into_iter().filter(|r| *r <= delta).collect();
    let sweep = params.grid.points.clamp(2, 400);
    radii.extend((0..sweep).map(|i| delta * 1e-3_f64.powf(1.0 - i as f64 / (sweep - 1) as f64)));

    let mut best: Option<(f64, Witness)> = None;
    let mut points = 0;
    for n in 1..=m {
        for &r in &radii {
            for x in [r, -r] {
                points += 1;
                let value = p.eval(n, x);
                let ratio = value / (x * x);
                if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                    best = Some((ratio, Witness { n, x, value, threshold: alpha_bound * x * x }));
                }
            }
        }
    }
    let (sup_ratio, witness) = best.expect("radii nonempty");
    let fails = sup_ratio >= alpha_bound;
    let alpha = if fails { sup_ratio } else { 0.5 * (sup_ratio.max(0.0) + alpha_bound) };
    Ok(report(
        ConditionId::A2,
        fails.then_some(witness),
        FittedConstants::A2 { alpha, delta, taylor_limit, alpha_bound },
        points,
    ))
}

fn fit_a3(p: &PotentialSpec, grid: &SamplingGrid, w1: f64, margin: f64) -> (f64, f64) {
    let r = p.weight.max_abs();
    match p.profile {
        // cos x - 1 >= -2 and K - r <= ρ + K <= K + r.
        Profile::Example1 { a } => (0.5 * a * (p.k - r) - margin, 2.0 * a * (p.k + r)),
        Profile::Example2 { a, mu } => (a * mu * (p.k - r) - margin, 2.0 * a * (p.k + r)),
        Profile::Polynomial { .. } => {
            let m = p.period as i64;
            let tail = 0.5 * grid.x_max;
            let mut w3 = f64::INFINITY;
            for n in 1..=m {
                for x in grid.xs().filter(|x| x.abs() >= tail) {
                    w3 = w3.min(p.eval(n, x) / (x * x));
                }
            }
            let w3 = w3 - margin;
            let mut w2 = 0.0_f64;
            for n in 1..=m {
                for x in grid.xs().filter(|x| x.abs() >= w1) {
                    w2 = w2.max(w3 * x * x - p.eval(n, x));
                }
            }
            (w3, w2 + 1e-9)
        }
    }
}

fn check_a3(p: &PotentialSpec, params: &CheckParams) -> Result<ConditionReport> {
    let grid = &params.grid;
    let (w1, w2, w3) = match params.a3 {
        A3Candidate::Given { w1, w2, w3 } => (w1, w2, w3),
        A3Candidate::Auto { w1, margin } => {
            let (w3, w2) = fit_a3(p, grid, w1, margin);
            (w1, w2, w3)
        }
    };
    if !(w1 > 0.0) || !(w2 > 0.0) {
        return Err(invalid("a3", format!("w1 and w2 must be positive, got w1 = {w1}, w2 = {w2}")));
    }
    let half_lambda_max = lambda_max(p.period) / 2.0;
    if !(w3 > half_lambda_max) {
        return Err(Error::VacuousBound { w3, half_lambda_max });
    }
    if !(grid.x_max >= w1) {
        return Err(Error::EmptyGrid);
    }
    let m = p.period as i64;
    let count = grid.points.max(2);
    let mut points = 0;
    for n in 1..=m {
        for i in 0..count {
            let r = w1 + (grid.x_max - w1) * i as f64 / (count - 1) as f64;
            for x in [r, -r] {
                points += 1;
                let value = p.eval(n, x);
                let threshold = w3 * x * x - w2;
                if value < threshold - ZERO_TOL * (1.0 + threshold.abs()) {
                    return Ok(report(
                        ConditionId::A3,
                        Some(Witness { n, x, value, threshold }),
                        FittedConstants::A3 { w1, w2, w3 },
                        points,
                    ));
                }
            }
        }
    }
    Ok(report(ConditionId::A3, None, FittedConstants::A3 { w1, w2, w3 }, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk(a: f64) -> PotentialSpec {
        PotentialSpec::example2(a, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap()
    }

    #[test]
    fn example_values() {
        let p = desk(3.0);
        assert_eq!(p.eval(2, 0.0), 0.0);
        assert_eq!(p.grad(2, 0.0), 0.0);
        let x = 2.0 * PI;
        assert!((p.eval(1, x) - 12.0 * PI * PI).abs() < 1e-10);
        assert!((p.eval(1, x) - 118.4353).abs() < 1e-4);

        let p1 = PotentialSpec::example1(3.0, 1.0, WeightFunction::zero(6), 6).unwrap();
        let expected = 3.0 * (PI * PI / 2.0 - 2.0);
        assert!((p1.eval(4, PI) - expected).abs() < 1e-12);
        assert!((expected - 8.8044).abs() < 1e-4);
    }

    #[test]
    fn construction_ranges() {
        let w = WeightFunction::zero(6);
        assert!(PotentialSpec::example2(2.5, 0.5, 1.0, w, 6).is_err());
        assert!(PotentialSpec::example2(2.0, 1.0, 1.0, w, 6).is_err());
        assert!(PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(5), 5).is_err());
        // odd M threshold 2(1 + cos(π/7)) ≈ 3.80
        let w7 = WeightFunction::zero(7);
        assert!(PotentialSpec::example2(3.7, 1.0, 1.0, w7, 7).is_err());
        assert!(PotentialSpec::example2(3.9, 1.0, 1.0, w7, 7).is_ok());
        assert!(PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::cosine(1.0, 6), 6).is_err());
        assert!(PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::cosine(0.9, 6), 6).is_ok());
        assert!(PotentialSpec::example2(2.5, 1.0, 0.0, w, 6).is_err());
    }

    #[test]
    fn w2_holds_for_example2() {
        let r = check_condition(&desk(2.5), ConditionId::W2, &CheckParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSample);
    }

    #[test]
    fn a2_fails_with_reproducible_witness() {
        let p = desk(2.5);
        let r = check_condition(&p, ConditionId::A2, &CheckParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert_eq!(p.eval(w.n, w.x), w.value);
        assert!(w.value >= w.threshold);
        match r.constants {
            FittedConstants::A2 { taylor_limit, alpha_bound, .. } => {
                assert!((taylor_limit - 1.25).abs() < 1e-12);
                assert!((alpha_bound - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected constants {other:?}"),
        }
        // Sampled ratio at x = 1e-3 approaches the Taylor limit.
        let ratio = p.eval(1, 1e-3) / 1e-6;
        assert!((ratio - 1.25).abs() < 1e-6);
    }

    #[test]
    fn a2_can_hold_for_mu_near_half() {
        let p = PotentialSpec::example2(2.5, 0.55, 1.0, WeightFunction::zero(6), 6).unwrap();
        let r = check_condition(&p, ConditionId::A2, &CheckParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSample);
    }

    #[test]
    fn a3_given_constants_hold() {
        let params = CheckParams {
            a3: A3Candidate::Given { w1: 3.0, w2: 5.0, w3: 2.4 },
            ..CheckParams::default()
        };
        let r = check_condition(&desk(2.5), ConditionId::A3, &params).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSample);
    }

    #[test]
    fn a3_auto_fit() {
        let r = check_condition(&desk(2.5), ConditionId::A3, &CheckParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSample);
        assert_eq!(r.constants, FittedConstants::A3 { w1: 1.0, w2: 5.0, w3: 2.4 });
    }

    #[test]
    fn a3_too_small_w3_is_flagged() {
        let params = CheckParams {
            a3: A3Candidate::Given { w1: 3.0, w2: 5.0, w3: 1.9 },
            ..CheckParams::default()
        };
        assert!(matches!(
            check_condition(&desk(2.5), ConditionId::A3, &params),
            Err(Error::VacuousBound { .. })
        ));
    }

    #[test]
    fn a3_violation_witness() {
        let params = CheckParams {
            a3: A3Candidate::Given { w1: 3.0, w2: 0.5, w3: 2.4 },
            ..CheckParams::default()
        };
        let p = desk(2.5);
        let r = check_condition(&p, ConditionId::A3, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert!(p.eval(w.n, w.x) < 2.4 * w.x * w.x - 0.5);
    }

    #[test]
    fn empty_grid_is_error() {
        let params = CheckParams { grid: SamplingGrid { x_max: 1.0, points: 0 }, ..CheckParams::default() };
        assert_eq!(check_condition(&desk(2.5), ConditionId::W1, &params), Err(Error::EmptyGrid));
    }

    #[test]
    fn negative_polynomial_fails_w1() {
        let p = PotentialSpec::new(
            Profile::Polynomial { coefficients: vec![0.0, 0.0, -1.0] },
            1.0,
            WeightFunction::zero(4),
            4,
        )
        .unwrap();
        let r = check_condition(&p, ConditionId::W1, &CheckParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(p.eval(r.witness.unwrap().n, r.witness.unwrap().x) < 0.0);
    }

    #[test]
    fn polynomial_derivatives() {
        let g = Profile::Polynomial { coefficients: vec![1.0, -2.0, 0.5, 3.0] };
        let x = 0.7;
        assert!((g.value(x) - (1.0 - 1.4 + 0.5 * 0.49 + 3.0 * 0.343)).abs() < 1e-14);
        assert!((g.derivative(x) - (-2.0 + x + 9.0 * 0.49)).abs() < 1e-14);
        assert!((g.second_derivative(x) - (1.0 + 18.0 * x)).abs() < 1e-14);
        assert!(!g.is_even());
        assert!(Profile::Polynomial { coefficients: vec![0.0, 0.0, 1.0] }.is_even());
    }
}
