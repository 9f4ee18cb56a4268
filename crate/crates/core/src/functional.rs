//! Action functionals on the periodic space, their gradients, the growth
//! bounds that make them coercive from above, and mountain geometries.
//!
//! Two kinds are supported:
//!
//! * `Standard`: `φ(u) = ½Σ(Δu_s)² - Σ_s F(s, u_s)`. Its critical points are
//!   exactly the periodic solutions of `Δ²u_{n-1} + ∇F(n, u_n) = 0`.
//! * `Pinned`: `φ(u) = ½Σ(Δu_s)² - F(n*, u_{n*}) - p·Σ_{s≠n*} u_s²` with a
//!   distinguished index `n*` and penalty coefficient `p`, which defaults to
//!   the growth constant `w3`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::space::{b_quadratic_form, PeriodicSequence};
use crate::spectrum::lambda_max;
use crate::symmetry::{potential_symmetries, SymmetryOp};

/// Anything with a value and gradient on a fixed period.
pub trait Objective: Sync {
    fn period(&self) -> usize;
    fn value(&self, u: &PeriodicSequence) -> f64;
    fn gradient(&self, u: &PeriodicSequence) -> PeriodicSequence;

    /// Index symmetries known to leave the objective invariant.
    fn symmetries(&self) -> Vec<SymmetryOp> {
        vec![SymmetryOp::IDENTITY]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalKind {
    Pinned { n_star: i64, w3: f64, penalty: f64 },
    Standard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    pub potential: PotentialSpec,
}

impl FunctionalSpec {
    pub fn standard(potential: PotentialSpec) -> Self {
        Self { kind: FunctionalKind::Standard, potential }
    }

    /// The distinguished-index functional with penalty coefficient `w3`.
    pub fn pinned(potential: PotentialSpec, n_star: i64, w3: f64) -> Result<Self> {
        let m = potential.period;
        if n_star < 1 || n_star > m as i64 {
            return Err(Error::IndexOutOfRange { index: n_star, period: m });
        }
        let half = lambda_max(m) / 2.0;
        if !(w3 > half) || !w3.is_finite() {
            return Err(Error::InvalidParameter {
                name: "w3",
                reason: format!("must exceed lambda_max/2 = {half} for M = {m}, got {w3}"),
            });
        }
        Ok(Self { kind: FunctionalKind::Pinned { n_star, w3, penalty: w3 }, potential })
    }

    /// Replaces the penalty coefficient of the pinned kind.
    pub fn with_penalty(mut self, coefficient: f64) -> Result<Self> {
        match &mut self.kind {
            FunctionalKind::Pinned { penalty, .. } => {
                if !coefficient.is_finite() {
                    return Err(Error::InvalidParameter { name: "penalty", reason: "must be finite".into() });
                }
                *penalty = coefficient;
                Ok(self)
            }
            FunctionalKind::Standard => Err(Error::InvalidParameter {
                name: "penalty",
                reason: "only the pinned kind has a penalty term".into(),
            }),
        }
    }

    fn check_period(&self, u: &PeriodicSequence) {
        assert_eq!(u.period(), self.potential.period, "sequence period differs from functional period");
    }
}

impl Objective for FunctionalSpec {
    fn period(&self) -> usize {
        self.potential.period
    }

    fn value(&self, u: &PeriodicSequence) -> f64 {
        phi_eval(self, u)
    }

    fn gradient(&self, u: &PeriodicSequence) -> PeriodicSequence {
        phi_grad(self, u)
    }

    fn symmetries(&self) -> Vec<SymmetryOp> {
        let ops = potential_symmetries(&self.potential);
        match self.kind {
            FunctionalKind::Standard => ops,
            // The penalty singles out n*, so only maps fixing it survive.
            FunctionalKind::Pinned { n_star, .. } => {
                let m = self.potential.period as i64;
                ops.into_iter()
                    .filter(|op| (op.index(n_star) - n_star).rem_euclid(m) == 0)
                    .collect()
            }
        }
    }
}

pub fn phi_eval(f: &FunctionalSpec, u: &PeriodicSequence) -> f64 {
    f.check_period(u);
    let kinetic = 0.5 * b_quadratic_form(u);
    let m = u.period() as i64;
    match f.kind {
        FunctionalKind::Standard => {
            kinetic - (1..=m).map(|s| f.potential.eval(s, u.at(s))).sum::<f64>()
        }
        FunctionalKind::Pinned { n_star, penalty, .. } => {
            let g: f64 = (1..=m).filter(|&s| s != n_star).map(|s| u.at(s).powi(2)).sum();
            kinetic - f.potential.eval(n_star, u.at(n_star)) - penalty * g
        }
    }
}

/// Literal partial derivatives of [`phi_eval`].
pub fn phi_grad(f: &FunctionalSpec, u: &PeriodicSequence) -> PeriodicSequence {
    f.check_period(u);
    let mut g = u.apply_b();
    let m = u.period() as i64;
    match f.kind {
        FunctionalKind::Standard => {
            for s in 1..=m {
                g.set(s, g.at(s) - f.potential.grad(s, u.at(s)));
            }
        }
        FunctionalKind::Pinned { n_star, penalty, .. } => {
            for s in 1..=m {
                let extra = if s == n_star {
                    f.potential.grad(s, u.at(s))
                } else {
                    2.0 * penalty * u.at(s)
                };
                g.set(s, g.at(s) - extra);
            }
        }
    }
    g
}

/// Growth constants `(w1, w2, w3)` with `F(n,x) >= w3 x² - w2` for `|x| >= w1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A3Constants {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

/// `w = max{|F(n,x) - w3 x² + w2| : n, |x| <= w1}` and `w' = w + w2`, so
/// that `F(n,x) >= w3 x² - w'` for all x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants {
    pub w: f64,
    pub w_prime: f64,
    pub scan_points: usize,
}

pub fn growth_constants(p: &PotentialSpec, a3: &A3Constants, scan_points: usize) -> GrowthConstants {
    // odd count so that x = 0 is on the grid
    let count = scan_points.max(3) | 1;
    let m = p.period as i64;
    let mut w = 0.0_f64;
    for n in 1..=m {
        for i in 0..count {
            let x = -a3.w1 + 2.0 * a3.w1 * i as f64 / (count - 1) as f64;
            w = w.max((p.eval(n, x) - a3.w3 * x * x + a3.w2).abs());
        }
    }
    GrowthConstants { w, w_prime: w + a3.w2, scan_points: count }
}

/// Outcome of a sampled upper-bound check `φ(u) <= c·‖u‖² + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub samples: usize,
    /// Samples the bound actually applied to (all of them for coercivity;
    /// those with `φ >= -M1` for the P.S. implication).
    pub applicable: usize,
    pub violations: usize,
    pub coefficient: f64,
    pub offset: f64,
    pub min_slack: f64,
    pub max_slack: f64,
    pub growth: GrowthConstants,
    pub note: String,
}

fn bound_setup(f: &FunctionalSpec, a3: &A3Constants, scan_points: usize) -> Result<(f64, f64, GrowthConstants)> {
    let m = f.potential.period;
    let half = lambda_max(m) / 2.0;
    if !(a3.w3 > half) {
        return Err(Error::VacuousBound { w3: a3.w3, half_lambda_max: half });
    }
    if let FunctionalKind::Pinned { penalty, .. } = f.kind {
        if penalty < a3.w3 {
            return Err(Error::InvalidParameter {
                name: "penalty",
                reason: format!("penalty {penalty} below growth constant w3 = {}; upper bound not implied", a3.w3),
            });
        }
    }
    let growth = growth_constants(&f.potential, a3, scan_points);
    let offset = match f.kind {
        FunctionalKind::Pinned { .. } => growth.w_prime,
        FunctionalKind::Standard => m as f64 * growth.w_prime,
    };
    Ok((half - a3.w3, offset, growth))
}

/// Checks `φ(u) <= (λ_max/2 - w3)‖u‖² + w'` (pinned kind; `M·w'` for the
/// standard kind) at every sample.
pub fn coercivity_check(
    f: &FunctionalSpec,
    a3: &A3Constants,
    samples: &[PeriodicSequence],
    scan_points: usize,
) -> Result<BoundReport> {
    let (coefficient, offset, growth) = bound_setup(f, a3, scan_points)?;
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let mut max_slack = f64::NEG_INFINITY;
    for u in samples {
        let slack = coefficient * u.norm_squared() + offset - phi_eval(f, u);
        if slack < 0.0 {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
        max_slack = max_slack.max(slack);
    }
    Ok(BoundReport {
        samples: samples.len(),
        applicable: samples.len(),
        violations,
        coefficient,
        offset,
        min_slack,
        max_slack,
        growth,
        note: "upper bound uses w' = w + w2 from the growth scan".into(),
    })
}

/// For every sample with `φ(u) >= -M1` checks
/// `‖u‖² <= (w3 - λ_max/2)^{-1}(offset + M1)` with the same offset as
/// [`coercivity_check`].
pub fn ps_bound_check(
    f: &FunctionalSpec,
    a3: &A3Constants,
    m1: f64,
    samples: &[PeriodicSequence],
    scan_points: usize,
) -> Result<BoundReport> {
    let (coefficient, offset, growth) = bound_setup(f, a3, scan_points)?;
    let radius_sq = (offset + m1) / -coefficient;
    let mut violations = 0;
    let mut applicable = 0;
    let mut min_slack = f64::INFINITY;
    let mut max_slack = f64::NEG_INFINITY;
    for u in samples {
        if phi_eval(f, u) < -m1 {
            continue;
        }
        applicable += 1;
        let slack = radius_sq - u.norm_squared();
        if slack < 0.0 {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
        max_slack = max_slack.max(slack);
    }
    Ok(BoundReport {
        samples: samples.len(),
        applicable,
        violations,
        coefficient,
        offset,
        min_slack,
        max_slack,
        growth,
        note: "norm bound uses w' (times M for the standard kind) in place of w2".into(),
    })
}

/// Uniform samples in the ball of the given radius.
pub fn random_ball_samples(period: usize, count: usize, radius: f64, seed: u64) -> Vec<PeriodicSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir = random_unit(period, &mut rng);
            let r: f64 = rand::Rng::random::<f64>(&mut rng).powf(1.0 / period as f64) * radius;
            dir.scale(r)
        })
        .collect()
}

pub(crate) fn random_unit(period: usize, rng: &mut ChaCha8Rng) -> PeriodicSequence {
    loop {
        let v: Vec<f64> = (0..period).map(|_| StandardNormal.sample(rng)).collect();
        let u = PeriodicSequence::from_raw(v);
        let n = u.norm();
        if n > 1e-12 {
            return u.scale(1.0 / n);
        }
    }
}

/// Points `0`, `e1` and `e` with `φ(0) < φ(e) = φ(e1)` and
/// `‖e1‖ < r < ‖e‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MountainGeometry {
    pub e: PeriodicSequence,
    pub e1: PeriodicSequence,
    pub r: f64,
    pub level: f64,
    /// Scale of the index construction; absent for ray geometries.
    pub w4: Option<f64>,
    /// Ray direction when the geometry comes from a ray scan.
    pub direction: Option<PeriodicSequence>,
}

pub const GEOMETRY_TOL: f64 = 1e-10;

impl MountainGeometry {
    pub fn validate(&self, f: &dyn Objective) -> Result<()> {
        let (n1, n) = (self.e1.norm(), self.e.norm());
        if !(0.0 < n1 && n1 < self.r && self.r < n) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 < |e1| < r < |e|, got |e1| = {n1}, r = {}, |e| = {n}",
                self.r
            )));
        }
        let (pe, pe1) = (f.value(&self.e), f.value(&self.e1));
        if (pe - pe1).abs() > GEOMETRY_TOL {
            return Err(Error::InvalidGeometry(format!("phi(e) = {pe} differs from phi(e1) = {pe1}")));
        }
        let p0 = f.value(&PeriodicSequence::zeros(f.period()));
        if !(p0 < self.level) {
            return Err(Error::InvalidGeometry(format!("phi(0) = {p0} is not below level {}", self.level)));
        }
        Ok(())
    }
}

/// The index construction around `n*`: `e1` has `s = √w3·w4` at `n*+1` and
/// `-s` at `n*+2`; `e` additionally has `s` at `n*-1`.
pub fn step4_points(period: usize, n_star: i64, w3: f64, w4: f64) -> Result<(PeriodicSequence, PeriodicSequence)> {
    if period < 6 {
        return Err(Error::PeriodTooSmall { min: 6, got: period });
    }
    if !(w4 > 0.0) || !(w3 > 0.0) {
        return Err(Error::InvalidParameter { name: "w4", reason: format!("need w3, w4 > 0, got {w3}, {w4}") });
    }
    let s = w3.sqrt() * w4;
    let mut e1 = PeriodicSequence::zeros(period);
    e1.set(n_star + 1, s);
    e1.set(n_star + 2, -s);
    let mut e = e1.clone();
    e.set(n_star - 1, s);
    Ok((e, e1))
}

pub fn build_step4_geometry(f: &FunctionalSpec, w4: f64) -> Result<MountainGeometry> {
    let FunctionalKind::Pinned { n_star, w3, .. } = f.kind else {
        return Err(Error::InvalidParameter { name: "kind", reason: "index geometry needs the pinned kind".into() });
    };
    let (e, e1) = step4_points(f.potential.period, n_star, w3, w4)?;
    let level = w3 * w4 * w4;
    for (name, point) in [("e", &e), ("e1", &e1)] {
        let value = phi_eval(f, point);
        if (value - level).abs() > GEOMETRY_TOL {
            return Err(Error::InvalidGeometry(format!("phi({name}) = {value}, expected w3*w4^2 = {level}")));
        }
    }
    let r = (e1.norm() * e.norm()).sqrt();
    let geometry = MountainGeometry { e, e1, r, level, w4: Some(w4), direction: None };
    geometry.validate(f)?;
    Ok(geometry)
}

const RAY_SCAN_POINTS: usize = 4000;

/// Scans `t -> φ(t·direction)` on `(0, t_max]` for the first up-crossing and
/// the following down-crossing of `level` and bisects both.
pub fn find_ray_geometry(
    f: &dyn Objective,
    direction: &PeriodicSequence,
    level: f64,
    t_max: f64,
) -> Result<MountainGeometry> {
    if direction.norm() == 0.0 {
        return Err(Error::InvalidParameter { name: "direction", reason: "must be nonzero".into() });
    }
    if direction.period() != f.period() {
        return Err(Error::PeriodMismatch { left: direction.period(), right: f.period() });
    }
    let profile = |t: f64| f.value(&direction.scale(t)) - level;
    if profile(0.0) >= 0.0 {
        return Err(Error::InvalidGeometry(format!("phi(0) is not below level {level}")));
    }
    let ts: Vec<f64> = (0..=RAY_SCAN_POINTS).map(|i| t_max * i as f64 / RAY_SCAN_POINTS as f64).collect();
    let values: Vec<f64> = ts.iter().map(|&t| profile(t)).collect();
    let Some(up) = values.iter().position(|&v| v > 0.0) else {
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + level;
        return Err(Error::NoMountain { max, level });
    };
    let Some(down) = values[up..].iter().position(|&v| v < 0.0).map(|k| k + up) else {
        return Err(Error::BracketNotFound(format!("profile stays above {level} up to t = {t_max}")));
    };
    let t1 = bisect(&profile, ts[up - 1], ts[up]);
    let t2 = bisect(&profile, ts[down - 1], ts[down]);
    let e1 = direction.scale(t1);
    let e = direction.scale(t2);
    let r = (e1.norm() * e.norm()).sqrt();
    let geometry = MountainGeometry {
        level: f.value(&e1),
        e,
        e1,
        r,
        w4: None,
        direction: Some(direction.clone()),
    };
    geometry.validate(f)?;
    Ok(geometry)
}

/// Bisection on a sign change of `g` in `[lo, hi]` down to float resolution.
pub(crate) fn bisect(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() { lo } else { hi }
}

const C0_MAX_ITER: usize = 2000;

/// Lowest value of φ found on the sphere `‖u‖ = r` by projected descent from
/// `restarts` random starts; an upper bound on `inf_{‖u‖=r} φ`.
pub fn estimate_c0(f: &dyn Objective, r: f64, restarts: usize, seed: u64) -> Result<f64> {
    if !(r > 0.0) || restarts == 0 {
        return Err(Error::InvalidParameter { name: "r", reason: format!("need r > 0 and restarts >= 1, got {r}, {restarts}") });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut u = random_unit(f.period(), &mut rng).scale(r);
        let mut value = f.value(&u);
        let mut step = 1.0;
        for _ in 0..C0_MAX_ITER {
            let g = f.gradient(&u);
            let tangent = g.axpy(-g.dot(&u) / (r * r), &u);
            let tn = tangent.norm();
            if tn < 1e-12 {
                break;
            }
            let mut accepted = false;
            while step > 1e-14 {
                let trial = u.axpy(-step, &tangent);
                let trial = trial.scale(r / trial.norm());
                let tv = f.value(&trial);
                if tv < value - 0.3 * step * tn * tn {
                    u = trial;
                    value = tv;
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        best = best.min(value);
    }
    Ok(best)
}
