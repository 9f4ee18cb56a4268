//! The cutoff-field deformation and its verdict harness.
//!
//! For a band `h ± 2ε` and a fixed set `D` the sets are
//!
//! * `A = φ⁻¹([h-2ε, h+2ε]) \ D`,
//! * `B = φ⁻¹([h-ε, h-ε/2])`,
//! * `C = φ⁻¹([h+ε/2, h+ε])`,
//!
//! and the cutoff is
//!
//! ```text
//! ψ(u) = [d(u,C) - d(u,B)]·d(u,X\A) / ([d(u,C) + d(u,B)]·d(u,X\A) + d(u,B)·d(u,C))
//! ```
//!
//! The field `f = ψ∇φ/‖∇φ‖²` on `A` (zero elsewhere) is integrated for time
//! `2ε`. Along any trajectory `dφ/dt = ψ`, so ψ vanishing between `B` and
//! `C` matters for whether the flow ever gets across; the harness reports
//! what happens rather than assuming it.

mod cloud;
mod integrator;
mod toy;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cloud::PointCloud;
pub use integrator::{dopri5, Events, IntegratorOptions, Solution};
pub use toy::{ToyKind, ToyLandscape};

/// Denominators of ψ below this are treated as the 0/0 corner.
pub const PSI_CLAMP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedSet {
    Empty,
    /// `φ⁻¹([lo, hi])`.
    Slab { lo: f64, hi: f64 },
    /// `{φ = level}`.
    LevelSet { level: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub h: f64,
    pub eps: f64,
    pub fixed: FixedSet,
}

impl BandSpec {
    pub fn new(h: f64, eps: f64, fixed: FixedSet) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() || !h.is_finite() {
            return Err(Error::InvalidParameter { name: "eps", reason: format!("need finite h and eps > 0, got h = {h}, eps = {eps}") });
        }
        let (lo, hi) = (h - eps / 3.0, h + eps / 3.0);
        let ok = match fixed {
            FixedSet::Empty => true,
            FixedSet::Slab { lo: a, hi: b } => a <= b && a >= lo && b <= hi,
            FixedSet::LevelSet { level } => level >= lo && level <= hi,
        };
        if !ok {
            return Err(Error::InvalidParameter {
                name: "fixed",
                reason: format!("fixed set {fixed:?} must lie in phi^-1([{lo}, {hi}])"),
            });
        }
        Ok(Self { h, eps, fixed })
    }

    /// `D = φ⁻¹([h - ε/4, h + ε/4])`, strictly inside the admissible slab.
    pub fn with_mid_slab(h: f64, eps: f64) -> Result<Self> {
        Self::new(h, eps, FixedSet::Slab { lo: h - eps / 4.0, hi: h + eps / 4.0 })
    }

    pub fn a_range(&self) -> (f64, f64) {
        (self.h - 2.0 * self.eps, self.h + 2.0 * self.eps)
    }

    pub fn b_range(&self) -> (f64, f64) {
        (self.h - self.eps, self.h - 0.5 * self.eps)
    }

    pub fn c_range(&self) -> (f64, f64) {
        (self.h + 0.5 * self.eps, self.h + self.eps)
    }

    /// Target interval of conclusion (ii).
    pub fn upper_target(&self) -> (f64, f64) {
        (self.h + self.eps, self.h + 1.5 * self.eps)
    }

    /// Target interval of conclusion (iii).
    pub fn lower_target(&self) -> (f64, f64) {
        (self.h - 1.5 * self.eps, self.h - self.eps)
    }

    pub fn in_fixed(&self, land: &ToyLandscape, v: &[f64]) -> bool {
        let p = land.value(v);
        match self.fixed {
            FixedSet::Empty => false,
            FixedSet::Slab { lo, hi } => lo <= p && p <= hi,
            FixedSet::LevelSet { level } => p == level,
        }
    }

    pub fn in_a(&self, land: &ToyLandscape, v: &[f64]) -> bool {
        let (lo, hi) = self.a_range();
        let p = land.value(v);
        lo <= p && p <= hi && !self.in_fixed(land, v)
    }

    fn dist_fixed(&self, land: &ToyLandscape, v: &[f64]) -> f64 {
        match self.fixed {
            FixedSet::Empty => f64::INFINITY,
            FixedSet::Slab { lo, hi } => land.band_distance(v, lo, hi),
            FixedSet::LevelSet { level } => land.level_distance(v, level),
        }
    }

    pub fn dist_b(&self, land: &ToyLandscape, v: &[f64]) -> f64 {
        let (lo, hi) = self.b_range();
        land.band_distance(v, lo, hi)
    }

    pub fn dist_c(&self, land: &ToyLandscape, v: &[f64]) -> f64 {
        let (lo, hi) = self.c_range();
        land.band_distance(v, lo, hi)
    }

    /// `dist(v, X \ A)`, the complement taken with its closure.
    pub fn dist_outside_a(&self, land: &ToyLandscape, v: &[f64]) -> f64 {
        let (lo, hi) = self.a_range();
        land.sublevel_distance(v, lo)
            .min(land.superlevel_distance(v, hi))
            .min(self.dist_fixed(land, v))
    }

    /// Event levels: every value where a distance function has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a0, a1) = self.a_range();
        let (b0, b1) = self.b_range();
        let (c0, c1) = self.c_range();
        let mut levels = vec![a0, b0, b1, c0, c1, a1];
        match self.fixed {
            FixedSet::Empty => {}
            FixedSet::Slab { lo, hi } => levels.extend([lo, hi]),
            FixedSet::LevelSet { level } => levels.push(level),
        }
        levels
    }
}

pub fn psi_eval(land: &ToyLandscape, band: &BandSpec, v: &[f64]) -> f64 {
    let db = band.dist_b(land, v);
    let dc = band.dist_c(land, v);
    let dx = band.dist_outside_a(land, v);
    let den = (dc + db) * dx + db * dc;
    if den < PSI_CLAMP {
        return 0.0;
    }
    (dc - db) * dx / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldValue {
    pub vector: Vec<f64>,
    /// `‖∇φ(v)‖ < 2ε` inside `A`: the bound `‖f‖ <= 1/(2ε)` is not
    /// guaranteed there.
    pub hypothesis_violated: bool,
}

pub fn vector_field_eval(land: &ToyLandscape, band: &BandSpec, v: &[f64]) -> FieldValue {
    if !band.in_a(land, v) {
        return FieldValue { vector: vec![0.0; v.len()], hypothesis_violated: false };
    }
    let g = land.gradient(v);
    let g2: f64 = g.iter().map(|x| x * x).sum();
    let psi = psi_eval(land, band, v);
    let hypothesis_violated = g2.sqrt() < 2.0 * band.eps;
    let vector = if g2 > 0.0 { g.iter().map(|x| psi * x / g2).collect() } else { vec![0.0; v.len()] };
    FieldValue { vector, hypothesis_violated }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub samples: usize,
    pub min_gradient_norm: f64,
    pub required: f64,
    pub holds: bool,
}

/// Samples the band `φ⁻¹([h-2ε, h+2ε])` and checks `‖∇φ‖ >= 2ε`.
pub fn check_hypothesis(land: &ToyLandscape, band: &BandSpec, samples: usize, seed: u64) -> HypothesisReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = band.a_range();
    let mut min = f64::INFINITY;
    for _ in 0..samples {
        let v = land.point_at_level(rng.random_range(lo..=hi), SPREAD, &mut rng);
        let n = land.gradient(&v).iter().map(|x| x * x).sum::<f64>().sqrt();
        min = min.min(n);
    }
    let required = 2.0 * band.eps;
    HypothesisReport { samples, min_gradient_norm: min, required, holds: min >= required }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub start: Vec<f64>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub phi: Vec<f64>,
    /// The predicted rate of change of φ: ψ for the cutoff flow, `-χ` for
    /// the descent baseline.
    pub psi: Vec<f64>,
    /// `⟨∇φ(σ), f(σ)⟩` at each grid point.
    pub dphi_dt: Vec<f64>,
    /// `∫₀ᵗ ψ(σ(s)) ds`, integrated alongside the state.
    pub psi_integral: Vec<f64>,
    pub error_estimate: f64,
    /// `max |dφ/dt - ψ|` over the grid.
    pub identity_defect: f64,
    /// `max |φ(σ(t)) - φ(σ(0)) - ∫ψ|` over the grid.
    pub integrated_defect: f64,
}

impl FlowTrace {
    pub fn end(&self) -> &[f64] {
        self.states.last().expect("trace has at least its start")
    }

    pub fn phi_end(&self) -> f64 {
        *self.phi.last().expect("trace has at least its start")
    }
}

fn run_flow(
    land: &ToyLandscape,
    field: &(dyn Fn(&[f64]) -> (Vec<f64>, f64) + Sync),
    v: &[f64],
    duration: f64,
    opts: &IntegratorOptions,
    levels: &[f64],
) -> Result<FlowTrace> {
    if v.len() != land.dimension {
        return Err(Error::InvalidParameter { name: "point", reason: format!("expected dimension {}, got {}", land.dimension, v.len()) });
    }
    let d = land.dimension;
    let rhs = |y: &[f64]| {
        let (mut f, rate) = field(&y[..d]);
        f.push(rate);
        f
    };
    let value = |y: &[f64]| land.value(&y[..d]);
    let events = Events { function: &value, levels };
    let mut y0 = v.to_vec();
    y0.push(0.0);
    let sol = dopri5(&rhs, &y0, duration, opts, Some(&events))?;
    let phi0 = land.value(v);
    let mut trace = FlowTrace {
        start: v.to_vec(),
        times: sol.times,
        states: Vec::with_capacity(sol.states.len()),
        phi: Vec::new(),
        psi: Vec::new(),
        dphi_dt: Vec::new(),
        psi_integral: Vec::new(),
        error_estimate: sol.max_error * opts.atol,
        identity_defect: 0.0,
        integrated_defect: 0.0,
    };
    for y in sol.states {
        let x = &y[..d];
        let (f, rate) = field(x);
        let g = land.gradient(x);
        let slope: f64 = g.iter().zip(&f).map(|(a, b)| a * b).sum();
        let phi = land.value(x);
        trace.identity_defect = trace.identity_defect.max((slope - rate).abs());
        trace.integrated_defect = trace.integrated_defect.max((phi - phi0 - y[d]).abs());
        trace.phi.push(phi);
        trace.psi.push(rate);
        trace.dphi_dt.push(slope);
        trace.psi_integral.push(y[d]);
        trace.states.push(x.to_vec());
    }
    Ok(trace)
}

/// Default integrator settings for a band: `atol = 1e-9`, max step `ε/10`.
pub fn band_integrator(eps: f64) -> IntegratorOptions {
    IntegratorOptions::with_max_step(eps / 10.0)
}

/// Integrates `σ' = f(σ)` from `v` for `duration`; `η(v)` is the end
/// state when `duration = 2ε`.
pub fn flow(land: &ToyLandscape, band: &BandSpec, v: &[f64], duration: f64, opts: &IntegratorOptions) -> Result<FlowTrace> {
    let field = |x: &[f64]| (vector_field_eval(land, band, x).vector, psi_eval(land, band, x));
    run_flow(land, &field, v, duration, opts, &band.breakpoints())
}

/// Cutoff of the classical construction: 1 on `φ⁻¹([c-ε, c+ε])`, 0 off
/// `φ⁻¹([c-2ε, c+2ε])`, ratio of distances in between.
pub fn willem_cutoff(land: &ToyLandscape, c: f64, eps: f64, v: &[f64]) -> f64 {
    let outer = land.sublevel_distance(v, c - 2.0 * eps).min(land.superlevel_distance(v, c + 2.0 * eps));
    let inner = land.band_distance(v, c - eps, c + eps);
    let den = outer + inner;
    if den < PSI_CLAMP { 0.0 } else { outer / den }
}

/// Descent flow `σ' = -χ(σ)∇φ/‖∇φ‖²`.
pub fn willem_flow(land: &ToyLandscape, c: f64, eps: f64, v: &[f64], duration: f64, opts: &IntegratorOptions) -> Result<FlowTrace> {
    let field = |x: &[f64]| {
        let chi = willem_cutoff(land, c, eps, x);
        let g = land.gradient(x);
        let g2: f64 = g.iter().map(|a| a * a).sum();
        if chi == 0.0 || g2 == 0.0 {
            return (vec![0.0; x.len()], 0.0);
        }
        (g.iter().map(|a| -chi * a / g2).collect(), -chi)
    };
    let levels = [c - 2.0 * eps, c - eps, c + eps, c + 2.0 * eps];
    run_flow(land, &field, v, duration, opts, &levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowWitness {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub phi_start: f64,
    pub phi_end: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConclusionVerdict {
    pub conclusion: String,
    pub outcome: Outcome,
    /// Bounds the end value has to respect, when the conclusion is an
    /// inclusion of level sets; `None` on a side means unbounded.
    pub target_lo: Option<f64>,
    pub target_hi: Option<f64>,
    pub samples: usize,
    pub failures: usize,
    pub witnesses: Vec<FlowWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationVerdict {
    pub landscape: ToyLandscape,
    pub band: BandSpec,
    pub duration: f64,
    pub tolerance: f64,
    pub hypothesis: HypothesisReport,
    pub conclusions: Vec<ConclusionVerdict>,
}

impl DeformationVerdict {
    pub fn conclusion(&self, name: &str) -> Option<&ConclusionVerdict> {
        self.conclusions.iter().find(|c| c.conclusion == name)
    }
}

/// Start points for the conclusions of the band deformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSets {
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    /// Points of `X \ A`: far field on both sides and points of `D`.
    pub outside: Vec<Vec<f64>>,
}

const SPREAD: f64 = 1.0;

fn draw_range(land: &ToyLandscape, (lo, hi): (f64, f64), count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let level = if lo == hi { lo } else { rng.random_range(lo..=hi) };
            land.point_at_level(level, SPREAD, rng)
        })
        .collect()
}

/// Draws `per_set` points in each of `B`, `C` and `X \ A`. The last set
/// mixes the two far-field bands `[h-4ε, h-2ε)` and `(h+2ε, h+4ε]` with
/// points of `D` when `D` is nonempty.
pub fn draw_samples(land: &ToyLandscape, band: &BandSpec, per_set: usize, seed: u64) -> SampleSets {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = draw_range(land, band.b_range(), per_set, &mut rng);
    let c = draw_range(land, band.c_range(), per_set, &mut rng);
    let (a0, a1) = band.a_range();
    let groups: Vec<(f64, f64)> = match band.fixed {
        FixedSet::Empty => vec![(a0 - 2.0 * band.eps, a0 - 1e-9), (a1 + 1e-9, a1 + 2.0 * band.eps)],
        FixedSet::Slab { lo, hi } => vec![(a0 - 2.0 * band.eps, a0 - 1e-9), (a1 + 1e-9, a1 + 2.0 * band.eps), (lo, hi)],
        FixedSet::LevelSet { level } => vec![(a0 - 2.0 * band.eps, a0 - 1e-9), (a1 + 1e-9, a1 + 2.0 * band.eps), (level, level)],
    };
    let mut outside = Vec::with_capacity(per_set);
    for i in 0..per_set {
        let range = groups[i % groups.len()];
        outside.extend(draw_range(land, range, 1, &mut rng));
    }
    SampleSets { b, c, outside }
}

fn flow_witness(trace: Result<FlowTrace>, start: &[f64], land: &ToyLandscape, check: impl Fn(&FlowTrace) -> bool) -> FlowWitness {
    match trace {
        Ok(t) => FlowWitness {
            start: start.to_vec(),
            end: t.end().to_vec(),
            phi_start: land.value(start),
            phi_end: t.phi_end(),
            passed: check(&t),
            error: None,
        },
        Err(e) => FlowWitness {
            start: start.to_vec(),
            end: start.to_vec(),
            phi_start: land.value(start),
            phi_end: land.value(start),
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

fn assemble(conclusion: &str, (target_lo, target_hi): (Option<f64>, Option<f64>), witnesses: Vec<FlowWitness>) -> ConclusionVerdict {
    let failures = witnesses.iter().filter(|w| !w.passed).count();
    ConclusionVerdict {
        conclusion: conclusion.into(),
        outcome: if failures == 0 { Outcome::Pass } else { Outcome::Fail },
        target_lo,
        target_hi,
        samples: witnesses.len(),
        failures,
        witnesses,
    }
}

fn inclusion(
    land: &ToyLandscape,
    band: &BandSpec,
    starts: &[Vec<f64>],
    (lo, hi): (f64, f64),
    tol: f64,
    opts: &IntegratorOptions,
) -> Vec<FlowWitness> {
    let duration = 2.0 * band.eps;
    starts
        .par_iter()
        .map(|v| {
            flow_witness(flow(land, band, v, duration, opts), v, land, |t| {
                let p = t.phi_end();
                p >= lo - tol && p <= hi + tol
            })
        })
        .collect()
}

/// Empirical check of the three conclusions of the band deformation: (i) points
/// off `A` are fixed by `η = σ(2ε, ·)`, (ii) `η(B)` lands in
/// `φ⁻¹([h+ε, h+3ε/2])`, (iii) `η(C)` lands in `φ⁻¹([h-3ε/2, h-ε])`.
pub fn verify_band_deformation(
    land: &ToyLandscape,
    band: &BandSpec,
    samples: &SampleSets,
    tol: f64,
    hypothesis_seed: u64,
) -> DeformationVerdict {
    let opts = band_integrator(band.eps);
    let duration = 2.0 * band.eps;
    let fixed: Vec<FlowWitness> = samples
        .outside
        .par_iter()
        .map(|v| {
            flow_witness(flow(land, band, v, duration, &opts), v, land, |t| {
                let d: f64 = t.end().iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                d <= tol
            })
        })
        .collect();
    let up = inclusion(land, band, &samples.b, band.upper_target(), tol, &opts);
    let down = inclusion(land, band, &samples.c, band.lower_target(), tol, &opts);
    DeformationVerdict {
        landscape: *land,
        band: *band,
        duration,
        tolerance: tol,
        hypothesis: check_hypothesis(land, band, 1000, hypothesis_seed),
        conclusions: vec![
            assemble("i", (None, None), fixed),
            assemble("ii", (Some(band.upper_target().0), Some(band.upper_target().1)), up),
            assemble("iii", (Some(band.lower_target().0), Some(band.lower_target().1)), down),
        ],
    }
}

/// Start points with `φ` uniform in `[c-3ε, c+ε]`.
pub fn draw_willem_samples(land: &ToyLandscape, c: f64, eps: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_range(land, (c - 3.0 * eps, c + eps), count, &mut rng)
}

/// `η(φ^{c+ε}) ⊂ φ^{c-ε}` for the descent flow over time `2ε`.
pub fn verify_sublevel_descent(land: &ToyLandscape, c: f64, eps: f64, samples: &[Vec<f64>], tol: f64) -> ConclusionVerdict {
    let opts = band_integrator(eps);
    let witnesses: Vec<FlowWitness> = samples
        .par_iter()
        .filter(|v| land.value(v) <= c + eps)
        .map(|v| flow_witness(willem_flow(land, c, eps, v, 2.0 * eps, &opts), v, land, |t| t.phi_end() <= c - eps + tol))
        .collect();
    assemble("sublevel", (None, Some(c - eps)), witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear() -> ToyLandscape {
        ToyLandscape::linear(2).unwrap()
    }

    fn band(fixed: FixedSet) -> BandSpec {
        BandSpec::new(0.0, 0.1, fixed).unwrap()
    }

    #[test]
    fn fixed_set_must_sit_in_the_middle_third() {
        assert!(BandSpec::new(0.0, 0.1, FixedSet::Slab { lo: -0.05, hi: 0.0 }).is_err());
        assert!(BandSpec::new(0.0, 0.1, FixedSet::LevelSet { level: 0.04 }).is_err());
        assert!(BandSpec::new(0.0, 0.0, FixedSet::Empty).is_err());
        assert!(BandSpec::with_mid_slab(0.0, 0.1).is_ok());
    }

    #[test]
    fn psi_values() {
        let land = linear();
        let b = band(FixedSet::Empty);
        assert_eq!(psi_eval(&land, &b, &[-0.075, 0.3]), 1.0);
        assert_eq!(psi_eval(&land, &b, &[0.075, 0.3]), -1.0);
        assert_eq!(psi_eval(&land, &b, &[0.0, 0.3]), 0.0);
        assert_eq!(psi_eval(&land, &b, &[0.5, 0.3]), 0.0);
        assert_eq!(psi_eval(&land, &b, &[0.2, 0.3]), 0.0);
    }

    #[test]
    fn psi_is_bounded() {
        let land = linear();
        for fixed in [FixedSet::Empty, FixedSet::LevelSet { level: 0.0 }, FixedSet::Slab { lo: -0.025, hi: 0.02 }] {
            let b = band(fixed);
            for i in 0..=2000 {
                let x = -0.4 + 0.8 * i as f64 / 2000.0;
                let p = psi_eval(&land, &b, &[x, 0.0]);
                assert!(p.abs() <= 1.0, "{x} {p}");
            }
        }
    }

    #[test]
    fn field_values() {
        let land = linear();
        let b = band(FixedSet::LevelSet { level: 0.0 });
        assert_eq!(vector_field_eval(&land, &b, &[-0.075, 1.0]).vector, vec![1.0, 0.0]);
        assert_eq!(vector_field_eval(&land, &b, &[0.0, 1.0]).vector, vec![0.0, 0.0]);
        assert_eq!(vector_field_eval(&land, &b, &[0.3, 1.0]).vector, vec![0.0, 0.0]);
    }

    #[test]
    fn flow_from_b_stalls_below_mid_level() {
        let land = linear();
        let b = band(FixedSet::Empty);
        let t = flow(&land, &b, &[-0.075, 0.5], 0.2, &band_integrator(0.1)).unwrap();
        assert!(t.phi_end() > -0.075 && t.phi_end() <= 0.0);
        assert!(t.identity_defect < 1e-12);
        assert!(t.integrated_defect < 1e-8);
        assert_eq!(t.end()[1], 0.5);
    }

    #[test]
    fn off_band_flow_is_constant() {
        let land = linear();
        let b = band(FixedSet::Empty);
        let t = flow(&land, &b, &[0.3, 0.5], 0.2, &band_integrator(0.1)).unwrap();
        assert!(t.states.iter().all(|s| s == &[0.3, 0.5]));
    }

    #[test]
    fn willem_descends_to_lower_level() {
        let land = linear();
        let t = willem_flow(&land, 0.0, 0.1, &[0.1, 0.0], 0.2, &band_integrator(0.1)).unwrap();
        assert!(t.phi_end() <= -0.1 + 1e-6, "{}", t.phi_end());
        let low = willem_flow(&land, 0.0, 0.1, &[-0.15, 0.0], 0.2, &band_integrator(0.1)).unwrap();
        assert!(low.phi_end() <= -0.15);
        let far = willem_flow(&land, 0.0, 0.1, &[-0.5, 0.0], 0.2, &band_integrator(0.1)).unwrap();
        assert_eq!(far.end(), &[-0.5, 0.0]);
    }

    #[test]
    fn band_verdicts_on_linear_toy() {
        let land = linear();
        let b = band(FixedSet::Empty);
        let s = draw_samples(&land, &b, 20, 4);
        let v = verify_band_deformation(&land, &b, &s, 1e-6, 5);
        assert_eq!(v.conclusion("i").unwrap().outcome, Outcome::Pass);
        assert_eq!(v.conclusion("ii").unwrap().outcome, Outcome::Fail);
        assert_eq!(v.conclusion("iii").unwrap().outcome, Outcome::Fail);
        assert!(v.hypothesis.holds);
        for w in &v.conclusion("ii").unwrap().witnesses {
            assert!(w.phi_end < 0.0 + 1e-12 && w.phi_end > w.phi_start);
        }
    }

    #[test]
    fn fixed_set_points_stay() {
        let land = linear();
        for b in [band(FixedSet::LevelSet { level: 0.0 }), BandSpec::with_mid_slab(0.0, 0.1).unwrap()] {
            let s = draw_samples(&land, &b, 30, 8);
            let v = verify_band_deformation(&land, &b, &s, 0.0, 1);
            assert_eq!(v.conclusion("i").unwrap().outcome, Outcome::Pass);
        }
    }

    #[test]
    fn willem_on_saddle() {
        let land = ToyLandscape::saddle(2).unwrap();
        let samples = draw_willem_samples(&land, 1.0, 0.1, 40, 2);
        let verdict = verify_sublevel_descent(&land, 1.0, 0.1, &samples, 1e-6);
        assert_eq!(verdict.outcome, Outcome::Pass, "{:?}", verdict.witnesses.iter().find(|w| !w.passed));
    }

    #[test]
    fn hypothesis_on_saddle_band() {
        let land = ToyLandscape::saddle(3).unwrap();
        let b = BandSpec::new(1.0, 0.1, FixedSet::Empty).unwrap();
        assert!(check_hypothesis(&land, &b, 500, 1).holds);
        let near = BandSpec::new(0.0, 0.1, FixedSet::Empty).unwrap();
        assert!(!check_hypothesis(&land, &near, 500, 1).holds);
    }
}
