//! Problem configuration files.
//!
//! A config is one JSON object. Unknown fields are rejected so that typos
//! surface as errors instead of silently falling back to defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dmpass_core::deformation::{BandSpec, FixedSet, ToyKind, ToyLandscape};
use dmpass_core::functional::{build_step4_geometry, find_ray_geometry, A3Constants};
use dmpass_core::minimax::{SolverBudgets, SolverOptions, StepPolicy};
use dmpass_core::oracle::MultistartSpec;
use dmpass_core::potentials::{A3Candidate, CheckParams, SamplingGrid};
use dmpass_core::{FunctionalSpec, MountainGeometry, PeriodicSequence, PotentialSpec, SearchSpace, WeightFunction};

/// A config that failed to parse or validate. `field` is a dotted path
/// into the JSON document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub field: String,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}: {}", self.path.display(), self.reason)
        } else {
            write!(f, "{}: field `{}`: {}", self.path.display(), self.field, self.reason)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(rename = "M")]
    pub period: usize,
    pub seed: Option<u64>,
    pub potential: Option<PotentialBlock>,
    pub functional: Option<FunctionalBlock>,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub oracle: OracleBlock,
    #[serde(default)]
    pub check: CheckBlock,
    #[serde(default)]
    pub deform: DeformBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Example1,
    Example2,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightBlockKind {
    Zero,
    Constant,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightBlock {
    pub kind: WeightBlockKind,
    #[serde(default)]
    pub amplitude: f64,
}

impl Default for WeightBlock {
    fn default() -> Self {
        Self { kind: WeightBlockKind::Zero, amplitude: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialBlock {
    pub kind: PotentialKind,
    #[serde(default)]
    pub a: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(rename = "K", default = "one")]
    pub k: f64,
    #[serde(default)]
    pub weight: WeightBlock,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalBlockKind {
    Standard,
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryBlock {
    /// `e1 = t1·d`, `e = t2·d` at the two crossings of `level` along `d`.
    Ray {
        direction: Vec<f64>,
        level: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
    },
    /// The index construction around `n_star` at scale `w4`.
    Index { w4: f64 },
}

fn default_t_max() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalBlock {
    pub kind: FunctionalBlockKind,
    pub n_star: Option<i64>,
    pub w3: Option<f64>,
    /// Penalty coefficient of the pinned kind; defaults to `w3`.
    pub penalty: Option<f64>,
    pub geometry: Option<GeometryBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub knots: usize,
    pub ensemble: usize,
    pub eps: f64,
    pub max_iterations: usize,
    pub refinements: usize,
    pub climb_iterations: usize,
    pub convergence_tol: f64,
    pub patience: usize,
    pub gradient_tol: f64,
    pub perturbation: f64,
    pub search_space: SearchSpace,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub match_tol: f64,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let b = SolverBudgets::default();
        Self {
            knots: b.knots,
            ensemble: b.ensemble,
            eps: 0.01,
            max_iterations: b.max_iterations,
            refinements: b.refinements,
            climb_iterations: b.climb_iterations,
            convergence_tol: b.convergence_tol,
            patience: b.patience,
            gradient_tol: b.gradient_tol,
            perturbation: b.perturbation,
            search_space: SearchSpace::Symmetric,
            newton_tol: 1e-12,
            newton_max_iter: 50,
            match_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleBlock {
    #[serde(rename = "box")]
    pub box_half_width: f64,
    pub starts: usize,
    pub amplitudes: Vec<f64>,
    pub tol: f64,
    pub dedup_tol: f64,
    pub max_iter: usize,
}

impl Default for OracleBlock {
    fn default() -> Self {
        let m = MultistartSpec::default();
        Self {
            box_half_width: m.box_half_width,
            starts: m.starts,
            amplitudes: m.mode_amplitudes,
            tol: m.admission_tol,
            dedup_tol: m.dedup_tol,
            max_iter: m.max_iter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthBlock {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckBlock {
    pub x_max: f64,
    pub points: usize,
    pub delta: f64,
    /// Growth constants to certify; fitted automatically when absent.
    pub growth: Option<GrowthBlock>,
    pub samples: usize,
    pub radius: f64,
    pub m1: f64,
    pub scan_points: usize,
}

impl Default for CheckBlock {
    fn default() -> Self {
        let p = CheckParams::default();
        Self {
            x_max: p.grid.x_max,
            points: p.grid.points,
            delta: p.delta,
            growth: None,
            samples: 10_000,
            radius: 10.0,
            m1: 10.0,
            scan_points: 10_001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedBlock {
    Empty,
    MidSlab,
    LevelSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeformBlock {
    pub landscape: ToyKind,
    pub dimension: usize,
    pub h: f64,
    pub eps: f64,
    pub fixed: Vec<FixedBlock>,
    pub samples: usize,
    pub tol: f64,
    /// Level of the descent baseline.
    pub c: f64,
    pub traces: usize,
}

impl Default for DeformBlock {
    fn default() -> Self {
        Self {
            landscape: ToyKind::Linear,
            dimension: 2,
            h: 0.0,
            eps: 0.1,
            fixed: vec![FixedBlock::Empty, FixedBlock::MidSlab, FixedBlock::LevelSet],
            samples: 200,
            tol: 1e-6,
            c: 0.0,
            traces: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    /// Also write CSV artifacts next to the JSON report.
    pub csv: Option<bool>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub ensemble: Option<usize>,
    pub eps: Option<f64>,
}

/// A parsed config together with the file it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub config: ProblemConfig,
    pub seed: u64,
}

impl LoadedConfig {
    pub fn error(&self, field: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError { path: self.path.clone(), field: field.into(), reason: reason.into() }
    }
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { path: path.into(), field: String::new(), reason: format!("cannot read: {e}") })?;
    parse(&text, path, overrides)
}

pub fn parse(text: &str, path: &Path, overrides: &Overrides) -> Result<LoadedConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let mut config: ProblemConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        ConfigError {
            path: path.into(),
            field: if field == "." { String::new() } else { field },
            reason: e.into_inner().to_string(),
        }
    })?;
    if let Some(n) = overrides.ensemble {
        config.solver.ensemble = n;
    }
    if let Some(eps) = overrides.eps {
        config.solver.eps = eps;
        config.deform.eps = eps;
    }
    let Some(seed) = overrides.seed.or(config.seed) else {
        return Err(ConfigError { path: path.into(), field: "seed".into(), reason: "missing; set it in the config or pass --seed".into() });
    };
    config.seed = Some(seed);
    let loaded = LoadedConfig { path: path.into(), seed, config };
    loaded.validate()?;
    Ok(loaded)
}

fn positive(l: &LoadedConfig, field: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(l.error(field, format!("must be positive and finite, got {v}")))
    }
}

impl LoadedConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.config;
        if c.period < 3 {
            return Err(self.error("M", format!("must be at least 3, got {}", c.period)));
        }
        let s = &c.solver;
        for (field, v) in [
            ("solver.eps", s.eps),
            ("solver.convergence_tol", s.convergence_tol),
            ("solver.gradient_tol", s.gradient_tol),
            ("solver.newton_tol", s.newton_tol),
            ("solver.match_tol", s.match_tol),
            ("oracle.box", c.oracle.box_half_width),
            ("oracle.tol", c.oracle.tol),
            ("oracle.dedup_tol", c.oracle.dedup_tol),
            ("check.x_max", c.check.x_max),
            ("check.delta", c.check.delta),
            ("check.radius", c.check.radius),
            ("deform.eps", c.deform.eps),
            ("deform.tol", c.deform.tol),
        ] {
            positive(self, field, v)?;
        }
        if !(s.perturbation >= 0.0) {
            return Err(self.error("solver.perturbation", format!("must be >= 0, got {}", s.perturbation)));
        }
        if s.ensemble == 0 {
            return Err(self.error("solver.ensemble", "must be at least 1"));
        }
        if s.knots < 8 || s.knots % 2 == 1 {
            return Err(self.error("solver.knots", format!("must be even and at least 8, got {}", s.knots)));
        }
        if c.check.points == 0 {
            return Err(self.error("check.points", "must be at least 1"));
        }
        if let Some(f) = &c.functional {
            if f.kind == FunctionalBlockKind::Pinned {
                if f.n_star.is_none() {
                    return Err(self.error("functional.n_star", "required for the pinned kind"));
                }
                if f.w3.is_none() {
                    return Err(self.error("functional.w3", "required for the pinned kind"));
                }
                if matches!(f.geometry, Some(GeometryBlock::Index { .. })) && c.period < 6 {
                    return Err(self.error("M", format!("the index geometry needs M >= 6, got {}", c.period)));
                }
            }
            if let Some(GeometryBlock::Ray { direction, .. }) = &f.geometry {
                if direction.len() != c.period {
                    return Err(self.error(
                        "functional.geometry.direction",
                        format!("has {} entries, expected M = {}", direction.len(), c.period),
                    ));
                }
            }
        }
        if let Some(p) = &c.potential {
            self.build_potential_from(p)?;
        }
        Ok(())
    }

    fn build_potential_from(&self, p: &PotentialBlock) -> Result<PotentialSpec, ConfigError> {
        let m = self.config.period;
        let weight = match p.weight.kind {
            WeightBlockKind::Zero => WeightFunction::zero(m),
            WeightBlockKind::Constant => WeightFunction { amplitude: p.weight.amplitude, ..WeightFunction::zero(m) },
            WeightBlockKind::Cosine => WeightFunction::cosine(p.weight.amplitude, m),
        };
        let built = match p.kind {
            PotentialKind::Example1 => PotentialSpec::example1(p.a, p.k, weight, m),
            PotentialKind::Example2 => PotentialSpec::example2(p.a, p.mu, p.k, weight, m),
            PotentialKind::Zero => Ok(PotentialSpec::zero(m)),
        };
        built.map_err(|e| self.error(&potential_field(&e), e.to_string()))
    }

    pub fn potential(&self) -> Result<PotentialSpec, ConfigError> {
        let p = self.config.potential.as_ref().ok_or_else(|| self.error("potential", "missing"))?;
        self.build_potential_from(p)
    }

    pub fn functional(&self) -> Result<FunctionalSpec, ConfigError> {
        let p = self.potential()?;
        let f = self.config.functional.as_ref().ok_or_else(|| self.error("functional", "missing"))?;
        match f.kind {
            FunctionalBlockKind::Standard => Ok(FunctionalSpec::standard(p)),
            FunctionalBlockKind::Pinned => {
                let n_star = f.n_star.ok_or_else(|| self.error("functional.n_star", "missing"))?;
                let w3 = f.w3.ok_or_else(|| self.error("functional.w3", "missing"))?;
                let spec = FunctionalSpec::pinned(p, n_star, w3).map_err(|e| self.error("functional", e.to_string()))?;
                match f.penalty {
                    Some(c) => spec.with_penalty(c).map_err(|e| self.error("functional.penalty", e.to_string())),
                    None => Ok(spec),
                }
            }
        }
    }

    pub fn geometry(&self, f: &FunctionalSpec) -> Result<MountainGeometry, ConfigError> {
        let block = self.config.functional.as_ref().and_then(|b| b.geometry.as_ref());
        let g = block.ok_or_else(|| self.error("functional.geometry", "missing"))?;
        let field = "functional.geometry";
        match g {
            GeometryBlock::Ray { direction, level, t_max } => {
                let d = PeriodicSequence::new(direction.clone())
                    .map_err(|e| self.error("functional.geometry.direction", e.to_string()))?;
                find_ray_geometry(f, &d, *level, *t_max).map_err(|e| self.error(field, e.to_string()))
            }
            GeometryBlock::Index { w4 } => build_step4_geometry(f, *w4).map_err(|e| self.error(field, e.to_string())),
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        let s = &self.config.solver;
        SolverOptions {
            budgets: SolverBudgets {
                knots: s.knots,
                ensemble: s.ensemble,
                max_iterations: s.max_iterations,
                refinements: s.refinements,
                climb_iterations: s.climb_iterations,
                convergence_tol: s.convergence_tol,
                patience: s.patience,
                gradient_tol: s.gradient_tol,
                perturbation: s.perturbation,
            },
            policy: StepPolicy::default(),
            search_space: s.search_space,
        }
    }

    pub fn multistart_spec(&self) -> MultistartSpec {
        let o = &self.config.oracle;
        MultistartSpec {
            box_half_width: o.box_half_width,
            starts: o.starts,
            mode_amplitudes: o.amplitudes.clone(),
            admission_tol: o.tol,
            dedup_tol: o.dedup_tol,
            max_iter: o.max_iter,
        }
    }

    pub fn check_params(&self) -> CheckParams {
        let c = &self.config.check;
        CheckParams {
            grid: SamplingGrid { x_max: c.x_max, points: c.points },
            delta: c.delta,
            a3: match c.growth {
                Some(g) => A3Candidate::Given { w1: g.w1, w2: g.w2, w3: g.w3 },
                None => CheckParams::default().a3,
            },
        }
    }

    pub fn growth(&self) -> Option<A3Constants> {
        self.config.check.growth.map(|g| A3Constants { w1: g.w1, w2: g.w2, w3: g.w3 })
    }

    pub fn landscape(&self) -> Result<ToyLandscape, ConfigError> {
        let d = &self.config.deform;
        ToyLandscape::new(d.landscape, d.dimension).map_err(|e| self.error("deform.dimension", e.to_string()))
    }

    pub fn bands(&self) -> Result<Vec<(FixedBlock, BandSpec)>, ConfigError> {
        let d = &self.config.deform;
        d.fixed
            .iter()
            .map(|&kind| {
                let band = match kind {
                    FixedBlock::Empty => BandSpec::new(d.h, d.eps, FixedSet::Empty),
                    FixedBlock::MidSlab => BandSpec::with_mid_slab(d.h, d.eps),
                    FixedBlock::LevelSet => BandSpec::new(d.h, d.eps, FixedSet::LevelSet { level: d.h }),
                };
                band.map(|b| (kind, b)).map_err(|e| self.error("deform.fixed", e.to_string()))
            })
            .collect()
    }
}

fn potential_field(e: &dmpass_core::Error) -> String {
    match e {
        dmpass_core::Error::InvalidParameter { name, .. } => match *name {
            "weight" | "weight.amplitude" => "potential.weight.amplitude".into(),
            other => format!("potential.{other}"),
        },
        dmpass_core::Error::PeriodTooSmall { .. } => "M".into(),
        _ => "potential".into(),
    }
}
