//! Ground truth for the periodic system `Δ²u_{n-1} + ∇F(n, u_n) = 0`:
//! residuals, damped Newton polishing, multistart catalogs and the scalar
//! reduction along invariant rays.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{bisect, phi_eval, FunctionalSpec};
use crate::potentials::PotentialSpec;
use crate::space::{b_matrix, PeriodicSequence};
use crate::symmetry::{orbit_distance, potential_symmetries, SymmetryOp};

/// `Δ²u_{n-1} + ∇F(n, u_n)` for n = 1..M.
pub fn residual_vector(u: &PeriodicSequence, p: &PotentialSpec) -> PeriodicSequence {
    let m = u.period() as i64;
    PeriodicSequence::from_raw(
        (1..=m)
            .map(|n| u.second_difference_unchecked(n) + p.grad(n, u.at(n)))
            .collect(),
    )
}

/// `max_n |Δ²u_{n-1} + ∇F(n, u_n)|`.
pub fn residual(u: &PeriodicSequence, p: &PotentialSpec) -> f64 {
    residual_vector(u, p).max_abs()
}

/// `-B + diag(∂²F(n, u_n))`, the Jacobian of [`residual_vector`].
pub fn jacobian(u: &PeriodicSequence, p: &PotentialSpec) -> DMatrix<f64> {
    let mut j = -b_matrix(u.period());
    for n in 1..=u.period() {
        j[(n - 1, n - 1)] += p.hess(n as i64, u.at(n as i64));
    }
    j
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularPolicy {
    /// A Jacobian with reciprocal condition below the threshold is an error.
    #[default]
    Error,
    /// Solve in the least-squares sense, dropping tiny singular values.
    PseudoInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub policy: SingularPolicy,
    pub rcond_min: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50, policy: SingularPolicy::Error, rcond_min: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub u: PeriodicSequence,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual before each iteration and after the last.
    pub history: Vec<f64>,
    /// Smallest reciprocal condition number met; `None` without a solve.
    pub min_rcond: Option<f64>,
}

const DIVERGENCE_NORM: f64 = 1e12;

/// Damped Newton on the residual map with an SVD solve and backtracking on
/// the Euclidean residual norm.
pub fn newton_refine(u0: &PeriodicSequence, p: &PotentialSpec, opts: &NewtonOptions) -> Result<NewtonOutcome> {
    if u0.period() != p.period {
        return Err(Error::PeriodMismatch { left: u0.period(), right: p.period });
    }
    let mut u = u0.clone();
    let mut r = residual_vector(&u, p);
    let mut history = vec![r.max_abs()];
    let mut min_rcond: Option<f64> = None;
    for iteration in 0..opts.max_iter {
        if r.max_abs() <= opts.tol {
            return Ok(NewtonOutcome { residual: r.max_abs(), u, iterations: iteration, converged: true, history, min_rcond });
        }
        let svd = jacobian(&u, p).svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let rcond = if smax > 0.0 { smin / smax } else { 0.0 };
        min_rcond = Some(min_rcond.map_or(rcond, |r| r.min(rcond)));
        if rcond < opts.rcond_min && opts.policy == SingularPolicy::Error {
            return Err(Error::SingularJacobian { iteration, rcond });
        }
        let rhs = -DVector::from_column_slice(r.values());
        let delta = svd
            .solve(&rhs, opts.rcond_min * smax)
            .map(|d| PeriodicSequence::from_raw(d.iter().copied().collect()))
            .map_err(|_| Error::Divergence { iteration, residual: r.max_abs() })?;
        let merit = r.norm();
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha > 1e-10 {
            let trial = u.axpy(alpha, &delta);
            let rt = residual_vector(&trial, p);
            if rt.norm() <= (1.0 - 1e-4 * alpha) * merit {
                accepted = Some((trial, rt));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, rn)) = accepted else {
            return Err(Error::Divergence { iteration, residual: r.max_abs() });
        };
        if !next.values().iter().all(|v| v.is_finite()) || next.max_abs() > DIVERGENCE_NORM {
            return Err(Error::Divergence { iteration, residual: rn.max_abs() });
        }
        u = next;
        r = rn;
        history.push(r.max_abs());
    }
    let res = r.max_abs();
    Ok(NewtonOutcome { converged: res <= opts.tol, residual: res, u, iterations: opts.max_iter, history, min_rcond })
}

/// Largest `r_{k+1}/r_k²` over steps where the residual is already small;
/// bounded values indicate quadratic convergence.
pub fn quadratic_rate(history: &[f64], below: f64) -> Option<f64> {
    history
        .windows(2)
        .filter(|w| w[0] < below && w[0] > 0.0 && w[1] > 1e-15)
        .map(|w| w[1] / (w[0] * w[0]))
        .max_by(f64::total_cmp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionClass {
    TrivialZero,
    Constant,
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub sequence: PeriodicSequence,
    pub residual: f64,
    pub phi_standard: f64,
    pub class: SolutionClass,
    /// Starts that converged into this orbit.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultistartSpec {
    pub box_half_width: f64,
    pub starts: usize,
    pub mode_amplitudes: Vec<f64>,
    pub admission_tol: f64,
    pub dedup_tol: f64,
    pub max_iter: usize,
}

impl Default for MultistartSpec {
    fn default() -> Self {
        Self {
            box_half_width: 3.0,
            starts: 500,
            mode_amplitudes: vec![0.5, 1.0, 1.5, 2.0],
            admission_tol: 1e-10,
            dedup_tol: 1e-6,
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionCatalog {
    pub period: usize,
    pub potential: PotentialSpec,
    pub seed: u64,
    pub spec: MultistartSpec,
    /// Symmetries used for orbit deduplication: the cyclic shifts and sign
    /// flips that leave F invariant.
    pub orbit: Vec<SymmetryOp>,
    pub structured_starts: usize,
    pub random_starts: usize,
    pub converged: usize,
    pub dropped: usize,
    pub entries: Vec<CatalogEntry>,
}

impl SolutionCatalog {
    /// Re-checks every entry's residual against the admission tolerance.
    pub fn reverify(&self) -> bool {
        self.entries.iter().all(|e| residual(&e.sequence, &self.potential) <= self.spec.admission_tol)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.class == SolutionClass::Nontrivial)
    }
}

/// Real Fourier eigenvectors of B scaled to unit max-norm.
pub fn b_modes(period: usize) -> Vec<PeriodicSequence> {
    let m = period as f64;
    let mut modes = Vec::new();
    for j in 0..=period / 2 {
        let w = 2.0 * std::f64::consts::PI * j as f64 / m;
        let c = PeriodicSequence::from_raw((1..=period).map(|n| (w * n as f64).cos()).collect());
        modes.push(c);
        if j != 0 && 2 * j != period {
            modes.push(PeriodicSequence::from_raw((1..=period).map(|n| (w * n as f64).sin()).collect()));
        }
    }
    modes.into_iter().map(|u| {
        let s = u.max_abs();
        u.scale(1.0 / s)
    }).collect()
}

fn classify(u: &PeriodicSequence, tol: f64) -> SolutionClass {
    let lo = u.values().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if u.max_abs() <= tol {
        SolutionClass::TrivialZero
    } else if hi - lo <= tol {
        SolutionClass::Constant
    } else {
        SolutionClass::Nontrivial
    }
}

/// Newton from structured starts (B-modes at `±amplitude`) and uniform
/// random starts in the box, deduplicated by orbit in start order.
pub fn multistart(p: &PotentialSpec, spec: &MultistartSpec, seed: u64) -> Result<SolutionCatalog> {
    if !(spec.box_half_width > 0.0) || !(spec.admission_tol > 0.0) || !(spec.dedup_tol > 0.0) {
        return Err(Error::InvalidParameter { name: "multistart", reason: "box and tolerances must be positive".into() });
    }
    let m = p.period;
    let mut starts = Vec::new();
    for mode in b_modes(m) {
        for &a in &spec.mode_amplitudes {
            starts.push(mode.scale(a));
            starts.push(mode.scale(-a));
        }
    }
    let structured_starts = starts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..spec.starts {
        let w = spec.box_half_width;
        starts.push(PeriodicSequence::from_raw((0..m).map(|_| rng.random_range(-w..=w)).collect()));
    }
    let opts = NewtonOptions {
        tol: spec.admission_tol * 1e-2,
        max_iter: spec.max_iter,
        policy: SingularPolicy::PseudoInverse,
        ..Default::default()
    };
    let results: Vec<Option<PeriodicSequence>> = starts
        .par_iter()
        .map(|u0| match newton_refine(u0, p, &opts) {
            Ok(out) if out.residual <= spec.admission_tol => Some(out.u),
            _ => None,
        })
        .collect();
    let orbit: Vec<SymmetryOp> = potential_symmetries(p).into_iter().filter(|op| !op.reflect).collect();
    let standard = FunctionalSpec::standard(p.clone());
    let mut entries: Vec<CatalogEntry> = Vec::new();
    let mut converged = 0;
    for u in results.into_iter().flatten() {
        converged += 1;
        if let Some(e) = entries.iter_mut().find(|e| orbit_distance(&orbit, &u, &e.sequence).0 <= spec.dedup_tol) {
            e.hits += 1;
            continue;
        }
        entries.push(CatalogEntry {
            residual: residual(&u, p),
            phi_standard: phi_eval(&standard, &u),
            class: classify(&u, spec.dedup_tol),
            sequence: u,
            hits: 1,
        });
    }
    Ok(SolutionCatalog {
        period: m,
        potential: p.clone(),
        seed,
        spec: spec.clone(),
        orbit,
        structured_starts,
        random_starts: spec.starts,
        converged,
        dropped: starts.len() - converged,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayRoots {
    pub eigenvalue: f64,
    pub roots: Vec<f64>,
}

pub const RAY_GRID: usize = 10_000;
pub const EIGEN_DEFECT_TOL: f64 = 1e-10;

/// On a B-eigenvector `d` with entries in `{0, ±1}` and an odd `∇F` with
/// constant weight, `u = t·d` solves the system iff `λt = (ρ + K)·g'(t)`.
/// Roots in `[t_lo, t_hi]` by sign-change bisection on a uniform grid.
pub fn ray_critical_scan(p: &PotentialSpec, direction: &PeriodicSequence, t_lo: f64, t_hi: f64) -> Result<RayRoots> {
    if direction.period() != p.period {
        return Err(Error::PeriodMismatch { left: direction.period(), right: p.period });
    }
    if !direction.values().iter().all(|&v| v == 0.0 || v == 1.0 || v == -1.0) || direction.max_abs() == 0.0 {
        return Err(Error::DirectionEntries);
    }
    if !p.weight.is_constant() {
        return Err(Error::RayReduction("weight is not constant".into()));
    }
    if !p.profile.is_even() {
        return Err(Error::RayReduction("profile is not even".into()));
    }
    if !(t_lo < t_hi) {
        return Err(Error::InvalidParameter { name: "t_range", reason: format!("need t_lo < t_hi, got [{t_lo}, {t_hi}]") });
    }
    let bd = direction.apply_b();
    let lambda = bd.dot(direction) / direction.norm_squared();
    let defect = bd.axpy(-lambda, direction).norm();
    if defect > EIGEN_DEFECT_TOL {
        return Err(Error::NotEigenvector { defect });
    }
    let factor = p.weight.value(1.0) + p.k;
    let h = |t: f64| factor * p.profile.derivative(t) - lambda * t;
    let ts: Vec<f64> = (0..=RAY_GRID).map(|i| t_lo + (t_hi - t_lo) * i as f64 / RAY_GRID as f64).collect();
    let hs: Vec<f64> = ts.iter().map(|&t| h(t)).collect();
    let mut roots = Vec::new();
    for i in 0..=RAY_GRID {
        if hs[i] == 0.0 {
            roots.push(ts[i]);
        } else if i < RAY_GRID && hs[i + 1] != 0.0 && (hs[i] < 0.0) != (hs[i + 1] < 0.0) {
            roots.push(bisect(&h, ts[i], ts[i + 1]));
        }
    }
    Ok(RayRoots { eigenvalue: lambda, roots })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogMatch {
    pub index: usize,
    pub distance: f64,
    pub matched: bool,
    pub op: SymmetryOp,
}

/// Nearest catalog entry to `u` over the orbit of each entry.
pub fn catalog_match(catalog: &SolutionCatalog, u: &PeriodicSequence, tol: f64) -> Result<CatalogMatch> {
    let mut best: Option<CatalogMatch> = None;
    for (index, e) in catalog.entries.iter().enumerate() {
        let (distance, op) = orbit_distance(&catalog.orbit, u, &e.sequence);
        if best.is_none_or(|b| distance < b.distance) {
            best = Some(CatalogMatch { index, distance, matched: distance <= tol, op });
        }
    }
    best.ok_or(Error::EmptyCatalog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::phi_grad;
    use crate::potentials::WeightFunction;

    const A: f64 = 1.131_102_585_651_302;

    fn desk() -> PotentialSpec {
        PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap()
    }

    fn mode(a: f64) -> PeriodicSequence {
        PeriodicSequence::new(vec![a, -a, 0.0, a, -a, 0.0]).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual(&PeriodicSequence::zeros(6), &desk()), 0.0);
        assert!(residual(&mode(A), &desk()) <= 1e-10);
        let u = PeriodicSequence::new(vec![0.3, -0.1, 0.7, 1.0, 0.0, -2.0]).unwrap();
        let p = desk();
        let mut direct: f64 = 0.0;
        for n in 1..=6i64 {
            let v = u.at(n + 1) - 2.0 * u.at(n) + u.at(n - 1) + 2.5 * (2.0 * u.at(n) - u.at(n).sin());
            direct = direct.max(v.abs());
        }
        assert!((residual(&u, &p) - direct).abs() < 1e-14);
        assert!(direct > 0.0);
    }

    #[test]
    fn residual_is_minus_standard_gradient() {
        let p = desk();
        let u = PeriodicSequence::new(vec![0.3, -0.1, 0.7, 1.0, 0.0, -2.0]).unwrap();
        let g = phi_grad(&FunctionalSpec::standard(p.clone()), &u);
        assert!(residual_vector(&u, &p).add(&g).max_abs() < 1e-14);
    }

    #[test]
    fn newton_fixed_point() {
        let out = newton_refine(&mode(A), &desk(), &NewtonOptions { tol: 1e-10, ..Default::default() }).unwrap();
        assert!(out.iterations <= 1);
        assert!(out.u.distance(&mode(A)) < 1e-10);
    }

    #[test]
    fn newton_converges_quadratically_to_mode() {
        let out = newton_refine(&mode(1.0), &desk(), &NewtonOptions::default()).unwrap();
        assert!(out.converged && out.residual <= 1e-12);
        assert!(out.u.distance(&mode(A)) < 1e-10);
        let rate = quadratic_rate(&out.history, 1e-2).unwrap();
        assert!(rate < 10.0, "{rate} {:?}", out.history);
    }

    #[test]
    fn resonant_origin_is_singular() {
        let p = PotentialSpec::example2(3.0, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap();
        let u0 = PeriodicSequence::new(vec![1e-9, -2e-9, 0.5e-9, 0.0, 1e-9, -1e-9]).unwrap();
        match newton_refine(&u0, &p, &NewtonOptions::default()) {
            Err(Error::SingularJacobian { rcond, .. }) => assert!(rcond < 1e-12),
            other => panic!("expected a singular Jacobian, got {other:?}"),
        }
    }

    #[test]
    fn ray_scan_mode_two() {
        let r = ray_critical_scan(&desk(), &mode(1.0), 0.0, 3.0).unwrap();
        assert!((r.eigenvalue - 3.0).abs() < 1e-14);
        assert_eq!(r.roots[0], 0.0);
        assert_eq!(r.roots.len(), 2);
        let a = r.roots[1];
        assert!((a.sin() - 0.8 * a).abs() <= 1e-12);
        assert!((a - A).abs() < 1e-12);
        assert!(residual(&mode(a), &desk()) <= 1e-10);
    }

    #[test]
    fn ray_scan_alternating_mode() {
        let d = PeriodicSequence::new(vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]).unwrap();
        let r = ray_critical_scan(&desk(), &d, 0.0, std::f64::consts::PI).unwrap();
        assert!((r.eigenvalue - 4.0).abs() < 1e-14);
        // 4t = 2.5(2t - sin t): sin t = 0.4t, one positive root below π.
        assert_eq!(r.roots.len(), 2);
        let t = r.roots[1];
        assert!((t.sin() - 0.4 * t).abs() < 1e-12 && t > 2.0 && t < 2.2);
        assert!(residual(&d.scale(t), &desk()) <= 1e-10);
    }

    #[test]
    fn ray_scan_rejects_bad_directions() {
        let not_eigen = PeriodicSequence::new(vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(ray_critical_scan(&desk(), &not_eigen, 0.0, 1.0), Err(Error::NotEigenvector { .. })));
        let bad = PeriodicSequence::new(vec![2.0, -2.0, 0.0, 2.0, -2.0, 0.0]).unwrap();
        assert_eq!(ray_critical_scan(&desk(), &bad, 0.0, 1.0), Err(Error::DirectionEntries));
        let p = PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::cosine(0.5, 6), 6).unwrap();
        assert!(matches!(ray_critical_scan(&p, &mode(1.0), 0.0, 1.0), Err(Error::RayReduction(_))));
    }

    #[test]
    fn desk_catalog() {
        let spec = MultistartSpec { starts: 100, ..Default::default() };
        let c = multistart(&desk(), &spec, 1).unwrap();
        assert!(c.reverify());
        assert!(c.entries.iter().any(|e| e.class == SolutionClass::TrivialZero));
        let m = catalog_match(&c, &mode(A).shifted(2), 1e-6).unwrap();
        assert!(m.matched && m.distance < 1e-9);
        let standard = FunctionalSpec::standard(desk());
        for e in &c.entries {
            assert!(phi_grad(&standard, &e.sequence).norm() <= 1e-9);
        }
        for (i, a) in c.entries.iter().enumerate() {
            for b in &c.entries[i + 1..] {
                assert!(orbit_distance(&c.orbit, &a.sequence, &b.sequence).0 > spec.dedup_tol);
            }
        }
        assert_eq!(multistart(&desk(), &spec, 1).unwrap(), c);
    }

    #[test]
    fn zero_potential_catalog_is_constant() {
        let spec = MultistartSpec { starts: 20, ..Default::default() };
        let c = multistart(&PotentialSpec::zero(5), &spec, 3).unwrap();
        assert!(!c.entries.is_empty());
        assert!(c.entries.iter().all(|e| e.class != SolutionClass::Nontrivial));
    }

    #[test]
    fn empty_catalog_match() {
        let mut c = multistart(&desk(), &MultistartSpec { starts: 1, ..Default::default() }, 1).unwrap();
        c.entries.clear();
        assert_eq!(catalog_match(&c, &mode(A), 1e-6), Err(Error::EmptyCatalog));
    }

    #[test]
    fn modes_are_eigenvectors() {
        for m in 3..=8 {
            for u in b_modes(m) {
                let bu = u.apply_b();
                let lambda = bu.dot(&u) / u.norm_squared();
                assert!(bu.axpy(-lambda, &u).norm() < 1e-12);
            }
            assert_eq!(b_modes(m).len(), m);
        }
    }
}
