//! Pinned-path minimax: a string method over discretised paths through
//! `0`, `e1` (at the midpoint) and `e`.
//!
//! Each relaxation step moves every free knot downhill with its own
//! backtracking line search, then redistributes knots at equal arclength
//! between the pinned (and frozen) ones. An ensemble of perturbed seed
//! paths is relaxed, refined once by doubling the knot count, and the best
//! path's top knot is then driven to a critical point by a climbing-image
//! iteration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{random_unit, MountainGeometry, Objective};
use crate::space::PeriodicSequence;
use crate::symmetry::{stabilizer, SearchSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePath {
    knots: Vec<PeriodicSequence>,
}

impl DiscretePath {
    pub fn knots(&self) -> &[PeriodicSequence] {
        &self.knots
    }

    /// N, the number of intervals.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn mid(&self) -> usize {
        self.intervals() / 2
    }

    pub fn is_pinned(&self, i: usize) -> bool {
        i == 0 || i == self.mid() || i == self.intervals()
    }

    /// Smallest and largest knot spacing relative to the mean spacing of
    /// its half of the path.
    pub fn spacing_ratio(&self) -> (f64, f64) {
        let mid = self.mid();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for half in [&self.knots[..=mid], &self.knots[mid..]] {
            let gaps: Vec<f64> = half.windows(2).map(|w| w[0].distance(&w[1])).collect();
            let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
            for g in gaps {
                lo = lo.min(g / mean);
                hi = hi.max(g / mean);
            }
        }
        (lo, hi)
    }

    /// Doubles the knot count by inserting chord midpoints; pins keep their
    /// values and move to the doubled indices.
    pub fn refined(&self) -> Self {
        let mut knots = Vec::with_capacity(2 * self.knots.len() - 1);
        for w in self.knots.windows(2) {
            knots.push(w[0].clone());
            knots.push(w[0].add(&w[1]).scale(0.5));
        }
        knots.push(self.knots.last().expect("nonempty path").clone());
        Self { knots }
    }
}

fn lerp(a: &PeriodicSequence, b: &PeriodicSequence, t: f64) -> PeriodicSequence {
    a.scale(1.0 - t).add(&b.scale(t))
}

/// Piecewise-linear path `0 -> e1` on `[0, N/2]`, `e1 -> e` on `[N/2, N]`.
pub fn init_path(geometry: &MountainGeometry, n: usize) -> Result<DiscretePath> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::InvalidKnots(n));
    }
    let (e1, e) = (&geometry.e1, &geometry.e);
    if e1.period() != e.period() {
        return Err(Error::PeriodMismatch { left: e1.period(), right: e.period() });
    }
    if e1.distance(e) < 1e-12 || e1.norm() < 1e-12 {
        return Err(Error::InvalidGeometry("e1 must differ from 0 and from e".into()));
    }
    let zero = PeriodicSequence::zeros(e.period());
    let half = n / 2;
    let mut knots = Vec::with_capacity(n + 1);
    for i in 0..=half {
        knots.push(if i == half { e1.clone() } else { lerp(&zero, e1, i as f64 / half as f64) });
    }
    for i in 1..=half {
        knots.push(if i == half { e.clone() } else { lerp(e1, e, i as f64 / half as f64) });
    }
    Ok(DiscretePath { knots })
}

/// Index and value of the largest knot value; ties go to the lowest index.
pub fn path_max(path: &DiscretePath, f: &dyn Objective) -> (usize, f64) {
    let mut best = (0, f.value(&path.knots[0]));
    for (i, u) in path.knots.iter().enumerate().skip(1) {
        let v = f.value(u);
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub initial_step: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
    pub armijo: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self { initial_step: 1.0, shrink: 0.5, max_backtracks: 40, armijo: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxOutcome {
    pub path: DiscretePath,
    /// No free knot found a descent step.
    pub stalled: bool,
    pub moved: usize,
}

/// One string-method step in the full space.
pub fn relax_step(path: &DiscretePath, f: &dyn Objective, policy: &StepPolicy) -> RelaxOutcome {
    relax_in(path, f, policy, &Subspace::full(f.period()), &[])
}

fn relax_in(path: &DiscretePath, f: &dyn Objective, policy: &StepPolicy, space: &Subspace, frozen: &[usize]) -> RelaxOutcome {
    let anchors = anchor_indices(path, frozen);
    let floor = f.value(&path.knots[path.mid()]);
    let moves: Vec<Option<PeriodicSequence>> = (0..path.knots.len())
        .into_par_iter()
        .map(|i| {
            if anchors.contains(&i) {
                return None;
            }
            descend(path, i, f, policy, space, floor)
        })
        .collect();
    let moved = moves.iter().filter(|m| m.is_some()).count();
    if moved == 0 {
        return RelaxOutcome { path: path.clone(), stalled: true, moved };
    }
    let knots: Vec<PeriodicSequence> = moves
        .into_iter()
        .zip(&path.knots)
        .map(|(m, u)| m.unwrap_or_else(|| u.clone()))
        .collect();
    let mut out = DiscretePath { knots };
    for _ in 0..REPARAM_PASSES {
        out = reparametrize(&out, &anchors);
    }
    RelaxOutcome { path: out, stalled: false, moved }
}

const REPARAM_PASSES: usize = 2;

/// Unit tangent at an interior knot from its two neighbours.
fn tangent(path: &DiscretePath, i: usize, space: &Subspace) -> Option<PeriodicSequence> {
    let t = space.project(&path.knots[i + 1].sub(&path.knots[i - 1]));
    let n = t.norm();
    (n > 0.0).then(|| t.scale(1.0 / n))
}

/// Backtracking step along the part of `-∇φ` normal to the path, at most
/// half the distance to the nearer neighbour. Knots already below `floor`
/// (the level of the pinned `e1`, which bounds every path max from below)
/// stay put. Sliding along the path is left to the reparametrisation.
/// Together these keep knots from running off on functionals that are
/// unbounded below.
fn descend(path: &DiscretePath, i: usize, f: &dyn Objective, policy: &StepPolicy, space: &Subspace, floor: f64) -> Option<PeriodicSequence> {
    let u = &path.knots[i];
    let v0 = f.value(u);
    if v0 < floor {
        return None;
    }
    let full = space.project(&f.gradient(u));
    let g = match tangent(path, i, space) {
        Some(t) => full.axpy(-full.dot(&t), &t),
        None => full.clone(),
    };
    let g2 = g.norm_squared();
    if g2.sqrt() <= NORMAL_FLOOR * full.norm().max(1.0) {
        return None;
    }
    let reach = 0.5 * u.distance(&path.knots[i - 1]).min(u.distance(&path.knots[i + 1]));
    let mut tau = policy.initial_step.min(reach / g2.sqrt());
    for _ in 0..policy.max_backtracks {
        let trial = u.axpy(-tau, &g);
        if f.value(&trial) <= v0 - policy.armijo * tau * g2 {
            return Some(trial);
        }
        tau *= policy.shrink;
    }
    None
}

/// Normal gradient components below this (relative) are treated as zero.
const NORMAL_FLOOR: f64 = 1e-13;

fn anchor_indices(path: &DiscretePath, frozen: &[usize]) -> Vec<usize> {
    let mut a = vec![0, path.mid(), path.intervals()];
    a.extend(frozen.iter().copied().filter(|&i| i <= path.intervals()));
    a.sort_unstable();
    a.dedup();
    a
}

/// Equal-arclength redistribution of the knots strictly between consecutive
/// anchors; anchors are copied bitwise.
fn reparametrize(path: &DiscretePath, anchors: &[usize]) -> DiscretePath {
    let mut knots = path.knots.clone();
    for w in anchors.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 2 {
            continue;
        }
        let seg = &path.knots[a..=b];
        let mut cum = vec![0.0];
        for p in seg.windows(2) {
            cum.push(cum.last().unwrap() + p[0].distance(&p[1]));
        }
        let total = *cum.last().unwrap();
        if total == 0.0 {
            continue;
        }
        let mut j = 0;
        for k in 1..(b - a) {
            let s = total * k as f64 / (b - a) as f64;
            while j + 1 < cum.len() - 1 && cum[j + 1] < s {
                j += 1;
            }
            let len = cum[j + 1] - cum[j];
            let t = if len > 0.0 { (s - cum[j]) / len } else { 0.0 };
            knots[a + k] = lerp(&seg[j], &seg[j + 1], t);
        }
    }
    DiscretePath { knots }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverBudgets {
    pub knots: usize,
    pub ensemble: usize,
    /// Relaxation steps per phase (before and after each refinement).
    pub max_iterations: usize,
    pub refinements: usize,
    pub climb_iterations: usize,
    /// Relative change of the path max counted as no progress.
    pub convergence_tol: f64,
    /// Consecutive no-progress steps that end a phase.
    pub patience: usize,
    /// Target norm of the projected gradient at the climbing knot.
    pub gradient_tol: f64,
    /// Seed-path perturbation size relative to `‖e‖`.
    pub perturbation: f64,
}

impl Default for SolverBudgets {
    fn default() -> Self {
        Self {
            knots: 64,
            ensemble: 8,
            max_iterations: 500,
            refinements: 1,
            climb_iterations: 5000,
            convergence_tol: 1e-10,
            patience: 10,
            gradient_tol: 1e-11,
            perturbation: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub budgets: SolverBudgets,
    pub policy: StepPolicy,
    pub search_space: SearchSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// `ĉ - 2ε <= φ(û) <= ĉ + 2ε`.
    pub level: bool,
    /// `‖∇φ(û)‖ < 2ε`.
    pub gradient: bool,
}

impl Certificates {
    pub fn evaluate(c_hat: f64, phi: f64, grad_norm: f64, eps: f64) -> Self {
        Self {
            level: c_hat - 2.0 * eps <= phi && phi <= c_hat + 2.0 * eps,
            gradient: grad_norm < 2.0 * eps,
        }
    }

    pub fn all(&self) -> bool {
        self.level && self.gradient
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSummary {
    pub index: usize,
    pub final_max: f64,
    pub iterations: usize,
    pub stalled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxReport {
    pub c_hat: f64,
    pub u_hat: PeriodicSequence,
    pub grad_norm: f64,
    pub phi_u_hat: f64,
    pub iterations: usize,
    pub climb_iterations: usize,
    pub eps: f64,
    pub certificates: Certificates,
    /// `max(φ(0), φ(e))`.
    pub c1: f64,
    pub e1_level: f64,
    pub max_index: usize,
    /// The best path peaks at a pinned knot, so no free knot can climb.
    pub max_at_pinned: bool,
    pub search_space: SearchSpace,
    pub subspace_dimension: usize,
    pub members: Vec<MemberSummary>,
    /// Running ensemble minimum of the path max, per relaxation step.
    pub c_hat_trace: Vec<f64>,
    pub path: DiscretePath,
}

struct MemberRun {
    path: DiscretePath,
    trace: Vec<f64>,
    iterations: usize,
    stalled: bool,
}

fn relax_phase(
    mut path: DiscretePath,
    f: &dyn Objective,
    opts: &SolverOptions,
    space: &Subspace,
    trace: &mut Vec<f64>,
) -> (DiscretePath, usize, bool) {
    let b = &opts.budgets;
    let mut last = path_max(&path, f).1;
    let mut quiet = 0;
    for it in 0..b.max_iterations {
        let out = relax_in(&path, f, &opts.policy, space, &[]);
        if out.stalled {
            return (path, it, true);
        }
        path = out.path;
        let now = path_max(&path, f).1;
        trace.push(now);
        if (last - now).abs() <= b.convergence_tol * (1.0 + now.abs()) {
            quiet += 1;
            if quiet >= b.patience {
                return (path, it + 1, false);
            }
        } else {
            quiet = 0;
        }
        last = now;
    }
    (path, b.max_iterations, false)
}

fn perturbed(base: &DiscretePath, space: &Subspace, amplitude: f64, seed: u64, member: usize) -> DiscretePath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member as u64);
    let half = base.mid();
    let knots = base
        .knots
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let dir = random_unit(u.period(), &mut rng);
            if base.is_pinned(i) {
                return u.clone();
            }
            let frac = (i % half) as f64 / half as f64;
            let bump = (std::f64::consts::PI * frac).sin();
            u.axpy(amplitude * bump, &space.project(&dir))
        })
        .collect();
    DiscretePath { knots }
}

fn run_member(base: &DiscretePath, f: &dyn Objective, opts: &SolverOptions, space: &Subspace, amplitude: f64, seed: u64, member: usize) -> MemberRun {
    let mut path = perturbed(base, space, amplitude, seed, member);
    let mut trace = vec![path_max(&path, f).1];
    let mut iterations = 0;
    let mut stalled = false;
    for phase in 0..=opts.budgets.refinements {
        if phase > 0 {
            path = path.refined();
            trace.push(path_max(&path, f).1);
        }
        let (p, it, st) = relax_phase(path, f, opts, space, &mut trace);
        path = p;
        iterations += it;
        stalled = st;
    }
    MemberRun { path, trace, iterations, stalled }
}

/// Climbing-image iteration on knot `i`: ascend along the local tangent,
/// descend across it, while the remaining knots keep relaxing with `i`
/// frozen.
fn climb(mut path: DiscretePath, i: usize, f: &dyn Objective, opts: &SolverOptions, space: &Subspace) -> (DiscretePath, usize) {
    let mut tau = 0.5;
    let mut g = space.project(&f.gradient(&path.knots[i]));
    for it in 0..opts.budgets.climb_iterations {
        let gn = g.norm();
        if gn < opts.budgets.gradient_tol {
            return (path, it);
        }
        let dir = match tangent(&path, i, space) {
            Some(t) => g.scale(-1.0).axpy(2.0 * g.dot(&t), &t),
            None => g.scale(-1.0),
        };
        let candidate = path.knots[i].axpy(tau, &dir);
        let g_new = space.project(&f.gradient(&candidate));
        if g_new.norm() > gn {
            tau = (tau * 0.5).max(1e-8);
        }
        path.knots[i] = candidate;
        g = g_new;
        let out = relax_in(&path, f, &opts.policy, space, &[i]);
        if !out.stalled {
            path = out.path;
        }
    }
    (path, opts.budgets.climb_iterations)
}

/// Pinned-path minimax from the given geometry.
pub fn mountain_pass_solve(
    f: &dyn Objective,
    geometry: &MountainGeometry,
    eps: f64,
    opts: &SolverOptions,
    seed: u64,
) -> Result<MinimaxReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter { name: "eps", reason: format!("must be positive, got {eps}") });
    }
    if opts.budgets.ensemble == 0 {
        return Err(Error::InvalidParameter { name: "ensemble", reason: "must be at least 1".into() });
    }
    geometry.validate(f)?;
    let m = f.period();
    let space = match opts.search_space {
        SearchSpace::Full => Subspace::full(m),
        SearchSpace::Symmetric => Subspace::fixed(m, &stabilizer(&f.symmetries(), &[&geometry.e1, &geometry.e])),
    };
    let base = init_path(geometry, opts.budgets.knots)?;
    let amplitude = opts.budgets.perturbation * geometry.e.norm();
    let runs: Vec<MemberRun> = (0..opts.budgets.ensemble)
        .into_par_iter()
        .map(|k| run_member(&base, f, opts, &space, amplitude, seed, k))
        .collect();

    let mut best = 0;
    let finals: Vec<f64> = runs.iter().map(|r| path_max(&r.path, f).1).collect();
    for (k, v) in finals.iter().enumerate() {
        if *v < finals[best] {
            best = k;
        }
    }
    let steps = runs.iter().map(|r| r.trace.len()).max().unwrap_or(0);
    let mut c_hat_trace = Vec::with_capacity(steps);
    let mut running = f64::INFINITY;
    for s in 0..steps {
        for r in &runs {
            let v = r.trace.get(s).or(r.trace.last()).copied().unwrap_or(f64::INFINITY);
            running = running.min(v);
        }
        c_hat_trace.push(running);
    }

    let mut path = runs[best].path.clone();
    let (mut max_index, _) = path_max(&path, f);
    let max_at_pinned = path.is_pinned(max_index);
    let mut climb_iterations = 0;
    if !max_at_pinned {
        let (p, it) = climb(path, max_index, f, opts, &space);
        path = p;
        climb_iterations = it;
        max_index = path_max(&path, f).0;
    }
    let c_hat = path_max(&path, f).1;
    let u_hat = path.knots[max_index].clone();
    let phi_u_hat = f.value(&u_hat);
    let grad_norm = f.gradient(&u_hat).norm();
    let zero = PeriodicSequence::zeros(m);
    let members = runs
        .iter()
        .zip(&finals)
        .enumerate()
        .map(|(index, (r, &final_max))| MemberSummary { index, final_max, iterations: r.iterations, stalled: r.stalled })
        .collect();
    Ok(MinimaxReport {
        c_hat,
        certificates: Certificates::evaluate(c_hat, phi_u_hat, grad_norm, eps),
        u_hat,
        grad_norm,
        phi_u_hat,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        climb_iterations,
        eps,
        c1: f.value(&zero).max(f.value(&geometry.e)),
        e1_level: f.value(&geometry.e1),
        max_index,
        max_at_pinned,
        search_space: opts.search_space,
        subspace_dimension: space.dimension(),
        members,
        c_hat_trace,
        path,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub phi: f64,
    pub grad_norm: f64,
    pub certificates: Certificates,
}

const CERTIFY_TOL: f64 = 1e-12;

/// Recomputes `φ(û)` and `‖∇φ(û)‖` and re-checks both inequalities against
/// the stored `ĉ` and `ε`. Disagreement with the stored record is an error.
pub fn certify_report(report: &MinimaxReport, f: &dyn Objective) -> Result<CertificateRecord> {
    let phi = f.value(&report.u_hat);
    let grad_norm = f.gradient(&report.u_hat).norm();
    let certificates = Certificates::evaluate(report.c_hat, phi, grad_norm, report.eps);
    if (phi - report.phi_u_hat).abs() > CERTIFY_TOL || (grad_norm - report.grad_norm).abs() > CERTIFY_TOL {
        return Err(Error::CertificateMismatch(format!(
            "stored phi = {}, grad = {}; recomputed phi = {phi}, grad = {grad_norm}",
            report.phi_u_hat, report.grad_norm
        )));
    }
    if certificates != report.certificates {
        return Err(Error::CertificateMismatch(format!(
            "stored flags {:?}, recomputed {certificates:?}",
            report.certificates
        )));
    }
    Ok(CertificateRecord { phi, grad_norm, certificates })
}

/// `φ(u) = level - ½⟨w, a⟩² + ½(‖w‖² - ⟨w, a⟩²)` with `w = u - center` and
/// unit axis `a`: one saddle, at `center`, of index one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticToy {
    pub center: PeriodicSequence,
    pub axis: PeriodicSequence,
    pub level: f64,
}

impl QuadraticToy {
    /// Saddle at `s·axis`.
    pub fn on_axis(axis: &PeriodicSequence, s: f64, level: f64) -> Result<Self> {
        let n = axis.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter { name: "axis", reason: "must be nonzero".into() });
        }
        let axis = axis.scale(1.0 / n);
        Ok(Self { center: axis.scale(s), axis, level })
    }

    /// `e1` and `e` at `center ∓ δ·axis`, on either side of the saddle.
    pub fn geometry(&self, delta: f64) -> Result<MountainGeometry> {
        let e1 = self.center.axpy(-delta, &self.axis);
        let e = self.center.axpy(delta, &self.axis);
        let g = MountainGeometry {
            r: (e1.norm() * e.norm()).sqrt(),
            level: self.value(&e1),
            e,
            e1,
            w4: None,
            direction: Some(self.axis.clone()),
        };
        g.validate(self)?;
        Ok(g)
    }
}

impl Objective for QuadraticToy {
    fn period(&self) -> usize {
        self.center.period()
    }

    fn value(&self, u: &PeriodicSequence) -> f64 {
        let w = u.sub(&self.center);
        let along = w.dot(&self.axis);
        self.level - 0.5 * along * along + 0.5 * (w.norm_squared() - along * along)
    }

    fn gradient(&self, u: &PeriodicSequence) -> PeriodicSequence {
        let w = u.sub(&self.center);
        let along = w.dot(&self.axis);
        w.axpy(-2.0 * along, &self.axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{find_ray_geometry, FunctionalSpec};
    use crate::potentials::{PotentialSpec, WeightFunction};

    fn desk() -> FunctionalSpec {
        FunctionalSpec::standard(PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap())
    }

    fn mode() -> PeriodicSequence {
        PeriodicSequence::new(vec![1.0, -1.0, 0.0, 1.0, -1.0, 0.0]).unwrap()
    }

    fn toy() -> (QuadraticToy, MountainGeometry) {
        let axis = PeriodicSequence::new(vec![1.0, 2.0, 0.0, -1.0, 0.5, 0.0]).unwrap();
        let t = QuadraticToy::on_axis(&axis, 2.0, 1.0).unwrap();
        let g = t.geometry(0.8).unwrap();
        (t, g)
    }

    #[test]
    fn init_path_shape() {
        let (_, g) = toy();
        let p = init_path(&g, 8).unwrap();
        assert_eq!(p.knots().len(), 9);
        assert_eq!(p.knots()[4], g.e1);
        assert_eq!(p.knots()[8], g.e);
        assert_eq!(p.knots()[0], PeriodicSequence::zeros(6));
        assert!(init_path(&g, 7).is_err());
        assert!(init_path(&g, 6).is_err());
        let bad = MountainGeometry { e: g.e1.clone(), ..g.clone() };
        assert!(init_path(&bad, 8).is_err());
    }

    #[test]
    fn path_max_at_least_e1_level() {
        let (t, g) = toy();
        for n in [8, 16, 64] {
            let p = init_path(&g, n).unwrap();
            assert!(path_max(&p, &t).1 >= t.value(&g.e1));
        }
    }

    #[test]
    fn pins_are_bitwise_preserved() {
        let (t, g) = toy();
        let p = perturbed(&init_path(&g, 16).unwrap(), &Subspace::full(6), 0.1, 1, 0);
        let mut out = relax_step(&p, &t, &StepPolicy::default());
        for _ in 0..5 {
            out = relax_step(&out.path, &t, &StepPolicy::default());
        }
        for i in [0, 8, 16] {
            assert_eq!(out.path.knots()[i], p.knots()[i]);
        }
        let (lo, hi) = out.path.spacing_ratio();
        assert!(lo >= 0.5 && hi <= 2.0, "{lo} {hi}");
    }

    #[test]
    fn critical_toy_path_stalls() {
        // φ(u) = 0 has zero gradient everywhere.
        struct Flat;
        impl Objective for Flat {
            fn period(&self) -> usize {
                3
            }
            fn value(&self, _: &PeriodicSequence) -> f64 {
                0.0
            }
            fn gradient(&self, u: &PeriodicSequence) -> PeriodicSequence {
                PeriodicSequence::zeros(u.period())
            }
        }
        let g = MountainGeometry {
            e1: PeriodicSequence::constant(3, 1.0),
            e: PeriodicSequence::constant(3, 2.0),
            r: 2.4,
            level: 0.0,
            w4: None,
            direction: None,
        };
        let p = init_path(&g, 8).unwrap();
        let out = relax_step(&p, &Flat, &StepPolicy::default());
        assert!(out.stalled);
        assert_eq!(out.path, p);
    }

    #[test]
    fn desk_descent_lowers_max() {
        let f = desk();
        let g = find_ray_geometry(&f, &mode(), 0.3, 3.0).unwrap();
        let mut p = perturbed(&init_path(&g, 32).unwrap(), &Subspace::full(6), 0.1, 3, 0);
        let start = path_max(&p, &f).1;
        for _ in 0..50 {
            p = relax_step(&p, &f, &StepPolicy::default()).path;
        }
        assert!(path_max(&p, &f).1 < start);
    }

    #[test]
    fn quadratic_toy_saddle() {
        let (t, g) = toy();
        let opts = SolverOptions { budgets: SolverBudgets { ensemble: 4, ..Default::default() }, ..Default::default() };
        let r = mountain_pass_solve(&t, &g, 0.01, &opts, 11).unwrap();
        assert!(r.u_hat.distance(&t.center) < 1e-8, "{:?}", r.u_hat);
        assert!(r.grad_norm <= 1e-8);
        assert!((r.c_hat - 1.0).abs() < 1e-12);
        assert!(r.certificates.all());
        assert!(!r.max_at_pinned);
        certify_report(&r, &t).unwrap();
    }

    #[test]
    fn running_estimate_is_monotone() {
        let (t, g) = toy();
        let opts = SolverOptions { budgets: SolverBudgets { ensemble: 3, ..Default::default() }, ..Default::default() };
        let r = mountain_pass_solve(&t, &g, 0.1, &opts, 2).unwrap();
        assert!(r.c_hat_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.c_hat >= r.e1_level - 1e-10);
    }

    #[test]
    fn desk_symmetric_solve() {
        let f = desk();
        let g = find_ray_geometry(&f, &mode(), 0.3, 3.0).unwrap();
        let opts = SolverOptions { search_space: SearchSpace::Symmetric, ..Default::default() };
        let r = mountain_pass_solve(&f, &g, 0.01, &opts, 7).unwrap();
        assert_eq!(r.subspace_dimension, 1);
        let a = 1.131_102_585_651_302;
        assert!(r.u_hat.distance(&mode().scale(a)) < 1e-8, "{:?}", r.u_hat);
        assert!((r.c_hat - 0.625_804_194_079_397_5).abs() < 1e-10);
        assert!(r.certificates.all());
        let record = certify_report(&r, &f).unwrap();
        assert!(record.certificates.all());
    }

    #[test]
    fn certificate_edits() {
        let (t, g) = toy();
        let opts = SolverOptions { budgets: SolverBudgets { ensemble: 2, ..Default::default() }, ..Default::default() };
        let r = mountain_pass_solve(&t, &g, 0.01, &opts, 5).unwrap();
        let mut bumped = r.clone();
        bumped.u_hat.set(1, bumped.u_hat.at(1) + 0.1);
        bumped.phi_u_hat = t.value(&bumped.u_hat);
        bumped.grad_norm = t.gradient(&bumped.u_hat).norm();
        bumped.certificates = Certificates::evaluate(bumped.c_hat, bumped.phi_u_hat, bumped.grad_norm, bumped.eps);
        assert!(!bumped.certificates.gradient);
        certify_report(&bumped, &t).unwrap();
        let mut wide = r.clone();
        wide.eps *= 10.0;
        assert!(certify_report(&wide, &t).unwrap().certificates.all());
        let mut forged = r.clone();
        forged.certificates.gradient = false;
        assert!(certify_report(&forged, &t).is_err());
    }

    #[test]
    fn deterministic_reports() {
        let (t, g) = toy();
        let opts = SolverOptions { budgets: SolverBudgets { ensemble: 3, ..Default::default() }, ..Default::default() };
        let a = mountain_pass_solve(&t, &g, 0.1, &opts, 9).unwrap();
        let b = mountain_pass_solve(&t, &g, 0.1, &opts, 9).unwrap();
        assert_eq!(a, b);
    }
}
