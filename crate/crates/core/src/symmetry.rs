//! Index symmetries of the periodic problem: cyclic shifts, reflections and
//! the global sign flip, and the fixed subspaces they cut out.
//!
//! An operation acts by `(T u)_n = s · u_{σ(n)}` with `σ(n) = n + k` (shift)
//! or `σ(n) = k - n` (reflection) and `s = ±1`. The kinetic term is invariant
//! under all of them; whether the potential is has to be checked.

use serde::{Deserialize, Serialize};

use crate::potentials::PotentialSpec;
use crate::space::PeriodicSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryOp {
    pub offset: i64,
    pub reflect: bool,
    pub negate: bool,
}

impl SymmetryOp {
    pub const IDENTITY: SymmetryOp = SymmetryOp { offset: 0, reflect: false, negate: false };

    pub fn shift(k: i64) -> Self {
        Self { offset: k, reflect: false, negate: false }
    }

    pub fn reflection(k: i64) -> Self {
        Self { offset: k, reflect: true, negate: false }
    }

    pub fn negated(self) -> Self {
        Self { negate: !self.negate, ..self }
    }

    /// The index map σ.
    pub fn index(&self, n: i64) -> i64 {
        if self.reflect { self.offset - n } else { n + self.offset }
    }

    fn inverse_index(&self, n: i64) -> i64 {
        if self.reflect { self.offset - n } else { n - self.offset }
    }

    pub fn apply(&self, u: &PeriodicSequence) -> PeriodicSequence {
        let s = if self.negate { -1.0 } else { 1.0 };
        let m = u.period() as i64;
        PeriodicSequence::from_raw((1..=m).map(|n| s * u.at(self.index(n))).collect())
    }

    /// Same action on the period modulo `M`, used for deduplication.
    fn normalized(&self, period: usize) -> Self {
        Self { offset: self.offset.rem_euclid(period as i64), ..*self }
    }
}

/// All `4M` dihedral-times-sign operations on period `M`.
pub fn all_ops(period: usize) -> Vec<SymmetryOp> {
    let m = period as i64;
    let mut ops = Vec::with_capacity(4 * period);
    for negate in [false, true] {
        for reflect in [false, true] {
            for offset in 0..m {
                ops.push(SymmetryOp { offset, reflect, negate });
            }
        }
    }
    ops
}

const SYMMETRY_SAMPLES: usize = 41;
const SYMMETRY_RANGE: f64 = 5.0;

/// Operations `T` with `F(σ⁻¹(m), s·x) = F(m, x)` for every index and every
/// sampled `x`, i.e. those leaving `Σ F(n, u_n)` invariant.
pub fn potential_symmetries(p: &PotentialSpec) -> Vec<SymmetryOp> {
    let m = p.period as i64;
    let xs: Vec<f64> = (0..SYMMETRY_SAMPLES)
        .map(|i| -SYMMETRY_RANGE + 2.0 * SYMMETRY_RANGE * i as f64 / (SYMMETRY_SAMPLES - 1) as f64)
        .collect();
    all_ops(p.period)
        .into_iter()
        .filter(|op| {
            let s = if op.negate { -1.0 } else { 1.0 };
            (1..=m).all(|n| {
                xs.iter().all(|&x| {
                    let a = p.eval(op.inverse_index(n), s * x);
                    let b = p.eval(n, x);
                    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
                })
            })
        })
        .collect()
}

/// Elements of `ops` that fix every point in `points`.
pub fn stabilizer(ops: &[SymmetryOp], points: &[&PeriodicSequence]) -> Vec<SymmetryOp> {
    ops.iter()
        .copied()
        .filter(|op| {
            points.iter().all(|u| {
                let scale = 1.0 + u.max_abs();
                op.apply(u).distance(u) <= 1e-12 * scale
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    #[default]
    Full,
    /// Fixed subspace of the stabilizer of the pinned points.
    Symmetric,
}

/// A linear subspace given as the fixed space of a finite group of
/// operations; the orthogonal projector is the group average.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    period: usize,
    group: Vec<SymmetryOp>,
}

impl Subspace {
    pub fn full(period: usize) -> Self {
        Self { period, group: vec![SymmetryOp::IDENTITY] }
    }

    /// `group` must be closed under composition; duplicates modulo the
    /// period are dropped and the identity is always included.
    pub fn fixed(period: usize, group: &[SymmetryOp]) -> Self {
        let mut ops = vec![SymmetryOp::IDENTITY];
        for op in group {
            let op = op.normalized(period);
            if !ops.contains(&op) {
                ops.push(op);
            }
        }
        Self { period, group: ops }
    }

    pub fn group(&self) -> &[SymmetryOp] {
        &self.group
    }

    pub fn is_full(&self) -> bool {
        self.group.len() == 1
    }

    pub fn project(&self, u: &PeriodicSequence) -> PeriodicSequence {
        if self.is_full() {
            return u.clone();
        }
        let mut acc = vec![0.0; self.period];
        for op in &self.group {
            for (a, v) in acc.iter_mut().zip(op.apply(u).values()) {
                *a += v;
            }
        }
        let k = self.group.len() as f64;
        PeriodicSequence::from_raw(acc.into_iter().map(|v| v / k).collect())
    }

    /// Dimension, from the trace of the projector.
    pub fn dimension(&self) -> usize {
        let mut trace = 0.0;
        for i in 1..=self.period as i64 {
            let mut unit = PeriodicSequence::zeros(self.period);
            unit.set(i, 1.0);
            trace += self.project(&unit).at(i);
        }
        trace.round() as usize
    }
}

/// Smallest distance from `u` to the orbit of `v`.
pub fn orbit_distance(ops: &[SymmetryOp], u: &PeriodicSequence, v: &PeriodicSequence) -> (f64, SymmetryOp) {
    let mut best = (u.distance(v), SymmetryOp::IDENTITY);
    for op in ops {
        let d = u.distance(&op.apply(v));
        if d < best.0 {
            best = (d, *op);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::WeightFunction;

    fn desk() -> PotentialSpec {
        PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap()
    }

    fn seq(v: &[f64]) -> PeriodicSequence {
        PeriodicSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shift_and_reflection_act_on_indices() {
        let u = seq(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(SymmetryOp::shift(1).apply(&u), u.shifted(1));
        assert_eq!(SymmetryOp::reflection(5).apply(&u), u.reflected(5));
        assert_eq!(SymmetryOp::shift(0).negated().apply(&u), u.scale(-1.0));
    }

    #[test]
    fn autonomous_even_potential_has_full_group() {
        assert_eq!(potential_symmetries(&desk()).len(), 24);
    }

    #[test]
    fn cosine_weight_breaks_shifts() {
        let p = PotentialSpec::example1(3.0, 1.0, WeightFunction::cosine(0.5, 6), 6).unwrap();
        let ops = potential_symmetries(&p);
        assert!(ops.iter().all(|op| op.offset.rem_euclid(6) == 0));
        assert!(ops.contains(&SymmetryOp::reflection(0)));
        assert_eq!(ops.len(), 4);
    }

    #[test]
    fn desk_direction_stabilizer_fixes_a_line() {
        let d = seq(&[1.0, -1.0, 0.0, 1.0, -1.0, 0.0]);
        let h = stabilizer(&potential_symmetries(&desk()), &[&d]);
        assert!(h.contains(&SymmetryOp::shift(3)));
        assert!(h.contains(&SymmetryOp::reflection(3).negated()));
        let s = Subspace::fixed(6, &h);
        assert_eq!(s.dimension(), 1);
        let u = seq(&[0.3, 1.0, -2.0, 0.5, 0.1, 7.0]);
        let pu = s.project(&u);
        let along = d.scale(u.dot(&d) / d.norm_squared());
        assert!(pu.distance(&along) < 1e-14);
    }

    #[test]
    fn projector_is_idempotent() {
        let d = seq(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let s = Subspace::fixed(6, &stabilizer(&potential_symmetries(&desk()), &[&d]));
        let u = seq(&[0.3, 1.0, -2.0, 0.5, 0.1, 7.0]);
        let p1 = s.project(&u);
        assert!(s.project(&p1).distance(&p1) < 1e-14);
        assert!(s.project(&d).distance(&d) < 1e-14);
    }

    #[test]
    fn orbit_distance_sees_shifts() {
        let u = seq(&[1.0, -1.0, 0.0, 1.0, -1.0, 0.0]);
        let ops = potential_symmetries(&desk());
        let (dist, _) = orbit_distance(&ops, &u.shifted(2).scale(-1.0), &u);
        assert!(dist < 1e-15);
    }
}
