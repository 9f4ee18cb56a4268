//! Sampled stand-in for set distances on the periodic space, where level
//! sets of the functional have no closed form. Distances are approximate.

use serde::{Deserialize, Serialize};

use crate::functional::{random_ball_samples, Objective};
use crate::space::PeriodicSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub lo: f64,
    pub hi: f64,
    pub points: Vec<PeriodicSequence>,
    pub draws: usize,
}

impl PointCloud {
    /// Rejection-samples `φ⁻¹([lo, hi])` inside the ball of `radius`.
    pub fn sample_band(f: &dyn Objective, lo: f64, hi: f64, radius: f64, draws: usize, seed: u64) -> Self {
        let points = random_ball_samples(f.period(), draws, radius, seed)
            .into_iter()
            .filter(|u| {
                let v = f.value(u);
                lo <= v && v <= hi
            })
            .collect();
        Self { lo, hi, points, draws }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nearest-neighbour distance to the cloud. Every cloud point lies in
    /// the band, so this bounds the true distance from above.
    pub fn distance(&self, u: &PeriodicSequence) -> Option<f64> {
        self.points.iter().map(|p| p.distance(u)).min_by(f64::total_cmp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::FunctionalSpec;
    use crate::potentials::PotentialSpec;

    #[test]
    fn cloud_upper_bounds_distance() {
        // F = 0: φ(u) = ½uᵀBu vanishes on constants.
        let f = FunctionalSpec::standard(PotentialSpec::zero(3));
        let cloud = PointCloud::sample_band(&f, 0.0, 0.5, 2.0, 4000, 1);
        assert!(!cloud.is_empty());
        let c = PeriodicSequence::constant(3, 0.2);
        let d = cloud.distance(&c).unwrap();
        assert!(d > 0.0 && d < 0.5);
        assert!(PointCloud { lo: 0.0, hi: 1.0, points: vec![], draws: 0 }.distance(&c).is_none());
    }
}
