//! Shared fixtures for the benchmarks.

use dmpass_core::{FunctionalSpec, PeriodicSequence, PotentialSpec, WeightFunction};

pub fn desk() -> PotentialSpec {
    PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(6), 6).expect("valid desk parameters")
}

pub fn desk_functional() -> FunctionalSpec {
    FunctionalSpec::standard(desk())
}

pub fn mode() -> PeriodicSequence {
    PeriodicSequence::new(vec![1.0, -1.0, 0.0, 1.0, -1.0, 0.0]).expect("finite values")
}
