//! Periodic solutions of second-order difference systems
//! `Δ²u_{n-1} + ∇F(n, u_n) = 0` by constrained mountain-pass minimax, with
//! numerical harnesses for the deformation construction behind it.
//!
//! Module map:
//!
//! * [`space`] and [`spectrum`]: the periodic space, differences, norms and
//!   the circulant matrix B.
//! * [`potentials`]: potential families and condition checks.
//! * [`functional`]: action functionals, growth bounds, mountain geometries.
//! * [`deformation`]: the cutoff ψ, its flow, and verdict harnesses.
//! * [`minimax`]: the pinned-path string solver.
//! * [`oracle`]: residuals, Newton polishing, multistart catalogs, ray scans.
//! * [`symmetry`]: shifts, reflections, sign flip and their fixed subspaces.

pub mod deformation;
pub mod error;
pub mod functional;
pub mod minimax;
pub mod oracle;
pub mod potentials;
pub mod space;
pub mod spectrum;
pub mod symmetry;

pub use error::{Error, Result};
pub use deformation::{BandSpec, DeformationVerdict, FixedSet, ToyLandscape};
pub use functional::{FunctionalKind, FunctionalSpec, MountainGeometry, Objective};
pub use minimax::{mountain_pass_solve, MinimaxReport, SolverOptions};
pub use oracle::{multistart, newton_refine, SolutionCatalog};
pub use potentials::{PotentialSpec, Profile, WeightFunction};
pub use space::PeriodicSequence;
pub use spectrum::{b_spectrum, Spectrum};
pub use symmetry::{SearchSpace, SymmetryOp};
