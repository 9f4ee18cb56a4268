use dmpass_core::functional::{find_ray_geometry, phi_eval, FunctionalSpec};
use dmpass_core::minimax::{mountain_pass_solve, SolverBudgets, SolverOptions};
use dmpass_core::oracle::{catalog_match, multistart, newton_refine, MultistartSpec, NewtonOptions, SolutionClass};
use dmpass_core::{PeriodicSequence, PotentialSpec, SearchSpace, SolutionCatalog, WeightFunction};

fn desk() -> PotentialSpec {
    PotentialSpec::example2(2.5, 1.0, 1.0, WeightFunction::zero(6), 6).unwrap()
}

fn mode() -> PeriodicSequence {
    PeriodicSequence::new(vec![1.0, -1.0, 0.0, 1.0, -1.0, 0.0]).unwrap()
}

#[test]
fn catalog_survives_json_and_reverifies() {
    let c = multistart(&desk(), &MultistartSpec { starts: 50, ..Default::default() }, 4).unwrap();
    let text = serde_json::to_string(&c).unwrap();
    let back: SolutionCatalog = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    assert!(back.reverify());
    assert!(c.entries.iter().any(|e| e.class == SolutionClass::Nontrivial));
}

#[test]
fn symmetric_solve_refines_into_the_catalog() {
    let f = FunctionalSpec::standard(desk());
    let g = find_ray_geometry(&f, &mode(), 0.3, 3.0).unwrap();
    let opts = SolverOptions {
        budgets: SolverBudgets { ensemble: 2, ..Default::default() },
        search_space: SearchSpace::Symmetric,
        ..Default::default()
    };
    let r = mountain_pass_solve(&f, &g, 0.05, &opts, 3).unwrap();
    let u = newton_refine(&r.u_hat, &desk(), &NewtonOptions::default()).unwrap().u;
    assert!(phi_eval(&f, &u) > 0.0);
    let c = multistart(&desk(), &MultistartSpec { starts: 50, ..Default::default() }, 4).unwrap();
    let m = catalog_match(&c, &u, 1e-6).unwrap();
    assert!(m.matched);
    assert_eq!(c.entries[m.index].class, SolutionClass::Nontrivial);
}

#[test]
fn full_space_solve_ends_on_the_pinned_knot() {
    let f = FunctionalSpec::standard(desk());
    let g = find_ray_geometry(&f, &mode(), 0.3, 3.0).unwrap();
    let opts = SolverOptions { budgets: SolverBudgets { ensemble: 2, ..Default::default() }, ..Default::default() };
    let r = mountain_pass_solve(&f, &g, 0.01, &opts, 3).unwrap();
    assert!(r.c_hat >= r.e1_level - 1e-10);
    assert!(r.c_hat < 0.62);
}
