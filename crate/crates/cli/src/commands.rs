//! The five subcommands. Each `*_body` function computes a report body;
//! [`run`] wraps it in the envelope and writes the files.

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::{Deserialize, Serialize};

use dmpass_core::deformation::{
    band_integrator, draw_samples, draw_willem_samples, flow, verify_sublevel_descent, verify_band_deformation, ConclusionVerdict,
    DeformationVerdict, ToyLandscape,
};
use dmpass_core::functional::{
    coercivity_check, phi_eval, phi_grad, ps_bound_check, random_ball_samples, A3Constants, BoundReport,
};
use dmpass_core::minimax::{certify_report, CertificateRecord};
use dmpass_core::oracle::{catalog_match, newton_refine, residual, CatalogMatch, NewtonOptions, NewtonOutcome, SingularPolicy};
use dmpass_core::potentials::{check_condition, ConditionId, ConditionReport, FittedConstants, Verdict};
use dmpass_core::spectrum::b_spectrum;
use dmpass_core::{
    mountain_pass_solve, multistart, FunctionalKind, FunctionalSpec, MinimaxReport, MountainGeometry, PotentialSpec,
    SolutionCatalog, Spectrum,
};

use crate::config::{FixedBlock, LoadedConfig};
use crate::report::{indexed, num, write_report, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Check,
    Solve,
    Deform,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Deform => "deform",
            Command::Oracle => "oracle",
        }
    }
}

pub fn spectrum_body(cfg: &LoadedConfig) -> Result<Spectrum> {
    Ok(b_spectrum(cfg.config.period)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub functional: String,
    pub coercivity: BoundReport,
    pub ps: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckBody {
    pub potential: PotentialSpec,
    pub conditions: Vec<ConditionReport>,
    /// Growth constants used for the bound checks.
    pub growth: Option<A3Constants>,
    pub bounds: Vec<BoundPair>,
    /// Why the bound checks did not run, when they did not.
    pub bounds_skipped: Option<String>,
}

pub fn check_body(cfg: &LoadedConfig) -> Result<CheckBody> {
    let p = cfg.potential()?;
    let params = cfg.check_params();
    let conditions = ConditionId::ALL
        .iter()
        .map(|&id| check_condition(&p, id, &params))
        .collect::<dmpass_core::Result<Vec<_>>>()?;
    let a3 = conditions.iter().find(|c| c.id == ConditionId::A3);
    let growth = cfg.growth().or_else(|| match a3.map(|c| c.constants) {
        Some(FittedConstants::A3 { w1, w2, w3 }) => Some(A3Constants { w1, w2, w3 }),
        _ => None,
    });
    let mut bounds = Vec::new();
    let mut bounds_skipped = None;
    match growth {
        None => bounds_skipped = Some("no growth constants".into()),
        Some(_) if a3.is_some_and(|c| c.verdict != Verdict::HoldsOnSample) => {
            bounds_skipped = Some("growth condition fails on the sample".into())
        }
        Some(g) => {
            let c = &cfg.config.check;
            let samples = random_ball_samples(p.period, c.samples, c.radius, cfg.seed);
            let mut functionals = vec![("standard".to_string(), FunctionalSpec::standard(p.clone()))];
            if let Ok(f) = cfg.functional() {
                if let FunctionalKind::Pinned { .. } = f.kind {
                    functionals.push(("pinned".into(), f));
                }
            }
            for (name, f) in functionals {
                let pair = coercivity_check(&f, &g, &samples, c.scan_points)
                    .and_then(|co| ps_bound_check(&f, &g, c.m1, &samples, c.scan_points).map(|ps| (co, ps)));
                match pair {
                    Ok((coercivity, ps)) => bounds.push(BoundPair { functional: name, coercivity, ps }),
                    Err(e) => bounds_skipped = Some(format!("{name}: {e}")),
                }
            }
        }
    }
    Ok(CheckBody { potential: p, conditions, growth, bounds, bounds_skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub newton: NewtonOutcome,
    pub residual: f64,
    pub grad_norm: f64,
    pub phi: f64,
    /// Positive standard-functional value: neither zero nor constant.
    pub nontrivial: bool,
    pub catalog_match: CatalogMatch,
    pub catalog_entries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveBody {
    pub functional: FunctionalSpec,
    pub geometry: MountainGeometry,
    pub minimax: MinimaxReport,
    pub certificate_replay: CertificateRecord,
    /// Newton polishing of û on the difference system; standard kind only.
    pub refinement: Option<Refinement>,
    pub refinement_error: Option<String>,
}

pub fn solve_body(cfg: &LoadedConfig) -> Result<SolveBody> {
    let f = cfg.functional()?;
    let geometry = cfg.geometry(&f)?;
    let s = &cfg.config.solver;
    let minimax = mountain_pass_solve(&f, &geometry, s.eps, &cfg.solver_options(), cfg.seed)?;
    let certificate_replay = certify_report(&minimax, &f)?;
    let (mut refinement, mut refinement_error) = (None, None);
    if f.kind == FunctionalKind::Standard {
        let opts = NewtonOptions { tol: s.newton_tol, max_iter: s.newton_max_iter, policy: SingularPolicy::Error, ..Default::default() };
        match newton_refine(&minimax.u_hat, &f.potential, &opts) {
            Ok(newton) => {
                let catalog = multistart(&f.potential, &cfg.multistart_spec(), cfg.seed)?;
                let u = &newton.u;
                let phi = phi_eval(&f, u);
                refinement = Some(Refinement {
                    residual: residual(u, &f.potential),
                    grad_norm: phi_grad(&f, u).norm(),
                    phi,
                    nontrivial: phi > 0.0,
                    catalog_match: catalog_match(&catalog, u, s.match_tol)?,
                    catalog_entries: catalog.entries.len(),
                    newton,
                });
            }
            Err(e) => refinement_error = Some(e.to_string()),
        }
    }
    Ok(SolveBody { functional: f, geometry, minimax, certificate_replay, refinement, refinement_error })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandVerdict {
    pub fixed: FixedBlock,
    pub verdict: DeformationVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformBody {
    pub landscape: ToyLandscape,
    pub seed: u64,
    pub bands: Vec<BandVerdict>,
    pub baseline_level: f64,
    pub baseline: ConclusionVerdict,
}

pub fn deform_body(cfg: &LoadedConfig) -> Result<DeformBody> {
    let land = cfg.landscape()?;
    let d = &cfg.config.deform;
    let mut bands = Vec::new();
    for (k, (fixed, band)) in cfg.bands()?.into_iter().enumerate() {
        let samples = draw_samples(&land, &band, d.samples, cfg.seed.wrapping_add(k as u64));
        bands.push(BandVerdict { fixed, verdict: verify_band_deformation(&land, &band, &samples, d.tol, cfg.seed) });
    }
    let starts = draw_willem_samples(&land, d.c, d.eps, d.samples, cfg.seed);
    let baseline = verify_sublevel_descent(&land, d.c, d.eps, &starts, d.tol);
    Ok(DeformBody { landscape: land, seed: cfg.seed, bands, baseline_level: d.c, baseline })
}

pub fn oracle_body(cfg: &LoadedConfig) -> Result<SolutionCatalog> {
    Ok(multistart(&cfg.potential()?, &cfg.multistart_spec(), cfg.seed)?)
}

/// Files written by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: PathBuf,
    pub csv: Vec<PathBuf>,
}

pub fn run(command: Command, cfg: &LoadedConfig, out: &Path) -> Result<RunOutput> {
    let csv = cfg.config.output.csv.unwrap_or(true);
    let name = command.name();
    let (report, files) = match command {
        Command::Spectrum => (write_report(out, &Report::new(name, spectrum_body(cfg)?))?, vec![]),
        Command::Check => (write_report(out, &Report::new(name, check_body(cfg)?))?, vec![]),
        Command::Solve => {
            let body = solve_body(cfg)?;
            let files = if csv { solve_csv(&body, out)? } else { vec![] };
            (write_report(out, &Report::new(name, body))?, files)
        }
        Command::Deform => {
            let body = deform_body(cfg)?;
            let files = if csv { deform_csv(&body, cfg, out)? } else { vec![] };
            (write_report(out, &Report::new(name, body))?, files)
        }
        Command::Oracle => {
            let body = oracle_body(cfg)?;
            let files = if csv { vec![catalog_csv(&body, out)?] } else { vec![] };
            (write_report(out, &Report::new(name, body))?, files)
        }
    };
    Ok(RunOutput { report, csv: files })
}

fn solve_csv(body: &SolveBody, out: &Path) -> Result<Vec<PathBuf>> {
    let m = body.functional.potential.period;
    let mut header = vec!["knot".to_string(), "phi".to_string()];
    header.extend(indexed("u", m));
    let mut path = Table::new(&header)?;
    for (i, k) in body.minimax.path.knots().iter().enumerate() {
        let mut row = vec![i.to_string(), num(phi_eval(&body.functional, k))];
        row.extend(k.values().iter().map(|&x| num(x)));
        path.row(&row)?;
    }
    let mut trace = Table::new(&["step".into(), "c_hat".into()])?;
    for (i, c) in body.minimax.c_hat_trace.iter().enumerate() {
        trace.row(&[i.to_string(), num(*c)])?;
    }
    let mut solution = Table::new(&["n".into(), "u_hat".into(), "u_refined".into()])?;
    for n in 1..=m {
        let refined = body.refinement.as_ref().map(|r| num(r.newton.u.at(n as i64))).unwrap_or_default();
        solution.row(&[n.to_string(), num(body.minimax.u_hat.at(n as i64)), refined])?;
    }
    let files = [out.join("solve_path.csv"), out.join("solve_trace.csv"), out.join("solve_solution.csv")];
    path.write(&files[0])?;
    trace.write(&files[1])?;
    solution.write(&files[2])?;
    Ok(files.to_vec())
}

fn deform_csv(body: &DeformBody, cfg: &LoadedConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let mut w = Table::new(
        &["band", "conclusion", "index", "phi_start", "phi_end", "passed", "error"].map(String::from),
    )?;
    let label = |f: FixedBlock| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    for b in &body.bands {
        for c in &b.verdict.conclusions {
            for (i, x) in c.witnesses.iter().enumerate() {
                w.row(&[
                    label(b.fixed),
                    c.conclusion.clone(),
                    i.to_string(),
                    num(x.phi_start),
                    num(x.phi_end),
                    x.passed.to_string(),
                    x.error.clone().unwrap_or_default(),
                ])?;
            }
        }
    }
    let mut t = Table::new(&["band", "set", "trace", "t", "phi", "psi", "dphi_dt", "psi_integral"].map(String::from))?;
    let d = &cfg.config.deform;
    for (k, (fixed, band)) in cfg.bands()?.into_iter().enumerate() {
        let samples = draw_samples(&body.landscape, &band, d.samples, cfg.seed.wrapping_add(k as u64));
        let opts = band_integrator(band.eps);
        for (set, starts) in [("b", &samples.b), ("c", &samples.c)] {
            for (i, v) in starts.iter().take(d.traces).enumerate() {
                let tr = flow(&body.landscape, &band, v, 2.0 * band.eps, &opts)?;
                for j in 0..tr.times.len() {
                    t.row(&[
                        label(fixed),
                        set.into(),
                        i.to_string(),
                        num(tr.times[j]),
                        num(tr.phi[j]),
                        num(tr.psi[j]),
                        num(tr.dphi_dt[j]),
                        num(tr.psi_integral[j]),
                    ])?;
                }
            }
        }
    }
    let files = [out.join("deform_witnesses.csv"), out.join("deform_traces.csv")];
    w.write(&files[0])?;
    t.write(&files[1])?;
    Ok(files.to_vec())
}

fn catalog_csv(c: &SolutionCatalog, out: &Path) -> Result<PathBuf> {
    let mut header = ["index", "class", "hits", "residual", "phi_standard"].map(String::from).to_vec();
    header.extend(indexed("u", c.period));
    let mut t = Table::new(&header)?;
    for (i, e) in c.entries.iter().enumerate() {
        let class = serde_json::to_value(e.class)?.as_str().unwrap_or_default().to_string();
        let mut row = vec![i.to_string(), class, e.hits.to_string(), num(e.residual), num(e.phi_standard)];
        row.extend(e.sequence.values().iter().map(|&x| num(x)));
        t.row(&row)?;
    }
    let path = out.join("oracle_catalog.csv");
    t.write(&path)?;
    Ok(path)
}
