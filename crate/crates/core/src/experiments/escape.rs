use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{random_perturbation, simulate_observed, to_velocity, SimConfig};
use crate::field::{sobolev_norm, SpectralField};
use crate::lattice::Lattice;
use crate::stability::{check_normal_hyperbolicity, Regime, RegimeVerdict};

use super::{manifold_distance, ExperimentError};

#[derive(Clone, Debug)]
pub struct EscapeSetup {
    /// Radius of the `H²` neighbourhood of the polar manifold.
    pub rho: f64,
    pub seeds: Vec<u64>,
    /// `H²` size of the initial perturbation.
    pub h2: f64,
    /// Restrict the perturbation to the invariant subspace of period `L/2`
    /// plus the mean, where every mode is stable.
    pub stable_subspace: bool,
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EscapeBranch {
    Escaped,
    Converged,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeRun {
    pub seed: u64,
    pub branch: EscapeBranch,
    pub exit_time: Option<f64>,
    pub initial_distance: f64,
    pub final_distance: f64,
    /// `(t, dist_H²)` at every snapshot.
    pub distances: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeReport {
    pub verdict: RegimeVerdict,
    pub rho: f64,
    pub stable_subspace: bool,
    pub runs: Vec<EscapeRun>,
    pub escaped: usize,
    pub converged: usize,
    pub pass: bool,
}

/// Perturbation supported on modes with all components even, and the mean.
pub fn stable_subspace_perturbation(lattice: Lattice, seed: u64, h2: f64) -> SpectralField {
    let mut u = random_perturbation(lattice, seed, 1.0);
    let n = lattice.dim();
    for (idx, mode) in lattice.modes().enumerate() {
        if mode[..n].iter().any(|k| k % 2 != 0) {
            u.at_mut(idx).fill(num_complex::Complex64::new(0.0, 0.0));
        }
    }
    let norm = sobolev_norm(&u, 2.0).expect("order 2");
    u.scale(h2 / norm)
}

/// First recorded time with distance above `rho`.
pub fn exit_time(distances: &[(f64, f64)], rho: f64) -> Option<f64> {
    distances.iter().find(|(_, d)| *d > rho).map(|(t, _)| *t)
}

pub fn run_escape_seed(cfg: &SimConfig, setup: &EscapeSetup, seed: u64) -> Result<EscapeRun, ExperimentError> {
    let u0 = if setup.stable_subspace {
        stable_subspace_perturbation(cfg.lattice, seed, setup.h2)
    } else {
        random_perturbation(cfg.lattice, seed, setup.h2)
    };
    let params = cfg.params;
    let eq = cfg.eq;
    let mut distances = Vec::new();
    let rho = setup.rho;
    simulate_observed(cfg, &u0, &mut |s| {
        let d = manifold_distance(&to_velocity(s.u, &eq), &params, s.t).expect("ordered state");
        distances.push((s.t, d.dist_h2));
        d.dist_h2 <= rho
    })?;
    let initial = distances[0].1;
    let last = distances[distances.len() - 1].1;
    let exit = exit_time(&distances, rho);
    let branch = if exit.is_some() {
        EscapeBranch::Escaped
    } else if last <= 1e-2 * initial {
        EscapeBranch::Converged
    } else {
        EscapeBranch::Unresolved
    };
    Ok(EscapeRun {
        seed,
        branch,
        exit_time: exit,
        initial_distance: initial,
        final_distance: last,
        distances,
    })
}

/// Runs every seed (in parallel on `setup.threads` threads) and counts exits
/// from the `rho`-neighbourhood. Generic perturbations pass when at least
/// 90% of seeds escape; stable-subspace ones when all converge.
pub fn run_hyperbolic_escape_experiment(
    cfg: &SimConfig,
    setup: &EscapeSetup,
) -> Result<EscapeReport, ExperimentError> {
    if !cfg.eq.is_ordered() {
        return Err(ExperimentError::Hypothesis("escape concerns a polar state".into()));
    }
    let verdict = check_normal_hyperbolicity(&cfg.params, &cfg.eq.velocity())
        .map_err(|e| ExperimentError::Hypothesis(e.to_string()))?;
    if verdict.regime != Regime::NormallyHyperbolic {
        return Err(ExperimentError::Hypothesis(format!(
            "polar manifold is {}, not normally hyperbolic",
            verdict.regime
        )));
    }
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(setup.threads.max(1))
        .build()
        .expect("thread pool");
    let runs: Vec<EscapeRun> = pool.install(|| {
        setup
            .seeds
            .par_iter()
            .map(|&s| run_escape_seed(cfg, setup, s))
            .collect::<Result<_, _>>()
    })?;
    let escaped = runs.iter().filter(|r| r.branch == EscapeBranch::Escaped).count();
    let converged = runs.iter().filter(|r| r.branch == EscapeBranch::Converged).count();
    let pass = if setup.stable_subspace {
        converged == runs.len()
    } else {
        10 * escaped >= 9 * runs.len()
    };
    Ok(EscapeReport {
        verdict,
        rho: setup.rho,
        stable_subspace: setup.stable_subspace,
        runs,
        escaped,
        converged,
        pass,
    })
}
