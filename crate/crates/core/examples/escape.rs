// Escape from the polar manifold at normally hyperbolic parameters.
//
// ```text
// cargo run --release --example escape -- [N] [seeds]
// ```

use std::f64::consts::PI;

use actiflow::dynamics::SimConfig;
use actiflow::experiments::{run_hyperbolic_escape_experiment, EscapeReport, EscapeSetup};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example(radius: usize, seeds: u64, t_end: f64) -> EscapeReport {
    let params = ModelParams {
        lambda0: 1.0,
        lambda1: 0.0,
        alpha: -0.25,
        beta: 1.0,
        gamma0: -5.0,
        gamma2: 4.0,
        length: 2.0 * PI,
        dim: 2,
    };
    let eq = Equilibrium::ordered(&params, &[1.0, 0.0]).unwrap();
    let lattice = Lattice::new(2, radius, params.length).unwrap();
    let mut cfg = SimConfig::new(params, eq, lattice, 1e-3, t_end);
    cfg.snapshot_every = 10;
    let setup = EscapeSetup {
        rho: 0.05,
        seeds: (0..seeds).collect(),
        h2: 1e-3,
        stable_subspace: false,
        threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let start = std::time::Instant::now();
    let report = run_hyperbolic_escape_experiment(&cfg, &setup).unwrap();
    for run in &report.runs {
        println!(
            "seed {:>3}  {:?}  exit time {:?}  final dist_H2 {:.3e}",
            run.seed, run.branch, run.exit_time, run.final_distance
        );
    }
    println!(
        "{} of {} seeds left the rho = {} neighbourhood ({:.1} s)",
        report.escaped,
        report.runs.len(),
        report.rho,
        start.elapsed().as_secs_f64()
    );
    report
}

fn main() {
    let mut args = std::env::args().skip(1);
    let radius: usize = args.next().map_or(16, |s| s.parse().expect("N"));
    let seeds: u64 = args.next().map_or(3, |s| s.parse().expect("seed count"));
    run_example(radius, seeds, 30.0);
}
