// Integrates the disordered system from a random perturbation and reports
// the energy balance.
//
// ```text
// cargo run --release --example simulate
// ```

use std::f64::consts::PI;

use actiflow::dynamics::{energy_residual, random_perturbation, simulate, SimConfig, Trajectory};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example() -> Trajectory {
    let params = ModelParams {
        lambda0: 1.0,
        lambda1: 0.0,
        alpha: 0.5,
        beta: 1.0,
        gamma0: -1.0,
        gamma2: 1.0,
        length: 2.0 * PI,
        dim: 2,
    };
    let lattice = Lattice::new(2, 8, params.length).unwrap();
    let mut cfg = SimConfig::new(params, Equilibrium::Disordered, lattice, 1e-3, 0.5);
    cfg.snapshot_every = 100;
    let u0 = random_perturbation(lattice, 7, 0.5);
    let traj = simulate(&cfg, &u0).unwrap();
    let worst = energy_residual(&traj, &cfg).unwrap().into_iter().fold(0.0, f64::max);
    for r in traj.energy.iter().step_by(100) {
        println!("t = {:.2}  |u|^2 = {:.6e}  |grad u|^2 = {:.6e}", r.t, r.l2sq, r.gradsq);
    }
    println!("{} steps, {} snapshots, worst energy residual {worst:.3e}", traj.steps, traj.snapshots.len());
    traj
}

fn main() {
    run_example();
}
