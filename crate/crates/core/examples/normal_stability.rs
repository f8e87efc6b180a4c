// Convergence to the sphere of polar states when `Γ₀ >= 0`.
//
// ```text
// cargo run --release --example normal_stability
// ```

use std::f64::consts::PI;

use actiflow::dynamics::{random_perturbation, SimConfig};
use actiflow::experiments::{run_normal_stability_experiment, NormalStabilityReport};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example() -> NormalStabilityReport {
    let params = ModelParams {
        lambda0: 1.0,
        lambda1: 0.0,
        alpha: -1.0,
        beta: 1.0,
        gamma0: 1.0,
        gamma2: 1.0,
        length: 2.0 * PI,
        dim: 2,
    };
    let eq = Equilibrium::ordered(&params, &[1.0, 1.0]).unwrap();
    let lattice = Lattice::new(2, 8, params.length).unwrap();
    let cfg = SimConfig::new(params, eq, lattice, 1e-3, 8.0);
    let u0 = random_perturbation(lattice, 3, 0.05);
    let r = run_normal_stability_experiment(&cfg, &u0).unwrap();
    for d in r.distances.iter().step_by(100) {
        println!("t = {:>5.2}  dist_H2 = {:.3e}  nearest {:?}", d.t, d.dist_h2, d.nearest);
    }
    println!(
        "decay rate {:.4}, terminal speed error {:.1e}, drift angle {:.2e} rad",
        r.decay_rate, r.terminal_speed_error, r.drift_angle
    );
    r
}

fn main() {
    run_example();
}
