// Exact linear evolution mode by mode, checked against the closed-form
// symbol exponential.
//
// ```text
// cargo run --example semigroup
// ```

use std::f64::consts::PI;

use actiflow::dynamics::random_perturbation;
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};
use actiflow::symbols::propagate_linear;

pub fn run_example() -> f64 {
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
    let lattice = Lattice::new(2, 6, params.length).unwrap();
    let u0 = random_perturbation(lattice, 11, 1.0);
    let half = propagate_linear(&params, &eq, &u0, 0.5).unwrap();
    let twice = propagate_linear(&params, &eq, &half, 0.5).unwrap();
    let once = propagate_linear(&params, &eq, &u0, 1.0).unwrap();
    let defect = twice.sub(&once).max_abs() / once.max_abs();
    for t in [0.0, 0.5, 1.0, 2.0] {
        let u = propagate_linear(&params, &eq, &u0, t).unwrap();
        println!("t = {t:.1}  |u|^2 = {:.6e}", u.l2_norm_sq());
    }
    println!("semigroup defect e^(-A/2) e^(-A/2) vs e^(-A): {defect:.2e}");
    defect
}

fn main() {
    run_example();
}
