// Energy decay at the disordered state against the guaranteed exponential
// bound.
//
// ```text
// cargo run --release --example decay
// ```

use std::f64::consts::PI;

use actiflow::dynamics::{random_perturbation, SimConfig};
use actiflow::experiments::{run_decay_experiment, DecayReport};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example() -> Vec<DecayReport> {
    let mut out = Vec::new();
    for (gamma0, alpha) in [(1.0, 1.0), (-1.0, 0.3)] {
        let params = ModelParams {
            lambda0: 1.0,
            lambda1: 0.0,
            alpha,
            beta: 1.0,
            gamma0,
            gamma2: 1.0,
            length: 2.0 * PI,
            dim: 2,
        };
        let lattice = Lattice::new(2, 8, params.length).unwrap();
        let cfg = SimConfig::new(params, Equilibrium::Disordered, lattice, 1e-3, 2.0);
        let u0 = random_perturbation(lattice, 1, 0.1);
        let r = run_decay_experiment(&cfg, &u0).unwrap();
        println!(
            "G0 = {gamma0:+}, alpha = {alpha}: {} by rule {}, guaranteed rate {:.3}, fitted {:.3}, worst ratio {:.9}",
            r.verdict.regime,
            r.verdict.rule,
            r.guaranteed_rate,
            r.fit.map_or(f64::NAN, |f| -f.slope),
            r.worst_bound_ratio
        );
        out.push(r);
    }
    out
}

fn main() {
    run_example();
}
