// Growth rate of the most unstable mode against its symbol.
//
// ```text
// cargo run --release --example growth
// ```

use std::f64::consts::PI;

use actiflow::dynamics::SimConfig;
use actiflow::experiments::{run_growth_experiment, GrowthFit};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example() -> Vec<GrowthFit> {
    let disordered = ModelParams {
        lambda0: 1.0,
        lambda1: 0.0,
        alpha: 4.0,
        beta: 1.0,
        gamma0: -5.0,
        gamma2: 1.0,
        length: 2.0 * PI,
        dim: 2,
    };
    let polar = ModelParams {
        alpha: -0.25,
        gamma2: 4.0,
        ..disordered
    };
    let mut out = Vec::new();
    for (label, params, eq, t_end) in [
        ("disordered", disordered, Equilibrium::Disordered, 4.0),
        ("polar", polar, Equilibrium::ordered(&polar, &[1.0, 0.0]).unwrap(), 8.0),
    ] {
        let lattice = Lattice::new(2, 8, params.length).unwrap();
        let cfg = SimConfig::new(params, eq, lattice, 1e-3, t_end);
        let fit = run_growth_experiment(&cfg, None).unwrap();
        println!(
            "{label:<10} mode {:?}: fitted {:.6}, predicted {:.6}, rel. error {:.1e} over t in [{:.2}, {:.2}]",
            fit.mode, fit.fitted_rate, fit.predicted_rate, fit.rel_error, fit.window[0], fit.window[1]
        );
        out.push(fit);
    }
    out
}

fn main() {
    run_example();
}
