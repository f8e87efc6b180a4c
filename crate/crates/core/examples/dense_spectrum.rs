// Cross-checks the per-mode spectrum against the assembled operator on a
// small lattice, and inspects the zero eigenvalue at a polar state.
//
// ```text
// cargo run --release --example dense_spectrum
// ```

use std::f64::consts::PI;

use actiflow::dense::{spectrum_report, SpectrumReport};
use actiflow::lattice::Lattice;
use actiflow::params::{Equilibrium, ModelParams};

pub fn run_example() -> Vec<SpectrumReport> {
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
    let lattice = Lattice::new(2, 4, params.length).unwrap();
    let mut out = Vec::new();
    for eq in [Equilibrium::Disordered, Equilibrium::ordered(&params, &[0.6, 0.8]).unwrap()] {
        let r = spectrum_report(&params, &eq, &lattice).unwrap();
        let unstable = r.eigenvalues.iter().filter(|e| e.re < 0.0).count();
        println!(
            "{:<10} {} eigenvalues, {unstable} with Re < 0, pairing distance {:.2e}, kernel {} (A^2: {}), semisimple {}",
            if eq.is_ordered() { "polar" } else { "disordered" },
            r.eigenvalues.len(),
            r.max_pairing_distance,
            r.kernel_dim,
            r.kernel_dim_squared,
            r.semisimple_zero
        );
        out.push(r);
    }
    out
}

fn main() {
    run_example();
}
