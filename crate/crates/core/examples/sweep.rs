// Phase diagram over `(Γ₀, α)` as CSV on stdout.
//
// ```text
// cargo run --example sweep -- [points] > sweep.csv
// ```

use std::f64::consts::PI;

use actiflow::experiments::{sweep_phase_diagram, write_sweep_csv, SweepRow, SweepSpec};
use actiflow::params::ModelParams;

pub fn run_example(points: usize) -> Vec<SweepRow> {
    let spec = SweepSpec {
        base: ModelParams {
            lambda0: 1.0,
            lambda1: 0.0,
            alpha: 0.0,
            beta: 1.0,
            gamma0: 0.0,
            gamma2: 1.0,
            length: 2.0 * PI,
            dim: 2,
        },
        direction: vec![1.0, 0.0],
        gamma0: (-5.0, 5.0),
        alpha: (-2.0, 2.0),
        points,
    };
    sweep_phase_diagram(&spec).unwrap()
}

fn main() {
    let points = std::env::args().nth(1).map_or(41, |s| s.parse().expect("grid points"));
    let rows = run_example(points);
    write_sweep_csv(&mut std::io::stdout().lock(), &rows).unwrap();
}
