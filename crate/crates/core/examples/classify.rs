// Linear and manifold verdicts for a few parameter sets.
//
// ```text
// cargo run --example classify
// ```

use std::f64::consts::PI;

use actiflow::params::{Equilibrium, ModelParams};
use actiflow::stability::{classify_disordered, classify_ordered, classify_polar_manifold, RegimeVerdict};

fn show(label: &str, v: &RegimeVerdict) {
    let witness = v
        .witness
        .as_ref()
        .map(|w| format!("mode {:?}, form {:+.6}", w.mode, w.quadratic_form))
        .unwrap_or_else(|| "no witness".into());
    println!("{label:<28} {:<20} [{}] {witness}", v.regime.to_string(), v.rule);
}

pub fn run_example() -> Vec<RegimeVerdict> {
    let base = ModelParams {
        lambda0: 1.0,
        lambda1: 0.0,
        alpha: 1.0,
        beta: 1.0,
        gamma0: 1.0,
        gamma2: 1.0,
        length: 2.0 * PI,
        dim: 2,
    };
    let mut out = Vec::new();
    for (label, gamma0, alpha) in [
        ("disordered, G0 >= 0", 1.0, 1.0),
        ("disordered, delta regime", -1.0, 0.3),
        ("disordered, equality", -2.0, 1.0),
        ("disordered, unstable", -5.0, 4.0),
    ] {
        let p = ModelParams { gamma0, alpha, ..base };
        let v = classify_disordered(&p, None).unwrap();
        show(label, &v);
        out.push(v);
    }
    let example = ModelParams {
        alpha: -0.25,
        gamma0: -5.0,
        gamma2: 4.0,
        ..base
    };
    let v = Equilibrium::ordered(&example, &[1.0, 0.0]).unwrap().velocity();
    for (label, verdict) in [
        ("polar state, linear", classify_ordered(&example, &v, None).unwrap()),
        ("polar manifold", classify_polar_manifold(&example, &v).unwrap()),
    ] {
        show(label, &verdict);
        out.push(verdict);
    }
    out
}

fn main() {
    run_example();
}
