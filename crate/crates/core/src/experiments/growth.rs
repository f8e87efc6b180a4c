use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{simulate_observed, SimConfig};
use crate::field::SpectralField;
use crate::lattice::Mode;
use crate::stability::{classify_disordered, classify_ordered, Regime};
use crate::symbols::symbol_general;

use super::{log_fit, ExperimentError};

/// Amplitude at which the seeded mode is placed.
pub const SEED_AMPLITUDE: f64 = 1e-6;
/// Amplitude above which nonlinear effects are no longer negligible.
pub const LINEAR_CEILING: f64 = 1e-2;

#[derive(Clone, Debug, Serialize)]
pub struct GrowthFit {
    pub mode: Vec<i64>,
    pub window: [f64; 2],
    pub samples: usize,
    pub fitted_rate: f64,
    pub predicted_rate: f64,
    pub rel_error: f64,
    pub r2: f64,
    pub pass: bool,
    /// `(t, |û(ℓ₀)|)` inside the fit window.
    #[serde(skip)]
    pub series: Vec<(f64, f64)>,
}

/// Seeds `mode` (the classifier's witness by default) at amplitude 1e-6
/// along its most unstable direction and fits the growth of `|û(ℓ₀)|`
/// while it stays below 1e-2.
pub fn run_growth_experiment(cfg: &SimConfig, mode: Option<Mode>) -> Result<GrowthFit, ExperimentError> {
    let n = cfg.params.dim;
    let verdict = if cfg.eq.is_ordered() {
        classify_ordered(&cfg.params, &cfg.eq.velocity(), None)?
    } else {
        classify_disordered(&cfg.params, None)?
    };
    if verdict.regime != Regime::ExpUnstable {
        return Err(ExperimentError::Hypothesis(format!(
            "growth needs an unstable equilibrium, classifier says {}",
            verdict.regime
        )));
    }
    let ell0 = match mode {
        Some(m) => m,
        None => verdict.witness.as_ref().expect("unstable verdicts carry a witness").lattice_mode(),
    };
    if cfg.lattice.index(&ell0).is_none() {
        return Err(ExperimentError::Hypothesis(format!(
            "mode {:?} is outside the truncated lattice",
            &ell0[..n]
        )));
    }
    let sym = symbol_general(&cfg.params, &cfg.eq, &ell0);
    let (lmin, x) = sym.min_restricted_real();
    let predicted = -lmin;
    if predicted <= 0.0 {
        return Err(ExperimentError::Hypothesis(format!(
            "mode {:?} is not unstable (rate {predicted})",
            &ell0[..n]
        )));
    }
    let mut u0 = SpectralField::zeros_vector(cfg.lattice);
    let seed: Vec<Complex64> = (0..n).map(|c| Complex64::new(x[c] * SEED_AMPLITUDE, 0.0)).collect();
    u0.set_mode(&ell0, &seed);
    let idx = cfg.lattice.index(&ell0).unwrap();

    let mut ts = Vec::new();
    let mut amps = Vec::new();
    simulate_observed(cfg, &u0, &mut |s| {
        let a = s.u.at(idx).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if a >= LINEAR_CEILING {
            return false;
        }
        ts.push(s.t);
        amps.push(a);
        true
    })?;
    let fit = log_fit(&ts, &amps);
    let (rate, r2) = fit.map_or((f64::NAN, 0.0), |f| (f.slope, f.r2));
    let rel = (rate - predicted).abs() / predicted;
    Ok(GrowthFit {
        mode: ell0[..n].to_vec(),
        window: [ts.first().copied().unwrap_or(0.0), ts.last().copied().unwrap_or(0.0)],
        samples: ts.len(),
        fitted_rate: rate,
        predicted_rate: predicted,
        rel_error: rel,
        r2,
        pass: ts.len() >= 10 && rel <= 0.02,
        series: ts.iter().copied().zip(amps.iter().copied()).collect(),
    })
}
