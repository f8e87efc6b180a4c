use serde::Serialize;

use crate::dynamics::{simulate, EnergyRecord, SimConfig};
use crate::field::SpectralField;
use crate::stability::{classify_disordered, Regime, RegimeVerdict};

use super::{log_fit, ExperimentError, LinearFit};

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub verdict: RegimeVerdict,
    /// Guaranteed rate of `‖u(t)‖²`; zero in the merely stable case.
    pub guaranteed_rate: f64,
    pub fit: Option<LinearFit>,
    /// `max_t ‖u(t)‖² / (e^{-rate·t} ‖u₀‖²)`.
    pub worst_bound_ratio: f64,
    pub pass: bool,
    #[serde(skip)]
    pub energy: Vec<EnergyRecord>,
}

/// Runs the disordered system from `u0` and checks `‖u(t)‖² <= e^{-2κt}‖u₀‖²`
/// at every step, with `κ = α` for `Γ₀ >= 0` and `κ = α - Γ₀²/(4Γ₂)` for
/// `Γ₀ < 0`, or monotone decay in the merely stable case.
pub fn run_decay_experiment(cfg: &SimConfig, u0: &SpectralField) -> Result<DecayReport, ExperimentError> {
    if cfg.eq.is_ordered() {
        return Err(ExperimentError::Hypothesis("decay experiments run at the disordered state".into()));
    }
    let verdict = classify_disordered(&cfg.params, None)?;
    let p = &cfg.params;
    let rate = match verdict.regime {
        Regime::ExpStable if p.gamma0 >= 0.0 => 2.0 * p.alpha,
        Regime::ExpStable if 4.0 * p.alpha * p.gamma2 > p.gamma0 * p.gamma0 => {
            2.0 * (p.alpha - p.gamma0 * p.gamma0 / (4.0 * p.gamma2))
        }
        Regime::ExpStable => 2.0 * verdict.min_symbol.unwrap_or(0.0),
        Regime::Stable => 0.0,
        other => {
            return Err(ExperimentError::Hypothesis(format!(
                "disordered state is {other}, not stable"
            )))
        }
    };
    let traj = simulate(cfg, u0)?;
    let e0 = traj.energy[0].l2sq;
    let worst = traj
        .energy
        .iter()
        .map(|r| if e0 > 0.0 { r.l2sq / ((-rate * r.t).exp() * e0) } else { 0.0 })
        .fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = traj
        .energy
        .iter()
        .filter(|r| r.l2sq > 0.0)
        .map(|r| (r.t, r.l2sq))
        .collect();
    let fit = log_fit(
        &pts.iter().map(|x| x.0).collect::<Vec<_>>(),
        &pts.iter().map(|x| x.1).collect::<Vec<_>>(),
    );
    let pass = worst <= 1.0 + 1e-6;
    Ok(DecayReport {
        verdict,
        guaranteed_rate: rate,
        fit,
        worst_bound_ratio: worst,
        pass,
        energy: traj.energy,
    })
}
