use serde::Serialize;

use crate::dynamics::{simulate_observed, to_velocity, SimConfig};
use crate::field::SpectralField;
use crate::stability::{classify_polar_manifold, Regime, RegimeVerdict};

use super::{log_fit, manifold_distance, ExperimentError, LinearFit, ManifoldDistance};

#[derive(Clone, Debug, Serialize)]
pub struct NormalStabilityReport {
    pub verdict: RegimeVerdict,
    pub distances: Vec<ManifoldDistance>,
    /// Fit of `log dist_H²` over the second through last fifths of the run,
    /// above the round-off floor.
    pub fit: Option<LinearFit>,
    pub decay_rate: f64,
    /// `| |v̄(t_end)| - sqrt(-α/β) |`.
    pub terminal_speed_error: f64,
    /// Angle between the limit polar state and the initial one.
    pub drift_angle: f64,
    pub pass: bool,
}

pub fn run_normal_stability_experiment(
    cfg: &SimConfig,
    u0: &SpectralField,
) -> Result<NormalStabilityReport, ExperimentError> {
    if !cfg.eq.is_ordered() {
        return Err(ExperimentError::Hypothesis("normal stability concerns a polar state".into()));
    }
    let verdict = classify_polar_manifold(&cfg.params, &cfg.eq.velocity())?;
    if verdict.regime != Regime::NormallyStable {
        return Err(ExperimentError::Hypothesis(format!(
            "polar manifold is {}, not normally stable",
            verdict.regime
        )));
    }
    let params = cfg.params;
    let eq = cfg.eq;
    let mut distances = Vec::new();
    let mut err = None;
    let traj = simulate_observed(cfg, u0, &mut |s| match manifold_distance(&to_velocity(s.u, &eq), &params, s.t) {
        Ok(d) => {
            distances.push(d);
            true
        }
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    let r = params.polar_speed().expect("ordered");
    let floor = 1e-12 * r.max(1.0);
    let t0 = 0.2 * cfg.t_end;
    let window: Vec<&ManifoldDistance> = distances.iter().filter(|d| d.t >= t0 && d.dist_h2 > floor).collect();
    let fit = log_fit(
        &window.iter().map(|d| d.t).collect::<Vec<_>>(),
        &window.iter().map(|d| d.dist_h2).collect::<Vec<_>>(),
    );
    let decay_rate = fit.map_or(f64::NAN, |f| -f.slope);
    let vbar = to_velocity(&traj.final_state, &eq).mean();
    let speed = vbar.iter().map(|x| x * x).sum::<f64>().sqrt();
    let v = eq.velocity();
    let cos = (0..vbar.len()).map(|c| vbar[c] * v[c]).sum::<f64>() / (speed * r);
    let pass = fit.is_some_and(|f| f.slope < 0.0 && f.r2 >= 0.999 && f.samples >= 10)
        && (speed - r).abs() <= 1e-6;
    Ok(NormalStabilityReport {
        verdict,
        distances,
        fit,
        decay_rate,
        terminal_speed_error: (speed - r).abs(),
        drift_angle: cos.clamp(-1.0, 1.0).acos(),
        pass,
    })
}
