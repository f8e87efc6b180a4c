//! Time integration of the transformed system
//!
//! ```text
//! u_t + λ₀((u+V)·∇)u + (M + β|u|²)u - Γ₀Δu + Γ₂Δ²u + ∇q = f + N(u),  div u = 0
//! ```
//!
//! around either equilibrium. The stiff linear part is propagated exactly
//! per mode; nonlinear products are formed on a padded collocation grid.

mod energy;
mod etd;
mod init;
mod nonlinear;
mod pressure;

pub use energy::{energy_residual, interval_residuals, write_energy_csv, EnergyRecord};
pub use etd::{step_etd, EtdStepper};
pub use init::random_perturbation;
pub use nonlinear::{nonlinear_rhs, product_grid_side, Nonlinear};
pub use pressure::{apply_linear, recover_pressure, unprojected_rhs, Pressure};

use thiserror::Error;

use crate::field::{SpectralError, SpectralField};
use crate::lattice::Lattice;
use crate::params::{Equilibrium, ModelParams, ParamError};

/// Tolerance on `|ℓ·û(ℓ)|/|ℓ|` relative to `max|û|` for initial data.
pub const DIVERGENCE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("initial field is not divergence-free (defect {0:.3e})")]
    NotDivergenceFree(f64),
    #[error("non-finite state after step {step}; last valid time {time}")]
    BlowUp { step: usize, time: f64 },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub params: ModelParams,
    pub eq: Equilibrium,
    pub lattice: Lattice,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    /// Constant-in-time body force.
    pub forcing: Option<SpectralField>,
    /// Snapshot (and observer) cadence in steps.
    pub snapshot_every: usize,
    /// Drop the nonlinear terms; the step is then the exact propagator.
    pub linear_only: bool,
}

impl SimConfig {
    pub fn new(params: ModelParams, eq: Equilibrium, lattice: Lattice, dt: f64, t_end: f64) -> Self {
        Self {
            params,
            eq,
            lattice,
            dt,
            t_end,
            dealias: true,
            forcing: None,
            snapshot_every: 10,
            linear_only: false,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        self.params.validate()?;
        self.eq.validate(&self.params)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(DynamicsError::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if self.snapshot_every == 0 {
            return Err(DynamicsError::Config("snapshot_every must be at least 1".into()));
        }
        if self.lattice.dim() != self.params.dim
            || (self.lattice.length() - self.params.length).abs() > 1e-14 * self.params.length
        {
            return Err(DynamicsError::Config("lattice does not match n and L".into()));
        }
        if let Some(f) = &self.forcing {
            if !f.lattice().same_shape(&self.lattice) || f.ncomp() != self.params.dim {
                return Err(DynamicsError::Config("forcing lives on a different lattice".into()));
            }
        }
        Ok(())
    }

    /// Number of steps; the step is shrunk so that they end exactly at
    /// `t_end`.
    pub fn num_steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    pub fn effective_dt(&self) -> f64 {
        match self.num_steps() {
            0 => self.dt,
            k => self.t_end / k as f64,
        }
    }

    /// Whether the energy identity applies to this configuration.
    pub fn has_energy_identity(&self) -> bool {
        !self.eq.is_ordered() && self.forcing.is_none()
    }
}

/// `v = u + V` for the transformed variable `u`.
pub fn to_velocity(u: &SpectralField, eq: &Equilibrium) -> SpectralField {
    let mut v = u.clone();
    let z = u.lattice().zero_index();
    let vel = eq.velocity();
    for (c, x) in v.at_mut(z).iter_mut().enumerate() {
        *x += vel[c];
    }
    v
}

/// State handed to observers at every snapshot step.
pub struct Sample<'a> {
    pub step: usize,
    pub t: f64,
    /// The transformed variable `u`.
    pub u: &'a SpectralField,
    pub energy: &'a EnergyRecord,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// `(t, v)` with `v = u + V`, every `snapshot_every` steps and at the end.
    pub snapshots: Vec<(f64, SpectralField)>,
    pub energy: Vec<EnergyRecord>,
    /// Final transformed state `u`.
    pub final_state: SpectralField,
    pub final_time: f64,
    pub steps: usize,
    pub stopped_early: bool,
}

fn check_initial(cfg: &SimConfig, u0: &SpectralField) -> Result<(), DynamicsError> {
    cfg.validate()?;
    if !u0.lattice().same_shape(&cfg.lattice) || u0.ncomp() != cfg.params.dim {
        return Err(DynamicsError::Config("initial field lives on a different lattice".into()));
    }
    if !u0.is_finite() {
        return Err(SpectralError::NonFinite.into());
    }
    let h = u0.hermitian_defect();
    if h > crate::field::SYMMETRY_TOL {
        return Err(SpectralError::Symmetry(h).into());
    }
    let defect = u0.divergence_defect() / u0.max_abs().max(f64::MIN_POSITIVE);
    if defect > DIVERGENCE_TOL {
        return Err(DynamicsError::NotDivergenceFree(defect));
    }
    Ok(())
}

/// Integrates from `u0` to `t_end`, storing snapshots.
pub fn simulate(cfg: &SimConfig, u0: &SpectralField) -> Result<Trajectory, DynamicsError> {
    run(cfg, u0, true, &mut |_| true)
}

/// Integrates from `u0`, calling `observer` at every snapshot step; the run
/// stops early when it returns `false`. Snapshots are not stored.
pub fn simulate_observed(
    cfg: &SimConfig,
    u0: &SpectralField,
    observer: &mut dyn FnMut(&Sample) -> bool,
) -> Result<Trajectory, DynamicsError> {
    run(cfg, u0, false, observer)
}

fn run(
    cfg: &SimConfig,
    u0: &SpectralField,
    store: bool,
    observer: &mut dyn FnMut(&Sample) -> bool,
) -> Result<Trajectory, DynamicsError> {
    check_initial(cfg, u0)?;
    let steps = cfg.num_steps();
    let h = cfg.effective_dt();
    let mut stepper = EtdStepper::new(cfg, h);
    let residual_on = cfg.has_energy_identity();
    let quartic = !cfg.linear_only;

    let mut u = u0.clone();
    let mut energy: Vec<EnergyRecord> = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::new();
    let mut stopped = false;
    let mut done = 0;
    for k in 0..=steps {
        let t = k as f64 * h;
        let (next, l4) = if k < steps {
            let (a, l4) = stepper.step(&u);
            (Some(a), l4)
        } else {
            (None, stepper.rhs(&u).1)
        };
        let mut rec = EnergyRecord::new(t, &u, l4);
        if residual_on {
            if let Some(prev) = energy.last() {
                rec.residual = interval_residuals(&[*prev, rec], &cfg.params, quartic).first().copied();
            }
        }
        energy.push(rec);
        if k % cfg.snapshot_every == 0 || k == steps {
            if store {
                snapshots.push((t, to_velocity(&u, &cfg.eq)));
            }
            let sample = Sample { step: k, t, u: &u, energy: &rec };
            if !observer(&sample) {
                stopped = k < steps;
                done = k;
                break;
            }
        }
        done = k;
        if let Some(next) = next {
            if !next.is_finite() {
                return Err(DynamicsError::BlowUp { step: k + 1, time: t });
            }
            u = next;
        }
    }
    Ok(Trajectory {
        snapshots,
        energy,
        final_time: done as f64 * h,
        final_state: u,
        steps: done,
        stopped_early: stopped,
    })
}
