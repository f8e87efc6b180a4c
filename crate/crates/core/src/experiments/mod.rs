//! Numerical experiments reproducing each stability result, each gated on
//! the classifier agreeing that its hypotheses hold.

mod decay;
mod distance;
mod escape;
mod fit;
mod growth;
mod normal;
mod sweep;

pub use decay::{run_decay_experiment, DecayReport};
pub use distance::{manifold_distance, ManifoldDistance};
pub use escape::{
    exit_time, run_escape_seed, run_hyperbolic_escape_experiment, stable_subspace_perturbation, EscapeBranch,
    EscapeReport, EscapeRun, EscapeSetup,
};
pub use fit::{linear_fit, log_fit, LinearFit};
pub use growth::{run_growth_experiment, GrowthFit};
pub use normal::{run_normal_stability_experiment, NormalStabilityReport};
pub use sweep::{sweep_phase_diagram, write_sweep_csv, SweepRow, SweepSpec};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::params::ParamError;
use crate::stability::AnalysisError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    /// The parameters do not satisfy the hypotheses of the experiment.
    #[error("hypothesis gate: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Param(#[from] ParamError),
}
