//! Distance to the sphere of polar states `|W| = sqrt(-α/β)`.

use serde::Serialize;

use crate::field::{sobolev_norm, SpectralField};
use crate::params::{ModelParams, ParamError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldDistance {
    pub t: f64,
    pub dist_l2: f64,
    pub dist_h2: f64,
    pub nearest: Vec<f64>,
    /// The mean vanished, so every polar state is equally close and `e₁`
    /// was used.
    pub ambiguous: bool,
}

/// Only the mean mode of `v - W` depends on the constant `W`, so the
/// nearest polar state in both norms is `r v̄/|v̄|`.
pub fn manifold_distance(v: &SpectralField, params: &ModelParams, t: f64) -> Result<ManifoldDistance, ParamError> {
    let r = params.polar_speed().ok_or(ParamError::NoOrderedState(params.alpha))?;
    let n = v.ncomp();
    let mean = v.mean();
    let len = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (nearest, ambiguous) = if len > 0.0 {
        (mean.iter().map(|x| r * x / len).collect::<Vec<_>>(), false)
    } else {
        let mut e = vec![0.0; n];
        e[0] = r;
        (e, true)
    };
    let mut diff = v.clone();
    let z = v.lattice().zero_index();
    for (c, x) in diff.at_mut(z).iter_mut().enumerate() {
        *x -= nearest[c];
    }
    Ok(ManifoldDistance {
        t,
        dist_l2: sobolev_norm(&diff, 0.0).expect("order 0"),
        dist_h2: sobolev_norm(&diff, 2.0).expect("order 2"),
        nearest,
        ambiguous,
    })
}
