//! Physical constants and the two families of equilibria.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{dot, Vec3};

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("gamma2 must be positive (standing assumption Γ₂, β > 0), got {0}")]
    Gamma2(f64),
    #[error("beta must be positive (standing assumption Γ₂, β > 0), got {0}")]
    Beta(f64),
    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(usize),
    #[error("box length must be positive, got {0}")]
    Length(f64),
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
    #[error("ordered polar states exist only for alpha < 0, got alpha = {0}")]
    NoOrderedState(f64),
    #[error("polar state speed {got} differs from sqrt(-alpha/beta) = {expected}")]
    Speed { got: f64, expected: f64 },
    #[error("polar state direction must be a non-zero vector in the first {0} coordinates")]
    Direction(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub lambda0: f64,
    pub lambda1: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma0: f64,
    pub gamma2: f64,
    pub length: f64,
    pub dim: usize,
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("lambda0", self.lambda0),
            ("lambda1", self.lambda1),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma0", self.gamma0),
            ("gamma2", self.gamma2),
            ("L", self.length),
        ] {
            if !v.is_finite() {
                return Err(ParamError::NonFinite(name));
            }
        }
        if self.dim != 2 && self.dim != 3 {
            return Err(ParamError::Dimension(self.dim));
        }
        if self.gamma2 <= 0.0 {
            return Err(ParamError::Gamma2(self.gamma2));
        }
        if self.beta <= 0.0 {
            return Err(ParamError::Beta(self.beta));
        }
        if self.length <= 0.0 {
            return Err(ParamError::Length(self.length));
        }
        Ok(())
    }

    /// `2π / L`.
    pub fn wavenumber_scale(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// Speed of the polar states, `sqrt(-α/β)`; `None` when `α >= 0`.
    pub fn polar_speed(&self) -> Option<f64> {
        (self.alpha < 0.0).then(|| (-self.alpha / self.beta).sqrt())
    }

    /// `Γ₂ (2π/L)⁴ z² + Γ₀ (2π/L)² z` at `z = |ℓ|²`: the part of every symbol
    /// that depends only on the shell.
    pub fn shell_value(&self, norm_sq: f64) -> f64 {
        let k2 = self.wavenumber_scale().powi(2) * norm_sq;
        self.gamma2 * k2 * k2 + self.gamma0 * k2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Equilibrium {
    /// `V = 0`, `M = αI`, `N ≡ 0`.
    Disordered,
    /// `|V| = sqrt(-α/β)`, `M = 2β V Vᵀ`, `N(u) = -β|u|²V - 2β(u·V)u`.
    Ordered { v: Vec3 },
}

impl Equilibrium {
    /// The polar state pointing along `direction`, scaled to the speed
    /// `sqrt(-α/β)`.
    pub fn ordered(params: &ModelParams, direction: &[f64]) -> Result<Self, ParamError> {
        let speed = params
            .polar_speed()
            .ok_or(ParamError::NoOrderedState(params.alpha))?;
        let n = params.dim;
        if direction.len() < n || direction[n..].iter().any(|x| *x != 0.0) {
            return Err(ParamError::Direction(n));
        }
        let mut d = [0.0; 3];
        d[..n].copy_from_slice(&direction[..n]);
        let len = dot(&d, &d).sqrt();
        if !(len > 0.0 && len.is_finite()) {
            return Err(ParamError::Direction(n));
        }
        let v = [d[0] / len * speed, d[1] / len * speed, d[2] / len * speed];
        Ok(Self::Ordered { v })
    }

    /// Checks the ordered-state invariants against `params`.
    pub fn validate(&self, params: &ModelParams) -> Result<(), ParamError> {
        match self {
            Self::Disordered => Ok(()),
            Self::Ordered { v } => {
                let speed = params
                    .polar_speed()
                    .ok_or(ParamError::NoOrderedState(params.alpha))?;
                let got = dot(v, v).sqrt();
                if (got - speed).abs() > 1e-12 * speed {
                    return Err(ParamError::Speed {
                        got,
                        expected: speed,
                    });
                }
                if v[params.dim..].iter().any(|x| *x != 0.0) {
                    return Err(ParamError::Direction(params.dim));
                }
                Ok(())
            }
        }
    }

    pub fn velocity(&self) -> Vec3 {
        match self {
            Self::Disordered => [0.0; 3],
            Self::Ordered { v } => *v,
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, Self::Ordered { .. })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use std::f64::consts::PI;

    /// `L = 2π, Γ₂ = 4, Γ₀ = -5, α = -1/4, β = 1, λ₀ = 1`.
    pub fn hyperbolic_example(dim: usize) -> ModelParams {
        ModelParams {
            lambda0: 1.0,
            lambda1: 0.0,
            alpha: -0.25,
            beta: 1.0,
            gamma0: -5.0,
            gamma2: 4.0,
            length: 2.0 * PI,
            dim,
        }
    }

    pub fn disordered(gamma0: f64, gamma2: f64, alpha: f64) -> ModelParams {
        ModelParams {
            lambda0: 1.0,
            lambda1: 0.0,
            alpha,
            beta: 1.0,
            gamma0,
            gamma2,
            length: 2.0 * PI,
            dim: 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn standing_assumptions_enforced() {
        let mut p = hyperbolic_example(2);
        assert!(p.validate().is_ok());
        p.gamma2 = -1.0;
        assert_eq!(p.validate(), Err(ParamError::Gamma2(-1.0)));
        p.gamma2 = 1.0;
        p.beta = 0.0;
        assert_eq!(p.validate(), Err(ParamError::Beta(0.0)));
    }

    #[test]
    fn ordered_state_has_fixed_speed() {
        let p = hyperbolic_example(3);
        let eq = Equilibrium::ordered(&p, &[0.0, 3.0, 4.0]).unwrap();
        let v = eq.velocity();
        assert!((dot(&v, &v).sqrt() - 0.5).abs() < 1e-15);
        assert!(eq.validate(&p).is_ok());
        let bad = Equilibrium::Ordered { v: [0.6, 0.0, 0.0] };
        assert!(matches!(bad.validate(&p), Err(ParamError::Speed { .. })));
        let stable = disordered(1.0, 1.0, 1.0);
        assert!(Equilibrium::ordered(&stable, &[1.0, 0.0]).is_err());
    }
}
