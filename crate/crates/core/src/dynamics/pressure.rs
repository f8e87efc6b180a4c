//! Pressure from the gradient part of the momentum balance.

use num_complex::Complex64;

use crate::field::{inverse_transform, PhysicalField, SpectralError, SpectralField};
use crate::lattice::norm_sq;
use crate::symbols::symbol_general;

use super::nonlinear::Nonlinear;
use super::SimConfig;

/// `f - λ₀((u+V)·∇)u - (M + β|u|²)u + N(u) + Γ₀Δu - Γ₂Δ²u`, i.e. the
/// right-hand side before projection, without the pressure gradient.
pub fn unprojected_rhs(u: &SpectralField, cfg: &SimConfig) -> SpectralField {
    let (bracket, _) = Nonlinear::new(cfg).bracket(u);
    let lattice = *u.lattice();
    let n = lattice.dim();
    let q = lattice.wavenumber_scale();
    let v = cfg.eq.velocity();
    let mut out = SpectralField::zeros_vector(lattice);
    for (idx, mode) in lattice.modes().enumerate() {
        let k2 = q * q * norm_sq(&mode) as f64;
        let drift = Complex64::new(0.0, cfg.params.lambda0 * q * (0..n).map(|d| v[d] * mode[d] as f64).sum::<f64>());
        let scalar = drift + cfg.params.gamma2 * k2 * k2 + cfg.params.gamma0 * k2;
        let src = u.at(idx);
        let reaction: Vec<Complex64> = match cfg.eq {
            crate::params::Equilibrium::Disordered => src.iter().map(|z| z * cfg.params.alpha).collect(),
            crate::params::Equilibrium::Ordered { v } => {
                let uv: Complex64 = (0..n).map(|d| src[d] * v[d]).sum();
                (0..n).map(|c| uv * (2.0 * cfg.params.beta * v[c])).collect()
            }
        };
        let b = bracket.at(idx);
        let f = cfg.forcing.as_ref().map(|f| f.at(idx).to_vec());
        let dst = out.at_mut(idx);
        for c in 0..n {
            let fc = f.as_ref().map_or(Complex64::new(0.0, 0.0), |f| f[c]);
            dst[c] = fc - b[c] - reaction[c] - scalar * src[c];
        }
    }
    out
}

pub struct Pressure {
    /// Coefficients of the modified pressure `q`, with `q̂(0) = 0`.
    pub q: SpectralField,
    /// `p = q + λ₁|v|²` on the collocation grid, `v = u + V`.
    pub p: PhysicalField,
}

/// Solves `∇q = (I - P) F` mode by mode for the unprojected right-hand side
/// `F`.
pub fn recover_pressure(u: &SpectralField, cfg: &SimConfig) -> Result<Pressure, SpectralError> {
    let rhs = unprojected_rhs(u, cfg);
    let lattice = *u.lattice();
    let n = lattice.dim();
    let qs = lattice.wavenumber_scale();
    let mut q = SpectralField::zeros(lattice, 1);
    for (idx, mode) in lattice.modes().enumerate() {
        let k2 = norm_sq(&mode) as f64;
        if k2 == 0.0 {
            continue;
        }
        let div: Complex64 = (0..n).map(|d| rhs.at(idx)[d] * mode[d] as f64).sum();
        q.at_mut(idx)[0] = Complex64::new(0.0, -1.0) * div / (qs * k2);
    }
    let qgrid = inverse_transform(&q)?;
    let mut vfield = u.clone();
    let z = lattice.zero_index();
    let vel = cfg.eq.velocity();
    for c in 0..n {
        vfield.at_mut(z)[c] += vel[c];
    }
    let vgrid = inverse_transform(&vfield)?;
    let values = (0..lattice.num_modes())
        .map(|p| {
            let s: f64 = vgrid.at(p).iter().map(|x| x * x).sum();
            qgrid.at(p)[0] + cfg.params.lambda1 * s
        })
        .collect();
    Ok(Pressure {
        q,
        p: PhysicalField::new(lattice, 1, values)?,
    })
}

/// `σ(ℓ)` applied to `u`: the linear operator in coefficient space.
pub fn apply_linear(u: &SpectralField, cfg: &SimConfig) -> SpectralField {
    let lattice = *u.lattice();
    let mut out = SpectralField::zeros(lattice, u.ncomp());
    for (idx, mode) in lattice.modes().enumerate() {
        let m = symbol_general(&cfg.params, &cfg.eq, &mode).matrix();
        let src = u.at(idx).to_vec();
        let dst = out.at_mut(idx);
        for i in 0..src.len() {
            dst[i] = (0..src.len()).map(|j| m[(i, j)] * src[j]).sum();
        }
    }
    out
}
