//! Second-order exponential time differencing (Cox-Matthews ETDRK2).
//!
//! For `u' = -σu + R(u)` and step `h`:
//!
//! ```text
//! a   = e^{-hσ} u + h φ₁(-hσ) R(u)
//! u⁺  = a + h φ₂(-hσ) (R(a) - R(u))
//! ```
//!
//! The three matrices are precomputed per mode from the symbols.

use num_complex::Complex64;

use crate::field::{project_in_place, SpectralField};
use crate::linalg::{expm, phi1, phi2, phi_matrices};
use crate::symbols::symbol_general;

use super::nonlinear::Nonlinear;
use super::{DynamicsError, SimConfig};

pub struct EtdStepper {
    n: usize,
    h: f64,
    prop: Vec<Complex64>,
    phi1: Vec<Complex64>,
    phi2: Vec<Complex64>,
    nonlinear: Nonlinear,
    linear_only: bool,
    forcing: Option<SpectralField>,
}

impl EtdStepper {
    pub fn new(cfg: &SimConfig, h: f64) -> Self {
        let n = cfg.params.dim;
        let nn = n * n;
        let nm = cfg.lattice.num_modes();
        let mut prop = Vec::with_capacity(nm * nn);
        let mut p1 = Vec::with_capacity(nm * nn);
        let mut p2 = Vec::with_capacity(nm * nn);
        let hc = Complex64::new(-h, 0.0);
        for mode in cfg.lattice.modes() {
            let sym = symbol_general(&cfg.params, &cfg.eq, &mode);
            let e = sym.function(|z| (-h * z).exp(), |m| expm(&(m * hc)));
            let f1 = sym.function(|z| phi1(-h * z) * h, |m| phi_matrices(&(m * hc)).0 * Complex64::new(h, 0.0));
            let f2 = sym.function(|z| phi2(-h * z) * h, |m| phi_matrices(&(m * hc)).1 * Complex64::new(h, 0.0));
            for i in 0..n {
                for j in 0..n {
                    prop.push(e[(i, j)]);
                    p1.push(f1[(i, j)]);
                    p2.push(f2[(i, j)]);
                }
            }
        }
        let forcing = cfg.forcing.as_ref().map(|f| {
            let mut f = f.clone();
            project_in_place(&mut f);
            f
        });
        Self {
            n,
            h,
            prop,
            phi1: p1,
            phi2: p2,
            nonlinear: Nonlinear::new(cfg),
            linear_only: cfg.linear_only,
            forcing,
        }
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// `out += M u` mode by mode for the stacked per-mode matrices `mats`.
    fn apply(&self, mats: &[Complex64], u: &SpectralField, out: &mut SpectralField) {
        let n = self.n;
        let nn = n * n;
        let src = u.coeffs();
        let dst = out.coeffs_mut();
        for (k, m) in mats.chunks_exact(nn).enumerate() {
            let base = k * n;
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += m[i * n + j] * src[base + j];
                }
                dst[base + i] += acc;
            }
        }
    }

    /// `R(u)` including the forcing, and the grid mean of `|u|⁴`.
    pub fn rhs(&mut self, u: &SpectralField) -> (SpectralField, f64) {
        let (mut r, l4) = if self.linear_only {
            (SpectralField::zeros(*u.lattice(), u.ncomp()), self.nonlinear.l4_quartic(u))
        } else {
            self.nonlinear.rhs(u)
        };
        if let Some(f) = &self.forcing {
            r.add_assign_scaled(f, 1.0);
        }
        (r, l4)
    }

    /// One step from `u`; also returns the grid mean of `|u|⁴` at the
    /// start of the step.
    pub fn step(&mut self, u: &SpectralField) -> (SpectralField, f64) {
        let (ru, l4) = self.rhs(u);
        let mut a = SpectralField::zeros(*u.lattice(), u.ncomp());
        self.apply(&self.prop, u, &mut a);
        self.apply(&self.phi1, &ru, &mut a);
        if self.linear_only && self.forcing.is_none() {
            return (a, l4);
        }
        let (ra, _) = self.rhs(&a);
        let diff = ra.sub(&ru);
        let mut out = a;
        self.apply(&self.phi2, &diff, &mut out);
        (out, l4)
    }
}

/// A single ETDRK2 step of size `cfg.dt`.
pub fn step_etd(u: &SpectralField, cfg: &SimConfig) -> Result<SpectralField, DynamicsError> {
    cfg.validate()?;
    let (out, _) = EtdStepper::new(cfg, cfg.dt).step(u);
    if !out.is_finite() {
        return Err(DynamicsError::BlowUp { step: 1, time: 0.0 });
    }
    Ok(out)
}
