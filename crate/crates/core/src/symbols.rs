//! Per-mode Fourier symbols of the linearized operator and exact propagation
//! by its semigroup.
//!
//! At a mode `ℓ` the linearized operator acts on `û(ℓ)` through
//!
//! ```text
//! σ(ℓ) = Γ₂(2π/L)⁴|ℓ|⁴ + Γ₀(2π/L)²|ℓ|² + iλ₀(2π/L)(V·ℓ) + σ_P(ℓ) M
//! ```
//!
//! For the disordered state `M = αI` commutes with the projection and the
//! symbol is the scalar `σ_d(ℓ)`. For a polar state `M = 2βVVᵀ`; on
//! divergence-free coefficients `σ_P M` and `σ_P M σ_P` act identically, and
//! the latter is stored as `c I + 2β w wᵀ` with `w = σ_P(ℓ) V`, which makes
//! every matrix function available in closed form.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::field::{projection_symbol, CMatrix, SpectralField, SpectralError};
use crate::lattice::{dot, mode_to_vec, norm_sq, Lattice, Mode, Vec3};
use crate::linalg::{self, expm, expm1};
use crate::params::{Equilibrium, ModelParams, ParamError};

/// Largest admissible `|ℓ·û(ℓ)|/|ℓ|` relative to `max |û|` for fields fed
/// to the linear propagator.
pub const DIVERGENCE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("propagation time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("initial field is not divergence-free (defect {0:.3e}); project it first")]
    NotDivergenceFree(f64),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolForm {
    /// `shift · I + weight · w wᵀ` with real `w`.
    ScalarRankOne {
        shift: Complex64,
        weight: f64,
        w: Vec3,
    },
    Dense(CMatrix),
}

/// The `n × n` symbol at one lattice mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSymbol {
    pub mode: Mode,
    pub dim: usize,
    pub form: SymbolForm,
}

impl ModeSymbol {
    pub fn dense(mode: Mode, matrix: CMatrix) -> Self {
        Self {
            mode,
            dim: matrix.nrows(),
            form: SymbolForm::Dense(matrix),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match &self.form {
            SymbolForm::Dense(m) => m.clone(),
            SymbolForm::ScalarRankOne { shift, weight, w } => {
                CMatrix::from_fn(self.dim, self.dim, |i, j| {
                    let id = if i == j { *shift } else { Complex64::new(0.0, 0.0) };
                    id + Complex64::new(weight * w[i] * w[j], 0.0)
                })
            }
        }
    }

    /// `f(σ)` for an analytic `f`; closed form on the scalar plus rank-one
    /// structure, otherwise `dense(σ)`.
    pub fn function(
        &self,
        f: impl Fn(Complex64) -> Complex64,
        dense: impl Fn(&CMatrix) -> CMatrix,
    ) -> CMatrix {
        match &self.form {
            SymbolForm::Dense(m) => dense(m),
            SymbolForm::ScalarRankOne { shift, weight, w } => {
                let n = self.dim;
                let fc = f(*shift);
                let w2 = dot(w, w);
                let mut out = CMatrix::identity(n, n) * fc;
                if w2 > 0.0 && *weight != 0.0 {
                    let jump = f(*shift + weight * w2) - fc;
                    for i in 0..n {
                        for j in 0..n {
                            out[(i, j)] += jump * (w[i] * w[j] / w2);
                        }
                    }
                }
                out
            }
        }
    }

    /// Symbol restricted to the plane `{ℓ}^⊥` (all of `C^n` at `ℓ = 0`),
    /// in the orthonormal basis of [`linalg::orthogonal_basis`].
    pub fn restricted(&self) -> CMatrix {
        let b = linalg::to_complex(&linalg::orthogonal_basis(self.dim, &self.mode));
        b.adjoint() * self.matrix() * b
    }

    /// Smallest eigenvalue of `Re σ` on `{ℓ}^⊥` and a unit direction
    /// attaining it.
    pub fn min_restricted_real(&self) -> (f64, Vec3) {
        let b = linalg::orthogonal_basis(self.dim, &self.mode);
        let re = self.matrix().map(|z| z.re);
        let r = b.transpose() * re * &b;
        let r = (&r + r.transpose()) * 0.5;
        let (vals, vecs) = linalg::symmetric_eigen(&r);
        let x = &b * vecs.column(0);
        let mut dir = [0.0; 3];
        for i in 0..self.dim {
            dir[i] = x[i];
        }
        (vals[0], dir)
    }

    /// Exponential growth rate of the mode under `exp(-tσ)`.
    pub fn growth_rate(&self) -> f64 {
        -self.min_restricted_real().0
    }
}

/// `σ_d(ℓ) = Γ₂(2π/L)⁴|ℓ|⁴ + Γ₀(2π/L)²|ℓ|² + α`.
pub fn symbol_disordered(params: &ModelParams, mode: &Mode) -> f64 {
    params.shell_value(norm_sq(mode) as f64) + params.alpha
}

/// The linearized symbol at `mode` for either equilibrium.
pub fn symbol_general(params: &ModelParams, eq: &Equilibrium, mode: &Mode) -> ModeSymbol {
    let scalar = params.shell_value(norm_sq(mode) as f64);
    match eq {
        Equilibrium::Disordered => ModeSymbol {
            mode: *mode,
            dim: params.dim,
            form: SymbolForm::ScalarRankOne {
                shift: Complex64::new(scalar + params.alpha, 0.0),
                weight: 0.0,
                w: [0.0; 3],
            },
        },
        Equilibrium::Ordered { v } => ordered_form(params, v, mode),
    }
}

/// Symmetrized polar-state symbol `σ_{A_o}(ℓ)`.
pub fn symbol_ordered(params: &ModelParams, v: &Vec3, mode: &Mode) -> Result<ModeSymbol, ParamError> {
    if params.alpha >= 0.0 {
        return Err(ParamError::NoOrderedState(params.alpha));
    }
    Ok(ordered_form(params, v, mode))
}

fn ordered_form(params: &ModelParams, v: &Vec3, mode: &Mode) -> ModeSymbol {
    let n = params.dim;
    let scalar = params.shell_value(norm_sq(mode) as f64);
    let drift = params.lambda0 * params.wavenumber_scale() * dot(v, &mode_to_vec(mode));
    let p = projection_symbol(n, mode);
    let mut w = [0.0; 3];
    for i in 0..n {
        w[i] = (0..n).map(|j| p[(i, j)].re * v[j]).sum();
    }
    ModeSymbol {
        mode: *mode,
        dim: n,
        form: SymbolForm::ScalarRankOne {
            shift: Complex64::new(scalar, drift),
            weight: 2.0 * params.beta,
            w,
        },
    }
}

/// Real roots `(z₋, z₊)` of `p(z) = Γ₂(2π/L)⁴z² + Γ₀(2π/L)²z + α`, from the
/// closed forms `z± = -Γ₀/(Γ₂(2π/L)²) (1/2 ± sqrt(1/4 - αΓ₂/Γ₀²))` and, for
/// `Γ₀ = 0`, `z± = ±sqrt(-α/Γ₂ (L/2π)⁴)`. Sorted ascending.
pub fn parabola_roots(params: &ModelParams) -> Option<(f64, f64)> {
    let q2 = params.wavenumber_scale().powi(2);
    let (g0, g2, a) = (params.gamma0, params.gamma2, params.alpha);
    let (r1, r2) = if g0 != 0.0 {
        let disc = 0.25 - a * g2 / (g0 * g0);
        if disc < 0.0 {
            return None;
        }
        let pre = -g0 / (g2 * q2);
        (pre * (0.5 - disc.sqrt()), pre * (0.5 + disc.sqrt()))
    } else {
        let rad = -a / g2 / (q2 * q2);
        if rad < 0.0 {
            return None;
        }
        (-rad.sqrt(), rad.sqrt())
    };
    Some((r1.min(r2), r1.max(r2)))
}

/// `exp(-tσ) v`.
pub fn semigroup_step(
    sym: &ModeSymbol,
    t: f64,
    v: &[Complex64],
) -> Result<Vec<Complex64>, SymbolError> {
    if !(t >= 0.0) {
        return Err(SymbolError::NegativeTime(t));
    }
    let n = sym.dim;
    match &sym.form {
        SymbolForm::ScalarRankOne { shift, weight, w } => {
            let decay = (-t * shift).exp();
            let w2 = dot(w, w);
            let mut out: Vec<Complex64> = v.iter().map(|x| decay * x).collect();
            if w2 > 0.0 && *weight != 0.0 {
                let jump = decay * expm1(Complex64::new(-t * weight * w2, 0.0)) / w2;
                let wv: Complex64 = (0..n).map(|i| v[i] * w[i]).sum();
                for i in 0..n {
                    out[i] += jump * wv * w[i];
                }
            }
            Ok(out)
        }
        SymbolForm::Dense(m) => {
            let e = expm(&(m * Complex64::new(-t, 0.0)));
            let x = e * DVector::from_column_slice(v);
            Ok(x.iter().copied().collect())
        }
    }
}

/// Exact solution of the linearized system at time `t` from a
/// divergence-free `u0`.
pub fn propagate_linear(
    params: &ModelParams,
    eq: &Equilibrium,
    u0: &SpectralField,
    t: f64,
) -> Result<SpectralField, SymbolError> {
    params.validate()?;
    eq.validate(params)?;
    if !(t >= 0.0) {
        return Err(SymbolError::NegativeTime(t));
    }
    let scale = u0.max_abs().max(f64::MIN_POSITIVE);
    let defect = u0.divergence_defect() / scale;
    if defect > DIVERGENCE_TOL {
        return Err(SymbolError::NotDivergenceFree(defect));
    }
    let lattice = *u0.lattice();
    let mut out = SpectralField::zeros_vector(lattice);
    for (idx, mode) in lattice.modes().enumerate() {
        let sym = symbol_general(params, eq, &mode);
        let next = semigroup_step(&sym, t, u0.at(idx))?;
        out.at_mut(idx).copy_from_slice(&next);
    }
    Ok(out)
}

/// Writes `l1..ln` followed by `re_ij, im_ij` for every mode of `lattice`.
pub fn write_symbols_csv(
    w: &mut impl Write,
    params: &ModelParams,
    eq: &Equilibrium,
    lattice: &Lattice,
) -> std::io::Result<()> {
    let n = params.dim;
    let mut header: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("re_{i}{j}"));
            header.push(format!("im_{i}{j}"));
        }
    }
    writeln!(w, "{}", header.join(","))?;
    for mode in lattice.modes() {
        let m = symbol_general(params, eq, &mode).matrix();
        let mut row: Vec<String> = mode[..n].iter().map(|k| k.to_string()).collect();
        for i in 0..n {
            for j in 0..n {
                row.push(format!("{:.17e}", m[(i, j)].re));
                row.push(format!("{:.17e}", m[(i, j)].im));
            }
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Real symmetric part of a symbol, for quadratic-form checks.
pub fn real_part(sym: &ModeSymbol) -> DMatrix<f64> {
    sym.matrix().map(|z| z.re)
}
