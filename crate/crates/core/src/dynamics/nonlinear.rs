//! Pseudospectral evaluation of the nonlinear terms.

use num_complex::Complex64;

use crate::field::{project_in_place, SpectralField, Transformer};
use crate::lattice::{Lattice, Vec3};

use super::SimConfig;

/// Grid side used for products: `4N + 2` when dealiasing, which keeps
/// both the quadratic advection and the cubic terms free of aliases, and
/// the native `2N + 1` otherwise.
pub fn product_grid_side(lattice: &Lattice, dealias: bool) -> usize {
    if dealias {
        4 * lattice.radius() + 2
    } else {
        lattice.side()
    }
}

/// Evaluates `λ₀(u·∇)u + β|u|²u - N(u)` with
/// `N(u) = -β|u|²V - 2β(u·V)u` (zero at the disordered state).
pub struct Nonlinear {
    lattice: Lattice,
    transformer: Transformer,
    lambda0: f64,
    beta: f64,
    v: Vec3,
}

impl Nonlinear {
    pub fn new(cfg: &SimConfig) -> Self {
        let side = product_grid_side(&cfg.lattice, cfg.dealias);
        Self {
            lattice: cfg.lattice,
            transformer: Transformer::new(cfg.lattice, side),
            lambda0: cfg.params.lambda0,
            beta: cfg.params.beta,
            v: cfg.eq.velocity(),
        }
    }

    pub fn grid_side(&self) -> usize {
        self.transformer.side()
    }

    /// Grid quadrature of `(1/Lⁿ)∫|u|⁴`.
    pub fn l4_quartic(&mut self, u: &SpectralField) -> f64 {
        let comps = self.transformer.field_to_grid(u);
        mean_quartic(&comps)
    }

    /// The unprojected bracket, truncated to the lattice, and the grid mean
    /// of `|u|⁴`.
    pub fn bracket(&mut self, u: &SpectralField) -> (SpectralField, f64) {
        let n = self.lattice.dim();
        let q = self.lattice.wavenumber_scale();
        // components u_c followed by ∂_d u_c, c-major
        let nc = n + n * n;
        let mut aux = SpectralField::zeros(self.lattice, nc);
        for (idx, mode) in self.lattice.modes().enumerate() {
            let src: Vec<Complex64> = u.at(idx).to_vec();
            let dst = aux.at_mut(idx);
            for c in 0..n {
                dst[c] = src[c];
                for d in 0..n {
                    dst[n + c * n + d] = src[c] * Complex64::new(0.0, q * mode[d] as f64);
                }
            }
        }
        let g = self.transformer.field_to_grid(&aux);
        let len = self.transformer.grid_len();
        let mut out: Vec<Vec<f64>> = (0..n).map(|_| vec![0.0; len]).collect();
        let (lambda0, beta, v) = (self.lambda0, self.beta, self.v);
        let mut quartic = 0.0;
        let mut uu = [0.0; 3];
        for p in 0..len {
            for c in 0..n {
                uu[c] = g[c][p];
            }
            let s: f64 = uu[..n].iter().map(|x| x * x).sum();
            let uv: f64 = (0..n).map(|c| uu[c] * v[c]).sum();
            quartic += s * s;
            for c in 0..n {
                let adv: f64 = (0..n).map(|d| uu[d] * g[n + c * n + d][p]).sum();
                out[c][p] = lambda0 * adv + beta * s * uu[c] + beta * s * v[c] + 2.0 * beta * uv * uu[c];
            }
        }
        (self.transformer.field_from_grid(&out), quartic / len as f64)
    }

    /// `-P[λ₀(u·∇)u + β|u|²u - N(u)]` and the grid mean of `|u|⁴`.
    pub fn rhs(&mut self, u: &SpectralField) -> (SpectralField, f64) {
        let (mut b, l4) = self.bracket(u);
        project_in_place(&mut b);
        for z in b.coeffs_mut() {
            *z = -*z;
        }
        (b, l4)
    }
}

fn mean_quartic(comps: &[Vec<f64>]) -> f64 {
    let len = comps[0].len();
    let mut sum = 0.0;
    for p in 0..len {
        let s: f64 = comps.iter().map(|c| c[p] * c[p]).sum();
        sum += s * s;
    }
    sum / len as f64
}

/// `-P[λ₀(u·∇)u + β|u|²u - N(u)]` for the configuration's equilibrium.
pub fn nonlinear_rhs(u: &SpectralField, cfg: &SimConfig) -> SpectralField {
    Nonlinear::new(cfg).rhs(u).0
}
