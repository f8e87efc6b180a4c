//! Real periodic vector fields in their Fourier and collocation
//! representations, Fourier multipliers and the Helmholtz-Weyl projection.
//!
//! Coefficients follow the `1/L^n ∫ f(x) e^{-2πi ℓ·x/L} dx` convention, so
//! `û(0)` is the mean of the field and `Σ |û(ℓ)|²` is the normalized squared
//! L² norm. The collocation grid has `2N + 1` points per axis; every retained
//! mode has its conjugate partner and there is no Nyquist mode.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::fft::{wrap, GridFft};
use crate::lattice::{dot, mode_to_vec, norm_sq, Lattice, Mode, Vec3};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance on `û(-ℓ) = conj(û(ℓ))` before a field is refused.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("fields live on different lattices")]
    LatticeMismatch,
    #[error("Hermitian symmetry violated: relative defect {0:.3e}")]
    Symmetry(f64),
    #[error("Sobolev order must be non-negative, got {0}")]
    NegativeOrder(f64),
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("snapshot format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Fourier coefficients `û(ℓ) ∈ C^ncomp` on the full truncated lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    ncomp: usize,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(lattice: Lattice, ncomp: usize) -> Self {
        Self {
            lattice,
            ncomp,
            data: vec![Complex64::new(0.0, 0.0); lattice.num_modes() * ncomp],
        }
    }

    /// A vector field with one component per spatial dimension.
    pub fn zeros_vector(lattice: Lattice) -> Self {
        Self::zeros(lattice, lattice.dim())
    }

    pub fn from_coeffs(
        lattice: Lattice,
        ncomp: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, SpectralError> {
        let expected = lattice.num_modes() * ncomp;
        if data.len() != expected {
            return Err(SpectralError::Shape {
                expected,
                got: data.len(),
            });
        }
        Ok(Self {
            lattice,
            ncomp,
            data,
        })
    }

    /// Constant field `c`.
    pub fn constant(lattice: Lattice, value: &[f64]) -> Self {
        let mut f = Self::zeros(lattice, value.len());
        let z = lattice.zero_index();
        for (c, v) in value.iter().enumerate() {
            f.data[z * value.len() + c] = Complex64::new(*v, 0.0);
        }
        f
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.data
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Coefficient vector at lattice index `idx`.
    pub fn at(&self, idx: usize) -> &[Complex64] {
        &self.data[idx * self.ncomp..(idx + 1) * self.ncomp]
    }

    pub fn at_mut(&mut self, idx: usize) -> &mut [Complex64] {
        &mut self.data[idx * self.ncomp..(idx + 1) * self.ncomp]
    }

    /// Coefficient vector at `mode`, or `None` outside the truncation.
    pub fn get(&self, mode: &Mode) -> Option<&[Complex64]> {
        self.lattice.index(mode).map(|i| self.at(i))
    }

    /// Sets `û(ℓ) = value` and `û(-ℓ) = conj(value)`.
    pub fn set_mode(&mut self, mode: &Mode, value: &[Complex64]) {
        let idx = self
            .lattice
            .index(mode)
            .expect("mode outside truncated lattice");
        let cidx = self.lattice.conjugate_index(idx);
        for c in 0..self.ncomp {
            self.data[idx * self.ncomp + c] = value[c];
            self.data[cidx * self.ncomp + c] = value[c].conj();
        }
        if idx == cidx {
            for c in 0..self.ncomp {
                let v = &mut self.data[idx * self.ncomp + c];
                *v = Complex64::new(v.re, 0.0);
            }
        }
    }

    /// Mean value `û(0)` as a real vector.
    pub fn mean(&self) -> Vec<f64> {
        self.at(self.lattice.zero_index()).iter().map(|z| z.re).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |û(ℓ) - conj(û(-ℓ))|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for idx in 0..self.lattice.num_modes() {
            let cidx = self.lattice.conjugate_index(idx);
            for c in 0..self.ncomp {
                let d = self.data[idx * self.ncomp + c] - self.data[cidx * self.ncomp + c].conj();
                worst = worst.max(d.norm());
            }
        }
        worst / scale
    }

    /// Replaces `û(ℓ)` by the average of `û(ℓ)` and `conj(û(-ℓ))`.
    pub fn symmetrize(&mut self) {
        let nm = self.lattice.num_modes();
        for idx in 0..=nm / 2 {
            let cidx = self.lattice.conjugate_index(idx);
            for c in 0..self.ncomp {
                let a = self.data[idx * self.ncomp + c];
                let b = self.data[cidx * self.ncomp + c];
                let avg = 0.5 * (a + b.conj());
                self.data[idx * self.ncomp + c] = avg;
                self.data[cidx * self.ncomp + c] = avg.conj();
            }
        }
    }

    /// Largest `|ℓ·û(ℓ)| / |ℓ|` over `ℓ ≠ 0`.
    pub fn divergence_defect(&self) -> f64 {
        assert_eq!(self.ncomp, self.lattice.dim());
        let mut worst = 0.0f64;
        for (idx, mode) in self.lattice.modes().enumerate() {
            let k2 = norm_sq(&mode);
            if k2 == 0 {
                continue;
            }
            let u = self.at(idx);
            let div: Complex64 = (0..self.ncomp).map(|c| u[c] * mode[c] as f64).sum();
            worst = worst.max(div.norm() / (k2 as f64).sqrt());
        }
        worst
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, 1.0);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, -1.0);
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Self, factor: f64) {
        assert!(self.lattice.same_shape(&other.lattice) && self.ncomp == other.ncomp);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖∇u‖² = Σ (2π/L)² |ℓ|² |û(ℓ)|²`.
    pub fn gradient_norm_sq(&self) -> f64 {
        self.weighted_norm_sq(|k2| k2)
    }

    /// `‖Δu‖² = Σ (2π/L)⁴ |ℓ|⁴ |û(ℓ)|²`.
    pub fn laplacian_norm_sq(&self) -> f64 {
        self.weighted_norm_sq(|k2| k2 * k2)
    }

    fn weighted_norm_sq(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let q = self.lattice.wavenumber_scale().powi(2);
        self.lattice
            .modes()
            .enumerate()
            .map(|(idx, m)| {
                let w = weight(q * norm_sq(&m) as f64);
                w * self.at(idx).iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum()
    }
}

/// Real vector samples on the `(2N+1)^n` collocation grid, row-major with
/// the first coordinate slowest and components innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    lattice: Lattice,
    ncomp: usize,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn new(lattice: Lattice, ncomp: usize, values: Vec<f64>) -> Result<Self, SpectralError> {
        let expected = lattice.num_modes() * ncomp;
        if values.len() != expected {
            return Err(SpectralError::Shape {
                expected,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self {
            lattice,
            ncomp,
            values,
        })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(lattice: Lattice, ncomp: usize, f: impl Fn(&Vec3) -> Vec<f64>) -> Self {
        let mut values = Vec::with_capacity(lattice.num_modes() * ncomp);
        for p in 0..lattice.num_modes() {
            let v = f(&grid_point(&lattice, p));
            assert_eq!(v.len(), ncomp);
            values.extend(v);
        }
        Self {
            lattice,
            ncomp,
            values,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, point: usize) -> &[f64] {
        &self.values[point * self.ncomp..(point + 1) * self.ncomp]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Grid quadrature of `(1/L^n) ∫ u·v dx`.
    pub fn quadrature_inner(&self, other: &Self) -> f64 {
        let sum: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        sum / self.lattice.num_modes() as f64
    }
}

/// Coordinates of grid point `p` (row-major, first axis slowest).
pub fn grid_point(lattice: &Lattice, mut p: usize) -> Vec3 {
    let side = lattice.side();
    let h = lattice.length() / side as f64;
    let mut x = [0.0; 3];
    for d in (0..lattice.dim()).rev() {
        x[d] = (p % side) as f64 * h;
        p /= side;
    }
    x
}

/// Moves scalar components between the truncated lattice and a grid with
/// `side >= 2N + 1` points per axis. Two real components share one complex
/// FFT: `ifft(â + i b̂) = a + i b` when both are Hermitian.
pub struct Transformer {
    lattice: Lattice,
    fft: GridFft,
    positions: Vec<usize>,
    buf: Vec<Complex64>,
}

impl Transformer {
    pub fn new(lattice: Lattice, side: usize) -> Self {
        assert!(side >= lattice.side(), "grid too coarse for lattice");
        let dim = lattice.dim();
        let positions = lattice
            .modes()
            .map(|m| {
                (0..dim).fold(0usize, |acc, d| acc * side + wrap(m[d], side))
            })
            .collect();
        let fft = GridFft::new(dim, side);
        let len = fft.len();
        Self {
            lattice,
            fft,
            positions,
            buf: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn grid_len(&self) -> usize {
        self.fft.len()
    }

    pub fn side(&self) -> usize {
        self.fft.side()
    }

    /// Grid values of the real fields with coefficients `a` and (optionally)
    /// `b`. Each coefficient accessor is symmetrized before packing.
    pub fn to_grid(
        &mut self,
        a: impl Fn(usize) -> Complex64,
        b: Option<&dyn Fn(usize) -> Complex64>,
        out_a: &mut [f64],
        out_b: Option<&mut [f64]>,
    ) {
        let i = Complex64::new(0.0, 1.0);
        self.buf.fill(Complex64::new(0.0, 0.0));
        let nm = self.lattice.num_modes();
        for idx in 0..nm {
            let cidx = nm - 1 - idx;
            let sa = 0.5 * (a(idx) + a(cidx).conj());
            let v = match b {
                Some(b) => sa + i * (0.5 * (b(idx) + b(cidx).conj())),
                None => sa,
            };
            self.buf[self.positions[idx]] = v;
        }
        self.fft.inverse(&mut self.buf);
        for (o, z) in out_a.iter_mut().zip(&self.buf) {
            *o = z.re;
        }
        if let Some(out_b) = out_b {
            for (o, z) in out_b.iter_mut().zip(&self.buf) {
                *o = z.im;
            }
        }
    }

    /// Truncated Fourier coefficients of the real grid fields `a`, `b`,
    /// exactly Hermitian by construction.
    pub fn from_grid(
        &mut self,
        a: &[f64],
        b: Option<&[f64]>,
        mut out_a: impl FnMut(usize, Complex64),
        out_b: Option<&mut dyn FnMut(usize, Complex64)>,
    ) {
        match b {
            Some(b) => {
                for ((z, x), y) in self.buf.iter_mut().zip(a).zip(b) {
                    *z = Complex64::new(*x, *y);
                }
            }
            None => {
                for (z, x) in self.buf.iter_mut().zip(a) {
                    *z = Complex64::new(*x, 0.0);
                }
            }
        }
        self.fft.forward(&mut self.buf);
        let norm = 1.0 / self.fft.len() as f64;
        let nm = self.lattice.num_modes();
        let half_i = Complex64::new(0.0, -0.5);
        let mut out_b = out_b;
        for idx in 0..nm {
            let z = self.buf[self.positions[idx]] * norm;
            let zc = self.buf[self.positions[nm - 1 - idx]].conj() * norm;
            out_a(idx, 0.5 * (z + zc));
            if let Some(ob) = out_b.as_mut() {
                ob(idx, half_i * (z - zc));
            }
        }
    }

    /// All components of `u` on this grid, `ncomp` arrays of grid length.
    pub fn field_to_grid(&mut self, u: &SpectralField) -> Vec<Vec<f64>> {
        let nc = u.ncomp();
        let len = self.grid_len();
        let mut out: Vec<Vec<f64>> = (0..nc).map(|_| vec![0.0; len]).collect();
        let data = u.coeffs();
        let mut c = 0;
        while c < nc {
            if c + 1 < nc {
                let (lo, hi) = out.split_at_mut(c + 1);
                let fb = |i: usize| data[i * nc + c + 1];
                self.to_grid(
                    |i| data[i * nc + c],
                    Some(&fb),
                    &mut lo[c],
                    Some(&mut hi[0]),
                );
                c += 2;
            } else {
                self.to_grid(|i| data[i * nc + c], None, &mut out[c], None);
                c += 1;
            }
        }
        out
    }

    /// Coefficients of the grid components `comps` as a spectral field.
    pub fn field_from_grid(&mut self, comps: &[Vec<f64>]) -> SpectralField {
        let nc = comps.len();
        let mut u = SpectralField::zeros(self.lattice, nc);
        let mut c = 0;
        while c < nc {
            let data = u.coeffs_mut();
            if c + 1 < nc {
                let mut second = Vec::with_capacity(self.lattice.num_modes());
                self.from_grid(
                    &comps[c],
                    Some(&comps[c + 1]),
                    |i, z| data[i * nc + c] = z,
                    Some(&mut |_, z| second.push(z)),
                );
                for (i, z) in second.into_iter().enumerate() {
                    data[i * nc + c + 1] = z;
                }
                c += 2;
            } else {
                self.from_grid(&comps[c], None, |i, z| data[i * nc + c] = z, None);
                c += 1;
            }
        }
        u
    }
}

/// Fourier coefficients of a collocation field.
pub fn forward_transform(f: &PhysicalField) -> SpectralField {
    let lattice = *f.lattice();
    let nc = f.ncomp();
    let len = lattice.num_modes();
    let comps: Vec<Vec<f64>> = (0..nc)
        .map(|c| (0..len).map(|p| f.values[p * nc + c]).collect())
        .collect();
    Transformer::new(lattice, lattice.side()).field_from_grid(&comps)
}

/// Collocation values of a Hermitian-symmetric coefficient field.
pub fn inverse_transform(u: &SpectralField) -> Result<PhysicalField, SpectralError> {
    let defect = u.hermitian_defect();
    if defect > SYMMETRY_TOL {
        return Err(SpectralError::Symmetry(defect));
    }
    let lattice = *u.lattice();
    let comps = Transformer::new(lattice, lattice.side()).field_to_grid(u);
    let nc = u.ncomp();
    let len = lattice.num_modes();
    let mut values = vec![0.0; len * nc];
    for (c, comp) in comps.iter().enumerate() {
        for p in 0..len {
            values[p * nc + c] = comp[p];
        }
    }
    PhysicalField::new(lattice, nc, values)
}

/// A Fourier multiplier `m: Z^n → C^{k×k}`, evaluated on `|ℓ|_∞ <= bound`.
pub struct MultiplierSymbol<'a> {
    ncomp: usize,
    bound: usize,
    eval: Box<dyn Fn(&Mode) -> CMatrix + 'a>,
}

impl<'a> MultiplierSymbol<'a> {
    pub fn new(ncomp: usize, bound: usize, eval: impl Fn(&Mode) -> CMatrix + 'a) -> Self {
        Self {
            ncomp,
            bound,
            eval: Box::new(eval),
        }
    }

    pub fn eval(&self, mode: &Mode) -> CMatrix {
        (self.eval)(mode)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn identity(ncomp: usize, bound: usize) -> Self {
        Self::new(ncomp, bound, move |_| CMatrix::identity(ncomp, ncomp))
    }

    /// Symbol of `∂_axis`: `(2πi/L) ℓ_axis I`.
    pub fn derivative(lattice: &Lattice, ncomp: usize, axis: usize) -> Self {
        let q = lattice.wavenumber_scale();
        Self::new(ncomp, lattice.radius(), move |m| {
            CMatrix::identity(ncomp, ncomp) * Complex64::new(0.0, q * m[axis] as f64)
        })
    }

    /// Symbol of `Δ`: `-(2π/L)² |ℓ|² I`.
    pub fn laplacian(lattice: &Lattice, ncomp: usize) -> Self {
        let q2 = lattice.wavenumber_scale().powi(2);
        Self::new(ncomp, lattice.radius(), move |m| {
            CMatrix::identity(ncomp, ncomp) * Complex64::new(-q2 * norm_sq(m) as f64, 0.0)
        })
    }

    /// Symbol of the Helmholtz-Weyl projection.
    pub fn helmholtz(lattice: &Lattice) -> Self {
        let n = lattice.dim();
        Self::new(n, lattice.radius(), move |m| projection_symbol(n, m))
    }
}

/// `σ_P(ℓ) = I - ℓℓᵀ/|ℓ|²`, with `σ_P(0) = I`.
pub fn projection_symbol(n: usize, mode: &Mode) -> CMatrix {
    let k2 = norm_sq(mode) as f64;
    CMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        if k2 == 0.0 {
            Complex64::new(id, 0.0)
        } else {
            Complex64::new(id - (mode[i] * mode[j]) as f64 / k2, 0.0)
        }
    })
}

/// `(T_m u)^(ℓ) = m(ℓ) û(ℓ)` on every retained mode.
pub fn apply_multiplier(m: &MultiplierSymbol<'_>, u: &SpectralField) -> SpectralField {
    assert_eq!(m.ncomp, u.ncomp(), "multiplier size does not match field");
    let lattice = *u.lattice();
    let nc = u.ncomp();
    let mut out = SpectralField::zeros(lattice, nc);
    for (idx, mode) in lattice.modes().enumerate() {
        let mat = m.eval(&mode);
        debug_assert!(mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        let src = u.at(idx);
        let dst = out.at_mut(idx);
        for i in 0..nc {
            dst[i] = (0..nc).map(|j| mat[(i, j)] * src[j]).sum();
        }
    }
    out
}

/// Per-mode projection `û(ℓ) - ℓ (ℓ·û(ℓ)) / |ℓ|²`.
pub fn helmholtz_project(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    project_in_place(&mut out);
    out
}

pub fn project_in_place(u: &mut SpectralField) {
    let lattice = *u.lattice();
    let nc = u.ncomp();
    assert_eq!(nc, lattice.dim(), "projection needs a vector field");
    for (idx, mode) in lattice.modes().enumerate() {
        let k2 = norm_sq(&mode);
        if k2 == 0 {
            continue;
        }
        let v = u.at_mut(idx);
        let div: Complex64 = (0..nc).map(|c| v[c] * mode[c] as f64).sum();
        let f = div / k2 as f64;
        for c in 0..nc {
            v[c] -= f * mode[c] as f64;
        }
    }
}

/// `(u, v) = Σ û(ℓ)·conj(v̂(ℓ))`.
pub fn inner_product(u: &SpectralField, v: &SpectralField) -> Result<Complex64, SpectralError> {
    if !u.lattice().same_shape(v.lattice()) || u.ncomp() != v.ncomp() {
        return Err(SpectralError::LatticeMismatch);
    }
    Ok(u.coeffs().iter().zip(v.coeffs()).map(|(a, b)| a * b.conj()).sum())
}

/// `‖u‖²_{H^s} = Σ (1 + (2π/L)²|ℓ|²)^{s/2} |û(ℓ)|²`.
pub fn sobolev_norm_sq(u: &SpectralField, s: f64) -> Result<f64, SpectralError> {
    if !(s >= 0.0) {
        return Err(SpectralError::NegativeOrder(s));
    }
    let q2 = u.lattice().wavenumber_scale().powi(2);
    Ok(u.lattice()
        .modes()
        .enumerate()
        .map(|(idx, m)| {
            let w = (1.0 + q2 * norm_sq(&m) as f64).powf(0.5 * s);
            w * u.at(idx).iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
        .sum())
}

pub fn sobolev_norm(u: &SpectralField, s: f64) -> Result<f64, SpectralError> {
    sobolev_norm_sq(u, s).map(f64::sqrt)
}

/// Unit vector along `ℓ` (zero for `ℓ = 0`).
pub fn mode_direction(mode: &Mode) -> Vec3 {
    let v = mode_to_vec(mode);
    let n = dot(&v, &v).sqrt();
    if n == 0.0 {
        v
    } else {
        [v[0] / n, v[1] / n, v[2] / n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_field_has_only_mean() {
        let lat = Lattice::new(2, 3, 2.0).unwrap();
        let f = PhysicalField::from_fn(lat, 2, |_| vec![1.5, -0.5]);
        let u = forward_transform(&f);
        let z = lat.zero_index();
        assert!((u.at(z)[0] - c(1.5, 0.0)).norm() < 1e-15);
        assert!((u.at(z)[1] - c(-0.5, 0.0)).norm() < 1e-15);
        for idx in 0..lat.num_modes() {
            if idx != z {
                assert!(u.at(idx).iter().all(|v| v.norm() < 1e-15));
            }
        }
    }

    #[test]
    fn cosine_maps_to_paired_modes() {
        let lat = Lattice::new(2, 4, 3.0).unwrap();
        let l0: Mode = [1, 2, 0];
        let q = lat.wavenumber_scale();
        let f = PhysicalField::from_fn(lat, 2, |x| {
            vec![2.0 * (q * (l0[0] as f64 * x[0] + l0[1] as f64 * x[1])).cos(), 0.0]
        });
        let u = forward_transform(&f);
        for (idx, m) in lat.modes().enumerate() {
            let expect = if m == l0 || m == crate::lattice::neg(&l0) { 1.0 } else { 0.0 };
            assert!((u.at(idx)[0] - c(expect, 0.0)).norm() < 1e-14, "{m:?}");
            assert!(u.at(idx)[1].norm() < 1e-14);
        }
        let back = inverse_transform(&u).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn inverse_rejects_asymmetric_coefficients() {
        let lat = Lattice::new(2, 2, 1.0).unwrap();
        let mut u = SpectralField::zeros_vector(lat);
        let idx = lat.index(&[1, 0, 0]).unwrap();
        u.at_mut(idx)[0] = c(1.0, 0.0);
        assert!(matches!(inverse_transform(&u), Err(SpectralError::Symmetry(_))));
    }

    #[test]
    fn derivative_of_cosine_is_minus_sine() {
        let lat = Lattice::new(2, 3, 2.0 * PI).unwrap();
        let f = PhysicalField::from_fn(lat, 2, |x| {
            vec![(2.0 * x[0] + x[1]).cos(), 0.0]
        });
        let du = apply_multiplier(&MultiplierSymbol::derivative(&lat, 2, 0), &forward_transform(&f));
        assert!(du.hermitian_defect() < 1e-15);
        let g = inverse_transform(&du).unwrap();
        for p in 0..lat.num_modes() {
            let x = grid_point(&lat, p);
            assert!((g.at(p)[0] + 2.0 * (2.0 * x[0] + x[1]).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_kills_the_mean() {
        let lat = Lattice::new(3, 2, 1.0).unwrap();
        let u = SpectralField::constant(lat, &[1.0, 2.0, 3.0]);
        let lu = apply_multiplier(&MultiplierSymbol::laplacian(&lat, 3), &u);
        assert_eq!(lu.max_abs(), 0.0);
        let id = apply_multiplier(&MultiplierSymbol::identity(3, 2), &u);
        assert_eq!(id, u);
    }

    #[test]
    fn projection_along_and_across_the_mode() {
        let p = projection_symbol(2, &[1, 0, 0]);
        assert_eq!(p[(0, 0)], c(0.0, 0.0));
        assert_eq!(p[(1, 1)], c(1.0, 0.0));
        assert_eq!(p[(0, 1)], c(0.0, 0.0));
        assert_eq!(projection_symbol(3, &[0, 0, 0]), CMatrix::identity(3, 3));
    }

    #[test]
    fn sobolev_weights_as_printed() {
        let lat = Lattice::new(2, 2, 2.0 * PI).unwrap();
        assert_eq!(sobolev_norm(&SpectralField::zeros_vector(lat), 2.0).unwrap(), 0.0);
        let mean = SpectralField::constant(lat, &[1.0, 0.0]);
        for s in [0.0, 0.5, 2.0, 7.0] {
            assert!((sobolev_norm(&mean, s).unwrap() - 1.0).abs() < 1e-15);
        }
        let mut single = SpectralField::zeros_vector(lat);
        let idx = lat.index(&[0, 1, 0]).unwrap();
        single.at_mut(idx)[0] = c(1.0, 0.0);
        assert!((sobolev_norm_sq(&single, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            sobolev_norm(&single, -1.0),
            Err(SpectralError::NegativeOrder(_))
        ));
    }

    #[test]
    fn inner_product_of_orthogonal_harmonics_vanishes() {
        let lat = Lattice::new(2, 3, 1.0).unwrap();
        let mut a = SpectralField::zeros_vector(lat);
        let mut b = SpectralField::zeros_vector(lat);
        a.set_mode(&[1, 0, 0], &[c(0.0, 1.0), c(0.0, 0.0)]);
        b.set_mode(&[0, 2, 0], &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(inner_product(&a, &b).unwrap(), c(0.0, 0.0));
        let aa = inner_product(&a, &a).unwrap();
        assert!(aa.re > 0.0 && aa.im == 0.0);
        let other = SpectralField::zeros_vector(Lattice::new(2, 2, 1.0).unwrap());
        assert!(inner_product(&a, &other).is_err());
    }
}
