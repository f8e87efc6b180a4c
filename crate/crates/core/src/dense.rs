//! Brute-force matrix of the linearized operator on a truncated
//! divergence-free space, assembled in physical space.
//!
//! The operator `λ₀(V·∇)u + P M u - Γ₀Δu + Γ₂Δ²u` is applied to each
//! orthonormal basis function `e exp(2πiℓ·x/L)`, `e ⊥ ℓ`, with derivatives
//! taken by Fourier collocation differentiation matrices, and projected back
//! by grid quadrature (exact for the band-limited products involved). The
//! basis is divergence-free and `P` is self-adjoint, so `⟨φ_i, P M φ_j⟩ =
//! ⟨φ_i, M φ_j⟩` and the projection never has to be formed.
//!
//! Nothing here uses the per-mode symbols, so comparing spectra is a check
//! on the symbol algebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::field::{grid_point, CMatrix};
use crate::lattice::{dot, Lattice, Mode, Vec3};
use crate::linalg;
use crate::params::{Equilibrium, ModelParams};
use crate::stability::AnalysisError;
use crate::symbols::symbol_general;

/// Largest dense dimension the oracle will assemble.
pub const DENSE_CAP: usize = 2000;
/// Relative rank tolerance, applied as `RANK_TOL · max(1, σ_max)`.
pub const RANK_TOL: f64 = 1e-8;

/// Fourier collocation first-derivative matrix on `side` (odd) equispaced
/// points of `[0, L)`.
pub fn differentiation_matrix(side: usize, length: f64) -> DMatrix<f64> {
    assert!(side % 2 == 1, "collocation grid must have an odd number of points");
    let scale = std::f64::consts::PI / length;
    DMatrix::from_fn(side, side, |i, j| {
        if i == j {
            0.0
        } else {
            let d = i as i64 - j as i64;
            let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            scale * sign / (d as f64 * std::f64::consts::PI / side as f64).sin()
        }
    })
}

/// Applies `d` along `axis` of a row-major `side^dim` grid.
fn diff_axis(values: &[Complex64], dim: usize, side: usize, axis: usize, d: &DMatrix<f64>) -> Vec<Complex64> {
    let stride = side.pow((dim - 1 - axis) as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    let mut line = vec![Complex64::new(0.0, 0.0); side];
    for start in 0..values.len() {
        // first point of each line has coordinate 0 along `axis`
        if (start / stride) % side != 0 {
            continue;
        }
        for (k, slot) in line.iter_mut().enumerate() {
            *slot = values[start + k * stride];
        }
        for i in 0..side {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, x) in line.iter().enumerate() {
                acc += *x * d[(i, j)];
            }
            out[start + i * stride] = acc;
        }
    }
    out
}

/// The assembled operator together with the mode and direction of each
/// basis function.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub basis: Vec<(Mode, Vec3)>,
}

pub fn dense_operator_matrix(
    params: &ModelParams,
    eq: &Equilibrium,
    lattice: &Lattice,
) -> Result<DenseOperator, AnalysisError> {
    params.validate()?;
    eq.validate(params)?;
    let n = params.dim;
    if lattice.dim() != n {
        return Err(AnalysisError::Precondition(format!(
            "lattice dimension {} differs from n = {n}",
            lattice.dim()
        )));
    }
    let mut basis = Vec::new();
    for mode in lattice.modes() {
        let b = linalg::orthogonal_basis(n, &mode);
        for c in 0..b.ncols() {
            let mut e = [0.0; 3];
            for i in 0..n {
                e[i] = b[(i, c)];
            }
            basis.push((mode, e));
        }
    }
    if basis.len() > DENSE_CAP {
        return Err(AnalysisError::TooLarge {
            dim: basis.len(),
            cap: DENSE_CAP,
        });
    }
    let side = lattice.side();
    let grid = lattice.num_modes();
    let dmat = differentiation_matrix(side, params.length);
    let v = eq.velocity();
    let m: DMatrix<f64> = match eq {
        Equilibrium::Disordered => DMatrix::identity(n, n) * params.alpha,
        Equilibrium::Ordered { .. } => DMatrix::from_fn(n, n, |i, j| 2.0 * params.beta * v[i] * v[j]),
    };
    let points: Vec<Vec3> = (0..grid).map(|p| grid_point(lattice, p)).collect();
    let q = 2.0 * std::f64::consts::PI / params.length;

    let rows = grid * n;
    let mut phi = CMatrix::zeros(rows, basis.len());
    let mut aphi = CMatrix::zeros(rows, basis.len());
    for (j, (mode, e)) in basis.iter().enumerate() {
        let k = [mode[0] as f64, mode[1] as f64, mode[2] as f64];
        let wave: Vec<Complex64> = points
            .iter()
            .map(|x| Complex64::from_polar(1.0, q * dot(&k, x)))
            .collect();
        for c in 0..n {
            let comp: Vec<Complex64> = wave.iter().map(|w| w * e[c]).collect();
            for (p, z) in comp.iter().enumerate() {
                phi[(c * grid + p, j)] = *z;
            }
        }
        for c in 0..n {
            let comp: Vec<Complex64> = (0..grid).map(|p| phi[(c * grid + p, j)]).collect();
            let grads: Vec<Vec<Complex64>> = (0..n).map(|ax| diff_axis(&comp, n, side, ax, &dmat)).collect();
            let lap: Vec<Complex64> = (0..grid)
                .map(|p| (0..n).map(|ax| diff_axis_point(&grads[ax], n, side, ax, &dmat, p)).sum())
                .collect();
            let bilap: Vec<Complex64> = {
                let lg: Vec<Vec<Complex64>> = (0..n).map(|ax| diff_axis(&lap, n, side, ax, &dmat)).collect();
                (0..grid)
                    .map(|p| (0..n).map(|ax| diff_axis_point(&lg[ax], n, side, ax, &dmat, p)).sum())
                    .collect()
            };
            for p in 0..grid {
                let drift: Complex64 = (0..n).map(|ax| grads[ax][p] * v[ax]).sum::<Complex64>() * params.lambda0;
                let reaction: Complex64 = (0..n).map(|d| phi[(d * grid + p, j)] * m[(c, d)]).sum();
                aphi[(c * grid + p, j)] = drift + reaction - lap[p] * params.gamma0 + bilap[p] * params.gamma2;
            }
        }
    }
    let matrix = phi.adjoint() * aphi / Complex64::new(grid as f64, 0.0);
    Ok(DenseOperator { matrix, basis })
}

/// One entry of `d` applied along `axis`, at grid point `p`.
fn diff_axis_point(values: &[Complex64], dim: usize, side: usize, axis: usize, d: &DMatrix<f64>, p: usize) -> Complex64 {
    let stride = side.pow((dim - 1 - axis) as u32);
    let i = (p / stride) % side;
    let start = p - i * stride;
    (0..side).map(|j| values[start + j * stride] * d[(i, j)]).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeEigenvalue {
    pub mode: [i64; 3],
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Union over modes of the eigenvalues of `σ(ℓ)` restricted to `{ℓ}^⊥`.
    pub eigenvalues: Vec<ModeEigenvalue>,
    #[serde(skip)]
    pub dense_eigenvalues: Vec<Complex64>,
    /// Largest distance in a greedy nearest-neighbour pairing of the two
    /// spectra.
    pub max_pairing_distance: f64,
    pub kernel_dim: usize,
    /// `dim N(A²)`, as `dim N(A) + dim(N(A) ∩ R(A))`.
    pub kernel_dim_squared: usize,
    pub semisimple_zero: bool,
}

/// Eigenvalues of the restricted symbols, mode by mode.
pub fn mode_spectrum(params: &ModelParams, eq: &Equilibrium, lattice: &Lattice) -> Vec<ModeEigenvalue> {
    let mut out = Vec::new();
    for mode in lattice.modes() {
        for z in linalg::eigenvalues(&symbol_general(params, eq, &mode).restricted()) {
            out.push(ModeEigenvalue { mode, re: z.re, im: z.im });
        }
    }
    out
}

/// Greedy nearest-neighbour pairing; `a` and `b` must have equal length.
pub fn max_pairing_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best.0 {
                    best = (d, j);
                }
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

/// Orthonormal bases of the right and left null spaces under the
/// tolerance `RANK_TOL · max(1, σ_max)`.
fn null_spaces(a: &CMatrix) -> (CMatrix, CMatrix) {
    let svd = a.clone().svd(true, true);
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let tol = RANK_TOL * smax.max(1.0);
    let idx: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= tol).collect();
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let right = CMatrix::from_fn(a.ncols(), idx.len(), |r, c| vt[(idx[c], r)].conj());
    let left = CMatrix::from_fn(a.nrows(), idx.len(), |r, c| u[(r, idx[c])]);
    (right, left)
}

/// `dim N(A)` and `dim N(A²)` by rank tests at tolerance [`RANK_TOL`].
pub fn kernel_dims(a: &CMatrix) -> (usize, usize) {
    let (right, left) = null_spaces(a);
    let k = right.ncols();
    if k == 0 {
        return (0, 0);
    }
    // N(A) ∩ R(A) is the part of N(A) orthogonal to N(Aᴴ)
    let cross = left.adjoint() * &right;
    let s = linalg::singular_values(&cross);
    let rank = s.iter().filter(|x| **x > RANK_TOL).count();
    (k, 2 * k - rank)
}

pub fn spectrum_report(
    params: &ModelParams,
    eq: &Equilibrium,
    lattice: &Lattice,
) -> Result<SpectrumReport, AnalysisError> {
    let op = dense_operator_matrix(params, eq, lattice)?;
    let dense = linalg::eigenvalues(&op.matrix);
    let modes = mode_spectrum(params, eq, lattice);
    let per_mode: Vec<Complex64> = modes.iter().map(|e| Complex64::new(e.re, e.im)).collect();
    let dist = max_pairing_distance(&dense, &per_mode);
    let (k1, k2) = kernel_dims(&op.matrix);
    Ok(SpectrumReport {
        eigenvalues: modes,
        dense_eigenvalues: dense,
        max_pairing_distance: dist,
        kernel_dim: k1,
        kernel_dim_squared: k2,
        semisimple_zero: k1 == k2,
    })
}

#[derive(Clone, Debug)]
pub struct ImaginaryCheck {
    pub ok: bool,
    pub near_imaginary: Vec<Complex64>,
}

/// No eigenvalue of the dense operator with `|Re λ| <= 1e-8` and
/// `|Im λ| > 1e-8`.
pub fn imaginary_spectrum_check(
    params: &ModelParams,
    v: &Vec3,
    lattice: &Lattice,
) -> Result<ImaginaryCheck, AnalysisError> {
    let eq = Equilibrium::Ordered { v: *v };
    let op = dense_operator_matrix(params, &eq, lattice)?;
    let near: Vec<Complex64> = linalg::eigenvalues(&op.matrix)
        .into_iter()
        .filter(|z| z.re.abs() <= 1e-8 && z.im.abs() > 1e-8)
        .collect();
    Ok(ImaginaryCheck {
        ok: near.is_empty(),
        near_imaginary: near,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::fixtures::{disordered, hyperbolic_example};

    #[test]
    fn differentiation_is_exact_on_band() {
        let side = 7;
        let len = 3.0;
        let d = differentiation_matrix(side, len);
        for k in -3i64..=3 {
            let q = 2.0 * std::f64::consts::PI / len * k as f64;
            let f: Vec<Complex64> = (0..side)
                .map(|j| Complex64::from_polar(1.0, q * j as f64 * len / side as f64))
                .collect();
            let df = diff_axis(&f, 1, side, 0, &d);
            for (a, b) in df.iter().zip(&f) {
                assert!((a - b * Complex64::new(0.0, q)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn disordered_operator_is_diagonal_with_multiplicities() {
        let p = disordered(-1.5, 1.0, 0.7);
        let lat = Lattice::new(2, 2, p.length).unwrap();
        let op = dense_operator_matrix(&p, &Equilibrium::Disordered, &lat).unwrap();
        assert_eq!(op.matrix.nrows(), 24 + 2);
        let normal = &op.matrix * op.matrix.adjoint() - op.matrix.adjoint() * &op.matrix;
        assert!(normal.iter().all(|z| z.norm() < 1e-9));
        for (i, (mode, _)) in op.basis.iter().enumerate() {
            let s = crate::symbols::symbol_disordered(&p, mode);
            assert!((op.matrix[(i, i)].re - s).abs() < 1e-10);
        }
    }

    #[test]
    fn hyperbolic_example_matches_symbols() {
        let p = hyperbolic_example(2);
        let eq = Equilibrium::ordered(&p, &[1.0, 0.0]).unwrap();
        let lat = Lattice::new(2, 3, p.length).unwrap();
        let r = spectrum_report(&p, &eq, &lat).unwrap();
        assert!(r.max_pairing_distance < 1e-8, "{}", r.max_pairing_distance);
        assert_eq!(r.kernel_dim, 1);
        assert!(r.semisimple_zero);
        assert!(imaginary_spectrum_check(&p, &eq.velocity(), &lat).unwrap().ok);
    }

    #[test]
    fn jordan_block_is_not_semisimple() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 1)] = Complex64::new(1.0, 0.0);
        a[(2, 2)] = Complex64::new(2.0, 0.0);
        assert_eq!(kernel_dims(&a), (1, 2));
        let mut b = CMatrix::zeros(3, 3);
        b[(2, 2)] = Complex64::new(2.0, 0.0);
        assert_eq!(kernel_dims(&b), (2, 2));
    }

    #[test]
    fn cap_is_enforced() {
        let p = hyperbolic_example(3);
        let lat = Lattice::new(3, 6, p.length).unwrap();
        assert!(matches!(
            dense_operator_matrix(&p, &Equilibrium::Disordered, &lat),
            Err(AnalysisError::TooLarge { .. })
        ));
    }
}
