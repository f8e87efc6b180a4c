//! Small dense complex linear algebra: matrix exponential by Padé scaling and
//! squaring, the `φ` functions of exponential integrators, and spectra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::field::CMatrix;
use crate::lattice::{dot, Mode, Vec3};

/// Below this modulus the `φ` functions switch to their Taylor series.
pub const PHI_SERIES_THRESHOLD: f64 = 1e-4;
const PHI_SERIES_TERMS: usize = 6;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;
const SCHUR_ATTEMPTS: usize = 4;
const SCHUR_SWEEPS: usize = 100;

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `e^A` by the degree-13 Padé approximant with scaling and squaring.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::new(0.5f64.powi(s), 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |i: usize| Complex64::new(PADE13[i], 0.0);
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is singular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `φ₁(A)` and `φ₂(A)` from the exponential of an augmented block matrix.
pub fn phi_matrices(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let mut big = CMatrix::zeros(3 * n, 3 * n);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        big[(i, n + i)] = Complex64::new(1.0, 0.0);
        big[(n + i, 2 * n + i)] = Complex64::new(1.0, 0.0);
    }
    let e = expm(&big);
    (
        e.view((0, n), (n, n)).into_owned(),
        e.view((0, 2 * n), (n, n)).into_owned(),
    )
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let em1 = z.re.exp_m1();
    // e^{x+iy} - 1 = (e^x - 1) cos y + (cos y - 1) + i e^x sin y
    Complex64::new(em1 * c - 2.0 * half * half, z.re.exp() * s)
}

/// `φ₁(z) = (e^z - 1)/z`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < PHI_SERIES_THRESHOLD {
        phi_series(z, 1)
    } else {
        expm1(z) / z
    }
}

/// `φ₂(z) = (e^z - 1 - z)/z²`.
pub fn phi2(z: Complex64) -> Complex64 {
    if z.norm() < PHI_SERIES_THRESHOLD {
        phi_series(z, 2)
    } else {
        (expm1(z) - z) / (z * z)
    }
}

/// `Σ_{j<6} z^j / (j+k)!`.
fn phi_series(z: Complex64, k: usize) -> Complex64 {
    let mut fact: f64 = (1..=k).map(|i| i as f64).product();
    let mut term = Complex64::new(1.0 / fact, 0.0);
    let mut sum = term;
    for j in 1..PHI_SERIES_TERMS {
        fact = (j + k) as f64;
        term = term * z / fact;
        sum += term;
    }
    sum
}

/// Eigenvalues of a general complex matrix. Hermitian input goes through the
/// Hermitian solver; otherwise the Schur form, retried on unitarily similar
/// copies when the QR iteration stalls on clustered eigenvalues.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let scale = a.norm().max(f64::MIN_POSITIVE);
    if (a - a.adjoint()).norm() <= 1e-13 * scale {
        let herm = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
        if let Some(eig) = SymmetricEigen::try_new(herm, f64::EPSILON, 1000 * n) {
            return eig.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c0f);
    for attempt in 0..SCHUR_ATTEMPTS {
        let m = if attempt == 0 {
            a.clone()
        } else {
            let g = CMatrix::from_fn(n, n, |_, _| {
                Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            });
            let q = g.qr().q();
            q.adjoint() * a * &q
        };
        if let Some(schur) = m.try_schur(f64::EPSILON, SCHUR_SWEEPS * n) {
            let (_, t) = schur.unpack();
            return (0..n).map(|i| t[(i, i)]).collect();
        }
    }
    panic!("Schur iteration did not converge for a {n}x{n} matrix");
}

/// Ascending eigenvalues and eigenvectors (columns) of a real symmetric matrix.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis (columns, `n × (n-1)`) of the plane orthogonal to a
/// non-zero `mode`; the identity for `ℓ = 0`.
pub fn orthogonal_basis(n: usize, mode: &Mode) -> DMatrix<f64> {
    let k = [mode[0] as f64, mode[1] as f64, mode[2] as f64];
    let k2 = dot(&k, &k);
    if k2 == 0.0 {
        return DMatrix::identity(n, n);
    }
    complement_basis(n, &k)
}

/// Orthonormal basis of the orthogonal complement of `dir` in `R^n`.
pub fn complement_basis(n: usize, dir: &Vec3) -> DMatrix<f64> {
    let len = dot(dir, dir).sqrt();
    let unit: Vec<f64> = dir[..n].iter().map(|x| x / len).collect();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    // Gram-Schmidt on the coordinate axes, least aligned first
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&a, &b| unit[a].abs().total_cmp(&unit[b].abs()));
    for &ax in &axes {
        if cols.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[ax] = 1.0;
        for basis in std::iter::once(&unit).chain(cols.iter()) {
            let p: f64 = v.iter().zip(basis).map(|(a, b)| a * b).sum();
            for (vi, bi) in v.iter_mut().zip(basis) {
                *vi -= p * bi;
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-8 {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
}

pub fn to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_exp(a: &CMatrix) -> CMatrix {
        let n = a.nrows();
        let mut sum = CMatrix::identity(n, n);
        let mut term = CMatrix::identity(n, n);
        for k in 1..60 {
            term = &term * a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn pade_matches_taylor_on_small_matrices() {
        let a = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(((i * 3 + j) as f64 * 0.7).sin(), ((i + 2 * j) as f64).cos() * 0.3)
        });
        let diff = expm(&a) - taylor_exp(&a);
        assert!(diff.iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn scaling_handles_large_norms() {
        // diagonalizable with known spectrum
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(-40.0, 3.0),
            Complex64::new(2.0, -1.0),
        ]));
        let e = expm(&d);
        assert!((e[(0, 0)] - Complex64::new(-40.0, 3.0).exp()).norm() < 1e-28);
        assert!((e[(1, 1)] - Complex64::new(2.0, -1.0).exp()).norm() < 1e-13 * 8.0);
        assert!(e[(0, 1)].norm() < 1e-30);
    }

    #[test]
    fn phi_series_and_closed_form_agree_near_threshold() {
        for z in [
            Complex64::new(1.01e-4, 0.0),
            Complex64::new(0.0, 1.01e-4),
            Complex64::new(-7e-5, 7e-5),
        ] {
            let series1 = phi_series(z, 1);
            let series2 = phi_series(z, 2);
            assert!((series1 - expm1(z) / z).norm() < 1e-12);
            assert!((series2 - (expm1(z) - z) / (z * z)).norm() < 1e-8);
        }
        assert_eq!(phi1(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(phi2(Complex64::new(0.0, 0.0)), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn phi_matrices_match_scalar_phi_on_diagonal() {
        let zs = [Complex64::new(-3.0, 0.5), Complex64::new(0.2, -1.0), Complex64::new(1e-6, 0.0)];
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(zs.to_vec()));
        let (p1, p2) = phi_matrices(&a);
        for (i, z) in zs.iter().enumerate() {
            assert!((p1[(i, i)] - phi1(*z)).norm() < 1e-13);
            assert!((p2[(i, i)] - phi2(*z)).norm() < 1e-13);
        }
    }

    #[test]
    fn eigenvalues_of_clustered_hermitian_and_defective_matrices() {
        let mut h = CMatrix::from_diagonal_element(40, 40, Complex64::new(3.0, 0.0));
        h[(0, 0)] = Complex64::new(-1.0, 0.0);
        let ev = eigenvalues(&h);
        assert_eq!(ev.iter().filter(|z| (**z - Complex64::new(3.0, 0.0)).norm() < 1e-12).count(), 39);
        let mut j = CMatrix::zeros(3, 3);
        j[(0, 1)] = Complex64::new(1.0, 0.0);
        j[(2, 2)] = Complex64::new(0.0, 2.0);
        let mut ev = eigenvalues(&j);
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!(ev[0].norm() < 1e-12 && ev[1].norm() < 1e-12);
        assert!((ev[2] - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn complement_is_orthonormal() {
        let b = complement_basis(3, &[0.3, -1.0, 2.0]);
        assert_eq!(b.ncols(), 2);
        let g = b.transpose() * &b;
        assert!((g - DMatrix::identity(2, 2)).norm() < 1e-14);
        let d = nalgebra::DVector::from_vec(vec![0.3, -1.0, 2.0]);
        assert!((b.transpose() * d).norm() < 1e-14);
        let b2 = orthogonal_basis(2, &[1, 1, 0]);
        assert!((b2[(0, 0)] + b2[(1, 0)]).abs() < 1e-15);
    }
}
