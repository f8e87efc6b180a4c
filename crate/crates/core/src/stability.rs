//! Regime classification of the two equilibrium families from the per-mode
//! symbols, with explicit unstable witnesses.
//!
//! Every "for all modes" condition is decided on a finite set of shells: the
//! shell polynomial `Γ₂(2π/L)⁴z² + Γ₀(2π/L)²z` is positive beyond its
//! larger root, so only `|ℓ|²` up to that root can change a verdict.

use nalgebra::DVector;
use serde::Serialize;
use thiserror::Error;

use crate::field::SpectralField;
use crate::lattice::{dot, modes_in_ball, mode_to_vec, norm_sq, Lattice, Mode, Vec3};
use crate::linalg;
use crate::params::{Equilibrium, ModelParams, ParamError};
use crate::symbols::{parabola_roots, real_part, symbol_disordered, symbol_general, ModeSymbol};

/// Relative tolerance for the equality cases of the classification.
pub const EQUALITY_TOL: f64 = 1e-12;
/// Distance to a regime boundary below which a verdict is flagged.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dense operator of dimension {dim} exceeds the cap {cap}")]
    TooLarge { dim: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Stable,
    ExpStable,
    ExpUnstable,
    NormallyStable,
    NormallyHyperbolic,
    Inconclusive,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An unstable mode `ℓ₀` with a unit direction `x ⊥ ℓ₀` such that
/// `xᵀ Re σ(ℓ₀) x < 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub mode: Vec<i64>,
    pub norm_sq: i64,
    pub direction: Vec<f64>,
    pub quadratic_form: f64,
    /// Growth rate of the mode, `-λ_min(Re σ(ℓ₀))` on `{ℓ₀}^⊥`.
    pub growth_rate: f64,
}

impl Witness {
    pub fn lattice_mode(&self) -> Mode {
        let mut m = [0; 3];
        m[..self.mode.len()].copy_from_slice(&self.mode);
        m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeVerdict {
    pub regime: Regime,
    /// Short tag naming the result that decided the verdict.
    pub rule: &'static str,
    pub witness: Option<Witness>,
    /// `min σ` over the scanned shells (disordered only).
    pub min_symbol: Option<f64>,
    pub near_boundary: bool,
    pub details: String,
}

impl RegimeVerdict {
    fn new(regime: Regime, rule: &'static str, details: String) -> Self {
        Self {
            regime,
            rule,
            witness: None,
            min_symbol: None,
            near_boundary: false,
            details,
        }
    }
}

fn in_cube(mode: &Mode, bound: Option<usize>) -> bool {
    bound.is_none_or(|b| mode.iter().all(|k| k.unsigned_abs() as usize <= b))
}

fn make_witness(sym: &ModeSymbol, x: &Vec3) -> Witness {
    let n = sym.dim;
    let re = real_part(sym);
    let xv = DVector::from_column_slice(&x[..n]);
    let qf = (xv.transpose() * &re * &xv)[(0, 0)];
    Witness {
        mode: sym.mode[..n].to_vec(),
        norm_sq: norm_sq(&sym.mode),
        direction: x[..n].to_vec(),
        quadratic_form: qf,
        growth_rate: sym.growth_rate(),
    }
}

/// Lowest quadratic form wins; near-ties go to the smaller shell, then the
/// lexicographically first mode.
fn best_witness(cands: Vec<Witness>) -> Option<Witness> {
    let min = cands.iter().map(|w| w.quadratic_form).fold(f64::INFINITY, f64::min);
    let tol = EQUALITY_TOL * min.abs().max(1.0);
    cands
        .into_iter()
        .filter(|w| w.quadratic_form <= min + tol)
        .min_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then_with(|| a.mode.cmp(&b.mode)))
}

fn first_perp(n: usize, mode: &Mode) -> Vec3 {
    let b = linalg::orthogonal_basis(n, mode);
    let mut x = [0.0; 3];
    for i in 0..n {
        x[i] = b[(i, 0)];
    }
    x
}

/// `|ℓ|²` up to which the disordered symbol can be non-positive or
/// attain its lattice minimum.
pub fn disordered_scan_bound(params: &ModelParams) -> i64 {
    let q2 = params.wavenumber_scale().powi(2);
    let vertex = -params.gamma0 / (2.0 * params.gamma2 * q2);
    // (k, 0, …) realizes every perfect square, so the first one past the
    // vertex bounds the minimizer
    let past_vertex = vertex.max(0.0).sqrt().ceil().powi(2);
    let root = parabola_roots(params).map_or(0.0, |(_, zp)| zp.max(0.0).ceil());
    root.max(past_vertex) as i64
}

/// `max(1, ⌈(-Γ₀/Γ₂)(L/2π)²⌉)`: beyond it the shell polynomial is positive.
pub fn ordered_scan_bound(params: &ModelParams) -> i64 {
    let z = -params.gamma0 / params.gamma2 / params.wavenumber_scale().powi(2);
    z.ceil().max(1.0) as i64
}

/// Linear stability of the disordered state `V = 0`. With `bound = Some(N)`
/// only modes with `|ℓ_i| <= N` are considered.
pub fn classify_disordered(
    params: &ModelParams,
    bound: Option<usize>,
) -> Result<RegimeVerdict, AnalysisError> {
    params.validate()?;
    let (g0, g2, a) = (params.gamma0, params.gamma2, params.alpha);
    let n = params.dim;
    let q2 = params.wavenumber_scale().powi(2);
    let curve = 4.0 * a * g2 - g0 * g0;
    let curve_tol = EQUALITY_TOL * (g0 * g0).max(4.0 * (a * g2).abs()).max(f64::MIN_POSITIVE);

    let modes: Vec<Mode> = modes_in_ball(n, disordered_scan_bound(params))
        .into_iter()
        .filter(|m| in_cube(m, bound))
        .collect();
    let (min_sym, argmin) = modes
        .iter()
        .map(|m| (symbol_disordered(params, m), *m))
        .fold((f64::INFINITY, [0; 3]), |acc, x| if x.0 < acc.0 { x } else { acc });
    let witness_of = |m: &Mode| {
        let sym = symbol_general(params, &Equilibrium::Disordered, m);
        make_witness(&sym, &first_perp(n, m))
    };

    let near_boundary = (g0 >= -BOUNDARY_TOL && a.abs() <= BOUNDARY_TOL)
        || (g0 <= BOUNDARY_TOL && curve.abs() <= BOUNDARY_TOL * (g0 * g0).max(1.0))
        || min_sym.abs() <= BOUNDARY_TOL;

    let mut v = if g0 >= 0.0 && a > 0.0 {
        RegimeVerdict::new(
            Regime::ExpStable,
            "disordered:gamma0>=0,alpha>0",
            format!("σ >= α = {a} on every mode"),
        )
    } else if g0 >= 0.0 && a == 0.0 {
        RegimeVerdict::new(
            Regime::Stable,
            "disordered:gamma0>=0,alpha=0",
            "σ >= 0 with σ(0) = 0".into(),
        )
    } else if g0 < 0.0 && curve.abs() <= curve_tol {
        let z = -g0 / (2.0 * g2 * q2);
        let hit = modes.iter().find(|m| {
            let k = norm_sq(m) as f64;
            (k - z).abs() <= EQUALITY_TOL * z.max(1.0)
        });
        match hit {
            Some(m) => RegimeVerdict::new(
                Regime::Stable,
                "disordered:equality,attained",
                format!("4α = Γ₀²/Γ₂ and σ vanishes on the shell |ℓ|² = {}", norm_sq(m)),
            ),
            None => RegimeVerdict::new(
                Regime::ExpStable,
                "disordered:equality,unattained",
                format!("4α = Γ₀²/Γ₂ and no lattice mode has |ℓ|² = {z}"),
            ),
        }
    } else if g0 < 0.0 && curve > 0.0 {
        let delta = a - g0 * g0 / (4.0 * g2);
        RegimeVerdict::new(
            Regime::ExpStable,
            "disordered:gamma0<0,4alpha>gamma0^2/gamma2",
            format!("σ >= α - Γ₀²/(4Γ₂) = {delta} > 0"),
        )
    } else if min_sym < 0.0 {
        let w = witness_of(&argmin);
        let tied: Vec<Witness> = modes
            .iter()
            .filter(|m| symbol_disordered(params, m) <= min_sym + EQUALITY_TOL * min_sym.abs().max(1.0))
            .map(witness_of)
            .collect();
        let mut v = RegimeVerdict::new(
            Regime::ExpUnstable,
            "semigroup:negative-symbol",
            format!("σ(ℓ₀) = {min_sym} < 0 at |ℓ₀|² = {}", w.norm_sq),
        );
        v.witness = best_witness(tied);
        v
    } else if min_sym > 0.0 {
        RegimeVerdict::new(
            Regime::ExpStable,
            "semigroup:positive-symbol",
            format!("the lattice avoids the band where σ < 0; min σ = {min_sym}"),
        )
    } else {
        RegimeVerdict::new(
            Regime::Stable,
            "semigroup:nonnegative-symbol",
            "min σ over the lattice is exactly 0".into(),
        )
    };
    v.min_symbol = Some(min_sym);
    v.near_boundary = near_boundary;
    Ok(v)
}

fn ordered_velocity(params: &ModelParams, v: &Vec3) -> Result<Vec3, AnalysisError> {
    params.validate()?;
    let eq = Equilibrium::Ordered { v: *v };
    eq.validate(params)?;
    Ok(*v)
}

/// Linear stability of the polar state `V`.
pub fn classify_ordered(
    params: &ModelParams,
    v: &Vec3,
    bound: Option<usize>,
) -> Result<RegimeVerdict, AnalysisError> {
    let v = ordered_velocity(params, v)?;
    let n = params.dim;
    if params.gamma0 >= 0.0 {
        let mut out = RegimeVerdict::new(
            Regime::Stable,
            "ordered:gamma0>=0",
            "Re σ is positive semidefinite on every mode".into(),
        );
        out.near_boundary = params.gamma0 <= BOUNDARY_TOL;
        return Ok(out);
    }
    let q2 = params.wavenumber_scale().powi(2);
    let eq = Equilibrium::Ordered { v };
    let threshold = if n == 2 { 2.0 * params.alpha } else { 0.0 };
    let mut cands = Vec::new();
    let mut satisfied = 0;
    for m in modes_in_ball(n, ordered_scan_bound(params)) {
        if norm_sq(&m) == 0 || !in_cube(&m, bound) {
            continue;
        }
        let lhs = params.gamma2 * q2 * norm_sq(&m) as f64 + params.gamma0;
        if lhs >= threshold {
            continue;
        }
        satisfied += 1;
        let sym = symbol_general(params, &eq, &m);
        let x = if n == 2 {
            first_perp(2, &m)
        } else {
            let l = mode_to_vec(&m);
            let c = [v[1] * l[2] - v[2] * l[1], v[2] * l[0] - v[0] * l[2], v[0] * l[1] - v[1] * l[0]];
            let len = dot(&c, &c).sqrt();
            if len > 1e-12 * dot(&v, &v).sqrt() * dot(&l, &l).sqrt() {
                [c[0] / len, c[1] / len, c[2] / len]
            } else {
                sym.min_restricted_real().1
            }
        };
        let w = make_witness(&sym, &x);
        if w.quadratic_form < 0.0 {
            cands.push(w);
        }
    }
    let near = {
        let bnd = ordered_scan_bound(params);
        modes_in_ball(n, bnd).iter().any(|m| {
            norm_sq(m) > 0 && {
                let lhs = params.gamma2 * q2 * norm_sq(m) as f64 + params.gamma0;
                (lhs - threshold).abs() <= BOUNDARY_TOL * threshold.abs().max(1.0)
            }
        })
    };
    let mut out = match best_witness(cands) {
        Some(w) => {
            let mut out = RegimeVerdict::new(
                Regime::ExpUnstable,
                if n == 2 { "ordered:shell<2alpha" } else { "ordered:shell<0" },
                format!(
                    "xᵀ Re σ(ℓ₀) x = {} < 0 at |ℓ₀|² = {}",
                    w.quadratic_form, w.norm_sq
                ),
            );
            out.witness = Some(w);
            out
        }
        None => RegimeVerdict::new(
            Regime::Inconclusive,
            "ordered:no-witness",
            format!(
                "{satisfied} modes satisfy the shell condition but none gave a negative quadratic form"
            ),
        ),
    };
    out.near_boundary = near;
    Ok(out)
}

/// Normal hyperbolicity of the polar manifold at `V`: every shell value
/// `Γ₂(2π/L)⁴|ℓ|⁴ + Γ₀(2π/L)²|ℓ|²`, `ℓ ≠ 0`, lies outside `[2α, 0]`, and
/// some mode is linearly unstable.
pub fn check_normal_hyperbolicity(
    params: &ModelParams,
    v: &Vec3,
) -> Result<RegimeVerdict, AnalysisError> {
    let v = ordered_velocity(params, v)?;
    if params.gamma0 >= 0.0 {
        return Err(AnalysisError::Precondition(format!(
            "normal hyperbolicity needs gamma0 < 0, got {}",
            params.gamma0
        )));
    }
    let z = -params.gamma0 / params.gamma2 / params.wavenumber_scale().powi(2);
    let zmax = (z * (1.0 + EQUALITY_TOL)).floor() as i64;
    let lo = 2.0 * params.alpha;
    let tol = EQUALITY_TOL * lo.abs().max(1.0);
    let mut near = false;
    for (k, rep) in crate::lattice::shells(params.dim, zmax) {
        if k == 0 {
            continue;
        }
        let s = params.shell_value(k as f64);
        near |= (s - lo).abs() <= BOUNDARY_TOL || s.abs() <= BOUNDARY_TOL;
        if s >= lo - tol && s <= tol {
            let mut out = RegimeVerdict::new(
                Regime::Inconclusive,
                "hyperbolicity:shell-in-band",
                format!(
                    "shell |ℓ|² = {k} (e.g. ℓ = {:?}) has value {s} in [{lo}, 0]",
                    &rep[..params.dim]
                ),
            );
            out.near_boundary = near;
            return Ok(out);
        }
    }
    let linear = classify_ordered(params, &v, None)?;
    let mut out = match linear.regime {
        Regime::ExpUnstable => {
            let mut out = RegimeVerdict::new(
                Regime::NormallyHyperbolic,
                "hyperbolicity",
                format!(
                    "no shell value in [{lo}, 0] for 0 < |ℓ|² <= {zmax}; {}",
                    linear.details
                ),
            );
            out.witness = linear.witness;
            out
        }
        _ => RegimeVerdict::new(
            Regime::Inconclusive,
            "hyperbolicity:no-unstable-mode",
            format!("shell condition holds but no unstable witness: {}", linear.details),
        ),
    };
    out.near_boundary = near || linear.near_boundary;
    Ok(out)
}

/// Nonlinear verdict for the polar manifold: normally stable for `Γ₀ >= 0`,
/// otherwise the hyperbolicity check.
pub fn classify_polar_manifold(
    params: &ModelParams,
    v: &Vec3,
) -> Result<RegimeVerdict, AnalysisError> {
    let v = ordered_velocity(params, v)?;
    if params.gamma0 >= 0.0 {
        let mut out = RegimeVerdict::new(
            Regime::NormallyStable,
            "normal-stability:gamma0>=0",
            "kernel = tangent space, semisimple zero, rest of the spectrum in Re > 0".into(),
        );
        out.near_boundary = params.gamma0 <= BOUNDARY_TOL;
        return Ok(out);
    }
    check_normal_hyperbolicity(params, &v)
}

/// Orthonormal basis of the kernel of the linearization at `V`: constant
/// fields perpendicular to `V`.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub fields: Vec<SpectralField>,
    /// `max |σ(ℓ) û(ℓ)|` over basis fields and modes.
    pub residual: f64,
}

pub fn kernel_basis(
    params: &ModelParams,
    v: &Vec3,
    lattice: &Lattice,
) -> Result<KernelBasis, AnalysisError> {
    let v = ordered_velocity(params, v)?;
    let n = params.dim;
    let b = linalg::complement_basis(n, &v);
    let eq = Equilibrium::Ordered { v };
    let mut fields = Vec::new();
    let mut residual: f64 = 0.0;
    for c in 0..b.ncols() {
        let col: Vec<f64> = b.column(c).iter().copied().collect();
        let u = SpectralField::constant(*lattice, &col);
        for (idx, mode) in lattice.modes().enumerate() {
            let s = symbol_general(params, &eq, &mode).matrix();
            let x = DVector::from_column_slice(u.at(idx));
            residual = residual.max((s * x).camax());
        }
        fields.push(u);
    }
    Ok(KernelBasis { fields, residual })
}

/// `S u = (I - VVᵀ/|V|²) û(0)` as a constant field.
pub fn semisimplicity_projection(u: &SpectralField, v: &Vec3) -> SpectralField {
    let n = u.ncomp();
    let mean = u.mean();
    let vv = dot(v, v);
    let along: f64 = (0..n).map(|i| mean[i] * v[i]).sum::<f64>() / vv;
    let out: Vec<f64> = (0..n).map(|i| mean[i] - along * v[i]).collect();
    SpectralField::constant(*u.lattice(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::inner_product;
    use crate::params::fixtures::{disordered, hyperbolic_example};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn polar(p: &ModelParams, dir: &[f64]) -> Vec3 {
        Equilibrium::ordered(p, dir).unwrap().velocity()
    }

    #[test]
    fn disordered_examples() {
        let v = classify_disordered(&disordered(1.0, 1.0, 1.0), None).unwrap();
        assert_eq!(v.regime, Regime::ExpStable);
        let v = classify_disordered(&disordered(-5.0, 1.0, 4.0), None).unwrap();
        assert_eq!(v.regime, Regime::ExpUnstable);
        let w = v.witness.unwrap();
        assert_eq!(w.norm_sq, 2);
        assert!((w.quadratic_form + 2.0).abs() < 1e-12);
        assert!((w.growth_rate - 2.0).abs() < 1e-12);
        let v = classify_disordered(&disordered(-4.0, 1.0, 4.0), None).unwrap();
        assert_eq!(v.regime, Regime::Stable);
        assert!(v.near_boundary);
        let v = classify_disordered(&disordered(0.5, 1.0, 0.0), None).unwrap();
        assert_eq!(v.regime, Regime::Stable);
        let v = classify_disordered(&disordered(-1.0, 1.0, 0.3), None).unwrap();
        assert_eq!(v.regime, Regime::ExpStable);
        assert!(v.min_symbol.unwrap() >= 0.3 - 0.25);
    }

    #[test]
    fn equality_case_with_unattainable_shell() {
        // minimum of σ at |ℓ|² = 3, which is not a sum of two squares
        let p = disordered(-6.0, 1.0, 9.0);
        let v = classify_disordered(&p, None).unwrap();
        assert_eq!(v.regime, Regime::ExpStable);
        let mut p3 = p;
        p3.dim = 3;
        assert_eq!(classify_disordered(&p3, None).unwrap().regime, Regime::Stable);
    }

    #[test]
    fn negative_alpha_with_nonnegative_gamma0_is_unstable_at_the_mean() {
        let v = classify_disordered(&disordered(1.0, 1.0, -0.5), None).unwrap();
        assert_eq!(v.regime, Regime::ExpUnstable);
        assert_eq!(v.witness.unwrap().norm_sq, 0);
    }

    #[test]
    fn lattice_gap_gives_exponential_stability() {
        // band of negative σ strictly between two shells
        let mut p = disordered(-5.0, 1.0, 6.2);
        p.length = 2.0 * std::f64::consts::PI;
        let (zm, zp) = parabola_roots(&p).unwrap();
        assert!(zm > 2.0 && zp < 3.0);
        let v = classify_disordered(&p, None).unwrap();
        assert_eq!(v.regime, Regime::ExpStable);
        assert_eq!(v.rule, "semigroup:positive-symbol");
    }

    #[test]
    fn ordered_examples() {
        for n in [2, 3] {
            let p = hyperbolic_example(n);
            let v = polar(&p, &[1.0, 0.0, 0.0][..n]);
            let out = classify_ordered(&p, &v, None).unwrap();
            assert_eq!(out.regime, Regime::ExpUnstable);
            let w = out.witness.unwrap();
            assert_eq!(w.norm_sq, 1);
            assert!((w.quadratic_form + 1.0).abs() < 1e-12);
            assert!(w.direction.iter().zip(&w.mode).map(|(a, b)| a * *b as f64).sum::<f64>().abs() < 1e-15);
            let h = check_normal_hyperbolicity(&p, &v).unwrap();
            assert_eq!(h.regime, Regime::NormallyHyperbolic);
            assert_eq!(h.witness.unwrap().norm_sq, 1);
        }
        let mut p = hyperbolic_example(2);
        p.gamma0 = 0.0;
        let v = polar(&p, &[0.0, 1.0]);
        assert_eq!(classify_ordered(&p, &v, None).unwrap().regime, Regime::Stable);
        assert!(check_normal_hyperbolicity(&p, &v).is_err());
        assert_eq!(classify_polar_manifold(&p, &v).unwrap().regime, Regime::NormallyStable);
    }

    #[test]
    fn violating_shell_is_reported() {
        let mut p = hyperbolic_example(2);
        p.gamma2 = 1.0;
        p.gamma0 = -1.0;
        p.alpha = -10.0;
        let v = polar(&p, &[1.0, 0.0]);
        let h = check_normal_hyperbolicity(&p, &v).unwrap();
        assert_eq!(h.regime, Regime::Inconclusive);
        assert!(h.details.contains("|ℓ|² = 1"));
    }

    #[test]
    fn ordered_rejects_nonpositive_speed() {
        let p = disordered(-1.0, 1.0, 0.5);
        assert!(classify_ordered(&p, &[0.1, 0.0, 0.0], None).is_err());
    }

    #[test]
    fn scan_bounds_are_sound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut p = disordered(rng.random_range(-6.0..2.0), rng.random_range(0.2..4.0), rng.random_range(-2.0..4.0));
            p.length = rng.random_range(3.0..12.0);
            let bd = disordered_scan_bound(&p);
            let bo = ordered_scan_bound(&p);
            for _ in 0..100 {
                let z = bd + rng.random_range(1..500);
                let s = p.shell_value(z as f64) + p.alpha;
                if parabola_roots(&p).is_some() {
                    assert!(s > 0.0, "{p:?} z={z}");
                }
                let z = bo + rng.random_range(1..500);
                assert!(p.shell_value(z as f64) > 0.0);
            }
        }
    }

    #[test]
    fn kernel_and_projection() {
        for n in [2, 3] {
            let p = hyperbolic_example(n);
            let v = polar(&p, &[0.3, -1.0, 0.4][..n]);
            let lat = Lattice::new(n, 2, p.length).unwrap();
            let k = kernel_basis(&p, &v, &lat).unwrap();
            assert_eq!(k.fields.len(), n - 1);
            assert!(k.residual <= 1e-12);
            for f in &k.fields {
                let s = semisimplicity_projection(f, &v);
                assert!(s.sub(f).max_abs() < 1e-15);
            }
            let vc = SpectralField::constant(lat, &v[..n]);
            assert!(semisimplicity_projection(&vc, &v).max_abs() < 1e-15);
        }
    }

    fn random_field(lat: Lattice, seed: u64) -> SpectralField {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut u = SpectralField::zeros_vector(lat);
        for z in u.coeffs_mut() {
            *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        u.symmetrize();
        u
    }

    proptest! {
        #[test]
        fn projection_is_orthogonal_idempotent(seed in 0u64..1000) {
            let p = hyperbolic_example(3);
            let v = polar(&p, &[1.0, 2.0, 0.5]);
            let lat = Lattice::new(3, 1, p.length).unwrap();
            let u = random_field(lat, seed);
            let w = random_field(lat, seed + 5000);
            let su = semisimplicity_projection(&u, &v);
            let ssu = semisimplicity_projection(&su, &v);
            prop_assert!(ssu.sub(&su).max_abs() < 1e-12);
            let rest = w.sub(&semisimplicity_projection(&w, &v));
            prop_assert!(inner_product(&su, &rest).unwrap().norm() < 1e-12);
            let a = inner_product(&su, &w).unwrap();
            let b = inner_product(&u, &semisimplicity_projection(&w, &v)).unwrap();
            prop_assert!((a - b).norm() < 1e-12);
        }

        #[test]
        fn disordered_classification_is_total(g0 in -8.0f64..8.0, a in -4.0f64..4.0, g2 in 0.1f64..5.0) {
            let v = classify_disordered(&disordered(g0, g2, a), None).unwrap();
            if let Some(w) = &v.witness {
                prop_assert!(w.quadratic_form < 0.0);
                prop_assert_eq!(v.regime, Regime::ExpUnstable);
            }
            if v.regime == Regime::ExpUnstable {
                prop_assert!(v.witness.is_some());
            }
        }
    }
}
