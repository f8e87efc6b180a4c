//! Seeded random initial perturbations.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::field::{project_in_place, sobolev_norm, SpectralField};
use crate::lattice::{norm_sq, Lattice};

/// Divergence-free real field with Gaussian coefficients of amplitude
/// `(1 + |ℓ|²)⁻²`, every mode populated, rescaled to `‖u‖_{H²} = h2_norm`.
pub fn random_perturbation(lattice: Lattice, seed: u64, h2_norm: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lattice.dim();
    let mut u = SpectralField::zeros_vector(lattice);
    let nm = lattice.num_modes();
    for (idx, mode) in lattice.modes().enumerate() {
        let cidx = nm - 1 - idx;
        if cidx < idx {
            continue;
        }
        let amp = (1.0 + norm_sq(&mode) as f64).powi(-2);
        let vals: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = if cidx == idx { 0.0 } else { StandardNormal.sample(&mut rng) };
                Complex64::new(re, im) * amp
            })
            .collect();
        u.set_mode(&mode, &vals);
    }
    project_in_place(&mut u);
    let norm = sobolev_norm(&u, 2.0).expect("order 2 is valid");
    if norm > 0.0 {
        u = u.scale(h2_norm / norm);
    }
    u
}
