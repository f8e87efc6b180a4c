//! Truncated Fourier lattice `{-N, ..., N}^n` on the periodic box `[0, L]^n`.

use std::f64::consts::PI;

use crate::field::SpectralError;

/// Integer wave vector. Entries beyond the lattice dimension are zero, so
/// two-dimensional modes embed in three dimensions without special cases.
pub type Mode = [i64; 3];

/// Real geometric vector, padded with zeros past the lattice dimension.
pub type Vec3 = [f64; 3];

pub fn norm_sq(mode: &Mode) -> i64 {
    mode.iter().map(|k| k * k).sum()
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mode_to_vec(mode: &Mode) -> Vec3 {
    [mode[0] as f64, mode[1] as f64, mode[2] as f64]
}

pub fn neg(mode: &Mode) -> Mode {
    [-mode[0], -mode[1], -mode[2]]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    dim: usize,
    radius: usize,
    length: f64,
}

impl Lattice {
    pub fn new(dim: usize, radius: usize, length: f64) -> Result<Self, SpectralError> {
        if dim != 2 && dim != 3 {
            return Err(SpectralError::InvalidLattice(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if radius < 1 {
            return Err(SpectralError::InvalidLattice(
                "truncation radius must be at least 1".into(),
            ));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(SpectralError::InvalidLattice(format!(
                "box length must be positive, got {length}"
            )));
        }
        Ok(Self { dim, radius, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation radius `N`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Points per axis of the collocation grid, `2N + 1`.
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn num_modes(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    /// `2π / L`.
    pub fn wavenumber_scale(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Lexicographic position of `mode`, first component slowest.
    pub fn index(&self, mode: &Mode) -> Option<usize> {
        let r = self.radius as i64;
        let side = self.side();
        let mut idx = 0usize;
        for (d, &k) in mode.iter().enumerate() {
            if d >= self.dim {
                if k != 0 {
                    return None;
                }
                continue;
            }
            if k < -r || k > r {
                return None;
            }
            idx = idx * side + (k + r) as usize;
        }
        Some(idx)
    }

    pub fn mode(&self, mut idx: usize) -> Mode {
        let side = self.side();
        let r = self.radius as i64;
        let mut mode = [0i64; 3];
        for d in (0..self.dim).rev() {
            mode[d] = (idx % side) as i64 - r;
            idx /= side;
        }
        mode
    }

    /// Index of `-ℓ`. The lattice is symmetric and ordered lexicographically,
    /// so negation reverses the order.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        self.num_modes() - 1 - idx
    }

    pub fn zero_index(&self) -> usize {
        (self.num_modes() - 1) / 2
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.num_modes()).map(move |i| self.mode(i))
    }

    pub fn same_shape(&self, other: &Lattice) -> bool {
        self.dim == other.dim
            && self.radius == other.radius
            && (self.length - other.length).abs() <= 1e-14 * self.length
    }
}

/// All modes of `Z^dim` with `|ℓ|² <= max_norm_sq`, in lexicographic order.
/// Used by the regime scans, which are posed on the whole lattice rather
/// than on a truncation.
pub fn modes_in_ball(dim: usize, max_norm_sq: i64) -> Vec<Mode> {
    if max_norm_sq < 0 {
        return Vec::new();
    }
    let r = (max_norm_sq as f64).sqrt().floor() as i64 + 1;
    let mut out = Vec::new();
    let range = |d: usize| if d < dim { -r..=r } else { 0..=0 };
    for a in range(0) {
        for b in range(1) {
            for c in range(2) {
                let m = [a, b, c];
                if norm_sq(&m) <= max_norm_sq {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Attainable values of `|ℓ|²` on `Z^dim` up to `max_norm_sq`, ascending,
/// each with one representative (the lexicographically smallest).
pub fn shells(dim: usize, max_norm_sq: i64) -> Vec<(i64, Mode)> {
    let mut found: std::collections::BTreeMap<i64, Mode> = Default::default();
    for m in modes_in_ball(dim, max_norm_sq) {
        found.entry(norm_sq(&m)).or_insert(m);
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_conjugate() {
        let lat = Lattice::new(3, 2, 1.0).unwrap();
        for i in 0..lat.num_modes() {
            let m = lat.mode(i);
            assert_eq!(lat.index(&m), Some(i));
            assert_eq!(lat.index(&neg(&m)), Some(lat.conjugate_index(i)));
        }
        assert_eq!(lat.mode(lat.zero_index()), [0, 0, 0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Lattice::new(1, 2, 1.0).is_err());
        assert!(Lattice::new(2, 0, 1.0).is_err());
        assert!(Lattice::new(2, 2, -1.0).is_err());
    }

    #[test]
    fn seven_is_not_a_planar_shell() {
        let s: Vec<i64> = shells(2, 10).into_iter().map(|(z, _)| z).collect();
        assert_eq!(s, vec![0, 1, 2, 4, 5, 8, 9, 10]);
        let s3: Vec<i64> = shells(3, 8).into_iter().map(|(z, _)| z).collect();
        assert_eq!(s3, vec![0, 1, 2, 3, 4, 5, 6, 8]);
    }
}
