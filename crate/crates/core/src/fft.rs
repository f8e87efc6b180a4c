//! Multi-dimensional complex FFT on a cubic row-major grid, built from
//! `rustfft` line transforms.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct GridFft {
    dim: usize,
    side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    lines: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl GridFft {
    pub fn new(dim: usize, side: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(side);
        let inverse = planner.plan_fft_inverse(side);
        let len = side.pow(dim as u32);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            dim,
            side,
            forward,
            inverse,
            lines: vec![Complex64::new(0.0, 0.0); len],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.side == 0
    }

    /// Unnormalized forward transform (`e^{-2πi k x}` kernel), in place.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// Unnormalized inverse transform (`e^{+2πi k x}` kernel), in place.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&mut self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len(), "grid buffer has wrong length");
        let plan = if inverse { &self.inverse } else { &self.forward };
        let side = self.side;
        for axis in 0..self.dim {
            let stride = side.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                plan.process_with_scratch(data, &mut self.scratch);
                continue;
            }
            // gather every line along `axis` into contiguous storage
            let outer = data.len() / (side * stride);
            let mut line = 0;
            for o in 0..outer {
                for s in 0..stride {
                    let base = o * side * stride + s;
                    for j in 0..side {
                        self.lines[line * side + j] = data[base + j * stride];
                    }
                    line += 1;
                }
            }
            plan.process_with_scratch(&mut self.lines, &mut self.scratch);
            let mut line = 0;
            for o in 0..outer {
                for s in 0..stride {
                    let base = o * side * stride + s;
                    for j in 0..side {
                        data[base + j * stride] = self.lines[line * side + j];
                    }
                    line += 1;
                }
            }
        }
    }
}

/// Position of wavenumber component `k` in an FFT axis of length `side`.
pub fn wrap(k: i64, side: usize) -> usize {
    k.rem_euclid(side as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(dim: usize, side: usize, data: &[Complex64]) -> Vec<Complex64> {
        let len = side.pow(dim as u32);
        let coords = |mut i: usize| {
            let mut c = vec![0usize; dim];
            for d in (0..dim).rev() {
                c[d] = i % side;
                i /= side;
            }
            c
        };
        (0..len)
            .map(|k| {
                let kc = coords(k);
                (0..len)
                    .map(|x| {
                        let xc = coords(x);
                        let phase: f64 = kc.iter().zip(&xc).map(|(a, b)| (a * b) as f64).sum();
                        let ang = -2.0 * std::f64::consts::PI * phase / side as f64;
                        data[x] * Complex64::from_polar(1.0, ang)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_in_3d() {
        let side = 5;
        let data: Vec<Complex64> = (0..side * side * side)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let expected = naive_dft(3, side, &data);
        let mut got = data.clone();
        GridFft::new(3, side).forward(&mut got);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-11);
        }
        let mut back = got;
        GridFft::new(3, side).inverse(&mut back);
        for (a, b) in back.iter().zip(&data) {
            assert!((a / (side.pow(3) as f64) - b).norm() < 1e-13);
        }
    }
}
