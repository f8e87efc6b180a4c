//! Binary snapshots of spectral fields and CSV export of collocation fields.
//!
//! Snapshot layout, all little-endian:
//!
//! | bytes | content                                  |
//! |-------|------------------------------------------|
//! | 4     | magic `ACTF`                             |
//! | 4     | format version (`u32`, currently 1)      |
//! | 4     | dimension `n` (`u32`)                    |
//! | 4     | truncation radius `N` (`u32`)            |
//! | 8     | box length `L` (`f64`)                   |
//! | ...   | `(2N+1)^n · n` pairs of `f64` (re, im)   |
//!
//! Modes are ordered lexicographically in `(ℓ₁, …, ℓ_n)` from `-N` to `N`,
//! first index slowest; the `n` components of each mode are contiguous.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::field::{grid_point, PhysicalField, SpectralError, SpectralField};
use crate::lattice::Lattice;

pub const MAGIC: &[u8; 4] = b"ACTF";
pub const VERSION: u32 = 1;

pub fn write_snapshot(w: &mut impl Write, u: &SpectralField) -> Result<(), SpectralError> {
    let lat = u.lattice();
    if u.ncomp() != lat.dim() {
        return Err(SpectralError::Format(
            "snapshots store vector fields with n components".into(),
        ));
    }
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(lat.dim() as u32).to_le_bytes())?;
    w.write_all(&(lat.radius() as u32).to_le_bytes())?;
    w.write_all(&lat.length().to_le_bytes())?;
    let mut buf = Vec::with_capacity(u.coeffs().len() * 16);
    for z in u.coeffs() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot(r: &mut impl Read) -> Result<SpectralField, SpectralError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SpectralError::Format("bad magic".into()));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(SpectralError::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(r)? as usize;
    let radius = read_u32(r)? as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let length = f64::from_le_bytes(b8);
    let lattice = Lattice::new(dim, radius, length)?;
    let count = lattice.num_modes() * dim;
    let mut raw = vec![0u8; count * 16];
    r.read_exact(&mut raw)?;
    let data = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    SpectralField::from_coeffs(lattice, dim, data)
}

fn read_u32(r: &mut impl Read) -> Result<u32, SpectralError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Writes `x1..xn,u1..un` rows, one per grid point.
pub fn write_physical_csv(w: &mut impl Write, f: &PhysicalField) -> std::io::Result<()> {
    let lat = f.lattice();
    let n = lat.dim();
    let header: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=f.ncomp()).map(|i| format!("u{i}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for p in 0..lat.num_modes() {
        let x = grid_point(lat, p);
        let row: Vec<String> = x[..n]
            .iter()
            .chain(f.at(p))
            .map(|v| format!("{v:.17e}"))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
