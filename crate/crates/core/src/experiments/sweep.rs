use std::io::Write;

use serde::Serialize;

use crate::params::{Equilibrium, ModelParams};
use crate::stability::{classify_disordered, classify_ordered, classify_polar_manifold, AnalysisError, Regime};

/// A rectangular `points × points` grid over `(Γ₀, α)` with the remaining
/// parameters fixed by `base`.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub direction: Vec<f64>,
    pub gamma0: (f64, f64),
    pub alpha: (f64, f64),
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma0: f64,
    pub alpha: f64,
    pub disordered: Regime,
    pub disordered_boundary: bool,
    /// `None` where no polar state exists (`α >= 0`).
    pub ordered: Option<Regime>,
    pub ordered_boundary: bool,
    pub manifold: Option<Regime>,
}

fn grid_value(range: (f64, f64), i: usize, points: usize) -> f64 {
    if points == 1 {
        return range.0;
    }
    let m = (points - 1) as f64;
    (range.0 * (m - i as f64) + range.1 * i as f64) / m
}

/// Classifies every cell; rows run over `α` slowest.
pub fn sweep_phase_diagram(spec: &SweepSpec) -> Result<Vec<SweepRow>, AnalysisError> {
    let mut rows = Vec::with_capacity(spec.points * spec.points);
    for i in 0..spec.points {
        let alpha = grid_value(spec.alpha, i, spec.points);
        for j in 0..spec.points {
            let gamma0 = grid_value(spec.gamma0, j, spec.points);
            let p = ModelParams {
                alpha,
                gamma0,
                ..spec.base
            };
            let d = classify_disordered(&p, None)?;
            let (ordered, ordered_boundary, manifold) = if alpha < 0.0 {
                let v = Equilibrium::ordered(&p, &spec.direction)?.velocity();
                let o = classify_ordered(&p, &v, None)?;
                let m = classify_polar_manifold(&p, &v)?;
                (Some(o.regime), o.near_boundary || m.near_boundary, Some(m.regime))
            } else {
                (None, alpha.abs() <= crate::stability::BOUNDARY_TOL, None)
            };
            rows.push(SweepRow {
                gamma0,
                alpha,
                disordered: d.regime,
                disordered_boundary: d.near_boundary,
                ordered,
                ordered_boundary,
                manifold,
            });
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv(w: &mut impl Write, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "gamma0,alpha,disordered,disordered_boundary,ordered,ordered_boundary,manifold")?;
    let name = |r: Option<Regime>| r.map_or("n/a".to_string(), |r| r.to_string());
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.gamma0,
            r.alpha,
            r.disordered,
            r.disordered_boundary,
            name(r.ordered),
            r.ordered_boundary,
            name(r.manifold)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::fixtures::disordered;

    #[test]
    fn grid_hits_the_printed_cells() {
        let spec = SweepSpec {
            base: disordered(0.0, 1.0, 0.0),
            direction: vec![1.0, 0.0],
            gamma0: (-5.0, 5.0),
            alpha: (-2.0, 2.0),
            points: 41,
        };
        let rows = sweep_phase_diagram(&spec).unwrap();
        assert_eq!(rows.len(), 41 * 41);
        let find = |g: f64, a: f64| rows.iter().find(|r| r.gamma0 == g && r.alpha == a).unwrap();
        assert_eq!(find(1.0, 1.0).disordered, Regime::ExpStable);
        assert_eq!(find(-1.0, 0.3).disordered, Regime::ExpStable);
        let eq = find(-2.0, 1.0);
        assert_eq!(eq.disordered, Regime::Stable);
        assert!(eq.disordered_boundary);
        assert!(!find(1.0, 1.0).disordered_boundary);
        let mut out = Vec::new();
        write_sweep_csv(&mut out, &rows).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 41 * 41 + 1);
    }
}
